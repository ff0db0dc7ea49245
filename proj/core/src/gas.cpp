#include "valveflow/gas.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "valveflow/error.hpp"
#include "valveflow/roots.hpp"

namespace valveflow {

namespace {

constexpr double kSonicTol = 1e-9;

// Velocity offset of FL_1 / BL_2 relative to the origin velocity:
// a ln(rho/rho_o) below rho_o (rarefaction), a (sqrt(r) - 1/sqrt(r)) above (shock).
double offset_rs(double rho, double rho_o, double a) {
  if (rho <= rho_o) return a * std::log(rho / rho_o);
  const double s = std::sqrt(rho / rho_o);
  return a * (s - 1.0 / s);
}

double offset_rs_slope(double rho, double rho_o, double a) {
  if (rho <= rho_o) return a / rho;
  const double s = std::sqrt(rho / rho_o);
  return 0.5 * a / rho * (s + 1.0 / s);
}

// Offset of FL_2 / BL_1: shock below rho_o, rarefaction from rho_o on.
double offset_sr(double rho, double rho_o, double a) {
  if (rho >= rho_o) return a * std::log(rho / rho_o);
  const double s = std::sqrt(rho / rho_o);
  return a * (s - 1.0 / s);
}

double sign_of_family(int family) { return family == 1 ? -1.0 : 1.0; }

void check_family(int family) {
  if (family != 1 && family != 2) {
    throw OutOfRange("wave family must be 1 or 2, got " + std::to_string(family));
  }
}

}  // namespace

GasLaw::GasLaw(double a) : a_(a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw OutOfRange("sound speed must be positive and finite");
  }
}

State::State(double rho_, double q_) : rho(rho_), q(q_) {
  if (!(rho_ > 0.0) || !std::isfinite(rho_) || !std::isfinite(q_)) {
    throw OutOfRange("state must have finite rho > 0 (got rho=" + std::to_string(rho_) +
                     ", q=" + std::to_string(q_) + ")");
  }
}

SonicClass classify_sonic(const State& u, const GasLaw& law) {
  const double a = law.a();
  const double v = u.v();
  const double gap = std::abs(v) - a;
  Sonic kind = Sonic::Subsonic;
  if (std::abs(gap) <= kSonicTol * a) {
    kind = Sonic::Sonic;
  } else if (gap > 0.0) {
    kind = Sonic::Supersonic;
  }
  return {kind, v / a};
}

std::pair<double, double> eigenvalues(const State& u, const GasLaw& law) {
  const double v = u.v();
  return {v - law.a(), v + law.a()};
}

double characteristic_speed(int family, const State& u, const GasLaw& law) {
  check_family(family);
  return u.v() + sign_of_family(family) * law.a();
}

double shock_curve(int family, const State& origin, double rho, const GasLaw& law) {
  check_family(family);
  const double s = std::sqrt(rho / origin.rho);
  return rho * (origin.v() + sign_of_family(family) * law.a() * (s - 1.0 / s));
}

double rarefaction_curve(int family, const State& origin, double rho, const GasLaw& law) {
  check_family(family);
  return rho * (origin.v() + sign_of_family(family) * law.a() * std::log(rho / origin.rho));
}

double curve_value(const CurveId& id, const State& origin, double rho, const GasLaw& law) {
  return id.branch == Branch::Shock ? shock_curve(id.family, origin, rho, law)
                                    : rarefaction_curve(id.family, origin, rho, law);
}

CurvePoint forward_lax(int family, const State& origin, double rho, const GasLaw& law) {
  check_family(family);
  const double a = law.a();
  if (family == 1) {
    const Branch b = rho <= origin.rho ? Branch::Rarefaction : Branch::Shock;
    return {rho * (origin.v() - offset_rs(rho, origin.rho, a)), b};
  }
  const Branch b = rho >= origin.rho ? Branch::Rarefaction : Branch::Shock;
  return {rho * (origin.v() + offset_sr(rho, origin.rho, a)), b};
}

CurvePoint backward_lax(int family, const State& origin, double rho, const GasLaw& law) {
  check_family(family);
  const double a = law.a();
  if (family == 1) {
    const Branch b = rho >= origin.rho ? Branch::Rarefaction : Branch::Shock;
    return {rho * (origin.v() - offset_sr(rho, origin.rho, a)), b};
  }
  const Branch b = rho <= origin.rho ? Branch::Rarefaction : Branch::Shock;
  return {rho * (origin.v() + offset_rs(rho, origin.rho, a)), b};
}

double forward_lax1_slope(const State& origin, double rho, const GasLaw& law) {
  const double a = law.a();
  return origin.v() - offset_rs(rho, origin.rho, a) - rho * offset_rs_slope(rho, origin.rho, a);
}

double backward_lax2_slope(const State& origin, double rho, const GasLaw& law) {
  const double a = law.a();
  return origin.v() + offset_rs(rho, origin.rho, a) + rho * offset_rs_slope(rho, origin.rho, a);
}

double shock_speed(int family, const State& origin, double rho, const GasLaw& law) {
  check_family(family);
  return origin.v() + sign_of_family(family) * law.a() * std::sqrt(rho / origin.rho);
}

State bar_u(const State& ul, const GasLaw& law) {
  const double a = law.a();
  const double m = ul.v() / a;
  if (m <= 1.0) {
    // Maximum on the rarefaction branch; the maximizer is sonic.
    const double rho = ul.rho * std::exp(m - 1.0);
    return State(rho, a * rho);
  }
  // Supersonic origin: FL_1 increases through u_l and peaks on the shock branch,
  // where d/drho S_1 = 0 gives 3 s^2 - 2 m s - 1 = 0 with s = sqrt(rho/rho_l).
  const double s = (m + std::sqrt(m * m + 3.0)) / 3.0;
  const double rho = ul.rho * s * s;
  return State(rho, shock_curve(1, ul, rho, law));
}

double bar_q(const State& ul, const GasLaw& law) { return bar_u(ul, law).q; }

State tilde_u(const State& ul, const State& ur, const GasLaw& law) {
  if (ul == ur) return ul;
  const double a = law.a();
  const double dv = ul.v() - ur.v();
  // h(y) = v_l - phi(rho; rho_l) - v_r - phi(rho; rho_r), rho = e^y, strictly decreasing.
  auto h = [&](double y) {
    const double rho = std::exp(y);
    return dv - offset_rs(rho, ul.rho, a) - offset_rs(rho, ur.rho, a);
  };
  auto dh = [&](double y) {
    const double rho = std::exp(y);
    return -rho * (offset_rs_slope(rho, ul.rho, a) + offset_rs_slope(rho, ur.rho, a));
  };
  double lo = std::log(std::min(ul.rho, ur.rho));
  double hi = std::log(std::max(ul.rho, ur.rho));
  // Below both densities h = dv - a ln(rho^2 / (rho_l rho_r)) exactly.
  for (int i = 0; h(lo) < 0.0; ++i) {
    lo += std::min(-1.0, h(lo) / (2.0 * a));
    if (i > 200) throw NoConvergence("tilde_u: cannot bracket from below");
  }
  for (int i = 0; h(hi) > 0.0; ++i) {
    hi += std::max(1.0, 2.0 * std::log1p(h(hi) / a));
    if (i > 200) throw NoConvergence("tilde_u: cannot bracket from above");
  }
  const double scale = a + std::abs(ul.v()) + std::abs(ur.v());
  const double y = solve_bracketed(h, dh, lo, hi, scale, "tilde_u");
  const double rho = std::exp(y);
  return State(rho, forward_lax(1, ul, rho, law).q);
}

State hat_u(double q0, const State& ul, const GasLaw& law) {
  const State top = bar_u(ul, law);
  if (q0 == top.q) return top;
  if (q0 > top.q) {
    // Round-off slack around the tangency point.
    if (q0 <= top.q + 1e-12 * std::max(1.0, std::abs(top.q))) return State(top.rho, q0);
    throw OutOfRange("hat_u: q0 = " + std::to_string(q0) + " exceeds q-bar = " +
                     std::to_string(top.q));
  }
  if (q0 == ul.q && ul.rho >= top.rho) return ul;

  // FL_1 is concave and decreasing beyond its maximizer; search in y = ln rho.
  auto f = [&](double y) { return forward_lax(1, ul, std::exp(y), law).q - q0; };
  auto df = [&](double y) {
    const double rho = std::exp(y);
    return rho * forward_lax1_slope(ul, rho, law);
  };
  const double lo = std::log(top.rho);
  double hi = std::log(std::max(top.rho, ul.rho)) + 1.0;
  for (int i = 0; f(hi) > 0.0; ++i) {
    hi += 1.0;
    if (i > 200) throw NoConvergence("hat_u: cannot bracket");
  }
  const double scale = std::max(std::abs(q0), std::abs(top.q));
  const double rho = std::exp(solve_bracketed(f, df, lo, hi, scale, "hat_u"));
  if (q0 == ul.q && std::abs(rho - ul.rho) <= 1e-12 * ul.rho) return ul;
  return State(rho, q0);
}

State check_u(double q0, const State& ur, const GasLaw& law) {
  if (q0 < 0.0) {
    throw OutOfRange("check_u: q0 = " + std::to_string(q0) + " is negative");
  }
  if (q0 == ur.q && ur.v() >= -law.a()) return ur;
  const double a = law.a();
  const double m = ur.v() / a;
  // Minimizer of the convex curve BL_2^{u_r}; the root of interest lies beyond it.
  double rho_min = 0.0;
  if (m >= -1.0) {
    rho_min = ur.rho * std::exp(-m - 1.0);
  } else {
    const double s = (-m + std::sqrt(m * m + 3.0)) / 3.0;
    rho_min = ur.rho * s * s;
  }
  auto f = [&](double y) { return backward_lax(2, ur, std::exp(y), law).q - q0; };
  auto df = [&](double y) {
    const double rho = std::exp(y);
    return rho * backward_lax2_slope(ur, rho, law);
  };
  const double lo = std::log(rho_min);
  double hi = std::log(std::max(rho_min, ur.rho)) + 1.0;
  for (int i = 0; f(hi) < 0.0; ++i) {
    hi += 1.0;
    if (i > 200) throw NoConvergence("check_u: cannot bracket");
  }
  const double scale = std::max({std::abs(q0), a * rho_min, std::abs(ur.q)});
  const double rho = std::exp(solve_bracketed(f, df, lo, hi, scale, "check_u"));
  if (q0 == ur.q && std::abs(rho - ur.rho) <= 1e-12 * ur.rho) return ur;
  return State(rho, q0);
}

State sonic_point_fl2(const State& origin, const GasLaw& law) {
  const double a = law.a();
  const double m = origin.v() / a;
  double rho = 0.0;
  if (m > 1.0) {
    // Shock branch: v_o + a (s - 1/s) = a with s = sqrt(rho / rho_o).
    const double s = (-(m - 1.0) + std::sqrt((m - 1.0) * (m - 1.0) + 4.0)) / 2.0;
    rho = origin.rho * s * s;
  } else {
    rho = origin.rho * std::exp(1.0 - m);
  }
  return State(rho, a * rho);
}

double ring_q(const State& u, const GasLaw& law) {
  const double a = law.a();
  const double v = u.v();
  // v < 0: hat_u(0, u) sits on R_1 at rho e^{v/a}.
  if (v < 0.0) return a * u.rho * std::exp(v / a - 1.0);
  const double w = std::sqrt(v * v + 4.0 * a * a) + v;
  return u.rho / (4.0 * a * std::numbers::e) * w * w;
}

}  // namespace valveflow
