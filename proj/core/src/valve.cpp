#include "valveflow/valve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "valveflow/error.hpp"
#include "valveflow/roots.hpp"

namespace valveflow {

namespace {

constexpr double kBoundaryBand = 1e-12;

// Crossings of q = q* with S_1 through (e q*/a, 0), in the scaled variable
// r = rho / rho_0: e (sqrt(r) - r^{3/2}) = 1. The peak of the left side is at r = 1/3.
struct ScaledCrossings {
  double r_sup;
  double r_sub;
};

const ScaledCrossings& scaled_crossings() {
  static const ScaledCrossings c = [] {
    const double e = std::numbers::e;
    auto f = [e](double r) { return e * (std::sqrt(r) - r * std::sqrt(r)) - 1.0; };
    auto df = [e](double r) { return e * (0.5 / std::sqrt(r) - 1.5 * std::sqrt(r)); };
    const double peak = 1.0 / 3.0;
    RootTolerance tol;
    tol.x_rel = 1e-15;
    return ScaledCrossings{solve_bracketed(f, df, 1e-6, peak, 1.0, "special_states", tol),
                           solve_bracketed(f, df, peak, 1.0, 1.0, "special_states", tol)};
  }();
  return c;
}

// Clamp round-off excursions of a wave speed across zero.
void clamp_speeds(WavePattern& p, bool non_positive, double a) {
  const double eps = 1e-12 * a;
  for (Wave& w : p.waves) {
    if (non_positive) {
      if (w.speed_hi > 0.0 && w.speed_hi <= eps) w.speed_hi = 0.0;
      if (w.speed_lo > 0.0 && w.speed_lo <= eps) w.speed_lo = 0.0;
    } else {
      if (w.speed_lo < 0.0 && w.speed_lo >= -eps) w.speed_lo = 0.0;
      if (w.speed_hi < 0.0 && w.speed_hi >= -eps) w.speed_hi = 0.0;
    }
  }
}

bool close_states(const State& x, const State& y, double rel) {
  const double scale = std::max({std::abs(x.rho), std::abs(y.rho), std::abs(x.q), std::abs(y.q)});
  return std::abs(x.rho - y.rho) <= rel * scale && std::abs(x.q - y.q) <= rel * scale;
}

}  // namespace

ValveParams::ValveParams(double q_star, GasLaw law) : q_star_(q_star), law_(law) {
  if (!(q_star > 0.0) || !std::isfinite(q_star)) {
    throw OutOfRange("valve threshold q* must be positive");
  }
}

double q_cap(const State& u, const GasLaw& law) {
  const double a = law.a();
  const double v = u.v();
  if (v <= a) return a * u.rho / std::numbers::e * std::exp(v / a);
  return u.q;
}

double q_vee(const State& ul, const ValveParams& p) {
  return q_cap(ul, p.law()) >= p.q_star() ? p.q_star() : 0.0;
}

double q_aitch(const State& ul, const ValveParams& p) {
  if (q_cap(ul, p.law()) >= p.q_star()) return p.q_star();
  if (classify_region(ul, p).subset == CoherenceSubset::Complement) return ul.q;
  return 0.0;
}

double q_aitch_by_region(const State& ul, const ValveParams& p) {
  switch (classify_region(ul, p).region) {
    case Region::Open:
      return p.q_star();
    case Region::ClosedCoherent:
      return 0.0;
    case Region::Incoherent:
      return ul.q;
  }
  return 0.0;
}

std::string SolverKind::name() const {
  switch (tag_) {
    case Tag::Lax:
      return "lax";
    case Tag::Vee:
      return "v";
    case Tag::Aitch:
      return "h";
    case Tag::Custom:
      return "custom";
  }
  return "?";
}

double SolverKind::flow(const State& ul, const State& ur, const ValveParams& p) const {
  switch (tag_) {
    case Tag::Lax:
      return sample(solve_rp(ul, ur, p.law()), 0.0, p.law()).q;
    case Tag::Vee:
      return q_vee(ul, p);
    case Tag::Aitch:
      return q_aitch(ul, p);
    case Tag::Custom: {
      const double q = fn_(ul, ur);
      const double cap = q_cap(ul, p.law());
      if (!(q >= 0.0) || q > cap + 1e-12 * std::max(1.0, cap)) {
        throw FlowOutOfRange("custom valve flow " + std::to_string(q) + " outside [0, " +
                             std::to_string(cap) + "]");
      }
      return std::min(q, cap);
    }
  }
  return 0.0;
}

double v_sup_ratio() { return 1.0 / (std::numbers::e * scaled_crossings().r_sup); }
double v_sub_ratio() { return 1.0 / (std::numbers::e * scaled_crossings().r_sub); }

SpecialStates special_states(const ValveParams& p) {
  const double a = p.a();
  const double qs = p.q_star();
  const double rho0 = std::numbers::e * qs / a;
  const auto& c = scaled_crossings();
  SpecialStates s{State(qs / a, qs),
                  State(rho0, 0.0),
                  State(rho0 * c.r_sup, qs),
                  State(rho0 * c.r_sub, qs),
                  0.0,
                  0.0};
  s.v_star_sup = s.u_star_sup.v();
  s.v_star_sub = s.u_star_sub.v();
  return s;
}

RegionTag classify_region(const State& ul, const ValveParams& p) {
  const double a = p.a();
  const double qs = p.q_star();
  const State u_star_a(qs / a, qs);
  const State u_star_0(std::numbers::e * qs / a, 0.0);

  RegionTag tag{};
  if (ul.rho <= u_star_a.rho) {
    tag.closed = ul.q < qs;
  } else {
    tag.closed = ul.q < rarefaction_curve(1, u_star_a, ul.rho, p.law());
  }

  const double v_sup = v_sup_ratio() * a;
  const bool beyond_sup = ul.v() > v_sup * (1.0 + kBoundaryBand);
  const double s1 = shock_curve(1, u_star_0, ul.rho, p.law());
  const bool on_or_above = ul.q >= s1 - kBoundaryBand * std::max({1.0, std::abs(s1), qs});

  if (!beyond_sup) {
    tag.subset = CoherenceSubset::CH1;
  } else if (!on_or_above) {
    tag.subset = CoherenceSubset::CH2;
  } else if (ul.q >= qs) {
    tag.subset = CoherenceSubset::CH3;
  } else {
    tag.subset = CoherenceSubset::Complement;
  }

  if (tag.subset == CoherenceSubset::Complement) {
    tag.region = Region::Incoherent;
  } else {
    tag.region = tag.closed ? Region::ClosedCoherent : Region::Open;
  }
  return tag;
}

std::string to_string(Region r) {
  switch (r) {
    case Region::ClosedCoherent:
      return "closed";
    case Region::Open:
      return "open";
    case Region::Incoherent:
      return "incoherent";
  }
  return "?";
}

std::string to_string(CoherenceSubset s) {
  switch (s) {
    case CoherenceSubset::CH1:
      return "CH1";
    case CoherenceSubset::CH2:
      return "CH2";
    case CoherenceSubset::CH3:
      return "CH3";
    case CoherenceSubset::Complement:
      return "CHc";
  }
  return "?";
}

State CoupledSolution::operator()(double xi, const GasLaw& law) const {
  if (!valve) return sample(left, xi, law);
  return xi < 0.0 ? sample(left, xi, law) : sample(right, xi, law);
}

State CoupledSolution::trace_minus(const GasLaw& law) const {
  return sample_left_limit(left, 0.0, law);
}

State CoupledSolution::trace_plus(const GasLaw& law) const { return sample(right, 0.0, law); }

WavePattern CoupledSolution::full_pattern() const {
  if (!valve) return left;
  std::vector<Wave> waves = left.waves;
  if (!(left.rightmost() == right.leftmost())) {
    Wave jump;
    jump.family = 0;
    jump.kind = WaveKind::StationaryNonclassical;
    jump.left = left.rightmost();
    jump.right = right.leftmost();
    waves.push_back(jump);
  }
  waves.insert(waves.end(), right.waves.begin(), right.waves.end());
  return make_pattern(left.leftmost(), waves);
}

CoupledSolution solve_coupled(const SolverKind& kind, const State& ul, const State& ur,
                              const ValveParams& p) {
  const GasLaw& law = p.law();
  CoupledSolution sol;
  if (!kind.has_valve()) {
    sol.valve = false;
    sol.left = solve_rp(ul, ur, law);
    sol.right = sol.left;
    sol.flow = sample(sol.left, 0.0, law).q;
    return sol;
  }
  return coupled_with_flow(kind.flow(ul, ur, p), ul, ur, law);
}

CoupledSolution coupled_with_flow(double flow, const State& ul, const State& ur,
                                  const GasLaw& law) {
  CoupledSolution sol;
  const State uh = hat_u(flow, ul, law);
  const State uc = check_u(flow, ur, law);
  sol.flow = flow;
  sol.left = make_pattern(ul, {make_wave(1, ul, uh, law)});
  sol.right = make_pattern(uc, {make_wave(2, uc, ur, law)});
  clamp_speeds(sol.left, true, law.a());
  clamp_speeds(sol.right, false, law.a());
  return sol;
}

bool coherence_check(const SolverKind& kind, const State& ul, const State& ur,
                     const ValveParams& p, double rel_tol) {
  const GasLaw& law = p.law();
  const CoupledSolution first = solve_coupled(kind, ul, ur, p);
  const State um = first.trace_minus(law);
  const State up = first.trace_plus(law);
  const CoupledSolution second = solve_coupled(kind, um, up, p);
  return close_states(second.trace_minus(law), um, rel_tol) &&
         close_states(second.trace_plus(law), up, rel_tol);
}

bool coherence_check_strict(const SolverKind& kind, const State& ul, const State& ur,
                            const ValveParams& p, double rel_tol) {
  if (!coherence_check(kind, ul, ur, p, rel_tol)) return false;
  const GasLaw& law = p.law();
  const CoupledSolution first = solve_coupled(kind, ul, ur, p);
  const CoupledSolution second =
      solve_coupled(kind, first.trace_minus(law), first.trace_plus(law), p);
  const WavePattern full = second.full_pattern();
  const double eps = 1e-10 * law.a();
  for (const Wave& w : full.waves) {
    if (w.kind == WaveKind::Null) continue;
    if (std::abs(w.speed_lo) > eps || std::abs(w.speed_hi) > eps) return false;
  }
  return true;
}

SupersonicReport supersonic_trace_audit(const SolverKind& kind, const State& ul,
                                        const State& ur, const ValveParams& p) {
  const GasLaw& law = p.law();
  const CoupledSolution sol = solve_coupled(kind, ul, ur, p);
  SupersonicReport r;
  r.ul_supersonic = is_supersonic(ul, law);

  // Constant states and fan end points bound |v| on each side (v is monotone in a fan).
  auto scan = [&](const WavePattern& pat, bool negative_side) {
    bool found = false;
    for (std::size_t k = 0; k < pat.states.size(); ++k) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      const double from = k == 0 ? -inf : pat.waves[k - 1].speed_hi;
      const double to = k == pat.waves.size() ? inf : pat.waves[k].speed_lo;
      const bool present = negative_side ? from < 0.0 : to > 0.0;
      if (present && is_supersonic(pat.states[k], law)) found = true;
    }
    for (const Wave& w : pat.waves) {
      if (w.kind != WaveKind::RarefactionFan) continue;
      const double lo = negative_side ? w.speed_lo : std::max(w.speed_lo, 0.0);
      const double hi = negative_side ? std::min(w.speed_hi, 0.0) : w.speed_hi;
      if (lo >= hi) continue;
      if (is_supersonic(sample(pat, lo, law), law) ||
          is_supersonic(sample_left_limit(pat, hi, law), law)) {
        found = true;
      }
    }
    return found;
  };
  if (sol.valve) {
    r.left_attains_supersonic = scan(sol.left, true);
    r.right_attains_supersonic = scan(sol.right, false);
  } else {
    r.left_attains_supersonic = scan(sol.left, true);
    r.right_attains_supersonic = scan(sol.left, false);
  }
  r.left_rule_holds = r.left_attains_supersonic == r.ul_supersonic;
  return r;
}

}  // namespace valveflow
