#include "valveflow/riemann.hpp"

#include <algorithm>
#include <cmath>

namespace valveflow {

namespace {

// Densities this close are treated as the same state on a wave curve.
constexpr double kNullRel = 1e-11;

bool nearly_equal(const State& x, const State& y, double rel) {
  const double rs = std::max(x.rho, y.rho);
  const double qs = std::max({1.0, std::abs(x.q), std::abs(y.q), rs});
  return std::abs(x.rho - y.rho) <= rel * rs && std::abs(x.q - y.q) <= rel * qs;
}

State fan_state(const Wave& w, double xi, const GasLaw& law) {
  const double a = law.a();
  const State& edge = w.left;
  if (w.family == 1) {
    const double v = xi + a;
    const double rho = edge.rho * std::exp((edge.v() - v) / a);
    return State(rho, rho * v);
  }
  const double v = xi - a;
  const double rho = edge.rho * std::exp((v - edge.v()) / a);
  return State(rho, rho * v);
}

}  // namespace

Wave make_wave(int family, const State& left, const State& right, const GasLaw& law) {
  Wave w;
  w.family = family;
  w.left = left;
  w.right = right;
  if (left == right || std::abs(left.rho - right.rho) <= kNullRel * std::max(left.rho, right.rho)) {
    w.kind = WaveKind::Null;
    w.speed_lo = w.speed_hi = characteristic_speed(family, left, law);
    return w;
  }
  // Along a forward 1-curve the density jumps up across a shock; along 2 it drops.
  const bool shock = family == 1 ? right.rho > left.rho : right.rho < left.rho;
  if (shock) {
    w.kind = WaveKind::Shock;
    // Equal momenta make the shock exactly stationary (mass conservation).
    const double s = left.q == right.q ? 0.0 : shock_speed(family, left, right.rho, law);
    w.speed_lo = w.speed_hi = s;
  } else {
    w.kind = WaveKind::RarefactionFan;
    w.speed_lo = characteristic_speed(family, left, law);
    w.speed_hi = characteristic_speed(family, right, law);
  }
  return w;
}

WavePattern make_pattern(const State& left, const std::vector<Wave>& waves) {
  WavePattern p;
  p.states.push_back(left);
  for (const Wave& w : waves) {
    p.waves.push_back(w);
    p.states.push_back(w.right);
  }
  return p;
}

WavePattern solve_rp(const State& ul, const State& ur, const GasLaw& law) {
  State mid = tilde_u(ul, ur, law);
  if (std::abs(mid.rho - ul.rho) <= kNullRel * ul.rho) mid = ul;
  if (std::abs(mid.rho - ur.rho) <= kNullRel * ur.rho) mid = ur;
  const Wave w1 = make_wave(1, ul, mid, law);
  const Wave w2 = make_wave(2, mid, ur, law);
  return make_pattern(ul, {w1, w2});
}

State sample(const WavePattern& pattern, double xi, const GasLaw& law) {
  for (const Wave& w : pattern.waves) {
    if (w.kind == WaveKind::RarefactionFan) {
      if (xi <= w.speed_lo) return w.left;
      if (xi < w.speed_hi) return fan_state(w, xi, law);
    } else if (xi < w.speed_lo) {
      return w.left;
    }
  }
  return pattern.rightmost();
}

State sample_left_limit(const WavePattern& pattern, double xi, const GasLaw& law) {
  for (const Wave& w : pattern.waves) {
    if (w.kind == WaveKind::RarefactionFan) {
      if (xi <= w.speed_lo) return w.left;
      if (xi < w.speed_hi) return fan_state(w, xi, law);
    } else if (xi <= w.speed_lo) {
      return w.left;
    }
  }
  return pattern.rightmost();
}

bool audit(const WavePattern& pattern, double rel_tol) {
  if (pattern.states.size() != pattern.waves.size() + 1) return false;
  for (std::size_t k = 0; k < pattern.waves.size(); ++k) {
    const Wave& w = pattern.waves[k];
    if (!nearly_equal(w.left, pattern.states[k], rel_tol)) return false;
    if (!nearly_equal(w.right, pattern.states[k + 1], rel_tol)) return false;
    if (w.speed_lo > w.speed_hi) return false;
    if (k + 1 < pattern.waves.size() && w.speed_hi > pattern.waves[k + 1].speed_lo) {
      return false;
    }
  }
  return true;
}

SideReport same_side_wave_check(const State& ul, const State& ur, const GasLaw& law) {
  const WavePattern p = solve_rp(ul, ur, law);
  SideReport r;
  r.both_subsonic = !is_supersonic(ul, law) && !is_supersonic(ur, law);
  for (const Wave& w : p.waves) {
    if (w.kind == WaveKind::Null) continue;
    if (w.family == 1) {
      r.wave1_null = false;
      r.wave1_speed_hi = w.speed_hi;
      r.positive_1shock = w.kind == WaveKind::Shock && w.speed_lo > 0.0;
    } else {
      r.wave2_null = false;
      r.wave2_speed_lo = w.speed_lo;
    }
  }
  if (!r.wave1_null && !r.wave2_null) {
    const Wave& w1 = p.waves.front();
    const Wave& w2 = p.waves.back();
    r.same_direction = (w1.speed_lo > 0.0 && w2.speed_lo > 0.0) ||
                       (w1.speed_hi < 0.0 && w2.speed_hi < 0.0);
  }
  r.remark_consistent = !r.positive_1shock || ul.v() > law.a();
  return r;
}

}  // namespace valveflow
