#pragma once

// Exact solution of the Riemann problem for the isothermal Euler system and
// sampling of the self-similar profile.

#include <vector>

#include "valveflow/gas.hpp"

namespace valveflow {

enum class WaveKind { Null, Shock, RarefactionFan, StationaryNonclassical };

/// One elementary wave of a self-similar solution.
/// For shocks speed_lo == speed_hi; for fans the speeds are lambda_family of the edge states.
struct Wave {
  int family = 1;
  WaveKind kind = WaveKind::Null;
  State left;
  State right;
  double speed_lo = 0.0;
  double speed_hi = 0.0;
};

/// Speed-ordered waves; states[k] is the constant state left of waves[k] and
/// states.back() the rightmost one.
struct WavePattern {
  std::vector<Wave> waves;
  std::vector<State> states;

  const State& leftmost() const { return states.front(); }
  const State& rightmost() const { return states.back(); }
};

/// Elementary wave of `family` from `left` to `right`. The pair must lie on the
/// family's forward Lax curve through `left`; this is not re-verified.
Wave make_wave(int family, const State& left, const State& right, const GasLaw& law);

/// Builds a pattern from consecutive waves. Null waves are kept: they carry
/// round-off differences at the characteristic speed.
WavePattern make_pattern(const State& left, const std::vector<Wave>& waves);

/// The Lax (entropic) solution: a 1-wave to tilde_u(ul, ur) and a 2-wave to ur.
/// Always two waves, either of which may be Null.
WavePattern solve_rp(const State& ul, const State& ur, const GasLaw& law);

/// Pattern value at xi = x/t. At a shock speed the right state is returned.
State sample(const WavePattern& pattern, double xi, const GasLaw& law);

/// Limit of the pattern as xi' -> xi from the left.
State sample_left_limit(const WavePattern& pattern, double xi, const GasLaw& law);

/// Self-consistency audit: stored states match wave edges and speeds are ordered.
bool audit(const WavePattern& pattern, double rel_tol = 1e-9);

/// Where the two waves of an RS_p solution travel.
struct SideReport {
  bool wave1_null = true;
  bool wave2_null = true;
  double wave1_speed_hi = 0.0;
  double wave2_speed_lo = 0.0;
  bool same_direction = false;   ///< both non-null waves strictly on one side of x = 0
  bool both_subsonic = false;
  bool positive_1shock = false;  ///< the 1-wave is a shock with positive speed
  bool remark_consistent = true; ///< a positive 1-shock implies v_l > a
};

SideReport same_side_wave_check(const State& ul, const State& ur, const GasLaw& law);

}  // namespace valveflow
