#pragma once

// Isothermal gas: state algebra, Lax curves through a state, shock speeds and
// the curve-intersection states used by every solver in the library.
//
// States are conservative pairs (rho, q) with rho > 0; the pressure law is
// p(rho) = a^2 rho.

#include <utility>

namespace valveflow {

/// Sound speed of the isothermal pressure law p = a^2 rho.
class GasLaw {
 public:
  explicit GasLaw(double a);

  double a() const { return a_; }

 private:
  double a_;
};

/// A point of the half plane rho > 0: density and momentum.
struct State {
  double rho = 1.0;
  double q = 0.0;

  State() = default;
  State(double rho_, double q_);

  double v() const { return q / rho; }

  friend bool operator==(const State&, const State&) = default;
};

enum class Sonic { Subsonic, Sonic, Supersonic };

struct SonicClass {
  Sonic kind;
  double mach;  ///< signed v/a
};

/// |v| within 1e-9 a of the sound speed counts as sonic.
SonicClass classify_sonic(const State& u, const GasLaw& law);

inline bool is_supersonic(const State& u, const GasLaw& law) {
  return classify_sonic(u, law).kind == Sonic::Supersonic;
}

enum class Branch { Shock, Rarefaction };
enum class Direction { Forward, Backward };

struct CurveId {
  int family;  ///< 1 or 2
  Branch branch;
  Direction direction;
};

/// Value of a Lax curve together with the branch it was taken from.
struct CurvePoint {
  double q;
  Branch branch;
};

/// (lambda_1, lambda_2) = (v - a, v + a).
std::pair<double, double> eigenvalues(const State& u, const GasLaw& law);

/// lambda_family(u).
double characteristic_speed(int family, const State& u, const GasLaw& law);

/// S_i^{u_o}(rho): Hugoniot locus of family i through u_o.
double shock_curve(int family, const State& origin, double rho, const GasLaw& law);

/// R_i^{u_o}(rho): integral curve of family i through u_o.
double rarefaction_curve(int family, const State& origin, double rho, const GasLaw& law);

/// Evaluates S_i or R_i as selected by `id.branch`; direction is ignored.
double curve_value(const CurveId& id, const State& origin, double rho, const GasLaw& law);

/// FL_i^{u_o}(rho): states reachable from u_o (on the left) by an admissible i-wave.
CurvePoint forward_lax(int family, const State& origin, double rho, const GasLaw& law);

/// BL_i^{u_o}(rho): states that reach u_o (on the right) by an admissible i-wave.
CurvePoint backward_lax(int family, const State& origin, double rho, const GasLaw& law);

/// Derivative d/drho of FL_1^{u_o} (used by the Newton polish).
double forward_lax1_slope(const State& origin, double rho, const GasLaw& law);

/// Derivative d/drho of BL_2^{u_o}.
double backward_lax2_slope(const State& origin, double rho, const GasLaw& law);

/// Speed of the i-shock joining `origin` to the state of density `rho` on S_i^{origin}.
/// Symmetric: the same value is obtained with the two states swapped.
double shock_speed(int family, const State& origin, double rho, const GasLaw& law);

/// u-bar: the point of FL_1^{u_l} with the largest momentum.
State bar_u(const State& ul, const GasLaw& law);

/// Momentum of bar_u(ul).
double bar_q(const State& ul, const GasLaw& law);

/// u-tilde: the intersection of FL_1^{u_l} and BL_2^{u_r}.
/// Throws NoConvergence if the root finder fails.
State tilde_u(const State& ul, const State& ur, const GasLaw& law);

/// u-hat: point of FL_1^{u_l} with q = q0 and the largest density.
/// Throws OutOfRange if q0 > bar_q(ul).
State hat_u(double q0, const State& ul, const GasLaw& law);

/// u-check: point of BL_2^{u_r} with q = q0 and the largest density.
/// Throws OutOfRange if q0 < 0.
State check_u(double q0, const State& ur, const GasLaw& law);

/// The sonic state (v = a) on FL_2^{origin}.
State sonic_point_fl2(const State& origin, const GasLaw& law);

/// q-ring(u) = bar_q(hat_u(0, u)), evaluated in closed form.
double ring_q(const State& u, const GasLaw& law);

}  // namespace valveflow
