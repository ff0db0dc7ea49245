#pragma once

// Exact small-time solution for the three-state datum
//   u_i on x < -1,  u_l on [-1, 0),  u_r on x >= 0
// with RS_p away from the valve and the coherent valve law at x = 0. Waves are
// tracked as straight fronts until the first interaction involving a rarefaction.

#include <iosfwd>
#include <string>
#include <vector>

#include "valveflow/gas.hpp"
#include "valveflow/riemann.hpp"
#include "valveflow/valve.hpp"

namespace valveflow {

enum class Case { A, B, C, D };

std::string to_string(Case c);

/// The datum and the thresholds that split q* into the four cases.
struct ScenarioData {
  State u_i;
  State u_l;
  State u_r;
  ValveParams valve;

  State hat0;         ///< hat_u(0, u_l)
  State tilde0;       ///< tilde_u(u_i, hat0)
  double q_l = 0.0;
  double q_tilde = 0.0;  ///< momentum of tilde0
  double q_bar_t = 0.0;  ///< bar_q(tilde0)
  /// Last time for which the closed-form average flow is used beyond the tracked horizon.
  double formula_horizon = 2.0;

  /// Validates u_l on FL_2^{u_i}, v_r = 0 < v_l = a < v_i and
  /// 0 = q_r < q_l < q_tilde < q_i < q_bar_t. Throws ScenarioViolation otherwise.
  ScenarioData(const State& ui, const State& ul, const State& ur, const ValveParams& p);

  /// u_l taken as the sonic point of the 2-shock curve through u_i.
  static ScenarioData from_sonic_left(const State& ui, const State& ur, const ValveParams& p);

  ScenarioData with_q_star(double q_star) const;

  /// 1 / s_2^{u_i}(rho_l): arrival time at the valve of the shock from x = -1.
  double t_min() const;
  /// Arrival at x = 0 of the reflected 2-shock when the valve starts closed.
  double t2_closed() const;
};

Case classify_case(const ScenarioData& s);

/// A wave moving on a straight line from (t0, x0). family 0 marks the valve.
struct Front {
  Wave wave;
  double t0 = 0.0;
  double x0 = 0.0;

  bool is_valve() const { return wave.kind == WaveKind::StationaryNonclassical; }
  double lo_at(double t) const { return x0 + wave.speed_lo * (t - t0); }
  double hi_at(double t) const { return x0 + wave.speed_hi * (t - t0); }
};

/// Short label such as "S1", "R2" or "V".
std::string wave_label(const Wave& w);

struct WaveEvent {
  int k = 0;
  double t = 0.0;
  double x = 0.0;
  std::vector<std::string> in_waves;
  std::vector<std::string> out_waves;
};

struct EventLog {
  std::vector<WaveEvent> events;  ///< interactions, the last one being the stop event
  double t_stop = 0.0;
  std::string stop_reason;
};

struct ValveSegment {
  double t_begin = 0.0;
  double t_end = 0.0;
  double flow = 0.0;
};

class PiecewiseSolution {
 public:
  struct Epoch {
    double t_begin;
    double t_end;
    std::vector<Front> fronts;  ///< left to right
  };

  PiecewiseSolution(GasLaw law, std::vector<Epoch> epochs, std::vector<ValveSegment> flow);

  double t_stop() const { return epochs_.back().t_end; }
  const std::vector<Epoch>& epochs() const { return epochs_; }
  const std::vector<ValveSegment>& valve_flow() const { return flow_; }

  /// u(t, x); at a discontinuity the right state. Throws OutOfDomain outside [0, t_stop].
  State evaluate(double t, double x) const;

 private:
  GasLaw law_;
  std::vector<Epoch> epochs_;
  std::vector<ValveSegment> flow_;
};

struct ExactConstruction {
  Case which;
  PiecewiseSolution solution;
  EventLog log;
};

/// Tracks the waves until the stop rule of the case. Throws ScenarioViolation
/// if the interactions differ from the expected sequence for the case.
ExactConstruction build_exact(const ScenarioData& s);

/// Closed-form (1/T) * integral of the valve flow for the datum, using t2_closed().
/// Throws OutOfValidity for T > s.formula_horizon.
double formula_average_flow(const ScenarioData& s, double T);

/// Average valve flow over [0, T]: integrated from the tracked solution up to its
/// stop time and from the closed form beyond it, up to s.formula_horizon.
double exact_trace_flow(const ExactConstruction& c, const ScenarioData& s, double T);

void write_event_csv(std::ostream& os, const EventLog& log);
void write_profile_csv(std::ostream& os, const PiecewiseSolution& sol, double t,
                       const std::vector<double>& xs);

}  // namespace valveflow
