#pragma once

// Experiment drivers on top of the RCM solver: convergence tables, the
// chattering comparison and the q* sweeps of the average valve flow.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "valveflow/config.hpp"
#include "valveflow/rcm.hpp"
#include "valveflow/valve.hpp"
#include "valveflow/wavefront.hpp"

namespace valveflow {

enum class ExperimentKind { SingleRun, Convergence, Chattering, RiemannMax, ShockMax, RarefactionMax };

std::string to_string(ExperimentKind k);
/// Accepts the names printed by to_string; throws UsageError otherwise.
ExperimentKind parse_experiment_kind(const std::string& s);
/// "p", "v", "h" (or "lax", "vee", "aitch"); throws UsageError otherwise.
SolverKind parse_solver(const std::string& s);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::SingleRun;
  double a = 1.0;
  double q_star = 1.0;
  /// u_i is only read by the three-state experiments; u_l may be derived there.
  State u_i{1.0, 0.0};
  State u_l{1.0, 0.0};
  State u_r{1.0, 0.0};
  bool has_u_l = false;
  std::vector<double> q_grid;
  std::vector<double> T_list{0.2};
  std::vector<double> dx_list{5e-4};
  double c_cfl = 0.45;
  SolverKind solver = SolverKind::aitch();
  std::filesystem::path out_dir = ".";

  ValveParams params() const { return ValveParams(q_star, GasLaw(a)); }
  double T() const { return T_list.front(); }
  double dx() const { return dx_list.front(); }

  /// Keys: a, qstar, ui, ul, ur, T, dx, cfl, solver, out, and for sweeps either
  /// qstar_grid or qstar_min/qstar_max/qstar_step. Throws UsageError on
  /// missing or invalid values.
  static ExperimentSpec from_config(ExperimentKind kind, const Config& cfg);
};

/// Uniform q* grid lo, lo + step, ... up to hi (inclusive within round-off).
std::vector<double> uniform_grid(double lo, double hi, double step);

PiecewiseConstant riemann_datum(const State& ul, const State& ur);
PiecewiseConstant three_state_datum(const State& ui, const State& ul, const State& ur);

/// Grid covering the break points plus 1.5 T max|lambda| on each side and a
/// small margin; 0 is a face.
GridSpec auto_grid(const PiecewiseConstant& ic, double a, double T, double dx);

/// Runs on cfg.grid; on BoundaryReached widens the domain (twice at most) and retries.
RunResult run_sized(RunConfig cfg, const PiecewiseConstant& ic, GridSpec* used = nullptr);

struct ConvergenceResult {
  std::vector<double> dx;
  std::vector<double> error;
  double slope = 0.0;
};

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Riemann datum (u_l, u_r) on [-1, 1]: relative L1 error against the exact
/// coupled solution at T for each dx.
ConvergenceResult run_convergence(const ExperimentSpec& spec);

struct ChatteringResult {
  GridSpec grid;
  RunResult frozen;
  RunResult vee;
  RunResult aitch;
  double alternation = 0.0;  ///< share of step pairs (n, n+1), n >= 1, that swap 0 and q*
  bool aitch_constant = false;
  double aitch_flow = 0.0;
  double l1_vee_aitch = 0.0;  ///< relative to the Aitch profile
};

/// Fraction of consecutive pairs after the first step whose flows are {0, q*}.
double alternation_fraction(const FlowRecord& rec, double q_star);

ChatteringResult run_chattering(const ExperimentSpec& spec);

struct SweepRow {
  double q_star = 0.0;
  double T = 0.0;
  double measured = 0.0;
  double analytic = 0.0;  ///< NaN where no closed form applies
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double dx = 0.0;
  double c_cfl = 0.0;
  std::string solver;
  /// q* values where the closed form jumps.
  std::vector<double> analytic_jumps;

  std::vector<SweepRow> at_T(double T) const;
};

/// Datum (u_l, u_r) with u_i = u_l; analytic curve q* -> Q_h(u_l).
SweepResult run_riemann_max(const ExperimentSpec& spec);
/// Three-state datum with a 2-shock from u_i; overlays the closed form for T <= 2.
SweepResult run_shock_max(const ExperimentSpec& spec);
/// Three-state datum with a 2-rarefaction from u_i; measured only.
SweepResult run_rarefaction_max(const ExperimentSpec& spec);

/// Midpoints of consecutive rows (sorted by q*) whose measured values differ by
/// more than `jump` plus the q* spacing.
std::vector<double> detect_discontinuities(const std::vector<SweepRow>& rows, double jump = 0.2);

struct Agreement {
  double max_deviation = 0.0;  ///< of |measured - analytic| / max(1, q*)
  int checked = 0;
  int excluded = 0;
};

/// Compares rows with a finite analytic value, skipping rows within `band` of a jump.
Agreement compare_off_jumps(const std::vector<SweepRow>& rows, const std::vector<double>& jumps,
                            double band);

struct SummaryRow {
  std::string experiment;
  std::string param;
  double value = 0.0;
};

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
void write_sweep_csv(std::ostream& os, const SweepResult& r);
void write_convergence_csv(std::ostream& os, const ConvergenceResult& r);

}  // namespace valveflow
