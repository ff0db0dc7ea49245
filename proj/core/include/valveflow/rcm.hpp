#pragma once

// Random Choice Method on a uniform grid with a valve on the face x = 0.

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "valveflow/gas.hpp"
#include "valveflow/valve.hpp"

namespace valveflow {

/// Uniform grid whose faces include x = 0. Cell j covers
/// [x_min + j dx, x_min + (j+1) dx); the valve sits between cells j_valve and j_valve + 1.
struct GridSpec {
  double x_min = -1.0;
  double x_max = 1.0;
  double dx = 1e-3;
  int n_cells = 0;
  int j_valve = 0;

  /// Throws OutOfRange unless x_min < 0 < x_max and 0 is a face (to 1e-9 dx).
  static GridSpec make(double x_min, double x_max, double dx);

  double center(int j) const { return x_min + (j + 0.5) * dx; }
  double face(int k) const { return x_min + k * dx; }
};

struct Field {
  std::vector<State> cells;
  double t = 0.0;
  long n = 0;
};

struct FlowEntry {
  long n = 0;
  double t = 0.0;
  double dt = 0.0;
  double q = 0.0;
};

using FlowRecord = std::vector<FlowEntry>;

struct Snapshot {
  double t = 0.0;
  std::vector<State> cells;
};

struct RunConfig {
  GridSpec grid;
  double c_cfl = 0.45;
  double T = 0.2;
  SolverKind solver = SolverKind::aitch();
  ValveParams valve{1.0, GasLaw(1.0)};
  /// Evaluate the valve flow once from the initial field and keep it fixed.
  bool freeze_flow = false;
  std::vector<double> snapshot_times;
  /// Throw BoundaryReached if the two end cells on either side changed.
  bool check_boundary = true;
};

/// Radical inverse of n in base 2.
double van_der_corput(long n);

/// c_cfl dx / max |lambda|, clamped so that t + dt <= t_end.
double cfl_dt(const Field& f, const RunConfig& cfg, double t_end);

/// Piecewise constant initial data: values[k] on [breaks[k-1], breaks[k]).
struct PiecewiseConstant {
  std::vector<double> breaks;
  std::vector<State> values;

  /// Throws OutOfRange unless values.size() == breaks.size() + 1 and breaks increase.
  PiecewiseConstant(std::vector<double> breaks, std::vector<State> values);

  State operator()(double x) const;
};

/// Exact cell averages of a piecewise constant datum.
Field project_initial(const PiecewiseConstant& ic, const GridSpec& grid);

/// Valve flow used in the next step: frozen value or the solver's flow.
double valve_flow(const Field& f, const RunConfig& cfg, std::optional<double> frozen);

/// Advances by one step of size dt with sample point theta. Returns the record entry.
FlowEntry step(Field& f, const RunConfig& cfg, double dt, double theta,
               std::optional<double> frozen = std::nullopt);

struct RunResult {
  Field field;
  FlowRecord flow;
  std::vector<Snapshot> snapshots;
};

RunResult run(const RunConfig& cfg, const PiecewiseConstant& ic);

/// Sum over cells of |drho| + |dq| divided by the sum of |rho| + |q| of the
/// reference, the reference being sampled at cell centres.
double l1_rel_error(const std::vector<State>& cells, const GridSpec& grid,
                    const std::function<State(double)>& exact);

/// (1/T) * integral over [0, T] of the recorded flow. Throws SpanMismatch if the
/// record stops before T.
double average_flow(const FlowRecord& record, double T);

void write_snapshot_csv(std::ostream& os, const std::vector<Snapshot>& snaps, const GridSpec& g);
void write_flow_csv(std::ostream& os, const FlowRecord& record);

}  // namespace valveflow
