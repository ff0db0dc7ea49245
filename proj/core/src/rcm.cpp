#include "valveflow/rcm.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "valveflow/error.hpp"
#include "valveflow/riemann.hpp"

namespace valveflow {

namespace {

// Riemann fan between two cells sampled at xi; equal neighbours short-circuit.
State local_sample(const State& ul, const State& ur, double xi, const GasLaw& law) {
  if (ul == ur) return ul;
  return sample(solve_rp(ul, ur, law), xi, law);
}

void check_cell(const State& u, int j) {
  if (!(u.rho > 0.0) || !std::isfinite(u.rho) || !std::isfinite(u.q)) {
    throw CellLeftOmega("cell " + std::to_string(j) + " left the state space");
  }
}

}  // namespace

GridSpec GridSpec::make(double x_min, double x_max, double dx) {
  if (!(dx > 0.0) || !(x_min < 0.0) || !(x_max > 0.0)) {
    throw OutOfRange("grid needs dx > 0 and x_min < 0 < x_max");
  }
  const double left = -x_min / dx;
  const double k = std::round(left);
  if (std::abs(left - k) > 1e-9 * std::max(1.0, left)) {
    throw OutOfRange("x = 0 must be a cell face");
  }
  GridSpec g;
  g.dx = dx;
  g.x_min = -k * dx;
  const double n = std::round((x_max - g.x_min) / dx);
  g.n_cells = static_cast<int>(n);
  g.x_max = g.x_min + n * dx;
  g.j_valve = static_cast<int>(k) - 1;
  if (g.j_valve < 1 || g.j_valve + 2 >= g.n_cells) {
    throw OutOfRange("valve needs at least two cells on each side");
  }
  return g;
}

double van_der_corput(long n) {
  if (n < 0) throw OutOfRange("van der Corput index must be non-negative");
  double theta = 0.0;
  double w = 0.5;
  for (unsigned long m = static_cast<unsigned long>(n); m != 0; m >>= 1U) {
    if (m & 1U) theta += w;
    w *= 0.5;
  }
  return theta;
}

double cfl_dt(const Field& f, const RunConfig& cfg, double t_end) {
  if (f.cells.empty()) throw DegenerateField("empty field");
  const double a = cfg.valve.a();
  double smax = 0.0;
  for (const State& u : f.cells) smax = std::max(smax, std::abs(u.v()) + a);
  if (!(smax > 0.0) || !std::isfinite(smax)) throw DegenerateField("no finite wave speed");
  const double dt = cfg.c_cfl * cfg.grid.dx / smax;
  return std::min(dt, t_end - f.t);
}

PiecewiseConstant::PiecewiseConstant(std::vector<double> b, std::vector<State> v)
    : breaks(std::move(b)), values(std::move(v)) {
  if (values.size() != breaks.size() + 1) {
    throw OutOfRange("piecewise datum needs one more value than break points");
  }
  for (std::size_t k = 1; k < breaks.size(); ++k) {
    if (!(breaks[k] > breaks[k - 1])) throw OutOfRange("break points must increase");
  }
}

State PiecewiseConstant::operator()(double x) const {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  return values[static_cast<std::size_t>(it - breaks.begin())];
}

Field project_initial(const PiecewiseConstant& ic, const GridSpec& grid) {
  Field f;
  f.cells.reserve(static_cast<std::size_t>(grid.n_cells));
  const double snap = 1e-9 * grid.dx;
  for (int j = 0; j < grid.n_cells; ++j) {
    const double lo = grid.face(j);
    const double hi = grid.face(j + 1);
    // Break points within round-off of a face do not split the cell.
    std::vector<double> cuts{lo};
    for (double b : ic.breaks) {
      if (b > lo + snap && b < hi - snap) cuts.push_back(b);
    }
    cuts.push_back(hi);
    if (cuts.size() == 2) {
      f.cells.push_back(ic(grid.center(j)));
      continue;
    }
    double rho = 0.0;
    double q = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const State u = ic(0.5 * (cuts[k] + cuts[k + 1]));
      rho += u.rho * (cuts[k + 1] - cuts[k]);
      q += u.q * (cuts[k + 1] - cuts[k]);
    }
    f.cells.emplace_back(rho / (hi - lo), q / (hi - lo));
  }
  return f;
}

double valve_flow(const Field& f, const RunConfig& cfg, std::optional<double> frozen) {
  if (frozen) return *frozen;
  const int jc = cfg.grid.j_valve;
  return cfg.solver.flow(f.cells[jc], f.cells[jc + 1], cfg.valve);
}

FlowEntry step(Field& f, const RunConfig& cfg, double dt, double theta,
               std::optional<double> frozen) {
  const GasLaw& law = cfg.valve.law();
  const int n = static_cast<int>(f.cells.size());
  const int jc = cfg.grid.j_valve;
  const bool valve = cfg.solver.has_valve();
  const std::vector<State>& u = f.cells;
  std::vector<State> next(u.size());

  FlowEntry entry;
  entry.n = f.n;
  entry.t = f.t;
  entry.dt = dt;
  entry.q = valve_flow(f, cfg, frozen);

  const double lam = cfg.grid.dx / dt;
  const bool from_left = theta < 0.5;
  for (int j = 0; j < n; ++j) {
    if (from_left) {
      const State& ul = j == 0 ? u[0] : u[j - 1];
      if (valve && j == jc + 1) {
        const State& ur = u[j];
        const State uc = check_u(entry.q, ur, law);
        next[j] = uc == ur ? ur
                           : sample(make_pattern(uc, {make_wave(2, uc, ur, law)}),
                                    std::max(theta * lam, 0.0), law);
      } else {
        next[j] = local_sample(ul, u[j], theta * lam, law);
      }
    } else {
      const State& ur = j == n - 1 ? u[n - 1] : u[j + 1];
      if (valve && j == jc) {
        const State& ul = u[j];
        const State uh = hat_u(entry.q, ul, law);
        next[j] = uh == ul ? ul
                           : sample(make_pattern(ul, {make_wave(1, ul, uh, law)}),
                                    std::min((theta - 1.0) * lam, 0.0), law);
      } else {
        next[j] = local_sample(u[j], ur, (theta - 1.0) * lam, law);
      }
    }
    check_cell(next[j], j);
  }
  f.cells.swap(next);
  f.t += dt;
  ++f.n;
  return entry;
}

RunResult run(const RunConfig& cfg, const PiecewiseConstant& ic) {
  if (!(cfg.c_cfl > 0.0) || cfg.c_cfl > 0.5) throw OutOfRange("c_cfl must lie in (0, 1/2]");
  if (!(cfg.T >= 0.0)) throw OutOfRange("final time must be non-negative");
  RunResult r;
  r.field = project_initial(ic, cfg.grid);
  const std::vector<State> initial = r.field.cells;

  std::vector<double> stops = cfg.snapshot_times;
  std::sort(stops.begin(), stops.end());
  std::erase_if(stops, [&](double s) { return s < 0.0 || s > cfg.T; });
  std::size_t next_stop = 0;

  std::optional<double> frozen;
  if (cfg.freeze_flow) frozen = valve_flow(r.field, cfg, std::nullopt);

  auto take_snapshots = [&] {
    while (next_stop < stops.size() && stops[next_stop] <= r.field.t) {
      r.snapshots.push_back({r.field.t, r.field.cells});
      ++next_stop;
    }
  };
  take_snapshots();
  while (r.field.t < cfg.T) {
    const double horizon = next_stop < stops.size() ? stops[next_stop] : cfg.T;
    double dt = cfl_dt(r.field, cfg, horizon);
    // Absorb a sliver left by round-off at the end of the horizon.
    const bool last = horizon - (r.field.t + dt) < 1e-12 * std::max(1.0, cfg.T);
    if (last) dt = horizon - r.field.t;
    const double theta = van_der_corput(r.field.n);
    r.flow.push_back(step(r.field, cfg, dt, theta, frozen));
    if (last) r.field.t = horizon;
    take_snapshots();
  }

  if (cfg.check_boundary) {
    const int n = cfg.grid.n_cells;
    for (int j : {0, 1, n - 2, n - 1}) {
      if (!(r.field.cells[j] == initial[j])) {
        throw BoundaryReached("waves reached the domain boundary by t = " +
                              std::to_string(r.field.t));
      }
    }
  }
  return r;
}

double l1_rel_error(const std::vector<State>& cells, const GridSpec& grid,
                    const std::function<State(double)>& exact) {
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j < static_cast<int>(cells.size()); ++j) {
    const State e = exact(grid.center(j));
    num += std::abs(cells[j].rho - e.rho) + std::abs(cells[j].q - e.q);
    den += std::abs(e.rho) + std::abs(e.q);
  }
  return num / den;
}

double average_flow(const FlowRecord& record, double T) {
  if (!(T > 0.0)) throw OutOfRange("averaging horizon must be positive");
  double end = 0.0;
  double integral = 0.0;
  for (const FlowEntry& e : record) {
    const double lo = e.t;
    const double hi = std::min(e.t + e.dt, T);
    if (hi > lo) integral += e.q * (hi - lo);
    end = std::max(end, e.t + e.dt);
  }
  if (end < T * (1.0 - 1e-12)) {
    throw SpanMismatch("flow record ends at t = " + std::to_string(end) + " before T = " +
                       std::to_string(T));
  }
  return integral / T;
}

void write_snapshot_csv(std::ostream& os, const std::vector<Snapshot>& snaps, const GridSpec& g) {
  os << "t,x,rho,q\n";
  os.precision(12);
  for (const Snapshot& s : snaps) {
    for (int j = 0; j < static_cast<int>(s.cells.size()); ++j) {
      os << s.t << ',' << g.center(j) << ',' << s.cells[j].rho << ',' << s.cells[j].q << '\n';
    }
  }
}

void write_flow_csv(std::ostream& os, const FlowRecord& record) {
  os << "n,t,dt,Q\n";
  os.precision(12);
  for (const FlowEntry& e : record) {
    os << e.n << ',' << e.t << ',' << e.dt << ',' << e.q << '\n';
  }
}

}  // namespace valveflow
