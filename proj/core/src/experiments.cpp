#include "valveflow/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "valveflow/error.hpp"

namespace valveflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_speed(const std::vector<State>& states, double a) {
  double s = 0.0;
  for (const State& u : states) s = std::max(s, std::abs(u.v()) + a);
  return s;
}

void require_positive(const std::vector<double>& v, const std::string& what) {
  if (v.empty()) throw UsageError(what + " must not be empty");
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) throw UsageError(what + " entries must be positive");
  }
}

RunConfig base_config(const ExperimentSpec& spec, double q_star, double T) {
  RunConfig cfg;
  cfg.c_cfl = spec.c_cfl;
  cfg.T = T;
  cfg.solver = spec.solver;
  cfg.valve = ValveParams(q_star, GasLaw(spec.a));
  return cfg;
}

double profile_l1(const std::vector<State>& a, const std::vector<State>& ref) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < ref.size(); ++j) {
    num += std::abs(a[j].rho - ref[j].rho) + std::abs(a[j].q - ref[j].q);
    den += std::abs(ref[j].rho) + std::abs(ref[j].q);
  }
  return num / den;
}

// One run per q* at the longest horizon; shorter horizons read the same record.
SweepResult sweep(const ExperimentSpec& spec, const PiecewiseConstant& ic,
                  const std::function<double(double q, double T)>& analytic) {
  SweepResult r;
  r.dx = spec.dx();
  r.c_cfl = spec.c_cfl;
  r.solver = spec.solver.name();
  const double T_max = *std::max_element(spec.T_list.begin(), spec.T_list.end());
  for (double q : spec.q_grid) {
    RunConfig cfg = base_config(spec, q, T_max);
    cfg.grid = auto_grid(ic, spec.a, T_max, spec.dx());
    const RunResult run = run_sized(cfg, ic);
    for (double T : spec.T_list) {
      r.rows.push_back({q, T, average_flow(run.flow, T), analytic(q, T)});
    }
  }
  return r;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SingleRun:
      return "run";
    case ExperimentKind::Convergence:
      return "convergence";
    case ExperimentKind::Chattering:
      return "chattering";
    case ExperimentKind::RiemannMax:
      return "riemann_max";
    case ExperimentKind::ShockMax:
      return "shock_max";
    case ExperimentKind::RarefactionMax:
      return "rarefaction_max";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  for (ExperimentKind k : {ExperimentKind::SingleRun, ExperimentKind::Convergence,
                           ExperimentKind::Chattering, ExperimentKind::RiemannMax,
                           ExperimentKind::ShockMax, ExperimentKind::RarefactionMax}) {
    if (to_string(k) == s) return k;
  }
  throw UsageError("unknown experiment '" + s + "'");
}

SolverKind parse_solver(const std::string& s) {
  if (s == "p" || s == "lax") return SolverKind::lax();
  if (s == "v" || s == "vee") return SolverKind::vee();
  if (s == "h" || s == "aitch") return SolverKind::aitch();
  throw UsageError("unknown solver '" + s + "' (expected p, v or h)");
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw UsageError("q* grid needs step > 0 and max >= min");
  std::vector<double> g;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= n; ++k) g.push_back(lo + static_cast<double>(k) * step);
  return g;
}

ExperimentSpec ExperimentSpec::from_config(ExperimentKind kind, const Config& cfg) {
  ExperimentSpec s;
  s.kind = kind;
  s.a = cfg.get_double("a");
  if (!(s.a > 0.0)) throw UsageError("a must be positive");
  s.u_r = cfg.get_state("ur");
  const bool three_state = kind == ExperimentKind::ShockMax || kind == ExperimentKind::RarefactionMax;
  const GasLaw law(s.a);
  if (three_state) {
    s.u_i = cfg.get_state("ui");
    if (auto ul = cfg.find_state("ul")) {
      s.u_l = *ul;
      s.has_u_l = true;
    } else {
      s.u_l = sonic_point_fl2(s.u_i, law);
    }
  } else {
    s.u_l = cfg.get_state("ul");
    s.has_u_l = true;
    s.u_i = s.u_l;
  }
  if (cfg.has("T")) s.T_list = cfg.get_list("T");
  if (cfg.has("dx")) s.dx_list = cfg.get_list("dx");
  require_positive(s.T_list, "T");
  require_positive(s.dx_list, "dx");
  s.c_cfl = cfg.get_or("cfl", 0.45);
  if (!(s.c_cfl > 0.0) || s.c_cfl > 0.5) throw UsageError("cfl must lie in (0, 0.5]");
  s.solver = parse_solver(cfg.get_or("solver", std::string("h")));
  s.out_dir = cfg.get_or("out", std::string("."));

  const bool sweep = three_state || kind == ExperimentKind::RiemannMax;
  if (sweep) {
    if (cfg.has("qstar_grid")) {
      s.q_grid = cfg.get_list("qstar_grid");
    } else {
      double scale = std::max(q_cap(s.u_l, law), ring_q(s.u_l, law));
      if (three_state) scale = std::max(scale, q_cap(s.u_i, law));
      s.q_grid = uniform_grid(cfg.get_or("qstar_min", 0.01), cfg.get_or("qstar_max", 1.5 * scale),
                              cfg.get_or("qstar_step", 0.05));
    }
    require_positive(s.q_grid, "qstar grid");
    s.q_star = s.q_grid.front();
  } else {
    s.q_star = cfg.get_double("qstar");
    if (!(s.q_star > 0.0)) throw UsageError("qstar must be positive");
  }
  return s;
}

PiecewiseConstant riemann_datum(const State& ul, const State& ur) {
  return PiecewiseConstant({0.0}, {ul, ur});
}

PiecewiseConstant three_state_datum(const State& ui, const State& ul, const State& ur) {
  return PiecewiseConstant({-1.0, 0.0}, {ui, ul, ur});
}

GridSpec auto_grid(const PiecewiseConstant& ic, double a, double T, double dx) {
  const double reach = 1.5 * max_speed(ic.values, a) * T + 0.1 + 4.0 * dx;
  const double lo = std::min(0.0, ic.breaks.front()) - reach;
  const double hi = std::max(0.0, ic.breaks.back()) + reach;
  // Whole cells on each side of the valve face.
  const double left = std::ceil(-lo / dx) * dx;
  const double right = std::ceil(hi / dx) * dx;
  return GridSpec::make(-left, right, dx);
}

RunResult run_sized(RunConfig cfg, const PiecewiseConstant& ic, GridSpec* used) {
  for (int attempt = 0;; ++attempt) {
    try {
      RunResult r = run(cfg, ic);
      if (used) *used = cfg.grid;
      return r;
    } catch (const BoundaryReached&) {
      if (attempt == 2) throw;
      const GridSpec& g = cfg.grid;
      const double dx = g.dx;
      cfg.grid = GridSpec::make(2.0 * g.x_min - dx, 2.0 * g.x_max + dx, dx);
    }
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw OutOfRange("slope needs two or more points");
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw OutOfRange("log-log slope of a nonpositive value");
  }
  double mx = 0.0;
  double my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]) / n;
    my += std::log(y[k]) / n;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ConvergenceResult run_convergence(const ExperimentSpec& spec) {
  const ValveParams p = spec.params();
  const GasLaw& law = p.law();
  const double T = spec.T();
  const CoupledSolution exact = solve_coupled(spec.solver, spec.u_l, spec.u_r, p);
  const PiecewiseConstant ic = riemann_datum(spec.u_l, spec.u_r);
  ConvergenceResult r;
  for (double dx : spec.dx_list) {
    RunConfig cfg = base_config(spec, spec.q_star, T);
    cfg.grid = GridSpec::make(-1.0, 1.0, dx);
    const RunResult run = valveflow::run(cfg, ic);
    r.dx.push_back(dx);
    r.error.push_back(l1_rel_error(run.field.cells, cfg.grid,
                                   [&](double x) { return exact(x / T, law); }));
  }
  // Exact reproduction (zero error) has no slope.
  r.slope = std::numeric_limits<double>::quiet_NaN();
  const bool positive = std::all_of(r.error.begin(), r.error.end(), [](double e) { return e > 0.0; });
  if (r.dx.size() >= 2 && positive) r.slope = loglog_slope(r.dx, r.error);
  return r;
}

double alternation_fraction(const FlowRecord& rec, double q_star) {
  auto is = [](double q, double target) {
    return std::abs(q - target) <= 1e-9 * std::max(1.0, target);
  };
  long pairs = 0;
  long swaps = 0;
  for (std::size_t n = 1; n + 1 < rec.size(); ++n) {
    ++pairs;
    const double x = rec[n].q;
    const double y = rec[n + 1].q;
    if ((is(x, 0.0) && is(y, q_star)) || (is(x, q_star) && is(y, 0.0))) ++swaps;
  }
  return pairs == 0 ? 0.0 : static_cast<double>(swaps) / static_cast<double>(pairs);
}

ChatteringResult run_chattering(const ExperimentSpec& spec) {
  const PiecewiseConstant ic = riemann_datum(spec.u_l, spec.u_r);
  const double T = spec.T();
  ChatteringResult r;

  RunConfig cfg = base_config(spec, spec.q_star, T);
  cfg.solver = SolverKind::vee();
  cfg.snapshot_times = {T};
  cfg.grid = auto_grid(ic, spec.a, T, spec.dx());
  r.vee = run_sized(cfg, ic, &r.grid);
  cfg.grid = r.grid;

  cfg.freeze_flow = true;
  r.frozen = run(cfg, ic);

  cfg.freeze_flow = false;
  cfg.solver = SolverKind::aitch();
  r.aitch = run(cfg, ic);

  r.alternation = alternation_fraction(r.vee.flow, spec.q_star);
  const double lead = r.aitch.flow.empty() ? 0.0 : r.aitch.flow.front().q;
  r.aitch_flow = lead;
  r.aitch_constant = std::all_of(r.aitch.flow.begin(), r.aitch.flow.end(), [&](const FlowEntry& e) {
    return std::abs(e.q - lead) <= 1e-9 * std::max(1.0, lead);
  });
  r.l1_vee_aitch = profile_l1(r.vee.field.cells, r.aitch.field.cells);
  return r;
}

std::vector<SweepRow> SweepResult::at_T(double T) const {
  std::vector<SweepRow> out;
  for (const SweepRow& row : rows) {
    if (row.T == T) out.push_back(row);
  }
  std::sort(out.begin(), out.end(),
            [](const SweepRow& x, const SweepRow& y) { return x.q_star < y.q_star; });
  return out;
}

SweepResult run_riemann_max(const ExperimentSpec& spec) {
  const GasLaw law(spec.a);
  const State ul = spec.u_l;
  auto analytic = [&](double q, double) { return q_aitch(ul, ValveParams(q, law)); };
  SweepResult r = sweep(spec, riemann_datum(ul, spec.u_r), analytic);
  // Q_h jumps only at the two thresholds, and only where its one-sided values differ.
  for (double c : {q_cap(ul, law), ring_q(ul, law)}) {
    const double eps = 1e-7 * std::max(1.0, c);
    if (std::abs(analytic(c + eps, 0.0) - analytic(c, 0.0)) > 1e-4 &&
        std::find(r.analytic_jumps.begin(), r.analytic_jumps.end(), c) == r.analytic_jumps.end()) {
      r.analytic_jumps.push_back(c);
    }
  }
  return r;
}

SweepResult run_shock_max(const ExperimentSpec& spec) {
  const ValveParams p0(spec.q_grid.front(), GasLaw(spec.a));
  const ScenarioData s = spec.has_u_l ? ScenarioData(spec.u_i, spec.u_l, spec.u_r, p0)
                                      : ScenarioData::from_sonic_left(spec.u_i, spec.u_r, p0);
  auto analytic = [&](double q, double T) {
    return T <= s.formula_horizon ? formula_average_flow(s.with_q_star(q), T) : kNaN;
  };
  SweepResult r = sweep(spec, three_state_datum(s.u_i, s.u_l, s.u_r), analytic);
  r.analytic_jumps = {s.q_l, s.q_bar_t};
  return r;
}

SweepResult run_rarefaction_max(const ExperimentSpec& spec) {
  return sweep(spec, three_state_datum(spec.u_i, spec.u_l, spec.u_r),
               [](double, double) { return kNaN; });
}

std::vector<double> detect_discontinuities(const std::vector<SweepRow>& rows, double jump) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    // Continuous pieces of the flow grow at most like q* itself.
    const double dq = std::abs(rows[k + 1].q_star - rows[k].q_star);
    if (std::abs(rows[k + 1].measured - rows[k].measured) > dq + jump) {
      out.push_back(0.5 * (rows[k].q_star + rows[k + 1].q_star));
    }
  }
  return out;
}

Agreement compare_off_jumps(const std::vector<SweepRow>& rows, const std::vector<double>& jumps,
                            double band) {
  Agreement a;
  for (const SweepRow& row : rows) {
    if (!std::isfinite(row.analytic)) continue;
    const bool near = std::any_of(jumps.begin(), jumps.end(),
                                  [&](double j) { return std::abs(row.q_star - j) <= band; });
    if (near) {
      ++a.excluded;
      continue;
    }
    ++a.checked;
    a.max_deviation = std::max(a.max_deviation,
                               std::abs(row.measured - row.analytic) / std::max(1.0, row.q_star));
  }
  return a;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "experiment,param,value\n";
  os.precision(12);
  for (const SummaryRow& r : rows) os << r.experiment << ',' << r.param << ',' << r.value << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "q_star,T,measured,analytic\n";
  os.precision(12);
  for (const SweepRow& row : r.rows) {
    os << row.q_star << ',' << row.T << ',' << row.measured << ',';
    if (std::isfinite(row.analytic)) os << row.analytic;
    os << '\n';
  }
}

void write_convergence_csv(std::ostream& os, const ConvergenceResult& r) {
  os << "dx,error\n";
  os.precision(12);
  for (std::size_t k = 0; k < r.dx.size(); ++k) os << r.dx[k] << ',' << r.error[k] << '\n';
}

}  // namespace valveflow
