// Command-line driver: one subcommand per experiment family. Settings come from
// an optional "key = value" config file; flags override it.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "valveflow/config.hpp"
#include "valveflow/error.hpp"
#include "valveflow/experiments.hpp"
#include "valveflow/rcm.hpp"
#include "valveflow/valve.hpp"
#include "valveflow/wavefront.hpp"

namespace fs = std::filesystem;
using namespace valveflow;

namespace {

constexpr int kUsage = 2;
constexpr int kNumerical = 3;

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> sets;
  std::string ul, ur, ui, a, qstar, T, dx, solver, xi_grid, experiment;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("-c,--config", o.config, "key = value settings file");
  sub->add_option("-o,--out", o.out, "output directory");
  sub->add_option("--set", o.sets, "override a config key (key=value)");
  sub->add_option("--ul", o.ul, "left state rho,q");
  sub->add_option("--ur", o.ur, "right state rho,q");
  sub->add_option("--ui", o.ui, "far-left state rho,q (three-state data)");
  sub->add_option("--a", o.a, "sound speed");
  sub->add_option("--qstar", o.qstar, "valve threshold q*");
  sub->add_option("--T", o.T, "final time (or list)");
  sub->add_option("--dx", o.dx, "cell width (or list)");
  sub->add_option("--solver", o.solver, "p, v or h");
}

Config gather(const Options& o) {
  Config c;
  if (!o.config.empty()) c = Config::load(o.config);
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) c.set(key, v);
  };
  put("ul", o.ul);
  put("ur", o.ur);
  put("ui", o.ui);
  put("a", o.a);
  put("qstar", o.qstar);
  put("T", o.T);
  put("dx", o.dx);
  put("solver", o.solver);
  put("xi_grid", o.xi_grid);
  put("experiment", o.experiment);
  put("out", o.out);
  for (const std::string& s : o.sets) c.set_assignment(s);
  return c;
}

double positive(const Config& c, const std::string& key, double fallback = NAN) {
  const double v = std::isnan(fallback) ? c.get_double(key) : c.get_or(key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(key + " must be positive");
  return v;
}

fs::path out_dir(const Config& c) {
  fs::path p = c.get_or("out", std::string("."));
  fs::create_directories(p);
  return p;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw UsageError("cannot write '" + p.string() + "'");
  return f;
}

void report(const fs::path& dir, const std::vector<SummaryRow>& rows) {
  std::ofstream f = open_out(dir / "summary.csv");
  write_summary_csv(f, rows);
  std::cout << std::left << std::setw(18) << "experiment" << std::setw(26) << "param" << "value\n";
  for (const SummaryRow& r : rows) {
    std::cout << std::setw(18) << r.experiment << std::setw(26) << r.param
              << std::setprecision(8) << r.value << '\n';
  }
}

int cmd_riemann(const Config& c) {
  const GasLaw law(positive(c, "a"));
  const State ul = c.get_state("ul");
  const State ur = c.get_state("ur");
  const SolverKind kind = parse_solver(c.get_or("solver", std::string("h")));
  const double qs = positive(c, "qstar", 1.0);
  const ValveParams p(qs, law);
  const int n = static_cast<int>(c.get_or("xi_grid", 401.0));
  if (n < 2) throw UsageError("xi_grid needs at least 2 points");
  const double reach = 1.25 * (std::max(std::abs(ul.v()), std::abs(ur.v())) + law.a());
  const double lo = c.get_or("xi_min", -reach);
  const double hi = c.get_or("xi_max", reach);

  const CoupledSolution sol = solve_coupled(kind, ul, ur, p);
  const fs::path dir = out_dir(c);
  std::ofstream f = open_out(dir / "riemann_profile.csv");
  f << "xi,rho,q\n";
  f.precision(12);
  for (int k = 0; k < n; ++k) {
    const double xi = lo + (hi - lo) * k / (n - 1);
    const State u = sol(xi, law);
    f << xi << ',' << u.rho << ',' << u.q << '\n';
  }
  const State m = sol.trace_minus(law);
  const State pl = sol.trace_plus(law);
  report(dir, {{"riemann", "flow", sol.flow},
               {"riemann", "rho_minus", m.rho},
               {"riemann", "q_minus", m.q},
               {"riemann", "rho_plus", pl.rho},
               {"riemann", "q_plus", pl.q},
               {"riemann", "coherent", coherence_check(kind, ul, ur, p) ? 1.0 : 0.0}});
  return 0;
}

int cmd_run(const Config& c) {
  const ExperimentSpec s = ExperimentSpec::from_config(ExperimentKind::SingleRun, c);
  const bool three = c.has("ui");
  const PiecewiseConstant ic = three ? three_state_datum(c.get_state("ui"), s.u_l, s.u_r)
                                     : riemann_datum(s.u_l, s.u_r);
  RunConfig cfg;
  cfg.c_cfl = s.c_cfl;
  cfg.T = s.T();
  cfg.solver = s.solver;
  cfg.valve = s.params();
  cfg.freeze_flow = c.get_or("freeze_flow", false);
  cfg.snapshot_times = c.has("snapshots") ? c.get_list("snapshots") : std::vector<double>{s.T()};
  cfg.grid = auto_grid(ic, s.a, s.T(), s.dx());
  GridSpec used;
  const RunResult r = run_sized(cfg, ic, &used);

  const fs::path dir = out_dir(c);
  std::ofstream snaps = open_out(dir / "snapshots.csv");
  write_snapshot_csv(snaps, r.snapshots, used);
  std::ofstream flow = open_out(dir / "flow.csv");
  write_flow_csv(flow, r.flow);

  std::vector<SummaryRow> rows{{"run", "steps", static_cast<double>(r.flow.size())},
                               {"run", "x_min", used.x_min},
                               {"run", "x_max", used.x_max}};
  if (s.T() > 0.0) rows.push_back({"run", "average_flow", average_flow(r.flow, s.T())});
  if (!three && s.T() > 0.0) {
    const CoupledSolution exact = solve_coupled(s.solver, s.u_l, s.u_r, s.params());
    const GasLaw& law = cfg.valve.law();
    const double T = s.T();
    rows.push_back({"run", "l1_rel_error",
                    l1_rel_error(r.field.cells, used,
                                 [&](double x) { return exact(x / T, law); })});
  }
  report(dir, rows);
  return 0;
}

int cmd_convergence(const Config& c) {
  const ExperimentSpec s = ExperimentSpec::from_config(ExperimentKind::Convergence, c);
  const ConvergenceResult r = run_convergence(s);
  const fs::path dir = out_dir(c);
  std::ofstream f = open_out(dir / "convergence.csv");
  write_convergence_csv(f, r);
  std::vector<SummaryRow> rows;
  for (std::size_t k = 0; k < r.dx.size(); ++k) {
    rows.push_back({"convergence", "error_dx_" + std::to_string(k), r.error[k]});
  }
  rows.push_back({"convergence", "slope", r.slope});
  report(dir, rows);
  return 0;
}

int cmd_chattering(const Config& c) {
  const ExperimentSpec s = ExperimentSpec::from_config(ExperimentKind::Chattering, c);
  const ChatteringResult r = run_chattering(s);
  const fs::path dir = out_dir(c);
  const std::pair<const char*, const RunResult*> runs[] = {
      {"frozen", &r.frozen}, {"vee", &r.vee}, {"aitch", &r.aitch}};
  for (const auto& [name, res] : runs) {
    std::ofstream flow = open_out(dir / (std::string("flow_") + name + ".csv"));
    write_flow_csv(flow, res->flow);
    std::ofstream snap = open_out(dir / (std::string("snapshot_") + name + ".csv"));
    write_snapshot_csv(snap, res->snapshots, r.grid);
  }
  report(dir, {{"chattering", "vee_alternation", r.alternation},
               {"chattering", "aitch_constant", r.aitch_constant ? 1.0 : 0.0},
               {"chattering", "aitch_flow", r.aitch_flow},
               {"chattering", "frozen_flow", average_flow(r.frozen.flow, s.T())},
               {"chattering", "vee_average_flow", average_flow(r.vee.flow, s.T())},
               {"chattering", "l1_vee_aitch", r.l1_vee_aitch}});
  return 0;
}

int cmd_maximize(const Config& c) {
  const ExperimentKind kind = parse_experiment_kind(c.get_or("experiment", std::string("shock_max")));
  if (kind != ExperimentKind::RiemannMax && kind != ExperimentKind::ShockMax &&
      kind != ExperimentKind::RarefactionMax) {
    throw UsageError("maximize runs riemann_max, shock_max or rarefaction_max");
  }
  const ExperimentSpec s = ExperimentSpec::from_config(kind, c);
  const SweepResult r = kind == ExperimentKind::RiemannMax ? run_riemann_max(s)
                        : kind == ExperimentKind::ShockMax ? run_shock_max(s)
                                                           : run_rarefaction_max(s);
  const fs::path dir = out_dir(c);
  std::ofstream f = open_out(dir / "sweep.csv");
  write_sweep_csv(f, r);

  const std::string name = to_string(kind);
  const double step = s.q_grid.size() > 1 ? s.q_grid[1] - s.q_grid[0] : 0.0;
  std::vector<SummaryRow> rows{{name, "dx", r.dx}, {name, "c_cfl", r.c_cfl}};
  for (double T : s.T_list) {
    const std::vector<SweepRow> at = r.at_T(T);
    const std::string tag = "T=" + std::to_string(T).substr(0, 6);
    double best = 0.0;
    double arg = 0.0;
    for (const SweepRow& row : at) {
      if (row.measured > best) {
        best = row.measured;
        arg = row.q_star;
      }
    }
    rows.push_back({name, tag + " max_flow", best});
    rows.push_back({name, tag + " argmax_qstar", arg});
    const std::vector<double> jumps = detect_discontinuities(at);
    rows.push_back({name, tag + " discontinuities", static_cast<double>(jumps.size())});
    for (std::size_t k = 0; k < jumps.size(); ++k) {
      rows.push_back({name, tag + " jump_" + std::to_string(k), jumps[k]});
    }
    const Agreement ag = compare_off_jumps(at, r.analytic_jumps, step);
    if (ag.checked > 0) rows.push_back({name, tag + " max_deviation", ag.max_deviation});
  }
  report(dir, rows);
  return 0;
}

int cmd_wavefront(const Config& c) {
  const GasLaw law(positive(c, "a"));
  const ValveParams p(positive(c, "qstar"), law);
  const State ui = c.get_state("ui");
  const State ur = c.get_state("ur");
  const ScenarioData s = c.has("ul") ? ScenarioData(ui, c.get_state("ul"), ur, p)
                                     : ScenarioData::from_sonic_left(ui, ur, p);
  const ExactConstruction ex = build_exact(s);
  const double t = c.get_or("t", ex.solution.t_stop());
  const double x_lo = c.get_or("x_min", -2.0);
  const double x_hi = c.get_or("x_max", 3.0);
  const int n = static_cast<int>(c.get_or("points", 1001.0));
  if (n < 2 || !(x_hi > x_lo)) throw UsageError("profile needs x_min < x_max and 2+ points");
  std::vector<double> xs;
  for (int k = 0; k < n; ++k) xs.push_back(x_lo + (x_hi - x_lo) * k / (n - 1));

  const fs::path dir = out_dir(c);
  std::ofstream ev = open_out(dir / "events.csv");
  write_event_csv(ev, ex.log);
  std::ofstream prof = open_out(dir / "profile.csv");
  write_profile_csv(prof, ex.solution, t, xs);

  std::vector<SummaryRow> rows{{"wavefront", "case", static_cast<double>(ex.which)},
                               {"wavefront", "t_stop", ex.solution.t_stop()},
                               {"wavefront", "t_min", s.t_min()},
                               {"wavefront", "t2", s.t2_closed()},
                               {"wavefront", "rho_l", s.u_l.rho},
                               {"wavefront", "q_l", s.q_l},
                               {"wavefront", "rho_hat0", s.hat0.rho},
                               {"wavefront", "q_tilde", s.q_tilde},
                               {"wavefront", "rho_tilde", s.tilde0.rho},
                               {"wavefront", "q_bar_t", s.q_bar_t}};
  if (c.has("T")) {
    const double T = c.get_double("T");
    rows.push_back({"wavefront", "average_flow", exact_trace_flow(ex, s, T)});
  }
  std::cout << "case " << to_string(ex.which) << ", stop: " << ex.log.stop_reason << '\n';
  report(dir, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isothermal flow through a one-way valve: Riemann solvers, RCM runs and flow sweeps"};
  app.require_subcommand(1);
  Options o;

  CLI::App* riemann = app.add_subcommand("riemann", "self-similar solution of one valve Riemann problem");
  add_common(riemann, o);
  riemann->add_option("--xi-grid", o.xi_grid, "number of xi samples");
  CLI::App* run = app.add_subcommand("run", "single RCM run with snapshots and flow record");
  add_common(run, o);
  CLI::App* conv = app.add_subcommand("convergence", "L1 error against the exact solution over dx");
  add_common(conv, o);
  CLI::App* chat = app.add_subcommand("chattering", "frozen, per-step Vee and Aitch runs side by side");
  add_common(chat, o);
  CLI::App* maxi = app.add_subcommand("maximize", "average valve flow over a q* grid");
  add_common(maxi, o);
  maxi->add_option("--experiment", o.experiment, "riemann_max, shock_max or rarefaction_max");
  CLI::App* wave = app.add_subcommand("wavefront", "exact wave construction for the three-state datum");
  add_common(wave, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const Config c = gather(o);
    if (name == "riemann") return cmd_riemann(c);
    if (name == "run") return cmd_run(c);
    if (name == "convergence") return cmd_convergence(c);
    if (name == "chattering") return cmd_chattering(c);
    if (name == "maximize") return cmd_maximize(c);
    return cmd_wavefront(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "numerical failure in " << name << ": " << e.what() << '\n';
    return kNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }
}
