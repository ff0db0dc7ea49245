#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "valveflow/config.hpp"
#include "valveflow/error.hpp"
#include "valveflow/experiments.hpp"

using namespace valveflow;
using doctest::Approx;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in, "test");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parsing") {
  const Config c = parse("# comment\n a = 2 \nul=6,1   # trailing\n\nT = 0.5, 2,10\nflag = yes\n");
  CHECK(c.get_double("a") == 2.0);
  CHECK(c.get_state("ul") == State(6, 1));
  CHECK(c.get_list("T") == std::vector<double>{0.5, 2, 10});
  CHECK(c.get_bool("flag"));
  CHECK(c.get_or("missing", 7.0) == 7.0);
  CHECK(c.get_or("a", 7.0) == 2.0);
  CHECK_FALSE(c.find_state("ur").has_value());
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse("a 2\n"), UsageError);
  CHECK_THROWS_AS(parse(" = 2\n"), UsageError);
  const Config c = parse("a = two\nul = 1\nbad = -1,0\nb = maybe\n");
  CHECK_THROWS_AS(c.get_double("a"), UsageError);
  CHECK_THROWS_AS(c.get_state("ul"), UsageError);
  CHECK_THROWS_AS(c.get_state("bad"), UsageError);
  CHECK_THROWS_AS(c.get_bool("b"), UsageError);
  CHECK_THROWS_AS(c.get("nothing"), UsageError);
  CHECK_THROWS_AS(Config::load("/nonexistent/dir/x.cfg"), UsageError);
  try {
    parse("a = 1\noops\n");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("test:2") != std::string::npos);
  }
}

TEST_CASE("overrides") {
  Config c = parse("a = 1\n");
  c.set_assignment("a=3");
  c.set_assignment(" qstar = 2 ");
  CHECK(c.get_double("a") == 3.0);
  CHECK(c.get_double("qstar") == 2.0);
  CHECK_THROWS_AS(c.set_assignment("noequals"), UsageError);
}

}  // TEST_SUITE

TEST_SUITE("harness") {

TEST_CASE("experiment specs") {
  const ExperimentSpec s = ExperimentSpec::from_config(
      ExperimentKind::Convergence, parse("a=2\nqstar=3\nul=6,1\nur=1,-1\nT=0.2\ndx=4e-3,2e-3\n"));
  CHECK(s.dx_list.size() == 2);
  CHECK(s.solver.tag() == SolverKind::Tag::Aitch);

  const ExperimentSpec sh =
      ExperimentSpec::from_config(ExperimentKind::ShockMax, parse("a=1\nui=3,4\nur=8,0\nT=2\n"));
  CHECK(sh.u_l.v() == Approx(1.0));
  CHECK_FALSE(sh.has_u_l);
  CHECK(sh.q_grid.front() == Approx(0.01));
  CHECK(sh.q_grid[1] - sh.q_grid[0] == Approx(0.05));

  const ExperimentSpec rf =
      ExperimentSpec::from_config(ExperimentKind::RarefactionMax, parse("a=1\nui=3,0\nur=8,0\nqstar_grid=1,2"));
  CHECK(rf.u_l == sonic_point_fl2(State(3, 0), GasLaw(1.0)));
  CHECK(rf.q_grid.size() == 2);

  CHECK_THROWS_AS(ExperimentSpec::from_config(ExperimentKind::Convergence, parse("a=2\nul=6,1\nur=1,-1\n")),
                  UsageError);  // no qstar
  CHECK_THROWS_AS(ExperimentSpec::from_config(ExperimentKind::Chattering,
                                              parse("a=2\nqstar=3\nul=6,1\nur=1,-1\ndx=0\n")),
                  UsageError);
  CHECK_THROWS_AS(ExperimentSpec::from_config(ExperimentKind::Chattering,
                                              parse("a=2\nqstar=3\nul=6,1\nur=1,-1\nsolver=x\n")),
                  UsageError);
  CHECK_THROWS_AS(parse_experiment_kind("nope"), UsageError);
  CHECK(parse_experiment_kind("shock_max") == ExperimentKind::ShockMax);
}

TEST_CASE("grids and slopes") {
  const std::vector<double> g = uniform_grid(0.01, 0.21, 0.05);
  CHECK(g.size() == 5);
  CHECK(g.back() == Approx(0.21));
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 0.1), UsageError);

  std::vector<double> x{1e-3, 2e-3, 4e-3, 8e-3}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
  CHECK(loglog_slope(x, y) == Approx(1.5));
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), OutOfRange);
  CHECK_THROWS_AS(loglog_slope({1.0, 2.0}, {0.0, 1.0}), OutOfRange);

  const PiecewiseConstant ic = three_state_datum(State(3, 4), State(2, 2), State(8, 0));
  const GridSpec grid = auto_grid(ic, 1.0, 2.0, 2e-3);
  CHECK(grid.x_min < -1.0 - 1.5 * 2.0 * (4.0 / 3.0 + 1.0));
  CHECK(std::abs(grid.face(grid.j_valve + 1)) < 1e-9);
}

TEST_CASE("discontinuity detection and comparison") {
  std::vector<SweepRow> rows;
  for (int k = 0; k < 20; ++k) {
    const double q = 0.1 + 0.1 * k;
    const double f = q < 1.05 ? q : 0.0;
    rows.push_back({q, 1.0, f + 0.001, f});
  }
  const std::vector<double> d = detect_discontinuities(rows);
  REQUIRE(d.size() == 1);
  CHECK(d[0] == Approx(1.05));
  // A coarse but continuous ramp is not a jump.
  std::vector<SweepRow> ramp;
  for (int k = 0; k < 6; ++k) ramp.push_back({0.5 * k, 1.0, 0.5 * k, 0.5 * k});
  CHECK(detect_discontinuities(ramp).empty());
  const Agreement a = compare_off_jumps(rows, {1.05}, 0.1);
  CHECK(a.max_deviation == Approx(0.001));
  CHECK(a.excluded == 2);
  CHECK(a.checked == 18);
  rows[3].analytic = std::numeric_limits<double>::quiet_NaN();
  CHECK(compare_off_jumps(rows, {1.05}, 0.1).checked == 17);
}

TEST_CASE("alternation fraction") {
  FlowRecord r;
  for (int n = 0; n < 11; ++n) r.push_back({n, 0.0, 0.0, n % 2 ? 3.0 : 0.0});
  CHECK(alternation_fraction(r, 3.0) == 1.0);
  r[5].q = 0.0;
  CHECK(alternation_fraction(r, 3.0) == Approx(7.0 / 9.0));
  CHECK(alternation_fraction(FlowRecord{}, 3.0) == 0.0);
}

TEST_CASE("convergence of a constant datum") {
  ExperimentSpec s;
  s.a = 2.0;
  s.q_star = 3.0;
  s.u_l = s.u_r = State(2, 0.5);
  s.solver = SolverKind::lax();
  s.T_list = {0.05};
  s.dx_list = {1e-2, 5e-3};
  const ConvergenceResult r = run_convergence(s);
  REQUIRE(r.error.size() == 2);
  for (double e : r.error) CHECK(e == 0.0);
  CHECK(std::isnan(r.slope));
}

TEST_CASE("Riemann maximization: shape and determinism") {
  ExperimentSpec s;
  s.kind = ExperimentKind::RiemannMax;
  s.a = 2.0;
  s.u_l = s.u_i = State(2, 2);
  s.u_r = State(1, -1);
  s.T_list = {0.2, 0.1};
  s.dx_list = {1e-2};
  s.q_grid = uniform_grid(0.1, 3.5, 0.2);
  const SweepResult a = run_riemann_max(s);
  const SweepResult b = run_riemann_max(s);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) CHECK(a.rows[k].measured == b.rows[k].measured);
  REQUIRE(a.analytic_jumps.size() == 1);
  CHECK(a.analytic_jumps[0] == Approx(4.0 / std::sqrt(std::exp(1.0))));

  for (double T : s.T_list) {
    const std::vector<SweepRow> rows = a.at_T(T);
    double prev = -1.0;
    for (const SweepRow& r : rows) {
      CHECK(r.measured >= 0.0);
      CHECK(r.measured <= r.q_star + 1e-12);
      if (r.q_star < a.analytic_jumps[0]) {
        CHECK(r.measured >= prev);  // nondecreasing up to the jump
        prev = r.measured;
      }
    }
    CHECK(compare_off_jumps(rows, a.analytic_jumps, 0.2).max_deviation <= 0.05);
  }
}

TEST_CASE("rarefaction sweep has no closed form") {
  ExperimentSpec s = ExperimentSpec::from_config(
      ExperimentKind::RarefactionMax, parse("a=1\nui=3,0\nur=8,0\nT=0.3\ndx=1e-2\nqstar_grid=1,9"));
  const SweepResult r = run_rarefaction_max(s);
  REQUIRE(r.rows.size() == 2);
  for (const SweepRow& row : r.rows) {
    CHECK(std::isnan(row.analytic));
    CHECK(row.measured >= 0.0);
  }
}

TEST_CASE("CSV writers") {
  std::ostringstream s;
  write_summary_csv(s, {{"x", "y", 1.5}});
  CHECK(s.str() == "experiment,param,value\nx,y,1.5\n");
  SweepResult r;
  r.rows = {{1.0, 2.0, 0.5, std::numeric_limits<double>::quiet_NaN()}};
  std::ostringstream w;
  write_sweep_csv(w, r);
  CHECK(w.str() == "q_star,T,measured,analytic\n1,2,0.5,\n");
  std::ostringstream c;
  write_convergence_csv(c, {{0.1}, {0.01}, 1.0});
  CHECK(c.str() == "dx,error\n0.1,0.01\n");
}

}  // TEST_SUITE
