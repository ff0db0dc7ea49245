// Acceptance checks, one line per criterion:
//   acceptance            run all
//   acceptance N [M...]   run the listed criteria
// Exit status is non-zero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "valveflow/experiments.hpp"
#include "valveflow/gas.hpp"
#include "valveflow/rcm.hpp"
#include "valveflow/riemann.hpp"
#include "valveflow/valve.hpp"
#include "valveflow/wavefront.hpp"

using namespace valveflow;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

bool in(double x, double lo, double hi) { return x >= lo && x <= hi; }

Outcome c1_formulas() {
  Outcome o;
  const GasLaw law(2.0);
  const double qbar = bar_q(State(2.0, 2.0), law);
  const double qbar_ref = 4.0 / std::sqrt(std::numbers::e);
  const double ring = ring_q(State(0.25, 2.5), law);
  const double ring_ref = std::pow(10.0 + 2.0 * std::sqrt(29.0), 2) / (32.0 * std::numbers::e);
  o.require(std::abs(qbar - qbar_ref) <= 1e-9, "q_bar((2,2)) = 4/sqrt(e)");
  o.require(std::abs(ring - ring_ref) <= 1e-9, "q_ring((1/4,5/2))");
  o.require(in(v_sup_ratio(), 1.62, 1.64), "v_sup/a in [1.62,1.64]");
  o.require(in(v_sub_ratio(), 0.80, 0.82), "v_sub/a in [0.80,0.82]");
  o.detail.precision(10);
  o.detail << "q_bar=" << qbar << " q_ring=" << ring << " v_sup/a=" << v_sup_ratio()
           << " v_sub/a=" << v_sub_ratio();
  return o;
}

Outcome c2_scenario() {
  Outcome o;
  const GasLaw law(1.0);
  const State ui(3.0, 4.0), ur(8.0, 0.0);
  const ScenarioData s = ScenarioData::from_sonic_left(ui, ur, ValveParams(1.0, law));
  o.require(in(s.u_l.rho, 2.14, 2.16), "rho_l");
  o.require(in(s.hat0.rho, 5.63, 5.65), "rho_hat(0,u_l)");
  o.require(in(s.q_tilde, 2.61, 2.63), "q_tilde");
  o.require(in(s.tilde0.rho, 7.84, 7.86), "rho_tilde");
  o.require(in(s.q_bar_t, 4.02, 4.04), "q_bar_t");
  o.require(in(s.t_min(), 0.45, 0.47), "T_min");
  o.require(in(s.t2_closed(), 0.52, 0.56), "t_2");
  o.detail.precision(6);
  o.detail << "rho_l=" << s.u_l.rho << " rho_hat=" << s.hat0.rho << " q_tilde=" << s.q_tilde
           << " rho_tilde=" << s.tilde0.rho << " q_bar_t=" << s.q_bar_t << " T_min=" << s.t_min()
           << " t2=" << s.t2_closed();

  struct Stop {
    double q;
    Case c;
    double lo, hi;
  };
  for (const Stop& st : {Stop{0.2, Case::A, 1.35, 1.39}, Stop{2.2, Case::B, 1.54, 1.58},
                         Stop{3.5, Case::C, 1.24, 1.28}, Stop{4.5, Case::D, 1.42, 1.46}}) {
    const ScenarioData sq = s.with_q_star(st.q);
    const ExactConstruction ex = build_exact(sq);
    const double t = ex.solution.t_stop();
    o.require(ex.which == st.c, "case of q*=" + std::to_string(st.q));
    o.require(in(t, st.lo, st.hi), "stop time of case " + to_string(st.c));
    o.require(t >= s.t_min() - 1e-12, "stop time >= T_min");
    o.detail << " T_" << to_string(ex.which) << "=" << t;
  }
  return o;
}

ExperimentSpec example(int which) {
  ExperimentSpec s;
  s.kind = ExperimentKind::Convergence;
  s.a = 2.0;
  s.q_star = 3.0;
  s.u_l = which == 1 ? State(6.0, 1.0) : State(2.0, 2.0);
  s.u_r = which == 1 ? State(1.0, -1.0) : State(3.0, 4.0);
  s.T_list = {0.2};
  s.dx_list = {4e-3, 2e-3, 1e-3, 5e-4};
  s.solver = SolverKind::aitch();
  return s;
}

// Both examples are shared by criteria 3 and 4.
const ConvergenceResult& convergence(int which) {
  static ConvergenceResult r1 = run_convergence(example(1));
  static ConvergenceResult r2 = run_convergence(example(2));
  return which == 1 ? r1 : r2;
}

Outcome c3_order() {
  Outcome o;
  o.detail.precision(4);
  for (int k : {1, 2}) {
    const ConvergenceResult& r = convergence(k);
    o.require(in(r.slope, 0.7, 1.3), "slope of example " + std::to_string(k));
    o.detail << "example " << k << ": errors";
    for (double e : r.error) o.detail << ' ' << e;
    o.detail << " slope=" << r.slope << "; ";
  }
  return o;
}

Outcome c4_profiles() {
  Outcome o;
  o.detail.precision(4);
  for (int k : {1, 2}) {
    const double e = convergence(k).error.back();
    o.require(e <= 0.05, "L1 error of example " + std::to_string(k) + " at dx=5e-4");
    o.detail << "example " << k << " e_L1=" << e << "; ";
  }
  return o;
}

State random_state(std::mt19937_64& rng, double a, double v_lo, double v_hi) {
  std::uniform_real_distribution<double> lr(std::log(0.02), std::log(20.0));
  std::uniform_real_distribution<double> vv(v_lo, v_hi);
  const double rho = std::exp(lr(rng));
  return State(rho, rho * a * vv(rng));
}

Outcome c5_coherence() {
  Outcome o;
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> ua(0.5, 3.0), uq(0.5, 5.0);
  int counts[3] = {0, 0, 0};
  int aitch_bad = 0, vee_bad = 0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const ValveParams p(uq(rng), GasLaw(ua(rng)));
    const State ul = random_state(rng, p.a(), -2.0, 6.0);
    const State ur = random_state(rng, p.a(), -3.0, 3.0);
    const RegionTag tag = classify_region(ul, p);
    ++counts[static_cast<int>(tag.region)];
    if (!coherence_check(SolverKind::aitch(), ul, ur, p)) ++aitch_bad;
    const bool incoherent = tag.region == Region::Incoherent;
    if (coherence_check(SolverKind::vee(), ul, ur, p) == incoherent) ++vee_bad;
  }
  o.require(aitch_bad == 0, "Aitch coherent on every pair");
  o.require(vee_bad == 0, "Vee incoherent exactly on the complement of CH_l");
  o.require(counts[0] > 0 && counts[1] > 0 && counts[2] > 0, "every region sampled");
  o.detail << n << " pairs, regions closed/open/incoherent = " << counts[0] << '/' << counts[1]
           << '/' << counts[2] << ", Aitch failures " << aitch_bad << ", Vee mismatches "
           << vee_bad;
  return o;
}

Outcome c6_maximality() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ua(0.5, 3.0), uq(0.5, 5.0), u01(0.0, 1.0);
  int draws = 0, tries = 0, bad = 0;
  double worst = -1e300;
  while (draws < 1000 && tries < 1000000) {
    ++tries;
    const ValveParams p(uq(rng), GasLaw(ua(rng)));
    const State ul = random_state(rng, p.a(), 0.5, 6.0);
    if (classify_region(ul, p).region != Region::Incoherent) continue;
    ++draws;
    const State ur = random_state(rng, p.a(), -3.0, 3.0);
    const GasLaw& law = p.law();
    const double h = solve_coupled(SolverKind::aitch(), ul, ur, p).trace_minus(law).q;
    // An admissible custom law: a random fraction of the cap, shaped by both states.
    const double alpha = u01(rng), beta = u01(rng);
    const SolverKind custom = SolverKind::custom([&](const State& l, const State& r) {
      const double w = 0.5 + 0.5 * std::sin(beta * 10.0 * r.v() + l.rho);
      return q_cap(l, law) * std::min(1.0, alpha * w + (1.0 - alpha) * u01(rng));
    });
    const double c = solve_coupled(custom, ul, ur, p).trace_minus(law).q;
    const bool ok = c <= h * (1.0 + 1e-12) && std::abs(h - ul.q) <= 1e-12 * std::max(1.0, ul.q) &&
                    ul.q < p.q_star();
    if (!ok) ++bad;
    worst = std::max(worst, c - h);
  }
  o.require(draws == 1000, "1000 draws in the complement of CH_l");
  o.require(bad == 0, "custom flow <= Aitch flow = q_l < q*");
  o.detail << draws << " draws, violations " << bad << ", max(custom - aitch) = " << worst;
  return o;
}

ExperimentSpec sweep_spec(ExperimentKind k, double a, State ui, State ul, State ur, double T,
                          double q_hi) {
  ExperimentSpec s;
  s.kind = k;
  s.a = a;
  s.u_i = ui;
  s.u_l = ul;
  s.u_r = ur;
  s.has_u_l = k == ExperimentKind::RiemannMax;
  s.T_list = {T};
  s.dx_list = {2e-3};
  s.solver = SolverKind::aitch();
  s.q_grid = uniform_grid(0.01, q_hi, 0.05);
  return s;
}

Outcome c7_riemann_max() {
  Outcome o;
  o.detail.precision(4);
  for (const State ul : {State(2.0, 2.0), State(0.25, 2.5)}) {
    const GasLaw law(2.0);
    const double hi = 1.5 * std::max(q_cap(ul, law), ring_q(ul, law));
    const ExperimentSpec s =
        sweep_spec(ExperimentKind::RiemannMax, 2.0, ul, ul, State(1.0, -1.0), 0.2, hi);
    const SweepResult r = run_riemann_max(s);
    const Agreement ag = compare_off_jumps(r.at_T(0.2), r.analytic_jumps, 0.05);
    o.require(ag.max_deviation <= 0.05 && ag.checked > 0,
              "agreement for u_l=(" + std::to_string(ul.rho) + "," + std::to_string(ul.q) + ")");
    o.detail << "u_l=(" << ul.rho << ',' << ul.q << "): " << ag.checked << " points, max dev "
             << ag.max_deviation << ", excluded " << ag.excluded << "; ";
  }
  return o;
}

Outcome c8_shock_max() {
  Outcome o;
  const GasLaw law(1.0);
  const State ui(3.0, 4.0), ur(8.0, 0.0);
  const ScenarioData sd = ScenarioData::from_sonic_left(ui, ur, ValveParams(1.0, law));
  const ExperimentSpec s =
      sweep_spec(ExperimentKind::ShockMax, 1.0, ui, sd.u_l, ur, 2.0, 1.5 * sd.q_bar_t);
  const SweepResult r = run_shock_max(s);
  const std::vector<SweepRow> rows = r.at_T(2.0);
  const Agreement ag = compare_off_jumps(rows, r.analytic_jumps, 0.05);
  const std::vector<double> jumps = detect_discontinuities(rows);
  o.require(ag.max_deviation <= 0.05 && ag.checked > 0, "agreement with the closed form");
  o.require(jumps.size() == 2, "exactly two discontinuities");
  if (jumps.size() == 2) {
    o.require(std::abs(jumps[0] - sd.q_l) <= 0.05, "first jump at q_l");
    o.require(std::abs(jumps[1] - sd.q_bar_t) <= 0.05, "second jump at q_bar_t");
  }
  o.detail.precision(4);
  o.detail << rows.size() << " q* values, max dev " << ag.max_deviation << ", jumps at";
  for (double j : jumps) o.detail << ' ' << j;
  o.detail << " (expected " << sd.q_l << ", " << sd.q_bar_t << ")";
  return o;
}

Outcome c9_chattering() {
  Outcome o;
  ExperimentSpec s;
  s.kind = ExperimentKind::Chattering;
  s.a = 2.0;
  s.q_star = 3.0;
  s.u_l = State(0.25, 2.5);
  s.u_r = State(6.0, 11.0);
  s.T_list = {0.2};
  s.dx_list = {2e-3};
  const ChatteringResult r = run_chattering(s);
  o.require(r.alternation >= 0.9, "per-step Vee alternates 0/3 on >= 90% of step pairs");
  o.require(r.aitch_constant && std::abs(r.aitch_flow - 2.5) <= 1e-9, "Aitch holds Q = 2.5");
  o.detail.precision(4);
  o.detail << "Vee alternation " << r.alternation << " over " << r.vee.flow.size()
           << " steps, Aitch constant=" << r.aitch_constant << " Q=" << r.aitch_flow
           << ", frozen average " << average_flow(r.frozen.flow, 0.2) << ", L1(Vee,Aitch)="
           << r.l1_vee_aitch << " (reported)";
  return o;
}

Outcome c10_micro() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> ua(0.3, 4.0), uv(-5.0, 5.0), lr(std::log(0.01), std::log(100.0));
  std::bernoulli_distribution coin(0.5);
  double worst_rh = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const GasLaw law(ua(rng));
    const double r0 = std::exp(lr(rng));
    const State uo(r0, r0 * uv(rng));
    const double rho = std::exp(lr(rng));
    const int fam = coin(rng) ? 1 : 2;
    const State u(rho, shock_curve(fam, uo, rho, law));
    const double s = shock_speed(fam, uo, rho, law);
    const double a2 = law.a() * law.a();
    const double mass = s * (u.rho - uo.rho) - (u.q - uo.q);
    const double flux = u.q * u.q / u.rho + a2 * u.rho - uo.q * uo.q / uo.rho - a2 * uo.rho;
    const double mom = s * (u.q - uo.q) - flux;
    const double scale_m = std::max({1.0, std::abs(u.q), std::abs(uo.q), std::abs(s * u.rho)});
    const double scale_f =
        std::max({1.0, std::abs(s * u.q), std::abs(s * uo.q), u.q * u.q / u.rho + a2 * u.rho,
                  uo.q * uo.q / uo.rho + a2 * uo.rho});
    worst_rh = std::max({worst_rh, std::abs(mass) / scale_m, std::abs(mom) / scale_f});
  }
  o.require(worst_rh <= 1e-10, "Rankine-Hugoniot residual <= 1e-10");

  double worst_inv = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const GasLaw law(ua(rng));
    const double r0 = std::exp(lr(rng));
    const State uo(r0, r0 * uv(rng));
    const double rho = std::exp(lr(rng));
    const double q1 = rarefaction_curve(1, uo, rho, law);
    const double q2 = rarefaction_curve(2, uo, rho, law);
    const double w1 = uo.v() + law.a() * std::log(uo.rho);
    const double w2 = uo.v() - law.a() * std::log(uo.rho);
    const double d1 = q1 / rho + law.a() * std::log(rho) - w1;
    const double d2 = q2 / rho - law.a() * std::log(rho) - w2;
    worst_inv = std::max({worst_inv, std::abs(d1) / std::max(1.0, std::abs(w1)),
                          std::abs(d2) / std::max(1.0, std::abs(w2))});
  }
  o.require(worst_inv <= 1e-12, "rarefaction invariants constant to 1e-12");

  int incoherent = 0;
  for (int k = 0; k < 10000; ++k) {
    const GasLaw law(ua(rng));
    const State ul = random_state(rng, law.a(), -3.0, 3.0);
    const State ur = random_state(rng, law.a(), -3.0, 3.0);
    const WavePattern pat = solve_rp(ul, ur, law);
    // Probe at a wave (shock speed or fan edge) half of the time, elsewhere otherwise.
    double xi0 = std::uniform_real_distribution<double>(-8.0, 8.0)(rng);
    if (coin(rng)) {
      const Wave& w = pat.waves[coin(rng) ? 0 : 1];
      xi0 = coin(rng) ? w.speed_lo : w.speed_hi;
    }
    const State m = sample_left_limit(pat, xi0, law);
    const State pl = sample(pat, xi0, law);
    const WavePattern again = solve_rp(m, pl, law);
    const double eps = 1e-7 * law.a();
    auto close = [](const State& x, const State& y) {
      return std::abs(x.rho - y.rho) <= 1e-8 * std::max(1.0, y.rho) &&
             std::abs(x.q - y.q) <= 1e-8 * std::max(1.0, std::abs(y.q));
    };
    // Re-solving from the two traces must only produce a jump located at xi0.
    const bool ok = close(sample(again, xi0 - eps, law), m) && close(sample(again, xi0 + eps, law), pl) &&
                    close(sample(again, xi0 - 1.0, law), m) && close(sample(again, xi0 + 1.0, law), pl);
    if (!ok) ++incoherent;
  }
  o.require(incoherent == 0, "RS_p coherent on 10^4 pairs");
  o.detail << "RH worst " << worst_rh << ", invariant worst " << worst_inv
           << ", RS_p incoherent pairs " << incoherent;
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "curve and special-state formulas", c1_formulas},
      {2, "three-state scenario constants and stop times", c2_scenario},
      {3, "RCM convergence order", c3_order},
      {4, "RCM profile agreement", c4_profiles},
      {5, "coherence suite", c5_coherence},
      {6, "flow maximality", c6_maximality},
      {7, "Riemann maximization curves", c7_riemann_max},
      {8, "shock-case maximization", c8_shock_max},
      {9, "chattering reproduction", c9_chattering},
      {10, "RH and invariant micro-suite", c10_micro},
  };
  std::vector<int> pick;
  for (int k = 1; k < argc; ++k) pick.push_back(std::atoi(argv[k]));

  bool all_pass = true;
  for (const Criterion& c : all) {
    if (!pick.empty() && std::find(pick.begin(), pick.end(), c.id) == pick.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d (%s): %s [%.1fs] %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.str().c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
