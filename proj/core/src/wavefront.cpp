#include "valveflow/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <utility>

#include "valveflow/error.hpp"

namespace valveflow {

namespace {

constexpr int kMaxEvents = 64;

double rh_speed(const State& a, const State& b) { return (b.q - a.q) / (b.rho - a.rho); }

bool is_fan(const Front& f) { return f.wave.kind == WaveKind::RarefactionFan; }

std::vector<std::string> labels(const std::vector<Front>& fs) {
  std::vector<std::string> out;
  for (const Front& f : fs) out.push_back(wave_label(f.wave));
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ";" : "") + v[k];
  return s;
}

Front valve_front(const State& minus, const State& plus, double t) {
  Front f;
  f.wave.family = 0;
  f.wave.kind = WaveKind::StationaryNonclassical;
  f.wave.left = minus;
  f.wave.right = plus;
  f.t0 = t;
  return f;
}

void append_waves(std::vector<Front>& out, const WavePattern& p, double t, double x) {
  for (const Wave& w : p.waves) {
    if (w.kind == WaveKind::Null) continue;
    out.push_back(Front{w, t, x});
  }
}

struct Expected {
  std::vector<std::string> in;
  std::vector<std::string> out;
};

// Interaction sequence of each case, the last entry being the stop event.
std::vector<Expected> expected_sequence(Case c) {
  const Expected p1{{"S2", "S1"}, {"S1", "S2"}};
  const Expected p3{{"S1", "S1"}, {"S1", "R2"}};
  switch (c) {
    case Case::A:
      return {p1, {{"S2", "V"}, {"S1", "V"}}, p3, {{"R2", "V"}, {}}};
    case Case::B:
      return {p1, {{"S2", "V"}, {"S1", "V", "S2"}}, p3, {{"R2", "V"}, {}}};
    case Case::C:
      return {p1, {{"S2", "V"}, {"R1", "V", "S2"}}, {{"S1", "R1"}, {}}};
    case Case::D:
      return {p1, {{"S2", "V"}, {"S1", "V"}}, p3, {{"R2", "V"}, {}}};
  }
  return {};
}

}  // namespace

std::string to_string(Case c) {
  switch (c) {
    case Case::A:
      return "a";
    case Case::B:
      return "b";
    case Case::C:
      return "c";
    case Case::D:
      return "d";
  }
  return "?";
}

std::string wave_label(const Wave& w) {
  switch (w.kind) {
    case WaveKind::Shock:
      return "S" + std::to_string(w.family);
    case WaveKind::RarefactionFan:
      return "R" + std::to_string(w.family);
    case WaveKind::StationaryNonclassical:
      return "V";
    case WaveKind::Null:
      return "N" + std::to_string(w.family);
  }
  return "?";
}

ScenarioData::ScenarioData(const State& ui, const State& ul, const State& ur,
                           const ValveParams& p)
    : u_i(ui), u_l(ul), u_r(ur), valve(p) {
  const GasLaw& law = p.law();
  const double a = law.a();
  auto fail = [](const std::string& what) {
    throw ScenarioViolation("three-state datum: " + what);
  };
  const double on_curve = forward_lax(2, ui, ul.rho, law).q - ul.q;
  if (std::abs(on_curve) > 1e-9 * std::max(1.0, std::abs(ul.q))) fail("u_l is not on FL_2 of u_i");
  if (std::abs(ur.v()) > 1e-12 * a) fail("v_r must vanish");
  if (std::abs(ul.v() - a) > 1e-9 * a) fail("u_l must be sonic with v_l = a");
  if (!(ui.v() > a)) fail("v_i must exceed a");

  hat0 = hat_u(0.0, ul, law);
  tilde0 = tilde_u(ui, hat0, law);
  q_l = ul.q;
  q_tilde = tilde0.q;
  q_bar_t = bar_q(tilde0, law);
  if (!(0.0 < q_l && q_l < q_tilde && q_tilde < ui.q && ui.q < q_bar_t)) {
    fail("momenta must satisfy 0 < q_l < q_tilde < q_i < q_bar");
  }
}

ScenarioData ScenarioData::from_sonic_left(const State& ui, const State& ur,
                                           const ValveParams& p) {
  return ScenarioData(ui, sonic_point_fl2(ui, p.law()), ur, p);
}

ScenarioData ScenarioData::with_q_star(double q_star) const {
  ScenarioData s = *this;
  s.valve = ValveParams(q_star, valve.law());
  return s;
}

double ScenarioData::t_min() const { return 1.0 / rh_speed(u_i, u_l); }

double ScenarioData::t2_closed() const {
  const double s0 = rh_speed(u_i, u_l);
  const double s1 = rh_speed(u_l, hat0);
  const double t1 = 1.0 / (s0 - s1);
  const double x1 = s1 * t1;
  const double s2 = rh_speed(tilde0, hat0);
  return t1 - x1 / s2;
}

Case classify_case(const ScenarioData& s) {
  const double qs = s.valve.q_star();
  if (qs <= s.q_l) return Case::A;
  if (qs <= s.q_tilde) return Case::B;
  if (qs <= s.q_bar_t) return Case::C;
  return Case::D;
}

PiecewiseSolution::PiecewiseSolution(GasLaw law, std::vector<Epoch> epochs,
                                     std::vector<ValveSegment> flow)
    : law_(law), epochs_(std::move(epochs)), flow_(std::move(flow)) {
  if (epochs_.empty()) throw OutOfRange("solution needs at least one epoch");
}

State PiecewiseSolution::evaluate(double t, double x) const {
  const double slack = 1e-12 * std::max(1.0, t_stop());
  if (!(t >= 0.0) || t > t_stop() + slack) {
    throw OutOfDomain("t = " + std::to_string(t) + " outside [0, " + std::to_string(t_stop()) +
                      "]");
  }
  const Epoch* ep = &epochs_.back();
  for (const Epoch& e : epochs_) {
    if (t < e.t_end) {
      ep = &e;
      break;
    }
  }
  const std::vector<Front>& fs = ep->fronts;
  for (const Front& f : fs) {
    if (x < f.lo_at(t)) return f.wave.left;
    if (is_fan(f) && x < f.hi_at(t)) {
      const double xi = (x - f.x0) / (t - f.t0);
      return sample(make_pattern(f.wave.left, {f.wave}), xi, law_);
    }
  }
  return fs.back().wave.right;
}

ExactConstruction build_exact(const ScenarioData& s) {
  const GasLaw& law = s.valve.law();
  const SolverKind kind = SolverKind::aitch();
  const Case which = classify_case(s);
  const std::vector<Expected> expected = expected_sequence(which);

  std::vector<Front> fronts;
  append_waves(fronts, solve_rp(s.u_i, s.u_l, law), 0.0, -1.0);
  const CoupledSolution c0 = solve_coupled(kind, s.u_l, s.u_r, s.valve);
  append_waves(fronts, c0.left, 0.0, 0.0);
  fronts.push_back(valve_front(c0.trace_minus(law), c0.trace_plus(law), 0.0));
  append_waves(fronts, c0.right, 0.0, 0.0);

  std::vector<PiecewiseSolution::Epoch> epochs;
  std::vector<ValveSegment> flow{{0.0, 0.0, c0.flow}};
  EventLog log;
  double t = 0.0;

  for (int k = 1;; ++k) {
    if (k > kMaxEvents) throw ScenarioViolation("too many interactions");
    // Earliest meeting of two neighbouring fronts.
    double best = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < fronts.size(); ++i) {
      const Front& l = fronts[i];
      const Front& r = fronts[i + 1];
      const double sl = l.is_valve() ? 0.0 : l.wave.speed_hi;
      const double sr = r.is_valve() ? 0.0 : r.wave.speed_lo;
      if (!(sl > sr)) continue;
      const double xl = l.hi_at(t);
      const double xr = r.lo_at(t);
      const double hit = t + (xr - xl) / (sl - sr);
      if (hit < best) {
        best = hit;
        at = i;
      }
    }
    if (!std::isfinite(best)) throw ScenarioViolation("no further interaction to stop at");

    const Front& l = fronts[at];
    const Front& r = fronts[at + 1];
    WaveEvent ev;
    ev.k = k;
    ev.t = best;
    ev.x = l.is_valve() ? 0.0 : (r.is_valve() ? 0.0 : l.hi_at(best));
    ev.in_waves = {wave_label(l.wave), wave_label(r.wave)};

    epochs.push_back({t, best, fronts});
    t = best;

    if (k > static_cast<int>(expected.size()) || ev.in_waves != expected[k - 1].in) {
      throw ScenarioViolation("case " + to_string(which) + ": unexpected interaction " +
                              join(ev.in_waves) + " at t = " + std::to_string(best));
    }

    if (is_fan(l) || is_fan(r)) {
      log.events.push_back(ev);
      log.t_stop = best;
      log.stop_reason = is_fan(l) && r.is_valve()
                            ? "rarefaction reaches the valve"
                            : "rarefaction meets a shock";
      break;
    }

    std::vector<Front> born;
    if (l.is_valve() || r.is_valve()) {
      // The valve sees the states just outside the incoming wave and itself.
      const CoupledSolution c = solve_coupled(kind, l.wave.left, r.wave.right, s.valve);
      append_waves(born, c.left, t, 0.0);
      born.push_back(valve_front(c.trace_minus(law), c.trace_plus(law), t));
      append_waves(born, c.right, t, 0.0);
      flow.back().t_end = t;
      flow.push_back({t, t, c.flow});
    } else {
      append_waves(born, solve_rp(l.wave.left, r.wave.right, law), t, ev.x);
    }
    ev.out_waves = labels(born);
    if (ev.out_waves != expected[k - 1].out) {
      throw ScenarioViolation("case " + to_string(which) + ": interaction " + join(ev.in_waves) +
                              " produced " + join(ev.out_waves));
    }
    log.events.push_back(ev);
    fronts.erase(fronts.begin() + static_cast<std::ptrdiff_t>(at),
                 fronts.begin() + static_cast<std::ptrdiff_t>(at) + 2);
    fronts.insert(fronts.begin() + static_cast<std::ptrdiff_t>(at), born.begin(), born.end());
  }

  epochs.push_back({t, t, fronts});
  flow.back().t_end = t;
  return ExactConstruction{which, PiecewiseSolution(law, std::move(epochs), std::move(flow)),
                           std::move(log)};
}

double formula_average_flow(const ScenarioData& s, double T) {
  if (!(T > 0.0)) throw OutOfRange("averaging horizon must be positive");
  if (T > s.formula_horizon) {
    throw OutOfValidity("closed-form average flow only holds up to T = " +
                        std::to_string(s.formula_horizon));
  }
  const double qs = s.valve.q_star();
  if (qs <= s.q_l) return qs;
  if (qs > s.q_bar_t) return 0.0;
  const double t2 = s.t2_closed();
  return T <= t2 ? 0.0 : (T - t2) / T * qs;
}

double exact_trace_flow(const ExactConstruction& c, const ScenarioData& s, double T) {
  if (!(T > 0.0)) throw OutOfRange("averaging horizon must be positive");
  if (T > c.solution.t_stop()) return formula_average_flow(s, T);
  double integral = 0.0;
  for (const ValveSegment& seg : c.solution.valve_flow()) {
    const double hi = std::min(seg.t_end, T);
    if (hi > seg.t_begin) integral += seg.flow * (hi - seg.t_begin);
  }
  return integral / T;
}

void write_event_csv(std::ostream& os, const EventLog& log) {
  os << "k,t,x,in_waves,out_waves\n";
  os.precision(12);
  for (const WaveEvent& e : log.events) {
    os << e.k << ',' << e.t << ',' << e.x << ',' << join(e.in_waves) << ','
       << join(e.out_waves) << '\n';
  }
}

void write_profile_csv(std::ostream& os, const PiecewiseSolution& sol, double t,
                       const std::vector<double>& xs) {
  os << "x,rho,q\n";
  os.precision(12);
  for (double x : xs) {
    const State u = sol.evaluate(t, x);
    os << x << ',' << u.rho << ',' << u.q << '\n';
  }
}

}  // namespace valveflow
