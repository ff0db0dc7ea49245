#pragma once

// One-way flow-control valve at x = 0: valve laws, the regions of left states
// that decide them, the coupled Riemann solver and its coherence test.

#include <functional>
#include <string>

#include "valveflow/gas.hpp"
#include "valveflow/riemann.hpp"

namespace valveflow {

/// Flow threshold q* > 0 of the valve and the gas it controls.
class ValveParams {
 public:
  ValveParams(double q_star, GasLaw law);

  double q_star() const { return q_star_; }
  const GasLaw& law() const { return law_; }
  double a() const { return law_.a(); }

 private:
  double q_star_;
  GasLaw law_;
};

/// Q-bar(u): the largest flow the valve can let through from a left state u.
double q_cap(const State& u, const GasLaw& law);

/// Valve that holds the flow at q* when it can and closes otherwise.
double q_vee(const State& ul, const ValveParams& p);

/// Coherent valve: like q_vee, except that it passes q_l on the incoherence set of q_vee.
double q_aitch(const State& ul, const ValveParams& p);

/// Same law as q_aitch, written through the region decomposition.
double q_aitch_by_region(const State& ul, const ValveParams& p);

/// Which coupling law to apply at the interface.
class SolverKind {
 public:
  enum class Tag { Lax, Vee, Aitch, Custom };
  using FlowFn = std::function<double(const State& ul, const State& ur)>;

  static SolverKind lax() { return SolverKind(Tag::Lax, {}); }
  static SolverKind vee() { return SolverKind(Tag::Vee, {}); }
  static SolverKind aitch() { return SolverKind(Tag::Aitch, {}); }
  /// `flow` must return values in [0, q_cap(ul)].
  static SolverKind custom(FlowFn flow) { return SolverKind(Tag::Custom, std::move(flow)); }

  Tag tag() const { return tag_; }
  bool has_valve() const { return tag_ != Tag::Lax; }
  std::string name() const;

  /// Interface flow prescribed by the law. Throws FlowOutOfRange for a custom
  /// law outside [0, q_cap(ul)]. Meaningless for Lax.
  double flow(const State& ul, const State& ur, const ValveParams& p) const;

 private:
  SolverKind(Tag tag, FlowFn fn) : tag_(tag), fn_(std::move(fn)) {}

  Tag tag_;
  FlowFn fn_;
};

/// Fixed states of the region geometry, all functions of (a, q*).
struct SpecialStates {
  State u_star_a;    ///< (q*/a, q*): sonic with momentum q*
  State u_star_0;    ///< (e q*/a, 0)
  State u_star_sup;  ///< supersonic crossing of BL_1^{u_star_0} with q = q*
  State u_star_sub;  ///< subsonic crossing
  double v_star_sup;
  double v_star_sub;
};

SpecialStates special_states(const ValveParams& p);

/// v*_sup / a and v*_sub / a; independent of a and q*.
double v_sup_ratio();
double v_sub_ratio();

enum class Region {
  ClosedCoherent,  ///< C_l ∩ CH_l: valve closed, q_vee coherent
  Open,            ///< CH_l \ C_l: valve open at q*
  Incoherent,      ///< CH_l^c: valve closed by q_vee, which is incoherent here
};

enum class CoherenceSubset { CH1, CH2, CH3, Complement };

struct RegionTag {
  Region region;
  CoherenceSubset subset;  ///< refinement of CH_l (or its complement)
  bool closed;             ///< membership in C_l by its set formula
};

/// Classifies a left state by the set formulas of C_l, CH_l^c and CH_l1/2/3.
RegionTag classify_region(const State& ul, const ValveParams& p);

std::string to_string(Region r);
std::string to_string(CoherenceSubset s);

/// Solution of the coupled Riemann problem. For a valve, `left` holds the single
/// 1-wave used on xi < 0 and `right` the single 2-wave used on xi >= 0; for Lax
/// both hold the full RS_p pattern.
struct CoupledSolution {
  WavePattern left;
  WavePattern right;
  double flow = 0.0;
  bool valve = true;

  State operator()(double xi, const GasLaw& law) const;
  State trace_minus(const GasLaw& law) const;  ///< u(0-)
  State trace_plus(const GasLaw& law) const;   ///< u(0+)
  /// All waves in speed order, with the valve jump as a stationary nonclassical wave.
  WavePattern full_pattern() const;
};

CoupledSolution solve_coupled(const SolverKind& kind, const State& ul, const State& ur,
                              const ValveParams& p);

/// Valve solution for a prescribed interface flow. Throws OutOfRange if `flow`
/// exceeds bar_q(ul) or is negative.
CoupledSolution coupled_with_flow(double flow, const State& ul, const State& ur,
                                  const GasLaw& law);

/// Re-solving from the traces of the solution gives back the two traces
/// (relative tolerance `rel_tol`).
bool coherence_check(const SolverKind& kind, const State& ul, const State& ur,
                     const ValveParams& p, double rel_tol = 1e-8);

/// Stricter variant: the re-solved solution has no non-stationary wave at all.
bool coherence_check_strict(const SolverKind& kind, const State& ul, const State& ur,
                            const ValveParams& p, double rel_tol = 1e-8);

struct SupersonicReport {
  bool ul_supersonic = false;
  bool left_attains_supersonic = false;
  bool right_attains_supersonic = false;
  /// The xi < 0 side is supersonic somewhere iff u_l is.
  bool left_rule_holds = true;
};

SupersonicReport supersonic_trace_audit(const SolverKind& kind, const State& ul,
                                        const State& ur, const ValveParams& p);

}  // namespace valveflow
