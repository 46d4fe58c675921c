#pragma once

#include <string>
#include <vector>

#include "slicemax/norms.hpp"
#include "slicemax/operators.hpp"
#include "slicemax/verify/report.hpp"

namespace slicemax::verify {

struct Tolerances {
  double identity = 1e-12;    // relative, exact identities
  double inequality = 1e-10;  // additive slack, scaled by the size of the data
  double holder = 1e-12;      // ratio <= 1 + holder
  double oracle = 1e-12;      // absolute, fast path against reference
  double stability = 0.10;    // lemma constants across refinement
  double drift = 0.25;        // theorem quantities across refinement
  double growth = 1.8;        // per-doubling factor of the classic BMO form under domain growth

  /// Sets every hard-assertion tolerance at once.
  void override_hard(double value);
};

/// Largest |v[i+1] / v[i] - 1| over consecutive entries. Two zeros count as no drift,
/// zero followed by a positive value as infinite drift.
double max_drift(const std::vector<double>& values);
/// Every entry strictly larger than the previous one.
bool increasing(const std::vector<double>& values);

enum class Trend { any, bounded, growing };
std::string to_string(Trend t);

// Hard checks on a single instance. `where` is completed with the geometry of the
// inputs and stored in the report.

/// Mean bound |b_Q| <= |Q|^(-alpha/n) M_{alpha,Q} b on Q, the E/F balance, and
/// M_alpha(chi_Q) = |Q|^(alpha/n) on Q. The gap between M_{alpha,Q} b and
/// M_alpha(b chi_Q) on Q is recorded but not asserted. Vacuous when Q's side is not a family scale.
VerificationReport check_lemma26(const GridFunction& b, const Cube& q, double alpha, const CubeFamily& family,
                                 const Tolerances& tol, InstanceDescriptor where = {});

/// (1/|Q|) integral_Q |b - b_Q| <= (2/|Q|) integral_Q |b - |Q|^(-alpha/n) M_{alpha,Q} b|.
VerificationReport check_oscillation_domination(const GridFunction& b, const Cube& q, double alpha,
                                                const CubeFamily& family, const Tolerances& tol,
                                                InstanceDescriptor where = {});

/// |[b, M_alpha] f| <= M_{alpha,b} f + 2 b^- M_alpha f cellwise.
VerificationReport check_eq31(const GridFunction& b, const GridFunction& f, double alpha, const CubeFamily& family,
                              const Tolerances& tol, InstanceDescriptor where = {});

VerificationReport check_holder(const GridFunction& f, const GridFunction& g, double p, const Tolerances& tol,
                                InstanceDescriptor where = {});

/// M# f <= 2 M f cellwise.
VerificationReport check_sharp_le_2m(const GridFunction& f, const CubeFamily& family, const Tolerances& tol,
                                     InstanceDescriptor where = {});

/// |[|b|, M#] f| <= 2 M_{|b|} f cellwise.
VerificationReport check_sharp_commutator(const GridFunction& b, const GridFunction& f, const CubeFamily& family,
                                          const Tolerances& tol, InstanceDescriptor where = {});

/// b^+ - b^- = b and b^+ + b^- = |b| exactly, both parts non-negative.
VerificationReport check_sign_decomposition(const GridFunction& b, InstanceDescriptor where = {});

/// maximal_fast against the reference maximal().
VerificationReport check_fast_vs_reference(const GridFunction& f, double alpha, const CubeFamily& family,
                                           const Tolerances& tol, InstanceDescriptor where = {});

/// Three reports on the cells of Q:
///   identity_fractional_commutator  b - |Q|^(-a/n) M_{a,Q} b = |Q|^(-a/n) [b, M_a](chi_Q)
///                                   (verdict gap when M_a(b chi_Q) != M_{a,Q} b on the grid)
///   sharp_indicator_half            M#(chi_Q) = 1/2 (vacuous-boundary when the half-overlapping
///                                   window would leave the grid)
///   identity_sharp_commutator       b - 2 M#(b chi_Q) = 2 [b, M#](chi_Q), on the cells where
///                                   M#(chi_Q) = 1/2
std::vector<VerificationReport> check_proof_identities(const GridFunction& b, const Cube& q, double alpha,
                                                       const CubeFamily& family, const Tolerances& tol,
                                                       InstanceDescriptor where = {});

// Soft checks over a sequence of grids of one experiment (refinement or domain growth).

struct Level {
  std::string label;  // e.g. "N=128"
  GridFunction b;
  std::vector<GridFunction> inputs;  // corpus of f on the same grid
  std::vector<std::string> input_names;
  CubeFamily family;
  double t = 1.0;  // slice window scale in length units
};

/// sup over inputs of ||M f|| / ||f|| in (E_r^p)_t, per level; stable within tol.stability.
VerificationReport check_lemma22(const std::vector<Level>& levels, double r, double p, const Tolerances& tol,
                                 InstanceDescriptor where = {});

/// ||chi_Q|| / |Q|^(1/p) in (E_r^p)_t for cubes of the given sides, centred in `like`.
/// Passes when max/min of the ratios is at most 2.
VerificationReport check_lemma23(const GridFunction& like, const std::vector<std::size_t>& sides,
                                 const SliceParams& slice, InstanceDescriptor where = {});

/// sup over inputs of ||M_alpha f||_{(E_r^s)_t} / ||f||_{(E_p^q)_t}, per level.
VerificationReport check_lemma24(const std::vector<Level>& levels, const ExponentSet& exps, const Tolerances& tol,
                                 InstanceDescriptor where = {});

/// max_x M_{alpha,b} f / (||b||_* (M(M_alpha f) + M_alpha(M f))) for the first input, per level.
/// Vacuous when ||b||_* vanishes on every level.
VerificationReport check_lemma25(const std::vector<Level>& levels, double alpha, const Tolerances& tol,
                                 InstanceDescriptor where = {});

/// Operator ratio, (T.3) and (T.4) quantity of theorem 1, 2 or 3 on every level (at least 3).
/// Consistent when all three drift by at most tol.drift or all three increase strictly with drift
/// above tol.drift;
/// with an expectation other than Trend::any the common trend must also match it.
VerificationReport check_theorem_equivalence(int theorem, const std::vector<Level>& levels, const ExponentSet& exps,
                                             Trend expectation, const Tolerances& tol, InstanceDescriptor where = {});

// Per-level empirical constants behind the soft checks; the argmax names the input or cell.

EmpiricalConstant lemma22_constant(const Level& level, double r, double p);
EmpiricalConstant lemma24_constant(const Level& level, const ExponentSet& exps);
/// Zero when ||b||_* vanishes.
EmpiricalConstant lemma25_constant(const Level& level, double alpha);
/// Operator norm ratio of theorem 1, 2 or 3: sup over inputs of ||Op f|| / ||f||.
EmpiricalConstant theorem_operator_ratio(int theorem, const Level& level, const ExponentSet& exps);

}  // namespace slicemax::verify
