#pragma once

#include <optional>
#include <string>

#include "slicemax/grid.hpp"

namespace slicemax {

/// Exponents (p, q, r, s) tied to the order alpha by alpha/n = 1/p - 1/r = 1/q - 1/s.
struct ExponentSet {
  double p = 2.0;
  double q = 2.0;
  double r = 2.0;
  double s = 2.0;
  double alpha = 0.0;
  int n = 1;

  /// Solves for r and s from alpha, n, p and q.
  static ExponentSet from_alpha(double alpha, int n, double p, double q);
  /// Throws ValidationError unless every exponent is in (1, inf) and both relations hold to 1e-12.
  void validate() const;
  /// e' = e / (e - 1).
  static double conjugate(double e);
};

/// t is the window scale in length units, r the inner and p the outer exponent.
struct SliceParams {
  double t = 1.0;
  double r = 2.0;
  double p = 2.0;
  void validate() const;
};

/// Side in cells of the slice window Q(x, t): max(1, round(t / h)).
std::size_t slice_window_cells(double t, double h);
/// Q(x, t) before clipping: `side` cells per axis centred on x, the extra cell of an
/// even side going toward the origin.
Box slice_window(const GridFunction& grid, std::ptrdiff_t row, std::ptrdiff_t col, std::size_t side);

double lp_norm(const GridFunction& f, double p);

/// (E^p_r)_t norm: ( sum_x h^n (avg_{Q(x,t)} |f|^r)^(p/r) )^(1/p), windows clipped to the grid
/// and averaged over the clipped measure. At single-cell window scale this is lp_norm(f, p).
double slice_norm(const GridFunction& f, const SliceParams& params);

/// Value of a supremum over cubes together with the cube attaining it.
struct CubeExtremum {
  double value = 0.0;
  Cube argmax;
};

/// sup over family cubes inside the grid of (1/|Q|) integral_Q |b - b_Q|.
double bmo_norm(const GridFunction& b, const CubeFamily& family);
/// As bmo_norm(). The argmax is the first cube, in enumeration order, whose
/// oscillation is within a relative 1e-9 of the maximum.
CubeExtremum bmo_norm_argmax(const GridFunction& b, const CubeFamily& family);

/// The suprema over cubes Q characterizing BMO through the commutators.
enum class Characterization {
  T1_3,  // |Q|^(-1/s) ||(b - |Q|^(-alpha/n) M_{alpha,Q} b) chi_Q||, inner r, outer s
  T1_4,  // (1/|Q|) integral_Q |b - M_Q b|
  T2_3,  // |Q|^(-1/s) ||(b - b_Q) chi_Q||, inner r, outer s
  T2_4,  // (1/|Q|) integral_Q |b - b_Q|
  T3_3,  // (1/|Q|) ||(b - 2 M#(b chi_Q)) chi_Q||^q, inner p, outer q
  T3_4,  // (1/|Q|) integral_Q |b - 2 M#(b chi_Q)|
  C1_3,  // (1/|Q|) ||(b - M_Q b) chi_Q||^q, inner p, outer q
  C2_3,  // (1/|Q|) ||(b - b_Q) chi_Q||^q, inner p, outer q
};

std::string to_string(Characterization c);
Characterization characterization_from_string(const std::string& s);
/// True for the forms that use slice norms and therefore the exponents.
bool uses_exponents(Characterization c);

/// sup over family cubes Q inside the grid of the selected quantity.
///
/// Slice norms use window scale `slice.t` with exponents from `exps`.
/// M#(b chi_Q) is evaluated with b chi_Q extended by zero beyond the grid.
/// Throws ValidationError on inconsistent exponents before computing anything.
CubeExtremum characterization(const GridFunction& b, Characterization which, const ExponentSet& exps,
                              const SliceParams& slice, const CubeFamily& family);

struct HolderRatio {
  double ratio = 0.0;    // integral |f g| / (||f||_p ||g||_p')
  bool vacuous = false;  // a norm vanished
  bool holds = true;     // ratio <= 1 + tolerance
};

HolderRatio holder_check(const GridFunction& f, const GridFunction& g, double p, double tolerance = 1e-12);

}  // namespace slicemax
