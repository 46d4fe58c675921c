#pragma once

#include "slicemax/grid.hpp"

namespace slicemax {

/// Order alpha and cube family of a maximal-type operator.
/// alpha is checked against the grid dimension when an operator is applied (0 <= alpha < n).
struct OperatorParams {
  double alpha = 0.0;
  CubeFamily family = CubeFamily::up_to(1);
};

/// b = b_plus - b_minus and |b| = b_plus + b_minus, both parts non-negative.
struct SignedDecomposition {
  GridFunction b_minus;
  GridFunction b_plus;
};

/// Fractional maximal function M_alpha f (alpha = 0 gives Hardy-Littlewood M):
/// at each cell the max over family cubes Q containing it of |Q|^(alpha/n - 1) * integral_Q |f|.
///
/// Reference evaluation: each cube containing a cell is enumerated explicitly.
/// Throws ValidationError when some cell has no family cube.
GridFunction maximal(const GridFunction& f, const OperatorParams& params);

/// Same values as maximal(), using a monotone queue per scale over the anchor
/// grid (separable in 2D). O(cells * scales).
GridFunction maximal_fast(const GridFunction& f, const OperatorParams& params);

/// M_{alpha,Q*} f on the cells of `qstar`: the sup runs over family cubes Q with x in Q and Q inside Q*.
/// Returned on qstar's own shape, with the origin moved to qstar's corner.
GridFunction maximal_restricted(const GridFunction& f, const Cube& qstar, const OperatorParams& params);
/// Accelerated form of maximal_restricted().
GridFunction maximal_restricted_fast(const GridFunction& f, const Cube& qstar,
                                     const OperatorParams& params);

/// Maximal commutator M_{alpha,b} f(x) = max over Q containing x of
/// |Q|^(alpha/n - 1) * integral_Q |b(x) - b(y)| |f(y)| dy.
GridFunction maximal_commutator(const GridFunction& b, const GridFunction& f,
                                const OperatorParams& params);

/// Nonlinear commutator [b, M_alpha] f = b M_alpha(f) - M_alpha(b f).
GridFunction commutator_maximal(const GridFunction& b, const GridFunction& f,
                                const OperatorParams& params);

/// Sharp maximal function: max over Q containing x of (1/|Q|) integral_Q |f - f_Q|.
GridFunction sharp_maximal(const GridFunction& f, const CubeFamily& family);

/// M#(f chi_Q) on the cells of `region`, where f chi_Q is extended by zero to
/// the whole space, so windows may reach past the grid edge. Returned on the
/// region's own shape.
GridFunction sharp_maximal_extended(const GridFunction& f, const Cube& region, const CubeFamily& family);

/// max over Q containing x of sqrt(mean_Q(f^2) - f_Q^2), an O(1)-per-window
/// L2 oscillation. For profiling only; it is not the L1 oscillation above.
GridFunction sharp_maximal_l2_proxy(const GridFunction& f, const CubeFamily& family);

/// [b, M#] f = b M#(f) - M#(b f).
GridFunction commutator_sharp(const GridFunction& b, const GridFunction& f, const CubeFamily& family);

SignedDecomposition decompose_sign(const GridFunction& b);

}  // namespace slicemax
