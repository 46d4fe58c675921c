#pragma once

#include <vector>

#include "slicemax/grid.hpp"

namespace slicemax {

/// Summed-area table of |f|^power (or of f itself) with O(1) box sums.
///
/// Cumulative sums are held as unevaluated pairs (hi + lo) accumulated with
/// error-free transformations, so a box sum obtained by inclusion-exclusion
/// does not lose the small windows to cancellation against the large
/// cumulative values of a big grid.
class PrefixTable {
 public:
  /// Table of |f|^power when `absolute`, otherwise of f (power must be 1).
  static PrefixTable build(const GridFunction& f, double power = 1.0, bool absolute = true);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int dim() const { return dim_; }
  double cell_size() const { return h_; }

  /// Plain sum of the tabulated values over `box`, which must lie in the grid.
  double window_sum(const Box& box) const;
  /// Sum over the cube's cells. Clipped cubes are intersected with the grid first.
  double cube_sum(const Cube& cube, Boundary boundary = Boundary::interior) const;
  double total() const;

  Box bounds() const {
    return Box{0, 0, static_cast<std::ptrdiff_t>(rows_), static_cast<std::ptrdiff_t>(cols_)};
  }

 private:
  PrefixTable(std::size_t rows, std::size_t cols, int dim, double h);
  std::size_t at(std::size_t r, std::size_t c) const { return r * (cols_ + 1) + c; }

  std::size_t rows_;
  std::size_t cols_;
  int dim_;
  double h_;
  std::vector<double> hi_;
  std::vector<double> lo_;
};

/// (1/|Q|) * integral over Q; under the clipped policy |Q| is the measure of Q within the grid.
double window_average(const PrefixTable& table, const Cube& cube,
                      Boundary boundary = Boundary::interior);

/// The cells of `cube` that count for `boundary`; throws when the cube is not admissible.
Box admissible_box(const Cube& cube, int dim, const Box& grid, Boundary boundary);

}  // namespace slicemax
