#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace slicemax {

/// Raised when a grid, cube, family or parameter set breaks one of its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Boundary { interior, clipped };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Rectangle of cells [row0, row0+rows) x [col0, col0+cols).
/// A 1D grid is stored as a single row, so its boxes always have rows == 1.
struct Box {
  std::ptrdiff_t row0 = 0;
  std::ptrdiff_t col0 = 0;
  std::ptrdiff_t rows = 0;
  std::ptrdiff_t cols = 0;

  bool empty() const { return rows <= 0 || cols <= 0; }
  std::size_t cells() const {
    return empty() ? 0 : static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
  bool contains(std::ptrdiff_t r, std::ptrdiff_t c) const {
    return r >= row0 && r < row0 + rows && c >= col0 && c < col0 + cols;
  }
  bool contains(const Box& o) const {
    return !o.empty() && o.row0 >= row0 && o.col0 >= col0 && o.row0 + o.rows <= row0 + rows &&
           o.col0 + o.cols <= col0 + cols;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

Box intersect(const Box& a, const Box& b);

/// Cell index per axis. Only index[0] is used on 1D grids.
using CellIndex = std::array<std::ptrdiff_t, 2>;

/// Grid-aligned cube: anchor cell per axis plus side length in cells.
struct Cube {
  CellIndex anchor{0, 0};
  std::size_t side = 1;

  static Cube interval(std::ptrdiff_t first, std::size_t side) { return Cube{{first, 0}, side}; }
  static Cube square(std::ptrdiff_t row, std::ptrdiff_t col, std::size_t side) {
    return Cube{{row, col}, side};
  }

  /// Cell box of the cube on a grid of dimension `dim`.
  Box box(int dim) const;
  /// Lebesgue measure (k h)^n of the full cube.
  double measure(int dim, double h) const;
  std::string describe(int dim) const;

  friend bool operator==(const Cube&, const Cube&) = default;
};

/// Piecewise-constant samples on a uniform 1D or 2D grid, row-major.
class GridFunction {
 public:
  GridFunction(std::vector<std::size_t> shape, double cell_size, std::vector<double> samples,
               std::vector<double> origin = {});

  static GridFunction constant(std::vector<std::size_t> shape, double cell_size, double value);

  int dim() const { return static_cast<int>(shape_.size()); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rows() const { return dim() == 2 ? shape_[0] : 1; }
  std::size_t cols() const { return shape_.back(); }
  std::size_t size() const { return samples_.size(); }
  double cell_size() const { return h_; }
  double cell_measure() const { return dim() == 2 ? h_ * h_ : h_; }
  const std::vector<double>& origin() const { return origin_; }
  std::span<const double> samples() const { return samples_; }

  double operator[](std::size_t flat) const { return samples_[flat]; }
  double at(std::ptrdiff_t row, std::ptrdiff_t col) const {
    return samples_[static_cast<std::size_t>(row) * cols() + static_cast<std::size_t>(col)];
  }
  std::size_t flat(std::ptrdiff_t row, std::ptrdiff_t col) const {
    return static_cast<std::size_t>(row) * cols() + static_cast<std::size_t>(col);
  }
  /// (row, col) of a per-axis cell index.
  std::array<std::ptrdiff_t, 2> row_col(const CellIndex& x) const {
    return dim() == 2 ? std::array<std::ptrdiff_t, 2>{x[0], x[1]}
                      : std::array<std::ptrdiff_t, 2>{0, x[0]};
  }
  CellIndex cell_index(std::size_t flat) const;

  Box bounds() const {
    return Box{0, 0, static_cast<std::ptrdiff_t>(rows()), static_cast<std::ptrdiff_t>(cols())};
  }
  /// Coordinates of the cell centre, one entry per axis.
  std::vector<double> cell_center(std::size_t flat) const;
  /// Total measure of the grid domain.
  double domain_measure() const { return cell_measure() * static_cast<double>(size()); }

  bool same_geometry(const GridFunction& other) const;
  GridFunction with_samples(std::vector<double> samples) const;
  /// Cells of `cube` as a grid of their own; the origin is shifted accordingly.
  GridFunction restrict_to(const Cube& cube) const;

 private:
  std::vector<std::size_t> shape_;
  double h_;
  std::vector<double> origin_;
  std::vector<double> samples_;
};

// Cellwise helpers. Binary ones require identical geometry.
GridFunction absolute(const GridFunction& f);
GridFunction product(const GridFunction& a, const GridFunction& b);
GridFunction difference(const GridFunction& a, const GridFunction& b);
GridFunction sum(const GridFunction& a, const GridFunction& b);
GridFunction scaled(const GridFunction& f, double c);
GridFunction shifted(const GridFunction& f, double c);
/// chi_Q on the geometry of `like`.
GridFunction indicator(const GridFunction& like, const Cube& cube);
/// f * chi_Q.
GridFunction masked(const GridFunction& f, const Cube& cube);
double max_abs(const GridFunction& f);

/// The scales (side lengths in cells) and boundary policy over which suprema run.
class CubeFamily {
 public:
  CubeFamily(std::vector<std::size_t> scales, Boundary boundary = Boundary::interior);

  /// Scales 1..max_scale.
  static CubeFamily up_to(std::size_t max_scale, Boundary boundary = Boundary::interior);
  /// Scales 1, 2, 4, ... <= max_scale, optionally starting at `min_scale` (a power of two).
  static CubeFamily dyadic(std::size_t max_scale, Boundary boundary = Boundary::interior,
                           std::size_t min_scale = 1);

  const std::vector<std::size_t>& scales() const { return scales_; }
  Boundary boundary() const { return boundary_; }
  std::size_t max_scale() const { return scales_.back(); }
  bool has_scale(std::size_t k) const;
  /// Same policy, keeping only scales <= k.
  CubeFamily capped(std::size_t k) const;
  std::string describe() const;

 private:
  std::vector<std::size_t> scales_;
  Boundary boundary_;
};

/// Closed range [lo, hi] of anchors along one axis; empty when lo > hi.
struct AnchorRange {
  std::ptrdiff_t lo = 0;
  std::ptrdiff_t hi = -1;
  bool empty() const { return lo > hi; }
  std::ptrdiff_t count() const { return empty() ? 0 : hi - lo + 1; }
};

/// Anchors of windows of `extent` cells on an axis of `n` cells.
AnchorRange all_anchors(std::size_t extent, std::size_t n, Boundary boundary);
/// Anchors whose window of `extent` cells contains cell x.
AnchorRange anchors_containing(std::ptrdiff_t x, std::size_t extent, std::size_t n,
                               Boundary boundary);

/// Visits every family cube whose cell set contains `x`, as (scale, row anchor, col anchor).
/// Order: scales ascending, then row anchor, then column anchor.
template <typename Visitor>
void for_each_cube_containing(const GridFunction& grid, const CellIndex& x,
                              const CubeFamily& family, Visitor&& visit) {
  const auto [r, c] = grid.row_col(x);
  const bool two_d = grid.dim() == 2;
  for (std::size_t k : family.scales()) {
    const AnchorRange ra = anchors_containing(r, two_d ? k : 1, grid.rows(), family.boundary());
    const AnchorRange ca = anchors_containing(c, k, grid.cols(), family.boundary());
    for (std::ptrdiff_t ar = ra.lo; ar <= ra.hi; ++ar)
      for (std::ptrdiff_t ac = ca.lo; ac <= ca.hi; ++ac) visit(k, ar, ac);
  }
}

/// Every family cube whose cell set contains `x`.
std::vector<Cube> cubes_containing(const GridFunction& grid, const CellIndex& x,
                                   const CubeFamily& family);

/// Visits every family cube lying entirely inside the grid.
template <typename Visitor>
void for_each_interior_cube(const GridFunction& grid, const CubeFamily& family, Visitor&& visit) {
  const bool two_d = grid.dim() == 2;
  for (std::size_t k : family.scales()) {
    const AnchorRange ra = all_anchors(two_d ? k : 1, grid.rows(), Boundary::interior);
    const AnchorRange ca = all_anchors(k, grid.cols(), Boundary::interior);
    for (std::ptrdiff_t ar = ra.lo; ar <= ra.hi; ++ar)
      for (std::ptrdiff_t ac = ca.lo; ac <= ca.hi; ++ac)
        visit(two_d ? Cube::square(ar, ac, k) : Cube::interval(ac, k));
  }
}

}  // namespace slicemax
