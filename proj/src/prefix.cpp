#include "slicemax/prefix.hpp"

#include <cmath>
#include <string>

namespace slicemax {

namespace {

// Double-double value hi + lo with |lo| <= ulp(hi)/2.
struct Pair {
  double hi = 0.0;
  double lo = 0.0;
};

inline Pair two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline Pair normalize(double hi, double lo) {
  const double s = hi + lo;
  return {s, lo - (s - hi)};
}

inline Pair add(Pair x, Pair y) {
  const Pair s = two_sum(x.hi, y.hi);
  const Pair t = two_sum(x.lo, y.lo);
  Pair r = normalize(s.hi, s.lo + t.hi);
  return normalize(r.hi, r.lo + t.lo);
}

inline Pair negate(Pair x) { return {-x.hi, -x.lo}; }

}  // namespace

PrefixTable::PrefixTable(std::size_t rows, std::size_t cols, int dim, double h)
    : rows_(rows), cols_(cols), dim_(dim), h_(h), hi_((rows + 1) * (cols + 1), 0.0),
      lo_((rows + 1) * (cols + 1), 0.0) {}

PrefixTable PrefixTable::build(const GridFunction& f, double power, bool absolute) {
  if (!(power >= 0) || !std::isfinite(power)) throw ValidationError("prefix power must be finite and >= 0");
  if (!absolute && power != 1.0)
    throw ValidationError("signed prefix tables only support power 1");
  PrefixTable t(f.rows(), f.cols(), f.dim(), f.cell_size());
  for (std::size_t r = 0; r < t.rows_; ++r) {
    Pair row;
    for (std::size_t c = 0; c < t.cols_; ++c) {
      const double raw = f.at(static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(c));
      double v = raw;
      if (absolute) v = power == 1.0 ? std::abs(raw) : std::pow(std::abs(raw), power);
      if (!std::isfinite(v))
        throw ValidationError("non-finite value |f|^" + std::to_string(power) + " at cell (" +
                              std::to_string(r) + "," + std::to_string(c) + ")");
      row = add(row, {v, 0.0});
      const std::size_t up = t.at(r, c + 1);
      const Pair cum = add({t.hi_[up], t.lo_[up]}, row);
      const std::size_t here = t.at(r + 1, c + 1);
      t.hi_[here] = cum.hi;
      t.lo_[here] = cum.lo;
    }
  }
  return t;
}

double PrefixTable::window_sum(const Box& box) const {
  if (box.empty()) return 0.0;
  if (!bounds().contains(box)) throw ValidationError("window leaves the prefix table");
  const auto r0 = static_cast<std::size_t>(box.row0);
  const auto c0 = static_cast<std::size_t>(box.col0);
  const auto r1 = r0 + static_cast<std::size_t>(box.rows);
  const auto c1 = c0 + static_cast<std::size_t>(box.cols);
  auto get = [this](std::size_t r, std::size_t c) { return Pair{hi_[at(r, c)], lo_[at(r, c)]}; };
  Pair s = add(get(r1, c1), negate(get(r0, c1)));
  s = add(s, negate(get(r1, c0)));
  s = add(s, get(r0, c0));
  return s.hi + s.lo;
}

double PrefixTable::cube_sum(const Cube& cube, Boundary boundary) const {
  return window_sum(admissible_box(cube, dim_, bounds(), boundary));
}

double PrefixTable::total() const { return window_sum(bounds()); }

Box admissible_box(const Cube& cube, int dim, const Box& grid, Boundary boundary) {
  const Box box = cube.box(dim);
  if (boundary == Boundary::interior) {
    if (!grid.contains(box)) throw ValidationError("cube " + cube.describe(dim) + " is not inside the grid");
    return box;
  }
  const Box clipped = intersect(box, grid);
  if (clipped.empty()) throw ValidationError("cube " + cube.describe(dim) + " misses the grid entirely");
  return clipped;
}

double window_average(const PrefixTable& table, const Cube& cube, Boundary boundary) {
  const Box box = admissible_box(cube, table.dim(), table.bounds(), boundary);
  // h^n cancels between the integral and the measure.
  return table.window_sum(box) / static_cast<double>(box.cells());
}

}  // namespace slicemax
