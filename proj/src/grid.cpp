#include "slicemax/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace slicemax {

std::string to_string(Boundary b) { return b == Boundary::interior ? "interior" : "clipped"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "interior" || s == "interior-only") return Boundary::interior;
  if (s == "clipped") return Boundary::clipped;
  throw ValidationError("unknown boundary policy '" + s + "' (expected interior or clipped)");
}

Box intersect(const Box& a, const Box& b) {
  const std::ptrdiff_t r0 = std::max(a.row0, b.row0);
  const std::ptrdiff_t c0 = std::max(a.col0, b.col0);
  const std::ptrdiff_t r1 = std::min(a.row0 + a.rows, b.row0 + b.rows);
  const std::ptrdiff_t c1 = std::min(a.col0 + a.cols, b.col0 + b.cols);
  return Box{r0, c0, std::max<std::ptrdiff_t>(0, r1 - r0), std::max<std::ptrdiff_t>(0, c1 - c0)};
}

Box Cube::box(int dim) const {
  const auto k = static_cast<std::ptrdiff_t>(side);
  if (dim == 2) return Box{anchor[0], anchor[1], k, k};
  return Box{0, anchor[0], 1, k};
}

double Cube::measure(int dim, double h) const {
  const double len = static_cast<double>(side) * h;
  return dim == 2 ? len * len : len;
}

std::string Cube::describe(int dim) const {
  std::ostringstream os;
  if (dim == 2)
    os << "[" << anchor[0] << "," << anchor[1] << "]+" << side;
  else
    os << "[" << anchor[0] << "]+" << side;
  return os.str();
}

namespace {

std::size_t product_of(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

GridFunction map_cells(const GridFunction& f, const std::function<double(double)>& op) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = op(f[i]);
  return f.with_samples(std::move(out));
}

GridFunction zip_cells(const GridFunction& a, const GridFunction& b,
                       const std::function<double(double, double)>& op) {
  if (!a.same_geometry(b)) throw ValidationError("grid functions live on different grids");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
  return a.with_samples(std::move(out));
}

}  // namespace

GridFunction::GridFunction(std::vector<std::size_t> shape, double cell_size,
                           std::vector<double> samples, std::vector<double> origin)
    : shape_(std::move(shape)), h_(cell_size), origin_(std::move(origin)), samples_(std::move(samples)) {
  if (shape_.empty() || shape_.size() > 2)
    throw ValidationError("grid dimension must be 1 or 2, got " + std::to_string(shape_.size()));
  for (auto s : shape_)
    if (s == 0) throw ValidationError("grid extents must be positive");
  if (!(h_ > 0) || !std::isfinite(h_)) throw ValidationError("cell size must be positive and finite");
  if (origin_.empty()) origin_.assign(shape_.size(), 0.0);
  if (origin_.size() != shape_.size()) throw ValidationError("origin has the wrong number of axes");
  if (samples_.size() != product_of(shape_))
    throw ValidationError("expected " + std::to_string(product_of(shape_)) + " samples, got " +
                          std::to_string(samples_.size()));
  for (std::size_t i = 0; i < samples_.size(); ++i)
    if (!std::isfinite(samples_[i]))
      throw ValidationError("non-finite sample at flat index " + std::to_string(i));
}

GridFunction GridFunction::constant(std::vector<std::size_t> shape, double cell_size, double value) {
  const std::size_t n = product_of(shape);
  return GridFunction(std::move(shape), cell_size, std::vector<double>(n, value));
}

CellIndex GridFunction::cell_index(std::size_t flat) const {
  if (dim() == 2)
    return {static_cast<std::ptrdiff_t>(flat / cols()), static_cast<std::ptrdiff_t>(flat % cols())};
  return {static_cast<std::ptrdiff_t>(flat), 0};
}

std::vector<double> GridFunction::cell_center(std::size_t flat) const {
  const CellIndex x = cell_index(flat);
  std::vector<double> c(shape_.size());
  for (std::size_t a = 0; a < shape_.size(); ++a)
    c[a] = origin_[a] + (static_cast<double>(x[a]) + 0.5) * h_;
  return c;
}

bool GridFunction::same_geometry(const GridFunction& other) const {
  return shape_ == other.shape_ && h_ == other.h_ && origin_ == other.origin_;
}

GridFunction GridFunction::with_samples(std::vector<double> samples) const {
  return GridFunction(shape_, h_, std::move(samples), origin_);
}

GridFunction GridFunction::restrict_to(const Cube& cube) const {
  const Box box = cube.box(dim());
  if (!bounds().contains(box)) throw ValidationError("cube " + cube.describe(dim()) + " leaves the grid");
  std::vector<double> out;
  out.reserve(box.cells());
  for (std::ptrdiff_t r = box.row0; r < box.row0 + box.rows; ++r)
    for (std::ptrdiff_t c = box.col0; c < box.col0 + box.cols; ++c) out.push_back(at(r, c));
  std::vector<double> origin = origin_;
  for (std::size_t a = 0; a < origin.size(); ++a)
    origin[a] += static_cast<double>(cube.anchor[a]) * h_;
  std::vector<std::size_t> shape(shape_.size(), cube.side);
  return GridFunction(std::move(shape), h_, std::move(out), std::move(origin));
}

GridFunction absolute(const GridFunction& f) {
  return map_cells(f, [](double v) { return std::abs(v); });
}
GridFunction product(const GridFunction& a, const GridFunction& b) {
  return zip_cells(a, b, [](double x, double y) { return x * y; });
}
GridFunction difference(const GridFunction& a, const GridFunction& b) {
  return zip_cells(a, b, [](double x, double y) { return x - y; });
}
GridFunction sum(const GridFunction& a, const GridFunction& b) {
  return zip_cells(a, b, [](double x, double y) { return x + y; });
}
GridFunction scaled(const GridFunction& f, double c) {
  return map_cells(f, [c](double v) { return c * v; });
}
GridFunction shifted(const GridFunction& f, double c) {
  return map_cells(f, [c](double v) { return v + c; });
}

GridFunction masked(const GridFunction& f, const Cube& cube) {
  const Box box = cube.box(f.dim());
  std::vector<double> out(f.size(), 0.0);
  const Box inside = intersect(box, f.bounds());
  for (std::ptrdiff_t r = inside.row0; r < inside.row0 + inside.rows; ++r)
    for (std::ptrdiff_t c = inside.col0; c < inside.col0 + inside.cols; ++c)
      out[f.flat(r, c)] = f.at(r, c);
  return f.with_samples(std::move(out));
}

GridFunction indicator(const GridFunction& like, const Cube& cube) {
  return masked(like.with_samples(std::vector<double>(like.size(), 1.0)), cube);
}

double max_abs(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.samples()) m = std::max(m, std::abs(v));
  return m;
}

CubeFamily::CubeFamily(std::vector<std::size_t> scales, Boundary boundary)
    : scales_(std::move(scales)), boundary_(boundary) {
  if (scales_.empty()) throw ValidationError("cube family needs at least one scale");
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    if (scales_[i] == 0) throw ValidationError("cube scales must be >= 1");
    if (i > 0 && scales_[i] <= scales_[i - 1])
      throw ValidationError("cube scales must be sorted and distinct");
  }
}

CubeFamily CubeFamily::up_to(std::size_t max_scale, Boundary boundary) {
  if (max_scale == 0) throw ValidationError("max scale must be >= 1");
  std::vector<std::size_t> s(max_scale);
  for (std::size_t k = 0; k < max_scale; ++k) s[k] = k + 1;
  return CubeFamily(std::move(s), boundary);
}

CubeFamily CubeFamily::dyadic(std::size_t max_scale, Boundary boundary, std::size_t min_scale) {
  if (min_scale == 0 || (min_scale & (min_scale - 1)) != 0)
    throw ValidationError("dyadic families start at a power of two");
  if (max_scale < min_scale) throw ValidationError("max scale below the smallest dyadic scale");
  std::vector<std::size_t> s;
  for (std::size_t k = min_scale; k <= max_scale; k *= 2) s.push_back(k);
  return CubeFamily(std::move(s), boundary);
}

bool CubeFamily::has_scale(std::size_t k) const {
  return std::binary_search(scales_.begin(), scales_.end(), k);
}

CubeFamily CubeFamily::capped(std::size_t k) const {
  std::vector<std::size_t> s;
  for (auto v : scales_)
    if (v <= k) s.push_back(v);
  if (s.empty()) throw ValidationError("no family scale fits in " + std::to_string(k) + " cells");
  return CubeFamily(std::move(s), boundary_);
}

std::string CubeFamily::describe() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < scales_.size(); ++i) os << (i ? "," : "") << scales_[i];
  os << "} " << to_string(boundary_);
  return os.str();
}

AnchorRange all_anchors(std::size_t extent, std::size_t n, Boundary boundary) {
  const auto k = static_cast<std::ptrdiff_t>(extent);
  const auto len = static_cast<std::ptrdiff_t>(n);
  if (boundary == Boundary::clipped) return {1 - k, len - 1};
  return {0, len - k};
}

AnchorRange anchors_containing(std::ptrdiff_t x, std::size_t extent, std::size_t n,
                               Boundary boundary) {
  const auto k = static_cast<std::ptrdiff_t>(extent);
  const AnchorRange all = all_anchors(extent, n, boundary);
  return {std::max(all.lo, x - k + 1), std::min(all.hi, x)};
}

std::vector<Cube> cubes_containing(const GridFunction& grid, const CellIndex& x,
                                   const CubeFamily& family) {
  const auto [r, c] = grid.row_col(x);
  if (!grid.bounds().contains(r, c)) throw ValidationError("cell index outside the grid");
  std::vector<Cube> out;
  const bool two_d = grid.dim() == 2;
  for_each_cube_containing(grid, x, family, [&](std::size_t k, std::ptrdiff_t ar, std::ptrdiff_t ac) {
    out.push_back(two_d ? Cube::square(ar, ac, k) : Cube::interval(ac, k));
  });
  return out;
}

}  // namespace slicemax
