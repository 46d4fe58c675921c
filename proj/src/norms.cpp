#include "slicemax/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "detail/summation.hpp"
#include "slicemax/operators.hpp"
#include "slicemax/prefix.hpp"

namespace slicemax {

namespace {

constexpr double kExponentTolerance = 1e-12;
constexpr double kArgmaxTieBand = 1e-9;

bool in_open_exponent_range(double e) { return e > 1.0 && std::isfinite(e); }

double oscillation(const GridFunction& b, const PrefixTable& signed_table, const Box& box) {
  const double n = static_cast<double>(box.cells());
  const double mean = signed_table.window_sum(box) / n;
  detail::Accumulator dev;
  for (std::ptrdiff_t r = box.row0; r < box.row0 + box.rows; ++r)
    for (std::ptrdiff_t c = box.col0; c < box.col0 + box.cols; ++c) dev.add(std::abs(b.at(r, c) - mean));
  return dev.value() / n;
}

/// Grid function equal to values[i] on the cells of `box` (row-major) and zero elsewhere.
GridFunction embed(const GridFunction& like, const Box& box, const std::vector<double>& values) {
  std::vector<double> out(like.size(), 0.0);
  std::size_t i = 0;
  for (std::ptrdiff_t r = box.row0; r < box.row0 + box.rows; ++r)
    for (std::ptrdiff_t c = box.col0; c < box.col0 + box.cols; ++c) out[like.flat(r, c)] = values[i++];
  return like.with_samples(std::move(out));
}

CubeExtremum pick_argmax(const std::vector<double>& values, const std::vector<Cube>& cubes) {
  if (values.empty()) throw ValidationError("no family cube fits inside the grid");
  const double top = *std::max_element(values.begin(), values.end());
  const double floor = top - kArgmaxTieBand * std::abs(top);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] >= floor) return CubeExtremum{top, cubes[i]};
  return CubeExtremum{top, cubes.front()};
}

}  // namespace

ExponentSet ExponentSet::from_alpha(double alpha, int n, double p, double q) {
  if (n < 1) throw ValidationError("dimension must be >= 1");
  const double a = alpha / n;
  const double inv_r = 1.0 / p - a;
  const double inv_s = 1.0 / q - a;
  if (!(inv_r > 0) || !(inv_s > 0))
    throw ValidationError("alpha/n must be below 1/p and 1/q for finite r and s");
  ExponentSet e{p, q, 1.0 / inv_r, 1.0 / inv_s, alpha, n};
  e.validate();
  return e;
}

void ExponentSet::validate() const {
  if (!in_open_exponent_range(p) || !in_open_exponent_range(q) || !in_open_exponent_range(r) ||
      !in_open_exponent_range(s))
    throw ValidationError("exponents p, q, r, s must lie in (1, inf)");
  if (n < 1 || n > 2) throw ValidationError("dimension must be 1 or 2");
  if (!(alpha >= 0) || !(alpha < n)) throw ValidationError("alpha must satisfy 0 <= alpha < n");
  const double a = alpha / n;
  if (std::abs(a - (1.0 / p - 1.0 / r)) > kExponentTolerance)
    throw ValidationError("inconsistent exponents: alpha/n != 1/p - 1/r");
  if (std::abs(a - (1.0 / q - 1.0 / s)) > kExponentTolerance)
    throw ValidationError("inconsistent exponents: alpha/n != 1/q - 1/s");
}

double ExponentSet::conjugate(double e) {
  if (!(e > 1.0)) throw ValidationError("conjugate exponent needs e > 1");
  if (std::isinf(e)) return 1.0;
  return e / (e - 1.0);
}

void SliceParams::validate() const {
  if (!(t > 0) || !std::isfinite(t)) throw ValidationError("slice scale t must be positive");
  if (!in_open_exponent_range(r) || !in_open_exponent_range(p))
    throw ValidationError("slice exponents r, p must lie in (1, inf)");
}

std::size_t slice_window_cells(double t, double h) {
  const double cells = std::round(t / h);
  return cells < 1.0 ? 1 : static_cast<std::size_t>(cells);
}

Box slice_window(const GridFunction& grid, std::ptrdiff_t row, std::ptrdiff_t col, std::size_t side) {
  const auto w = static_cast<std::ptrdiff_t>(side);
  const std::ptrdiff_t half = w / 2;
  if (grid.dim() == 2) return Box{row - half, col - half, w, w};
  return Box{0, col - half, 1, w};
}

double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("L^p norm needs 1 <= p < inf");
  detail::Accumulator acc;
  for (double v : f.samples()) acc.add(std::pow(std::abs(v), p));
  return std::pow(f.cell_measure() * acc.value(), 1.0 / p);
}

double slice_norm(const GridFunction& f, const SliceParams& params) {
  params.validate();
  const std::size_t w = slice_window_cells(params.t, f.cell_size());
  if (w == 1) return lp_norm(f, params.p);
  const PrefixTable table = PrefixTable::build(f, params.r, true);
  const Box grid = f.bounds();
  const double exponent = params.p / params.r;
  detail::Accumulator acc;
  for (std::ptrdiff_t r = 0; r < grid.rows; ++r)
    for (std::ptrdiff_t c = 0; c < grid.cols; ++c) {
      const Box box = intersect(slice_window(f, r, c, w), grid);
      const double avg = table.window_sum(box) / static_cast<double>(box.cells());
      if (avg > 0) acc.add(std::pow(avg, exponent));
    }
  return std::pow(f.cell_measure() * acc.value(), 1.0 / params.p);
}

double bmo_norm(const GridFunction& b, const CubeFamily& family) { return bmo_norm_argmax(b, family).value; }

CubeExtremum bmo_norm_argmax(const GridFunction& b, const CubeFamily& family) {
  const PrefixTable table = PrefixTable::build(b, 1.0, false);
  std::vector<double> values;
  std::vector<Cube> cubes;
  for_each_interior_cube(b, family, [&](const Cube& q) {
    values.push_back(oscillation(b, table, q.box(b.dim())));
    cubes.push_back(q);
  });
  return pick_argmax(values, cubes);
}

std::string to_string(Characterization c) {
  switch (c) {
    case Characterization::T1_3: return "T1_3";
    case Characterization::T1_4: return "T1_4";
    case Characterization::T2_3: return "T2_3";
    case Characterization::T2_4: return "T2_4";
    case Characterization::T3_3: return "T3_3";
    case Characterization::T3_4: return "T3_4";
    case Characterization::C1_3: return "C1_3";
    case Characterization::C2_3: return "C2_3";
  }
  return "?";
}

Characterization characterization_from_string(const std::string& s) {
  for (auto c : {Characterization::T1_3, Characterization::T1_4, Characterization::T2_3, Characterization::T2_4,
                 Characterization::T3_3, Characterization::T3_4, Characterization::C1_3, Characterization::C2_3})
    if (to_string(c) == s) return c;
  throw ValidationError("unknown characterization '" + s + "'");
}

bool uses_exponents(Characterization c) {
  return c != Characterization::T1_4 && c != Characterization::T2_4 && c != Characterization::T3_4;
}

CubeExtremum characterization(const GridFunction& b, Characterization which, const ExponentSet& exps,
                              const SliceParams& slice, const CubeFamily& family) {
  if (uses_exponents(which)) {
    exps.validate();
    if (exps.n != b.dim()) throw ValidationError("exponent set dimension does not match the grid");
    if (!(slice.t > 0) || !std::isfinite(slice.t)) throw ValidationError("slice scale t must be positive");
  }
  if (which == Characterization::T2_4) return bmo_norm_argmax(b, family);

  const int n = b.dim();
  const double h = b.cell_size();
  const PrefixTable signed_table = PrefixTable::build(b, 1.0, false);
  const SliceParams target{slice.t, exps.r, exps.s};
  const SliceParams source{slice.t, exps.p, exps.q};

  std::vector<double> values;
  std::vector<Cube> cubes;
  std::vector<double> local;
  for_each_interior_cube(b, family, [&](const Cube& q) {
    const Box box = q.box(n);
    const double measure = q.measure(n, h);
    local.assign(box.cells(), 0.0);
    std::size_t i = 0;
    auto fill = [&](auto&& value_at) {
      i = 0;
      for (std::ptrdiff_t r = box.row0; r < box.row0 + box.rows; ++r)
        for (std::ptrdiff_t c = box.col0; c < box.col0 + box.cols; ++c, ++i) local[i] = value_at(r, c, i);
    };
    auto mean_abs = [&] {
      detail::Accumulator acc;
      for (double v : local) acc.add(std::abs(v));
      return acc.value() / static_cast<double>(local.size());
    };

    double value = 0.0;
    switch (which) {
      case Characterization::T1_3: {
        const GridFunction m = maximal_restricted_fast(b, q, OperatorParams{exps.alpha, family});
        const double w = std::pow(measure, -exps.alpha / n);
        fill([&](auto r, auto c, std::size_t j) { return b.at(r, c) - w * m[j]; });
        value = slice_norm(embed(b, box, local), target) / std::pow(measure, 1.0 / exps.s);
        break;
      }
      case Characterization::T1_4:
      case Characterization::C1_3: {
        const GridFunction m = maximal_restricted_fast(b, q, OperatorParams{0.0, family});
        fill([&](auto r, auto c, std::size_t j) { return b.at(r, c) - m[j]; });
        value = which == Characterization::T1_4
                    ? mean_abs()
                    : std::pow(slice_norm(embed(b, box, local), source), exps.q) / measure;
        break;
      }
      case Characterization::T2_3:
      case Characterization::C2_3: {
        const double mean = signed_table.window_sum(box) / static_cast<double>(box.cells());
        fill([&](auto r, auto c, std::size_t) { return b.at(r, c) - mean; });
        const double norm = slice_norm(embed(b, box, local), which == Characterization::T2_3 ? target : source);
        value = which == Characterization::T2_3 ? norm / std::pow(measure, 1.0 / exps.s)
                                                : std::pow(norm, exps.q) / measure;
        break;
      }
      case Characterization::T3_3:
      case Characterization::T3_4: {
        const GridFunction sharp = sharp_maximal_extended(b, q, family);
        fill([&](auto r, auto c, std::size_t j) { return b.at(r, c) - 2.0 * sharp[j]; });
        value = which == Characterization::T3_4
                    ? mean_abs()
                    : std::pow(slice_norm(embed(b, box, local), source), exps.q) / measure;
        break;
      }
      case Characterization::T2_4: break;
    }
    values.push_back(value);
    cubes.push_back(q);
  });
  return pick_argmax(values, cubes);
}

HolderRatio holder_check(const GridFunction& f, const GridFunction& g, double p, double tolerance) {
  if (!f.same_geometry(g)) throw ValidationError("Hoelder check needs both functions on one grid");
  if (!(p > 1.0)) throw ValidationError("Hoelder check needs p > 1");
  detail::Accumulator acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc.add(std::abs(f[i] * g[i]));
  const double lhs = f.cell_measure() * acc.value();
  const double rhs = lp_norm(f, p) * lp_norm(g, ExponentSet::conjugate(p));
  if (rhs == 0.0) return HolderRatio{0.0, true, true};
  const double ratio = lhs / rhs;
  return HolderRatio{ratio, false, ratio <= 1.0 + tolerance};
}

}  // namespace slicemax
