#include "slicemax/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "detail/sliding_max.hpp"
#include "slicemax/prefix.hpp"

namespace slicemax {

namespace {

using detail::kNoCandidate;
using detail::WindowMaxScatter;

void check_alpha(double alpha, int dim) {
  if (!(alpha >= 0.0) || !(alpha < static_cast<double>(dim)))
    throw ValidationError("alpha must satisfy 0 <= alpha < n = " + std::to_string(dim) + ", got " +
                          std::to_string(alpha));
}

void check_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!a.same_geometry(b)) throw ValidationError("b and f must live on the same grid");
}

/// |Q|^(alpha/n - 1) * integral_Q |f| from the plain cell sum over `cells` cells.
inline double fractional_average(double sum, std::size_t cells, double cell_measure, double alpha,
                                 int dim) {
  const double avg = sum / static_cast<double>(cells);
  if (alpha == 0.0) return avg;
  return std::pow(static_cast<double>(cells) * cell_measure, alpha / dim) * avg;
}

struct ScaleGeometry {
  std::size_t side;
  std::ptrdiff_t row_extent, col_extent;
  AnchorRange rows, cols;

  std::size_t count() const { return static_cast<std::size_t>(rows.count() * cols.count()); }
  std::size_t index(std::ptrdiff_t ar, std::ptrdiff_t ac) const {
    return static_cast<std::size_t>((ar - rows.lo) * cols.count() + (ac - cols.lo));
  }
  Box box(std::ptrdiff_t ar, std::ptrdiff_t ac) const { return Box{ar, ac, row_extent, col_extent}; }
};

ScaleGeometry scale_geometry(const GridFunction& f, std::size_t k, Boundary boundary) {
  const bool two_d = f.dim() == 2;
  const std::size_t er = two_d ? k : 1;
  return ScaleGeometry{k, static_cast<std::ptrdiff_t>(er), static_cast<std::ptrdiff_t>(k),
                       all_anchors(er, f.rows(), boundary), all_anchors(k, f.cols(), boundary)};
}

/// Value of every family window of one scale, indexed by ScaleGeometry::index.
std::vector<double> fractional_window_values(const GridFunction& f, const PrefixTable& table,
                                             const ScaleGeometry& g, double alpha) {
  std::vector<double> values(g.count());
  const Box grid = f.bounds();
  for (std::ptrdiff_t ar = g.rows.lo; ar <= g.rows.hi; ++ar)
    for (std::ptrdiff_t ac = g.cols.lo; ac <= g.cols.hi; ++ac) {
      const Box box = intersect(g.box(ar, ac), grid);
      values[g.index(ar, ac)] =
          fractional_average(table.window_sum(box), box.cells(), f.cell_measure(), alpha, f.dim());
    }
  return values;
}

GridFunction finish(const GridFunction& like, std::vector<double> best) {
  for (std::size_t i = 0; i < best.size(); ++i)
    if (best[i] == kNoCandidate) {
      const CellIndex x = like.cell_index(i);
      throw ValidationError("no family cube contains cell (" + std::to_string(x[0]) +
                            (like.dim() == 2 ? "," + std::to_string(x[1]) : std::string()) + ")");
    }
  return like.with_samples(std::move(best));
}

std::vector<double> mean_oscillation_values(const GridFunction& f, const PrefixTable& signed_table,
                                            const ScaleGeometry& g) {
  std::vector<double> values(g.count());
  const Box grid = f.bounds();
  for (std::ptrdiff_t ar = g.rows.lo; ar <= g.rows.hi; ++ar)
    for (std::ptrdiff_t ac = g.cols.lo; ac <= g.cols.hi; ++ac) {
      const Box box = intersect(g.box(ar, ac), grid);
      const double n = static_cast<double>(box.cells());
      const double mean = signed_table.window_sum(box) / n;
      double dev = 0.0;
      for (std::ptrdiff_t r = box.row0; r < box.row0 + box.rows; ++r)
        for (std::ptrdiff_t c = box.col0; c < box.col0 + box.cols; ++c) dev += std::abs(f.at(r, c) - mean);
      values[g.index(ar, ac)] = dev / n;
    }
  return values;
}

template <typename ValueFn>
GridFunction scatter_over_family(const GridFunction& f, const CubeFamily& family, ValueFn&& window_values) {
  WindowMaxScatter scatter(0, 0, static_cast<std::ptrdiff_t>(f.rows()), static_cast<std::ptrdiff_t>(f.cols()));
  for (std::size_t k : family.scales()) {
    const ScaleGeometry g = scale_geometry(f, k, family.boundary());
    if (g.count() == 0) continue;
    scatter.fold(window_values(g), g.rows.lo, g.rows.hi, g.cols.lo, g.cols.hi, g.row_extent, g.col_extent);
  }
  return finish(f, std::move(scatter.best));
}

}  // namespace

GridFunction maximal(const GridFunction& f, const OperatorParams& params) {
  check_alpha(params.alpha, f.dim());
  const CubeFamily& family = params.family;
  const PrefixTable table = PrefixTable::build(f);

  std::vector<ScaleGeometry> geometry;
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> slot(family.max_scale() + 1, 0);
  for (std::size_t k : family.scales()) {
    slot[k] = geometry.size();
    geometry.push_back(scale_geometry(f, k, family.boundary()));
    values.push_back(fractional_window_values(f, table, geometry.back(), params.alpha));
  }

  std::vector<double> best(f.size(), kNoCandidate);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double m = kNoCandidate;
    for_each_cube_containing(f, f.cell_index(i), family,
                             [&](std::size_t k, std::ptrdiff_t ar, std::ptrdiff_t ac) {
                               const std::size_t s = slot[k];
                               const double v = values[s][geometry[s].index(ar, ac)];
                               if (v > m) m = v;
                             });
    best[i] = m;
  }
  return finish(f, std::move(best));
}

GridFunction maximal_fast(const GridFunction& f, const OperatorParams& params) {
  check_alpha(params.alpha, f.dim());
  const PrefixTable table = PrefixTable::build(f);
  return scatter_over_family(f, params.family, [&](const ScaleGeometry& g) {
    return fractional_window_values(f, table, g, params.alpha);
  });
}

GridFunction maximal_restricted(const GridFunction& f, const Cube& qstar, const OperatorParams& params) {
  check_alpha(params.alpha, f.dim());
  const Box outer = qstar.box(f.dim());
  if (!f.bounds().contains(outer)) throw ValidationError("Q* " + qstar.describe(f.dim()) + " leaves the grid");
  const PrefixTable table = PrefixTable::build(f);
  const bool two_d = f.dim() == 2;

  std::vector<double> out(outer.cells(), kNoCandidate);
  for (std::ptrdiff_t r = outer.row0; r < outer.row0 + outer.rows; ++r)
    for (std::ptrdiff_t c = outer.col0; c < outer.col0 + outer.cols; ++c) {
      double m = kNoCandidate;
      for (std::size_t k : params.family.scales()) {
        if (k > qstar.side) break;
        const auto er = static_cast<std::ptrdiff_t>(two_d ? k : 1);
        const auto ec = static_cast<std::ptrdiff_t>(k);
        // Anchors keeping the cube inside Q* and containing (r, c).
        const std::ptrdiff_t rlo = std::max(outer.row0, r - er + 1);
        const std::ptrdiff_t rhi = std::min(outer.row0 + outer.rows - er, r);
        const std::ptrdiff_t clo = std::max(outer.col0, c - ec + 1);
        const std::ptrdiff_t chi = std::min(outer.col0 + outer.cols - ec, c);
        for (std::ptrdiff_t ar = rlo; ar <= rhi; ++ar)
          for (std::ptrdiff_t ac = clo; ac <= chi; ++ac) {
            const Box box{ar, ac, er, ec};
            const double v =
                fractional_average(table.window_sum(box), box.cells(), f.cell_measure(), params.alpha, f.dim());
            if (v > m) m = v;
          }
      }
      if (m == kNoCandidate)
        throw ValidationError("no family cube inside Q* contains cell (" + std::to_string(r) + "," +
                              std::to_string(c) + ")");
      out[static_cast<std::size_t>((r - outer.row0) * outer.cols + (c - outer.col0))] = m;
    }
  return f.restrict_to(qstar).with_samples(std::move(out));
}

GridFunction maximal_restricted_fast(const GridFunction& f, const Cube& qstar, const OperatorParams& params) {
  check_alpha(params.alpha, f.dim());
  const Box outer = qstar.box(f.dim());
  if (!f.bounds().contains(outer)) throw ValidationError("Q* " + qstar.describe(f.dim()) + " leaves the grid");
  // Cubes inside Q* are exactly the interior cubes of the restricted grid.
  const CubeFamily inside(params.family.capped(qstar.side).scales(), Boundary::interior);
  return maximal_fast(f.restrict_to(qstar), OperatorParams{params.alpha, inside});
}

GridFunction maximal_commutator(const GridFunction& b, const GridFunction& f, const OperatorParams& params) {
  check_same_grid(b, f);
  check_alpha(params.alpha, f.dim());
  const CubeFamily& family = params.family;
  const bool two_d = f.dim() == 2;
  const auto reach_r = static_cast<std::ptrdiff_t>(two_d ? family.max_scale() - 1 : 0);
  const auto reach_c = static_cast<std::ptrdiff_t>(family.max_scale() - 1);
  const Box grid = f.bounds();

  std::vector<double> out(f.size(), kNoCandidate);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto [r, c] = f.row_col(f.cell_index(i));
    // Every cube containing x lies in this neighbourhood.
    const Box region = intersect(Box{r - reach_r, c - reach_c, 2 * reach_r + 1, 2 * reach_c + 1}, grid);
    const double bx = b[i];
    std::vector<double> g;
    g.reserve(region.cells());
    for (std::ptrdiff_t y = region.row0; y < region.row0 + region.rows; ++y)
      for (std::ptrdiff_t z = region.col0; z < region.col0 + region.cols; ++z)
        g.push_back(std::abs(bx - b.at(y, z)) * std::abs(f.at(y, z)));
    std::vector<std::size_t> shape = two_d ? std::vector<std::size_t>{static_cast<std::size_t>(region.rows),
                                                                       static_cast<std::size_t>(region.cols)}
                                           : std::vector<std::size_t>{static_cast<std::size_t>(region.cols)};
    const PrefixTable local = PrefixTable::build(GridFunction(std::move(shape), f.cell_size(), std::move(g)));

    double m = kNoCandidate;
    for_each_cube_containing(f, f.cell_index(i), family, [&](std::size_t k, std::ptrdiff_t ar, std::ptrdiff_t ac) {
      const Box box = intersect(Box{ar, ac, two_d ? static_cast<std::ptrdiff_t>(k) : 1,
                                    static_cast<std::ptrdiff_t>(k)},
                                grid);
      const Box shifted{box.row0 - region.row0, box.col0 - region.col0, box.rows, box.cols};
      const double v =
          fractional_average(local.window_sum(shifted), box.cells(), f.cell_measure(), params.alpha, f.dim());
      if (v > m) m = v;
    });
    out[i] = m;
  }
  return finish(f, std::move(out));
}

GridFunction commutator_maximal(const GridFunction& b, const GridFunction& f, const OperatorParams& params) {
  check_same_grid(b, f);
  const GridFunction mf = maximal_fast(f, params);
  const GridFunction mbf = maximal_fast(product(b, f), params);
  return difference(product(b, mf), mbf);
}

GridFunction sharp_maximal(const GridFunction& f, const CubeFamily& family) {
  const PrefixTable table = PrefixTable::build(f, 1.0, false);
  return scatter_over_family(f, family, [&](const ScaleGeometry& g) { return mean_oscillation_values(f, table, g); });
}

GridFunction sharp_maximal_extended(const GridFunction& f, const Cube& region, const CubeFamily& family) {
  const Box q = region.box(f.dim());
  if (!f.bounds().contains(q)) throw ValidationError("region " + region.describe(f.dim()) + " leaves the grid");
  const PrefixTable table = PrefixTable::build(f, 1.0, false);
  const bool two_d = f.dim() == 2;

  WindowMaxScatter scatter(q.row0, q.col0, q.rows, q.cols);
  std::vector<double> values;
  for (std::size_t k : family.scales()) {
    const auto er = static_cast<std::ptrdiff_t>(two_d ? k : 1);
    const auto ec = static_cast<std::ptrdiff_t>(k);
    // Windows meeting the region; outside it the function is zero, including past the grid edge.
    const AnchorRange rows{q.row0 - er + 1, q.row0 + q.rows - 1};
    const AnchorRange cols{q.col0 - ec + 1, q.col0 + q.cols - 1};
    const double volume = static_cast<double>(er * ec);
    values.assign(static_cast<std::size_t>(rows.count() * cols.count()), 0.0);
    for (std::ptrdiff_t ar = rows.lo; ar <= rows.hi; ++ar)
      for (std::ptrdiff_t ac = cols.lo; ac <= cols.hi; ++ac) {
        const Box inside = intersect(Box{ar, ac, er, ec}, q);
        const double mean = table.window_sum(inside) / volume;
        double dev = 0.0;
        for (std::ptrdiff_t r = inside.row0; r < inside.row0 + inside.rows; ++r)
          for (std::ptrdiff_t c = inside.col0; c < inside.col0 + inside.cols; ++c) dev += std::abs(f.at(r, c) - mean);
        dev += (volume - static_cast<double>(inside.cells())) * std::abs(mean);
        values[static_cast<std::size_t>((ar - rows.lo) * cols.count() + (ac - cols.lo))] = dev / volume;
      }
    scatter.fold(values, rows.lo, rows.hi, cols.lo, cols.hi, er, ec);
  }
  // Every cell of the region lies in some window of every scale, so no cell is left empty.
  return f.restrict_to(region).with_samples(std::move(scatter.best));
}

GridFunction sharp_maximal_l2_proxy(const GridFunction& f, const CubeFamily& family) {
  const PrefixTable first = PrefixTable::build(f, 1.0, false);
  const PrefixTable second = PrefixTable::build(f, 2.0, true);
  const Box grid = f.bounds();
  return scatter_over_family(f, family, [&](const ScaleGeometry& g) {
    std::vector<double> values(g.count());
    for (std::ptrdiff_t ar = g.rows.lo; ar <= g.rows.hi; ++ar)
      for (std::ptrdiff_t ac = g.cols.lo; ac <= g.cols.hi; ++ac) {
        const Box box = intersect(g.box(ar, ac), grid);
        const double n = static_cast<double>(box.cells());
        const double mean = first.window_sum(box) / n;
        values[g.index(ar, ac)] = std::sqrt(std::max(0.0, second.window_sum(box) / n - mean * mean));
      }
    return values;
  });
}

GridFunction commutator_sharp(const GridFunction& b, const GridFunction& f, const CubeFamily& family) {
  check_same_grid(b, f);
  const GridFunction sf = sharp_maximal(f, family);
  const GridFunction sbf = sharp_maximal(product(b, f), family);
  return difference(product(b, sf), sbf);
}

SignedDecomposition decompose_sign(const GridFunction& b) {
  std::vector<double> minus(b.size()), plus(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double v = b[i];
    minus[i] = v < 0 ? -v : 0.0;
    plus[i] = std::abs(v) - minus[i];
  }
  return SignedDecomposition{b.with_samples(std::move(minus)), b.with_samples(std::move(plus))};
}

}  // namespace slicemax
