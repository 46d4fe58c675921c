#include "slicemax/verify/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail/summation.hpp"
#include "slicemax/io.hpp"

namespace slicemax::verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

InstanceDescriptor complete(InstanceDescriptor d, const GridFunction& grid, double alpha, const CubeFamily* family,
                            const Cube* cube = nullptr) {
  d.shape = grid.shape();
  d.h = grid.cell_size();
  d.alpha = alpha;
  if (family) d.family = family->describe();
  if (cube) d.cube = *cube;
  return d;
}

VerificationReport start(const std::string& id, InstanceDescriptor where, double tolerance, bool hard = true) {
  VerificationReport r;
  r.check_id = id;
  r.instance = std::move(where);
  r.tolerance = tolerance;
  r.hard = hard;
  return r;
}

/// Calls visit(grid_row, grid_col, j) over the cells of `box`, j counting row-major within the box.
template <typename Visit>
void for_cells(const Box& box, Visit&& visit) {
  std::size_t j = 0;
  for (std::ptrdiff_t r = box.row0; r < box.row0 + box.rows; ++r)
    for (std::ptrdiff_t c = box.col0; c < box.col0 + box.cols; ++c, ++j) visit(r, c, j);
}

double cube_mean(const GridFunction& b, const Box& box) {
  detail::Accumulator acc;
  for_cells(box, [&](auto r, auto c, std::size_t) { acc.add(b.at(r, c)); });
  return acc.value() / static_cast<double>(box.cells());
}

/// Largest excess of lhs over rhs and the matching verdict for lhs <= rhs + slack.
void cellwise_inequality(VerificationReport& report, const GridFunction& lhs, const GridFunction& rhs, double slack) {
  double excess = -kInf;
  double ratio = 0.0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double e = lhs[i] - rhs[i];
    if (e > excess) {
      excess = e;
      worst = i;
    }
    if (rhs[i] > 0) ratio = std::max(ratio, lhs[i] / rhs[i]);
  }
  report.add("max_excess", excess);
  report.add("max_ratio", ratio);
  report.add("slack", slack);
  const CellIndex x = lhs.cell_index(worst);
  report.add("worst_cell_row", static_cast<double>(lhs.dim() == 2 ? x[0] : 0));
  report.add("worst_cell_col", static_cast<double>(lhs.dim() == 2 ? x[1] : x[0]));
  report.verdict = excess <= slack ? Verdict::pass : Verdict::fail;
}

/// Family windows containing (r, c) with exactly half of their cells in Q. With `bounded` the
/// window must be admissible on `grid` under the family's policy and its cells are clipped to the grid.
bool has_half_window(const GridFunction& grid, const Box& q, std::ptrdiff_t r, std::ptrdiff_t c,
                     const CubeFamily& family, bool bounded) {
  const bool two_d = grid.dim() == 2;
  const Box g = grid.bounds();
  for (std::size_t k : family.scales()) {
    const auto er = static_cast<std::ptrdiff_t>(two_d ? k : 1);
    const auto ec = static_cast<std::ptrdiff_t>(k);
    for (std::ptrdiff_t ar = r - er + 1; ar <= r; ++ar)
      for (std::ptrdiff_t ac = c - ec + 1; ac <= c; ++ac) {
        Box w{ar, ac, er, ec};
        if (bounded) {
          if (family.boundary() == Boundary::interior && !g.contains(w)) continue;
          w = intersect(w, g);
        }
        if (2 * intersect(w, q).cells() == w.cells()) return true;
      }
  }
  return false;
}

struct LevelValue {
  double value = 0.0;
  std::string argmax;
};

void record_levels(VerificationReport& report, const std::string& name, const std::vector<Level>& levels,
                   const std::vector<LevelValue>& values) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    report.add(name + "[" + levels[i].label + "]", values[i].value);
    report.constants.push_back({name + "[" + levels[i].label + "]", values[i].value, values[i].argmax});
  }
}

std::vector<double> plain(const std::vector<LevelValue>& v) {
  std::vector<double> out;
  for (const LevelValue& x : v) out.push_back(x.value);
  return out;
}

void stability_verdict(VerificationReport& report, const std::vector<double>& values, double threshold) {
  const double drift = max_drift(values);
  report.add("drift", drift);
  if (values.size() < 2) {
    report.verdict = Verdict::fail;
    report.message = "stability needs at least two levels";
    return;
  }
  report.verdict = drift <= threshold ? Verdict::pass : Verdict::fail;
}

std::string describe_levels(const std::vector<Level>& levels) {
  std::string out;
  for (const Level& l : levels) out += (out.empty() ? "" : " -> ") + l.label;
  return out;
}

double safe_ratio(double num, double den) { return den > 0 ? num / den : (num > 0 ? kInf : 0.0); }

}  // namespace

void Tolerances::override_hard(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw ValidationError("tolerance must be finite and >= 0");
  identity = inequality = holder = oracle = value;
}

double max_drift(const std::vector<double>& values) {
  double worst = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double a = values[i - 1], b = values[i];
    if (a == 0.0 && b == 0.0) continue;
    worst = std::max(worst, a == 0.0 ? kInf : std::abs(b / a - 1.0));
  }
  return worst;
}

bool increasing(const std::vector<double>& values) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) return false;
  return true;
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::any: return "any";
    case Trend::bounded: return "bounded";
    case Trend::growing: return "growing";
  }
  return "?";
}

VerificationReport check_lemma26(const GridFunction& b, const Cube& q, double alpha, const CubeFamily& family,
                                 const Tolerances& tol, InstanceDescriptor where) {
  VerificationReport report = start("lemma26", complete(std::move(where), b, alpha, &family, &q), tol.identity);
  if (!family.has_scale(q.side)) {
    report.verdict = Verdict::vacuous;
    report.message = "cube side is not a family scale";
    return report;
  }
  const int n = b.dim();
  const Box box = q.box(n);
  const double measure = q.measure(n, b.cell_size());
  const double weight = std::pow(measure, -alpha / n);
  const OperatorParams params{alpha, family};
  const GridFunction restricted = maximal_restricted_fast(b, q, params);

  const double mean = cube_mean(b, box);
  double margin = kInf;
  detail::Accumulator below, above;
  for_cells(box, [&](auto r, auto c, std::size_t j) {
    margin = std::min(margin, weight * restricted[j] - std::abs(mean));
    const double v = b.at(r, c);
    if (v <= mean)
      below.add(mean - v);
    else
      above.add(v - mean);
  });
  const double e = below.value(), f = above.value();
  const double residual = std::max(e, f) > 0 ? std::abs(e - f) / std::max(e, f) : 0.0;

  const double expected = std::pow(measure, alpha / n);
  const GridFunction chi = maximal_fast(indicator(b, q), params);
  const GridFunction cutoff = maximal_fast(masked(b, q), params);
  double chi_error = 0.0, gap = 0.0;
  for_cells(box, [&](auto r, auto c, std::size_t j) {
    chi_error = std::max(chi_error, std::abs(chi.at(r, c) - expected) / expected);
    gap = std::max(gap, cutoff.at(r, c) - restricted[j]);
  });

  report.add("b_mean", mean);
  report.add("mean_bound_margin", margin);
  report.add("balance_E", e);
  report.add("balance_F", f);
  report.add("balance_residual", residual);
  report.add("chi_expected", expected);
  report.add("chi_identity_error", chi_error);
  report.add("restricted_cutoff_gap", gap);
  const bool bound_ok = margin >= -tol.identity * std::max(std::abs(mean), std::numeric_limits<double>::min());
  const bool ok = bound_ok && residual <= tol.identity && chi_error <= tol.identity;
  report.verdict = ok ? Verdict::pass : Verdict::fail;
  if (!bound_ok) report.message = "mean bound violated";
  else if (residual > tol.identity) report.message = "E/F balance residual above tolerance";
  else if (chi_error > tol.identity) report.message = "M_alpha(chi_Q) differs from |Q|^(alpha/n)";
  return report;
}

VerificationReport check_oscillation_domination(const GridFunction& b, const Cube& q, double alpha,
                                                const CubeFamily& family, const Tolerances& tol,
                                                InstanceDescriptor where) {
  VerificationReport report =
      start("oscillation_domination", complete(std::move(where), b, alpha, &family, &q), tol.identity);
  if (!family.has_scale(q.side)) {
    report.verdict = Verdict::vacuous;
    report.message = "cube side is not a family scale";
    return report;
  }
  const int n = b.dim();
  const Box box = q.box(n);
  const double weight = std::pow(q.measure(n, b.cell_size()), -alpha / n);
  const GridFunction restricted = maximal_restricted_fast(b, q, {alpha, family});
  const double mean = cube_mean(b, box);
  detail::Accumulator osc, dom;
  for_cells(box, [&](auto r, auto c, std::size_t j) {
    osc.add(std::abs(b.at(r, c) - mean));
    dom.add(std::abs(b.at(r, c) - weight * restricted[j]));
  });
  const double cells = static_cast<double>(box.cells());
  const double lhs = osc.value() / cells, rhs = 2.0 * dom.value() / cells;
  report.add("oscillation", lhs);
  report.add("twice_restricted_deviation", rhs);
  report.verdict = lhs <= rhs * (1.0 + tol.identity) ? Verdict::pass : Verdict::fail;
  return report;
}

VerificationReport check_eq31(const GridFunction& b, const GridFunction& f, double alpha, const CubeFamily& family,
                              const Tolerances& tol, InstanceDescriptor where) {
  VerificationReport report = start("eq31_domination", complete(std::move(where), b, alpha, &family), tol.inequality);
  const OperatorParams params{alpha, family};
  const GridFunction mf = maximal_fast(f, params);
  const GridFunction lhs = absolute(commutator_maximal(b, f, params));
  const SignedDecomposition parts = decompose_sign(b);
  const GridFunction rhs = sum(maximal_commutator(b, f, params), scaled(product(parts.b_minus, mf), 2.0));
  const double scale = max_abs(b) * max_abs(mf) + max_abs(maximal_fast(product(b, f), params));
  cellwise_inequality(report, lhs, rhs, tol.inequality * scale);
  return report;
}

VerificationReport check_holder(const GridFunction& f, const GridFunction& g, double p, const Tolerances& tol,
                                InstanceDescriptor where) {
  VerificationReport report = start("holder", complete(std::move(where), f, 0.0, nullptr), tol.holder);
  const HolderRatio h = holder_check(f, g, p, tol.holder);
  report.add("p", p);
  report.add("ratio", h.ratio);
  report.verdict = h.vacuous ? Verdict::vacuous : (h.holds ? Verdict::pass : Verdict::fail);
  return report;
}

VerificationReport check_sharp_le_2m(const GridFunction& f, const CubeFamily& family, const Tolerances& tol,
                                     InstanceDescriptor where) {
  VerificationReport report = start("sharp_le_2m", complete(std::move(where), f, 0.0, &family), tol.inequality);
  const GridFunction lhs = sharp_maximal(f, family);
  const GridFunction rhs = scaled(maximal_fast(f, {0.0, family}), 2.0);
  cellwise_inequality(report, lhs, rhs, tol.inequality * max_abs(f));
  return report;
}

VerificationReport check_sharp_commutator(const GridFunction& b, const GridFunction& f, const CubeFamily& family,
                                          const Tolerances& tol, InstanceDescriptor where) {
  VerificationReport report =
      start("sharp_commutator_bound", complete(std::move(where), b, 0.0, &family), tol.inequality);
  const GridFunction abs_b = absolute(b);
  const GridFunction lhs = absolute(commutator_sharp(abs_b, f, family));
  const GridFunction rhs = scaled(maximal_commutator(abs_b, f, {0.0, family}), 2.0);
  cellwise_inequality(report, lhs, rhs, tol.inequality * max_abs(b) * max_abs(f));
  return report;
}

VerificationReport check_sign_decomposition(const GridFunction& b, InstanceDescriptor where) {
  VerificationReport report = start("sign_decomposition", complete(std::move(where), b, 0.0, nullptr), 0.0);
  const SignedDecomposition d = decompose_sign(b);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const bool ok = d.b_plus[i] - d.b_minus[i] == b[i] && d.b_plus[i] + d.b_minus[i] == std::abs(b[i]) &&
                    d.b_plus[i] >= 0.0 && d.b_minus[i] >= 0.0;
    if (!ok) ++bad;
  }
  report.add("bad_cells", static_cast<double>(bad));
  report.verdict = bad == 0 ? Verdict::pass : Verdict::fail;
  return report;
}

VerificationReport check_fast_vs_reference(const GridFunction& f, double alpha, const CubeFamily& family,
                                           const Tolerances& tol, InstanceDescriptor where) {
  VerificationReport report = start("fast_vs_reference", complete(std::move(where), f, alpha, &family), tol.oracle);
  const OperatorParams params{alpha, family};
  const GridFunction fast = maximal_fast(f, params);
  const GridFunction ref = maximal(f, params);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(fast[i] - ref[i]));
  report.add("max_abs_discrepancy", worst);
  report.verdict = worst <= tol.oracle ? Verdict::pass : Verdict::fail;
  return report;
}

std::vector<VerificationReport> check_proof_identities(const GridFunction& b, const Cube& q, double alpha,
                                                       const CubeFamily& family, const Tolerances& tol,
                                                       InstanceDescriptor where) {
  const InstanceDescriptor d = complete(std::move(where), b, alpha, &family, &q);
  const int n = b.dim();
  const Box box = q.box(n);
  const OperatorParams params{alpha, family};
  std::vector<VerificationReport> out;

  // b(y) - |Q|^(-a/n) M_{a,Q} b(y) = |Q|^(-a/n) [b, M_a](chi_Q)(y)
  {
    VerificationReport report = start("identity_fractional_commutator", d, tol.identity);
    if (!family.has_scale(q.side)) {
      report.verdict = Verdict::vacuous;
      report.message = "cube side is not a family scale";
    } else {
      const double weight = std::pow(q.measure(n, b.cell_size()), -alpha / n);
      const GridFunction restricted = maximal_restricted_fast(b, q, params);
      const GridFunction cutoff = maximal_fast(masked(b, q), params);
      const GridFunction comm = commutator_maximal(b, indicator(b, q), params);
      double gap = 0.0, error = 0.0, scale = 0.0;
      for_cells(box, [&](auto r, auto c, std::size_t j) {
        gap = std::max(gap, std::abs(cutoff.at(r, c) - restricted[j]));
        const double lhs = b.at(r, c) - weight * restricted[j];
        const double rhs = weight * comm.at(r, c);
        error = std::max(error, std::abs(lhs - rhs));
        scale = std::max({scale, std::abs(b.at(r, c)), weight * restricted[j]});
      });
      const double relative = scale > 0 ? error / scale : error;
      report.add("restricted_cutoff_gap", gap);
      report.add("max_abs_error", error);
      report.add("relative_error", relative);
      if (gap > tol.identity * std::max(scale, std::numeric_limits<double>::min())) {
        report.verdict = Verdict::gap;
        report.message = "M_alpha(b chi_Q) differs from M_{alpha,Q} b on this grid";
      } else {
        report.verdict = relative <= tol.identity ? Verdict::pass : Verdict::fail;
      }
    }
    out.push_back(std::move(report));
  }

  // M#(chi_Q) = 1/2 on Q
  const GridFunction chi = indicator(b, q);
  const GridFunction sharp_chi = sharp_maximal(chi, family);
  std::vector<bool> half(box.cells(), false);
  {
    VerificationReport report = start("sharp_indicator_half", d, tol.identity);
    std::size_t off = 0, blocked_by_edge = 0, no_window = 0;
    double deviation = 0.0;
    for_cells(box, [&](auto r, auto c, std::size_t j) {
      const double dev = std::abs(sharp_chi.at(r, c) - 0.5);
      deviation = std::max(deviation, dev);
      half[j] = dev <= tol.identity * 0.5;
      if (half[j]) return;
      ++off;
      if (has_half_window(b, box, r, c, family, true)) return;
      if (has_half_window(b, box, r, c, family, false))
        ++blocked_by_edge;
      else
        ++no_window;
    });
    report.add("max_deviation", deviation);
    report.add("cells_off_half", static_cast<double>(off));
    report.add("cells_without_window_on_grid", static_cast<double>(blocked_by_edge));
    report.add("cells_without_window_in_family", static_cast<double>(no_window));
    if (off == 0) {
      report.verdict = Verdict::pass;
    } else if (off > blocked_by_edge + no_window) {
      report.verdict = Verdict::fail;
      report.message = "a half-overlapping window exists but M#(chi_Q) != 1/2";
    } else if (blocked_by_edge > 0) {
      report.verdict = Verdict::vacuous_boundary;
      report.message = "the half-overlapping window leaves the grid";
    } else {
      report.verdict = Verdict::vacuous;
      report.message = "no family window overlaps Q by exactly half";
    }
    out.push_back(std::move(report));
  }

  // (b - 2 M#(b chi_Q)) chi_Q = 2 [b, M#](chi_Q) where M#(chi_Q) = 1/2
  {
    VerificationReport report = start("identity_sharp_commutator", d, tol.identity);
    const GridFunction sharp_b = sharp_maximal(masked(b, q), family);
    const GridFunction comm = commutator_sharp(b, chi, family);
    double error = 0.0, scale = 0.0;
    std::size_t used = 0;
    for_cells(box, [&](auto r, auto c, std::size_t j) {
      if (!half[j]) return;
      ++used;
      const double lhs = b.at(r, c) - 2.0 * sharp_b.at(r, c);
      error = std::max(error, std::abs(lhs - 2.0 * comm.at(r, c)));
      scale = std::max({scale, std::abs(b.at(r, c)), 2.0 * sharp_b.at(r, c)});
    });
    const double relative = scale > 0 ? error / scale : error;
    report.add("cells_checked", static_cast<double>(used));
    report.add("cells_skipped", static_cast<double>(box.cells() - used));
    report.add("max_abs_error", error);
    report.add("relative_error", relative);
    if (used == 0) {
      report.verdict = Verdict::gap;
      report.message = "M#(chi_Q) != 1/2 on every cell of Q";
    } else {
      report.verdict = relative <= tol.identity ? Verdict::pass : Verdict::fail;
    }
    out.push_back(std::move(report));
  }
  return out;
}

EmpiricalConstant lemma22_constant(const Level& level, double r, double p) {
  const SliceParams slice{level.t, r, p};
  EmpiricalConstant best{"lemma22", 0.0, ""};
  for (std::size_t i = 0; i < level.inputs.size(); ++i) {
    const double ratio = safe_ratio(slice_norm(maximal_fast(level.inputs[i], {0.0, level.family}), slice),
                                    slice_norm(level.inputs[i], slice));
    if (ratio >= best.value) best = {"lemma22", ratio, level.input_names[i]};
  }
  return best;
}

EmpiricalConstant lemma24_constant(const Level& level, const ExponentSet& exps) {
  EmpiricalConstant best{"lemma24", 0.0, ""};
  for (std::size_t i = 0; i < level.inputs.size(); ++i) {
    const GridFunction& f = level.inputs[i];
    const double ratio = safe_ratio(slice_norm(maximal_fast(f, {exps.alpha, level.family}), {level.t, exps.r, exps.s}),
                                    slice_norm(f, {level.t, exps.p, exps.q}));
    if (ratio >= best.value) best = {"lemma24", ratio, level.input_names[i]};
  }
  return best;
}

EmpiricalConstant lemma25_constant(const Level& level, double alpha) {
  if (level.inputs.empty()) throw ValidationError("lemma25 needs an input function");
  const GridFunction& f = level.inputs.front();
  const OperatorParams frac{alpha, level.family}, plain_m{0.0, level.family};
  const double norm = bmo_norm(level.b, level.family);
  EmpiricalConstant best{"lemma25", 0.0, ""};
  if (norm == 0.0) return best;
  const GridFunction num = maximal_commutator(level.b, f, frac);
  const GridFunction den =
      sum(maximal_fast(maximal_fast(f, frac), plain_m), maximal_fast(maximal_fast(f, plain_m), frac));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double ratio = safe_ratio(num[i], norm * den[i]);
    if (ratio > best.value) {
      const CellIndex x = f.cell_index(i);
      best = {"lemma25", ratio, "cell " + std::to_string(x[0]) + (f.dim() == 2 ? "," + std::to_string(x[1]) : "")};
    }
  }
  return best;
}

VerificationReport check_lemma22(const std::vector<Level>& levels, double r, double p, const Tolerances& tol,
                                 InstanceDescriptor where) {
  if (levels.empty()) throw ValidationError("lemma22 needs at least one level");
  where = complete(std::move(where), levels.back().b, 0.0, &levels.back().family);
  where.note = describe_levels(levels);
  VerificationReport report = start("lemma22_constant", where, tol.stability, false);
  std::vector<LevelValue> values;
  for (const Level& level : levels) {
    const EmpiricalConstant c = lemma22_constant(level, r, p);
    values.push_back({c.value, c.argmax});
  }
  record_levels(report, "C", levels, values);
  stability_verdict(report, plain(values), tol.stability);
  return report;
}

VerificationReport check_lemma23(const GridFunction& like, const std::vector<std::size_t>& sides,
                                 const SliceParams& slice, InstanceDescriptor where) {
  VerificationReport report = start("lemma23_indicator_norm", complete(std::move(where), like, 0.0, nullptr), 2.0,
                                    false);
  report.instance.t = slice.t;
  double lo = kInf, hi = 0.0;
  const int n = like.dim();
  for (std::size_t side : sides) {
    const auto anchor = static_cast<std::ptrdiff_t>((like.cols() - std::min(side, like.cols())) / 2);
    const auto row = static_cast<std::ptrdiff_t>((like.rows() - std::min(side, like.rows())) / 2);
    const Cube q = n == 2 ? Cube::square(row, anchor, side) : Cube::interval(anchor, side);
    const double ratio =
        slice_norm(indicator(like, q), slice) / std::pow(q.measure(n, like.cell_size()), 1.0 / slice.p);
    report.add("ratio[side=" + std::to_string(side) + "]", ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  report.add("min_ratio", lo);
  report.add("max_ratio", hi);
  report.constants.push_back({"c1", lo, ""});
  report.constants.push_back({"c2", hi, ""});
  report.verdict = !sides.empty() && hi <= 2.0 * lo ? Verdict::pass : Verdict::fail;
  return report;
}

VerificationReport check_lemma24(const std::vector<Level>& levels, const ExponentSet& exps, const Tolerances& tol,
                                 InstanceDescriptor where) {
  if (levels.empty()) throw ValidationError("lemma24 needs at least one level");
  exps.validate();
  where = complete(std::move(where), levels.back().b, exps.alpha, &levels.back().family);
  where.exponents = exps;
  where.note = describe_levels(levels);
  VerificationReport report = start("lemma24_constant", where, tol.stability, false);
  std::vector<LevelValue> values;
  for (const Level& level : levels) {
    const EmpiricalConstant c = lemma24_constant(level, exps);
    values.push_back({c.value, c.argmax});
  }
  record_levels(report, "C", levels, values);
  stability_verdict(report, plain(values), tol.stability);
  return report;
}

VerificationReport check_lemma25(const std::vector<Level>& levels, double alpha, const Tolerances& tol,
                                 InstanceDescriptor where) {
  if (levels.empty()) throw ValidationError("lemma25 needs at least one level");
  where = complete(std::move(where), levels.back().b, alpha, &levels.back().family);
  where.note = describe_levels(levels);
  VerificationReport report = start("lemma25_constant", where, tol.stability, false);
  std::vector<LevelValue> values;
  bool all_vacuous = true;
  for (const Level& level : levels) {
    const double norm = bmo_norm(level.b, level.family);
    report.add("bmo_norm[" + level.label + "]", norm);
    if (norm > 0) all_vacuous = false;
    const EmpiricalConstant c = lemma25_constant(level, alpha);
    values.push_back({c.value, c.argmax});
  }
  record_levels(report, "C", levels, values);
  if (all_vacuous) {
    report.verdict = Verdict::vacuous;
    report.message = "BMO norm vanishes";
    return report;
  }
  stability_verdict(report, plain(values), tol.stability);
  return report;
}

EmpiricalConstant theorem_operator_ratio(int theorem, const Level& level, const ExponentSet& exps) {
  const SliceParams source{level.t, exps.p, exps.q};
  const SliceParams target = theorem == 3 ? source : SliceParams{level.t, exps.r, exps.s};
  const OperatorParams params{exps.alpha, level.family};
  EmpiricalConstant best{"operator_ratio", 0.0, ""};
  for (std::size_t i = 0; i < level.inputs.size(); ++i) {
    const GridFunction& f = level.inputs[i];
    GridFunction image = f;
    switch (theorem) {
      case 1: image = commutator_maximal(level.b, f, params); break;
      case 2: image = maximal_commutator(level.b, f, params); break;
      case 3: image = commutator_sharp(level.b, f, level.family); break;
      default: throw ValidationError("theorem must be 1, 2 or 3");
    }
    const double ratio = safe_ratio(slice_norm(image, target), slice_norm(f, source));
    if (ratio >= best.value) best = {"operator_ratio", ratio, level.input_names[i]};
  }
  return best;
}

VerificationReport check_theorem_equivalence(int theorem, const std::vector<Level>& levels, const ExponentSet& exps,
                                             Trend expectation, const Tolerances& tol, InstanceDescriptor where) {
  if (theorem < 1 || theorem > 3) throw ValidationError("theorem must be 1, 2 or 3");
  if (levels.empty()) throw ValidationError("theorem check needs levels");
  exps.validate();
  where = complete(std::move(where), levels.back().b, exps.alpha, &levels.back().family);
  where.exponents = exps;
  where.note = describe_levels(levels) + ", expect " + to_string(expectation);
  VerificationReport report = start("theorem" + std::to_string(theorem) + "_equivalence", where, tol.drift, false);

  static const Characterization t3[] = {Characterization::T1_3, Characterization::T2_3, Characterization::T3_3};
  static const Characterization t4[] = {Characterization::T1_4, Characterization::T2_4, Characterization::T3_4};
  std::vector<LevelValue> op, q3, q4;
  for (const Level& level : levels) {
    const EmpiricalConstant ratio = theorem_operator_ratio(theorem, level, exps);
    op.push_back({ratio.value, ratio.argmax});
    const SliceParams slice{level.t, exps.r, exps.s};
    const CubeExtremum a = characterization(level.b, t3[theorem - 1], exps, slice, level.family);
    const CubeExtremum b = characterization(level.b, t4[theorem - 1], exps, slice, level.family);
    q3.push_back({a.value, a.argmax.describe(level.b.dim())});
    q4.push_back({b.value, b.argmax.describe(level.b.dim())});
  }
  record_levels(report, "operator_ratio", levels, op);
  record_levels(report, to_string(t3[theorem - 1]), levels, q3);
  record_levels(report, to_string(t4[theorem - 1]), levels, q4);

  std::string classes;
  bool all_bounded = true, all_growing = true;
  for (const auto* series : {&op, &q3, &q4}) {
    const std::vector<double> v = plain(*series);
    const double drift = max_drift(v);
    const bool bounded = drift <= tol.drift;
    const bool growing = !bounded && increasing(v);
    all_bounded = all_bounded && bounded;
    all_growing = all_growing && growing;
    classes += std::string(classes.empty() ? "" : ", ") + (bounded ? "bounded" : growing ? "growing" : "mixed");
    report.add(std::string(series == &op ? "operator_ratio" : series == &q3 ? "T3" : "T4") + "_drift", drift);
  }
  report.message = "operator ratio, (T.3), (T.4): " + classes;
  if (levels.size() < 3) {
    report.verdict = Verdict::fail;
    report.message += "; needs at least 3 levels";
    return report;
  }
  const bool consistent = all_bounded || all_growing;
  const bool matches = expectation == Trend::any || (expectation == Trend::bounded && all_bounded) ||
                       (expectation == Trend::growing && all_growing);
  report.verdict = consistent && matches ? Verdict::pass : Verdict::fail;
  return report;
}

}  // namespace slicemax::verify
