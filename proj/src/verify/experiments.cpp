#include "slicemax/verify/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "slicemax/io.hpp"
#include "slicemax/verify/corpus.hpp"

namespace slicemax::verify {

namespace {

std::vector<std::size_t> shape_of(int dim, std::size_t n) {
  return dim == 2 ? std::vector<std::size_t>{n, n} : std::vector<std::size_t>{n};
}

Level make_level(const ExperimentSpec& spec, std::size_t n, double h, std::size_t max_scale, double t) {
  if (spec.dim != 1 && spec.dim != 2) throw ValidationError("experiment dimension must be 1 or 2");
  const auto shape = shape_of(spec.dim, n);
  Level level{"N=" + std::to_string(n), generate(spec.symbol, shape, h, spec.seed), {}, {},
              CubeFamily::dyadic(std::max<std::size_t>(max_scale, 1), spec.boundary), t};
  for (const std::string& input : spec.inputs) {
    const GeneratorSpec g = GeneratorSpec::parse(input);
    level.inputs.push_back(generate(g, shape, h, spec.seed));
    level.input_names.push_back(g.canonical());
  }
  return level;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = avg;
    i = j + 1;
  }
  return out;
}

double growth_factor(double first, double last) {
  if (first == 0.0) return last == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return last / first;
}

}  // namespace

std::vector<Level> refinement_levels(const ExperimentSpec& spec, const std::vector<std::size_t>& resolutions) {
  std::vector<Level> out;
  for (std::size_t n : resolutions) out.push_back(make_level(spec, n, 1.0 / static_cast<double>(n), n / 2, 1.0 / 16));
  return out;
}

std::vector<Level> domain_levels(const ExperimentSpec& spec, const std::vector<std::size_t>& sizes) {
  std::vector<Level> out;
  for (std::size_t n : sizes) out.push_back(make_level(spec, n, 1.0, n, 4.0));
  return out;
}

VerificationReport check_bmo_growth(const std::vector<Level>& levels, const Tolerances& tol,
                                    InstanceDescriptor where) {
  if (levels.size() < 2) throw ValidationError("growth check needs at least two levels");
  VerificationReport report;
  report.check_id = "bmo_growth";
  report.hard = false;
  report.tolerance = tol.growth;
  const GridFunction& last = levels.back().b;
  where.shape = last.rows() == 1 ? std::vector<std::size_t>{last.cols()}
                                 : std::vector<std::size_t>{last.rows(), last.cols()};
  where.h = last.cell_size();
  where.family = levels.back().family.describe();
  for (const Level& level : levels) where.note += (where.note.empty() ? "" : " -> ") + level.label;
  report.instance = std::move(where);

  double worst = std::numeric_limits<double>::infinity();
  double previous = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double norm = bmo_norm(levels[i].b, levels[i].family);
    report.add("T2_4[" + levels[i].label + "]", norm);
    if (i > 0) {
      const double factor = growth_factor(previous, norm);
      report.add("factor[" + levels[i].label + "]", factor);
      worst = std::min(worst, factor);
    }
    previous = norm;
  }
  report.add("min_factor", worst);
  report.verdict = worst >= tol.growth ? Verdict::pass : Verdict::fail;
  return report;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) return saa == sbb ? 1.0 : 0.0;
  return sab / std::sqrt(saa * sbb);
}

VerificationReport check_bounded_together(const std::vector<std::string>& symbols,
                                          const std::vector<std::size_t>& sizes, int dim, std::uint64_t seed,
                                          const Tolerances& tol) {
  VerificationReport report;
  report.check_id = "lemma27_rank_agreement";
  report.hard = false;
  report.tolerance = 0.5;
  report.instance.seed = seed;
  report.instance.shape = shape_of(dim, sizes.empty() ? 0 : sizes.back());
  std::string names;
  for (const auto& s : symbols) names += (names.empty() ? "" : " ") + s;
  report.instance.symbol = names;
  for (std::size_t n : sizes) report.instance.note += (report.instance.note.empty() ? "N=" : ",") + std::to_string(n);
  if (sizes.size() < 2 || symbols.size() < 2) {
    report.verdict = Verdict::vacuous;
    report.message = "needs at least two symbols and two sizes";
    return report;
  }

  const ExponentSet exps{2, 2, 2, 2, 0.0, dim};
  const SliceParams slice{4.0, 2.0, 2.0};
  std::vector<double> g1, g3;
  std::size_t disagreements = 0;
  for (const std::string& symbol : symbols) {
    const std::vector<Level> levels = domain_levels({symbol, {}, dim, seed, Boundary::interior}, {sizes.front(), sizes.back()});
    const double a1 = characterization(levels[0].b, Characterization::T1_4, exps, slice, levels[0].family).value;
    const double b1 = characterization(levels[1].b, Characterization::T1_4, exps, slice, levels[1].family).value;
    const double a3 = characterization(levels[0].b, Characterization::T3_4, exps, slice, levels[0].family).value;
    const double b3 = characterization(levels[1].b, Characterization::T3_4, exps, slice, levels[1].family).value;
    g1.push_back(growth_factor(a1, b1));
    g3.push_back(growth_factor(a3, b3));
    report.add("T1_4_growth[" + symbol + "]", g1.back());
    report.add("T3_4_growth[" + symbol + "]", g3.back());
    if ((g1.back() <= 1.0 + tol.drift) != (g3.back() <= 1.0 + tol.drift)) ++disagreements;
  }
  const double rho = spearman(g1, g3);
  report.add("spearman", rho);
  report.add("disagreements", static_cast<double>(disagreements));
  report.verdict = rho >= 0.5 ? Verdict::pass : Verdict::fail;
  return report;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::resolution: return "resolution";
    case SweepAxis::domain: return "domain";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::t: return "t";
  }
  return "?";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  for (auto a : {SweepAxis::resolution, SweepAxis::domain, SweepAxis::alpha, SweepAxis::t})
    if (to_string(a) == s) return a;
  throw ValidationError("unknown sweep axis '" + s + "' (resolution, domain, alpha, t)");
}

std::vector<std::string> sweep_columns() {
  return {"axis",      "value",     "theorem",   "cells",     "h",         "alpha",
          "t",         "p",         "q",         "r",         "s",         "bmo",
          "operator_ratio", "T3",   "T4",        "lemma22_C", "lemma24_C", "lemma25_C",
          "chiq_maximal", "chiq_expected"};
}

std::string run_sweep(const SweepConfig& config, const std::string& config_json) {
  if (config.theorem < 1 || config.theorem > 3) throw ValidationError("theorem must be 1, 2 or 3");
  std::string out = "# config: " + config_json + "\n";
  const auto columns = sweep_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";

  static const Characterization t3[] = {Characterization::T1_3, Characterization::T2_3, Characterization::T3_3};
  static const Characterization t4[] = {Characterization::T1_4, Characterization::T2_4, Characterization::T3_4};
  const int dim = config.experiment.dim;
  for (double value : config.values) {
    double alpha = config.alpha;
    Level level = [&] {
      auto cells = [&](double v) {
        if (!(v >= 1.0) || v != std::floor(v)) throw ValidationError("grid sizes must be positive integers");
        return static_cast<std::size_t>(v);
      };
      switch (config.axis) {
        case SweepAxis::resolution: return refinement_levels(config.experiment, {cells(value)}).front();
        case SweepAxis::domain: return domain_levels(config.experiment, {cells(value)}).front();
        case SweepAxis::alpha:
        case SweepAxis::t: break;
      }
      return domain_levels(config.experiment, {config.size}).front();
    }();
    if (config.axis == SweepAxis::alpha) alpha = value;
    if (config.axis == SweepAxis::t)
      level.t = value;
    else if (config.t > 0)
      level.t = config.t;

    const ExponentSet exps = ExponentSet::from_alpha(alpha, dim, config.p, config.q);
    const SliceParams slice{level.t, exps.r, exps.s};
    const std::size_t n = level.b.cols();
    const Cube q = dim == 2 ? Cube::square(static_cast<std::ptrdiff_t>(n / 4), static_cast<std::ptrdiff_t>(n / 4),
                                           std::max<std::size_t>(n / 4, 1))
                            : Cube::interval(static_cast<std::ptrdiff_t>(n / 4), std::max<std::size_t>(n / 4, 1));
    const GridFunction chi = maximal_fast(indicator(level.b, q), {alpha, level.family});
    const Box qb = q.box(dim);

    const std::vector<double> row{
        static_cast<double>(config.theorem),
        static_cast<double>(level.b.size()),
        level.b.cell_size(),
        alpha,
        level.t,
        exps.p,
        exps.q,
        exps.r,
        exps.s,
        bmo_norm(level.b, level.family),
        theorem_operator_ratio(config.theorem, level, exps).value,
        characterization(level.b, t3[config.theorem - 1], exps, slice, level.family).value,
        characterization(level.b, t4[config.theorem - 1], exps, slice, level.family).value,
        lemma22_constant(level, exps.p, exps.q).value,
        lemma24_constant(level, exps).value,
        lemma25_constant(level, alpha).value,
        chi.at(qb.row0 + qb.rows / 2, qb.col0 + qb.cols / 2),
        std::pow(q.measure(dim, level.b.cell_size()), alpha / dim),
    };
    out += to_string(config.axis) + "," + format_number(value);
    for (double v : row) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

}  // namespace slicemax::verify
