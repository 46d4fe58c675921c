#include "slicemax/verify/suite.hpp"

#include <functional>

#include <json.hpp>

#include "slicemax/verify/corpus.hpp"
#include "slicemax/verify/experiments.hpp"

namespace slicemax::verify {

namespace {

InstanceDescriptor describe(const std::string& symbol, const std::string& input, std::uint64_t seed,
                            const std::vector<std::size_t>& shape = {}, double h = 1.0) {
  InstanceDescriptor d;
  d.symbol = symbol;
  d.input = input;
  d.seed = seed;
  d.shape = shape;
  d.h = h;
  return d;
}

std::vector<double> alphas_for(const SuiteConfig& config, int dim) {
  if (!config.alphas.empty()) return config.alphas;
  return {0.0, 0.25, 0.5 * dim};
}

/// Runs `body`; any exception becomes one failed report under `check_id`.
void guarded(std::vector<VerificationReport>& out, const std::string& check_id, const InstanceDescriptor& where,
             const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    VerificationReport r;
    r.check_id = check_id;
    r.instance = where;
    r.verdict = Verdict::fail;
    r.message = std::string("internal error: ") + e.what();
    out.push_back(std::move(r));
  }
}

/// A centred cube of side about N/4 and the same cube pushed against the low corner. The side is
/// rounded up to even so the sharp-function identities have a half-overlapping window.
std::vector<Cube> probe_cubes(const GridFunction& g) {
  const std::size_t n = std::min(g.rows() == 1 ? g.cols() : g.rows(), g.cols());
  std::size_t side = std::max<std::size_t>(n / 4, 1);
  if (side % 2 == 1 && side < n) ++side;
  const auto mid_c = static_cast<std::ptrdiff_t>((g.cols() - side) / 2);
  const auto mid_r = static_cast<std::ptrdiff_t>((g.rows() - std::min(side, g.rows())) / 2);
  if (g.dim() == 2) return {Cube::square(mid_r, mid_c, side), Cube::square(0, 0, side)};
  return {Cube::interval(mid_c, side), Cube::interval(0, side)};
}

}  // namespace

std::vector<VerificationReport> run_suite(const SuiteConfig& config) {
  std::vector<VerificationReport> out;
  const Tolerances& tol = config.tolerances;

  for (const auto& shape : config.shapes) {
    const int dim = static_cast<int>(shape.size());
    std::size_t extent = 0;
    for (auto s : shape) extent = std::max(extent, s);
    const std::size_t k = config.max_scale == 0 ? extent : config.max_scale;
    const CubeFamily family = CubeFamily::up_to(k, config.boundary);
    const double h = 1.0 / static_cast<double>(extent);

    std::vector<GridFunction> inputs;
    std::vector<std::string> input_names;
    for (std::size_t i = 0; i < config.inputs.size(); ++i) {
      const InstanceDescriptor where = describe("", config.inputs[i], config.seed + 1 + i, shape, h);
      guarded(out, "generate", where, [&] {
        const GeneratorSpec g = GeneratorSpec::parse(config.inputs[i]);
        inputs.push_back(generate(g, shape, h, config.seed + 1 + i));
        input_names.push_back(g.canonical());
      });
    }

    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const InstanceDescriptor where = describe("", input_names[i], config.seed + 1 + i, shape, h);
      guarded(out, "sharp_le_2m", where,
              [&] { out.push_back(check_sharp_le_2m(inputs[i], family, tol, where)); });
      for (double alpha : alphas_for(config, dim))
        guarded(out, "fast_vs_reference", where,
                [&] { out.push_back(check_fast_vs_reference(inputs[i], alpha, family, tol, where)); });
    }

    for (const std::string& symbol : config.symbols) {
      InstanceDescriptor base = describe(symbol, "", config.seed, shape, h);
      GridFunction b = GridFunction::constant(shape, h, 0.0);
      bool ok = false;
      guarded(out, "generate", base, [&] {
        const GeneratorSpec g = GeneratorSpec::parse(symbol);
        base.symbol = g.canonical();
        b = generate(g, shape, h, config.seed);
        ok = true;
      });
      if (!ok) continue;

      guarded(out, "sign_decomposition", base, [&] { out.push_back(check_sign_decomposition(b, base)); });
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        InstanceDescriptor where = base;
        where.input = input_names[i];
        for (double p : {1.5, 2.0, 3.0})
          guarded(out, "holder", where, [&] { out.push_back(check_holder(b, inputs[i], p, tol, where)); });
        guarded(out, "sharp_commutator_bound", where,
                [&] { out.push_back(check_sharp_commutator(b, inputs[i], family, tol, where)); });
      }

      for (double alpha : alphas_for(config, dim)) {
        for (std::size_t i = 0; i < inputs.size(); ++i) {
          InstanceDescriptor where = base;
          where.input = input_names[i];
          guarded(out, "eq31_domination", where,
                  [&] { out.push_back(check_eq31(b, inputs[i], alpha, family, tol, where)); });
        }
        for (const Cube& q : probe_cubes(b)) {
          InstanceDescriptor where = base;
          where.alpha = alpha;
          where.cube = q;
          guarded(out, "lemma26", where, [&] { out.push_back(check_lemma26(b, q, alpha, family, tol, base)); });
          guarded(out, "oscillation_domination", where,
                  [&] { out.push_back(check_oscillation_domination(b, q, alpha, family, tol, base)); });
          guarded(out, "proof_identities", where, [&] {
            for (auto& r : check_proof_identities(b, q, alpha, family, tol, base)) out.push_back(std::move(r));
          });
        }
      }
    }
  }

  const ExponentSet exps = ExponentSet::from_alpha(config.experiment_alpha, 1, config.p, config.q);
  for (const std::string& symbol : config.refinement_symbols) {
    const InstanceDescriptor where = describe(symbol, "", config.seed);
    guarded(out, "refinement", where, [&] {
      const ExperimentSpec spec{symbol, ExperimentSpec{}.inputs, 1, config.seed, config.boundary};
      const std::vector<Level> levels = refinement_levels(spec, config.resolutions);
      out.push_back(check_lemma22(levels, config.p, config.q, tol, where));
      out.push_back(check_lemma24(levels, exps, tol, where));
      out.push_back(check_lemma25(levels, config.experiment_alpha, tol, where));
      for (int theorem = 1; theorem <= 3; ++theorem)
        out.push_back(check_theorem_equivalence(theorem, levels, exps, Trend::bounded, tol, where));
      if (config.resolutions.size() >= 2) {
        // chi_Q input, alpha = 1/2, over the last refinement step
        const ExperimentSpec chi{symbol, {"indicator:lo=0.25,hi=0.5"}, 1, config.seed, config.boundary};
        const std::vector<std::size_t> last(config.resolutions.end() - 2, config.resolutions.end());
        out.push_back(check_lemma25(refinement_levels(chi, last), 0.5, tol, where));
      }
    });
  }
  for (const std::string& symbol : config.growth_symbols) {
    const InstanceDescriptor where = describe(symbol, "", config.seed);
    guarded(out, "domain_growth", where, [&] {
      const ExperimentSpec spec{symbol, ExperimentSpec{}.inputs, 1, config.seed, config.boundary};
      const std::vector<Level> levels = domain_levels(spec, config.domain_sizes);
      for (int theorem = 1; theorem <= 3; ++theorem)
        out.push_back(check_theorem_equivalence(theorem, levels, exps, Trend::growing, tol, where));
      out.push_back(check_bmo_growth(levels, tol, where));
    });
  }
  if (!config.resolutions.empty()) {
    const std::size_t n = config.resolutions.back();
    // t of two cells, cubes from eight windows up; below t the ratio scales like (|Q|/t)^(1/r - 1/p)
    std::vector<std::size_t> sides;
    for (std::size_t side = 16; side <= n / 2; side *= 2) sides.push_back(side);
    const InstanceDescriptor where = describe("", "indicator", config.seed);
    guarded(out, "lemma23_indicator_norm", where, [&] {
      const double h = 1.0 / static_cast<double>(n);
      const GridFunction like = GridFunction::constant({n}, h, 0.0);
      // r = p would make the slice norm an Lp norm and the ratio exactly 1
      out.push_back(check_lemma23(like, sides, {2.0 * h, 1.5, 3.0}, where));
    });
  }
  if (!config.rank_symbols.empty()) {
    guarded(out, "lemma27_rank_agreement", {}, [&] {
      out.push_back(check_bounded_together(config.rank_symbols, config.domain_sizes, 1, config.seed, tol));
    });
  }

  canonicalize(out);
  return out;
}

std::string suite_config_json(const SuiteConfig& config) {
  nlohmann::ordered_json j;
  j["seed"] = config.seed;
  j["symbols"] = config.symbols;
  j["inputs"] = config.inputs;
  j["shapes"] = config.shapes;
  j["alphas"] = config.alphas;
  j["max_scale"] = config.max_scale;
  j["boundary"] = to_string(config.boundary);
  const Tolerances& t = config.tolerances;
  j["tolerances"] = {{"identity", t.identity}, {"inequality", t.inequality}, {"holder", t.holder},
                     {"oracle", t.oracle},     {"stability", t.stability},   {"drift", t.drift},
                     {"growth", t.growth}};
  j["refinement_symbols"] = config.refinement_symbols;
  j["growth_symbols"] = config.growth_symbols;
  j["rank_symbols"] = config.rank_symbols;
  j["resolutions"] = config.resolutions;
  j["domain_sizes"] = config.domain_sizes;
  j["experiment_alpha"] = config.experiment_alpha;
  j["p"] = config.p;
  j["q"] = config.q;
  return j.dump();
}

}  // namespace slicemax::verify
