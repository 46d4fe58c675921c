// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "slicemax/cli.hpp"
#include "slicemax/io.hpp"
#include "slicemax/verify/corpus.hpp"
#include "slicemax/verify/experiments.hpp"
#include "slicemax/verify/suite.hpp"

using namespace slicemax;
using namespace slicemax::verify;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = seconds_since(t0);
  const bool in_time = limit_s <= 0 || s <= limit_s;
  const bool pass = o.pass && in_time;
  std::printf("[%s] %d %s: %s; %.2f s", pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), s);
  if (limit_s > 0) std::printf(" (limit %.0f s)", limit_s);
  std::printf("\n");
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1: exact identities on seeded random symbols and cubes.
Outcome exact_identities() {
  const Tolerances tol;
  std::mt19937_64 rng(2024);
  std::size_t instances = 0, passed = 0;
  double worst = 0.0;
  std::string first_failure;
  for (const std::vector<std::size_t>& shape : {std::vector<std::size_t>{32}, std::vector<std::size_t>{12, 12}}) {
    const int n = static_cast<int>(shape.size());
    const std::size_t N = shape.back();
    const CubeFamily family = CubeFamily::up_to(N);
    for (double alpha : {0.0, 0.25, 0.5 * n}) {
      for (int i = 0; i < 20; ++i) {
        const GridFunction b = generate("random:lo=-2,hi=3", shape, 1.0 / static_cast<double>(N), rng());
        // even sides up to N/2, placed so a half-shifted copy stays on the grid
        const std::size_t side = 2 * (1 + rng() % (N / 4));
        const auto pos = [&] { return static_cast<std::ptrdiff_t>(side / 2 + rng() % (N - 2 * side + 1)); };
        const Cube q = n == 2 ? Cube::square(pos(), pos(), side) : Cube::interval(pos(), side);
        std::vector<VerificationReport> reports = check_proof_identities(b, q, alpha, family, tol);
        reports.push_back(check_lemma26(b, q, alpha, family, tol));
        ++instances;
        bool ok = true;
        for (const auto& r : reports) {
          if (r.verdict != Verdict::pass) {
            ok = false;
            if (first_failure.empty()) first_failure = r.check_id + " " + r.instance.key() + " " + to_string(r.verdict);
          }
          for (const auto& x : r.quantities)
            if (r.verdict == Verdict::pass && (x.name == "relative_error" || x.name == "balance_residual" || x.name == "chi_identity_error" ||
                x.name == "max_deviation"))
              worst = std::max(worst, x.value);
        }
        if (ok) ++passed;
      }
    }
  }
  Outcome o;
  o.pass = passed == instances && instances >= 100;
  o.detail = std::to_string(passed) + "/" + std::to_string(instances) + " instances (1D and 2D, alpha 0, 0.25, n/2)" +
             ", largest error " + fmt("%.2e", worst) + " (tolerance 1e-12)";
  if (!first_failure.empty()) o.detail += ", first failure " + first_failure;
  return o;
}

// 2: maximal_fast against the brute-force enumeration.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(77);
  std::size_t grids = 0, agree = 0;
  double worst = 0.0;
  auto run = [&](const std::vector<std::size_t>& shape) {
    const int n = static_cast<int>(shape.size());
    const GridFunction f = oracle::random_grid(shape, rng(), -1.0, 1.0);
    std::size_t extent = 0;
    for (auto s : shape) extent = std::max(extent, s);
    const Boundary boundary = rng() % 2 ? Boundary::interior : Boundary::clipped;
    const CubeFamily family = CubeFamily::up_to(extent, boundary);
    bool ok = true;
    for (double alpha : {0.0, 0.25, 0.5 * n}) {
      const GridFunction fast = maximal_fast(f, {alpha, family});
      const GridFunction slow = maximal(f, {alpha, family});
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = std::abs(fast[i] - slow[i]);
        worst = std::max(worst, d);
        if (!(d <= 1e-12)) ok = false;
      }
    }
    ++grids;
    if (ok) ++agree;
  };
  for (int i = 0; i < 200; ++i) run({4 + rng() % 253});
  for (int i = 0; i < 50; ++i) run({4 + rng() % 61, 4 + rng() % 61});
  return {agree == grids && grids == 250, std::to_string(agree) + "/" + std::to_string(grids) +
                                               " grids (200 1D up to 256 cells, 50 2D up to 64x64), "
                                               "largest difference " + fmt("%.2e", worst) + " (tolerance 1e-12)"};
}

// 3: pointwise inequalities over the full corpus.
Outcome inequality_suite() {
  const Tolerances tol;
  SuiteConfig config;
  config.refinement_symbols.clear();
  config.growth_symbols.clear();
  config.rank_symbols.clear();
  config.resolutions.clear();
  const auto reports = run_suite(config);
  std::size_t count = 0, passed = 0;
  double worst_holder = 0.0;
  for (const auto& r : reports) {
    if (r.check_id != "holder" && r.check_id != "eq31_domination" && r.check_id != "sharp_le_2m" &&
        r.check_id != "sharp_commutator_bound")
      continue;
    ++count;
    if (r.verdict == Verdict::pass || r.verdict == Verdict::vacuous) ++passed;
    if (r.check_id == "holder") worst_holder = std::max(worst_holder, r.quantity("ratio"));
  }
  // mixed-sign symbols against seeded inputs
  std::size_t extra = 0, extra_passed = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const GridFunction b = oracle::random_grid({48}, seed, -1.0, 1.0);
    const GridFunction f = oracle::random_grid({48}, seed + 1000, -1.0, 1.0);
    const CubeFamily family = CubeFamily::up_to(48);
    for (const auto& r : {check_eq31(b, f, 0.0, family, tol), check_sharp_commutator(b, f, family, tol),
                          check_sharp_le_2m(f, family, tol), check_holder(b, f, 1.5, tol)}) {
      ++extra;
      if (r.verdict == Verdict::pass) ++extra_passed;
    }
  }
  return {count > 0 && passed == count && extra_passed == extra,
          std::to_string(passed) + "/" + std::to_string(count) + " corpus checks and " + std::to_string(extra_passed) +
              "/" + std::to_string(extra) + " seeded mixed-sign checks, largest Hoelder ratio " +
              fmt("%.15f", worst_holder)};
}

// 4: bounded under refinement for the log symbol, growing under domain doubling for the ramp.
Outcome dichotomy() {
  const ExponentSet exps = ExponentSet::from_alpha(0.25, 1, 2.0, 2.0);
  const double limit = Tolerances{}.drift;
  std::string detail;
  bool ok = true;

  const std::vector<Level> fine = refinement_levels(ExperimentSpec{}, {64, 128, 256});
  auto series = [&](const std::string& name, const std::function<double(const Level&)>& value) {
    std::vector<double> v;
    for (const Level& level : fine) v.push_back(value(level));
    const double d = max_drift(v);
    ok = ok && d <= limit;
    detail += name + " " + fmt("%.3f", d) + ", ";
  };
  detail += "log drift: ";
  series("L2.2", [&](const Level& l) { return lemma22_constant(l, 2.0, 2.0).value; });
  series("L2.4", [&](const Level& l) { return lemma24_constant(l, exps).value; });
  series("L2.5", [&](const Level& l) { return lemma25_constant(l, exps.alpha).value; });
  for (int t = 1; t <= 3; ++t)
    series("T" + std::to_string(t), [&](const Level& l) { return theorem_operator_ratio(t, l, exps).value; });

  const std::vector<Level> wide = domain_levels({"linear", ExperimentSpec{}.inputs, 1, 1, Boundary::interior},
                                                {64, 128, 256});
  double min_factor = INFINITY;
  for (std::size_t i = 1; i < wide.size(); ++i)
    min_factor = std::min(min_factor, bmo_norm(wide[i].b, wide[i].family) / bmo_norm(wide[i - 1].b, wide[i - 1].family));
  ok = ok && min_factor >= Tolerances{}.growth;
  detail += "ramp T2_4 factor per doubling " + fmt("%.3f", min_factor);

  static const Characterization t3[] = {Characterization::T1_3, Characterization::T2_3, Characterization::T3_3};
  static const Characterization t4[] = {Characterization::T1_4, Characterization::T2_4, Characterization::T3_4};
  std::size_t monotone = 0;
  for (int t = 1; t <= 3; ++t) {
    std::vector<double> op, a, b;
    for (const Level& level : wide) {
      const SliceParams slice{level.t, exps.r, exps.s};
      op.push_back(theorem_operator_ratio(t, level, exps).value);
      a.push_back(characterization(level.b, t3[t - 1], exps, slice, level.family).value);
      b.push_back(characterization(level.b, t4[t - 1], exps, slice, level.family).value);
    }
    monotone += increasing(op) + increasing(a) + increasing(b);
  }
  ok = ok && monotone == 9;
  detail += ", " + std::to_string(monotone) + "/9 theorem quantities increasing";
  return {ok, detail};
}

// 5: T1_4 and T3_4 see b^-; T2_4 does not.
Outcome sign_detection() {
  bool ok = true;
  double worst = 0.0;
  const ExponentSet exps{2, 2, 2, 2, 0.0, 1};
  for (const std::vector<std::size_t>& shape : {std::vector<std::size_t>{32}, std::vector<std::size_t>{16, 16}}) {
    const CubeFamily family = CubeFamily::dyadic(16, Boundary::interior, 2);
    ExponentSet e = exps;
    e.n = static_cast<int>(shape.size());
    for (double c : {0.5, 1.0, 3.0}) {
      const GridFunction minus = GridFunction::constant(shape, 1.0, -c);
      const GridFunction plus = GridFunction::constant(shape, 1.0, c);
      const SliceParams slice{4.0, 2.0, 2.0};
      for (auto which : {Characterization::T1_4, Characterization::T3_4}) {
        const double m = characterization(minus, which, e, slice, family).value;
        const double p = characterization(plus, which, e, slice, family).value;
        worst = std::max({worst, std::abs(m - 2 * c), std::abs(p)});
      }
      const double m2 = characterization(minus, Characterization::T2_4, e, slice, family).value;
      worst = std::max(worst, std::abs(m2));
    }
  }
  ok = worst <= 1e-10;
  return {ok, "T1_4 = T3_4 = 2c for b = -c and 0 for b = +c, T2_4 = 0 for both (c = 0.5, 1, 3; 1D and 2D); "
              "largest error " + fmt("%.2e", worst) + " (tolerance 1e-10)"};
}

// 6: verify and sweep reruns are byte-identical.
Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "slicemax_acceptance";
  std::filesystem::create_directories(dir);
  auto run_twice = [&](std::vector<std::string> args, const std::filesystem::path& file) {
    args.insert(args.begin(), "slicemax");
    args.push_back("--out");
    args.push_back(file.string());
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::string text[2];
    for (auto& t : text) {
      std::ostringstream out, err;
      const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
      t = std::to_string(code) + "\n" + out.str() + read_text_file(file);
    }
    return text[0] == text[1];
  };
  const bool v = run_twice({"verify", "--seed", "9"}, dir / "report.json");
  const bool s = run_twice({"sweep", "--axis", "resolution", "--values", "64,128,256", "--seed", "9"}, dir / "sweep.csv");
  return {v && s, std::string("verify ") + (v ? "identical" : "differs") + ", sweep " + (s ? "identical" : "differs")};
}

// 7: the fast path on a 256x256 grid with all scales 1..64.
Outcome performance() {
  const GridFunction f = oracle::random_grid({256, 256}, 5, -1.0, 1.0);
  const OperatorParams params{0.0, CubeFamily::up_to(64)};
  auto t0 = std::chrono::steady_clock::now();
  const GridFunction fast = maximal_fast(f, params);
  const double t_fast = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const GridFunction slow = maximal(f, params);
  const double t_slow = seconds_since(t0);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(fast[i] - slow[i]));
  return {t_fast <= 1.0 && t_slow <= 120.0 && worst <= 1e-12,
          "fast " + fmt("%.3f", t_fast) + " s (limit 1 s), brute force " + fmt("%.2f", t_slow) +
              " s (limit 120 s), ratio " + fmt("%.0f", t_slow / t_fast) + "x, largest difference " +
              fmt("%.2e", worst)};
}

}  // namespace

int main() {
  bool ok = true;
  ok &= criterion(1, "exact identities", 60, exact_identities);
  ok &= criterion(2, "oracle equivalence", 120, oracle_equivalence);
  ok &= criterion(3, "pointwise inequalities", 0, inequality_suite);
  ok &= criterion(4, "boundedness dichotomy", 600, dichotomy);
  ok &= criterion(5, "sign detection", 0, sign_detection);
  ok &= criterion(6, "determinism", 0, determinism);
  ok &= criterion(7, "performance", 0, performance);
  std::printf("%s\n", ok ? "all criteria pass" : "some criteria fail");
  return ok ? 0 : 1;
}
