#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "slicemax/operators.hpp"

using namespace slicemax;

namespace {

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

bool all_le(const GridFunction& a, const GridFunction& b, double slack = 1e-12) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i] + slack * std::max(1.0, std::abs(b[i]))) return false;
  return true;
}

/// f extended by zero with `pad` cells on every side (rows too in 2D).
GridFunction zero_pad(const GridFunction& f, std::size_t pad) {
  const bool two_d = f.dim() == 2;
  const std::size_t rows = two_d ? f.rows() + 2 * pad : 1;
  const std::size_t cols = f.cols() + 2 * pad;
  std::vector<double> out(rows * cols, 0.0);
  const std::size_t r_off = two_d ? pad : 0;
  for (std::size_t r = 0; r < f.rows(); ++r)
    for (std::size_t c = 0; c < f.cols(); ++c)
      out[(r + r_off) * cols + c + pad] = f.at(static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(c));
  return GridFunction(two_d ? std::vector<std::size_t>{rows, cols} : std::vector<std::size_t>{cols}, f.cell_size(),
                      std::move(out));
}

}  // namespace

TEST_CASE("maximal function examples") {
  SUBCASE("constant") {
    const GridFunction f = GridFunction::constant({7, 5}, 0.5, 3.0);
    const GridFunction m = maximal(f, {0.0, CubeFamily::up_to(5)});
    for (double v : m.samples()) CHECK(v == doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("spike") {
    const GridFunction f({5}, 1.0, {0, 0, 4, 0, 0});
    for (auto op : {maximal, maximal_fast}) {
      const GridFunction m = op(f, {0.0, CubeFamily::up_to(5)});
      CHECK(m[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
      CHECK(m[2] == 4.0);
    }
  }
  SUBCASE("ramp from the command-line example") {
    const GridFunction f({3}, 1.0, {1, 2, 3});
    const GridFunction m = maximal_fast(f, {0.0, CubeFamily::up_to(3)});
    CHECK(m[0] == 2.0);
    CHECK(m[1] == 2.5);
    CHECK(m[2] == 3.0);
  }
  SUBCASE("all ones is exactly one") {
    const GridFunction f = GridFunction::constant({40, 40}, 0.01, 1.0);
    const GridFunction m = maximal_fast(f, {0.0, CubeFamily::up_to(40)});
    for (double v : m.samples()) CHECK(v == 1.0);
  }
  SUBCASE("indicator of a cube gives |Q|^(alpha/n) on the cube") {
    for (double alpha : {0.0, 0.25, 0.5}) {
      const GridFunction like = GridFunction::constant({20}, 0.25, 0.0);
      const Cube q = Cube::interval(7, 4);
      const GridFunction m = maximal(indicator(like, q), {alpha, CubeFamily::up_to(20)});
      for (std::ptrdiff_t y = 7; y < 11; ++y)
        CHECK(m[static_cast<std::size_t>(y)] == doctest::Approx(std::pow(1.0, alpha)).epsilon(1e-14));
    }
    for (double alpha : {0.0, 0.5, 1.0}) {
      const GridFunction like = GridFunction::constant({12, 12}, 1.0, 0.0);
      const Cube q = Cube::square(3, 5, 4);
      const GridFunction m = maximal_fast(indicator(like, q), {alpha, CubeFamily::up_to(12)});
      const double expected = std::pow(16.0, alpha / 2.0);
      for (std::ptrdiff_t r = 3; r < 7; ++r)
        for (std::ptrdiff_t c = 5; c < 9; ++c) CHECK(m.at(r, c) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  SUBCASE("alpha is checked against the grid") {
    const GridFunction f = GridFunction::constant({4}, 1.0, 1.0);
    CHECK_THROWS_AS(maximal(f, {1.0, CubeFamily::up_to(2)}), ValidationError);
    CHECK_THROWS_AS(maximal_fast(f, {-0.1, CubeFamily::up_to(2)}), ValidationError);
    const GridFunction g = GridFunction::constant({4, 4}, 1.0, 1.0);
    CHECK_NOTHROW(maximal_fast(g, {1.5, CubeFamily::up_to(2)}));
  }
  SUBCASE("empty candidate set is an error") {
    const GridFunction f = GridFunction::constant({3}, 1.0, 1.0);
    CHECK_THROWS_AS(maximal(f, {0.0, CubeFamily({5})}), ValidationError);
    CHECK_THROWS_AS(maximal_fast(f, {0.0, CubeFamily({5})}), ValidationError);
    CHECK_NOTHROW(maximal_fast(f, {0.0, CubeFamily({5}, Boundary::clipped)}));
  }
}

TEST_CASE("fast and reference maximal agree with the direct oracle") {
  std::uint64_t seed = 1;
  for (std::size_t n : {1u, 2u, 7u, 31u, 64u}) {
    for (double alpha : {0.0, 0.25, 0.5}) {
      for (Boundary policy : {Boundary::interior, Boundary::clipped}) {
        const GridFunction f = oracle::random_grid({n}, seed++, -2.0, 2.0, 0.3);
        const auto scales = oracle::range_scales(std::min<std::size_t>(n, 9));
        const OperatorParams params{alpha, CubeFamily(scales, policy)};
        const GridFunction expected = oracle::maximal(f, alpha, scales, policy);
        CHECK(max_abs_diff(maximal(f, params), expected) <= 1e-12);
        CHECK(max_abs_diff(maximal_fast(f, params), expected) <= 1e-12);
      }
    }
  }
  for (std::size_t n : {1u, 3u, 12u}) {
    for (double alpha : {0.0, 0.5, 1.0}) {
      for (Boundary policy : {Boundary::interior, Boundary::clipped}) {
        const GridFunction f = oracle::random_grid({n, n + 1}, seed++, -1.0, 1.0, 0.5);
        const std::vector<std::size_t> scales{1, 2, 5};
        const OperatorParams params{alpha, CubeFamily(scales, policy)};
        if (policy == Boundary::interior && n < 5) continue;
        const GridFunction expected = oracle::maximal(f, alpha, scales, policy);
        CHECK(max_abs_diff(maximal(f, params), expected) <= 1e-12);
        CHECK(max_abs_diff(maximal_fast(f, params), expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("maximal function properties") {
  const GridFunction f = oracle::random_grid({24, 24}, 3, -1.0, 1.0);
  const GridFunction g = oracle::random_grid({24, 24}, 4, -1.0, 1.0);
  const OperatorParams params{0.5, CubeFamily::up_to(8)};
  const GridFunction mf = maximal_fast(f, params);
  const GridFunction mg = maximal_fast(g, params);

  SUBCASE("dominates |f|") { CHECK(all_le(absolute(f), maximal_fast(f, {0.0, CubeFamily::up_to(8)}))); }
  SUBCASE("sublinear") { CHECK(all_le(maximal_fast(sum(f, g), params), sum(mf, mg))); }
  SUBCASE("homogeneous") {
    const GridFunction scaled_m = maximal_fast(scaled(f, -2.5), params);
    CHECK(max_abs_diff(scaled_m, scaled(mf, 2.5)) <= 1e-12);
  }
  SUBCASE("monotone") {
    std::vector<double> bigger(f.size());
    const auto bump = oracle::uniform(f.size(), 9);
    for (std::size_t i = 0; i < f.size(); ++i) bigger[i] = std::abs(f[i]) + bump[i];
    CHECK(all_le(mf, maximal_fast(f.with_samples(bigger), params)));
  }
  SUBCASE("sharp is at most twice the maximal function") {
    const GridFunction sharp = sharp_maximal(f, params.family);
    CHECK(all_le(sharp, scaled(maximal_fast(f, {0.0, params.family}), 2.0)));
  }
}

TEST_CASE("restricted maximal function") {
  const GridFunction f = oracle::random_grid({16, 16}, 21, -1.0, 1.0, 0.25);
  const Cube qstar = Cube::square(3, 4, 8);
  SUBCASE("ones") {
    const GridFunction ones = GridFunction::constant({16}, 1.0, 1.0);
    const GridFunction m = maximal_restricted(ones, Cube::interval(2, 6), {0.0, CubeFamily::up_to(10)});
    CHECK(m.size() == 6);
    for (double v : m.samples()) CHECK(v == 1.0);
  }
  SUBCASE("indicator of Q* itself") {
    for (double alpha : {0.0, 0.5, 1.0}) {
      const GridFunction chi = indicator(f, qstar);
      const GridFunction m = maximal_restricted(chi, qstar, {alpha, CubeFamily::up_to(16)});
      const double expected = std::pow(qstar.measure(2, 0.25), alpha / 2.0);
      for (double v : m.samples()) CHECK(v == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  SUBCASE("fast path agrees and never exceeds the cutoff maximal function") {
    for (double alpha : {0.0, 0.5, 1.0}) {
      for (Boundary policy : {Boundary::interior, Boundary::clipped}) {
        const OperatorParams params{alpha, CubeFamily({1, 2, 3, 5, 8, 13}, policy)};
        const GridFunction ref = maximal_restricted(f, qstar, params);
        CHECK(max_abs_diff(maximal_restricted_fast(f, qstar, params), ref) <= 1e-12);
        const GridFunction cutoff = maximal_fast(masked(f, qstar), params).restrict_to(qstar);
        CHECK(all_le(ref, cutoff));
      }
    }
  }
  SUBCASE("the origin moves to the corner of Q*") {
    const GridFunction m = maximal_restricted(f, qstar, {0.0, CubeFamily::up_to(4)});
    CHECK(m.origin()[0] == doctest::Approx(f.origin()[0] + 3 * 0.25));
    CHECK(m.origin()[1] == doctest::Approx(f.origin()[1] + 4 * 0.25));
  }
  SUBCASE("Q* must lie inside the grid") {
    CHECK_THROWS_AS(maximal_restricted(f, Cube::square(10, 10, 8), {}), ValidationError);
    CHECK_THROWS_AS(maximal_restricted_fast(f, Cube::square(-1, 0, 2), {}), ValidationError);
  }
}

TEST_CASE("maximal commutator") {
  SUBCASE("constant symbol") {
    const GridFunction b = GridFunction::constant({9}, 1.0, 4.0);
    const GridFunction f = oracle::random_grid({9}, 2);
    const GridFunction out = maximal_commutator(b, f, {0.0, CubeFamily::up_to(9)});
    for (double v : out.samples()) CHECK(v == 0.0);
  }
  SUBCASE("two cells") {
    const GridFunction b({2}, 1.0, {0, 1});
    const GridFunction f({2}, 1.0, {1, 1});
    const GridFunction m = maximal_commutator(b, f, {0.0, CubeFamily({1, 2})});
    CHECK(m[0] == 0.5);
    CHECK(m[1] == 0.5);
  }
  SUBCASE("matches the direct oracle and is non-negative") {
    std::uint64_t seed = 50;
    for (auto shape : {std::vector<std::size_t>{33}, std::vector<std::size_t>{9, 10}}) {
      for (double alpha : {0.0, 0.5}) {
        for (Boundary policy : {Boundary::interior, Boundary::clipped}) {
          const GridFunction b = oracle::random_grid(shape, seed++, -3.0, 3.0, 0.5);
          const GridFunction f = oracle::random_grid(shape, seed++, -1.0, 1.0, 0.5);
          const std::vector<std::size_t> scales{1, 2, 4, 7};
          const GridFunction m = maximal_commutator(b, f, {alpha, CubeFamily(scales, policy)});
          CHECK(max_abs_diff(m, oracle::maximal_commutator(b, f, alpha, scales, policy)) <= 1e-12);
          for (double v : m.samples()) CHECK(v >= 0.0);
        }
      }
    }
  }
  SUBCASE("grids must match") {
    CHECK_THROWS_AS(maximal_commutator(GridFunction::constant({3}, 1.0, 0.0), GridFunction::constant({4}, 1.0, 0.0), {}),
                    ValidationError);
    CHECK_THROWS_AS(commutator_maximal(GridFunction::constant({3}, 1.0, 0.0), GridFunction::constant({3}, 2.0, 0.0), {}),
                    ValidationError);
  }
}

TEST_CASE("nonlinear commutator with the maximal function") {
  const GridFunction f = oracle::random_grid({30}, 8, -1.0, 1.0);
  SUBCASE("unit symbol") {
    const GridFunction one = GridFunction::constant({30}, 1.0, 1.0);
    const GridFunction out = commutator_maximal(one, f, {0.25, CubeFamily::up_to(6)});
    for (double v : out.samples()) CHECK(v == 0.0);
  }
  SUBCASE("definition against the oracle") {
    const GridFunction b = oracle::random_grid({30}, 9, -1.0, 2.0);
    const auto scales = oracle::range_scales(6);
    const GridFunction expected =
        difference(product(b, oracle::maximal(f, 0.25, scales)), oracle::maximal(product(b, f), 0.25, scales));
    CHECK(max_abs_diff(commutator_maximal(b, f, {0.25, CubeFamily(scales)}), expected) <= 1e-12);
  }
  SUBCASE("non-negative symbol on an indicator") {
    // With b >= 0 and every family cube allowed, the cube Q itself attains both maxima when b is constant on Q.
    std::vector<double> bv(16, 0.0);
    for (std::size_t i = 4; i < 8; ++i) bv[i] = 2.0;
    const GridFunction b({16}, 1.0, bv);
    const Cube q = Cube::interval(4, 4);
    const GridFunction chi = indicator(b, q);
    const GridFunction out = commutator_maximal(b, chi, {0.5, CubeFamily::up_to(16)});
    for (std::size_t y = 4; y < 8; ++y) CHECK(out[y] == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("cross-check of the proof identity on a clean instance") {
    const GridFunction b = oracle::random_grid({16}, 10, 0.0, 1.0);
    const Cube q = Cube::interval(4, 8);
    const double alpha = 0.5;
    const OperatorParams params{alpha, CubeFamily::up_to(16)};
    const GridFunction lhs_m = maximal_restricted(b, q, params);
    const GridFunction comm = commutator_maximal(b, indicator(b, q), params);
    const double w = std::pow(q.measure(1, 1.0), -alpha);
    for (std::size_t j = 0; j < 8; ++j)
      CHECK(b[4 + j] - w * lhs_m[j] == doctest::Approx(w * comm[4 + j]).epsilon(1e-12));
  }
}

TEST_CASE("sharp maximal function") {
  SUBCASE("constant") {
    const GridFunction f = GridFunction::constant({10, 10}, 1.0, -7.0);
    const GridFunction out = sharp_maximal(f, CubeFamily::up_to(10));
    for (double v : out.samples()) CHECK(v == 0.0);
  }
  SUBCASE("two cells") {
    const GridFunction f({2}, 1.0, {0, 1});
    const GridFunction s = sharp_maximal(f, CubeFamily({1, 2}));
    CHECK(s[0] == 0.5);
    CHECK(s[1] == 0.5);
  }
  SUBCASE("indicator with a half-overlapping window reaches one half") {
    const GridFunction like = GridFunction::constant({24}, 1.0, 0.0);
    const Cube q = Cube::interval(8, 4);
    const GridFunction s = sharp_maximal(indicator(like, q), CubeFamily::up_to(24));
    for (std::size_t y = 8; y < 12; ++y) CHECK(s[y] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("matches the direct oracle") {
    std::uint64_t seed = 70;
    for (auto shape : {std::vector<std::size_t>{40}, std::vector<std::size_t>{11, 9}}) {
      for (Boundary policy : {Boundary::interior, Boundary::clipped}) {
        const GridFunction f = oracle::random_grid(shape, seed++, -1.0, 1.0);
        const std::vector<std::size_t> scales{1, 2, 3, 6, 9};
        const GridFunction expected = oracle::sharp(f, scales, policy);
        CHECK(max_abs_diff(sharp_maximal(f, CubeFamily(scales, policy)), expected) <= 1e-12);
      }
    }
  }
  SUBCASE("zero extension beyond the grid") {
    std::uint64_t seed = 90;
    for (auto shape : {std::vector<std::size_t>{20}, std::vector<std::size_t>{10, 10}}) {
      const GridFunction f = oracle::random_grid(shape, seed++, -1.0, 1.0);
      const Cube region = shape.size() == 1 ? Cube::interval(0, 6) : Cube::square(6, 0, 4);
      const std::vector<std::size_t> scales{1, 2, 4, 8};
      const GridFunction got = sharp_maximal_extended(f, region, CubeFamily(scales));
      const std::size_t pad = 8;
      const GridFunction padded = zero_pad(masked(f, region), pad);
      const GridFunction full = oracle::sharp(padded, scales, Boundary::interior);
      const Box box = region.box(f.dim());
      std::size_t j = 0;
      for (std::ptrdiff_t r = box.row0; r < box.row0 + box.rows; ++r)
        for (std::ptrdiff_t c = box.col0; c < box.col0 + box.cols; ++c, ++j) {
          const std::ptrdiff_t pr = f.dim() == 2 ? r + static_cast<std::ptrdiff_t>(pad) : 0;
          CHECK(got[j] == doctest::Approx(full.at(pr, c + static_cast<std::ptrdiff_t>(pad))).epsilon(1e-12));
        }
    }
  }
  SUBCASE("the L2 proxy dominates the L1 oscillation") {
    const GridFunction f = oracle::random_grid({20, 20}, 99, -1.0, 1.0);
    const CubeFamily family = CubeFamily::up_to(6);
    CHECK(all_le(sharp_maximal(f, family), sharp_maximal_l2_proxy(f, family)));
  }
}

TEST_CASE("commutator with the sharp maximal function") {
  SUBCASE("unit symbol") {
    const GridFunction f = oracle::random_grid({25}, 13, -1.0, 1.0);
    const GridFunction one = GridFunction::constant({25}, 1.0, 1.0);
    const GridFunction out = commutator_sharp(one, f, CubeFamily::up_to(5));
    for (double v : out.samples()) CHECK(v == 0.0);
  }
  SUBCASE("bounded by twice the maximal commutator of |b|") {
    std::uint64_t seed = 200;
    for (int trial = 0; trial < 10; ++trial) {
      const std::vector<std::size_t> shape =
          trial % 2 ? std::vector<std::size_t>{12, 12} : std::vector<std::size_t>{60};
      const GridFunction b = oracle::random_grid(shape, seed++, -2.0, 2.0);
      const GridFunction f = oracle::random_grid(shape, seed++, -1.0, 1.0);
      const CubeFamily family = CubeFamily::up_to(6);
      const GridFunction abs_b = absolute(b);
      const GridFunction lhs = absolute(commutator_sharp(abs_b, f, family));
      const GridFunction rhs = scaled(maximal_commutator(abs_b, f, {0.0, family}), 2.0);
      CHECK(all_le(lhs, rhs, 1e-10));
    }
  }
}

TEST_CASE("sign decomposition") {
  SUBCASE("example") {
    const SignedDecomposition d = decompose_sign(GridFunction({2}, 1.0, {-2, 3}));
    CHECK(d.b_minus[0] == 2.0);
    CHECK(d.b_minus[1] == 0.0);
    CHECK(d.b_plus[0] == 0.0);
    CHECK(d.b_plus[1] == 3.0);
  }
  SUBCASE("non-negative symbol") {
    const SignedDecomposition d = decompose_sign(oracle::random_grid({50}, 4));
    for (double v : d.b_minus.samples()) CHECK(v == 0.0);
  }
  SUBCASE("exact reconstruction") {
    const GridFunction b = oracle::random_grid({30, 30}, 17, -5.0, 5.0);
    const SignedDecomposition d = decompose_sign(b);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(d.b_plus[i] - d.b_minus[i] == b[i]);
      CHECK(d.b_plus[i] + d.b_minus[i] == std::abs(b[i]));
      CHECK(d.b_plus[i] >= 0.0);
      CHECK(d.b_minus[i] >= 0.0);
    }
  }
}
