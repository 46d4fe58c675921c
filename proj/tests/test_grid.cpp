#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "oracle.hpp"
#include "slicemax/io.hpp"
#include "slicemax/prefix.hpp"

using namespace slicemax;

namespace {

double direct_sum(const GridFunction& f, const Box& b) {
  long double s = 0;
  for (auto r = b.row0; r < b.row0 + b.rows; ++r)
    for (auto c = b.col0; c < b.col0 + b.cols; ++c) s += std::abs(f.at(r, c));
  return static_cast<double>(s);
}

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("grid function invariants") {
  CHECK_THROWS_AS(GridFunction({3}, 1.0, {1, 2}), ValidationError);
  CHECK_THROWS_AS(GridFunction({2}, 0.0, {1, 2}), ValidationError);
  CHECK_THROWS_AS(GridFunction({2}, 1.0, {1, NAN}), ValidationError);
  CHECK_THROWS_AS(GridFunction({2}, 1.0, {1, INFINITY}), ValidationError);
  CHECK_THROWS_AS(GridFunction({2, 2, 2}, 1.0, std::vector<double>(8, 0.0)), ValidationError);
  const GridFunction g({2, 3}, 0.5, {1, 2, 3, 4, 5, 6});
  CHECK(g.rows() == 2);
  CHECK(g.cols() == 3);
  CHECK(g.at(1, 2) == 6);
  CHECK(g.cell_measure() == 0.25);
  const auto centre = g.cell_center(5);
  CHECK(centre[0] == 0.75);
  CHECK(centre[1] == 1.25);
}

TEST_CASE("prefix table window sums") {
  SUBCASE("1D total") {
    const GridFunction f({3}, 1.0, {1, 2, 3});
    CHECK(PrefixTable::build(f, 1.0, true).total() == 6.0);
  }
  SUBCASE("absolute values") {
    const GridFunction f({2}, 1.0, {-1, -2});
    CHECK(PrefixTable::build(f, 1.0, true).total() == 3.0);
    CHECK(PrefixTable::build(f, 1.0, false).total() == -3.0);
  }
  SUBCASE("signed tables only at power one") {
    const GridFunction f({2}, 1.0, {-1, -2});
    CHECK_THROWS_AS(PrefixTable::build(f, 2.0, false), ValidationError);
  }
  SUBCASE("overflowing powers are rejected") {
    const GridFunction f({2}, 1.0, {1e200, 1});
    CHECK_THROWS_AS(PrefixTable::build(f, 2.0, true), ValidationError);
  }
  SUBCASE("4x4 random, every window against the double-loop oracle") {
    const GridFunction f = oracle::random_grid({4, 4}, 11);
    const PrefixTable t = PrefixTable::build(f);
    for (std::ptrdiff_t r0 = 0; r0 < 4; ++r0)
      for (std::ptrdiff_t c0 = 0; c0 < 4; ++c0)
        for (std::ptrdiff_t nr = 1; r0 + nr <= 4; ++nr)
          for (std::ptrdiff_t nc = 1; c0 + nc <= 4; ++nc) {
            const Box b{r0, c0, nr, nc};
            CHECK(close_rel(t.window_sum(b), direct_sum(f, b), 1e-12));
          }
  }
  SUBCASE("every family cube on grids up to 64x64") {
    for (std::size_t n : {5u, 17u, 64u}) {
      const GridFunction f = oracle::random_grid({n, n}, 100 + n, -1.0, 1.0);
      const PrefixTable t = PrefixTable::build(f);
      double worst = 0;
      for_each_interior_cube(f, CubeFamily::up_to(n), [&](const Cube& q) {
        const Box b = q.box(2);
        const double d = direct_sum(f, b);
        worst = std::max(worst, std::abs(t.window_sum(b) - d) / d);
      });
      CHECK(worst <= 1e-12);
    }
  }
  SUBCASE("small windows of a 10^6-cell grid keep full relative accuracy") {
    const GridFunction f = oracle::random_grid({1000, 1000}, 5, 0.0, 1.0);
    const PrefixTable t = PrefixTable::build(f);
    for (const Box& b : {Box{999, 999, 1, 1}, Box{500, 3, 1, 1}, Box{998, 997, 2, 3}, Box{0, 0, 1000, 1000},
                         Box{123, 456, 321, 77}})
      CHECK(close_rel(t.window_sum(b), direct_sum(f, b), 1e-12));
    const GridFunction line = oracle::random_grid({1000000}, 6, 0.0, 1.0);
    const PrefixTable lt = PrefixTable::build(line);
    for (const Box& b : {Box{0, 999999, 1, 1}, Box{0, 654321, 1, 2}, Box{0, 0, 1, 1000000}})
      CHECK(close_rel(lt.window_sum(b), direct_sum(line, b), 1e-12));
  }
}

TEST_CASE("window averages") {
  SUBCASE("constant") {
    const GridFunction f = GridFunction::constant({6, 6}, 0.3, 2.5);
    const PrefixTable t = PrefixTable::build(f);
    CHECK(window_average(t, Cube::square(1, 2, 3)) == doctest::Approx(2.5).epsilon(1e-15));
  }
  SUBCASE("spike") {
    const GridFunction f({5}, 1.0, {0, 0, 4, 0, 0});
    CHECK(window_average(PrefixTable::build(f), Cube::interval(2, 2)) == 2.0);
  }
  SUBCASE("indicator inside a larger cube gives the measure ratio") {
    const GridFunction like = GridFunction::constant({8, 8}, 0.5, 0.0);
    const GridFunction chi = indicator(like, Cube::square(2, 3, 2));
    const PrefixTable t = PrefixTable::build(chi);
    CHECK(window_average(t, Cube::square(1, 2, 4)) == 4.0 / 16.0);
  }
  SUBCASE("all-ones averages are exactly one for every interior cube") {
    for (auto shape : {std::vector<std::size_t>{37}, std::vector<std::size_t>{13, 13}}) {
      const GridFunction ones = GridFunction::constant(shape, 0.1, 1.0);
      const PrefixTable t = PrefixTable::build(ones);
      bool all_one = true;
      for_each_interior_cube(ones, CubeFamily::up_to(13), [&](const Cube& q) {
        all_one = all_one && window_average(t, q) == 1.0;
      });
      CHECK(all_one);
    }
  }
  SUBCASE("clipped policy uses the measure of the intersection") {
    const GridFunction f({4}, 1.0, {2, 4, 6, 8});
    const PrefixTable t = PrefixTable::build(f);
    CHECK(window_average(t, Cube::interval(-1, 3), Boundary::clipped) == 3.0);
    CHECK_THROWS_AS(window_average(t, Cube::interval(-1, 3), Boundary::interior), ValidationError);
    CHECK_THROWS_AS(window_average(t, Cube::interval(-5, 3), Boundary::clipped), ValidationError);
  }
}

TEST_CASE("cube families") {
  CHECK_THROWS_AS(CubeFamily({}, Boundary::interior), ValidationError);
  CHECK_THROWS_AS(CubeFamily({2, 1}), ValidationError);
  CHECK_THROWS_AS(CubeFamily({1, 1}), ValidationError);
  CHECK_THROWS_AS(CubeFamily({0, 1}), ValidationError);
  CHECK(CubeFamily::dyadic(20).scales() == std::vector<std::size_t>{1, 2, 4, 8, 16});
  CHECK(CubeFamily::dyadic(16, Boundary::interior, 2).scales() == std::vector<std::size_t>{2, 4, 8, 16});
  CHECK(CubeFamily::up_to(5).capped(3).scales() == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("cubes containing a cell") {
  const GridFunction line = GridFunction::constant({5}, 1.0, 0.0);
  SUBCASE("scales {1,2} at the left edge") {
    const auto cubes = cubes_containing(line, {0, 0}, CubeFamily({1, 2}));
    REQUIRE(cubes.size() == 2);
    CHECK(cubes[0] == Cube::interval(0, 1));
    CHECK(cubes[1] == Cube::interval(0, 2));
  }
  SUBCASE("singleton family") {
    for (std::ptrdiff_t x = 0; x < 5; ++x) {
      const auto cubes = cubes_containing(line, {x, 0}, CubeFamily({1}));
      REQUIRE(cubes.size() == 1);
      CHECK(cubes[0] == Cube::interval(x, 1));
    }
  }
  SUBCASE("full-grid scale") {
    const GridFunction three = GridFunction::constant({3}, 1.0, 0.0);
    const auto cubes = cubes_containing(three, {1, 0}, CubeFamily({3}));
    REQUIRE(cubes.size() == 1);
    CHECK(cubes[0] == Cube::interval(0, 3));
  }
  SUBCASE("matches filtering all family cubes by membership") {
    for (auto shape : {std::vector<std::size_t>{32}, std::vector<std::size_t>{9, 11}}) {
      const GridFunction g = GridFunction::constant(shape, 1.0, 0.0);
      for (Boundary policy : {Boundary::interior, Boundary::clipped}) {
        const CubeFamily family({1, 2, 3, 5, 8}, policy);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const CellIndex x = g.cell_index(i);
          const auto [r, c] = g.row_col(x);
          std::set<std::tuple<std::size_t, std::ptrdiff_t, std::ptrdiff_t>> expected, got;
          for (std::size_t k : family.scales()) {
            const auto kr = static_cast<std::ptrdiff_t>(g.dim() == 2 ? k : 1);
            const auto kc = static_cast<std::ptrdiff_t>(k);
            for (std::ptrdiff_t ar = -kr; ar <= static_cast<std::ptrdiff_t>(g.rows()); ++ar)
              for (std::ptrdiff_t ac = -kc; ac <= static_cast<std::ptrdiff_t>(g.cols()); ++ac) {
                const Box box{ar, ac, kr, kc};
                const bool admissible = policy == Boundary::clipped ? !intersect(box, g.bounds()).empty()
                                                                    : g.bounds().contains(box);
                if (admissible && box.contains(r, c)) expected.insert({k, ar, ac});
              }
          }
          for (const Cube& q : cubes_containing(g, x, family)) {
            const Box box = q.box(g.dim());
            got.insert({q.side, box.row0, box.col0});
          }
          CHECK(got == expected);
        }
      }
    }
  }
  SUBCASE("interior families with the unit scale always offer the singleton") {
    const GridFunction g = GridFunction::constant({4, 6}, 1.0, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto cubes = cubes_containing(g, g.cell_index(i), CubeFamily::up_to(4));
      const CellIndex x = g.cell_index(i);
      CHECK(std::find(cubes.begin(), cubes.end(), Cube::square(x[0], x[1], 1)) != cubes.end());
    }
  }
}

TEST_CASE("grid text format") {
  SUBCASE("1D header") {
    const GridFunction f = parse_grid("3 1.0\n1 2 3\n");
    CHECK(f.dim() == 1);
    CHECK(f.shape() == std::vector<std::size_t>{3});
    CHECK(f.cell_size() == 1.0);
    CHECK(f[2] == 3.0);
  }
  SUBCASE("comma separated with comments") {
    const GridFunction f = parse_grid("# produced by hand\n2 3 0.25\n1,2,3\n4,5,6\n");
    CHECK(f.dim() == 2);
    CHECK(f.at(1, 0) == 4.0);
  }
  SUBCASE("round trip keeps every bit") {
    const GridFunction f = oracle::random_grid({8, 8}, 77, -1e3, 1e3, 0.1);
    const GridFunction g = parse_grid(format_grid(f));
    CHECK(g.same_geometry(f));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
    const auto path = std::filesystem::temp_directory_path() / "slicemax_roundtrip.txt";
    save_grid(f, path);
    const GridFunction h = load_grid(path);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(h[i] == f[i]);
    std::filesystem::remove(path);
  }
  SUBCASE("ragged row names its line") {
    try {
      parse_grid("2 3 1\n1 2 3\n4 5\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("malformed input") {
    CHECK_THROWS_AS(parse_grid(""), ParseError);
    CHECK_THROWS_AS(parse_grid("3 1 2 4\n"), ParseError);
    CHECK_THROWS_AS(parse_grid("0 1.0\n"), ParseError);
    CHECK_THROWS_AS(parse_grid("3 -1.0\n1 2 3\n"), ParseError);
    CHECK_THROWS_AS(parse_grid("3 1.0\n1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_grid("3 1.0\n1 2 3 4\n"), ParseError);
    CHECK_THROWS_AS(parse_grid("2 2 1.0\n1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_grid("2 2 1.0\n1 2\n3 4\n5 6\n"), ParseError);
    try {
      parse_grid("3 1.0\n1 x 3\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("missing files") { CHECK_THROWS_AS(load_grid("/nonexistent/grid.txt"), IoError); }
}
