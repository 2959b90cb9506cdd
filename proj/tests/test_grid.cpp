#include <catch2/catch_amalgamated.hpp>

#include "ifs/grid.hpp"
#include "ifs/metric.hpp"
#include "ifs/rng.hpp"
#include "ifs/system.hpp"

using namespace ifs;

namespace {

GridSet random_set(const GridSpec& g, int cells, SplitMix64& rng) {
  GridSet s(g);
  for (int i = 0; i < cells; ++i) s.set(static_cast<CellId>(rng.next() % g.size()));
  return s;
}

// O(|A||B|) Hausdorff oracle on cell centers.
double hausdorff_brute(const GridSet& A, const GridSet& B) {
  const auto as = A.cells(), bs = B.cells();
  const GridSpec& g = A.grid();
  double m = 0.0;
  auto side = [&](const std::vector<CellId>& xs, const std::vector<CellId>& ys) {
    for (CellId a : xs) {
      double best = 1e300;
      for (CellId b : ys)
        best = std::min(best, dist(g.cell_center(a), g.cell_center(b)));
      m = std::max(m, best);
    }
  };
  side(as, bs);
  side(bs, as);
  return m;
}

}  // namespace

TEST_CASE("cell indexing round-trips") {
  GridSpec g(box2d(-0.2, -0.2, 1.2, 1.2), 64, 64);
  for (CellId c : {CellId(0), CellId(63), CellId(64), CellId(64 * 64 - 1)})
    REQUIRE(g.cell_of_point(g.cell_center(c)) == c);
  GridSpec g1(box1d(0.0, 1.0), 1000);
  for (CellId c : {CellId(0), CellId(499), CellId(999)})
    REQUIRE(g1.cell_of_point(g1.cell_center(c)) == c);
  REQUIRE(g1.cell_of_point({2.0, 0.0}) == kNoCell);
}

TEST_CASE("grid cap is enforced") {
  REQUIRE_THROWS_AS(GridSpec(box2d(0, 0, 1, 1), 5000, 5000),
                    std::invalid_argument);
}

TEST_CASE("set algebra is bitwise and guarded") {
  GridSpec g(box2d(0, 0, 1, 1), 32, 32);
  SplitMix64 rng(11);
  GridSet a = random_set(g, 40, rng), b = random_set(g, 50, rng);
  GridSet empty(g);

  REQUIRE((a | empty) == a);
  REQUIRE((a & a) == a);
  const auto u = set_algebra(a, b, SetOp::union_);
  const auto i = set_algebra(a, b, SetOp::intersect);
  REQUIRE(u.count() == a.count() + b.count() - i.count());

  GridSpec g2(box2d(0, 0, 1, 1), 16, 16);
  GridSet c(g2);
  REQUIRE_THROWS_AS(a | c, std::invalid_argument);
}

TEST_CASE("dilate matches the brute-force center test") {
  GridSpec g(box2d(0, 0, 1, 1), 3, 3);
  GridSet a(g);
  a.set(4);  // center cell
  const GridSet d = dilate(a, 1.1 * g.wx());
  REQUIRE(d.count() == 5);  // plus pattern
  REQUIRE(d.test(1));
  REQUIRE(d.test(3));
  REQUIRE(d.test(4));
  REQUIRE(d.test(5));
  REQUIRE(d.test(7));
  REQUIRE(dilate(a, 0.0) == a);

  GridSet full = full_set(g);
  REQUIRE(dilate(full, 0.3) == full);
}

TEST_CASE("dilate against random brute force") {
  GridSpec g(box2d(0, 0, 1, 1), 24, 24);
  SplitMix64 rng(3);
  for (int round = 0; round < 10; ++round) {
    GridSet a = random_set(g, 8, rng);
    const double r = 0.15 * rng.next_double();
    GridSet d = dilate(a, r);
    for (CellId c = 0; c < g.size(); ++c) {
      double best = 1e300;
      a.for_each([&](CellId s) {
        best = std::min(best, dist(g.cell_center(c), g.cell_center(s)));
      });
      REQUIRE(d.test(c) == (best <= r * (1 + 1e-9)));
    }
  }
}

TEST_CASE("dilate monotonicity") {
  GridSpec g(box2d(0, 0, 1, 1), 32, 32);
  SplitMix64 rng(5);
  for (int round = 0; round < 5; ++round) {
    GridSet a = random_set(g, 10, rng);
    GridSet b = a | random_set(g, 10, rng);
    const double r1 = 0.05 + 0.1 * rng.next_double();
    const double r2 = r1 + 0.05;
    REQUIRE(dilate(a, r1).subset_of(dilate(b, r1)));
    REQUIRE(dilate(a, r1).subset_of(dilate(a, r2)));
    // discrete sub-additivity holds in the superset direction
    REQUIRE(dilate(dilate(a, r1), r2 - r1).subset_of(dilate(a, r2)));
  }
}

TEST_CASE("hausdorff_distance equals the all-pairs oracle") {
  GridSpec g(box2d(0, 0, 1, 1), 32, 32);
  SplitMix64 rng(17);
  for (int round = 0; round < 30; ++round) {
    GridSet a = random_set(g, 10, rng);
    GridSet b = random_set(g, 12, rng);
    const double got = hausdorff_distance(a, b);
    const double want = hausdorff_brute(a, b);
    REQUIRE(got == Catch::Approx(want).margin(1e-12));
  }
}

TEST_CASE("hausdorff metric axioms") {
  GridSpec g(box2d(0, 0, 1, 1), 24, 24);
  SplitMix64 rng(23);
  GridSet a = random_set(g, 9, rng);
  REQUIRE(hausdorff_distance(a, a) == 0.0);

  GridSet p(g), q(g);
  p.set(10);
  q.set(500);
  REQUIRE(hausdorff_distance(p, q) ==
          Catch::Approx(dist(g.cell_center(10), g.cell_center(500))));

  for (int round = 0; round < 100; ++round) {
    GridSet x = random_set(g, 6, rng);
    GridSet y = random_set(g, 7, rng);
    GridSet z = random_set(g, 8, rng);
    const double xy = hausdorff_distance(x, y);
    const double yx = hausdorff_distance(y, x);
    REQUIRE(xy == yx);
    REQUIRE(xy <= hausdorff_distance(x, z) + hausdorff_distance(z, y) + 1e-12);
  }

  GridSet empty(g);
  REQUIRE_THROWS_AS(hausdorff_distance(a, empty), std::invalid_argument);
}

TEST_CASE("triangle mask keeps near-vertex cells in") {
  GridSpec g(box2d(0, 0, 1.0, kSqrt3 / 2.0), 64, 64, MaskKind::triangle,
             unit_triangle());
  REQUIRE(g.masked_in(g.cell_of_point({0.01, 0.005})));
  REQUIRE(g.masked_in(g.cell_of_point({0.99, 0.005})));
  REQUIRE(g.masked_in(g.cell_of_point({0.5, kSqrt3 / 2.0 - 0.03})));
  REQUIRE_FALSE(g.masked_in(g.cell_of_point({0.02, 0.8})));
}
