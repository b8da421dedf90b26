#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "relaymon/geometry.hpp"
#include "relaymon/minmax.hpp"
#include "relaymon/rng.hpp"

using namespace relaymon;

namespace {

StageGame dilemma() {
  return StageGame({{"T", "B"}, {"L", "R"}}, {{3, 0, 4, 1}, {3, 4, 0, 1}});
}

// closed-form 2x2 zero-sum value: saddle point or mixed equalizer
double value_2x2(double a, double b, double c, double d) {
  // row player maximizes over {(a,b),(c,d)}
  double lo = std::max(std::min(a, b), std::min(c, d));
  double hi = std::min(std::max(a, c), std::max(b, d));
  if (lo >= hi - 1e-12) return lo;  // pure saddle
  return (a * d - b * c) / (a + d - b - c);
}

bool near(const Point& p, double x, double y) {
  return std::abs(p.x - x) < 1e-9 && std::abs(p.y - y) < 1e-9;
}

}  // namespace

TEST_CASE("zero-sum solver against the 2x2 oracle") {
  Rng rng(99);
  for (int round = 0; round < 200; ++round) {
    double a = rng.uniform01() * 10 - 5, b = rng.uniform01() * 10 - 5;
    double c = rng.uniform01() * 10 - 5, d = rng.uniform01() * 10 - 5;
    ZeroSumSolution sol = solve_zero_sum({{a, b}, {c, d}});
    CHECK(sol.value == doctest::Approx(value_2x2(a, b, c, d)).epsilon(1e-9));
  }
}

TEST_CASE("dilemma punishment levels") {
  MinmaxLevels lv = minmax_levels(dilemma());
  CHECK(lv.exact);
  CHECK(lv.values[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lv.values[1] == doctest::Approx(1.0).epsilon(1e-9));
  // punishment: the opponent plays its second action (R against 1, B against 2)
  CHECK(punishment_profile(lv, 0)[0][1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(punishment_profile(lv, 1)[0][1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("zero game and matching pennies") {
  StageGame zero({{"a", "b"}, {"c", "d"}}, {{0, 0, 0, 0}, {0, 0, 0, 0}});
  MinmaxLevels lz = minmax_levels(zero);
  CHECK(lz.values[0] == doctest::Approx(0.0));
  CHECK(lz.values[1] == doctest::Approx(0.0));

  StageGame pennies({{"H", "T"}, {"H", "T"}},
                    {{1, -1, -1, 1}, {-1, 1, 1, -1}});
  MinmaxLevels lp = minmax_levels(pennies);
  CHECK(lp.values[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(lp.values[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(punishment_profile(lp, 0)[0][0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("levels shift with constant payoff offsets") {
  StageGame g = dilemma();
  StageGame shifted({{"T", "B"}, {"L", "R"}},
                    {{3 + 7, 0 + 7, 4 + 7, 1 + 7}, {3, 4, 0, 1}});
  MinmaxLevels a = minmax_levels(g);
  MinmaxLevels b = minmax_levels(shifted);
  CHECK(b.values[0] == doctest::Approx(a.values[0] + 7).epsilon(1e-9));
  CHECK(b.values[1] == doctest::Approx(a.values[1]).epsilon(1e-9));
}

TEST_CASE("punishment argmin survives positive rescaling") {
  StageGame g = dilemma();
  StageGame scaled({{"T", "B"}, {"L", "R"}},
                   {{6, 0, 8, 2}, {3, 4, 0, 1}});  // player 1 payoffs doubled
  auto pa = punishment_profile(minmax_levels(g), 0)[0];
  auto pb = punishment_profile(minmax_levels(scaled), 0)[0];
  // the argmin set is unchanged; both put everything on R
  CHECK(pa[1] == doctest::Approx(pb[1]).epsilon(1e-9));
}

TEST_CASE("three-player levels are flagged approximate") {
  // three players, two actions, player 1 paid the product of matches
  std::vector<std::vector<std::string>> acts{{"a","b"},{"a","b"},{"a","b"}};
  std::vector<double> u1(8, 0.0);
  for (int p = 0; p < 8; ++p) {
    int x = (p >> 2) & 1, y = (p >> 1) & 1, z = p & 1;
    u1[p] = (x == y) + (x == z);
  }
  StageGame g3(acts, {u1, u1, u1});
  MinmaxLevels lv = minmax_levels(g3);
  CHECK_FALSE(lv.exact);
  CHECK(lv.values[0] >= 0.0);
  CHECK(lv.punishments[0].size() == 2);
}

TEST_CASE("individual rationality") {
  std::vector<double> levels{1.0, 1.0};
  CHECK(is_individually_rational(std::vector<double>{3, 3}, levels));
  CHECK(is_individually_rational(std::vector<double>{1, 1}, levels));
  CHECK_FALSE(is_individually_rational(std::vector<double>{0, 4}, levels));
  CHECK_THROWS(is_individually_rational(std::vector<double>{1}, levels));
}

TEST_CASE("hull of the dilemma payoffs clipped at the levels") {
  std::vector<Point> pure{{3, 3}, {0, 4}, {4, 0}, {1, 1}};
  auto poly = convex_hull_clip(pure, 1.0, 1.0);
  REQUIRE(poly.size() == 4);
  CHECK(near(poly[0], 1.0, 1.0));
  CHECK(near(poly[1], 11.0 / 3.0, 1.0));
  CHECK(near(poly[2], 3.0, 3.0));
  CHECK(near(poly[3], 1.0, 11.0 / 3.0));
  CHECK(is_convex_ccw(poly));
  CHECK(polygon_area(poly) == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("hull corner cases") {
  std::vector<Point> one{{2, 2}};
  auto kept = convex_hull_clip(one, 1.0, 1.0);
  REQUIRE(kept.size() == 1);
  CHECK(near(kept[0], 2.0, 2.0));

  std::vector<Point> low{{0, 0}, {0.5, 0.2}, {0.2, 0.9}};
  CHECK(convex_hull_clip(low, 1.0, 1.0).empty());

  CHECK(convex_hull(std::vector<Point>{}).empty());
}

TEST_CASE("hull properties on random clouds") {
  Rng rng(5150);
  for (int round = 0; round < 50; ++round) {
    int n = 3 + int(rng.uniform01() * 40);
    std::vector<Point> cloud(n);
    for (Point& p : cloud)
      p = {rng.uniform01() * 4, rng.uniform01() * 4};
    auto hull = convex_hull(cloud);
    CHECK(is_convex_ccw(hull));
    for (const Point& p : cloud) CHECK(contains_point(hull, p, 1e-7));

    auto clipped = clip_lower_bounds(hull, 1.0, 1.0);
    CHECK(is_convex_ccw(clipped));
    for (const Point& p : clipped) {
      CHECK(p.x >= 1.0 - 1e-9);
      CHECK(p.y >= 1.0 - 1e-9);
    }
    CHECK(polygon_area(clipped) <= polygon_area(hull) + 1e-9);
  }
}
