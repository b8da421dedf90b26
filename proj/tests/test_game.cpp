#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relaymon/game.hpp"
#include "relaymon/io.hpp"

using namespace relaymon;

namespace {

StageGame dilemma() {
  return StageGame({{"T", "B"}, {"L", "R"}}, {{3, 0, 4, 1}, {3, 4, 0, 1}});
}

}  // namespace

TEST_CASE("game validation") {
  StageGame g = dilemma();
  CHECK(g.player_count() == 2);
  CHECK(g.profile_count() == 4);
  CHECK(g.utility(0, std::vector<int>{0, 0}) == 3);
  CHECK(g.utility(1, std::vector<int>{1, 0}) == 0);

  CHECK_THROWS_AS(StageGame({{"A", "B"}}, {{1, 2}}), ValidationError);
  CHECK_THROWS_AS(StageGame({{"A", "A"}, {"L", "R"}},
                            {{1, 2, 3, 4}, {1, 2, 3, 4}}),
                  ValidationError);
  CHECK_THROWS_AS(StageGame({{"A", "B"}, {"L", "R"}}, {{1, 2, 3}, {1, 2, 3, 4}}),
                  ValidationError);
}

TEST_CASE("monitoring rows must be stochastic") {
  std::vector<std::vector<double>> rows(4, std::vector<double>(4, 0.25));
  rows[2][0] = 0.23;  // row sums to 0.98
  CHECK_THROWS_WITH_AS(
      MonitoringStructure({{"a", "b"}, {"c", "d"}}, rows, 3),
      doctest::Contains("not stochastic"), ValidationError);
}

TEST_CASE("game file parsing") {
  const char* text = R"({
    "actions": [["T","B"],["L","R"]],
    "utilities": [[3,0,4,1],[3,4,0,1]],
    "monitoring": {"type":"binary_symmetric","delta":0.4},
    "public_alphabet_size": 3
  })";
  GameConfig cfg = parse_game_json(text, "inline");
  CHECK(cfg.game.action_count(0) == 2);
  CHECK(cfg.monitoring.public_alphabet_size() == 3);
  CHECK(cfg.delta.has_value());

  CHECK_THROWS_AS(parse_game_json("{", "inline"), ValidationError);
  CHECK_THROWS_AS(parse_game_json("{}", "inline"), ValidationError);
}

TEST_CASE("parametric channel marginals") {
  MonitoringStructure m = MonitoringStructure::binary_symmetric(0.4, 3);
  StageGame g = dilemma();
  // opponent fixed at L: player 1 sees the matching signal w.p. 0.8
  size_t tl = g.profile_index(std::vector<int>{0, 0});
  CHECK(m.marginal(0, tl, 0) == doctest::Approx(0.8));
  CHECK(m.marginal(0, tl, 1) == doctest::Approx(0.2));

  // channel table rows sum to one per signal player
  auto chan = m.signal_channel(0);
  for (const auto& row : chan)
    CHECK(row[0] + row[1] == doctest::Approx(1.0).epsilon(1e-12));

  // delta = 1: both signals equally likely whatever was played
  MonitoringStructure blind = MonitoringStructure::binary_symmetric(1.0, 3);
  for (size_t a = 0; a < 4; ++a) {
    CHECK(blind.marginal(0, a, 0) == doctest::Approx(0.5));
    CHECK(blind.marginal(1, a, 1) == doctest::Approx(0.5));
  }
}

TEST_CASE("marginal of a factorized table equals its factor") {
  MonitoringStructure m = MonitoringStructure::binary_symmetric(0.3, 3);
  StageGame g = dilemma();
  // the joint was built as a product, so the per-player marginal must
  // recover the factor exactly
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      size_t ap = g.profile_index(std::vector<int>{a1, a2});
      double right1 = m.marginal(0, ap, a2);
      CHECK(right1 == doctest::Approx(1.0 - 0.15).epsilon(1e-12));
    }
}

TEST_CASE("expected utility") {
  StageGame g = dilemma();
  ProductDistribution pure({{1.0, 0.0}, {1.0, 0.0}});
  auto u = expected_utility(g, pure);
  CHECK(u[0] == doctest::Approx(3.0));
  CHECK(u[1] == doctest::Approx(3.0));

  ProductDistribution mixed({{0.9, 0.1}, {0.9, 0.1}});
  auto um = expected_utility(g, mixed);
  CHECK(um[0] == doctest::Approx(2.80).epsilon(1e-12));
  CHECK(um[1] == doctest::Approx(2.80).epsilon(1e-12));

  ProductDistribution degenerate({{0.0, 1.0}, {0.0, 1.0}});
  auto ud = expected_utility(g, degenerate);
  CHECK(ud[0] == doctest::Approx(1.0));
}

TEST_CASE("deviation generators") {
  DeviationSpec con = DeviationSpec::constant(0, 1);
  Rng rng(1);
  for (uint64_t t = 0; t < 5; ++t) CHECK(con.sample(t, rng) == 1);

  DeviationSpec per = DeviationSpec::periodic(1, {0, 1, 1});
  CHECK(per.sample(0, rng) == 0);
  CHECK(per.sample(1, rng) == 1);
  CHECK(per.sample(3, rng) == 0);

  CHECK_THROWS_AS(DeviationSpec::iid(0, {0.5, 0.6}), ValidationError);
  auto dist = DeviationSpec::iid(0, {0.25, 0.75}).stage_distribution(0, 2);
  CHECK(dist[1] == doctest::Approx(0.75));
}

TEST_CASE("pstar parsing") {
  ProductDistribution p = parse_pstar("0.9,0.1;0.25,0.75");
  CHECK(p.prob(0, 0) == doctest::Approx(0.9));
  CHECK(p.prob(1, 1) == doctest::Approx(0.75));
  CHECK_THROWS_AS(parse_pstar("0.9,0.2;1,0"), ValidationError);
  CHECK_THROWS_AS(parse_pstar("x,y"), ValidationError);
}

TEST_CASE("deviation parsing") {
  StageGame g = dilemma();
  DeviationSpec d = parse_deviation("constant:player=1,action=B", g);
  CHECK(d.kind() == DeviationSpec::Kind::Constant);
  CHECK(d.player() == 0);
  Rng rng(1);
  CHECK(d.sample(0, rng) == 1);

  DeviationSpec iid = parse_deviation("iid:player=2,probs=0.5,0.5", g);
  CHECK(iid.player() == 1);
  CHECK(parse_deviation("none", g).active() == false);
  CHECK_THROWS_AS(parse_deviation("constant:player=9,action=B", g),
                  ValidationError);
}
