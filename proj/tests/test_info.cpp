#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "relaymon/info.hpp"
#include "relaymon/rng.hpp"

using namespace relaymon;

namespace {

StageGame dilemma() {
  return StageGame({{"T", "B"}, {"L", "R"}}, {{3, 0, 4, 1}, {3, 4, 0, 1}});
}

double bisect_binary_entropy(double target) {
  // H_b is increasing on [0, 1/2]
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("residual entropy terms") {
  StageGame g = dilemma();

  // the pair {deviator, decoder} covers both players: nothing left to guess
  auto m05 = MonitoringStructure::binary_symmetric(0.5, 3);
  ProductDistribution p({{0.9, 0.1}, {0.9, 0.1}});
  CHECK(residual_entropy(g, m05, p, 0, 1, 0) == doctest::Approx(0.0));
  CHECK(residual_entropy(g, m05, p, 1, 0, 0) == doctest::Approx(0.0));

  // blind channel: the signal reveals nothing about the opponent
  auto blind = MonitoringStructure::binary_symmetric(1.0, 3);
  ProductDistribution uni({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(residual_entropy(g, blind, uni, 0, 0, 0) == doctest::Approx(1.0));
  CHECK(residual_entropy(g, blind, uni, 0, 0, 1) == doctest::Approx(1.0));

  // mid noise, skewed opponent
  CHECK(residual_entropy(g, m05, p, 0, 0, 0) ==
        doctest::Approx(0.398983).epsilon(1e-6));
}

TEST_CASE("rate evaluation on the dilemma family") {
  StageGame g = dilemma();

  auto blind = MonitoringStructure::binary_symmetric(1.0, 3);
  ProductDistribution uni({{0.5, 0.5}, {0.5, 0.5}});
  ConstraintReport rep = evaluate_constraint(g, blind, uni);
  CHECK(rep.required_rate_bits == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.capacity_bits == doctest::Approx(std::log2(3.0)));
  CHECK_FALSE(rep.satisfied);
  CHECK(rep.chromatic[0] == 2);
  CHECK(rep.chromatic[1] == 2);

  auto clean = MonitoringStructure::binary_symmetric(0.0, 3);
  ConstraintReport rep0 = evaluate_constraint(g, clean, uni);
  CHECK(rep0.required_rate_bits == doctest::Approx(0.0));
  CHECK(rep0.satisfied);
  CHECK(rep0.chromatic[0] == 1);

  auto m05 = MonitoringStructure::binary_symmetric(0.5, 3);
  ProductDistribution p({{0.9, 0.1}, {0.9, 0.1}});
  ConstraintReport rep5 = evaluate_constraint(g, m05, p);
  CHECK(rep5.required_rate_bits == doctest::Approx(1.399).epsilon(1e-3));
  CHECK(rep5.satisfied);
  CHECK(in_constraint_set(g, m05, p));

  // capacity 0: nothing but a zero-rate profile can pass
  auto tiny = MonitoringStructure::binary_symmetric(0.5, 1);
  CHECK_FALSE(in_constraint_set(g, tiny, p));
}

TEST_CASE("report recomputes from its stored terms") {
  StageGame g = dilemma();
  auto m = MonitoringStructure::binary_symmetric(0.45, 3);
  ProductDistribution p({{0.7, 0.3}, {0.85, 0.15}});
  ConstraintReport rep = evaluate_constraint(g, m, p);
  double rebuilt = -1.0;
  for (int i = 0; i < 2; ++i) {
    double inner = 0.0;
    for (const RateTerm& t : rep.terms)
      if (t.deviator == i) inner = std::max(inner, t.bits);
    rebuilt = std::max(rebuilt, inner + std::log2(double(rep.chromatic[i])));
  }
  CHECK(std::abs(rebuilt - rep.required_rate_bits) < 1e-12);
  CHECK(rep.satisfied == (rep.required_rate_bits < rep.capacity_bits));
}

TEST_CASE("strictness at the boundary") {
  ConstraintReport rep;
  rep.required_rate_bits = 1.0;
  rep.capacity_bits = 1.0;
  rep.satisfied = rep.required_rate_bits < rep.capacity_bits;
  CHECK_FALSE(rep.satisfied);
}

TEST_CASE("closed form matches the generic evaluation") {
  StageGame g = dilemma();
  ProductDistribution uni({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(closed_form_rate_binary(1.0, uni) == doctest::Approx(2.0));
  CHECK_THROWS_AS(closed_form_rate_binary(0.0, uni), ValidationError);

  Rng rng(314159);
  for (int round = 0; round < 100; ++round) {
    double delta = 0.05 + 0.95 * rng.uniform01();
    double p1 = 0.02 + 0.96 * rng.uniform01();
    double p2 = 0.02 + 0.96 * rng.uniform01();
    ProductDistribution pstar({{p1, 1 - p1}, {p2, 1 - p2}});
    auto m = MonitoringStructure::binary_symmetric(delta, 3);
    double generic = evaluate_constraint(g, m, pstar).required_rate_bits;
    double closed = closed_form_rate_binary(delta, pstar);
    CHECK(std::abs(generic - closed) < 1e-9);
  }
}

TEST_CASE("blind-channel boundary profile") {
  // at delta = 1 the rate is H_b(p) + 1; it grazes log2(3) at p ~ 0.1403
  double target = std::log2(3.0) - 1.0;
  double p_star = bisect_binary_entropy(target);
  CHECK(p_star == doctest::Approx(0.1403).epsilon(5e-3));

  ProductDistribution on_boundary({{p_star, 1 - p_star}, {p_star, 1 - p_star}});
  CHECK(closed_form_rate_binary(1.0, on_boundary) ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-9));
}

TEST_CASE("rate grows with channel noise") {
  StageGame g = dilemma();
  ProductDistribution p({{0.8, 0.2}, {0.65, 0.35}});
  double prev = -1.0;
  for (int step = 1; step <= 20; ++step) {
    double delta = 0.05 * step;
    auto m = MonitoringStructure::binary_symmetric(delta, 3);
    double rate = evaluate_constraint(g, m, p).required_rate_bits;
    CHECK(rate >= prev - 1e-12);
    prev = rate;
  }
}

TEST_CASE("terms stay inside their ceiling") {
  StageGame g = dilemma();
  Rng rng(2024);
  for (int round = 0; round < 40; ++round) {
    double delta = rng.uniform01();
    double q = 0.05 + 0.9 * rng.uniform01();
    ProductDistribution p({{q, 1 - q}, {1 - q, q}});
    auto m = MonitoringStructure::binary_symmetric(delta, 3);
    ConstraintReport rep = evaluate_constraint(g, m, p);
    for (const RateTerm& t : rep.terms) {
      CHECK(t.bits >= -1e-12);
      // for the 2-player game the residual target is at most one player
      CHECK(t.bits <= 1.0 + 1e-9);
      if (t.decoder != t.deviator) CHECK(t.bits == doctest::Approx(0.0));
    }
  }
}
