#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "relaymon/prob.hpp"
#include "relaymon/rng.hpp"
#include "relaymon/typicality.hpp"

using namespace relaymon;

namespace {

// independent direct-formula oracle for conditional entropy on a 2x2 table
double cond_entropy_2x2(const std::vector<double>& cells) {
  double h = 0.0;
  for (int y = 0; y < 2; ++y) {
    double py = cells[y] + cells[2 + y];
    for (int x = 0; x < 2; ++x) {
      double pxy = cells[x * 2 + y];
      if (pxy > 0.0) h += pxy * std::log2(py / pxy);
    }
  }
  return h;
}

JointDistribution random_joint(Rng& rng, std::vector<int> sizes) {
  size_t total = 1;
  for (int s : sizes) total *= s;
  std::vector<double> cells(total);
  double sum = 0.0;
  for (double& c : cells) {
    c = rng.uniform01() + 1e-6;
    sum += c;
  }
  for (double& c : cells) c /= sum;
  return JointDistribution(std::move(sizes), std::move(cells));
}

}  // namespace

TEST_CASE("entropy basics") {
  CHECK(entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(entropy(std::vector<double>{1.0, 0.0}) == doctest::Approx(0.0));
  CHECK(entropy(std::vector<double>{0.9, 0.1}) ==
        doctest::Approx(0.468995593589281).epsilon(1e-12));
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
}

TEST_CASE("conditional entropy on hand-built joints") {
  // independent pair: H(X|Y) = H(X)
  JointDistribution ind({2, 2}, {0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4});
  std::vector<int> x{0}, y{1};
  CHECK(conditional_entropy(ind, x, y) ==
        doctest::Approx(binary_entropy(0.3)).epsilon(1e-12));

  // Y a bijection of X: H(X|Y) = 0
  JointDistribution det({2, 2}, {0.5, 0.0, 0.0, 0.5});
  CHECK(conditional_entropy(det, x, y) == doctest::Approx(0.0));

  // noisy channel, P(X)=(0.9,0.1), flip 0.25
  std::vector<double> cells{0.9 * 0.75, 0.9 * 0.25, 0.1 * 0.25, 0.1 * 0.75};
  JointDistribution noisy({2, 2}, cells);
  double expect = cond_entropy_2x2(cells);
  CHECK(conditional_entropy(noisy, x, y) ==
        doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(0.3990).epsilon(2e-4));

  CHECK_THROWS(conditional_entropy(noisy, x, x));
  std::vector<int> none{};
  CHECK(conditional_entropy(noisy, none, y) == 0.0);
}

TEST_CASE("mutual information") {
  std::vector<int> x{0}, y{1};
  JointDistribution ind({2, 3},
                        {0.4 * 0.2, 0.4 * 0.5, 0.4 * 0.3,
                         0.6 * 0.2, 0.6 * 0.5, 0.6 * 0.3});
  CHECK(mutual_information(ind, x, y) == doctest::Approx(0.0).epsilon(1e-12));

  JointDistribution same({2, 2}, {0.3, 0.0, 0.0, 0.7});
  CHECK(mutual_information(same, x, y) ==
        doctest::Approx(binary_entropy(0.3)).epsilon(1e-12));

  // uniform binary input through the flip-0.25 channel
  JointDistribution chan({2, 2}, {0.5 * 0.75, 0.5 * 0.25, 0.5 * 0.25,
                                  0.5 * 0.75});
  CHECK(mutual_information(chan, x, y) ==
        doctest::Approx(1.0 - binary_entropy(0.25)).epsilon(1e-12));
  CHECK(1.0 - binary_entropy(0.25) == doctest::Approx(0.1887).epsilon(2e-4));
}

TEST_CASE("chain rule and bounds on random joints") {
  Rng rng(20240601);
  for (int round = 0; round < 50; ++round) {
    JointDistribution j = random_joint(rng, {3, 4});
    std::vector<int> x{0}, y{1}, both{0, 1};
    double hxy = entropy(j, both);
    double hy = entropy(j, y);
    double hx_y = conditional_entropy(j, x, y);
    CHECK(hxy == doctest::Approx(hy + hx_y).epsilon(1e-10));
    CHECK(hx_y >= -1e-12);
    CHECK(hx_y <= entropy(j, x) + 1e-10);
    CHECK(entropy(j, x) <= std::log2(3.0) + 1e-12);
    CHECK(mutual_information(j, x, y) >= 0.0);
  }
}

TEST_CASE("empirical types") {
  std::vector<int> seq{0, 0, 1, 1};
  auto type = empirical_type(seq, 2);
  CHECK(type[0] == doctest::Approx(0.5));
  CHECK(type[1] == doctest::Approx(0.5));

  std::vector<int> constant{2, 2, 2};
  auto degen = empirical_type(constant, 3);
  CHECK(degen[2] == doctest::Approx(1.0));

  std::vector<int> six_of_ten{0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
  auto counted = empirical_type(six_of_ten, 2);
  CHECK(counted[0] == doctest::Approx(0.6));
  CHECK(counted[1] == doctest::Approx(0.4));

  CHECK_THROWS(empirical_type(std::vector<int>{}, 2));
}

TEST_CASE("typicality rule") {
  std::vector<double> half{0.5, 0.5};
  std::vector<int> exact{0, 1, 0, 1};
  CHECK(is_typical(exact, half, 0.0));

  // zero-probability symbols exclude the sequence outright
  std::vector<double> no_c{0.5, 0.5, 0.0};
  std::vector<int> with_c{0, 1, 2, 0};
  CHECK_FALSE(is_typical(with_c, no_c, 1.0));

  std::vector<int> six_of_ten{0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
  CHECK_FALSE(is_typical(six_of_ten, half, 0.05));  // L1 distance is 0.2
  CHECK(is_typical(six_of_ten, half, 0.2));
}

TEST_CASE("joint typicality") {
  // exact joint type at eps = 0
  std::vector<double> joint{0.25, 0.25, 0.25, 0.25};
  std::vector<int> xs{0, 0, 1, 1}, ys{0, 1, 0, 1};
  CHECK(is_jointly_typical(xs, ys, joint, 2, 2, 0.0));

  // marginally exact but pair counts off
  std::vector<int> xs2{0, 0, 1, 1}, ys2{0, 0, 1, 1};
  CHECK(is_typical(xs2, std::vector<double>{0.5, 0.5}, 0.0));
  CHECK(is_typical(ys2, std::vector<double>{0.5, 0.5}, 0.0));
  CHECK_FALSE(is_jointly_typical(xs2, ys2, joint, 2, 2, 0.1));

  CHECK_THROWS(is_jointly_typical(xs, std::vector<int>{0}, joint, 2, 2, 0.1));
}

TEST_CASE("jointly typical implies marginally typical") {
  Rng rng(7);
  std::vector<double> joint{0.4, 0.1, 0.2, 0.3};
  std::vector<double> mx{0.5, 0.5}, my{0.6, 0.4};
  for (int round = 0; round < 200; ++round) {
    int n = 20;
    std::vector<int> xs(n), ys(n);
    for (int t = 0; t < n; ++t) {
      int cell = rng.categorical(joint);
      xs[t] = cell / 2;
      ys[t] = cell % 2;
    }
    double eps = 0.3;
    if (is_jointly_typical(xs, ys, joint, 2, 2, eps)) {
      // marginal L1 never exceeds the pair L1; the slack absorbs summation
      // rounding at the exact boundary
      CHECK(is_typical(xs, mx, eps + 1e-9));
      CHECK(is_typical(ys, my, eps + 1e-9));
    }
  }
}

TEST_CASE("typical-set size by exhaustive enumeration, n=10") {
  // uniform binary source, eps = 0.2: count all length-10 sequences in the
  // L1 ball and compare against 2^{n(1 +- c eps)} with c = 1
  const int n = 10;
  const double eps = 0.2;
  std::vector<double> q{0.5, 0.5};
  long count = 0;
  for (int word = 0; word < (1 << n); ++word) {
    std::vector<int> seq(n);
    for (int t = 0; t < n; ++t) seq[t] = (word >> t) & 1;
    if (is_typical(seq, q, eps)) ++count;
  }
  CHECK(count == 672);  // N(ones) in {4,5,6}
  double c = std::log2(2.0);
  CHECK(double(count) >= std::exp2(n * (1.0 - c * eps)));
  CHECK(double(count) <= std::exp2(n * (1.0 + c * eps)));
}

TEST_CASE("typical fraction grows with length and saturates") {
  Rng rng(99);
  const double eps = 0.1;
  std::vector<double> q{0.7, 0.2, 0.1};
  const int trials = 10000;
  double prev = -1.0;
  for (int n : {50, 200, 800}) {
    int hits = 0;
    for (int trial = 0; trial < trials; ++trial) {
      std::vector<int> seq(n);
      for (int t = 0; t < n; ++t) seq[t] = rng.categorical(q);
      if (is_typical(seq, q, eps)) ++hits;
    }
    double frac = double(hits) / trials;
    CHECK(frac >= prev);
    prev = frac;
    if (n == 800) CHECK(frac >= 0.99);
  }
}

TEST_CASE("type and typicality agree") {
  Rng rng(5);
  std::vector<double> q{0.6, 0.3, 0.1};
  for (int round = 0; round < 300; ++round) {
    int n = 5 + int(rng.uniform01() * 40);
    std::vector<int> seq(n);
    for (int t = 0; t < n; ++t) seq[t] = rng.categorical(q);
    auto type = empirical_type(seq, 3);
    double l1 = 0.0;
    for (int a = 0; a < 3; ++a) l1 += std::abs(type[a] - q[a]);
    double eps = rng.uniform01() * 0.5;
    CHECK(is_typical(seq, q, eps) == (l1 <= eps));
  }
}
