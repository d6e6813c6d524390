#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thergm/rng.hpp"
#include "thergm/stats.hpp"

using namespace thergm;

namespace {

Adjacency random_graph(int n, double p, std::uint64_t seed) {
  Rng rng = make_rng(seed, "test-graph");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Adjacency y(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unif(rng) < p) y.set(i, j, true);
  return y;
}

// independent recount, no shared code with temporal_stats
StatVector brute_stats(const StatisticSpec& spec, const Adjacency& y_t,
                       const Adjacency& y_prev) {
  StatVector out;
  for (StatTerm term : spec.terms) {
    double v = 0.0;
    switch (term) {
      case StatTerm::Edges:
        for (int i = 0; i < y_t.n(); ++i)
          for (int j = i + 1; j < y_t.n(); ++j) v += y_t.has(i, j);
        break;
      case StatTerm::Triangles:
        for (int i = 0; i < y_t.n(); ++i)
          for (int j = i + 1; j < y_t.n(); ++j)
            for (int k = j + 1; k < y_t.n(); ++k)
              v += y_t.has(i, j) && y_t.has(j, k) && y_t.has(i, k);
        break;
      case StatTerm::Stability:
        for (int i = 0; i < y_t.n(); ++i)
          for (int j = i + 1; j < y_t.n(); ++j) v += y_t.has(i, j) == y_prev.has(i, j);
        break;
    }
    out.push_back(v);
  }
  return out;
}

const StatisticSpec kFull = StatisticSpec::parse("edges,triangles,stability");

}  // namespace

TEST_CASE("spec parsing") {
  CHECK(kFull.p() == 3);
  CHECK(kFull.to_string() == "edges,triangles,stability");
  CHECK_THROWS_AS(StatisticSpec::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(StatisticSpec::parse("edges,edges"), std::invalid_argument);
  CHECK_THROWS_AS(StatisticSpec::parse("edges,bogus"), std::invalid_argument);
}

TEST_CASE("temporal_stats examples") {
  Adjacency empty3(3);
  StatisticSpec es = StatisticSpec::parse("edges,stability");
  CHECK(temporal_stats(es, empty3, empty3) == StatVector{0.0, 3.0});

  Adjacency k3(3);
  k3.set(0, 1, true);
  k3.set(1, 2, true);
  k3.set(0, 2, true);
  CHECK(temporal_stats(kFull, k3, empty3) == StatVector{3.0, 1.0, 0.0});

  CHECK_THROWS_AS(temporal_stats(kFull, Adjacency(3), Adjacency(4)), std::invalid_argument);
}

TEST_CASE("temporal_stats matches brute-force recount") {
  for (int rep = 0; rep < 25; ++rep) {
    Adjacency y_t = random_graph(8, 0.4, rep);
    Adjacency y_prev = random_graph(8, 0.4, 50 + rep);
    CHECK(temporal_stats(kFull, y_t, y_prev) == brute_stats(kFull, y_t, y_prev));
  }
}

TEST_CASE("change_stats examples") {
  Adjacency path(3);
  path.set(0, 1, true);
  path.set(1, 2, true);
  StatisticSpec et = StatisticSpec::parse("edges,triangles");
  CHECK(change_stats(et, path, Adjacency(3), 0, 2) == StatVector{1.0, 1.0});

  Adjacency prev(3);
  prev.set(0, 2, true);
  StatisticSpec st = StatisticSpec::parse("stability");
  CHECK(change_stats(st, path, prev, 0, 2) == StatVector{1.0});
  CHECK(change_stats(st, path, prev, 0, 1) == StatVector{-1.0});

  CHECK_THROWS_AS(change_stats(kFull, path, prev, 1, 1), std::invalid_argument);
}

TEST_CASE("change_stats equals the two-evaluation difference") {
  for (int rep = 0; rep < 20; ++rep) {
    int n = 4 + rep % 5;  // n <= 8
    Adjacency y = random_graph(n, 0.5, 300 + rep);
    Adjacency prev = random_graph(n, 0.5, 400 + rep);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Adjacency on = y, off = y;
        on.set(i, j, true);
        off.set(i, j, false);
        StatVector s1 = temporal_stats(kFull, on, prev);
        StatVector s0 = temporal_stats(kFull, off, prev);
        StatVector c = change_stats(kFull, y, prev, i, j);
        for (int a = 0; a < kFull.p(); ++a) CHECK(c[a] == s1[a] - s0[a]);
      }
  }
}

TEST_CASE("edges change statistic is always 1") {
  for (int rep = 0; rep < 10; ++rep) {
    Adjacency y = random_graph(7, 0.5, 500 + rep);
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j)
        CHECK(change_stats(StatisticSpec::parse("edges"), y, y, i, j)[0] == 1.0);
  }
}

TEST_CASE("stability bounds") {
  for (int rep = 0; rep < 10; ++rep) {
    Adjacency y = random_graph(9, 0.5, 600 + rep);
    Adjacency prev = random_graph(9, 0.5, 700 + rep);
    double s = temporal_stats(StatisticSpec::parse("stability"), y, prev)[0];
    CHECK(s >= 0.0);
    CHECK(s <= 36.0);
  }
}

TEST_CASE("conditional_logit") {
  Adjacency y = random_graph(5, 0.5, 1);
  CHECK(conditional_logit(kFull, {0, 0, 0}, y, y, 0, 1) == 0.0);

  // theta = logit(0.1) on edges only -> every dyad probability 0.1
  double th = std::log(0.1 / 0.9);
  StatisticSpec e = StatisticSpec::parse("edges");
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      CHECK(sigmoid(conditional_logit(e, {th}, y, y, i, j)) == doctest::Approx(0.1));

  CHECK_THROWS_AS(conditional_logit(kFull, {1.0}, y, y, 0, 1), std::invalid_argument);
}

TEST_CASE("conditional_logit is linear in theta") {
  Adjacency y = random_graph(6, 0.5, 2);
  Adjacency prev = random_graph(6, 0.5, 3);
  std::vector<double> a = {0.3, -0.7, 1.1}, b = {-1.0, 0.4, 0.2}, sum(3);
  for (int i = 0; i < 3; ++i) sum[i] = a[i] + b[i];
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      CHECK(conditional_logit(kFull, sum, y, prev, i, j) ==
            doctest::Approx(conditional_logit(kFull, a, y, prev, i, j) +
                            conditional_logit(kFull, b, y, prev, i, j)));
}

TEST_CASE("conditional from the joint distribution, full enumeration") {
  // n=5: enumerate all 2^10 graphs under exponential-family weights and check that the
  // implied conditional matches sigmoid(theta' c) for several dyads
  const int n = 5;
  std::vector<std::pair<int, int>> dyads;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) dyads.emplace_back(i, j);
  const int D = static_cast<int>(dyads.size());
  StatisticSpec et = StatisticSpec::parse("edges,triangles");
  std::vector<double> theta = {-0.8, 0.4};
  Adjacency prev(n);

  auto weight = [&](long s) {
    Adjacency y(n);
    for (int d = 0; d < D; ++d)
      if ((s >> d) & 1) y.set(dyads[d].first, dyads[d].second, true);
    StatVector v = temporal_stats(et, y, prev);
    return std::exp(theta[0] * v[0] + theta[1] * v[1]);
  };

  // conditional P(Y_d = 1 | rest) for a handful of rest-configurations
  for (long rest : {0L, 37L, 511L, 747L}) {
    for (int d = 0; d < D; ++d) {
      long base = rest & ~(1L << d);
      double w1 = weight(base | (1L << d));
      double w0 = weight(base);
      double exact = w1 / (w0 + w1);
      Adjacency y(n);
      for (int dd = 0; dd < D; ++dd)
        if ((base >> dd) & 1) y.set(dyads[dd].first, dyads[dd].second, true);
      double model = sigmoid(
          conditional_logit(et, theta, y, prev, dyads[d].first, dyads[d].second));
      CHECK(model == doctest::Approx(exact).epsilon(1e-10));
    }
  }
}
