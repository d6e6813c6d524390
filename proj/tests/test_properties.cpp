// Longer randomized property checks that cut across modules.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "thergm/dlsm.hpp"
#include "thergm/eval.hpp"
#include "thergm/generator.hpp"
#include "thergm/tergm.hpp"

using namespace thergm;

namespace {

Adjacency random_graph(int n, double p, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Adjacency y(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unif(rng) < p) y.set(i, j, true);
  return y;
}

}  // namespace

TEST_CASE("simulate is a pure function of its config") {
  ThergmConfig cfg;
  cfg.K = 2;
  cfg.n_per_cluster = {15, 15};
  cfg.T = 4;
  cfg.spec = StatisticSpec::parse("edges,triangles,stability");
  cfg.theta.assign(2, {-1.2, 0.05, 2.0});
  cfg.B = TransitionMatrix::diagonal(2, 0.9);
  cfg.seed = 314;
  SimulationOutput a = simulate(cfg);
  SimulationOutput b = simulate(cfg);
  for (std::size_t t = 0; t < a.net.slices.size(); ++t) CHECK(a.net.slices[t] == b.net.slices[t]);
  CHECK(a.truth.labels == b.truth.labels);
}

TEST_CASE("identity memberships and zero p_between keep clusters disconnected") {
  ThergmConfig cfg;
  cfg.K = 3;
  cfg.n_per_cluster = {10, 10, 10};
  cfg.T = 5;
  cfg.spec = StatisticSpec::parse("edges,stability");
  auto [te, ts] = stationary_edge_stability(0.2, 0.2);
  cfg.theta.assign(3, {te, ts});
  cfg.B = TransitionMatrix::diagonal(3, 1.0);
  cfg.p_between = 0.0;
  cfg.seed = 5;
  SimulationOutput out = simulate(cfg);
  for (int t = 0; t <= cfg.T; ++t)
    for (int i = 0; i < out.net.n(); ++i)
      for (int j = i + 1; j < out.net.n(); ++j)
        if (out.truth.at(t, i) != out.truth.at(t, j)) CHECK_FALSE(out.net.slices[t].has(i, j));
}

TEST_CASE("mple equals exact_mle under dyadic independence across random series") {
  StatisticSpec spec = StatisticSpec::parse("edges,stability");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = make_rng(seed, "prop-dyadic");
    TransitionSeries series;
    Adjacency prev = random_graph(6, 0.4, rng);
    auto [te, ts] = stationary_edge_stability(0.35, 0.3);
    for (int t = 0; t < 4; ++t) {
      Adjacency curr = gibbs_transition(prev, prev, spec, {te, ts}, 40, rng);
      series.pairs.emplace_back(prev, curr);
      prev = curr;
    }
    FitResult pl = mple(spec, series);
    FitResult ex = exact_mle(spec, series);
    if (!pl.converged || !ex.converged || !pl.note.empty()) continue;
    for (int a = 0; a < spec.p(); ++a)
      CHECK(std::abs(pl.theta_hat[a] - ex.theta_hat[a]) < 1e-4);
  }
}

TEST_CASE("exact_mle satisfies the moment equation at the optimum") {
  StatisticSpec spec = StatisticSpec::parse("edges,triangles");
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng = make_rng(seed, "prop-moment");
    TransitionSeries series;
    Adjacency prev = random_graph(5, 0.4, rng);
    for (int t = 0; t < 3; ++t) {
      Adjacency curr = gibbs_transition(prev, prev, spec, {-0.5, 0.2}, 40, rng);
      series.pairs.emplace_back(prev, curr);
      prev = curr;
    }
    FitResult fit = exact_mle(spec, series);
    if (!fit.converged || !fit.note.empty()) continue;
    double mx = 0.0;
    for (double v : fit.theta_hat) mx = std::max(mx, std::abs(v));
    if (mx > 10.0) continue;  // near-separated instance

    // expected statistics under theta_hat by enumeration, per transition
    std::vector<std::pair<int, int>> dyads;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) dyads.emplace_back(i, j);
    const int D = static_cast<int>(dyads.size());
    std::vector<double> gap(spec.p(), 0.0);
    for (const auto& [yp, yc] : series.pairs) {
      std::vector<double> logw(std::size_t(1) << D);
      double top = -1e300;
      std::vector<StatVector> stats(std::size_t(1) << D);
      for (long s = 0; s < (1L << D); ++s) {
        Adjacency g(5);
        for (int d = 0; d < D; ++d)
          if ((s >> d) & 1) g.set(dyads[d].first, dyads[d].second, true);
        stats[s] = temporal_stats(spec, g, yp);
        double lp = 0.0;
        for (int a = 0; a < spec.p(); ++a) lp += fit.theta_hat[a] * stats[s][a];
        logw[s] = lp;
        top = std::max(top, lp);
      }
      double z = 0.0;
      for (double& w : logw) {
        w = std::exp(w - top);
        z += w;
      }
      StatVector obs = temporal_stats(spec, yc, yp);
      for (int a = 0; a < spec.p(); ++a) {
        double mean = 0.0;
        for (long s = 0; s < (1L << D); ++s) mean += logw[s] / z * stats[s][a];
        gap[a] += obs[a] - mean;
      }
    }
    for (int a = 0; a < spec.p(); ++a) CHECK(std::abs(gap[a]) < 1e-6);
  }
}

TEST_CASE("gibbs_within long-run frequencies match the exact distribution") {
  // small version of the stationarity check: n=3, edges-only
  StatisticSpec spec = StatisticSpec::parse("edges");
  std::vector<double> theta = {0.4};
  Rng rng = make_rng(8, "prop-gibbs");
  Adjacency prev = random_graph(3, 0.5, rng);

  ClusterView view;
  view.cluster = 1;
  view.remain = {0, 1, 2};
  view.prev_adj = prev;

  std::map<long, int> counts;
  const int draws = 20000;
  for (int s = 0; s < draws; ++s) {
    Adjacency y = gibbs_within(view, spec, theta, 6, rng);
    long code = y.has(0, 1) | (y.has(0, 2) << 1) | (y.has(1, 2) << 2);
    counts[code]++;
    view.prev_adj = y;  // continue the chain
  }

  // exact distribution: edges-only means independent Bernoulli dyads
  double p = 1.0 / (1.0 + std::exp(-theta[0]));
  double tv = 0.0;
  for (long code = 0; code < 8; ++code) {
    int edges = __builtin_popcountl(code);
    double exact = std::pow(p, edges) * std::pow(1.0 - p, 3 - edges);
    double freq = static_cast<double>(counts[code]) / draws;
    tv += 0.5 * std::abs(freq - exact);
  }
  CHECK(tv < 0.02);
}

TEST_CASE("project_scale is idempotent and exact over random states") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = make_rng(seed, "prop-scale");
    std::normal_distribution<double> gauss(0.0, 2.5);
    LatentState st;
    st.Z.assign(4, Eigen::MatrixXd(12, 2));
    for (auto& slice : st.Z)
      for (int i = 0; i < 12; ++i)
        for (int d = 0; d < 2; ++d) slice(i, d) = gauss(rng);
    st.mixture.assign(3, MixtureComponent{Eigen::VectorXd::Zero(2), 1.0, 1.0 / 3});
    st.beta1 = 1.7;
    project_scale(st);
    for (const auto& slice : st.Z)
      CHECK(std::abs(std::sqrt(slice.squaredNorm() / slice.rows()) - 1.0) < 1e-10);
    LatentState again = st;
    project_scale(again);
    CHECK(std::abs(again.beta1 - st.beta1) < 1e-9);
  }
}

TEST_CASE("transition rows stay stochastic and misclustering stays permutation-blind") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Rng rng = make_rng(seed, "prop-eval");
    std::uniform_int_distribution<int> lab(1, 5);
    MembershipSeries m, truth;
    m.K = truth.K = 5;
    m.labels.assign(4, std::vector<int>(25));
    truth.labels.assign(4, std::vector<int>(25));
    for (int t = 0; t < 4; ++t)
      for (int i = 0; i < 25; ++i) {
        m.labels[t][i] = lab(rng);
        truth.labels[t][i] = lab(rng);
      }

    TransitionEstimate e = estimate_transition(m);
    for (int h = 1; h <= 5; ++h) {
      double row = 0.0;
      for (int k = 1; k <= 5; ++k) row += e.B.at(h, k);
      CHECK(row == doctest::Approx(1.0));
    }

    std::vector<int> perm = {2, 5, 1, 4, 3};
    MembershipSeries relabeled = m;
    for (auto& slice : relabeled.labels) slice = apply_permutation(slice, perm);
    CHECK(misclustering(relabeled, truth).average ==
          doctest::Approx(misclustering(m, truth).average));
  }
}

TEST_CASE("simulation trace matches recomputed global statistics") {
  ThergmConfig cfg;
  cfg.K = 2;
  cfg.n_per_cluster = {12, 12};
  cfg.T = 4;
  cfg.spec = StatisticSpec::parse("edges,triangles,stability");
  cfg.theta.assign(2, {-1.0, 0.05, 1.5});
  cfg.B = TransitionMatrix::diagonal(2, 0.9);
  cfg.seed = 77;
  SimulationOutput out = simulate(cfg);
  REQUIRE(static_cast<int>(out.trace.size()) == cfg.T);
  for (int t = 1; t <= cfg.T; ++t) {
    StatVector v = temporal_stats(cfg.spec, out.net.slices[t], out.net.slices[t - 1]);
    for (int a = 0; a < cfg.spec.p(); ++a) CHECK(out.trace[t - 1][a] == doctest::Approx(v[a]));
  }
}
