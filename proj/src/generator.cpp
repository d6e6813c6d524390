#include "thergm/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thergm {

void TransitionMatrix::validate() const {
  for (const auto& row : B) {
    if (static_cast<int>(row.size()) != K())
      throw std::invalid_argument("TransitionMatrix: not square");
    double sum = 0.0;
    for (double b : row) {
      if (b < 0.0 || b > 1.0) throw std::invalid_argument("TransitionMatrix: entry outside [0,1]");
      sum += b;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("TransitionMatrix: row does not sum to 1");
  }
}

TransitionMatrix TransitionMatrix::diagonal(int K, double stay) {
  TransitionMatrix tm;
  double off = K > 1 ? (1.0 - stay) / (K - 1) : 0.0;
  tm.B.assign(K, std::vector<double>(K, off));
  for (int k = 0; k < K; ++k) tm.B[k][k] = K > 1 ? stay : 1.0;
  return tm;
}

void ThergmConfig::validate() const {
  if (K < 1) throw std::invalid_argument("ThergmConfig: K < 1");
  if (static_cast<int>(n_per_cluster.size()) != K)
    throw std::invalid_argument("ThergmConfig: n_per_cluster size != K");
  if (T < 1) throw std::invalid_argument("ThergmConfig: T < 1");
  spec.validate();
  if (static_cast<int>(theta.size()) != K)
    throw std::invalid_argument("ThergmConfig: need one theta vector per cluster");
  for (const auto& th : theta)
    if (static_cast<int>(th.size()) != spec.p())
      throw std::invalid_argument("ThergmConfig: theta length != spec p");
  if (B.K() != K) throw std::invalid_argument("ThergmConfig: transition matrix size != K");
  B.validate();
  if (p_between < 0.0 || p_between > 1.0)
    throw std::invalid_argument("ThergmConfig: p_between outside [0,1]");
  if (m_attach < 1) throw std::invalid_argument("ThergmConfig: m_attach < 1");
  if (gibbs_sweeps < 1) throw std::invalid_argument("ThergmConfig: gibbs_sweeps < 1");
}

std::pair<Adjacency, std::vector<int>> init_state(const ThergmConfig& cfg, Rng& rng) {
  const int n = cfg.n_total();
  std::vector<int> labels(n);
  int pos = 0;
  for (int k = 0; k < cfg.K; ++k)
    for (int c = 0; c < cfg.n_per_cluster[k]; ++c) labels[pos++] = k + 1;

  Adjacency y(n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double p = labels[i] == labels[j] ? cfg.p_within_init : cfg.p_between;
      if (unif(rng) < p) y.set(i, j, true);
    }
  return {std::move(y), std::move(labels)};
}

std::vector<int> step_membership(const std::vector<int>& m_prev, const TransitionMatrix& B,
                                 Rng& rng) {
  std::vector<int> m_next(m_prev.size());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (size_t i = 0; i < m_prev.size(); ++i) {
    const auto& row = B.B[m_prev[i] - 1];
    double u = unif(rng);
    double acc = 0.0;
    int pick = B.K();
    for (int k = 0; k < B.K(); ++k) {
      acc += row[k];
      if (u < acc) {
        pick = k + 1;
        break;
      }
    }
    m_next[i] = std::min(pick, B.K());
  }
  return m_next;
}

std::vector<std::pair<int, int>> attach_joiners(const ClusterView& view, int m_attach,
                                                Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  if (view.joiners.empty() || view.remain.empty()) return edges;

  const int r = static_cast<int>(view.remain.size());
  std::vector<double> base(r);
  for (int a = 0; a < r; ++a) base[a] = view.prev_adj.degree(a) + 1.0;

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int joiner : view.joiners) {
    if (r <= m_attach) {
      for (int a = 0; a < r; ++a) edges.emplace_back(joiner, view.remain[a]);
      continue;
    }
    std::vector<double> w = base;  // weighted draw without replacement
    for (int e = 0; e < m_attach; ++e) {
      double total = std::accumulate(w.begin(), w.end(), 0.0);
      double u = unif(rng) * total;
      int pick = r - 1;
      double acc = 0.0;
      for (int a = 0; a < r; ++a) {
        acc += w[a];
        if (u < acc && w[a] > 0.0) {
          pick = a;
          break;
        }
      }
      edges.emplace_back(joiner, view.remain[pick]);
      w[pick] = 0.0;
    }
  }
  return edges;
}

Adjacency gibbs_transition(const Adjacency& y_prev, const Adjacency& start,
                           const StatisticSpec& spec, const std::vector<double>& theta,
                           int sweeps, Rng& rng) {
  Adjacency y = start;
  const int n = y.n();
  std::vector<std::pair<int, int>> dyads;
  dyads.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) dyads.emplace_back(i, j);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < sweeps; ++s) {
    std::shuffle(dyads.begin(), dyads.end(), rng);
    for (const auto& [i, j] : dyads) {
      double lp = conditional_logit(spec, theta, y, y_prev, i, j);
      y.set(i, j, unif(rng) < sigmoid(lp));
    }
  }
  return y;
}

Adjacency gibbs_within(const ClusterView& view, const StatisticSpec& spec,
                       const std::vector<double>& theta_k, int sweeps, Rng& rng) {
  if (sweeps < 1) throw std::invalid_argument("gibbs_within: sweeps < 1");
  return gibbs_transition(view.prev_adj, view.prev_adj, spec, theta_k, sweeps, rng);
}

std::vector<std::pair<int, int>> sample_between(const std::vector<int>& m_t, double p_between,
                                                Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  const int n = static_cast<int>(m_t.size());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (m_t[i] != m_t[j] && unif(rng) < p_between) edges.emplace_back(i, j);
  return edges;
}

SimulationOutput simulate(const ThergmConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_total();

  SimulationOutput out;
  out.config = cfg;
  out.truth.K = cfg.K;

  Rng rng_init = make_rng(cfg.seed, "init");
  auto [y0, m0] = init_state(cfg, rng_init);
  out.net.slices.push_back(std::move(y0));
  out.truth.labels.push_back(std::move(m0));
  out.net.node_ids.resize(n);
  std::iota(out.net.node_ids.begin(), out.net.node_ids.end(), 0);

  for (int t = 1; t <= cfg.T; ++t) {
    Rng rng_m = make_rng(cfg.seed, "membership", t);
    out.truth.labels.push_back(step_membership(out.truth.labels.back(), cfg.B, rng_m));

    // views over the slices built so far (slice t not yet appended)
    DynamicNetwork partial;
    partial.slices = {out.net.slices[t - 1], Adjacency(n)};
    MembershipSeries mpair;
    mpair.K = cfg.K;
    mpair.labels = {out.truth.labels[t - 1], out.truth.labels[t]};
    auto views = cluster_views(partial, mpair, 1);

    Adjacency slice(n);
    for (const auto& view : views) {
      const int k = view.cluster;
      if (!view.remain.empty()) {
        Rng rng_g = make_rng(cfg.seed, "gibbs", t, k);
        Adjacency within =
            gibbs_within(view, cfg.spec, cfg.theta[k - 1], cfg.gibbs_sweeps, rng_g);
        for (size_t a = 0; a < view.remain.size(); ++a)
          for (size_t b = a + 1; b < view.remain.size(); ++b)
            if (within.has(static_cast<int>(a), static_cast<int>(b)))
              slice.set(view.remain[a], view.remain[b], true);
      }
      Rng rng_a = make_rng(cfg.seed, "attach", t, k);
      for (const auto& [u, v] : attach_joiners(view, cfg.m_attach, rng_a))
        slice.set(u, v, true);
    }

    Rng rng_b = make_rng(cfg.seed, "between", t);
    for (const auto& [u, v] : sample_between(out.truth.labels[t], cfg.p_between, rng_b))
      slice.set(u, v, true);

    out.trace.push_back(temporal_stats(cfg.spec, slice, out.net.slices[t - 1]));
    out.net.slices.push_back(std::move(slice));
  }
  return out;
}

std::pair<double, double> stationary_edge_stability(double density, double dissolve) {
  if (density <= 0.0 || density >= 1.0 || dissolve <= 0.0 || dissolve >= 1.0)
    throw std::invalid_argument("stationary_edge_stability: arguments must be in (0,1)");
  auto logit = [](double p) { return std::log(p / (1.0 - p)); };
  // keep probability for an existing tie and formation probability for a
  // non-tie that balance to the target density
  double keep = logit(1.0 - dissolve);
  double form = logit(density * dissolve / (1.0 - density));
  return {(keep + form) / 2.0, (keep - form) / 2.0};
}

}  // namespace thergm
