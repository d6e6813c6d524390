#include "thergm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace thergm {

namespace {

// Hungarian algorithm (potentials form), minimizing total cost.
std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::max());
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = -1;
      double delta = std::numeric_limits<double>::max();
      for (int j = 1; j <= n; ++j)
        if (!used[j]) {
          double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
      for (int j = 0; j <= n; ++j)
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assign(n);  // assign[row] = column
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) assign[p[j] - 1] = j - 1;
  return assign;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  double pos = q * (static_cast<double>(v.size()) - 1.0);
  size_t lo = static_cast<size_t>(pos);
  size_t hi = std::min(lo + 1, v.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

std::map<int, double> normalized_degree_hist(const Adjacency& y) {
  std::map<int, double> h;
  for (int d : degrees(y)) h[d] += 1.0 / y.n();
  return h;
}

std::map<int, double> normalized_geodesic_hist(const Adjacency& y) {
  std::map<int, double> h;
  double total = y.n() * (y.n() - 1) / 2.0;
  for (const auto& [d, c] : geodesic_histogram(y)) h[d] = c / total;
  return h;
}

GofTable summarize(const std::map<int, double>& observed,
                   const std::vector<std::map<int, double>>& sims) {
  GofTable tab;
  std::map<int, int> keyset;
  for (const auto& [k, v] : observed) keyset[k];
  for (const auto& s : sims)
    for (const auto& [k, v] : s) keyset[k];

  int covered = 0;
  for (const auto& [bin, unused] : keyset) {
    std::vector<double> vals;
    vals.reserve(sims.size());
    for (const auto& s : sims) {
      auto it = s.find(bin);
      vals.push_back(it == s.end() ? 0.0 : it->second);
    }
    auto ito = observed.find(bin);
    double obs = ito == observed.end() ? 0.0 : ito->second;
    double q05 = quantile(vals, 0.05), q50 = quantile(vals, 0.50), q95 = quantile(vals, 0.95);
    tab.bins.push_back(bin);
    tab.observed.push_back(obs);
    tab.q05.push_back(q05);
    tab.q50.push_back(q50);
    tab.q95.push_back(q95);
    if (obs >= q05 - 1e-12 && obs <= q95 + 1e-12) ++covered;
    tab.discrepancy += std::abs(obs - q50);
  }
  tab.coverage = keyset.empty() ? 1.0 : static_cast<double>(covered) / keyset.size();
  tab.discrepancy = keyset.empty() ? 0.0 : tab.discrepancy / keyset.size();
  return tab;
}

}  // namespace

std::vector<int> align_labels(const std::vector<int>& m_hat, const std::vector<int>& m_ref,
                              int K) {
  if (m_hat.size() != m_ref.size()) throw std::invalid_argument("align_labels: length mismatch");
  std::vector<std::vector<double>> confusion(K, std::vector<double>(K, 0.0));
  for (size_t i = 0; i < m_hat.size(); ++i) ++confusion[m_hat[i] - 1][m_ref[i] - 1];
  // maximize agreement = minimize negated counts
  std::vector<std::vector<double>> cost(K, std::vector<double>(K));
  for (int h = 0; h < K; ++h)
    for (int k = 0; k < K; ++k) cost[h][k] = -confusion[h][k];
  std::vector<int> assign = hungarian_min(cost);
  std::vector<int> perm(K);
  for (int h = 0; h < K; ++h) perm[h] = assign[h] + 1;
  return perm;
}

std::vector<int> apply_permutation(const std::vector<int>& labels,
                                   const std::vector<int>& perm) {
  std::vector<int> out(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) out[i] = perm[labels[i] - 1];
  return out;
}

MisclusteringReport misclustering(const MembershipSeries& m_hat,
                                  const MembershipSeries& m_true) {
  if (m_hat.K != m_true.K) throw std::invalid_argument("misclustering: K mismatch");
  if (m_hat.T() != m_true.T() || m_hat.n() != m_true.n())
    throw std::invalid_argument("misclustering: dimension mismatch");
  MisclusteringReport rep;
  for (int t = 0; t <= m_hat.T(); ++t) {
    std::vector<int> perm = align_labels(m_hat.labels[t], m_true.labels[t], m_hat.K);
    std::vector<int> aligned = apply_permutation(m_hat.labels[t], perm);
    int wrong = 0;
    for (int i = 0; i < m_hat.n(); ++i)
      if (aligned[i] != m_true.labels[t][i]) ++wrong;
    rep.per_time.push_back(static_cast<double>(wrong) / m_hat.n());
    rep.permutations.push_back(std::move(perm));
  }
  rep.average = std::accumulate(rep.per_time.begin(), rep.per_time.end(), 0.0) /
                rep.per_time.size();
  return rep;
}

TransitionEstimate estimate_transition(const MembershipSeries& m) {
  if (m.T() < 1) throw std::invalid_argument("estimate_transition: T < 1");
  const int K = m.K;
  std::vector<std::vector<double>> counts(K, std::vector<double>(K, 0.0));
  for (int t = 1; t <= m.T(); ++t)
    for (int i = 0; i < m.n(); ++i) ++counts[m.at(t - 1, i) - 1][m.at(t, i) - 1];

  TransitionEstimate est;
  est.B.B.assign(K, std::vector<double>(K, 0.0));
  est.empty_row.assign(K, false);
  for (int h = 0; h < K; ++h) {
    double total = std::accumulate(counts[h].begin(), counts[h].end(), 0.0);
    if (total == 0.0) {
      est.empty_row[h] = true;
      for (int k = 0; k < K; ++k) est.B.B[h][k] = 1.0 / K;
    } else {
      for (int k = 0; k < K; ++k) est.B.B[h][k] = counts[h][k] / total;
    }
  }
  return est;
}

// Simulates replicates of the final transition under the fitted bundle.
static Adjacency simulate_final_transition(const DynamicNetwork& net, const ThergmBundle& b,
                                           std::uint64_t seed, int rep) {
  const int t = net.T();
  const int n = net.n();
  auto views = cluster_views(net, b.members, t);
  Adjacency slice(n);
  for (const auto& view : views) {
    const int k = view.cluster;
    if (!view.remain.empty() && !b.theta[k - 1].empty()) {
      Rng rng = make_rng(seed, "gof-gibbs", rep, static_cast<std::uint64_t>(k));
      Adjacency within = gibbs_within(view, b.spec, b.theta[k - 1], b.gibbs_sweeps, rng);
      for (size_t a = 0; a < view.remain.size(); ++a)
        for (size_t c = a + 1; c < view.remain.size(); ++c)
          if (within.has(static_cast<int>(a), static_cast<int>(c)))
            slice.set(view.remain[a], view.remain[c], true);
    }
    Rng rng_a = make_rng(seed, "gof-attach", rep, static_cast<std::uint64_t>(k));
    for (const auto& [u, v] : attach_joiners(view, b.m_attach, rng_a)) slice.set(u, v, true);
  }
  Rng rng_b = make_rng(seed, "gof-between", rep);
  for (const auto& [u, v] : sample_between(b.members.labels[t], b.p_between, rng_b))
    slice.set(u, v, true);
  return slice;
}

GofReport gof_thergm(const DynamicNetwork& net_obs, const ThergmBundle& bundle, int n_sims,
                     std::uint64_t seed) {
  const Adjacency& observed = net_obs.slices.back();
  std::vector<std::map<int, double>> deg_sims, geo_sims;
  for (int r = 0; r < n_sims; ++r) {
    Adjacency sim = simulate_final_transition(net_obs, bundle, seed, r);
    deg_sims.push_back(normalized_degree_hist(sim));
    geo_sims.push_back(normalized_geodesic_hist(sim));
  }
  GofReport rep;
  rep.degree = summarize(normalized_degree_hist(observed), deg_sims);
  rep.geodesic = summarize(normalized_geodesic_hist(observed), geo_sims);
  return rep;
}

GofReport gof_dlsm(const DynamicNetwork& net_obs, const DlsmBundle& bundle, int n_sims,
                   std::uint64_t seed) {
  const Adjacency& observed = net_obs.slices.back();
  const int n = net_obs.n();
  auto proba = predict_proba_dlsm(bundle, n);
  std::vector<std::map<int, double>> deg_sims, geo_sims;
  for (int r = 0; r < n_sims; ++r) {
    Rng rng = make_rng(seed, "gof-dlsm", r);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Adjacency sim(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unif(rng) < proba[i][j]) sim.set(i, j, true);
    deg_sims.push_back(normalized_degree_hist(sim));
    geo_sims.push_back(normalized_geodesic_hist(sim));
  }
  GofReport rep;
  rep.degree = summarize(normalized_degree_hist(observed), deg_sims);
  rep.geodesic = summarize(normalized_geodesic_hist(observed), geo_sims);
  return rep;
}

std::vector<std::vector<double>> predict_proba(const ThergmBundle& bundle, const Adjacency& y_T,
                                               const std::vector<int>& m_T) {
  const int n = y_T.n();
  std::vector<std::vector<double>> proba(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double p;
      if (m_T[i] == m_T[j]) {
        const auto& theta = bundle.theta[m_T[i] - 1];
        if (theta.empty()) {
          p = bundle.p_between;  // unfittable cluster falls back to noise level
        } else {
          p = sigmoid(conditional_logit(bundle.spec, theta, y_T, y_T, i, j));
        }
      } else {
        p = bundle.p_between;
      }
      proba[i][j] = proba[j][i] = p;
    }
  return proba;
}

std::vector<std::vector<double>> predict_proba_dlsm(const DlsmBundle& bundle, int n) {
  if (!bundle.proba.empty()) {
    if (static_cast<int>(bundle.proba.size()) != n)
      throw std::invalid_argument("predict_proba_dlsm: probability matrix size mismatch");
    return bundle.proba;
  }
  if (static_cast<int>(bundle.z_final.size()) != n)
    throw std::invalid_argument("predict_proba_dlsm: position count mismatch");
  std::vector<std::vector<double>> proba(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d2 = 0.0;
      for (size_t a = 0; a < bundle.z_final[i].size(); ++a) {
        double diff = bundle.z_final[i][a] - bundle.z_final[j][a];
        d2 += diff * diff;
      }
      double p = sigmoid(bundle.beta0 - bundle.beta1 * std::sqrt(d2));
      proba[i][j] = proba[j][i] = p;
    }
  return proba;
}

double auc(const std::vector<std::vector<double>>& scores, const Adjacency& y_true) {
  const int n = y_true.n();
  std::vector<std::pair<double, int>> items;  // (score, is_tie)
  long pos = 0, neg = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int y = y_true.has(i, j) ? 1 : 0;
      items.emplace_back(scores[i][j], y);
      (y ? pos : neg) += 1;
    }
  if (pos == 0 || neg == 0) throw std::runtime_error("auc: degenerate truth");

  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // midranks handle score ties as 1/2
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < items.size()) {
    size_t j = i;
    while (j < items.size() && items[j].first == items[i].first) ++j;
    double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k < j; ++k)
      if (items[k].second) rank_sum_pos += midrank;
    i = j;
  }
  return (rank_sum_pos - pos * (pos + 1.0) / 2.0) / (static_cast<double>(pos) * neg);
}

}  // namespace thergm
