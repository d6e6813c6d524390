#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "thergm/network.hpp"
#include "thergm/rng.hpp"
#include "thergm/stats.hpp"

namespace thergm {

// Row-stochastic K x K membership transition matrix.
struct TransitionMatrix {
  std::vector<std::vector<double>> B;

  int K() const { return static_cast<int>(B.size()); }
  double at(int h, int k) const { return B[h - 1][k - 1]; }  // 1-based labels
  void validate() const;

  static TransitionMatrix diagonal(int K, double stay);
};

struct ThergmConfig {
  int K = 3;
  std::vector<int> n_per_cluster = {30, 30, 30};
  int T = 5;
  StatisticSpec spec = {{StatTerm::Edges, StatTerm::Triangles, StatTerm::Stability}};
  std::vector<std::vector<double>> theta;  // one vector of length p per cluster
  TransitionMatrix B = TransitionMatrix::diagonal(3, 0.9);
  double p_within_init = 0.1;  // initial within-cluster density
  double p_between = 0.01;
  int m_attach = 2;
  int gibbs_sweeps = 20;
  std::uint64_t seed = 1;

  int n_total() const {
    int n = 0;
    for (int c : n_per_cluster) n += c;
    return n;
  }
  void validate() const;
};

struct SimulationOutput {
  DynamicNetwork net;
  MembershipSeries truth;
  ThergmConfig config;
  std::vector<StatVector> trace;  // global S(y_t, y_{t-1}) per step, length T
};

// Initial slice: block structure with Bernoulli ties, blockwise labels.
std::pair<Adjacency, std::vector<int>> init_state(const ThergmConfig& cfg, Rng& rng);

// One Markov step of memberships: node i moves per row m_prev[i] of B.
std::vector<int> step_membership(const std::vector<int>& m_prev, const TransitionMatrix& B,
                                 Rng& rng);

// Preferential-attachment ties for a cluster's joiners: each joiner gets
// m_attach distinct incumbent targets with weight (degree at t-1 within
// the cluster) + 1. Fewer incumbents than m_attach connects to all.
std::vector<std::pair<int, int>> attach_joiners(const ClusterView& view, int m_attach,
                                                Rng& rng);

// Single-site Gibbs over the remain-set dyads, started from view.prev_adj.
Adjacency gibbs_within(const ClusterView& view, const StatisticSpec& spec,
                       const std::vector<double>& theta_k, int sweeps, Rng& rng);

// As above but with an explicit start state and previous slice (shared by
// the MCMC-MLE simulator).
Adjacency gibbs_transition(const Adjacency& y_prev, const Adjacency& start,
                           const StatisticSpec& spec, const std::vector<double>& theta,
                           int sweeps, Rng& rng);

// Independent Bernoulli(p_between) draws over all cross-cluster dyads.
std::vector<std::pair<int, int>> sample_between(const std::vector<int>& m_t, double p_between,
                                                Rng& rng);

SimulationOutput simulate(const ThergmConfig& cfg);

// Coefficients (edges, stability) giving stationary density `density` with
// per-step tie dissolution probability `dissolve`.
std::pair<double, double> stationary_edge_stability(double density, double dissolve);

}  // namespace thergm
