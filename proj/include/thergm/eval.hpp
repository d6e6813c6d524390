#pragma once
#include <cstdint>
#include <map>
#include <vector>

#include "thergm/generator.hpp"
#include "thergm/network.hpp"
#include "thergm/stats.hpp"
#include "thergm/tergm.hpp"

namespace thergm {

// Permutation pi of 1..K minimizing the Hamming distance between
// pi(m_hat) and m_ref; result[h-1] is the new label of old label h.
std::vector<int> align_labels(const std::vector<int>& m_hat, const std::vector<int>& m_ref,
                              int K);

std::vector<int> apply_permutation(const std::vector<int>& labels,
                                   const std::vector<int>& perm);

struct MisclusteringReport {
  std::vector<double> per_time;
  double average = 0.0;
  std::vector<std::vector<int>> permutations;  // per-time alignment used
};

MisclusteringReport misclustering(const MembershipSeries& m_hat, const MembershipSeries& m_true);

// Row-normalized transition counts across consecutive slices; rows with
// no departures get 1/K and a warning flag.
struct TransitionEstimate {
  TransitionMatrix B;
  std::vector<bool> empty_row;
};

TransitionEstimate estimate_transition(const MembershipSeries& m);

// A fitted model able to simulate the final transition and score dyads.
struct ThergmBundle {
  StatisticSpec spec;
  std::vector<std::vector<double>> theta;  // per cluster
  TransitionMatrix B_hat;
  double p_between = 0.0;
  MembershipSeries members;
  int gibbs_sweeps = 20;
  int m_attach = 2;
};

struct DlsmBundle {
  double beta0 = 0.0;
  double beta1 = 1.0;
  std::vector<std::vector<double>> z_final;  // n x d positions at time T
  std::vector<std::vector<double>> proba;    // optional posterior-predictive dyad probabilities
};

struct GofTable {
  // observed mass and simulated band per bin, over normalized histograms
  std::vector<int> bins;
  std::vector<double> observed;
  std::vector<double> q05, q50, q95;
  double coverage = 0.0;     // fraction of bins with observed inside [q05,q95]
  double discrepancy = 0.0;  // mean |observed - q50|
};

struct GofReport {
  GofTable degree;
  GofTable geodesic;
};

GofReport gof_thergm(const DynamicNetwork& net_obs, const ThergmBundle& bundle, int n_sims,
                     std::uint64_t seed);
GofReport gof_dlsm(const DynamicNetwork& net_obs, const DlsmBundle& bundle, int n_sims,
                   std::uint64_t seed);

// One-step-ahead tie probabilities at T+1; memberships held at m_T.
std::vector<std::vector<double>> predict_proba(const ThergmBundle& bundle, const Adjacency& y_T,
                                               const std::vector<int>& m_T);

std::vector<std::vector<double>> predict_proba_dlsm(const DlsmBundle& bundle, int n);

// Mann-Whitney AUC over all dyads; throws on degenerate truth.
double auc(const std::vector<std::vector<double>>& scores, const Adjacency& y_true);

}  // namespace thergm
