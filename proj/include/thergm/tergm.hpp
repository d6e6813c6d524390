#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "thergm/generator.hpp"
#include "thergm/network.hpp"
#include "thergm/stats.hpp"

namespace thergm {

struct FitResult {
  std::vector<double> theta_hat;
  std::vector<double> std_err;
  std::string method;  // "mple", "exact", "mcmc"
  int iterations = 0;
  bool converged = false;
  double log_lik = 0.0;
  bool naive_std_err = false;  // pseudo-likelihood variance, no dependence correction
  std::string note;
};

// One (y_prev, y_curr) pair per time step per cluster remain-set; pairs
// carry their own node sets so sizes may differ across steps.
struct TransitionSeries {
  std::vector<std::pair<Adjacency, Adjacency>> pairs;

  void validate() const;
};

// Maximum pseudo-likelihood: Newton-Raphson on the product of dyadic
// conditionals. Standard errors are naive (inverse observed information).
FitResult mple(const StatisticSpec& spec, const TransitionSeries& series);

// Exact MLE by full successor-graph enumeration; node count per pair <= 6.
FitResult exact_mle(const StatisticSpec& spec, const TransitionSeries& series);

// Exact per-transition log-likelihood at theta (same size limit).
double exact_loglik(const StatisticSpec& spec, const TransitionSeries& series,
                    const std::vector<double>& theta);

struct McmcMleSettings {
  int n_sim = 200;        // simulated networks per transition
  int sim_sweeps = 20;    // Gibbs sweeps per simulated network
  int max_outer = 20;
  double tol = 1e-4;      // parameter-change stopping rule
  double step_cap = 1.0;  // trust-region cap per coordinate
  double min_ess_frac = 0.05;
  std::uint64_t seed = 1;
};

// Geyer-Thompson importance-sampled MLE started from theta0.
FitResult mcmc_mle(const StatisticSpec& spec, const TransitionSeries& series,
                   const std::vector<double>& theta0, const McmcMleSettings& settings = {});

enum class FitMethod { Mple, McmcMle };

// Builds each cluster's TransitionSeries from remain-sets and fits it.
std::vector<FitResult> pooled_cluster_fit(const StatisticSpec& spec, const DynamicNetwork& net,
                                          const MembershipSeries& m,
                                          FitMethod method = FitMethod::McmcMle,
                                          const McmcMleSettings& settings = {});

TransitionSeries cluster_series(const DynamicNetwork& net, const MembershipSeries& m,
                                int cluster);

}  // namespace thergm
