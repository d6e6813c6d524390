#pragma once
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "thergm/network.hpp"
#include "thergm/rng.hpp"

namespace thergm {

struct MixtureComponent {
  Eigen::VectorXd mu;
  double sigma2 = 1.0;
  double lambda = 0.0;
};

// Full state of the dynamic latent space working model.
struct LatentState {
  std::vector<Eigen::MatrixXd> Z;           // T+1 slices of n x d positions
  std::vector<MixtureComponent> mixture;    // K components
  MembershipSeries M;
  double beta0 = 0.0;
  double beta1 = 1.0;                       // distance coefficient, >= 0
  std::vector<std::vector<double>> Pi;      // K x K membership transition
};

struct McmcSettings {
  int burn_in = 600;
  int samples = 600;
  int thin = 1;
  double step_z = 0.25;     // random-walk proposal scale for positions
  double step_beta = 0.1;
  double rho = 0.8;         // AR(1) pull toward the current cluster mean
  std::uint64_t seed = 1;
};

struct DlsmDiagnostics {
  double accept_z = 0.0;
  double accept_beta = 0.0;
  double beta0 = 0.0;  // posterior means
  double beta1 = 0.0;
  std::vector<std::vector<double>> z_final;  // last retained positions at time T
  std::vector<std::vector<double>> proba_final;  // posterior-predictive dyad probabilities at T
  int retained = 0;
};

// MDS of slice-0 geodesics + k-means; mixture moments from the partition.
LatentState init_latent(const DynamicNetwork& net, int K, int d, std::uint64_t seed);

// Sum over dyads of the Bernoulli log-likelihood with
// logit P(y_ij) = beta0 - beta1 |z_i - z_j|.
double loglik_slice(const Eigen::MatrixXd& Z_t, double beta0, double beta1,
                    const Adjacency& y_t);

// Rescales every slice to the unit-RMS identification constraint and
// applies the compensating factor to beta1 (and the mixture scale).
void project_scale(LatentState& state);

std::pair<MembershipSeries, DlsmDiagnostics> mcmc_fit(const DynamicNetwork& net, int K, int d,
                                                      const McmcSettings& settings);

// Modal label per (node, time) across retained samples, each sample first
// aligned to the reference by the Hamming-minimizing permutation.
MembershipSeries posterior_modes(const std::vector<MembershipSeries>& samples);

}  // namespace thergm
