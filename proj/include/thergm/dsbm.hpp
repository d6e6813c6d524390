#pragma once
#include <cstdint>
#include <vector>

#include "thergm/network.hpp"

namespace thergm {

struct SpectralSettings {
  int K = 3;
  double tau = -1.0;   // degree regularization; < 0 means "use mean degree"
  double smooth = 0.0; // weight on the previous slice's embedding
  std::uint64_t seed = 1;
  int restarts = 20;
};

struct SpectralResult {
  std::vector<int> labels;  // 1..K
  bool low_confidence = false;
};

// k-means on the top-K eigenvectors of the tau-regularized normalized
// adjacency D_tau^{-1/2} (A + tau/n J) D_tau^{-1/2}.
SpectralResult spectral_slice(const Adjacency& y, const SpectralSettings& settings);

// Per-slice spectral labels aligned to the previous slice by the
// Hamming-minimizing permutation; optional embedding smoothing.
MembershipSeries fit_dsbm(const DynamicNetwork& net, const SpectralSettings& settings);

}  // namespace thergm
