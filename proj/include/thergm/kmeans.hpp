#pragma once
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "thergm/rng.hpp"

namespace thergm {

struct KmeansResult {
  std::vector<int> labels;  // 1..K
  Eigen::MatrixXd centers;  // K x d
  double inertia = 0.0;
};

// Lloyd's algorithm with k-means++ seeding; best of `restarts` runs.
KmeansResult kmeans(const Eigen::MatrixXd& points, int K, int restarts, std::uint64_t seed);

}  // namespace thergm
