#include "thergm/kmeans.hpp"

#include <limits>
#include <stdexcept>

namespace thergm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

KmeansResult lloyd_once(const MatrixXd& pts, int K, Rng& rng) {
  const int n = static_cast<int>(pts.rows());
  const int d = static_cast<int>(pts.cols());

  // k-means++ seeding
  MatrixXd centers(K, d);
  std::uniform_int_distribution<int> pick(0, n - 1);
  centers.row(0) = pts.row(pick(rng));
  VectorXd dist2 = (pts.rowwise() - centers.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 1; k < K; ++k) {
    double total = dist2.sum();
    int chosen = n - 1;
    if (total > 0) {
      double u = unif(rng) * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += dist2[i];
        if (u < acc) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centers.row(k) = pts.row(chosen);
    dist2 = dist2.cwiseMin((pts.rowwise() - centers.row(k)).rowwise().squaredNorm());
  }

  KmeansResult res;
  res.labels.assign(n, 1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      int arg = 1;
      for (int k = 0; k < K; ++k) {
        double d2 = (pts.row(i) - centers.row(k)).squaredNorm();
        if (d2 < best) {
          best = d2;
          arg = k + 1;
        }
      }
      if (arg != res.labels[i]) {
        res.labels[i] = arg;
        changed = true;
      }
    }
    MatrixXd sums = MatrixXd::Zero(K, d);
    std::vector<int> counts(K, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(res.labels[i] - 1) += pts.row(i);
      ++counts[res.labels[i] - 1];
    }
    for (int k = 0; k < K; ++k)
      if (counts[k] > 0) centers.row(k) = sums.row(k) / counts[k];
      else centers.row(k) = pts.row(pick(rng));  // re-seed empty cluster
    if (!changed && iter > 0) break;
  }

  res.inertia = 0.0;
  for (int i = 0; i < n; ++i)
    res.inertia += (pts.row(i) - centers.row(res.labels[i] - 1)).squaredNorm();
  res.centers = std::move(centers);
  return res;
}

}  // namespace

KmeansResult kmeans(const MatrixXd& points, int K, int restarts, std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("kmeans: K < 1");
  if (points.rows() < K) throw std::invalid_argument("kmeans: fewer points than clusters");
  KmeansResult best;
  best.inertia = std::numeric_limits<double>::max();
  for (int r = 0; r < restarts; ++r) {
    Rng rng = make_rng(seed, "kmeans", r);
    KmeansResult cur = lloyd_once(points, K, rng);
    if (cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

}  // namespace thergm
