#include "thergm/dsbm.hpp"

#include <Eigen/Dense>
#include <numeric>

#include "thergm/eval.hpp"
#include "thergm/kmeans.hpp"

namespace thergm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Top-K eigenvectors (by eigenvalue magnitude) of the regularized
// normalized adjacency D_tau^{-1/2} (A + tau/n J) D_tau^{-1/2}.
MatrixXd spectral_embedding(const Adjacency& y, int K, double tau, double* eigengap = nullptr) {
  const int n = y.n();
  MatrixXd a = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && y.has(i, j)) a(i, j) = 1.0;
  a.array() += tau / n;

  VectorXd deg = a.rowwise().sum();
  VectorXd dinv = deg.cwiseMax(1e-12).cwiseInverse().cwiseSqrt();
  MatrixXd l = dinv.asDiagonal() * a * dinv.asDiagonal();

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(l);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int p, int q) {
    return std::abs(es.eigenvalues()[p]) > std::abs(es.eigenvalues()[q]);
  });

  MatrixXd emb(n, K);
  for (int k = 0; k < K; ++k) emb.col(k) = es.eigenvectors().col(order[k]);
  if (eigengap) {
    double lead = std::abs(es.eigenvalues()[order[0]]);
    double at_k = std::abs(es.eigenvalues()[order[K - 1]]);
    double next = K < n ? std::abs(es.eigenvalues()[order[K]]) : 0.0;
    *eigengap = lead > 0.0 ? (at_k - next) / lead : 0.0;
  }
  return emb;
}

double resolve_tau(const Adjacency& y, double tau) {
  if (tau >= 0.0) return tau;
  return 2.0 * y.edge_count() / std::max(1, y.n());  // mean degree
}

}  // namespace

SpectralResult spectral_slice(const Adjacency& y, const SpectralSettings& settings) {
  if (y.n() < settings.K) throw std::invalid_argument("spectral_slice: n < K");
  double eigengap = 0.0;
  MatrixXd emb = spectral_embedding(y, settings.K, resolve_tau(y, settings.tau), &eigengap);
  KmeansResult km = kmeans(emb, settings.K, settings.restarts, settings.seed);

  SpectralResult res;
  res.labels = km.labels;
  // no community structure shows up as either a vanishing eigengap after
  // the K-th eigenvalue (the informative subspace is degenerate) or a
  // k-means fit that removes little of the embedding's spread
  MatrixXd centered = emb.rowwise() - emb.colwise().mean();
  double total_ss = centered.squaredNorm();
  res.low_confidence =
      y.edge_count() == 0 || eigengap < 0.05 || km.inertia > 0.5 * total_ss;
  return res;
}

MembershipSeries fit_dsbm(const DynamicNetwork& net, const SpectralSettings& settings) {
  if (net.slices.empty()) throw std::invalid_argument("fit_dsbm: empty network");
  MembershipSeries out;
  out.K = settings.K;

  MatrixXd prev_emb;
  for (int t = 0; t <= net.T(); ++t) {
    MatrixXd emb = spectral_embedding(net.slices[t], settings.K,
                                      resolve_tau(net.slices[t], settings.tau));
    if (settings.smooth > 0.0 && t > 0) {
      // Procrustes-align to the previous embedding before blending, since
      // eigenvectors are only defined up to rotation and sign
      Eigen::JacobiSVD<MatrixXd> svd(emb.transpose() * prev_emb,
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
      MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();
      emb = (1.0 - settings.smooth) * (emb * rot) + settings.smooth * prev_emb;
    }
    KmeansResult km =
        kmeans(emb, settings.K, settings.restarts, derive_seed(settings.seed, "dsbm-slice", t));
    if (t > 0) {
      std::vector<int> perm = align_labels(km.labels, out.labels.back(), settings.K);
      km.labels = apply_permutation(km.labels, perm);
    }
    out.labels.push_back(std::move(km.labels));
    prev_emb = std::move(emb);
  }
  return out;
}

}  // namespace thergm
