#include "thergm/dlsm.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "thergm/eval.hpp"
#include "thergm/kmeans.hpp"
#include "thergm/stats.hpp"

namespace thergm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double log_bernoulli(double lp, bool y) {
  // log sigmoid(lp) or log sigmoid(-lp), stable in both tails
  if (y) return lp >= 0 ? -std::log1p(std::exp(-lp)) : lp - std::log1p(std::exp(lp));
  return lp >= 0 ? -lp - std::log1p(std::exp(-lp)) : -std::log1p(std::exp(lp));
}

// classical MDS of the geodesic distance matrix (unreachable -> n)
MatrixXd mds_embedding(const Adjacency& y, int d) {
  const int n = y.n();
  MatrixXd d2(n, n);
  std::vector<int> dist(n);
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::vector<int> queue = {s};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (int v = 0; v < n; ++v)
        if (v != u && y.has(u, v) && dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    for (int t = 0; t < n; ++t) {
      double dd = dist[t] < 0 ? n : dist[t];
      d2(s, t) = dd * dd;
    }
  }
  MatrixXd j = MatrixXd::Identity(n, n) - MatrixXd::Constant(n, n, 1.0 / n);
  MatrixXd b = -0.5 * j * d2 * j;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(b);  // eigenvalues ascending
  MatrixXd z = MatrixXd::Zero(n, d);
  for (int a = 0; a < d; ++a) {
    double ev = es.eigenvalues()[n - 1 - a];
    if (ev > 0) z.col(a) = es.eigenvectors().col(n - 1 - a) * std::sqrt(ev);
  }
  return z;
}

void rescale_slice(MatrixXd& z) {
  double rms = std::sqrt(z.rowwise().squaredNorm().mean());
  if (rms > 0) z /= rms;
}

double log_normal_kernel(const VectorXd& x, const VectorXd& mean, double sigma2) {
  double d = static_cast<double>(x.size());
  return -0.5 * (x - mean).squaredNorm() / sigma2 - 0.5 * d * std::log(sigma2);
}

double gamma_draw(double shape, Rng& rng) {
  std::gamma_distribution<double> g(shape, 1.0);
  return g(rng);
}

}  // namespace

LatentState init_latent(const DynamicNetwork& net, int K, int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("init_latent: d < 1");
  if (K > net.n()) throw std::invalid_argument("init_latent: K > n");
  const int n = net.n();
  const int T = net.T();

  LatentState st;
  MatrixXd z0 = mds_embedding(net.slices[0], d);
  rescale_slice(z0);
  st.Z.assign(T + 1, z0);

  KmeansResult km = kmeans(z0, K, 20, derive_seed(seed, "dlsm-init"));
  st.M.K = K;
  st.M.labels.assign(T + 1, km.labels);

  st.mixture.resize(K);
  for (int k = 0; k < K; ++k) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (km.labels[i] == k + 1) members.push_back(i);
    MixtureComponent comp;
    comp.mu = VectorXd::Zero(d);
    for (int i : members) comp.mu += z0.row(i).transpose();
    if (!members.empty()) comp.mu /= static_cast<double>(members.size());
    double ssq = 0.0;
    for (int i : members) ssq += (z0.row(i).transpose() - comp.mu).squaredNorm();
    comp.sigma2 = members.size() > 1 ? ssq / (members.size() * d) : 0.25;
    comp.sigma2 = std::max(comp.sigma2, 1e-3);
    comp.lambda = std::max(1.0, static_cast<double>(members.size())) / n;
    st.mixture[k] = std::move(comp);
  }
  double lam_total = 0.0;
  for (auto& c : st.mixture) lam_total += c.lambda;
  for (auto& c : st.mixture) c.lambda /= lam_total;

  st.Pi.assign(K, std::vector<double>(K, 0.1 / K));
  for (int k = 0; k < K; ++k) st.Pi[k][k] += 0.9;

  double density =
      2.0 * net.slices[0].edge_count() / (static_cast<double>(n) * (n - 1));
  density = std::min(std::max(density, 1e-3), 1.0 - 1e-3);
  st.beta0 = std::log(density / (1.0 - density)) + 1.0;
  st.beta1 = 1.0;
  return st;
}

double loglik_slice(const MatrixXd& Z_t, double beta0, double beta1, const Adjacency& y_t) {
  const int n = y_t.n();
  if (Z_t.rows() != n) throw std::invalid_argument("loglik_slice: dimension mismatch");
  double ll = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dist = (Z_t.row(i) - Z_t.row(j)).norm();
      ll += log_bernoulli(beta0 - beta1 * dist, y_t.has(i, j));
    }
  return ll;
}

void project_scale(LatentState& state) {
  double log_g = 0.0;
  for (auto& z : state.Z) {
    double rms = std::sqrt(z.rowwise().squaredNorm().mean());
    if (rms <= 0) continue;
    z /= rms;
    log_g += std::log(rms);
  }
  double g = std::exp(log_g / static_cast<double>(state.Z.size()));
  state.beta1 *= g;
  for (auto& comp : state.mixture) {
    comp.mu /= g;
    comp.sigma2 /= g * g;
  }
}

namespace {

// log-likelihood contribution of node i's row in slice t
double row_loglik(const MatrixXd& z, const VectorXd& zi, int i, double beta0, double beta1,
                  const Adjacency& y) {
  double ll = 0.0;
  for (int j = 0; j < y.n(); ++j) {
    if (j == i) continue;
    double dist = (zi.transpose() - z.row(j)).norm();
    ll += log_bernoulli(beta0 - beta1 * dist, y.has(i, j));
  }
  return ll;
}

VectorXd prior_mean(const LatentState& st, int t, int i, int k, double rho) {
  if (t == 0) return st.mixture[k - 1].mu;
  return rho * st.Z[t - 1].row(i).transpose() + (1.0 - rho) * st.mixture[k - 1].mu;
}

}  // namespace

std::pair<MembershipSeries, DlsmDiagnostics> mcmc_fit(const DynamicNetwork& net, int K, int d,
                                                      const McmcSettings& settings) {
  if (K > net.n()) throw std::invalid_argument("mcmc_fit: K > n");
  const int n = net.n();
  const int T = net.T();
  const double rho = settings.rho;

  LatentState st = init_latent(net, K, d, settings.seed);
  project_scale(st);

  Rng rng = make_rng(settings.seed, "dlsm-chain");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  long z_props = 0, z_accepts = 0, b_props = 0, b_accepts = 0;
  std::vector<MembershipSeries> retained;
  double beta0_sum = 0.0, beta1_sum = 0.0;
  MatrixXd proba_sum = MatrixXd::Zero(n, n);

  const double mu_prior_var = 4.0;
  const double beta_prior_var = 100.0;
  const double sig_a0 = 2.0, sig_b0 = 0.5;

  const int total_sweeps = settings.burn_in + settings.samples * settings.thin;
  for (int sweep = 0; sweep < total_sweeps; ++sweep) {
    // (a) positions, single-site random walk
    for (int t = 0; t <= T; ++t) {
      for (int i = 0; i < n; ++i) {
        VectorXd cur = st.Z[t].row(i).transpose();
        VectorXd prop = cur;
        for (int a = 0; a < d; ++a) prop[a] += settings.step_z * gauss(rng);

        int k_now = st.M.at(t, i);
        double lr = row_loglik(st.Z[t], prop, i, st.beta0, st.beta1, net.slices[t]) -
                    row_loglik(st.Z[t], cur, i, st.beta0, st.beta1, net.slices[t]);
        VectorXd pm = prior_mean(st, t, i, k_now, rho);
        double s2 = st.mixture[k_now - 1].sigma2;
        lr += log_normal_kernel(prop, pm, s2) - log_normal_kernel(cur, pm, s2);
        if (t < T) {
          int k_next = st.M.at(t + 1, i);
          double s2n = st.mixture[k_next - 1].sigma2;
          VectorXd znext = st.Z[t + 1].row(i).transpose();
          VectorXd mean_prop = rho * prop + (1.0 - rho) * st.mixture[k_next - 1].mu;
          VectorXd mean_cur = rho * cur + (1.0 - rho) * st.mixture[k_next - 1].mu;
          lr += log_normal_kernel(znext, mean_prop, s2n) -
                log_normal_kernel(znext, mean_cur, s2n);
        }
        ++z_props;
        if (!std::isfinite(lr)) throw std::runtime_error("mcmc_fit: non-finite likelihood");
        if (std::log(unif(rng)) < lr) {
          st.Z[t].row(i) = prop.transpose();
          ++z_accepts;
        }
      }
    }

    // (b) labels, Gibbs
    for (int t = 0; t <= T; ++t) {
      for (int i = 0; i < n; ++i) {
        VectorXd z = st.Z[t].row(i).transpose();
        std::vector<double> logw(K);
        for (int k = 1; k <= K; ++k) {
          double lw = 0.0;
          if (t == 0)
            lw += std::log(std::max(st.mixture[k - 1].lambda, 1e-300));
          else
            lw += std::log(std::max(st.Pi[st.M.at(t - 1, i) - 1][k - 1], 1e-300));
          if (t < T) lw += std::log(std::max(st.Pi[k - 1][st.M.at(t + 1, i) - 1], 1e-300));
          lw += log_normal_kernel(z, prior_mean(st, t, i, k, rho), st.mixture[k - 1].sigma2);
          logw[k - 1] = lw;
        }
        double mx = *std::max_element(logw.begin(), logw.end());
        double total = 0.0;
        for (double& w : logw) {
          w = std::exp(w - mx);
          total += w;
        }
        double u = unif(rng) * total;
        double acc = 0.0;
        int pick = K;
        for (int k = 0; k < K; ++k) {
          acc += logw[k];
          if (u < acc) {
            pick = k + 1;
            break;
          }
        }
        st.M.labels[t][i] = pick;
      }
    }

    // (c) conjugate mixture / transition updates
    for (int k = 1; k <= K; ++k) {
      // mu_k
      double prec = 1.0 / mu_prior_var;
      VectorXd wsum = VectorXd::Zero(d);
      for (int t = 0; t <= T; ++t)
        for (int i = 0; i < n; ++i) {
          if (st.M.at(t, i) != k) continue;
          double s2 = st.mixture[k - 1].sigma2;
          VectorXd z = st.Z[t].row(i).transpose();
          if (t == 0) {
            prec += 1.0 / s2;
            wsum += z / s2;
          } else {
            double c = 1.0 - rho;
            VectorXd resid = z - rho * st.Z[t - 1].row(i).transpose();
            prec += c * c / s2;
            wsum += c * resid / s2;
          }
        }
      VectorXd mean = wsum / prec;
      for (int a = 0; a < d; ++a)
        st.mixture[k - 1].mu[a] = mean[a] + gauss(rng) / std::sqrt(prec);

      // sigma2_k
      double ssq = 0.0;
      long count = 0;
      for (int t = 0; t <= T; ++t)
        for (int i = 0; i < n; ++i) {
          if (st.M.at(t, i) != k) continue;
          VectorXd z = st.Z[t].row(i).transpose();
          VectorXd pm = prior_mean(st, t, i, k, rho);
          ssq += (z - pm).squaredNorm();
          ++count;
        }
      double shape = sig_a0 + 0.5 * count * d;
      double rate = sig_b0 + 0.5 * ssq;
      st.mixture[k - 1].sigma2 = std::max(rate / gamma_draw(shape, rng), 1e-4);
    }

    {  // lambda from t=0 counts
      std::vector<double> dir(K);
      for (int k = 0; k < K; ++k) dir[k] = 1.0;
      for (int i = 0; i < n; ++i) dir[st.M.at(0, i) - 1] += 1.0;
      double total = 0.0;
      for (int k = 0; k < K; ++k) {
        dir[k] = gamma_draw(dir[k], rng);
        total += dir[k];
      }
      for (int k = 0; k < K; ++k) st.mixture[k].lambda = dir[k] / total;
    }

    {  // Pi rows from transition counts
      for (int h = 0; h < K; ++h) {
        std::vector<double> dir(K, 1.0);
        for (int t = 1; t <= T; ++t)
          for (int i = 0; i < n; ++i)
            if (st.M.at(t - 1, i) == h + 1) dir[st.M.at(t, i) - 1] += 1.0;
        double total = 0.0;
        for (int k = 0; k < K; ++k) {
          dir[k] = gamma_draw(dir[k], rng);
          total += dir[k];
        }
        for (int k = 0; k < K; ++k) st.Pi[h][k] = dir[k] / total;
      }
    }

    // (d) beta0, beta1 joint random walk, beta1 reflected at 0
    {
      double b0p = st.beta0 + settings.step_beta * gauss(rng);
      double b1p = st.beta1 + settings.step_beta * gauss(rng);
      if (b1p < 0) b1p = -b1p;
      double lr = 0.0;
      for (int t = 0; t <= T; ++t)
        lr += loglik_slice(st.Z[t], b0p, b1p, net.slices[t]) -
              loglik_slice(st.Z[t], st.beta0, st.beta1, net.slices[t]);
      lr += -(b0p * b0p - st.beta0 * st.beta0) / (2.0 * beta_prior_var);
      lr += -(b1p * b1p - st.beta1 * st.beta1) / (2.0 * beta_prior_var);
      ++b_props;
      if (!std::isfinite(lr)) throw std::runtime_error("mcmc_fit: non-finite likelihood");
      if (std::log(unif(rng)) < lr) {
        st.beta0 = b0p;
        st.beta1 = b1p;
        ++b_accepts;
      }
    }

    // (e) identification constraint
    project_scale(st);

    if (sweep >= settings.burn_in &&
        (sweep - settings.burn_in) % settings.thin == 0) {
      retained.push_back(st.M);
      beta0_sum += st.beta0;
      beta1_sum += st.beta1;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double dist = (st.Z[T].row(i) - st.Z[T].row(j)).norm();
          proba_sum(i, j) += 1.0 / (1.0 + std::exp(-(st.beta0 - st.beta1 * dist)));
        }
    }
  }

  if (retained.empty()) throw std::runtime_error("mcmc_fit: no retained samples");

  DlsmDiagnostics diag;
  diag.accept_z = static_cast<double>(z_accepts) / std::max(1L, z_props);
  diag.accept_beta = static_cast<double>(b_accepts) / std::max(1L, b_props);
  diag.retained = static_cast<int>(retained.size());
  diag.beta0 = beta0_sum / retained.size();
  diag.beta1 = beta1_sum / retained.size();
  diag.z_final.assign(n, std::vector<double>(d));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < d; ++a) diag.z_final[i][a] = st.Z[T](i, a);
  diag.proba_final.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double p = proba_sum(i, j) / retained.size();
      diag.proba_final[i][j] = diag.proba_final[j][i] = p;
    }

  return {posterior_modes(retained), diag};
}

MembershipSeries posterior_modes(const std::vector<MembershipSeries>& samples) {
  if (samples.empty()) throw std::invalid_argument("posterior_modes: no samples");
  const MembershipSeries& ref = samples.front();
  const int K = ref.K;
  const int n = ref.n();
  const int T = ref.T();

  // flatten labels over (node,time) and align each sample to the reference
  auto flatten = [&](const MembershipSeries& m) {
    std::vector<int> flat;
    flat.reserve(static_cast<size_t>(n) * (T + 1));
    for (const auto& row : m.labels) flat.insert(flat.end(), row.begin(), row.end());
    return flat;
  };
  std::vector<int> ref_flat = flatten(ref);

  std::vector<std::vector<std::vector<int>>> votes(
      T + 1, std::vector<std::vector<int>>(n, std::vector<int>(K, 0)));
  for (const auto& s : samples) {
    std::vector<int> perm = align_labels(flatten(s), ref_flat, K);
    for (int t = 0; t <= T; ++t)
      for (int i = 0; i < n; ++i) ++votes[t][i][perm[s.at(t, i) - 1] - 1];
  }

  MembershipSeries mode;
  mode.K = K;
  mode.labels.assign(T + 1, std::vector<int>(n, 1));
  for (int t = 0; t <= T; ++t)
    for (int i = 0; i < n; ++i) {
      int best = 0;
      for (int k = 1; k < K; ++k)
        if (votes[t][i][k] > votes[t][i][best]) best = k;
      mode.labels[t][i] = best + 1;
    }
  return mode;
}

}  // namespace thergm
