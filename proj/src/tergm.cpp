#include "thergm/tergm.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace thergm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<long>(v.size()));
}

std::vector<double> from_eigen(const VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

// Pseudo-likelihood design: one row per (transition, dyad) with the
// change statistic as covariates and the observed tie as response.
struct PlData {
  std::vector<StatVector> x;
  std::vector<int> y;
};

PlData build_pl_data(const StatisticSpec& spec, const TransitionSeries& series) {
  PlData d;
  for (const auto& [y_prev, y_curr] : series.pairs) {
    const int n = y_curr.n();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        d.x.push_back(change_stats(spec, y_curr, y_prev, i, j));
        d.y.push_back(y_curr.has(i, j) ? 1 : 0);
      }
  }
  return d;
}

double pl_loglik(const PlData& d, const VectorXd& theta) {
  double ll = 0.0;
  for (size_t r = 0; r < d.x.size(); ++r) {
    double lp = 0.0;
    for (int a = 0; a < theta.size(); ++a) lp += theta[a] * d.x[r][a];
    double log_p1 = lp >= 0 ? -std::log1p(std::exp(-lp)) : lp - std::log1p(std::exp(lp));
    double log_p0 = lp >= 0 ? -lp - std::log1p(std::exp(-lp)) : -std::log1p(std::exp(lp));
    ll += d.y[r] ? log_p1 : log_p0;
  }
  return ll;
}

// Per-transition enumeration table: statistics of every successor graph.
struct EnumTable {
  MatrixXd stats;   // 2^D rows, p columns
  VectorXd s_obs;
};

EnumTable enumerate_transition(const StatisticSpec& spec, const Adjacency& y_prev,
                               const Adjacency& y_curr) {
  const int n = y_prev.n();
  if (n > 6) throw std::invalid_argument("exact_mle: node count > 6");
  std::vector<std::pair<int, int>> dyads;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) dyads.emplace_back(i, j);
  const int D = static_cast<int>(dyads.size());
  const long states = 1L << D;

  EnumTable tab;
  tab.stats.resize(states, spec.p());
  for (long s = 0; s < states; ++s) {
    Adjacency y(n);
    for (int d = 0; d < D; ++d)
      if ((s >> d) & 1) y.set(dyads[d].first, dyads[d].second, true);
    StatVector v = temporal_stats(spec, y, y_prev);
    for (int a = 0; a < spec.p(); ++a) tab.stats(s, a) = v[a];
  }
  tab.s_obs = to_eigen(temporal_stats(spec, y_curr, y_prev));
  return tab;
}

// log-sum-exp of stats * theta
double lse(const MatrixXd& stats, const VectorXd& theta, VectorXd* probs = nullptr) {
  VectorXd lp = stats * theta;
  double m = lp.maxCoeff();
  VectorXd e = (lp.array() - m).exp();
  double z = e.sum();
  if (probs) *probs = e / z;
  return m + std::log(z);
}

}  // namespace

void TransitionSeries::validate() const {
  if (pairs.empty()) throw std::invalid_argument("TransitionSeries: empty");
  for (const auto& [a, b] : pairs)
    if (a.n() != b.n()) throw std::invalid_argument("TransitionSeries: pair size mismatch");
}

FitResult mple(const StatisticSpec& spec, const TransitionSeries& series) {
  series.validate();
  PlData d = build_pl_data(spec, series);
  const int p = spec.p();

  bool any0 = false, any1 = false;
  for (int y : d.y) (y ? any1 : any0) = true;
  if (!any0 || !any1) throw std::runtime_error("mple: degenerate response");

  VectorXd theta = VectorXd::Zero(p);
  FitResult fit;
  fit.method = "mple";
  fit.naive_std_err = true;

  MatrixXd info(p, p);
  VectorXd grad(p);
  for (int it = 0; it < 100; ++it) {
    grad.setZero();
    info.setZero();
    for (size_t r = 0; r < d.x.size(); ++r) {
      VectorXd x = to_eigen(d.x[r]);
      double mu = sigmoid(theta.dot(x));
      grad += (d.y[r] - mu) * x;
      info += mu * (1.0 - mu) * x * x.transpose();
    }
    fit.iterations = it + 1;
    if (grad.norm() < 1e-8) {
      fit.converged = true;
      break;
    }
    Eigen::LDLT<MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || ldlt.isNegative()) break;
    VectorXd step = ldlt.solve(grad);
    // damp huge steps; runaway theta signals separation
    double cap = 5.0;
    double mx = step.cwiseAbs().maxCoeff();
    if (mx > cap) step *= cap / mx;
    theta += step;
    if (theta.cwiseAbs().maxCoeff() > 30.0) break;
  }
  if (theta.cwiseAbs().maxCoeff() > 15.0) {
    fit.converged = false;
    fit.note = "possible separation: coefficient diverging";
  }

  fit.theta_hat = from_eigen(theta);
  fit.log_lik = pl_loglik(d, theta);
  Eigen::LDLT<MatrixXd> ldlt(info);
  VectorXd se = ldlt.solve(MatrixXd::Identity(p, p)).diagonal().cwiseMax(0.0).cwiseSqrt();
  fit.std_err = from_eigen(se);
  return fit;
}

double exact_loglik(const StatisticSpec& spec, const TransitionSeries& series,
                    const std::vector<double>& theta) {
  series.validate();
  VectorXd th = to_eigen(theta);
  double ll = 0.0;
  for (const auto& [y_prev, y_curr] : series.pairs) {
    EnumTable tab = enumerate_transition(spec, y_prev, y_curr);
    ll += th.dot(tab.s_obs) - lse(tab.stats, th);
  }
  return ll;
}

FitResult exact_mle(const StatisticSpec& spec, const TransitionSeries& series) {
  series.validate();
  const int p = spec.p();
  std::vector<EnumTable> tabs;
  for (const auto& [y_prev, y_curr] : series.pairs)
    tabs.push_back(enumerate_transition(spec, y_prev, y_curr));

  VectorXd theta = VectorXd::Zero(p);
  FitResult fit;
  fit.method = "exact";

  for (int it = 0; it < 100; ++it) {
    VectorXd grad = VectorXd::Zero(p);
    MatrixXd hess = MatrixXd::Zero(p, p);
    for (const auto& tab : tabs) {
      VectorXd probs;
      lse(tab.stats, theta, &probs);
      VectorXd mean = tab.stats.transpose() * probs;
      MatrixXd second = tab.stats.transpose() * probs.asDiagonal() * tab.stats;
      grad += tab.s_obs - mean;
      hess += second - mean * mean.transpose();  // covariance of statistics
    }
    fit.iterations = it + 1;
    if (grad.norm() < 1e-8) {
      fit.converged = true;
      VectorXd se = hess.ldlt().solve(MatrixXd::Identity(p, p)).diagonal().cwiseMax(0.0).cwiseSqrt();
      fit.std_err = from_eigen(se);
      break;
    }
    VectorXd step = hess.ldlt().solve(grad);
    double mx = step.cwiseAbs().maxCoeff();
    if (mx > 5.0) step *= 5.0 / mx;
    theta += step;
    if (theta.cwiseAbs().maxCoeff() > 30.0) {
      fit.note = "possible separation: coefficient diverging";
      break;
    }
  }

  fit.theta_hat = from_eigen(theta);
  if (fit.std_err.empty()) fit.std_err.assign(p, 0.0);
  fit.log_lik = 0.0;
  for (const auto& tab : tabs) fit.log_lik += theta.dot(tab.s_obs) - lse(tab.stats, theta);
  return fit;
}

FitResult mcmc_mle(const StatisticSpec& spec, const TransitionSeries& series,
                   const std::vector<double>& theta0, const McmcMleSettings& settings) {
  series.validate();
  const int p = spec.p();
  const int R = static_cast<int>(series.pairs.size());
  const int m = settings.n_sim;

  VectorXd theta = to_eigen(theta0);
  FitResult fit;
  fit.method = "mcmc";

  std::vector<VectorXd> s_obs(R);
  for (int r = 0; r < R; ++r)
    s_obs[r] = to_eigen(temporal_stats(spec, series.pairs[r].second, series.pairs[r].first));

  std::vector<MatrixXd> sims(R);  // simulated statistics per transition
  MatrixXd final_info;

  auto simulate_batch = [&](const VectorXd& at, int tag, int rows) {
    std::vector<double> th = from_eigen(at);
    for (int r = 0; r < R; ++r) {
      sims[r].resize(rows, p);
      Rng rng = make_rng(settings.seed, "mcmcmle", tag, r);
      Adjacency state = series.pairs[r].second;  // start chains at the data
      for (int s = 0; s < rows; ++s) {
        state =
            gibbs_transition(series.pairs[r].first, state, spec, th, settings.sim_sweeps, rng);
        StatVector v = temporal_stats(spec, state, series.pairs[r].first);
        for (int a = 0; a < p; ++a) sims[r](s, a) = v[a];
      }
    }
  };

  // Newton on the importance-sampled log ratio, with the step shrunk until
  // every transition keeps enough effective sample size.
  auto inner_optimize = [&](const VectorXd& theta_ref) {
    VectorXd proposal = theta_ref;
    const double rows = static_cast<double>(sims[0].rows());
    for (int inner = 0; inner < 50; ++inner) {
      VectorXd grad = VectorXd::Zero(p);
      MatrixXd hess = MatrixXd::Zero(p, p);
      for (int r = 0; r < R; ++r) {
        VectorXd lw = sims[r] * (proposal - theta_ref);
        double mw = lw.maxCoeff();
        VectorXd w = (lw.array() - mw).exp();
        w /= w.sum();
        VectorXd mean = sims[r].transpose() * w;
        MatrixXd second = sims[r].transpose() * w.asDiagonal() * sims[r];
        grad += s_obs[r] - mean;
        hess += second - mean * mean.transpose();
      }
      VectorXd step = hess.ldlt().solve(grad);
      double mx = step.cwiseAbs().maxCoeff();
      if (mx > settings.step_cap) step *= settings.step_cap / mx;

      // effective sample size guard
      VectorXd cand = proposal + step;
      bool ok = true;
      for (int half = 0; half < 10; ++half) {
        ok = true;
        for (int r = 0; r < R; ++r) {
          VectorXd lw = sims[r] * (cand - theta_ref);
          double mw = lw.maxCoeff();
          VectorXd w = (lw.array() - mw).exp();
          double ess = w.sum() * w.sum() / w.squaredNorm();
          if (ess < settings.min_ess_frac * rows) {
            ok = false;
            break;
          }
        }
        if (ok) break;
        cand = proposal + (cand - proposal) * 0.5;
      }
      if (!ok) break;  // refuse the step; resimulate at current proposal
      double moved = (cand - proposal).cwiseAbs().maxCoeff();
      proposal = cand;
      if (moved < settings.tol * 0.1) break;
    }
    return proposal;
  };

  // Monte Carlo noise in the update (sandwich H^-1 V H^-1 with V the
  // variance of the importance-sampled gradient).
  auto mc_noise = [&](const VectorXd& proposal, const VectorXd& theta_ref) {
    MatrixXd hess = MatrixXd::Zero(p, p);
    MatrixXd vmat = MatrixXd::Zero(p, p);
    for (int r = 0; r < R; ++r) {
      VectorXd lw = sims[r] * (proposal - theta_ref);
      double mw = lw.maxCoeff();
      VectorXd w = (lw.array() - mw).exp();
      w /= w.sum();
      VectorXd mean = sims[r].transpose() * w;
      MatrixXd cov = sims[r].transpose() * w.asDiagonal() * sims[r] - mean * mean.transpose();
      double ess = 1.0 / w.squaredNorm();
      hess += cov;
      vmat += cov / std::max(ess, 1.0);
    }
    final_info = hess;
    MatrixXd hinv = hess.ldlt().solve(MatrixXd::Identity(p, p));
    VectorXd se = (hinv * vmat * hinv.transpose()).diagonal().cwiseMax(0.0).cwiseSqrt();
    return se.maxCoeff();
  };

  for (int outer = 0; outer < settings.max_outer; ++outer) {
    simulate_batch(theta, outer, m);
    VectorXd theta_ref = theta;
    VectorXd proposal = inner_optimize(theta_ref);

    fit.iterations = outer + 1;
    double change = (proposal - theta_ref).cwiseAbs().maxCoeff();
    theta = proposal;

    // Once the movement between resimulation rounds drops below the Monte
    // Carlo noise floor, further rounds only chase noise; do one refinement
    // solve on a larger batch at the located optimum to cut that noise down.
    double floor = 3.0 * mc_noise(proposal, theta_ref);
    if (change < std::max(settings.tol, floor)) {
      simulate_batch(theta, settings.max_outer + outer, 4 * m);
      VectorXd refined = inner_optimize(theta);
      mc_noise(refined, theta);  // refresh final_info from the big batch
      theta = refined;
      fit.converged = true;
      break;
    }
  }

  fit.theta_hat = from_eigen(theta);
  if (final_info.size() > 0) {
    VectorXd se =
        final_info.ldlt().solve(MatrixXd::Identity(p, p)).diagonal().cwiseMax(0.0).cwiseSqrt();
    fit.std_err = from_eigen(se);
  } else {
    fit.std_err.assign(p, 0.0);
    fit.note = "mcmc_mle did not converge within max_outer iterations";
  }
  PlData d = build_pl_data(spec, series);
  fit.log_lik = pl_loglik(d, theta);  // pseudo-likelihood value at theta_hat
  return fit;
}

TransitionSeries cluster_series(const DynamicNetwork& net, const MembershipSeries& m,
                                int cluster) {
  TransitionSeries series;
  for (int t = 1; t <= net.T(); ++t) {
    auto views = cluster_views(net, m, t);
    const ClusterView& v = views[cluster - 1];
    if (static_cast<int>(v.remain.size()) >= 3)
      series.pairs.emplace_back(v.prev_adj, v.curr_adj);
  }
  return series;
}

std::vector<FitResult> pooled_cluster_fit(const StatisticSpec& spec, const DynamicNetwork& net,
                                          const MembershipSeries& m, FitMethod method,
                                          const McmcMleSettings& settings) {
  std::vector<FitResult> fits;
  for (int k = 1; k <= m.K; ++k) {
    TransitionSeries series = cluster_series(net, m, k);
    if (series.pairs.empty()) {
      FitResult err;
      err.method = "error";
      err.note = "cluster too small to fit";
      err.theta_hat.assign(spec.p(), 0.0);
      err.std_err.assign(spec.p(), 0.0);
      fits.push_back(std::move(err));
      continue;
    }
    try {
      FitResult start = mple(spec, series);
      if (method == FitMethod::Mple) {
        fits.push_back(std::move(start));
      } else {
        McmcMleSettings s = settings;
        s.seed = derive_seed(settings.seed, "cluster-fit", k);
        fits.push_back(mcmc_mle(spec, series, start.theta_hat, s));
      }
    } catch (const std::exception& e) {
      FitResult err;
      err.method = "error";
      err.note = e.what();
      err.theta_hat.assign(spec.p(), 0.0);
      err.std_err.assign(spec.p(), 0.0);
      fits.push_back(std::move(err));
    }
  }
  return fits;
}

}  // namespace thergm
