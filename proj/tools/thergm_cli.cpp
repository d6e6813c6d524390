// Command-line pipeline: simulate, cluster, fit-tergm, evaluate, predict,
// scenario. Exit codes: 0 ok, 2 config error, 3 data error, 4 numerical
// failure.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "thergm/dlsm.hpp"
#include "thergm/dsbm.hpp"
#include "thergm/eval.hpp"
#include "thergm/io.hpp"
#include "thergm/tergm.hpp"

using json = nlohmann::json;
using namespace thergm;

namespace {

constexpr const char* kVersion = "0.1.0";

json config_to_json(const ThergmConfig& cfg) {
  json j;
  j["k"] = cfg.K;
  j["t"] = cfg.T;
  j["n_per_cluster"] = cfg.n_per_cluster;
  j["spec"] = cfg.spec.to_string();
  j["theta"] = cfg.theta;
  j["b"] = cfg.B.B;
  j["p_within"] = cfg.p_within_init;
  j["p_between"] = cfg.p_between;
  j["m_attach"] = cfg.m_attach;
  j["gibbs_sweeps"] = cfg.gibbs_sweeps;
  j["seed"] = cfg.seed;
  return j;
}

void write_manifest(const std::string& path, const std::string& command, const json& config,
                    std::uint64_t seed, const std::vector<std::string>& artifacts,
                    double wall_seconds) {
  json j;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["artifacts"] = artifacts;
  j["wall_seconds"] = wall_seconds;
  j["version"] = kVersion;
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

json fit_to_json(const FitResult& fit, const StatisticSpec& spec) {
  json j;
  json terms = json::array();
  for (StatTerm t : spec.terms) terms.push_back(term_name(t));
  j["terms"] = terms;
  j["theta_hat"] = fit.theta_hat;
  j["std_err"] = fit.std_err;
  j["method"] = fit.method;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["log_lik"] = fit.log_lik;
  j["naive_std_err"] = fit.naive_std_err;
  if (!fit.note.empty()) j["note"] = fit.note;
  return j;
}

json gof_table_to_json(const GofTable& tab) {
  json j;
  j["bins"] = tab.bins;
  j["observed"] = tab.observed;
  j["q05"] = tab.q05;
  j["q50"] = tab.q50;
  j["q95"] = tab.q95;
  j["coverage"] = tab.coverage;
  j["discrepancy"] = tab.discrepancy;
  return j;
}

ThergmBundle bundle_from_json(const json& j, const MembershipSeries& members) {
  ThergmBundle b;
  b.spec = StatisticSpec::parse(j.at("spec").get<std::string>());
  b.theta = j.at("theta").get<std::vector<std::vector<double>>>();
  b.p_between = j.at("p_between").get<double>();
  b.B_hat.B = j.at("b_hat").get<std::vector<std::vector<double>>>();
  if (j.contains("gibbs_sweeps")) b.gibbs_sweeps = j["gibbs_sweeps"].get<int>();
  if (j.contains("m_attach")) b.m_attach = j["m_attach"].get<int>();
  b.members = members;
  return b;
}

struct ScenarioPreset {
  std::string name;
  double b_diag;
  double p_within;
  double p_between;
};

// The 2x2 grid of transition speed x density gap; values are assumptions
// documented in the README.
const std::vector<ScenarioPreset> kPresets = {
    {"slow_easy", 0.95, 0.15, 0.01},
    {"slow_hard", 0.95, 0.10, 0.03},
    {"quick_easy", 0.80, 0.15, 0.01},
    {"quick_hard", 0.80, 0.10, 0.03},
};

ThergmConfig preset_config(const ScenarioPreset& p, int n_per_cluster, std::uint64_t seed) {
  std::map<std::string, std::string> kv;
  kv["k"] = "3";
  kv["t"] = "5";
  kv["n_per_cluster"] = std::to_string(n_per_cluster);
  kv["b_diag"] = std::to_string(p.b_diag);
  kv["p_within"] = std::to_string(p.p_within);
  kv["p_between"] = std::to_string(p.p_between);
  kv["theta_triangles"] = "0.05";
  kv["seed"] = std::to_string(seed);
  return config_from_kv(kv);
}

int run_simulate(const std::string& config_path,
                 const std::map<std::string, std::string>& overrides,
                 const std::string& out_prefix) {
  auto start = std::chrono::steady_clock::now();
  std::map<std::string, std::string> kv;
  if (!config_path.empty()) kv = read_config(config_path);
  for (const auto& [k, v] : overrides) kv[k] = v;
  ThergmConfig cfg = config_from_kv(kv);
  cfg.validate();

  SimulationOutput out = simulate(cfg);
  std::string edges = out_prefix + "_edges.csv";
  std::string truth = out_prefix + "_truth.csv";
  std::string manifest = out_prefix + "_manifest.json";
  write_edges_csv(edges, out.net);
  write_members_csv(truth, out.truth);

  json cfg_json = config_to_json(cfg);
  json trace = json::array();
  for (const auto& s : out.trace) trace.push_back(s);
  cfg_json["trace"] = trace;
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(manifest, "simulate", cfg_json, cfg.seed, {edges, truth}, wall);
  std::cout << "wrote " << edges << ", " << truth << ", " << manifest << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal hierarchical ERGM simulation and inference toolkit"};
  app.require_subcommand(1);

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "Generate a longitudinal network");
  std::string sim_config, sim_out = "run";
  std::vector<std::string> sim_set;
  sim->add_option("--config", sim_config, "flat key=value config file");
  sim->add_option("--out", sim_out, "output prefix");
  sim->add_option("--set", sim_set, "key=value override (repeatable)");
  std::string sim_seed, sim_k;
  sim->add_option("--seed", sim_seed, "master seed (overrides config)");
  sim->add_option("--k", sim_k, "cluster count (overrides config)");

  // ---- cluster ----
  auto* clu = app.add_subcommand("cluster", "Estimate memberships");
  std::string clu_net, clu_model = "dlsm", clu_out = "members.csv";
  int clu_k = 3, clu_dim = 2, clu_burnin = 600, clu_samples = 600;
  double clu_smooth = 0.0;
  std::uint64_t clu_seed = 1;
  int clu_nodes = -1, clu_times = -1;
  clu->add_option("--net", clu_net, "edge-list CSV")->required();
  clu->add_option("--model", clu_model, "dlsm or dsbm");
  clu->add_option("--k", clu_k, "number of clusters");
  clu->add_option("--dim", clu_dim, "latent dimension (dlsm)");
  clu->add_option("--burnin", clu_burnin, "burn-in sweeps (dlsm)");
  clu->add_option("--samples", clu_samples, "retained samples (dlsm)");
  clu->add_option("--smooth", clu_smooth, "embedding smoothing weight (dsbm)");
  clu->add_option("--seed", clu_seed, "master seed");
  clu->add_option("--out", clu_out, "membership CSV output");
  clu->add_option("--nodes", clu_nodes, "node count override");
  clu->add_option("--times", clu_times, "time point count override");

  // ---- fit-tergm ----
  auto* fit = app.add_subcommand("fit-tergm", "Per-cluster TERGM estimation");
  std::string fit_net, fit_members, fit_spec = "edges,triangles,stability";
  std::string fit_out = "bundle.json", fit_method = "mcmc";
  std::uint64_t fit_seed = 1;
  int fit_nodes = -1, fit_times = -1, fit_nsim = 200;
  fit->add_option("--net", fit_net, "edge-list CSV")->required();
  fit->add_option("--members", fit_members, "membership CSV")->required();
  fit->add_option("--spec", fit_spec, "statistic terms");
  fit->add_option("--method", fit_method, "mcmc or mple");
  fit->add_option("--seed", fit_seed, "master seed");
  fit->add_option("--out", fit_out, "bundle JSON output");
  fit->add_option("--nodes", fit_nodes, "node count override");
  fit->add_option("--times", fit_times, "time point count override");
  fit->add_option("--nsim", fit_nsim, "simulated networks per transition (mcmc)");

  // ---- evaluate ----
  auto* ev = app.add_subcommand("evaluate", "Mis-clustering, transition, GoF, AUC");
  std::string ev_truth, ev_est, ev_net, ev_bundle, ev_out = "report";
  int ev_gof_sims = 100, ev_nodes = -1, ev_times = -1;
  std::uint64_t ev_seed = 1;
  ev->add_option("--truth", ev_truth, "true membership CSV");
  ev->add_option("--est", ev_est, "estimated membership CSV");
  ev->add_option("--net", ev_net, "edge-list CSV");
  ev->add_option("--bundle", ev_bundle, "fitted bundle JSON");
  ev->add_option("--out", ev_out, "report prefix");
  ev->add_option("--gof-sims", ev_gof_sims, "GoF forward replicates");
  ev->add_option("--seed", ev_seed, "master seed");
  ev->add_option("--nodes", ev_nodes, "node count override");
  ev->add_option("--times", ev_times, "time point count override");

  // ---- predict ----
  auto* pr = app.add_subcommand("predict", "One-step link prediction scores");
  std::string pr_net, pr_members, pr_bundle, pr_out = "scores.csv";
  int pr_nodes = -1, pr_times = -1;
  pr->add_option("--net", pr_net, "edge-list CSV")->required();
  pr->add_option("--members", pr_members, "membership CSV")->required();
  pr->add_option("--bundle", pr_bundle, "fitted bundle JSON")->required();
  pr->add_option("--out", pr_out, "dyad probability CSV");
  pr->add_option("--nodes", pr_nodes, "node count override");
  pr->add_option("--times", pr_times, "time point count override");

  // ---- scenario ----
  auto* sc = app.add_subcommand("scenario", "Run a named preset batch");
  std::string sc_name = "slow_easy", sc_out = "scenario";
  int sc_reps = 5, sc_n = 50;
  std::uint64_t sc_seed = 1;
  sc->add_option("--name", sc_name, "slow_easy|slow_hard|quick_easy|quick_hard");
  sc->add_option("--reps", sc_reps, "replicates");
  sc->add_option("--n", sc_n, "nodes per cluster");
  sc->add_option("--seed", sc_seed, "master seed");
  sc->add_option("--out", sc_out, "output prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      std::map<std::string, std::string> overrides;
      for (const auto& kvs : sim_set) {
        size_t eq = kvs.find('=');
        if (eq == std::string::npos) {
          std::cerr << "bad --set (expected key=value): " << kvs << '\n';
          return 2;
        }
        overrides[kvs.substr(0, eq)] = kvs.substr(eq + 1);
      }
      if (!sim_seed.empty()) overrides["seed"] = sim_seed;
      if (!sim_k.empty()) overrides["k"] = sim_k;
      try {
        return run_simulate(sim_config, overrides, sim_out);
      } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
      }
    }

    if (clu->parsed()) {
      auto start = std::chrono::steady_clock::now();
      DynamicNetwork net = read_edges_csv(clu_net, clu_nodes, clu_times);
      if (clu_k > net.n()) {
        std::cerr << "config error: K exceeds node count\n";
        return 2;
      }
      MembershipSeries est;
      json diag;
      if (clu_model == "dlsm") {
        McmcSettings s;
        s.burn_in = clu_burnin;
        s.samples = clu_samples;
        s.seed = clu_seed;
        auto [members, d] = mcmc_fit(net, clu_k, clu_dim, s);
        est = std::move(members);
        diag["accept_z"] = d.accept_z;
        diag["accept_beta"] = d.accept_beta;
        diag["beta0"] = d.beta0;
        diag["beta1"] = d.beta1;
        diag["retained"] = d.retained;
        diag["z_final"] = d.z_final;
      } else if (clu_model == "dsbm") {
        SpectralSettings s;
        s.K = clu_k;
        s.smooth = clu_smooth;
        s.seed = clu_seed;
        est = fit_dsbm(net, s);
        diag["model"] = "dsbm";
      } else {
        std::cerr << "config error: unknown model " << clu_model << '\n';
        return 2;
      }
      write_members_csv(clu_out, est);
      diag["model"] = clu_model;
      diag["k"] = clu_k;
      diag["seed"] = clu_seed;
      std::string diag_path = clu_out + ".diag.json";
      std::ofstream(diag_path) << diag.dump(2) << '\n';
      json cfg;
      cfg["model"] = clu_model;
      cfg["k"] = clu_k;
      cfg["dim"] = clu_dim;
      cfg["burnin"] = clu_burnin;
      cfg["samples"] = clu_samples;
      cfg["smooth"] = clu_smooth;
      cfg["net"] = clu_net;
      double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_manifest(clu_out + ".manifest.json", "cluster", cfg, clu_seed,
                     {clu_out, diag_path}, wall);
      std::cout << "wrote " << clu_out << '\n';
      return 0;
    }

    if (fit->parsed()) {
      auto start = std::chrono::steady_clock::now();
      DynamicNetwork net = read_edges_csv(fit_net, fit_nodes, fit_times);
      MembershipSeries members = read_members_csv(fit_members);
      if (members.n() != net.n() || members.T() != net.T()) {
        std::cerr << "data error: membership dimensions do not match network\n";
        return 3;
      }
      StatisticSpec spec = StatisticSpec::parse(fit_spec);
      McmcMleSettings ms;
      ms.seed = fit_seed;
      ms.n_sim = fit_nsim;
      FitMethod method = fit_method == "mple" ? FitMethod::Mple : FitMethod::McmcMle;
      std::vector<FitResult> fits = pooled_cluster_fit(spec, net, members, method, ms);

      TransitionEstimate bhat = estimate_transition(members);
      double cross_ties = 0.0, cross_dyads = 0.0;
      for (int t = 0; t <= net.T(); ++t)
        for (int i = 0; i < net.n(); ++i)
          for (int j = i + 1; j < net.n(); ++j)
            if (members.at(t, i) != members.at(t, j)) {
              cross_dyads += 1.0;
              if (net.slices[t].has(i, j)) cross_ties += 1.0;
            }

      json j;
      j["spec"] = spec.to_string();
      json jf = json::array();
      std::vector<std::vector<double>> theta;
      for (const auto& f : fits) {
        jf.push_back(fit_to_json(f, spec));
        theta.push_back(f.method == "error" ? std::vector<double>{} : f.theta_hat);
      }
      j["fits"] = jf;
      j["theta"] = theta;
      j["b_hat"] = bhat.B.B;
      j["p_between"] = cross_dyads > 0 ? cross_ties / cross_dyads : 0.0;
      j["members_file"] = fit_members;
      j["seed"] = fit_seed;
      std::ofstream(fit_out) << j.dump(2) << '\n';
      json cfg;
      cfg["spec"] = fit_spec;
      cfg["method"] = fit_method;
      cfg["net"] = fit_net;
      cfg["members"] = fit_members;
      double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_manifest(fit_out + ".manifest.json", "fit-tergm", cfg, fit_seed, {fit_out}, wall);
      std::cout << "wrote " << fit_out << '\n';
      return 0;
    }

    if (ev->parsed()) {
      auto start = std::chrono::steady_clock::now();
      json report;
      std::vector<std::string> artifacts;
      MembershipSeries est;
      bool have_est = false;
      if (!ev_est.empty()) {
        est = read_members_csv(ev_est);
        have_est = true;
        TransitionEstimate te = estimate_transition(est);
        report["b_hat"] = te.B.B;
      }
      if (!ev_truth.empty() && have_est) {
        MembershipSeries truth = read_members_csv(ev_truth);
        if (truth.K > est.K) est.K = truth.K;
        else if (est.K > truth.K) truth.K = est.K;
        MisclusteringReport mis = misclustering(est, truth);
        report["misclustering_per_time"] = mis.per_time;
        report["misclustering_average"] = mis.average;
        report["alignment"] = mis.permutations;
      }
      if (!ev_net.empty() && !ev_bundle.empty() && have_est) {
        DynamicNetwork net = read_edges_csv(ev_net, ev_nodes, ev_times);
        json jbundle;
        std::ifstream(ev_bundle) >> jbundle;
        ThergmBundle bundle = bundle_from_json(jbundle, est);
        GofReport gof = gof_thergm(net, bundle, ev_gof_sims, ev_seed);
        report["gof"]["degree"] = gof_table_to_json(gof.degree);
        report["gof"]["geodesic"] = gof_table_to_json(gof.geodesic);

        // in-sample AUC of the final observed slice scored from T-1
        if (net.T() >= 1) {
          DynamicNetwork head = net;
          head.slices.pop_back();
          auto proba =
              predict_proba(bundle, head.slices.back(), est.labels[net.T() - 1]);
          try {
            report["auc_final_transition"] = auc(proba, net.slices.back());
          } catch (const std::exception&) {
            report["auc_final_transition"] = nullptr;
          }
        }

        // tidy CSV of the GoF tables
        std::string tidy = ev_out + "_gof.csv";
        std::ofstream t(tidy);
        t << "table,bin,observed,q05,q50,q95\n";
        for (size_t i = 0; i < gof.degree.bins.size(); ++i)
          t << "degree," << gof.degree.bins[i] << ',' << gof.degree.observed[i] << ','
            << gof.degree.q05[i] << ',' << gof.degree.q50[i] << ',' << gof.degree.q95[i]
            << '\n';
        for (size_t i = 0; i < gof.geodesic.bins.size(); ++i)
          t << "geodesic," << gof.geodesic.bins[i] << ',' << gof.geodesic.observed[i] << ','
            << gof.geodesic.q05[i] << ',' << gof.geodesic.q50[i] << ','
            << gof.geodesic.q95[i] << '\n';
        artifacts.push_back(tidy);
      }
      std::string report_path = ev_out + ".json";
      std::ofstream(report_path) << report.dump(2) << '\n';
      artifacts.push_back(report_path);
      json cfg;
      cfg["truth"] = ev_truth;
      cfg["est"] = ev_est;
      cfg["net"] = ev_net;
      cfg["bundle"] = ev_bundle;
      double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_manifest(ev_out + ".manifest.json", "evaluate", cfg, ev_seed, artifacts, wall);
      std::cout << "wrote " << report_path << '\n';
      return 0;
    }

    if (pr->parsed()) {
      auto start = std::chrono::steady_clock::now();
      DynamicNetwork net = read_edges_csv(pr_net, pr_nodes, pr_times);
      MembershipSeries members = read_members_csv(pr_members);
      json jbundle;
      std::ifstream(pr_bundle) >> jbundle;
      ThergmBundle bundle = bundle_from_json(jbundle, members);
      auto proba = predict_proba(bundle, net.slices.back(), members.labels[members.T()]);
      std::ofstream out(pr_out);
      out << "source,target,probability\n";
      for (int i = 0; i < net.n(); ++i)
        for (int j = i + 1; j < net.n(); ++j)
          out << i << ',' << j << ',' << proba[i][j] << '\n';
      json cfg;
      cfg["net"] = pr_net;
      cfg["members"] = pr_members;
      cfg["bundle"] = pr_bundle;
      double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_manifest(pr_out + ".manifest.json", "predict", cfg, 0, {pr_out}, wall);
      std::cout << "wrote " << pr_out << '\n';
      return 0;
    }

    if (sc->parsed()) {
      auto start = std::chrono::steady_clock::now();
      const ScenarioPreset* preset = nullptr;
      for (const auto& p : kPresets)
        if (p.name == sc_name) preset = &p;
      if (!preset) {
        std::cerr << "config error: unknown scenario " << sc_name << '\n';
        return 2;
      }
      std::string tidy = sc_out + "_misclustering.csv";
      std::ofstream t(tidy);
      t << "scenario,replicate,model,time,misclustering\n";
      for (int rep = 0; rep < sc_reps; ++rep) {
        ThergmConfig cfg = preset_config(*preset, sc_n, derive_seed(sc_seed, "scenario", rep));
        SimulationOutput out = simulate(cfg);
        McmcSettings ds;
        ds.seed = derive_seed(sc_seed, "scenario-dlsm", rep);
        ds.burn_in = 300;
        ds.samples = 300;
        auto [dlsm_est, diag] = mcmc_fit(out.net, cfg.K, 2, ds);
        SpectralSettings ss;
        ss.K = cfg.K;
        ss.seed = derive_seed(sc_seed, "scenario-dsbm", rep);
        MembershipSeries dsbm_est = fit_dsbm(out.net, ss);
        MisclusteringReport m1 = misclustering(dlsm_est, out.truth);
        MisclusteringReport m2 = misclustering(dsbm_est, out.truth);
        for (size_t tt = 0; tt < m1.per_time.size(); ++tt) {
          t << sc_name << ',' << rep << ",dlsm," << tt << ',' << m1.per_time[tt] << '\n';
          t << sc_name << ',' << rep << ",dsbm," << tt << ',' << m2.per_time[tt] << '\n';
        }
      }
      json cfg;
      cfg["name"] = sc_name;
      cfg["reps"] = sc_reps;
      cfg["n_per_cluster"] = sc_n;
      double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_manifest(sc_out + ".manifest.json", "scenario", cfg, sc_seed, {tidy}, wall);
      std::cout << "wrote " << tidy << '\n';
      return 0;
    }
  } catch (const std::runtime_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
