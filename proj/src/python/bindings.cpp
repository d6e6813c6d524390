#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thergm/dlsm.hpp"
#include "thergm/dsbm.hpp"
#include "thergm/eval.hpp"
#include "thergm/generator.hpp"
#include "thergm/io.hpp"
#include "thergm/tergm.hpp"

namespace py = pybind11;
using namespace thergm;

namespace {

// Adjacency <-> list-of-edge-tuples keeps the Python surface simple.
Adjacency adjacency_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Adjacency y(n);
  for (const auto& [i, j] : edges) y.set(i, j, true);
  return y;
}

std::vector<std::pair<int, int>> edges_of(const Adjacency& y) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < y.n(); ++i)
    for (int j = i + 1; j < y.n(); ++j)
      if (y.has(i, j)) out.emplace_back(i, j);
  return out;
}

DynamicNetwork net_from_slices(int n, const std::vector<std::vector<std::pair<int, int>>>& slices) {
  DynamicNetwork net;
  for (const auto& s : slices) net.slices.push_back(adjacency_from_edges(n, s));
  return net;
}

MembershipSeries members_from_labels(int K, const std::vector<std::vector<int>>& labels) {
  MembershipSeries m;
  m.K = K;
  m.labels = labels;
  m.validate();
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Temporal hierarchical ERGM toolkit: simulation, clustering, fitting, evaluation";

  py::class_<Adjacency>(mod, "Adjacency")
      .def(py::init<int>(), py::arg("n"))
      .def_static("from_edges", &adjacency_from_edges, py::arg("n"), py::arg("edges"))
      .def("has", &Adjacency::has)
      .def("set", &Adjacency::set)
      .def("edge_count", &Adjacency::edge_count)
      .def("edges", &edges_of)
      .def_property_readonly("n", &Adjacency::n);

  py::class_<DynamicNetwork>(mod, "DynamicNetwork")
      .def_static("from_slices", &net_from_slices, py::arg("n"), py::arg("slices"))
      .def_readonly("slices", &DynamicNetwork::slices)
      .def_property_readonly("n", &DynamicNetwork::n)
      .def_property_readonly("T", &DynamicNetwork::T);

  py::class_<MembershipSeries>(mod, "MembershipSeries")
      .def_static("from_labels", &members_from_labels, py::arg("K"), py::arg("labels"))
      .def_readonly("K", &MembershipSeries::K)
      .def_readonly("labels", &MembershipSeries::labels);

  py::class_<TransitionMatrix>(mod, "TransitionMatrix")
      .def_static("diagonal", &TransitionMatrix::diagonal, py::arg("K"), py::arg("stay"))
      .def_readonly("B", &TransitionMatrix::B)
      .def("at", &TransitionMatrix::at);

  py::class_<StatisticSpec>(mod, "StatisticSpec")
      .def_static("parse", &StatisticSpec::parse)
      .def("p", &StatisticSpec::p);

  py::class_<ThergmConfig>(mod, "ThergmConfig")
      .def(py::init<>())
      .def_readwrite("K", &ThergmConfig::K)
      .def_readwrite("n_per_cluster", &ThergmConfig::n_per_cluster)
      .def_readwrite("T", &ThergmConfig::T)
      .def_readwrite("spec", &ThergmConfig::spec)
      .def_readwrite("theta", &ThergmConfig::theta)
      .def_readwrite("B", &ThergmConfig::B)
      .def_readwrite("p_within_init", &ThergmConfig::p_within_init)
      .def_readwrite("p_between", &ThergmConfig::p_between)
      .def_readwrite("m_attach", &ThergmConfig::m_attach)
      .def_readwrite("gibbs_sweeps", &ThergmConfig::gibbs_sweeps)
      .def_readwrite("seed", &ThergmConfig::seed);

  py::class_<SimulationOutput>(mod, "SimulationOutput")
      .def_readonly("net", &SimulationOutput::net)
      .def_readonly("truth", &SimulationOutput::truth)
      .def_readonly("trace", &SimulationOutput::trace);

  mod.def("simulate", &simulate, py::arg("config"));
  mod.def("stationary_edge_stability", &stationary_edge_stability, py::arg("density"),
          py::arg("dissolve"));

  py::class_<FitResult>(mod, "FitResult")
      .def_readonly("theta_hat", &FitResult::theta_hat)
      .def_readonly("std_err", &FitResult::std_err)
      .def_readonly("method", &FitResult::method)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("log_lik", &FitResult::log_lik)
      .def_readonly("note", &FitResult::note);

  py::class_<TransitionSeries>(mod, "TransitionSeries")
      .def(py::init<>())
      .def("add", [](TransitionSeries& s, const Adjacency& prev,
                     const Adjacency& curr) { s.pairs.emplace_back(prev, curr); });

  py::class_<McmcMleSettings>(mod, "McmcMleSettings")
      .def(py::init<>())
      .def_readwrite("n_sim", &McmcMleSettings::n_sim)
      .def_readwrite("sim_sweeps", &McmcMleSettings::sim_sweeps)
      .def_readwrite("max_outer", &McmcMleSettings::max_outer)
      .def_readwrite("seed", &McmcMleSettings::seed);

  mod.def("mple", &mple, py::arg("spec"), py::arg("series"));
  mod.def("exact_mle", &exact_mle, py::arg("spec"), py::arg("series"));
  mod.def("mcmc_mle", &mcmc_mle, py::arg("spec"), py::arg("series"), py::arg("theta0"),
          py::arg("settings") = McmcMleSettings{});
  mod.def("cluster_series", &cluster_series, py::arg("net"), py::arg("members"),
          py::arg("cluster"));

  py::class_<SpectralSettings>(mod, "SpectralSettings")
      .def(py::init<>())
      .def_readwrite("K", &SpectralSettings::K)
      .def_readwrite("tau", &SpectralSettings::tau)
      .def_readwrite("smooth", &SpectralSettings::smooth)
      .def_readwrite("seed", &SpectralSettings::seed);

  mod.def("fit_dsbm", &fit_dsbm, py::arg("net"), py::arg("settings"));

  py::class_<McmcSettings>(mod, "McmcSettings")
      .def(py::init<>())
      .def_readwrite("burn_in", &McmcSettings::burn_in)
      .def_readwrite("samples", &McmcSettings::samples)
      .def_readwrite("thin", &McmcSettings::thin)
      .def_readwrite("step_z", &McmcSettings::step_z)
      .def_readwrite("step_beta", &McmcSettings::step_beta)
      .def_readwrite("rho", &McmcSettings::rho)
      .def_readwrite("seed", &McmcSettings::seed);

  py::class_<DlsmDiagnostics>(mod, "DlsmDiagnostics")
      .def_readonly("accept_z", &DlsmDiagnostics::accept_z)
      .def_readonly("accept_beta", &DlsmDiagnostics::accept_beta)
      .def_readonly("beta0", &DlsmDiagnostics::beta0)
      .def_readonly("beta1", &DlsmDiagnostics::beta1)
      .def_readonly("z_final", &DlsmDiagnostics::z_final)
      .def_readonly("proba_final", &DlsmDiagnostics::proba_final)
      .def_readonly("retained", &DlsmDiagnostics::retained);

  mod.def("fit_dlsm", &mcmc_fit, py::arg("net"), py::arg("K"), py::arg("d"),
          py::arg("settings") = McmcSettings{});

  py::class_<MisclusteringReport>(mod, "MisclusteringReport")
      .def_readonly("per_time", &MisclusteringReport::per_time)
      .def_readonly("average", &MisclusteringReport::average);

  mod.def("misclustering", &misclustering, py::arg("m_hat"), py::arg("m_true"));
  mod.def("align_labels", &align_labels, py::arg("m_hat"), py::arg("m_ref"), py::arg("K"));
  mod.def("apply_permutation", &apply_permutation, py::arg("labels"), py::arg("perm"));
  mod.def(
      "estimate_transition",
      [](const MembershipSeries& m) { return estimate_transition(m).B; },
      py::arg("members"));
  mod.def("auc", &auc, py::arg("scores"), py::arg("y_true"));

  py::class_<ThergmBundle>(mod, "ThergmBundle")
      .def(py::init<>())
      .def_readwrite("spec", &ThergmBundle::spec)
      .def_readwrite("theta", &ThergmBundle::theta)
      .def_readwrite("B_hat", &ThergmBundle::B_hat)
      .def_readwrite("p_between", &ThergmBundle::p_between)
      .def_readwrite("members", &ThergmBundle::members)
      .def_readwrite("gibbs_sweeps", &ThergmBundle::gibbs_sweeps)
      .def_readwrite("m_attach", &ThergmBundle::m_attach);

  py::class_<GofTable>(mod, "GofTable")
      .def_readonly("bins", &GofTable::bins)
      .def_readonly("observed", &GofTable::observed)
      .def_readonly("q05", &GofTable::q05)
      .def_readonly("q50", &GofTable::q50)
      .def_readonly("q95", &GofTable::q95)
      .def_readonly("coverage", &GofTable::coverage)
      .def_readonly("discrepancy", &GofTable::discrepancy);

  py::class_<GofReport>(mod, "GofReport")
      .def_readonly("degree", &GofReport::degree)
      .def_readonly("geodesic", &GofReport::geodesic);

  mod.def("gof_thergm", &gof_thergm, py::arg("net_obs"), py::arg("bundle"), py::arg("n_sims"),
          py::arg("seed"));
  mod.def("predict_proba", &predict_proba, py::arg("bundle"), py::arg("y_T"), py::arg("m_T"));

  mod.def("read_edges_csv", &read_edges_csv, py::arg("path"), py::arg("n_nodes") = -1,
          py::arg("n_times") = -1);
  mod.def("write_edges_csv", &write_edges_csv, py::arg("path"), py::arg("net"));
  mod.def("read_members_csv", &read_members_csv, py::arg("path"));
  mod.def("write_members_csv", &write_members_csv, py::arg("path"), py::arg("members"));

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
  mod.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  mod.attr("__version__") = "dev";
#endif
}
