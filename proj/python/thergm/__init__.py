"""Temporal hierarchical ERGM toolkit.

Simulation, two-stage fitting (latent-space or spectral clustering followed
by per-cluster temporal ERGM estimation), and evaluation metrics for
dynamic networks with evolving community structure.
"""

from ._core import (  # noqa: F401
    Adjacency,
    DlsmDiagnostics,
    DynamicNetwork,
    FitResult,
    GofReport,
    GofTable,
    McmcMleSettings,
    McmcSettings,
    MembershipSeries,
    MisclusteringReport,
    SimulationOutput,
    SpectralSettings,
    StatisticSpec,
    ThergmBundle,
    ThergmConfig,
    TransitionMatrix,
    TransitionSeries,
    __version__,
    align_labels,
    apply_permutation,
    auc,
    cluster_series,
    estimate_transition,
    exact_mle,
    fit_dlsm,
    fit_dsbm,
    gof_thergm,
    mcmc_mle,
    misclustering,
    mple,
    predict_proba,
    read_edges_csv,
    read_members_csv,
    simulate,
    stationary_edge_stability,
    write_edges_csv,
    write_members_csv,
)
