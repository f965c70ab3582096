//! Crypto-Hermitian structure of discrete models.
//!
//! A non-Hermitian `H` with real spectrum becomes self-adjoint in the inner
//! product `<phi|Theta|psi>` once a positive metric `Theta` with
//! `H^dagger Theta = Theta H` is found. This module provides the four-site
//! toy chain and its explicit metric family, a general solver for the metric
//! space, the spectral-expansion construction, and a finite-difference
//! version of the continuous star graph used to cross-check the secular
//! equation.

mod fd;
mod hamiltonian;
mod metric;

pub use fd::{convergence_study, ConvergenceStudy, FdStarOperator, TargetConvergence, CENTER_NODE_TOL, FD_MIN_POINTS, REFINE_TOL};
pub use hamiltonian::{build_h4, metric_component, spectrum_reality, DiscreteHamiltonian, SpectrumClass, SpectrumReality};
pub use metric::{
    assemble_metric, biorthogonal_basis, classify_metric, crypto_residual, metric_inner_product, solve_metric_space,
    spectral_metric, Biorthogonal, MetricCandidate, MetricSpace, Projection, METRIC_DIM_CAP, METRIC_TOL, SPECTRAL_TOL,
};
