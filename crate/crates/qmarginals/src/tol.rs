//! Numerical tolerances used throughout the crate.
//!
//! Every threshold is pinned here so that the library, the CLI, and the
//! test suites agree on what "equal" means.

/// Pure states must satisfy |Σ|a|² − 1| below this bound. Never renormalized.
pub const NORM_TOL: f64 = 1e-10;

/// State files are rejected when the stored amplitudes deviate from unit
/// norm by more than this (looser than [`NORM_TOL`] to survive JSON round
/// trips of decimal literals).
pub const FILE_NORM_TOL: f64 = 1e-8;

/// Max-entry Hermiticity deviation allowed in a density matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Allowed deviation of a density-matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-10;

/// Density-matrix eigenvalues may undershoot zero by this much.
pub const PSD_TOL: f64 = 1e-12;

/// Window around λ = 1/2 (and λ = 0) treated as exactly degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Smallest eigenvector component used to anchor the phase convention.
pub const PHASE_ANCHOR_MIN: f64 = 1e-8;

/// Default one-sided tolerance for the polygon feasibility check.
pub const DEFAULT_POLYGON_EPS: f64 = 1e-9;

/// Spectrum entries this far above 1/2 (or below 0) are clamped; anything
/// further out is rejected.
pub const LAMBDA_CLAMP_TOL: f64 = 1e-12;

/// Negative radicands within this window are clamped to zero during
/// synthesis; larger violations mean the input was genuinely infeasible.
pub const RADICAND_CLAMP: f64 = 1e-12;

/// Slack allowed on each inequality of the necessity certificate chain.
pub const CHAIN_SLACK_TOL: f64 = 1e-9;

/// Max-entry deviation allowed between two routes to the same marginal.
pub const CONSISTENCY_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which the Jacobi eigensolver stops.
pub const JACOBI_TOL: f64 = 1e-12;

/// Per-entry agreement required between a requested spectrum and the one
/// recomputed from the synthesized state.
pub const ACHIEVED_TOL: f64 = 1e-10;

/// Max-entry agreement required between a target density matrix and the
/// corresponding marginal of a synthesized state.
pub const DENSITY_TARGET_TOL: f64 = 1e-9;

/// Max-entry deviation of U†U from I tolerated when applying a unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Default qubit cap: 2^24 complex doubles is ~268 MB, the largest state
/// this crate is willing to allocate without being told otherwise.
pub const DEFAULT_QUBIT_CAP: usize = 24;
