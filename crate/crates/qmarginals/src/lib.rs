//! Feasibility and synthesis for one-qubit marginals of pure n-qubit
//! states.
//!
//! A list of smaller marginal eigenvalues is realizable by a pure state
//! exactly when each entry is at most the sum of the others (the polygon
//! inequalities). This crate decides that feasibility, constructs an
//! explicit state for any feasible list (or for full one-qubit density
//! targets), verifies the supporting inequality chain numerically on
//! concrete states, and runs seeded optimization experiments for the
//! cases the exact theory leaves open.
//!
//! - [`statevec`]: dense pure states, partial traces, Schmidt splits.
//! - [`spectra`]: spectra, the polygon check, feasible sampling.
//! - [`synthesis`]: recursive construction of realizing states.
//! - [`certify`]: inequality-chain certificates and marginal consistency.
//! - [`explorer`]: four-qubit pair-mixedness search and qudit checks.
//! - [`io`]: JSON file formats shared with the CLI.

pub mod certify;
pub mod eigen;
pub mod error;
pub mod explorer;
pub mod io;
pub mod spectra;
pub mod statevec;
pub mod synthesis;
pub mod tol;

pub use error::{Error, Result};
pub use spectra::{check_polygon, sample_feasible_spectrum, FeasibilityReport, Spectrum};
pub use statevec::{DensityMatrix, PureState, QubitDensity, SchmidtSplit};
pub use synthesis::{synth_base3, synth_density, synth_small, synth_spectrum, SynthesisResult};
