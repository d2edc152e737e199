//! One-qubit marginal spectra and the polygon feasibility test: each
//! smaller eigenvalue may be at most the sum of all the others.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol;

/// Per-qubit smaller eigenvalues, each in [0, 1/2].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    lambdas: Vec<f64>,
}

impl Spectrum {
    /// Validate a list of smaller eigenvalues. Values straying outside
    /// [0, 1/2] by at most [`tol::LAMBDA_CLAMP_TOL`] are clamped; anything
    /// further out is rejected rather than silently reinterpreted.
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::WrongSize {
                expected: 1,
                got: 0,
            });
        }
        let mut clean = Vec::with_capacity(lambdas.len());
        for (i, &l) in lambdas.iter().enumerate() {
            if !l.is_finite()
                || !(-tol::LAMBDA_CLAMP_TOL..=0.5 + tol::LAMBDA_CLAMP_TOL).contains(&l)
            {
                return Err(Error::OutOfRange {
                    index: i + 1,
                    value: l,
                });
            }
            clean.push(l.clamp(0.0, 0.5));
        }
        Ok(Self { lambdas: clean })
    }

    pub(crate) fn from_valid(lambdas: Vec<f64>) -> Self {
        debug_assert!(lambdas.iter().all(|&l| (0.0..=0.5).contains(&l)));
        Self { lambdas }
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }
}

/// Outcome of the polygon feasibility check.
#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Per-qubit slack (sum of the other lambdas) - lambda_k.
    pub slacks: Vec<f64>,
    /// 1-based index of the qubit with the smallest slack.
    pub worst_index: usize,
    pub min_slack: f64,
    /// Within eps of the feasibility boundary on either side.
    pub boundary: bool,
    pub eps: f64,
}

/// Evaluate all n polygon inequalities. `eps` is one-sided: a minimum
/// slack of at least `-eps` still counts as feasible, so exact boundary
/// spectra pass cleanly. The `boundary` flag lets callers be stricter.
pub fn check_polygon(spec: &Spectrum, eps: f64) -> FeasibilityReport {
    let total: f64 = spec.lambdas().iter().sum();
    let slacks: Vec<f64> = spec.lambdas().iter().map(|&l| total - 2.0 * l).collect();
    let (worst, &min_slack) = slacks
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
        .unwrap();
    FeasibilityReport {
        feasible: min_slack >= -eps,
        slacks,
        worst_index: worst + 1,
        min_slack,
        boundary: min_slack.abs() <= eps,
        eps,
    }
}

/// A feasible spectrum produced by rejection sampling, with the number of
/// draws it took (the acceptance rate is `1 / attempts`).
#[derive(Debug, Clone, Serialize)]
pub struct FeasibleSample {
    pub spectrum: Spectrum,
    pub attempts: u64,
}

/// Uniform rejection sampling on [0, 1/2]^n until the polygon check passes
/// with eps = 0. Deterministic for a given seed.
///
/// The degenerate geometries are special-cased: n = 1 admits only (0), and
/// for n = 2 the feasible set {lambda_1 = lambda_2} has measure zero, so a
/// single draw is duplicated instead of rejected forever.
pub fn sample_feasible_spectrum(n: usize, seed: u64) -> FeasibleSample {
    assert!(n >= 1, "need at least one qubit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match n {
        1 => FeasibleSample {
            spectrum: Spectrum::from_valid(vec![0.0]),
            attempts: 1,
        },
        2 => {
            let l = rng.gen::<f64>() * 0.5;
            FeasibleSample {
                spectrum: Spectrum::from_valid(vec![l, l]),
                attempts: 1,
            }
        }
        _ => {
            let mut attempts = 0u64;
            loop {
                attempts += 1;
                let lambdas: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 0.5).collect();
                let spec = Spectrum::from_valid(lambdas);
                if check_polygon(&spec, 0.0).feasible {
                    return FeasibleSample {
                        spectrum: spec,
                        attempts,
                    };
                }
            }
        }
    }
}
