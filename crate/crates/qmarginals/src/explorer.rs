//! Numerical experiments beyond the exactly-solved one-qubit case: a
//! seeded multi-restart search for four-qubit states with maximally mixed
//! pair marginals (expected to bottom out strictly above zero), and the
//! qudit generalization of the polygon check.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::eigen;
use crate::error::{Error, Result};
use crate::statevec::{apply_two_qubit_matrix, DensityMatrix, PureState};
use crate::tol;

/// Configuration for [`search_mixed4`].
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Gradient iterations allowed per restart; 0 just scores the start.
    pub max_iters: usize,
    pub seed: u64,
    /// Initial step length for the backtracking line search.
    pub step_init: f64,
    /// Stop a restart once the tangent gradient norm falls below this.
    pub grad_tol: f64,
    /// Qubit pairs whose marginals should approach I/4.
    pub pairs: Vec<(usize, usize)>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 100,
            max_iters: 2000,
            seed: 0,
            step_init: 0.25,
            grad_tol: 1e-10,
            pairs: default_pairs(),
        }
    }
}

/// The three pairs containing qubit 1. Complementary pairs of a pure
/// four-qubit state share spectra, so these already constrain all six.
pub fn default_pairs() -> Vec<(usize, usize)> {
    vec![(1, 2), (1, 3), (1, 4)]
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::InvalidConfig {
                reason: "restarts must be >= 1".into(),
            });
        }
        let step_ok = self.step_init.is_finite() && self.step_init > 0.0;
        let tol_ok = self.grad_tol >= 0.0; // also rejects NaN
        if !step_ok || !tol_ok {
            return Err(Error::InvalidConfig {
                reason: "step_init must be positive and grad_tol nonnegative".into(),
            });
        }
        validate_pairs(&self.pairs)?;
        Ok(())
    }
}

fn validate_pairs(pairs: &[(usize, usize)]) -> Result<()> {
    for &(i, j) in pairs {
        if i < 1 || j < 1 || i > 4 || j > 4 || i == j {
            return Err(Error::InvalidConfig {
                reason: format!("pair ({i}, {j}) is not a pair of distinct qubits in 1..=4"),
            });
        }
    }
    Ok(())
}

/// One restart's outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartRecord {
    pub seed: u64,
    pub objective: f64,
    pub iterations: usize,
}

/// Outcome of [`search_mixed4`]. `best_objective` is the minimum over all
/// restarts; it is evidence, not a proof of any bound.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_objective: f64,
    pub best_state: PureState,
    pub per_restart: Vec<RestartRecord>,
    /// Human-readable definition of the minimized quantity.
    pub objective: String,
}

/// Sum over the listed pairs of the squared Frobenius distance between
/// the pair marginal and I/4. Zero exactly when every listed pair is
/// totally mixed.
pub fn pair_mixedness_objective(state: &PureState, pairs: &[(usize, usize)]) -> Result<f64> {
    if state.n() != 4 {
        return Err(Error::WrongSize {
            expected: 4,
            got: state.n(),
        });
    }
    validate_pairs(pairs)?;
    Ok(objective_raw(state.amplitudes(), pairs))
}

/// Pair marginal of a raw (not necessarily normalized) amplitude vector,
/// as a row-major 4x4 matrix with `lo` sorted after `hi`.
fn pair_density_raw(amps: &[Complex64], n: usize, q1: usize, q2: usize) -> [Complex64; 16] {
    let (hi, lo) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
    let s1 = 1usize << (n - hi);
    let s2 = 1usize << (n - lo);
    let mut rho = [Complex64::new(0.0, 0.0); 16];
    for i in 0..amps.len() {
        if i & s1 == 0 && i & s2 == 0 {
            let v = [amps[i], amps[i | s2], amps[i | s1], amps[i | s1 | s2]];
            for r in 0..4 {
                for c in 0..4 {
                    rho[r * 4 + c] += v[r] * v[c].conj();
                }
            }
        }
    }
    rho
}

/// Objective on raw amplitudes (no normalization); the public entry point
/// guarantees unit norm, the optimizer and the gradient check work on the
/// quartic function directly.
pub(crate) fn objective_raw(amps: &[Complex64], pairs: &[(usize, usize)]) -> f64 {
    let n = amps.len().trailing_zeros() as usize;
    let mut total = 0.0;
    for &(q1, q2) in pairs {
        let rho = pair_density_raw(amps, n, q1, q2);
        for r in 0..4 {
            for c in 0..4 {
                let target = if r == c { 0.25 } else { 0.0 };
                total += (rho[r * 4 + c] - target).norm_sqr();
            }
        }
    }
    total
}

/// Conjugate-coordinate gradient g with df = 2 Re <delta, g>; the real
/// and imaginary parts of 2g are the partial derivatives of
/// [`objective_raw`] with respect to the real coordinates.
pub(crate) fn objective_gradient_raw(
    amps: &[Complex64],
    pairs: &[(usize, usize)],
) -> Vec<Complex64> {
    let n = amps.len().trailing_zeros() as usize;
    let mut grad = vec![Complex64::new(0.0, 0.0); amps.len()];
    for &(q1, q2) in pairs {
        let mut m = pair_density_raw(amps, n, q1, q2);
        for r in 0..4 {
            m[r * 4 + r] -= 0.25;
        }
        // contribution 2 (M (x) I) psi
        let mut term = amps.to_vec();
        let (hi, lo) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
        apply_two_qubit_matrix(&mut term, n, hi, lo, &m);
        for (g, t) in grad.iter_mut().zip(&term) {
            *g += 2.0 * t;
        }
    }
    grad
}

fn normalize_vec(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut v {
        *a /= norm;
    }
    v
}

/// Projected gradient descent on the unit sphere from one Haar start.
fn descend(seed: u64, config: &SearchConfig) -> (RestartRecord, PureState) {
    let start = PureState::haar(4, seed).expect("n = 4 is within the cap");
    let mut amps = start.amplitudes().to_vec();
    let mut objective = objective_raw(&amps, &config.pairs);
    let mut step = config.step_init;
    let mut iterations = 0usize;

    while iterations < config.max_iters {
        let grad = objective_gradient_raw(&amps, &config.pairs);
        let radial: f64 = amps.iter().zip(&grad).map(|(a, g)| (a.conj() * g).re).sum();
        let tangent: Vec<Complex64> = grad
            .iter()
            .zip(&amps)
            .map(|(g, a)| g - radial * a)
            .collect();
        let tangent_sqr: f64 = tangent.iter().map(|t| t.norm_sqr()).sum();
        if tangent_sqr.sqrt() <= config.grad_tol {
            break;
        }
        let mut accepted = false;
        while step > 1e-18 {
            let trial: Vec<Complex64> = amps
                .iter()
                .zip(&tangent)
                .map(|(a, t)| a - step * t)
                .collect();
            let trial = normalize_vec(trial);
            let trial_objective = objective_raw(&trial, &config.pairs);
            if trial_objective <= objective - 1e-4 * step * tangent_sqr {
                amps = trial;
                objective = trial_objective;
                accepted = true;
                step = (step * 1.5).min(1.0);
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        if !accepted {
            break;
        }
    }
    (
        RestartRecord {
            seed,
            objective,
            iterations,
        },
        PureState::from_normalized(4, amps),
    )
}

/// Minimize [`pair_mixedness_objective`] over four-qubit states from
/// Haar-random starts. Restart seeds are derived by counter from the base
/// seed; restarts run independently (in parallel) and are merged by index,
/// so results are deterministic for a given config.
pub fn search_mixed4(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let runs: Vec<(RestartRecord, PureState)> = (0..config.restarts)
        .into_par_iter()
        .map(|i| descend(config.seed.wrapping_add(i as u64), config))
        .collect();

    let mut best = 0usize;
    for (i, (rec, _)) in runs.iter().enumerate() {
        if rec.objective < runs[best].0.objective {
            best = i;
        }
    }
    let best_objective = runs[best].0.objective;
    let best_state = runs[best].1.clone();
    let per_restart = runs.into_iter().map(|(rec, _)| rec).collect();
    Ok(SearchResult {
        best_objective,
        best_state,
        per_restart,
        objective: "sum over pairs of squared Frobenius distance of the pair marginal from I/4"
            .into(),
    })
}

/// A pure state of `n` qudits of local dimension `d`, indexed with the
/// same big-endian digit ordering as [`PureState`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    d: usize,
    n: usize,
    amps: Vec<Complex64>,
}

impl QuditState {
    pub fn new(d: usize, n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidConfig {
                reason: format!("local dimension {d} < 2"),
            });
        }
        if n < 1 {
            return Err(Error::InvalidConfig {
                reason: "need at least one qudit".into(),
            });
        }
        let dim = d
            .checked_pow(n as u32)
            .filter(|&x| x <= 1usize << tol::DEFAULT_QUBIT_CAP)
            .ok_or(Error::InvalidConfig {
                reason: format!("state of {n} qudits of dimension {d} is too large"),
            })?;
        if amps.len() != dim {
            return Err(Error::LengthMismatch {
                n,
                got: amps.len(),
                expected: dim,
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sqr - 1.0).abs();
        if deviation > tol::NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { d, n, amps })
    }

    pub fn haar(d: usize, n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = d
            .checked_pow(n as u32)
            .filter(|&x| x <= 1usize << tol::DEFAULT_QUBIT_CAP)
            .ok_or(Error::InvalidConfig {
                reason: format!("state of {n} qudits of dimension {d} is too large"),
            })?;
        let mut amps = Vec::with_capacity(dim);
        for _ in 0..dim {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            amps.push(Complex64::new(re, im));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Self::new(d, n, amps)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Reduced density matrix of qudit `k` (1-based).
    pub fn reduce_one_qudit(&self, k: usize) -> Result<DensityMatrix> {
        if k < 1 || k > self.n {
            return Err(Error::IndexOutOfRange { k, n: self.n });
        }
        let stride = self.d.pow((self.n - k) as u32);
        let block = stride * self.d;
        let hi_count = self.amps.len() / block;
        let mut entries = vec![Complex64::new(0.0, 0.0); self.d * self.d];
        for hi in 0..hi_count {
            for r in 0..self.d {
                for s in 0..self.d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for lo in 0..stride {
                        acc += self.amps[hi * block + r * stride + lo]
                            * self.amps[hi * block + s * stride + lo].conj();
                    }
                    entries[r * self.d + s] += acc;
                }
            }
        }
        Ok(DensityMatrix::from_parts(vec![self.d], entries))
    }
}

/// Polygon check generalized to qudits: mu_k is one minus the largest
/// marginal eigenvalue, and each mu_k must not exceed the sum of the rest.
#[derive(Debug, Clone, Serialize)]
pub struct QuditPolygonReport {
    pub mus: Vec<f64>,
    pub slacks: Vec<f64>,
    pub min_slack: f64,
    pub worst_index: usize,
    pub satisfied: bool,
    pub eps: f64,
}

pub fn qudit_polygon_check(state: &QuditState, eps: f64) -> QuditPolygonReport {
    let mus: Vec<f64> = (1..=state.n())
        .map(|k| {
            let rho = state.reduce_one_qudit(k).expect("k in range");
            let values = eigen::hermitian_eigenvalues(rho.dim(), rho.entries());
            1.0 - values.last().copied().unwrap_or(1.0)
        })
        .collect();
    let total: f64 = mus.iter().sum();
    let slacks: Vec<f64> = mus.iter().map(|m| total - 2.0 * m).collect();
    let (worst, &min_slack) = slacks
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
        .unwrap();
    QuditPolygonReport {
        mus,
        slacks,
        min_slack,
        worst_index: worst + 1,
        satisfied: min_slack >= -eps,
        eps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::check_polygon;
    use crate::spectra::Spectrum;

    const Z: Complex64 = Complex64::new(0.0, 0.0);

    fn ghz4() -> PureState {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut amps = vec![Z; 16];
        amps[0] = h;
        amps[15] = h;
        PureState::new(4, amps).unwrap()
    }

    #[test]
    fn objective_ghz_pair() {
        // rho_12 = diag(1/2, 0, 0, 1/2); distance^2 to I/4 is 4 * (1/4)^2.
        let obj = pair_mixedness_objective(&ghz4(), &[(1, 2)]).unwrap();
        assert!((obj - 0.25).abs() < 1e-12);
    }

    #[test]
    fn objective_product_pair() {
        let s = PureState::basis(4, 0).unwrap();
        let obj = pair_mixedness_objective(&s, &[(1, 2)]).unwrap();
        assert!((obj - 0.75).abs() < 1e-12);
    }

    #[test]
    fn objective_empty_pairs() {
        let s = PureState::haar(4, 1).unwrap();
        assert_eq!(pair_mixedness_objective(&s, &[]).unwrap(), 0.0);
    }

    #[test]
    fn objective_rejects_wrong_size() {
        let s = PureState::haar(3, 1).unwrap();
        assert!(matches!(
            pair_mixedness_objective(&s, &[(1, 2)]),
            Err(Error::WrongSize {
                expected: 4,
                got: 3
            })
        ));
    }

    #[test]
    fn gradient_matches_central_differences() {
        let pairs = default_pairs();
        let state = PureState::haar(4, 33).unwrap();
        let amps = state.amplitudes().to_vec();
        let grad = objective_gradient_raw(&amps, &pairs);
        let h = 1e-6;
        let mut rng_points = [0usize; 10];
        for (j, p) in rng_points.iter_mut().enumerate() {
            *p = (j * 7 + 3) % amps.len();
        }
        for &idx in &rng_points {
            for part in 0..2 {
                let mut plus = amps.clone();
                let mut minus = amps.clone();
                let delta = if part == 0 {
                    Complex64::new(h, 0.0)
                } else {
                    Complex64::new(0.0, h)
                };
                plus[idx] += delta;
                minus[idx] -= delta;
                let fd = (objective_raw(&plus, &pairs) - objective_raw(&minus, &pairs)) / (2.0 * h);
                let analytic = if part == 0 {
                    2.0 * grad[idx].re
                } else {
                    2.0 * grad[idx].im
                };
                let scale = fd.abs().max(analytic.abs()).max(1e-8);
                assert!(
                    (fd - analytic).abs() / scale < 1e-6,
                    "idx {idx} part {part}: fd {fd} vs analytic {analytic}"
                );
            }
        }
    }

    #[test]
    fn zero_iterations_scores_the_start() {
        let config = SearchConfig {
            restarts: 1,
            max_iters: 0,
            seed: 5,
            ..Default::default()
        };
        let result = search_mixed4(&config).unwrap();
        let start = PureState::haar(4, 5).unwrap();
        let expect = pair_mixedness_objective(&start, &config.pairs).unwrap();
        assert_eq!(result.best_objective, expect);
        assert_eq!(result.per_restart[0].iterations, 0);
    }

    #[test]
    fn search_is_deterministic() {
        let config = SearchConfig {
            restarts: 4,
            max_iters: 50,
            seed: 9,
            ..Default::default()
        };
        let a = search_mixed4(&config).unwrap();
        let b = search_mixed4(&config).unwrap();
        assert_eq!(a.best_objective, b.best_objective);
        assert_eq!(a.per_restart, b.per_restart);
        assert_eq!(a.best_state.amplitudes(), b.best_state.amplitudes());
    }

    #[test]
    fn best_is_minimum_over_restarts() {
        let config = SearchConfig {
            restarts: 6,
            max_iters: 30,
            seed: 2,
            ..Default::default()
        };
        let result = search_mixed4(&config).unwrap();
        for rec in &result.per_restart {
            assert!(result.best_objective <= rec.objective);
        }
    }

    #[test]
    fn descent_reduces_objective() {
        let config = SearchConfig {
            restarts: 1,
            max_iters: 200,
            seed: 3,
            ..Default::default()
        };
        let result = search_mixed4(&config).unwrap();
        let start = PureState::haar(4, 3).unwrap();
        let initial = pair_mixedness_objective(&start, &config.pairs).unwrap();
        assert!(result.best_objective < initial);
        assert!(result.best_objective > 0.0);
    }

    #[test]
    fn qudit_product_state() {
        let mut amps = vec![Z; 9];
        amps[0] = Complex64::new(1.0, 0.0);
        let s = QuditState::new(3, 2, amps).unwrap();
        let rho = s.reduce_one_qudit(1).unwrap();
        assert!((rho.entry(0, 0).re - 1.0).abs() < 1e-15);
        let rep = qudit_polygon_check(&s, 1e-9);
        assert!(rep.satisfied);
        assert!(rep.mus.iter().all(|m| m.abs() < 1e-12));
    }

    #[test]
    fn qutrit_bell_like_marginal() {
        // (|01> + |10> + |22>)/sqrt(3): first marginal is I/3.
        let t = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        let mut amps = vec![Z; 9];
        amps[1] = t; // |01>
        amps[3] = t; // |10>
        amps[8] = t; // |22>
        let s = QuditState::new(3, 2, amps).unwrap();
        let rho = s.reduce_one_qudit(1).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { 1.0 / 3.0 } else { 0.0 };
                assert!((rho.entry(r, c) - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn qutrit_ghz_slacks() {
        let t = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        let mut amps = vec![Z; 27];
        amps[0] = t;
        amps[13] = t; // |111>
        amps[26] = t; // |222>
        let s = QuditState::new(3, 3, amps).unwrap();
        let rep = qudit_polygon_check(&s, 1e-9);
        for (&mu, &slack) in rep.mus.iter().zip(&rep.slacks) {
            assert!((mu - 2.0 / 3.0).abs() < 1e-12);
            assert!((slack - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn qudit_check_at_d2_matches_polygon() {
        for seed in 0..10 {
            let qubit_state = PureState::haar(3, 500 + seed).unwrap();
            let qudit = QuditState::new(2, 3, qubit_state.amplitudes().to_vec()).unwrap();
            let rep = qudit_polygon_check(&qudit, 1e-9);
            let lambdas: Vec<f64> = (1..=3)
                .map(|k| qubit_state.reduce_one_qubit(k).unwrap().eig2().lambda_small)
                .collect();
            let polygon = check_polygon(&Spectrum::new(lambdas).unwrap(), 1e-9);
            assert_eq!(rep.satisfied, polygon.feasible);
            for (a, b) in rep.slacks.iter().zip(&polygon.slacks) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn qudit_reduce_agrees_with_qubit_reduce() {
        let qubit_state = PureState::haar(3, 77).unwrap();
        let qudit = QuditState::new(2, 3, qubit_state.amplitudes().to_vec()).unwrap();
        for k in 1..=3 {
            let a = qudit.reduce_one_qudit(k).unwrap();
            let b = qubit_state.reduce_one_qubit(k).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    assert!((a.entry(r, c) - b.entry(r, c)).norm() < 1e-15);
                }
            }
        }
    }
}
