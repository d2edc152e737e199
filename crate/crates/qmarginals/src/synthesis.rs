//! Constructs pure n-qubit states whose one-qubit marginals have
//! prescribed smaller eigenvalues (or prescribed full density matrices).
//!
//! The construction is recursive: the sorted spectrum is reduced by
//! folding the smallest eigenvalue into the largest, a state for the
//! smaller problem is built, and one extra qubit is attached with a
//! rotation angle chosen to restore both eigenvalues. Every state built
//! here has all one-qubit marginals diagonal in the computational basis
//! with the smaller eigenvalue on |0><0|, which is what makes the
//! recombination step work.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::{check_polygon, Spectrum};
use crate::statevec::{PureState, QubitDensity};
use crate::tol;

/// One recursion level of [`synth_spectrum`].
#[derive(Debug, Clone, Serialize)]
pub struct TraceLevel {
    /// Number of qubits handled at this level.
    pub level_n: usize,
    /// 1-based input positions in descending-eigenvalue order (stable ties).
    pub order: Vec<usize>,
    /// Eigenvalue carried into the reduced problem: largest minus smallest.
    pub gap: f64,
    /// Rotation angle attaching the final qubit; sin^2(chi) * (1 - gap)
    /// equals the smallest eigenvalue.
    pub chi: f64,
    /// 1 if the gap dominates the interior eigenvalues, 2 otherwise.
    pub case_tag: u8,
}

/// A synthesized state together with its recursion trace and the spectrum
/// recomputed from partial traces.
#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub state: PureState,
    pub trace: Vec<TraceLevel>,
    pub achieved: Spectrum,
}

fn clamped_sqrt(x: f64, what: &str) -> Result<f64> {
    if x < -tol::RADICAND_CLAMP {
        return Err(Error::Infeasible {
            reason: format!("{what} would need a negative squared amplitude ({x:.3e})"),
        });
    }
    Ok(x.max(0.0).sqrt())
}

/// Three-qubit base case: a|100> + b|010> + c|001> + d|111> with
/// a^2 = (l2 + l3 - l1)/2 and cyclic permutations; d fills the norm.
pub fn synth_base3(l1: f64, l2: f64, l3: f64) -> Result<PureState> {
    let spec = Spectrum::new(vec![l1, l2, l3])?;
    let l = spec.lambdas();
    let a = clamped_sqrt((l[1] + l[2] - l[0]) / 2.0, "qubit 1")?;
    let b = clamped_sqrt((l[2] + l[0] - l[1]) / 2.0, "qubit 2")?;
    let c = clamped_sqrt((l[0] + l[1] - l[2]) / 2.0, "qubit 3")?;
    let d = clamped_sqrt(1.0 - a * a - b * b - c * c, "normalization")?;
    let z = Complex64::new(0.0, 0.0);
    let amps = vec![
        z,
        Complex64::new(c, 0.0), // |001>
        Complex64::new(b, 0.0), // |010>
        z,
        Complex64::new(a, 0.0), // |100>
        z,
        z,
        Complex64::new(d, 0.0), // |111>
    ];
    Ok(PureState::from_normalized(3, amps))
}

/// Degenerate sizes where the polygon constraints pin the answer:
/// n = 1 admits only lambda = 0 (giving |1>), and n = 2 forces the two
/// eigenvalues equal (giving a two-term Schmidt state).
pub fn synth_small(spec: &Spectrum) -> Result<PureState> {
    let l = spec.lambdas();
    match l.len() {
        1 => {
            if l[0] > tol::DEFAULT_POLYGON_EPS {
                return Err(Error::Infeasible {
                    reason: format!(
                        "a single qubit in a pure state must have lambda = 0, got {}",
                        l[0]
                    ),
                });
            }
            PureState::basis(1, 1)
        }
        2 => {
            if (l[0] - l[1]).abs() > tol::DEFAULT_POLYGON_EPS {
                return Err(Error::Infeasible {
                    reason: format!(
                        "two-qubit marginals of a pure state share eigenvalues; got {} and {}",
                        l[0], l[1]
                    ),
                });
            }
            let lam = 0.5 * (l[0] + l[1]);
            let z = Complex64::new(0.0, 0.0);
            let amps = vec![
                Complex64::new(lam.sqrt(), 0.0),
                z,
                z,
                Complex64::new((1.0 - lam).sqrt(), 0.0),
            ];
            Ok(PureState::from_normalized(2, amps))
        }
        got => Err(Error::WrongSize { expected: 2, got }),
    }
}

/// Build a pure state realizing the requested spectrum, with full trace.
pub fn synth_spectrum(spec: &Spectrum) -> Result<SynthesisResult> {
    let report = check_polygon(spec, tol::DEFAULT_POLYGON_EPS);
    if !report.feasible {
        return Err(Error::Infeasible {
            reason: format!(
                "polygon inequality violated at qubit {} (slack {:.3e})",
                report.worst_index, report.min_slack
            ),
        });
    }
    let mut trace = Vec::new();
    let state = synth_recursive(spec.lambdas(), &mut trace)?;

    let mut achieved = Vec::with_capacity(spec.n());
    for k in 1..=spec.n() {
        let rho = state.reduce_one_qubit(k)?;
        achieved.push(rho.eig2().lambda_small);
    }
    for (k, (&want, &got)) in spec.lambdas().iter().zip(&achieved).enumerate() {
        // Inputs feasible only thanks to eps get snapped onto the boundary,
        // so allow that much; real construction error is orders smaller.
        if (want - got).abs() > tol::DEFAULT_POLYGON_EPS {
            return Err(Error::InternalInvariant {
                reason: format!(
                    "achieved eigenvalue {got} differs from requested {want} on qubit {}",
                    k + 1
                ),
            });
        }
    }
    Ok(SynthesisResult {
        state,
        trace,
        achieved: Spectrum::from_valid(achieved),
    })
}

/// Recursive worker: builds a state whose qubit k carries `lambdas[k-1]`.
fn synth_recursive(lambdas: &[f64], trace: &mut Vec<TraceLevel>) -> Result<PureState> {
    let n = lambdas.len();

    // Stable descending sort; order[j] is the input position of rank j.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| lambdas[j].partial_cmp(&lambdas[i]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| lambdas[i]).collect();

    let sorted_state = if n <= 2 {
        synth_small(&Spectrum::from_valid(sorted))?
    } else if n == 3 {
        synth_base3(sorted[0], sorted[1], sorted[2])?
    } else {
        let level_report = check_polygon(
            &Spectrum::from_valid(sorted.clone()),
            tol::DEFAULT_POLYGON_EPS,
        );
        if !level_report.feasible {
            return Err(Error::InternalInvariant {
                reason: format!(
                    "recursion produced an infeasible {n}-tuple (slack {:.3e})",
                    level_report.min_slack
                ),
            });
        }
        let gap = sorted[0] - sorted[n - 1];
        let smallest = sorted[n - 1];
        let case_tag = if gap >= sorted[1] { 1 } else { 2 };

        // sin^2 chi is well defined: the residual weight 1 - gap is at
        // least 1/2 and the smallest eigenvalue is at most 1/2.
        let sin_sqr = (smallest / (1.0 - gap)).clamp(0.0, 1.0);
        let sin_chi = sin_sqr.sqrt();
        let cos_chi = (1.0 - sin_sqr).max(0.0).sqrt();
        trace.push(TraceLevel {
            level_n: n,
            order: order.iter().map(|&i| i + 1).collect(),
            gap,
            chi: sin_chi.asin(),
            case_tag,
        });

        let mut child = Vec::with_capacity(n - 1);
        child.push(gap);
        child.extend_from_slice(&sorted[1..n - 1]);
        let child_state = synth_recursive(&child, trace)?;

        // Split the child along its first qubit; the upper block carries
        // exactly the gap weight because marginals are diagonal.
        let half = child_state.dim() / 2;
        let amps = child_state.amplitudes();
        let phi_norm_sqr: f64 = amps[..half].iter().map(|a| a.norm_sqr()).sum();
        if (phi_norm_sqr - gap).abs() > 1e-9 {
            return Err(Error::InternalInvariant {
                reason: format!(
                    "first-qubit block weight {phi_norm_sqr} does not match the gap {gap}"
                ),
            });
        }

        // New register: fresh qubit first, child qubits 2.. in the middle,
        // fresh qubit last.
        let dim = 1usize << n;
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for r in 0..half {
            let phi = amps[r];
            let psi = amps[half + r];
            out[2 * r + 1] = phi; // |0>|phi>|1>
            out[2 * r] = sin_chi * psi; // sin chi |0>|psi>|0>
            out[dim / 2 + 2 * r + 1] = cos_chi * psi; // cos chi |1>|psi>|1>
        }
        PureState::from_normalized(n, out)
    };

    if n == 1 {
        return Ok(sorted_state);
    }
    // Undo the sort: rank j goes back to input position order[j].
    let perm: Vec<usize> = order.iter().map(|&i| i + 1).collect();
    sorted_state.permute_qubits(&perm)
}

/// Build a state whose one-qubit marginals match full target density
/// matrices: synthesize the eigenvalue spectrum, then rotate each qubit
/// into the target eigenbasis.
pub fn synth_density(targets: &[QubitDensity]) -> Result<PureState> {
    if targets.is_empty() {
        return Err(Error::WrongSize {
            expected: 1,
            got: 0,
        });
    }
    let mut lambdas = Vec::with_capacity(targets.len());
    let mut rotations = Vec::with_capacity(targets.len());
    for t in targets {
        let e = t.eig2();
        lambdas.push(e.lambda_small.max(0.0));
        // Columns send |0> to the small eigenvector, |1> to the large one.
        rotations.push([[e.v_small[0], e.v_large[0]], [e.v_small[1], e.v_large[1]]]);
    }
    let result = synth_spectrum(&Spectrum::new(lambdas)?)?;
    let mut state = result.state;
    for (k, u) in rotations.iter().enumerate() {
        state = state.apply_local_unitary(k + 1, u)?;
    }
    Ok(state)
}
