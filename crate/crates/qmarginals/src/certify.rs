//! Executable certificates for the two structural facts behind the
//! feasibility test: the inequality chain bounding each smaller marginal
//! eigenvalue by the sum of the others, and the consistency of
//! overlapping marginals computed along different routes.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::statevec::{DensityMatrix, PureState};
use crate::tol;

/// Every intermediate quantity of the inequality chain for one qubit,
/// ready to be serialized for audit.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    /// 1-based qubit under test (in the original labeling).
    pub qubit: usize,
    pub n: usize,
    /// Set when lambda_k = 0 made the chain trivial.
    pub trivial: bool,
    /// Squared Schmidt weights across qubit k vs the rest.
    pub a2: f64,
    pub b2: f64,
    /// Smaller marginal eigenvalues of the remaining qubits.
    pub other_lambdas: Vec<f64>,
    pub sum_others: f64,
    /// Coefficients of the two Schmidt branches in the product eigenbasis,
    /// as [re, im] pairs indexed by the (n-1)-bit string.
    pub a_coeffs: Vec<[f64; 2]>,
    pub b_coeffs: Vec<[f64; 2]>,
    /// Number of zeros in each index string.
    pub zero_counts: Vec<u32>,
    /// Zero-count-weighted sums of squared coefficients per branch.
    pub weighted_sum_a: f64,
    pub weighted_sum_b: f64,
    /// Squared moduli of the all-ones coefficients.
    pub a_ones_sq: f64,
    pub b_ones_sq: f64,
    /// a2 * (2 - a_ones_sq - b_ones_sq): the bound obtained by pushing
    /// both branches through the smaller Schmidt weight.
    pub small_weight_bound: f64,
    /// Cauchy-Schwarz on the branch overlap: lhs <= rhs.
    pub cs_lhs: f64,
    pub cs_rhs: f64,
    /// Bookkeeping identities (deviations, expected ~1e-15).
    pub norm_a_dev: f64,
    pub norm_b_dev: f64,
    pub ortho_dev: f64,
    /// Worst deviation of lambda_j reconstructed from weighted coefficient
    /// sums against the partial-trace value.
    pub recon_dev: f64,
    /// Truth values of the chain inequalities, in order.
    pub holds_weighted: bool,
    pub holds_small_weight: bool,
    pub holds_cs: bool,
    pub holds_ones: bool,
    pub holds_final: bool,
}

/// Disjointness-constrained index sets for the marginal-consistency check:
/// the marginal of P may be reached through P∪Q or through P∪R.
#[derive(Debug, Clone)]
pub struct SubsetTriple {
    p: Vec<usize>,
    q: Vec<usize>,
    r: Vec<usize>,
}

impl SubsetTriple {
    pub fn new(p: Vec<usize>, q: Vec<usize>, r: Vec<usize>) -> Result<Self> {
        let mut p = p;
        let mut q = q;
        let mut r = r;
        p.sort_unstable();
        p.dedup();
        q.sort_unstable();
        q.dedup();
        r.sort_unstable();
        r.dedup();
        if p.is_empty() {
            return Err(Error::BadSubset {
                reason: "P must be nonempty".into(),
            });
        }
        if p.iter().any(|x| q.contains(x)) {
            return Err(Error::BadSubset {
                reason: "P and Q must be disjoint".into(),
            });
        }
        if p.iter().any(|x| r.contains(x)) {
            return Err(Error::BadSubset {
                reason: "P and R must be disjoint".into(),
            });
        }
        Ok(Self { p, q, r })
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }
    pub fn q(&self) -> &[usize] {
        &self.q
    }
    pub fn r(&self) -> &[usize] {
        &self.r
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub r: Vec<usize>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compute the marginal of P through P∪Q and through P∪R and compare.
pub fn check_consistency(state: &PureState, triple: &SubsetTriple) -> Result<ConsistencyReport> {
    let side_q = marginal_via(state, &triple.p, &triple.q)?;
    let side_r = marginal_via(state, &triple.p, &triple.r)?;
    let max_deviation = side_q.max_entry_distance(&side_r);
    Ok(ConsistencyReport {
        p: triple.p.clone(),
        q: triple.q.clone(),
        r: triple.r.clone(),
        max_deviation,
        pass: max_deviation <= tol::CONSISTENCY_TOL,
    })
}

/// Marginal of `p` obtained by first reducing to `p ∪ extra`, then
/// tracing `extra` out again.
fn marginal_via(state: &PureState, p: &[usize], extra: &[usize]) -> Result<DensityMatrix> {
    let mut union: Vec<usize> = p.iter().chain(extra).copied().collect();
    union.sort_unstable();
    union.dedup();
    let dm = state.reduce_subset(&union)?;
    let keep: Vec<usize> = union
        .iter()
        .enumerate()
        .filter(|(_, q)| p.contains(q))
        .map(|(pos, _)| pos)
        .collect();
    dm.partial_trace(&keep)
}

/// Verify the full inequality chain bounding lambda_k by the sum of the
/// other smaller eigenvalues, on a concrete state.
///
/// Violations beyond [`tol::CHAIN_SLACK_TOL`] are impossible for valid
/// inputs, so they surface as [`Error::TheoremViolation`] — an instrument
/// fault, not a physical result.
pub fn necessity_certificate(state: &PureState, k: usize) -> Result<CertificateReport> {
    let n = state.n();
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    if n < 2 {
        return Err(Error::SingleQubit);
    }

    // Move qubit k to the front, shifting the earlier qubits back.
    let state = if k == 1 {
        state.clone()
    } else {
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        for j in 1..=n {
            perm.push(if j == k {
                1
            } else if j < k {
                j + 1
            } else {
                j
            });
        }
        state.permute_qubits(&perm)?
    };

    // Per-qubit eigensystems; qubit 1 carries lambda_k.
    let mut other_lambdas = Vec::with_capacity(n - 1);
    let mut bases = Vec::with_capacity(n - 1);
    for j in 2..=n {
        let e = state.reduce_one_qubit(j)?.eig2();
        other_lambdas.push(e.lambda_small);
        bases.push((e.v_small, e.v_large));
    }
    let sum_others: f64 = other_lambdas.iter().sum();

    let split = state.schmidt_split_first()?;
    let a2 = split.a * split.a;
    let b2 = split.b * split.b;
    let trivial = a2 <= tol::DEGENERACY_TOL;

    // Express both branches in the product eigenbasis of qubits 2..n.
    let rest_n = n - 1;
    let mut branch0 = split.rest0.clone();
    let mut branch1 = split.rest1.clone();
    for (pos, (vs, vl)) in bases.iter().enumerate() {
        // U maps |0> to the small eigenvector; U^dag rewrites a state in
        // that eigenbasis.
        let u_dag = [[vs[0].conj(), vs[1].conj()], [vl[0].conj(), vl[1].conj()]];
        branch0 = branch0.apply_local_unitary(pos + 1, &u_dag)?;
        branch1 = branch1.apply_local_unitary(pos + 1, &u_dag)?;
    }
    let a_coeffs: &[Complex64] = branch0.amplitudes();
    let b_coeffs: &[Complex64] = branch1.amplitudes();

    let dim = 1usize << rest_n;
    let zero_counts: Vec<u32> = (0..dim)
        .map(|idx| rest_n as u32 - (idx as u32).count_ones())
        .collect();

    let norm_a_dev = (a_coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs();
    let norm_b_dev = (b_coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs();
    let ortho_dev = a_coeffs
        .iter()
        .zip(b_coeffs)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm();

    // lambda_j must be reproduced by the weighted coefficient sums.
    let mut recon_dev: f64 = 0.0;
    for (pos, &lam) in other_lambdas.iter().enumerate() {
        let bit = rest_n - 1 - pos;
        let mut wa = 0.0;
        let mut wb = 0.0;
        for idx in 0..dim {
            if (idx >> bit) & 1 == 0 {
                wa += a_coeffs[idx].norm_sqr();
                wb += b_coeffs[idx].norm_sqr();
            }
        }
        recon_dev = recon_dev.max((a2 * wa + b2 * wb - lam).abs());
    }

    let weighted_sum_a: f64 = a_coeffs
        .iter()
        .zip(&zero_counts)
        .map(|(z, &w)| f64::from(w) * z.norm_sqr())
        .sum();
    let weighted_sum_b: f64 = b_coeffs
        .iter()
        .zip(&zero_counts)
        .map(|(z, &w)| f64::from(w) * z.norm_sqr())
        .sum();

    let ones = dim - 1;
    let a_ones_sq = a_coeffs[ones].norm_sqr();
    let b_ones_sq = b_coeffs[ones].norm_sqr();
    let dropped_ones = a2 * (1.0 - a_ones_sq) + b2 * (1.0 - b_ones_sq);
    let small_weight_bound = a2 * (2.0 - a_ones_sq - b_ones_sq);
    let cs_lhs = a_ones_sq * b_ones_sq;
    let cs_rhs = (1.0 - a_ones_sq) * (1.0 - b_ones_sq);

    let tol = tol::CHAIN_SLACK_TOL;
    let holds_weighted = a2 * weighted_sum_a + b2 * weighted_sum_b >= dropped_ones - tol;
    let holds_small_weight =
        dropped_ones >= small_weight_bound - tol && sum_others >= small_weight_bound - tol;
    let holds_cs = cs_lhs <= cs_rhs + tol;
    let holds_ones = a_ones_sq + b_ones_sq <= 1.0 + tol;
    let holds_final = sum_others >= a2 - tol;
    let identities_ok = norm_a_dev <= tol
        && norm_b_dev <= tol
        && ortho_dev <= tol
        && recon_dev <= tol
        && (a2 * weighted_sum_a + b2 * weighted_sum_b - sum_others).abs() <= tol;

    let report = CertificateReport {
        qubit: k,
        n,
        trivial,
        a2,
        b2,
        other_lambdas,
        sum_others,
        a_coeffs: a_coeffs.iter().map(|z| [z.re, z.im]).collect(),
        b_coeffs: b_coeffs.iter().map(|z| [z.re, z.im]).collect(),
        zero_counts,
        weighted_sum_a,
        weighted_sum_b,
        a_ones_sq,
        b_ones_sq,
        small_weight_bound,
        cs_lhs,
        cs_rhs,
        norm_a_dev,
        norm_b_dev,
        ortho_dev,
        recon_dev,
        holds_weighted,
        holds_small_weight,
        holds_cs,
        holds_ones,
        holds_final,
    };

    if !(holds_weighted
        && holds_small_weight
        && holds_cs
        && holds_ones
        && holds_final
        && identities_ok)
    {
        return Err(Error::TheoremViolation {
            qubit: k,
            reason: format!(
                "chain: weighted={holds_weighted} small_weight={holds_small_weight} \
                 cs={holds_cs} ones={holds_ones} final={holds_final} \
                 identities: norm=({:.2e},{:.2e}) ortho={:.2e} recon={:.2e}",
                report.norm_a_dev, report.norm_b_dev, report.ortho_dev, report.recon_dev
            ),
        });
    }
    Ok(report)
}
