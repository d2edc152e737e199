//! Dense pure-state representation for small qubit counts, with the
//! partial traces, eigendecompositions, and basis manipulations the rest
//! of the crate is built on.
//!
//! Basis ordering: the label (i₁, …, i_n) maps to array index
//! Σ_k i_k · 2^(n−k), so qubit 1 is the most significant bit. All qubit
//! indices in this crate are 1-based.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::eigen;
use crate::error::{Error, Result};
use crate::tol;

/// A normalized pure state of `n` qubits as 2^n complex amplitudes.
///
/// Construction validates the amplitude count and the norm; nothing is
/// ever renormalized behind the caller's back.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Validate raw amplitudes as an `n`-qubit state under the default cap.
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::with_cap(n, amps, tol::DEFAULT_QUBIT_CAP)
    }

    /// Same as [`PureState::new`] with an explicit qubit cap.
    pub fn with_cap(n: usize, amps: Vec<Complex64>, cap: usize) -> Result<Self> {
        if n < 1 || n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        let expected = 1usize << n;
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                n,
                got: amps.len(),
                expected,
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sqr - 1.0).abs();
        if deviation > tol::NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { n, amps })
    }

    /// Internal constructor for amplitudes known to be normalized.
    pub(crate) fn from_normalized(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << n);
        debug_assert!(
            (amps.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-9,
            "internal state not normalized"
        );
        Self { n, amps }
    }

    /// The computational basis state with the given index.
    pub fn basis(n: usize, label: usize) -> Result<Self> {
        if !(1..=tol::DEFAULT_QUBIT_CAP).contains(&n) {
            return Err(Error::CapExceeded {
                n,
                cap: tol::DEFAULT_QUBIT_CAP,
            });
        }
        let dim = 1usize << n;
        if label >= dim {
            return Err(Error::IndexOutOfRange {
                k: label,
                n: dim - 1,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[label] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Haar-random state: 2^n independent standard complex Gaussians,
    /// normalized. Deterministic for a given seed.
    pub fn haar(n: usize, seed: u64) -> Result<Self> {
        Self::haar_with_cap(n, seed, tol::DEFAULT_QUBIT_CAP)
    }

    pub fn haar_with_cap(n: usize, seed: u64, cap: usize) -> Result<Self> {
        if n < 1 || n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 1usize << n;
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
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Euclidean distance between amplitude vectors (phase-sensitive).
    pub fn l2_distance(&self, other: &PureState) -> f64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_qubit(&self, k: usize) -> Result<()> {
        if k < 1 || k > self.n {
            return Err(Error::IndexOutOfRange { k, n: self.n });
        }
        Ok(())
    }

    /// Reduced density matrix of qubit `k` (1-based).
    pub fn reduce_one_qubit(&self, k: usize) -> Result<QubitDensity> {
        self.check_qubit(k)?;
        let stride = 1usize << (self.n - k);
        let mut p00 = 0.0;
        let mut p11 = 0.0;
        let mut off = Complex64::new(0.0, 0.0);
        for i in 0..self.dim() {
            if i & stride == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | stride];
                p00 += a0.norm_sqr();
                p11 += a1.norm_sqr();
                off += a0 * a1.conj();
            }
        }
        Ok(QubitDensity::from_parts([
            [Complex64::new(p00, 0.0), off],
            [off.conj(), Complex64::new(p11, 0.0)],
        ]))
    }

    /// Reduced density matrix of a nonempty, strictly increasing subset of
    /// qubits; the complement is traced out. The kept qubits form the rows
    /// and columns of the result in their given order.
    pub fn reduce_subset(&self, subset: &[usize]) -> Result<DensityMatrix> {
        if subset.is_empty() {
            return Err(Error::BadSubset {
                reason: "subset is empty".into(),
            });
        }
        for w in subset.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::BadSubset {
                    reason: format!("subset {subset:?} is not strictly increasing"),
                });
            }
        }
        if subset[0] < 1 || *subset.last().unwrap() > self.n {
            return Err(Error::BadSubset {
                reason: format!("subset {subset:?} not within 1..={}", self.n),
            });
        }

        let m = subset.len();
        let kdim = 1usize << m;
        let env_qubits: Vec<usize> = (1..=self.n).filter(|q| !subset.contains(q)).collect();
        let edim = 1usize << env_qubits.len();

        // Scatter the packed kept/env bits into full-state index offsets.
        let keep_base: Vec<usize> = (0..kdim)
            .map(|r| {
                let mut idx = 0usize;
                for (pos, &q) in subset.iter().enumerate() {
                    let bit = (r >> (m - 1 - pos)) & 1;
                    idx |= bit << (self.n - q);
                }
                idx
            })
            .collect();
        let env_base: Vec<usize> = (0..edim)
            .map(|e| {
                let mut idx = 0usize;
                for (pos, &q) in env_qubits.iter().enumerate() {
                    let bit = (e >> (env_qubits.len() - 1 - pos)) & 1;
                    idx |= bit << (self.n - q);
                }
                idx
            })
            .collect();

        let mut entries = vec![Complex64::new(0.0, 0.0); kdim * kdim];
        for &eb in &env_base {
            for r in 0..kdim {
                let ar = self.amps[keep_base[r] | eb];
                if ar == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for s in 0..kdim {
                    entries[r * kdim + s] += ar * self.amps[keep_base[s] | eb].conj();
                }
            }
        }
        Ok(DensityMatrix::from_parts(vec![2; m], entries))
    }

    /// Split across qubit 1 vs the rest into the two-term Schmidt form.
    pub fn schmidt_split_first(&self) -> Result<SchmidtSplit> {
        if self.n == 1 {
            return Err(Error::SingleQubit);
        }
        let rho1 = self.reduce_one_qubit(1)?;
        let eig = rho1.eig2();
        let half = self.dim() / 2;

        let contract = |v: &[Complex64; 2]| -> Vec<Complex64> {
            (0..half)
                .map(|r| v[0].conj() * self.amps[r] + v[1].conj() * self.amps[half + r])
                .collect()
        };

        if eig.lambda_small <= tol::DEGENERACY_TOL {
            // Product across the first cut: the cofactor state is exact and
            // the small-branch partner is an arbitrary orthogonal choice.
            let mut rest1 = contract(&eig.v_large);
            normalize(&mut rest1);
            let rest0 = unit_orthogonal_to(&rest1);
            return Ok(SchmidtSplit {
                a: 0.0,
                b: 1.0,
                phi0: eig.v_small,
                phi1: eig.v_large,
                rest0: PureState::from_normalized(self.n - 1, rest0),
                rest1: PureState::from_normalized(self.n - 1, rest1),
                degenerate: true,
            });
        }

        let mut rest0 = contract(&eig.v_small);
        let mut rest1 = contract(&eig.v_large);
        let a = normalize(&mut rest0);
        let b = normalize(&mut rest1);
        Ok(SchmidtSplit {
            a,
            b,
            phi0: eig.v_small,
            phi1: eig.v_large,
            rest0: PureState::from_normalized(self.n - 1, rest0),
            rest1: PureState::from_normalized(self.n - 1, rest1),
            degenerate: eig.degenerate,
        })
    }

    /// Relabel qubits: qubit `k` of `self` becomes qubit `perm[k-1]` of the
    /// result, so `result.reduce_one_qubit(perm[k-1]) == self.reduce_one_qubit(k)`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<PureState> {
        if perm.len() != self.n {
            return Err(Error::NotAPermutation(perm.to_vec()));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p < 1 || p > self.n || seen[p - 1] {
                return Err(Error::NotAPermutation(perm.to_vec()));
            }
            seen[p - 1] = true;
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (idx, &amp) in self.amps.iter().enumerate() {
            let mut out = 0usize;
            for k in 1..=self.n {
                let bit = (idx >> (self.n - k)) & 1;
                out |= bit << (self.n - perm[k - 1]);
            }
            amps[out] = amp;
        }
        Ok(PureState::from_normalized(self.n, amps))
    }

    /// Apply a 2×2 unitary to qubit `k`; all other marginals are untouched.
    pub fn apply_local_unitary(&self, k: usize, u: &[[Complex64; 2]; 2]) -> Result<PureState> {
        self.check_qubit(k)?;
        let dev = unitarity_deviation(u);
        if dev > tol::UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        let stride = 1usize << (self.n - k);
        let mut amps = self.amps.clone();
        for i in 0..self.dim() {
            if i & stride == 0 {
                let a0 = amps[i];
                let a1 = amps[i | stride];
                amps[i] = u[0][0] * a0 + u[0][1] * a1;
                amps[i | stride] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(PureState::from_normalized(self.n, amps))
    }
}

/// Normalize in place, returning the original norm.
fn normalize(v: &mut [Complex64]) -> f64 {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for a in v.iter_mut() {
            *a /= norm;
        }
    }
    norm
}

/// A deterministic unit vector orthogonal to the given unit vector.
fn unit_orthogonal_to(v: &[Complex64]) -> Vec<Complex64> {
    // Start from the basis vector where v is smallest and project it out.
    let (anchor, _) = v
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.norm_sqr().partial_cmp(&b.norm_sqr()).unwrap())
        .unwrap();
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    out[anchor] = Complex64::new(1.0, 0.0);
    let overlap = v[anchor].conj();
    for (o, &vi) in out.iter_mut().zip(v) {
        *o -= overlap * vi;
    }
    normalize(&mut out);
    out
}

pub(crate) fn unitarity_deviation(u: &[[Complex64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let mut e = Complex64::new(0.0, 0.0);
            for row in u {
                e += row[r].conj() * row[c];
            }
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((e - target).norm());
        }
    }
    worst
}

/// Apply a 4×4 matrix (row-major) to qubits `(q1, q2)` of a raw amplitude
/// vector, with `q1` supplying the high bit of the matrix index.
pub(crate) fn apply_two_qubit_matrix(
    amps: &mut [Complex64],
    n: usize,
    q1: usize,
    q2: usize,
    m: &[Complex64; 16],
) {
    let s1 = 1usize << (n - q1);
    let s2 = 1usize << (n - q2);
    for i in 0..amps.len() {
        if i & s1 == 0 && i & s2 == 0 {
            let idx = [i, i | s2, i | s1, i | s1 | s2];
            let old = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
            for r in 0..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..4 {
                    acc += m[r * 4 + c] * old[c];
                }
                amps[idx[r]] = acc;
            }
        }
    }
}

/// A 2×2 one-qubit density matrix (Hermitian, unit trace, PSD).
#[derive(Debug, Clone, PartialEq)]
pub struct QubitDensity {
    entries: [[Complex64; 2]; 2],
}

/// Closed-form eigendecomposition of a [`QubitDensity`].
///
/// `lambda_small <= 1/2 <= lambda_large` always; the eigenvector phase is
/// fixed by making the first component of modulus above
/// [`tol::PHASE_ANCHOR_MIN`] real and nonnegative. At degeneracy
/// (lambda within [`tol::DEGENERACY_TOL`] of 1/2) the basis falls back to
/// (|0>, |1>) and `degenerate` is set.
#[derive(Debug, Clone)]
pub struct Eig2 {
    pub lambda_small: f64,
    pub lambda_large: f64,
    pub v_small: [Complex64; 2],
    pub v_large: [Complex64; 2],
    pub degenerate: bool,
}

impl QubitDensity {
    /// Validate raw entries as a density matrix.
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let herm = (entries[0][1] - entries[1][0].conj())
            .norm()
            .max(entries[0][0].im.abs())
            .max(entries[1][1].im.abs());
        if herm > tol::HERMITICITY_TOL {
            return Err(Error::InvalidDensity {
                reason: format!("not Hermitian (deviation {herm:.3e})"),
            });
        }
        let trace = entries[0][0].re + entries[1][1].re;
        if (trace - 1.0).abs() > tol::TRACE_TOL {
            return Err(Error::InvalidDensity {
                reason: format!("trace {trace} is not 1"),
            });
        }
        let d = Self { entries };
        let eig = d.eig2();
        if eig.lambda_small < -tol::PSD_TOL {
            return Err(Error::InvalidDensity {
                reason: format!("negative eigenvalue {:.3e}", eig.lambda_small),
            });
        }
        Ok(d)
    }

    pub(crate) fn from_parts(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    /// The maximally mixed single-qubit state I/2.
    pub fn totally_mixed() -> Self {
        let h = Complex64::new(0.5, 0.0);
        let z = Complex64::new(0.0, 0.0);
        Self {
            entries: [[h, z], [z, h]],
        }
    }

    /// rho = lambda_small |v><v| + lambda_large |w><w| from spectral data.
    pub fn from_eigensystem(
        lambda_small: f64,
        v_small: &[Complex64; 2],
        v_large: &[Complex64; 2],
    ) -> Self {
        let ll = 1.0 - lambda_small;
        let mut entries = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                entries[r][c] = lambda_small * v_small[r] * v_small[c].conj()
                    + ll * v_large[r] * v_large[c].conj();
            }
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r][c]
    }

    pub fn max_entry_distance(&self, other: &QubitDensity) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }

    /// Largest off-diagonal modulus; zero for diagonal matrices.
    pub fn off_diagonal_norm(&self) -> f64 {
        self.entries[0][1].norm()
    }

    /// Closed-form eigendecomposition; see [`Eig2`].
    pub fn eig2(&self) -> Eig2 {
        let a = self.entries[0][0].re;
        let c = self.entries[1][1].re;
        let b = self.entries[0][1];
        let radius = ((a - c) * 0.5 * ((a - c) * 0.5) + b.norm_sqr()).sqrt();
        let lambda_small = 0.5 - radius;
        let lambda_large = 0.5 + radius;

        if radius <= tol::DEGENERACY_TOL {
            return Eig2 {
                lambda_small,
                lambda_large,
                v_small: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                v_large: [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                degenerate: true,
            };
        }

        let mut v_small = eigvec2(a, c, b, lambda_small);
        let mut v_large = eigvec2(a, c, b, lambda_large);
        // Exact orthogonality: project the small direction out of the large.
        let overlap = v_small[0].conj() * v_large[0] + v_small[1].conj() * v_large[1];
        v_large[0] -= overlap * v_small[0];
        v_large[1] -= overlap * v_small[1];
        let norm = (v_large[0].norm_sqr() + v_large[1].norm_sqr()).sqrt();
        v_large[0] /= norm;
        v_large[1] /= norm;
        fix_phase(&mut v_small);
        fix_phase(&mut v_large);
        Eig2 {
            lambda_small,
            lambda_large,
            v_small,
            v_large,
            degenerate: false,
        }
    }
}

/// Normalized eigenvector of [[a, b], [conj(b), c]] for eigenvalue `lam`,
/// picking the better-conditioned of the two analytic forms.
fn eigvec2(a: f64, c: f64, b: Complex64, lam: f64) -> [Complex64; 2] {
    let cand1 = [b, Complex64::new(lam - a, 0.0)];
    let cand2 = [Complex64::new(lam - c, 0.0), b.conj()];
    let n1 = cand1[0].norm_sqr() + cand1[1].norm_sqr();
    let n2 = cand2[0].norm_sqr() + cand2[1].norm_sqr();
    let (mut v, nsq) = if n1 >= n2 { (cand1, n1) } else { (cand2, n2) };
    let norm = nsq.sqrt();
    v[0] /= norm;
    v[1] /= norm;
    v
}

/// Make the first component with modulus above the anchor threshold real
/// and nonnegative.
fn fix_phase(v: &mut [Complex64; 2]) {
    for i in 0..2 {
        let m = v[i].norm();
        if m > tol::PHASE_ANCHOR_MIN {
            let phase = v[i].conj() / m;
            v[0] *= phase;
            v[1] *= phase;
            return;
        }
    }
}

/// Dense density matrix on a register of subsystems with the given local
/// dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validate raw entries (Hermiticity, unit trace, PSD via Jacobi).
    pub fn new(dims: Vec<usize>, entries: Vec<Complex64>) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if dims.is_empty() || dim == 0 || entries.len() != dim * dim {
            return Err(Error::InvalidDensity {
                reason: format!(
                    "entry count {} does not match dims {:?}",
                    entries.len(),
                    dims
                ),
            });
        }
        let d = Self { dims, entries };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_parts(dims: Vec<usize>, entries: Vec<Complex64>) -> Self {
        Self { dims, entries }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        let mut herm: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                herm =
                    herm.max((self.entries[r * dim + c] - self.entries[c * dim + r].conj()).norm());
            }
        }
        // The |x - conj(x)| diagonal check above already covers imaginary
        // diagonals, but halve for the doubled imaginary part.
        if herm > 2.0 * tol::HERMITICITY_TOL {
            return Err(Error::InvalidDensity {
                reason: format!("not Hermitian (deviation {herm:.3e})"),
            });
        }
        let trace = self.trace();
        if (trace.re - 1.0).abs() > tol::TRACE_TOL || trace.im.abs() > tol::TRACE_TOL {
            return Err(Error::InvalidDensity {
                reason: format!("trace {trace} is not 1"),
            });
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -tol::PSD_TOL {
            return Err(Error::InvalidDensity {
                reason: format!("negative eigenvalue {min:.3e}"),
            });
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim() + c]
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i]).sum()
    }

    /// Eigenvalues, ascending (Jacobi).
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigen::hermitian_eigenvalues(self.dim(), &self.entries)
    }

    /// Trace out every register position not listed in `keep`
    /// (0-based positions into `dims`, strictly increasing).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        for w in keep.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::BadSubset {
                    reason: format!("keep positions {keep:?} not strictly increasing"),
                });
            }
        }
        if keep.is_empty() {
            return Err(Error::BadSubset {
                reason: "keep positions empty".into(),
            });
        }
        if *keep.last().unwrap() >= self.dims.len() {
            return Err(Error::BadSubset {
                reason: format!(
                    "keep positions {keep:?} exceed register size {}",
                    self.dims.len()
                ),
            });
        }

        let strides = strides_of(&self.dims);
        let keep_dims: Vec<usize> = keep.iter().map(|&p| self.dims[p]).collect();
        let env_pos: Vec<usize> = (0..self.dims.len()).filter(|p| !keep.contains(p)).collect();
        let env_dims: Vec<usize> = env_pos.iter().map(|&p| self.dims[p]).collect();

        let kdim: usize = keep_dims.iter().product();
        let keep_base = mixed_radix_bases(
            &keep_dims,
            &keep.iter().map(|&p| strides[p]).collect::<Vec<_>>(),
        );
        let env_base = mixed_radix_bases(
            &env_dims,
            &env_pos.iter().map(|&p| strides[p]).collect::<Vec<_>>(),
        );

        let full = self.dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); kdim * kdim];
        for &eb in &env_base {
            for r in 0..kdim {
                let row = (keep_base[r] + eb) * full;
                for s in 0..kdim {
                    entries[r * kdim + s] += self.entries[row + keep_base[s] + eb];
                }
            }
        }
        Ok(DensityMatrix::from_parts(keep_dims, entries))
    }

    pub fn max_entry_distance(&self, other: &DensityMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Squared Frobenius distance to I/dim.
    pub fn frobenius_dist_sqr_to_mixed(&self) -> f64 {
        let dim = self.dim();
        let mixed = 1.0 / dim as f64;
        let mut sum = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                let target = if r == c { mixed } else { 0.0 };
                sum += (self.entries[r * dim + c] - target).norm_sqr();
            }
        }
        sum
    }
}

fn strides_of(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    strides
}

/// Index offsets of every digit combination over `dims` placed at the
/// given strides (most significant digit first).
fn mixed_radix_bases(dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    (0..total)
        .map(|mut packed| {
            let mut idx = 0usize;
            for pos in (0..dims.len()).rev() {
                let digit = packed % dims[pos];
                packed /= dims[pos];
                idx += digit * strides[pos];
            }
            idx
        })
        .collect()
}

/// Two-term Schmidt form of a state across qubit 1 vs the rest:
/// `a * phi0 (x) rest0 + b * phi1 (x) rest1` with `0 <= a <= b`,
/// `a^2 + b^2 = 1`, orthonormal factors on both sides.
#[derive(Debug, Clone)]
pub struct SchmidtSplit {
    pub a: f64,
    pub b: f64,
    /// Qubit-1 eigenvector for the smaller eigenvalue.
    pub phi0: [Complex64; 2],
    /// Qubit-1 eigenvector for the larger eigenvalue.
    pub phi1: [Complex64; 2],
    /// Normalized (n-1)-qubit partner of `phi0`.
    pub rest0: PureState,
    /// Normalized (n-1)-qubit partner of `phi1`.
    pub rest1: PureState,
    /// Set when lambda_1 in {0, 1/2} made a factor choice arbitrary.
    pub degenerate: bool,
}

impl SchmidtSplit {
    /// Rebuild the full state from the split.
    pub fn reassemble(&self) -> PureState {
        let half = self.rest0.dim();
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * half];
        for (r, amp) in amps.iter_mut().enumerate().take(half) {
            *amp = self.a * self.phi0[0] * self.rest0.amplitudes()[r]
                + self.b * self.phi1[0] * self.rest1.amplitudes()[r];
        }
        for r in 0..half {
            amps[half + r] = self.a * self.phi0[1] * self.rest0.amplitudes()[r]
                + self.b * self.phi1[1] * self.rest1.amplitudes()[r];
        }
        PureState::from_normalized(self.rest0.n() + 1, amps)
    }
}
