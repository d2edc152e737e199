//! Small dense Hermitian eigensolver based on cyclic Jacobi rotations.
//!
//! Everything this crate diagonalizes beyond 2×2 is a reduced density
//! matrix of modest dimension, so a dependency-free Jacobi sweep is both
//! simple and accurate to near machine precision.

use num_complex::Complex64;

use crate::tol::JACOBI_TOL;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian matrix. `values` are ascending and
/// `values[j]` pairs with column `j` of the row-major `vectors` matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub dim: usize,
    pub values: Vec<f64>,
    pub vectors: Vec<Complex64>,
}

impl HermitianEig {
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| self.vectors[i * self.dim + j])
            .collect()
    }
}

fn off_diagonal_norm(h: &[Complex64], dim: usize) -> f64 {
    let mut sum = 0.0;
    for p in 0..dim {
        for q in 0..dim {
            if p != q {
                sum += h[p * dim + q].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Diagonalize a Hermitian `dim x dim` matrix given in row-major order.
///
/// The input is only read; mild non-Hermiticity (at rounding level) is
/// tolerated because each rotation works with the Hermitian part.
pub fn hermitian_eig(dim: usize, entries: &[Complex64]) -> HermitianEig {
    assert_eq!(entries.len(), dim * dim, "matrix shape mismatch");
    let mut h = entries.to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        v[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    if dim > 1 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&h, dim) <= JACOBI_TOL {
                break;
            }
            for p in 0..dim {
                for q in (p + 1)..dim {
                    rotate(&mut h, &mut v, dim, p, q);
                }
            }
        }
    }

    // Sort ascending by eigenvalue, carrying columns along.
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.sort_by(|&a, &b| h[a * dim + a].re.partial_cmp(&h[b * dim + b].re).unwrap());
    let values: Vec<f64> = idx.iter().map(|&j| h[j * dim + j].re).collect();
    let mut vectors = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (new_j, &old_j) in idx.iter().enumerate() {
        for i in 0..dim {
            vectors[i * dim + new_j] = v[i * dim + old_j];
        }
    }
    HermitianEig {
        dim,
        values,
        vectors,
    }
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(dim: usize, entries: &[Complex64]) -> Vec<f64> {
    hermitian_eig(dim, entries).values
}

/// One Jacobi rotation annihilating the (p, q) entry: h <- R† h R, v <- v R.
fn rotate(h: &mut [Complex64], v: &mut [Complex64], dim: usize, p: usize, q: usize) {
    let apq = h[p * dim + q];
    let m = apq.norm();
    if m < 1e-300 {
        return;
    }
    let phase = apq / m;
    let alpha = h[p * dim + p].re;
    let gamma = h[q * dim + q].re;
    let diff = alpha - gamma;
    // Smaller-magnitude root of m t^2 - (gamma - alpha) t - m = 0.
    let sign = if diff >= 0.0 { 1.0 } else { -1.0 };
    let t = sign * 2.0 * m / (diff.abs() + (diff * diff + 4.0 * m * m).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_phase = phase * s;

    // Column update: M <- M R.
    for i in 0..dim {
        let mp = h[i * dim + p];
        let mq = h[i * dim + q];
        h[i * dim + p] = c * mp + s_phase.conj() * mq;
        h[i * dim + q] = -s_phase * mp + c * mq;
    }
    // Row update: M <- R† M.
    for j in 0..dim {
        let mp = h[p * dim + j];
        let mq = h[q * dim + j];
        h[p * dim + j] = c * mp + s_phase * mq;
        h[q * dim + j] = -s_phase.conj() * mp + c * mq;
    }
    // Clean the pair we just annihilated and resymmetrize the diagonal.
    h[p * dim + q] = Complex64::new(0.0, 0.0);
    h[q * dim + p] = Complex64::new(0.0, 0.0);
    h[p * dim + p] = Complex64::new(h[p * dim + p].re, 0.0);
    h[q * dim + q] = Complex64::new(h[q * dim + q].re, 0.0);

    // Accumulate eigenvectors: V <- V R.
    for i in 0..dim {
        let vp = v[i * dim + p];
        let vq = v[i * dim + q];
        v[i * dim + p] = c * vp + s_phase.conj() * vq;
        v[i * dim + q] = -s_phase * vp + c * vq;
    }
}
