//! Shared helpers for the integration suites, most importantly a
//! brute-force partial-trace oracle that is deliberately independent of
//! the library's implementation: it materializes the full outer product
//! and sums entries whose traced-out labels agree.

#![allow(dead_code)]

use num_complex::Complex64;
use qmarginals::PureState;

pub const Z: Complex64 = Complex64::new(0.0, 0.0);

pub fn bit(idx: usize, k: usize, n: usize) -> usize {
    (idx >> (n - k)) & 1
}

/// Brute-force reduced density matrix over the kept qubits (1-based,
/// strictly increasing), row-major.
pub fn naive_reduce(state: &PureState, keep: &[usize]) -> Vec<Complex64> {
    let n = state.n();
    let dim = state.dim();
    let amps = state.amplitudes();

    // Full outer product |psi><psi|.
    let mut outer = vec![Z; dim * dim];
    for x in 0..dim {
        for y in 0..dim {
            outer[x * dim + y] = amps[x] * amps[y].conj();
        }
    }

    let m = keep.len();
    let kdim = 1usize << m;
    let traced: Vec<usize> = (1..=n).filter(|q| !keep.contains(q)).collect();
    let mut rho = vec![Z; kdim * kdim];
    for x in 0..dim {
        for y in 0..dim {
            if traced.iter().any(|&q| bit(x, q, n) != bit(y, q, n)) {
                continue;
            }
            let mut r = 0usize;
            let mut s = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                r |= bit(x, q, n) << (m - 1 - pos);
                s |= bit(y, q, n) << (m - 1 - pos);
            }
            rho[r * kdim + s] += outer[x * dim + y];
        }
    }
    rho
}

/// Same oracle for base-d amplitude vectors, reducing to one particle.
pub fn naive_reduce_qudit(amps: &[Complex64], d: usize, n: usize, k: usize) -> Vec<Complex64> {
    let dim = amps.len();
    assert_eq!(dim, d.pow(n as u32));
    let digit = |idx: usize, q: usize| (idx / d.pow((n - q) as u32)) % d;

    let mut outer = vec![Z; dim * dim];
    for x in 0..dim {
        for y in 0..dim {
            outer[x * dim + y] = amps[x] * amps[y].conj();
        }
    }
    let mut rho = vec![Z; d * d];
    for x in 0..dim {
        for y in 0..dim {
            if (1..=n)
                .filter(|&q| q != k)
                .any(|q| digit(x, q) != digit(y, q))
            {
                continue;
            }
            rho[digit(x, k) * d + digit(y, k)] += outer[x * dim + y];
        }
    }
    rho
}

/// Max entry distance between a library density matrix and an oracle one.
pub fn max_entry_diff(dm: &qmarginals::DensityMatrix, oracle: &[Complex64]) -> f64 {
    let dim = dm.dim();
    assert_eq!(oracle.len(), dim * dim);
    let mut worst: f64 = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            worst = worst.max((dm.entry(r, c) - oracle[r * dim + c]).norm());
        }
    }
    worst
}

/// Seed shared by the necessity sweep and the certificate suite so that
/// both run over exactly the same states.
pub fn sweep_seed(n: usize, i: usize) -> u64 {
    n as u64 * 1_000_003 + i as u64
}

pub fn ghz(n: usize) -> PureState {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![Z; 1 << n];
    amps[0] = h;
    amps[(1 << n) - 1] = h;
    PureState::new(n, amps).unwrap()
}

pub fn w3() -> PureState {
    let t = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    PureState::new(3, vec![Z, t, t, Z, t, Z, Z, Z]).unwrap()
}

/// A random one-qubit orthonormal basis from three angles.
pub fn random_basis(theta: f64, alpha: f64, beta: f64) -> ([Complex64; 2], [Complex64; 2]) {
    let (s, c) = theta.sin_cos();
    let v0 = [
        Complex64::from_polar(c, alpha),
        Complex64::from_polar(s, beta),
    ];
    let v1 = [-v0[1].conj(), v0[0].conj()];
    (v0, v1)
}
