//! Property-based checks of the structural invariants: trace identities,
//! Schmidt reassembly, permutation algebra, polygon-cone geometry, and the
//! synthesis round trip.

mod common;

use common::random_basis;
use num_complex::Complex64;
use proptest::prelude::*;
use qmarginals::explorer::{pair_mixedness_objective, search_mixed4, SearchConfig};
use qmarginals::spectra::FeasibleSample;
use qmarginals::{check_polygon, sample_feasible_spectrum, synth_spectrum, PureState, Spectrum};

fn haar_state() -> impl Strategy<Value = PureState> {
    (2usize..=6, any::<u64>()).prop_map(|(n, seed)| PureState::haar(n, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reductions_preserve_trace(state in haar_state()) {
        for k in 1..=state.n() {
            let rho = state.reduce_one_qubit(k).unwrap();
            let trace = rho.entry(0, 0).re + rho.entry(1, 1).re;
            prop_assert!((trace - 1.0).abs() < 1e-10);
        }
        let dm = state.reduce_subset(&[1, state.n()]).unwrap();
        prop_assert!((dm.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn staged_partial_trace_matches_direct(state in haar_state(), pick in any::<u64>()) {
        let n = state.n();
        // Two nested subsets driven by the pick bits.
        let big: Vec<usize> = (1..=n).filter(|q| (pick >> q) & 1 == 1 || *q <= 2).collect();
        let small: Vec<usize> = big.iter().copied().filter(|q| (pick >> (q + 8)) & 1 == 1 || *q == big[0]).collect();
        let dm_big = state.reduce_subset(&big).unwrap();
        let keep: Vec<usize> = big.iter().enumerate()
            .filter(|(_, q)| small.contains(q)).map(|(pos, _)| pos).collect();
        let staged = dm_big.partial_trace(&keep).unwrap();
        let direct = state.reduce_subset(&small).unwrap();
        prop_assert!(staged.max_entry_distance(&direct) < 1e-12);
    }

    #[test]
    fn eig2_reconstructs(state in haar_state()) {
        for k in 1..=state.n() {
            let rho = state.reduce_one_qubit(k).unwrap();
            let e = rho.eig2();
            let back = qmarginals::QubitDensity::from_eigensystem(e.lambda_small, &e.v_small, &e.v_large);
            prop_assert!(rho.max_entry_distance(&back) < 1e-10);
            prop_assert!(e.lambda_small <= 0.5 && e.lambda_large >= 0.5);
        }
    }

    #[test]
    fn schmidt_split_reassembles(state in haar_state()) {
        let split = state.schmidt_split_first().unwrap();
        prop_assert!((split.a * split.a + split.b * split.b - 1.0).abs() < 1e-10);
        prop_assert!(split.a <= split.b + 1e-12);
        prop_assert!(split.rest0.inner(&split.rest1).norm() < 1e-10);
        prop_assert!(split.reassemble().l2_distance(&state) < 1e-10);
    }

    #[test]
    fn permutation_composition(state in haar_state(), seed in any::<u64>()) {
        let n = state.n();
        let perm1 = shuffled(n, seed);
        let perm2 = shuffled(n, seed.wrapping_add(1));
        let sequential = state.permute_qubits(&perm1).unwrap().permute_qubits(&perm2).unwrap();
        // compose: qubit k -> perm1[k-1] -> perm2[perm1[k-1]-1]
        let composed: Vec<usize> = (1..=n).map(|k| perm2[perm1[k - 1] - 1]).collect();
        let at_once = state.permute_qubits(&composed).unwrap();
        prop_assert!(sequential.l2_distance(&at_once) < 1e-12);
    }

    #[test]
    fn local_unitary_only_touches_target(state in haar_state(), t in 0.0..std::f64::consts::PI, a in 0.0..std::f64::consts::TAU, b in 0.0..std::f64::consts::TAU) {
        let (v0, v1) = random_basis(t, a, b);
        let u = [[v0[0], v1[0]], [v0[1], v1[1]]];
        let k = 1 + (state.n() / 2);
        let rotated = state.apply_local_unitary(k, &u).unwrap();
        for j in 1..=state.n() {
            if j != k {
                let before = state.reduce_one_qubit(j).unwrap();
                let after = rotated.reduce_one_qubit(j).unwrap();
                prop_assert!(before.max_entry_distance(&after) < 1e-12);
            }
        }
    }

    #[test]
    fn feasible_cone_closed_under_scaling(n in 3usize..=8, seed in any::<u64>(), t in 0.0..1.0f64) {
        let FeasibleSample { spectrum, .. } = sample_feasible_spectrum(n, seed);
        let scaled = Spectrum::new(spectrum.lambdas().iter().map(|l| l * t).collect()).unwrap();
        prop_assert!(check_polygon(&scaled, 0.0).feasible);
    }

    #[test]
    fn polygon_check_is_permutation_invariant(lams in prop::collection::vec(0.0..0.5f64, 1..8), seed in any::<u64>()) {
        let n = lams.len();
        let spec = Spectrum::new(lams.clone()).unwrap();
        let rep = check_polygon(&spec, 0.0);
        let perm = shuffled(n, seed);
        let mut permuted = vec![0.0; n];
        for (k, &image) in perm.iter().enumerate() {
            permuted[image - 1] = lams[k];
        }
        let prep = check_polygon(&Spectrum::new(permuted).unwrap(), 0.0);
        prop_assert_eq!(rep.feasible, prep.feasible);
        for (k, &image) in perm.iter().enumerate() {
            prop_assert!((rep.slacks[k] - prep.slacks[image - 1]).abs() < 1e-12);
        }
    }

    #[test]
    fn synthesis_round_trip(n in 1usize..=7, seed in any::<u64>()) {
        let sample = sample_feasible_spectrum(n, seed);
        let result = synth_spectrum(&sample.spectrum).unwrap();
        for (want, got) in sample.spectrum.lambdas().iter().zip(result.achieved.lambdas()) {
            prop_assert!((want - got).abs() < 1e-10);
        }
        // Construction property: marginals diagonal with the smaller
        // eigenvalue on |0><0|.
        for (k, &want) in sample.spectrum.lambdas().iter().enumerate() {
            let rho = result.state.reduce_one_qubit(k + 1).unwrap();
            prop_assert!(rho.off_diagonal_norm() <= 1e-12);
            prop_assert!((rho.entry(0, 0).re - want).abs() < 1e-10);
        }
        // Every recursion level chose chi so that sin^2 chi times the
        // residual weight reproduces that level's smallest eigenvalue,
        // replayed here from the requested spectrum alone.
        let mut tuple: Vec<f64> = sample.spectrum.lambdas().to_vec();
        tuple.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for level in &result.trace {
            let smallest = *tuple.last().unwrap();
            let gap = tuple[0] - smallest;
            prop_assert!((level.gap - gap).abs() < 1e-15);
            prop_assert!((level.chi.sin().powi(2) * (1.0 - level.gap) - smallest).abs() <= 1e-12);
            let mut child = vec![gap];
            child.extend_from_slice(&tuple[1..tuple.len() - 1]);
            child.sort_by(|a, b| b.partial_cmp(a).unwrap());
            tuple = child;
        }
    }
}

fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    // Tiny deterministic Fisher-Yates on 1..=n.
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut s = seed | 1;
    for i in (1..n).rev() {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let j = (s >> 33) as usize % (i + 1);
        perm.swap(i, j);
    }
    perm
}

#[test]
fn objective_zero_iff_pairs_totally_mixed() {
    // Two Bell pairs laid out as (1,3)(2,4) make the (1,2) marginal I/4.
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for idx in [0b0000, 0b0101, 0b1010, 0b1111] {
        amps[idx] = Complex64::new(0.5, 0.0);
    }
    let s = PureState::new(4, amps).unwrap();
    let zero = pair_mixedness_objective(&s, &[(1, 2)]).unwrap();
    assert!(zero < 1e-24, "objective {zero}");
    let dm = s.reduce_subset(&[1, 2]).unwrap();
    assert!(dm.frobenius_dist_sqr_to_mixed() < 1e-24);

    // And nonzero whenever some listed pair is not totally mixed.
    let nonzero = pair_mixedness_objective(&s, &[(1, 3)]).unwrap();
    assert!(nonzero > 1e-3);
}

#[test]
fn search_restart_bookkeeping() {
    let config = SearchConfig {
        restarts: 5,
        max_iters: 40,
        seed: 31,
        ..Default::default()
    };
    let result = search_mixed4(&config).unwrap();
    assert_eq!(result.per_restart.len(), 5);
    for (i, rec) in result.per_restart.iter().enumerate() {
        assert_eq!(rec.seed, 31 + i as u64);
        assert!(result.best_objective <= rec.objective);
    }
}
