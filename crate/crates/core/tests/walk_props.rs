mod common;

use common::{dense_unitary, params, P_GRID};
use gluedwalk::jacobi::eigensystem;
use gluedwalk::walk::{evolve_spectral, lift_eigenpairs, position_distribution, step};
use gluedwalk::{ArcIndex, Chirality, Complex64, Error, WalkParams, WalkState};
use proptest::prelude::*;

fn lifted(params: &WalkParams) -> Vec<gluedwalk::UnitaryEigenpair> {
    lift_eigenpairs(&eigensystem(params).unwrap(), params).unwrap()
}

#[test]
fn eigenphases_are_distinct() {
    for n in 2..=8 {
        for p in P_GRID {
            let eigs = lifted(&params(n, p));
            for a in 0..eigs.len() {
                for b in a + 1..eigs.len() {
                    let gap = (eigs[a].mu - eigs[b].mu).norm();
                    assert!(gap > 1e-10, "n={n} p={p}: {gap:e}");
                }
            }
        }
    }
}

#[test]
fn eigenphases_come_from_arccos_of_jacobi_spectrum() {
    for n in 2..=8 {
        for p in P_GRID {
            let params = params(n, p);
            let jacobi = eigensystem(&params).unwrap();
            let mut expected: Vec<f64> = vec![0.0, std::f64::consts::PI];
            for e in &jacobi[1..2 * n - 1] {
                let theta = e.lambda.acos();
                expected.push(theta);
                expected.push(-theta);
            }
            expected.sort_by(f64::total_cmp);
            let mut phases: Vec<f64> = lifted(&params)
                .iter()
                .map(|e| {
                    let phi = e.mu.arg();
                    if (phi + std::f64::consts::PI).abs() < 1e-12 {
                        std::f64::consts::PI
                    } else {
                        phi
                    }
                })
                .collect();
            phases.sort_by(f64::total_cmp);
            for (a, b) in phases.iter().zip(&expected) {
                assert!((a - b).abs() <= 1e-9, "n={n} p={p}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn spectral_evolution_matches_stepping() {
    for n in 2..=8 {
        for p in P_GRID {
            let params = params(n, p);
            let eigs = lifted(&params);
            for start in [ArcIndex::new(1, Chirality::R), ArcIndex::new(n, Chirality::L)] {
                let initial = WalkState::basis(n, start).unwrap();
                let mut state = initial.clone();
                for t in 0..=1000u64 {
                    if t % 97 == 0 || t == 1000 {
                        let spectral = evolve_spectral(&eigs, &initial, t);
                        for (a, b) in spectral.amplitudes().iter().zip(state.amplitudes()) {
                            assert!((a - b).norm() <= 1e-8, "n={n} p={p} t={t}");
                        }
                    }
                    state = step(&state, &params);
                }
            }
        }
    }
}

#[test]
fn dense_unitary_is_unitary() {
    for n in 2..=8 {
        for p in [0.2, 0.5, 0.75] {
            let u = dense_unitary(&params(n, p));
            let dim = 4 * n - 2;
            let err = (u.adjoint() * &u - nalgebra::DMatrix::<Complex64>::identity(dim, dim))
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            assert!(err <= 1e-13, "n={n} p={p}: {err:e}");
        }
    }
}

#[test]
fn lift_refuses_unresolvable_edge_pair() {
    let params = params(20, 0.9);
    let err = lift_eigenpairs(&eigensystem(&params).unwrap(), &params).unwrap_err();
    assert!(matches!(err, Error::Degenerate(_)), "{err:?}");
}

proptest! {
    #[test]
    fn step_preserves_norm(
        n in 2usize..10,
        p in 0.01f64..0.99,
        re in prop::collection::vec(-1.0f64..1.0, 38),
        im in prop::collection::vec(-1.0f64..1.0, 38),
        steps in 1usize..50,
    ) {
        let dim = 4 * n - 2;
        let raw: Vec<Complex64> = re.iter().zip(&im).take(dim).map(|(a, b)| Complex64::new(*a, *b)).collect();
        let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let amps = raw.iter().map(|c| c / norm).collect();
        let params = WalkParams::new(n, p).unwrap();
        let mut state = WalkState::from_amplitudes(n, amps).unwrap();
        for _ in 0..steps {
            state = step(&state, &params);
        }
        prop_assert!((state.norm_sq() - 1.0).abs() <= 1e-12);
        let dist = position_distribution(&state).unwrap();
        prop_assert!((dist.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn flat_index_round_trips(n in 2usize..40, k in 0usize..200) {
        prop_assume!(k < 4 * n - 2);
        let arc = ArcIndex::from_flat(k);
        prop_assert_eq!(arc.flat(n), Some(k));
    }
}
