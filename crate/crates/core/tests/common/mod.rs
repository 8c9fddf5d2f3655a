#![allow(dead_code)]

use gluedwalk::jacobi::JacobiSpec;
use gluedwalk::walk::step;
use gluedwalk::{Complex64, WalkParams, WalkState};
use nalgebra::DMatrix;

pub const P_GRID: [f64; 4] = [1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9];

pub fn params(n: usize, p: f64) -> WalkParams {
    WalkParams::new(n, p).unwrap()
}

pub fn dense_jacobi(spec: &JacobiSpec) -> DMatrix<f64> {
    let m = spec.to_dense();
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// Sorted eigenvalues from nalgebra's symmetric eigensolver.
pub fn oracle_eigenvalues(spec: &JacobiSpec) -> Vec<f64> {
    let mut ev: Vec<f64> = dense_jacobi(spec).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Dense `U`, column `j` being `U e_j`.
pub fn dense_unitary(params: &WalkParams) -> DMatrix<Complex64> {
    let n = params.n();
    let dim = 4 * n - 2;
    let mut u = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[j] = Complex64::new(1.0, 0.0);
        let out = step(&WalkState::from_amplitudes(n, amps).unwrap(), params);
        for (i, a) in out.amplitudes().iter().enumerate() {
            u[(i, j)] = *a;
        }
    }
    u
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
