//! Time-averaged distributions and their two-eigenvector lower bounds.
//!
//! `p̄_i(x)` is the Cesàro limit of `ℙ_i(X_t = x)`, where the walk starts from
//! `|1,R⟩` for `i = 1`, from `|2n,L⟩` for `i = 2n`, and from `|i,L⟩` or `|i,R⟩`
//! with probability ½ each otherwise. Since every eigenvalue of `U` is simple,
//!
//! ```text
//! p̄_i(x) = c_i Σ_k W_k(x) W_k(i),   W_k(y) = |u_k(y,L)|² + |u_k(y,R)|²,
//! ```
//!
//! with `c_i = 1` at the endpoints and `½` inside. Keeping only the `μ = ±1`
//! terms gives a lower bound whose closed form is [`lower_bound`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jacobi::{eigen_pm1, eigensystem};
use crate::matrix::Matrix;
use crate::params::WalkParams;
use crate::walk::{arc_vector, lift_eigenpairs, step, ArcIndex, Chirality, WalkState};

/// Minimum distance between distinct eigenvalues of `U` on the unit circle
/// for the spectral formula to be used.
pub const PHASE_GAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Spectral,
    /// Cesàro mean over `t = 0..horizon`.
    Empirical { horizon: u64 },
}

/// `values[(i-1, x-1)] = p̄_i(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeAveragedDist {
    pub n: usize,
    pub values: Matrix,
    pub method: Method,
}

impl TimeAveragedDist {
    /// `p̄_i(x)` with 1-based `i`, `x`.
    pub fn get(&self, i: usize, x: usize) -> f64 {
        self.values[(i - 1, x - 1)]
    }

    /// Largest violation of `p̄_i(x) = p̄_{2n+1-i}(x)` and
    /// `p̄_i(x) = p̄_i(2n+1-x)`.
    pub fn symmetry_error(&self) -> f64 {
        let m = 2 * self.n;
        let mut worst = 0.0f64;
        for i in 0..m {
            for x in 0..m {
                let v = self.values[(i, x)];
                worst = worst
                    .max((v - self.values[(m - 1 - i, x)]).abs())
                    .max((v - self.values[(i, m - 1 - x)]).abs());
            }
        }
        worst
    }
}

/// Initial arcs and their weights for start vertex `i`.
fn initial_states(n: usize, i: usize) -> Vec<(ArcIndex, f64)> {
    if i == 1 {
        vec![(ArcIndex::new(1, Chirality::R), 1.0)]
    } else if i == 2 * n {
        vec![(ArcIndex::new(2 * n, Chirality::L), 1.0)]
    } else {
        vec![(ArcIndex::new(i, Chirality::L), 0.5), (ArcIndex::new(i, Chirality::R), 0.5)]
    }
}

fn start_weight(n: usize, i: usize) -> f64 {
    if i == 1 || i == 2 * n {
        1.0
    } else {
        0.5
    }
}

/// `p̄` from the full eigensystem of `U`.
pub fn time_avg_spectral(params: &WalkParams) -> Result<TimeAveragedDist> {
    let n = params.n();
    let lifted = lift_eigenpairs(&eigensystem(params)?, params)?;

    for (a, ea) in lifted.iter().enumerate() {
        for eb in &lifted[a + 1..] {
            let gap = (ea.mu - eb.mu).norm();
            if gap <= PHASE_GAP {
                return Err(Error::Degenerate(format!(
                    "eigenvalues {} and {} of U are only {gap:e} apart",
                    ea.mu, eb.mu
                )));
            }
        }
    }

    // Only the diagonal k = k' terms survive the Cesàro limit.
    let weights: Vec<Vec<f64>> = lifted.iter().map(|e| e.vertex_weights()).collect();
    let m = 2 * n;
    let values = Matrix::from_fn(m, m, |i, x| {
        start_weight(n, i + 1) * weights.iter().map(|w| w[x] * w[i]).sum::<f64>()
    });
    Ok(TimeAveragedDist { n, values, method: Method::Spectral })
}

/// `p̄` as the exact average of `ℙ_i(X_t = x)` over `t = 0..horizon`.
pub fn time_avg_empirical(params: &WalkParams, horizon: u64) -> Result<TimeAveragedDist> {
    if horizon == 0 {
        return Err(Error::InvalidParams("horizon must be >= 1".into()));
    }
    let n = params.n();
    let m = 2 * n;
    let rows: Vec<Vec<f64>> = (1..=m)
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![0.0; m];
            for (arc, weight) in initial_states(n, i) {
                let mut state = WalkState::basis(n, arc).expect("start arcs are valid");
                for t in 0..horizon {
                    for (a, mass) in acc.iter_mut().zip(state.vertex_masses()) {
                        *a += weight * mass;
                    }
                    if t + 1 < horizon {
                        state = step(&state, params);
                    }
                }
            }
            acc.iter().map(|a| a / horizon as f64).collect()
        })
        .collect();
    let values = Matrix::from_fn(m, m, |i, x| rows[i][x]);
    Ok(TimeAveragedDist { n, values, method: Method::Empirical { horizon } })
}

/// Lower bound from the `μ = ±1` terms of the spectral formula, evaluated
/// directly from the lifted eigenvectors on every `(i, x)`.
pub fn lower_bound_generic(params: &WalkParams) -> Matrix {
    let n = params.n();
    let m = 2 * n;
    let (plus, minus) = eigen_pm1(params);
    let weights: Vec<Vec<f64>> = [plus, minus]
        .iter()
        .map(|pair| {
            let a = arc_vector(&pair.normalized(), params);
            let mut w = vec![0.0; m];
            for (k, c) in a.iter().enumerate() {
                w[ArcIndex::from_flat(k).vertex - 1] += c.norm_sqr();
            }
            w
        })
        .collect();
    Matrix::from_fn(m, m, |i, x| {
        start_weight(n, i + 1) * weights.iter().map(|w| w[x] * w[i]).sum::<f64>()
    })
}

/// Closed-form lower bound
///
/// ```text
/// (p-q)² (q/p)^{i-1} / (2 [δ₁(i) + (1-δ₁(i)) 2q] {2p - (q/p)^{n-1}}²)
///     · [δ₁(x) + (1-δ₁(x)) (q/p)^{x-1}/q]
/// ```
///
/// on `i, x ∈ 1..=n`, mirrored to the other quadrants. At `p = q` the closed
/// form is `0/0` and [`lower_bound_generic`] is returned instead.
pub fn lower_bound(params: &WalkParams) -> Matrix {
    if params.is_balanced() {
        return lower_bound_generic(params);
    }
    let (n, p, q) = (params.n(), params.p(), params.q());
    let r = q / p;
    let denom_core = 2.0 * p - r.powi(n as i32 - 1);
    let closed = |i: usize, x: usize| {
        let start = if i == 1 { 1.0 } else { 2.0 * q };
        let target = if x == 1 { 1.0 } else { r.powi(x as i32 - 1) / q };
        (p - q).powi(2) * r.powi(i as i32 - 1) / (2.0 * start * denom_core * denom_core) * target
    };
    let m = 2 * n;
    let fold = |v: usize| if v <= n { v } else { m + 1 - v };
    Matrix::from_fn(m, m, |i, x| closed(fold(i + 1), fold(x + 1)))
}

/// Where `(i, x)` sits as `n → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitSite {
    /// Fixed `i, x ∈ {1, 2, …}`.
    Fixed { i: usize, x: usize },
    /// `2n - (i + x) → k`.
    NearCentre { k: u32 },
    /// Both distances diverge.
    Divergent,
}

/// Limit of the lower bound as `n → ∞`.
///
/// For `p > q` the bound survives only at fixed `(i, x)`:
/// `(q/p)^{i+x-2} / (2 [δ₁(i) + (1-δ₁(i)) 2q][δ₁(x) + (1-δ₁(x)) q]) · ((1-q/p)/2)²`.
/// For `p < q` it survives only near the centre: `(p/q)^k ((1-p/q)/2)²`.
pub fn limit_bound(p: f64, site: LimitSite) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidLimitCase(format!("p = {p} is outside (0, 1)")));
    }
    let q = 1.0 - p;
    if p == q {
        return Err(Error::InvalidLimitCase("p = q has no localization limit".into()));
    }
    match site {
        LimitSite::Fixed { i, x } if i == 0 || x == 0 => {
            Err(Error::InvalidLimitCase("vertices are numbered from 1".into()))
        }
        LimitSite::Fixed { i, x } if p > q => {
            let r = q / p;
            let start = if i == 1 { 1.0 } else { 2.0 * q };
            let target = if x == 1 { 1.0 } else { q };
            Ok(r.powi((i + x - 2) as i32) / (2.0 * start * target) * ((1.0 - r) / 2.0).powi(2))
        }
        LimitSite::NearCentre { k } if p < q => {
            let r = p / q;
            Ok(r.powi(k as i32) * ((1.0 - r) / 2.0).powi(2))
        }
        _ => Ok(0.0),
    }
}

/// Vertices at which [`bound_report`] evaluates the limit values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimitProbe {
    pub i: usize,
    pub x: usize,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound: Matrix,
    pub dist: TimeAveragedDist,
    /// `dist - bound`.
    pub margin: Matrix,
    pub limit_p_gt_q: Option<f64>,
    pub limit_p_lt_q: Option<f64>,
}

impl BoundReport {
    pub fn min_margin(&self) -> f64 {
        self.margin.min()
    }
}

pub fn bound_report(params: &WalkParams, probe: Option<LimitProbe>) -> Result<BoundReport> {
    let dist = time_avg_spectral(params)?;
    let bound = lower_bound(params);
    let margin = dist.values.sub(&bound);
    let (p, q) = (params.p(), params.q());
    let (mut limit_p_gt_q, mut limit_p_lt_q) = (None, None);
    if let Some(probe) = probe {
        if p > q {
            limit_p_gt_q = Some(limit_bound(p, LimitSite::Fixed { i: probe.i, x: probe.x })?);
        } else if p < q {
            limit_p_lt_q = Some(limit_bound(p, LimitSite::NearCentre { k: probe.k })?);
        }
    }
    Ok(BoundReport { bound, dist, margin, limit_p_gt_q, limit_p_lt_q })
}
