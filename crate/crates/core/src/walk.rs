//! The Szegedy walk `U = S C` on the path `P_2n`.
//!
//! Basis arcs are `|i, J⟩` for `i = 1..=2n`, `J ∈ {L, R}`, without `|1, L⟩` and
//! `|2n, R⟩`, for `4n - 2` arcs in total. They are stored flat in the order
//! `(1,R), (2,L), (2,R), …, (2n-1,L), (2n-1,R), (2n,L)`, so the shift pairs
//! flat indices `2m` and `2m + 1`.
//!
//! The coin is the identity on the two endpoint arcs, `2|φ₁⟩⟨φ₁| - I` with
//! `φ₁ = √p|L⟩ + √q|R⟩` on vertices `2..=n`, and `2|φ₂⟩⟨φ₂| - I` with
//! `φ₂ = √q|L⟩ + √p|R⟩` on vertices `n+1..2n`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jacobi::{EigenKind, Eigenpair};
use crate::params::WalkParams;

/// Smallest `1 - λ²` an interior Jacobi eigenvalue may have and still be
/// lifted: `‖a - e^{iφ} b‖² = 2(1 - λ²)`, so below this the lifted vector is
/// dominated by cancellation.
pub const LIFT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArcIndex {
    pub vertex: usize,
    pub chirality: Chirality,
}

impl ArcIndex {
    pub fn new(vertex: usize, chirality: Chirality) -> Self {
        Self { vertex, chirality }
    }

    /// Flat position for a path with half length `n`, or `None` for an
    /// invalid arc.
    pub fn flat(self, n: usize) -> Option<usize> {
        let v = self.vertex;
        match self.chirality {
            Chirality::R if (1..2 * n).contains(&v) => Some(2 * (v - 1)),
            Chirality::L if (2..=2 * n).contains(&v) => Some(2 * (v - 1) - 1),
            _ => None,
        }
    }

    pub fn from_flat(k: usize) -> Self {
        if k.is_multiple_of(2) {
            Self::new(k / 2 + 1, Chirality::R)
        } else {
            Self::new(k.div_ceil(2) + 1, Chirality::L)
        }
    }
}

/// Vertex of flat arc `k` (1-based).
fn vertex_of(k: usize) -> usize {
    k.div_ceil(2) + 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl WalkState {
    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n < 2 || amplitudes.len() != 4 * n - 2 {
            return Err(Error::InvalidParams(format!(
                "expected {} amplitudes for n = {n}, got {}",
                (4 * n).saturating_sub(2),
                amplitudes.len()
            )));
        }
        Ok(Self { n, amplitudes })
    }

    /// Unit mass on a single arc.
    pub fn basis(n: usize, arc: ArcIndex) -> Result<Self> {
        let k = arc
            .flat(n)
            .ok_or_else(|| Error::InvalidParams(format!("invalid arc {arc:?} for n = {n}")))?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 4 * n - 2];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(n, amplitudes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, arc: ArcIndex) -> Option<Complex64> {
        arc.flat(self.n).map(|k| self.amplitudes[k])
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Per-vertex mass without the normalization check.
    pub(crate) fn vertex_masses(&self) -> Vec<f64> {
        let mut out = vec![0.0; 2 * self.n];
        for (k, a) in self.amplitudes.iter().enumerate() {
            out[vertex_of(k) - 1] += a.norm_sqr();
        }
        out
    }
}

/// The `2 × 2` coin block acting on `(L, R)` at an inner vertex.
pub fn coin_block(params: &WalkParams, vertex: usize) -> [[f64; 2]; 2] {
    let (p, q) = (params.p(), params.q());
    let off = 2.0 * (p * q).sqrt();
    if vertex <= params.n() {
        [[2.0 * p - 1.0, off], [off, 2.0 * q - 1.0]]
    } else {
        [[2.0 * q - 1.0, off], [off, 2.0 * p - 1.0]]
    }
}

pub fn apply_coin(state: &WalkState, params: &WalkParams) -> WalkState {
    assert_eq!(state.n, params.n(), "state and parameters disagree on n");
    let mut out = state.amplitudes.clone();
    for v in 2..2 * state.n {
        let (l, r) = (2 * v - 3, 2 * v - 2);
        let c = coin_block(params, v);
        let (al, ar) = (state.amplitudes[l], state.amplitudes[r]);
        out[l] = al * c[0][0] + ar * c[0][1];
        out[r] = al * c[1][0] + ar * c[1][1];
    }
    WalkState { n: state.n, amplitudes: out }
}

/// `(i, R) -> (i+1, L)` and `(i, L) -> (i-1, R)`.
pub fn apply_shift(state: &WalkState) -> WalkState {
    let mut out = state.amplitudes.clone();
    for pair in out.chunks_exact_mut(2) {
        pair.swap(0, 1);
    }
    WalkState { n: state.n, amplitudes: out }
}

/// One step of `U = S C`.
pub fn step(state: &WalkState, params: &WalkParams) -> WalkState {
    apply_shift(&apply_coin(state, params))
}

/// `ℙ(X = x)` for `x = 1..=2n` (index `x - 1`). The state must be normalized.
pub fn position_distribution(state: &WalkState) -> Result<Vec<f64>> {
    let norm_sq = state.norm_sq();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm_sq));
    }
    Ok(state.vertex_masses())
}

/// Eigenpair of `U`: `U u = μ u` with `μ = e^{iφ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryEigenpair {
    pub mu: Complex64,
    pub phi: f64,
    pub u: Vec<Complex64>,
    pub source_lambda: f64,
    /// `1`, `±k` for `k = 2..2n`, or `2n`.
    pub label: i64,
}

impl UnitaryEigenpair {
    /// `|u(x, L)|² + |u(x, R)|²` for every vertex `x`.
    pub fn vertex_weights(&self) -> Vec<f64> {
        let mut out = vec![0.0; (self.u.len() + 2) / 2];
        for (k, a) in self.u.iter().enumerate() {
            out[vertex_of(k) - 1] += a.norm_sqr();
        }
        out
    }
}

/// `a_λ = ṽ(1)|1,R⟩ + Σ_{i≤n} ṽ(i)|i⟩(√p|L⟩+√q|R⟩) + Σ_{n<i<2n} ṽ(i)|i⟩(√q|L⟩+√p|R⟩) + ṽ(2n)|2n,L⟩`
/// for a normalized Jacobi eigenvector `ṽ`.
pub fn arc_vector(normalized: &[f64], params: &WalkParams) -> Vec<Complex64> {
    let n = params.n();
    assert_eq!(normalized.len(), 2 * n);
    let (sp, sq) = (params.p().sqrt(), params.q().sqrt());
    let mut a = vec![Complex64::new(0.0, 0.0); 4 * n - 2];
    a[0] = normalized[0].into();
    for v in 2..2 * n {
        let (wl, wr) = if v <= n { (sp, sq) } else { (sq, sp) };
        a[2 * v - 3] = (normalized[v - 1] * wl).into();
        a[2 * v - 2] = (normalized[v - 1] * wr).into();
    }
    a[4 * n - 3] = normalized[2 * n - 1].into();
    a
}

fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut v {
        *c /= norm;
    }
    v
}

/// Lift the complete Jacobi eigensystem (ordered `λ_1 = 1, …, λ_2n = -1`) to
/// the `4n - 2` eigenpairs of `U`, ordered `u_1, u_{+2}, u_{-2}, …, u_{2n}`.
pub fn lift_eigenpairs(pairs: &[Eigenpair], params: &WalkParams) -> Result<Vec<UnitaryEigenpair>> {
    let n = params.n();
    if pairs.len() != 2 * n {
        return Err(Error::IncompleteEigensystem { expected: 2 * n, got: pairs.len() });
    }
    if pairs[0].kind != EigenKind::PlusOne || pairs[2 * n - 1].kind != EigenKind::MinusOne {
        return Err(Error::InvalidParams(
            "eigensystem must start with λ = 1 and end with λ = -1".into(),
        ));
    }
    if pairs.iter().any(|p| p.vector.len() != 2 * n) {
        return Err(Error::InvalidParams("eigenvector length does not match 2n".into()));
    }

    let mut out = Vec::with_capacity(4 * n - 2);
    for (idx, pair) in pairs.iter().enumerate() {
        let a = arc_vector(&pair.normalized(), params);
        let label = idx as i64 + 1;
        match pair.kind {
            EigenKind::PlusOne | EigenKind::MinusOne => {
                let (mu, phi) = if pair.kind == EigenKind::PlusOne {
                    (Complex64::new(1.0, 0.0), 0.0)
                } else {
                    (Complex64::new(-1.0, 0.0), PI)
                };
                out.push(UnitaryEigenpair {
                    mu,
                    phi,
                    u: normalize(a),
                    source_lambda: pair.lambda,
                    label,
                });
            }
            EigenKind::Interior => {
                if !(pair.lambda.abs() < 1.0 && pair.edge_gap > 0.0) {
                    return Err(Error::Degenerate(format!(
                        "interior eigenvalue {} is not inside (-1, 1)",
                        pair.lambda
                    )));
                }
                if pair.one_minus_lambda_sq() < LIFT_FLOOR {
                    return Err(Error::Degenerate(format!(
                        "1 - λ² = {:e} for λ = {} is below the lift floor {LIFT_FLOOR:e}",
                        pair.one_minus_lambda_sq(),
                        pair.lambda
                    )));
                }
                let half_angle = 2.0 * (0.5 * pair.edge_gap).sqrt().asin();
                let phi = if pair.lambda >= 0.0 { half_angle } else { PI - half_angle };
                let b = apply_shift(&WalkState { n, amplitudes: a.clone() }).amplitudes;
                for (sign, l) in [(1.0, label), (-1.0, -label)] {
                    let mu = Complex64::from_polar(1.0, sign * phi);
                    let u: Vec<Complex64> = a.iter().zip(&b).map(|(ai, bi)| ai - mu * bi).collect();
                    out.push(UnitaryEigenpair {
                        mu,
                        phi: sign * phi,
                        u: normalize(u),
                        source_lambda: pair.lambda,
                        label: l,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `U^t ψ = Σ_k μ_k^t u_k (u_k† ψ)`.
pub fn evolve_spectral(eigenpairs: &[UnitaryEigenpair], state: &WalkState, t: u64) -> WalkState {
    let mut out = vec![Complex64::new(0.0, 0.0); state.amplitudes.len()];
    for e in eigenpairs {
        let overlap: Complex64 =
            e.u.iter().zip(&state.amplitudes).map(|(u, s)| u.conj() * s).sum();
        let coeff = Complex64::from_polar(1.0, e.phi * t as f64) * overlap;
        for (o, u) in out.iter_mut().zip(&e.u) {
            *o += coeff * u;
        }
    }
    WalkState { n: state.n, amplitudes: out }
}
