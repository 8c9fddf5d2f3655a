//! Mirror-symmetric Jacobi matrices and the eigensystem of `J_2n(p)`.
//!
//! A [`JacobiSpec`] stores the half data `α_1..α_n` and `w_0..w_{n-1}` of the
//! `2n × 2n` matrix with diagonal `(α_n, …, α_1, α_1, …, α_n)` and
//! off-diagonal `(√w_{n-1}, …, √w_1, √w_0, √w_1, …, √w_{n-1})`. Its
//! characteristic polynomial splits into a symmetric factor
//! `(λ-α_1-√w_0) det E_2 - w_1 det E_3` and an antisymmetric factor
//! `(λ-α_1+√w_0) det E_2 - w_1 det E_3`, where `E_k` is the trailing minor
//! built from `α_n..α_k`.
//!
//! For the path chain, `J_2n(p)` has eigenvalues `±1` with closed-form
//! eigenvectors, and `2n - 2` interior eigenvalues that are the roots of
//! `√q Ũ_{n-1}(λ/√(pq)) ± √p Ũ_{n-2}(λ/√(pq))`, the `+` sign belonging to the
//! symmetric family.
//!
//! Interior eigenvalues are isolated by Sturm bisection on the two `n × n`
//! half matrices (one per mirror family), then polished by bisection on the
//! Chebyshev condition. When `p > q` each family also carries one eigenvalue
//! exponentially close to `±1` (distance of order `(q/p)^{n-1}`); those are
//! solved in the hyperbolic parametrization `λ/√(pq) = r + 1/r` so that the
//! distance `1 - |λ|` keeps full relative precision.

use crate::chebyshev::{monic_u, monic_u_table, partial_sum_squares};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::params::WalkParams;
use crate::sturm;

/// Sturm estimates closer than this to `±1` go through the hyperbolic solve.
const EDGE_WINDOW: f64 = 1e-6;

/// Interior eigenvalues must stay at least this far from `±1` unless their
/// distance was resolved by the hyperbolic solve.
const COLLISION_GUARD: f64 = 1e-12;

/// Which half of the spectrum an eigenvector belongs to: `v(2n+1-i) = s v(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mirror {
    /// `s = +1`, roots of `(λ-α_1-√w_0) det E_2 - w_1 det E_3`.
    Symmetric,
    /// `s = -1`, roots of `(λ-α_1+√w_0) det E_2 - w_1 det E_3`.
    Antisymmetric,
}

impl Mirror {
    pub fn sign(self) -> f64 {
        match self {
            Mirror::Symmetric => 1.0,
            Mirror::Antisymmetric => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiSpec {
    alphas: Vec<f64>,
    weights: Vec<f64>,
}

impl JacobiSpec {
    /// `alphas[i-1] = α_i` for `i = 1..=n`, `weights[i] = w_i` for `i = 0..n`.
    pub fn new(alphas: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() || alphas.len() != weights.len() {
            return Err(Error::InvalidParams(format!(
                "need n >= 1 alphas and n weights, got {} and {}",
                alphas.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParams(format!("weights must be positive, got {w}")));
        }
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParams("alphas must be finite".into()));
        }
        Ok(Self { alphas, weights })
    }

    /// Half size `n`; the matrix is `2n × 2n`.
    pub fn half(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn alpha(&self, i: usize) -> f64 {
        self.alphas[i - 1]
    }

    /// `w_i`, zero past the last coupling.
    fn weight(&self, i: usize) -> f64 {
        self.weights.get(i).copied().unwrap_or(0.0)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.alphas.iter().rev().chain(self.alphas.iter()).copied().collect()
    }

    pub fn off_diagonal(&self) -> Vec<f64> {
        let outer: Vec<f64> = self.weights[1..].iter().rev().map(|w| w.sqrt()).collect();
        let mut off = outer.clone();
        off.push(self.weights[0].sqrt());
        off.extend(outer.iter().rev());
        off
    }

    pub fn to_dense(&self) -> Matrix {
        let (d, e) = (self.diagonal(), self.off_diagonal());
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, &di) in d.iter().enumerate() {
            m[(i, i)] = di;
        }
        for (i, &ei) in e.iter().enumerate() {
            m[(i, i + 1)] = ei;
            m[(i + 1, i)] = ei;
        }
        m
    }

    /// `J v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let (d, e) = (self.diagonal(), self.off_diagonal());
        assert_eq!(v.len(), d.len());
        (0..d.len())
            .map(|i| {
                let mut acc = d[i] * v[i];
                if i > 0 {
                    acc += e[i - 1] * v[i - 1];
                }
                if i + 1 < d.len() {
                    acc += e[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// `‖J v - λ v‖_∞`.
    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        self.apply(v)
            .iter()
            .zip(v)
            .map(|(jv, vi)| (jv - lambda * vi).abs())
            .fold(0.0, f64::max)
    }

    /// Diagonal and off-diagonal of the `n × n` matrix whose spectrum is the
    /// given mirror family: rows `1..n` of `J` with the centre coupling folded
    /// onto the last diagonal entry.
    pub fn half_matrix(&self, mirror: Mirror) -> (Vec<f64>, Vec<f64>) {
        let mut diag: Vec<f64> = self.alphas.iter().rev().copied().collect();
        let n = diag.len();
        diag[n - 1] += mirror.sign() * self.weights[0].sqrt();
        let off = self.weights[1..].iter().rev().map(|w| w.sqrt()).collect();
        (diag, off)
    }

    /// The `n` eigenvalues of one mirror family, ascending, by Sturm bisection.
    pub fn family_eigenvalues(&self, mirror: Mirror) -> Vec<f64> {
        let (diag, off) = self.half_matrix(mirror);
        sturm::eigenvalues(&diag, &off)
    }

    /// All `2n` eigenvalues, ascending, each tagged with its family.
    pub fn eigenvalues(&self) -> Vec<(f64, Mirror)> {
        let mut all: Vec<(f64, Mirror)> = [Mirror::Symmetric, Mirror::Antisymmetric]
            .into_iter()
            .flat_map(|m| self.family_eigenvalues(m).into_iter().map(move |l| (l, m)))
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        all
    }

    /// `det(E_k)` for `k = 1..=n+2`, by the backward recurrence
    /// `det E_k = (λ-α_k) det E_{k+1} - w_k det E_{k+2}` seeded with
    /// `det E_{n+1} = 1`, `det E_{n+2} = 0`. Index `0` of the result is unused.
    fn minors(&self, lambda: f64) -> Vec<f64> {
        let n = self.half();
        let mut e = vec![0.0; n + 3];
        e[n + 1] = 1.0;
        e[n + 2] = 0.0;
        for k in (1..=n).rev() {
            e[k] = (lambda - self.alpha(k)) * e[k + 1] - self.weight(k) * e[k + 2];
        }
        e
    }

    /// `det(E_k)` for `2 <= k <= n+1`.
    pub fn det_minor_e(&self, k: usize, lambda: f64) -> Result<f64> {
        let n = self.half();
        if !(2..=n + 1).contains(&k) {
            return Err(Error::IndexOutOfRange { index: k, min: 2, max: n + 1 });
        }
        Ok(self.minors(lambda)[k])
    }

    /// `(f₋, f₊)`; their product is `det(λI - J)`. `f₋` vanishes on the
    /// symmetric family and `f₊` on the antisymmetric one.
    pub fn characteristic_factors(&self, lambda: f64) -> (f64, f64) {
        let e = self.minors(lambda);
        let base = lambda - self.alpha(1);
        let root_w0 = self.weights[0].sqrt();
        let tail = self.weight(1) * e[3];
        ((base - root_w0) * e[2] - tail, (base + root_w0) * e[2] - tail)
    }

    /// The eigenvector built from trailing minors,
    /// `(1, det E_n/√w_{n-1}, det E_{n-1}/√(w_{n-2}w_{n-1}), …, ±1)`.
    ///
    /// Only an eigenvector when `λ` is a root of the factor of `mirror`.
    pub fn minor_eigenvector(&self, lambda: f64, mirror: Mirror) -> Vec<f64> {
        let n = self.half();
        let e = self.minors(lambda);
        let mut half = Vec::with_capacity(n);
        half.push(1.0);
        let mut scale = 1.0;
        for j in 2..=n {
            scale *= self.weights[n - j + 1].sqrt();
            half.push(e[n - j + 2] / scale);
        }
        mirror_extend(&half, mirror)
    }
}

fn mirror_extend(half: &[f64], mirror: Mirror) -> Vec<f64> {
    let s = mirror.sign();
    half.iter().copied().chain(half.iter().rev().map(|v| s * v)).collect()
}

/// `J_2n(p)`: zero diagonal, `w_0 = q²`, `w_1 = … = w_{n-2} = pq`, `w_{n-1} = p`.
pub fn build_j2n(params: &WalkParams) -> JacobiSpec {
    let (n, p, q) = (params.n(), params.p(), params.q());
    let mut weights = vec![p * q; n];
    weights[0] = q * q;
    weights[n - 1] = p;
    JacobiSpec { alphas: vec![0.0; n], weights }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenKind {
    PlusOne,
    MinusOne,
    Interior,
}

/// Eigenpair of `J_2n(p)` in the convention `vector[0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub lambda: f64,
    /// `1 - |λ|`, carried separately because it can be far below `f64`
    /// resolution of `λ` itself.
    pub edge_gap: f64,
    pub vector: Vec<f64>,
    /// Closed-form `‖v‖²`.
    pub norm_sq: f64,
    pub kind: EigenKind,
    pub mirror: Mirror,
}

impl Eigenpair {
    /// `‖v‖²` by direct summation.
    pub fn norm_sq_direct(&self) -> f64 {
        self.vector.iter().map(|v| v * v).sum()
    }

    /// `1 - λ²` to full relative precision.
    pub fn one_minus_lambda_sq(&self) -> f64 {
        self.edge_gap * (2.0 - self.edge_gap)
    }

    /// `v / ‖v‖`, using the closed-form norm.
    pub fn normalized(&self) -> Vec<f64> {
        let scale = self.norm_sq.sqrt();
        self.vector.iter().map(|v| v / scale).collect()
    }
}

/// Closed-form eigenpairs for `λ = +1` and `λ = -1`.
pub fn eigen_pm1(params: &WalkParams) -> (Eigenpair, Eigenpair) {
    let (n, p, q) = (params.n(), params.p(), params.q());
    let norm_sq = if params.is_balanced() {
        2.0 * (2 * n - 1) as f64
    } else {
        2.0 / (p - q) * (2.0 * p - (q / p).powi(n as i32 - 1))
    };
    let ratio = (q / p).sqrt();
    let build = |sign: f64, mirror: Mirror, kind: EigenKind| {
        let mut half = Vec::with_capacity(n);
        half.push(1.0);
        for i in 2..=n {
            half.push((sign * ratio).powi(i as i32 - 1) / q.sqrt());
        }
        Eigenpair {
            lambda: sign,
            edge_gap: 0.0,
            vector: mirror_extend(&half, mirror),
            norm_sq,
            kind,
            mirror,
        }
    };
    (
        build(1.0, Mirror::Symmetric, EigenKind::PlusOne),
        build(-1.0, Mirror::Antisymmetric, EigenKind::MinusOne),
    )
}

/// `√q Ũ_{n-1}(x) + s √p Ũ_{n-2}(x)` with `x = λ/√(pq)` and `s` the mirror sign.
fn interior_condition(params: &WalkParams, mirror: Mirror, lambda: f64) -> f64 {
    let (n, p, q) = (params.n() as isize, params.p(), params.q());
    let x = lambda / (p * q).sqrt();
    q.sqrt() * monic_u(n - 1, x) + mirror.sign() * p.sqrt() * monic_u(n - 2, x)
}

/// Bisection polish of a Sturm estimate on the Chebyshev condition. `limit` is
/// half the distance to the nearest other eigenvalue of the same family.
fn polish(params: &WalkParams, mirror: Mirror, estimate: f64, limit: f64) -> Result<f64> {
    let g = |l: f64| interior_condition(params, mirror, l);
    let g0 = g(estimate);
    if g0 == 0.0 {
        return Ok(estimate);
    }
    let mut h = 1e-13 * estimate.abs().max(1.0);
    let (mut a, mut b) = loop {
        let (lo, hi) = (estimate - h, estimate + h);
        let (glo, ghi) = (g(lo), g(hi));
        if glo.signum() != ghi.signum() || glo == 0.0 || ghi == 0.0 {
            break (lo, hi);
        }
        h *= 4.0;
        if h > limit {
            return Err(Error::Isolation(format!(
                "no sign change of the Chebyshev condition near λ = {estimate}"
            )));
        }
    };
    let ga_sign = g(a).signum();
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm.signum() == ga_sign {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Antisymmetric root nearest `+1` for `p > q`, with its eigenvector half.
///
/// With `x = r + 1/r`, `Ũ_k(x) = (r^{k+1} - r^{-k-1})/(r - 1/r)` and the
/// antisymmetric condition becomes `r - ρ = r^{2-2n} (1/r - ρ)` with
/// `ρ = √(p/q)`; `r = ρ` is exactly `λ = 1`. The correction `d = r - ρ` is
/// found by fixed-point iteration and gives `1 - λ = -√(pq) d (1 - 1/(rρ))`.
fn edge_root(params: &WalkParams) -> Result<(f64, Vec<f64>)> {
    let (n, p, q) = (params.n(), params.p(), params.q());
    let rho = (p / q).sqrt();
    let power = 2 - 2 * n as i32;
    let mut d = 0.0f64;
    let mut converged = false;
    for _ in 0..2000 {
        let r = rho + d;
        let next = r.powi(power) * (1.0 / r - rho);
        let done = (next - d).abs() <= 4.0 * f64::EPSILON * next.abs();
        d = next;
        if done {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Isolation(format!(
            "edge root iteration did not converge for n = {n}, p = {p}"
        )));
    }
    let r = rho + d;
    let gap = -(p * q).sqrt() * d * (1.0 - 1.0 / (r * rho));
    // q Ũ_{i-1} - p Ũ_{i-3} with q r² - p = q d (r + ρ) kept exact.
    let lead = q * d * (r + rho);
    let trail = q - p * r * r;
    let denom = (r - 1.0 / r) * q.sqrt();
    let mut half = Vec::with_capacity(n);
    half.push(1.0);
    for i in 2..=n as i32 {
        half.push((r.powi(i - 2) * lead - r.powi(-i) * trail) / denom);
    }
    Ok((gap, half))
}

/// The `2n - 2` eigenpairs of `J_2n(p)` other than `±1`, ordered by
/// decreasing `λ`.
pub fn eigen_interior(params: &WalkParams) -> Result<Vec<Eigenpair>> {
    let (n, p, q) = (params.n(), params.p(), params.q());
    let spec = build_j2n(params);
    let scale = (p * q).sqrt();
    let mut out = Vec::with_capacity(2 * n - 2);

    for mirror in [Mirror::Symmetric, Mirror::Antisymmetric] {
        let mut family = spec.family_eigenvalues(mirror);
        // +1 tops the symmetric family, -1 bottoms the antisymmetric one.
        let extreme = match mirror {
            Mirror::Symmetric => family.pop(),
            Mirror::Antisymmetric => Some(family.remove(0)),
        };
        let expected = -mirror.sign();
        match extreme {
            Some(e) if (e + expected).abs() <= 1e-9 => {}
            other => {
                return Err(Error::Isolation(format!(
                    "{mirror:?} family extreme eigenvalue {other:?} is not {}",
                    -expected
                )))
            }
        }
        if family.len() != n - 1 {
            return Err(Error::Isolation(format!(
                "isolated {} roots in the {mirror:?} family, expected {}",
                family.len(),
                n - 1
            )));
        }

        for (j, &estimate) in family.iter().enumerate() {
            // Near +1 only the antisymmetric family has a root, near -1 only
            // the symmetric one; the two are mirror images under λ -> -λ.
            let at_edge = p > q
                && 1.0 - estimate.abs() < EDGE_WINDOW
                && estimate.signum() == -mirror.sign();
            let (lambda, edge_gap, half) = if at_edge {
                let (gap, positive_half) = edge_root(params)?;
                let sign = estimate.signum();
                let half: Vec<f64> = positive_half
                    .iter()
                    .enumerate()
                    .map(|(i, v)| if sign < 0.0 && i % 2 == 1 { -v } else { *v })
                    .collect();
                (sign * (1.0 - gap), gap, half)
            } else {
                let below = if j > 0 { family[j - 1] } else { -1.0 };
                let above = family.get(j + 1).copied().unwrap_or(1.0);
                let limit = 0.5 * (estimate - below).min(above - estimate);
                let lambda = polish(params, mirror, estimate, limit)?;
                let gap = 1.0 - lambda.abs();
                if gap < COLLISION_GUARD {
                    return Err(Error::Degenerate(format!(
                        "interior eigenvalue {lambda} within {COLLISION_GUARD:e} of ±1"
                    )));
                }
                let x = lambda / scale;
                let u = monic_u_table(n, x);
                let ux = |k: isize| if k < 0 { 0.0 } else { u[k as usize] };
                let mut half = Vec::with_capacity(n);
                half.push(1.0);
                for i in 2..=n as isize {
                    half.push((q * ux(i - 1) - p * ux(i - 3)) / q.sqrt());
                }
                (lambda, gap, half)
            };
            if !(edge_gap > 0.0 && edge_gap < 2.0) {
                return Err(Error::Degenerate(format!(
                    "interior eigenvalue {lambda} is not inside (-1, 1)"
                )));
            }
            let x = lambda / scale;
            let norm_sq =
                2.0 * edge_gap * (2.0 - edge_gap) * partial_sum_squares(n - 1, x) / q;
            out.push(Eigenpair {
                lambda,
                edge_gap,
                vector: mirror_extend(&half, mirror),
                norm_sq,
                kind: EigenKind::Interior,
                mirror,
            });
        }
    }
    out.sort_by(|a, b| b.lambda.total_cmp(&a.lambda));
    Ok(out)
}

/// All `2n` eigenpairs ordered `λ_1 = 1 > λ_2 > … > λ_2n = -1`.
pub fn eigensystem(params: &WalkParams) -> Result<Vec<Eigenpair>> {
    let (plus, minus) = eigen_pm1(params);
    let mut all = Vec::with_capacity(params.vertices());
    all.push(plus);
    all.extend(eigen_interior(params)?);
    all.push(minus);
    Ok(all)
}
