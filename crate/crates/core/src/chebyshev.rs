//! Monic Chebyshev polynomials of the second kind.
//!
//! `Ũ_0 = 1`, `Ũ_1 = x`, `Ũ_k = x Ũ_{k-1} - Ũ_{k-2}`. With `x = 2 cos θ` this is
//! `sin((k+1)θ) / sin θ`. Evaluation is by forward recurrence in `f64`; the
//! supported range is `k <= 512`, `|x| <= 8`.
//!
//! Negative degrees follow the recurrence run backwards, so `Ũ_{-1} = 0` and
//! `Ũ_{-m} = -Ũ_{m-2}`.

/// `Ũ_k(x)`.
pub fn monic_u(k: isize, x: f64) -> f64 {
    if k < 0 {
        return if k == -1 { 0.0 } else { -monic_u(-k - 2, x) };
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..k {
        let next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `[Ũ_0(x), …, Ũ_{kmax}(x)]`.
pub fn monic_u_table(kmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax >= 1 {
        out.push(x);
    }
    for k in 2..=kmax {
        let next = x * out[k - 1] - out[k - 2];
        out.push(next);
    }
    out
}

/// `S_k(x) = Σ_{i=0}^{k-1} Ũ_i(x)`, with `S_0 = 0`.
pub fn partial_sum(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    monic_u_table(k - 1, x).iter().sum()
}

/// `Σ_{i=0}^{k-1} Ũ_i(x)^2`, with an empty sum for `k = 0`.
///
/// This is the sum that closes the norm of the interior Jacobi eigenvectors:
/// `‖v_λ‖² = 2(1-λ²) Σ_{i<n-1} Ũ_i(λ/√(pq))² / q`.
pub fn partial_sum_squares(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    monic_u_table(k - 1, x).iter().map(|u| u * u).sum()
}
