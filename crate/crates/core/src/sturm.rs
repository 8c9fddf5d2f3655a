//! Sturm-sequence bisection for real symmetric tridiagonal matrices.

/// Number of eigenvalues strictly below `lambda`.
///
/// `diag` has length `m`, `off_sq` holds the squared off-diagonal entries
/// (length `m - 1`).
pub(crate) fn count_below(diag: &[f64], off_sq: &[f64], lambda: f64) -> usize {
    let guard = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut pivot = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let coupling = if i == 0 { 0.0 } else { off_sq[i - 1] / pivot };
        pivot = d - lambda - coupling;
        if pivot.abs() < guard {
            pivot = -guard;
        }
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues in ascending order, each bisected until the bracket can no
/// longer shrink in `f64`.
pub(crate) fn eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let m = diag.len();
    assert_eq!(off.len() + 1, m.max(1), "off-diagonal length must be m - 1");
    let off_sq: Vec<f64> = off.iter().map(|e| e * e).collect();

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let radius = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i + 1 < m { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    let pad = 1e-12 * (hi - lo).abs().max(1.0);
    lo -= pad;
    hi += pad;

    (0..m)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            loop {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if count_below(diag, &off_sq, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}
