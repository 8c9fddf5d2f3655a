use crate::error::{Error, Result};

/// Path length and coin bias of the walk on `P_2n`.
///
/// `q` is always derived as `1 - p`. Half-length `n` must be at least 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    n: usize,
    p: f64,
    q: f64,
}

impl WalkParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be >= 2, got {n}")));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParams(format!("p must lie in (0, 1), got {p}")));
        }
        Ok(Self { n, p, q: 1.0 - p })
    }

    /// Parameters of the path reduction of `G_k(2n)`: `p = 1/(k+1)`.
    pub fn from_arity(n: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams(format!("arity k must be >= 2, got {k}")));
        }
        Self::new(n, 1.0 / (k as f64 + 1.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Number of path vertices, `2n`.
    pub fn vertices(&self) -> usize {
        2 * self.n
    }

    /// Dimension of the walk Hilbert space, `4n - 2`.
    pub fn arcs(&self) -> usize {
        4 * self.n - 2
    }

    /// `p == q` on the stored values.
    pub fn is_balanced(&self) -> bool {
        self.p == self.q
    }
}
