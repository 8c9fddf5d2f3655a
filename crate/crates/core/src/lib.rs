//! Discrete-time quantum walks on glued k-ary trees.
//!
//! The random walk on a glued tree `G_k(2n)` lumps exactly onto the path
//! `P_2n`. This crate builds the Szegedy walk `U = S C` on that path, obtains
//! its complete eigensystem from the Jacobi matrix `J_2n(p)` of the path chain,
//! and computes time-averaged position distributions together with the
//! two-eigenvector lower bounds that describe localization.
//!
//! Module map:
//!
//! - [`chebyshev`]: monic Chebyshev polynomials of the second kind.
//! - [`jacobi`]: mirror-symmetric Jacobi matrices, minor recurrences and the
//!   full eigensystem of `J_2n(p)`.
//! - [`walk`]: walk states, coin/shift/step and the lift of Jacobi eigenpairs
//!   to eigenpairs of `U`.
//! - [`analysis`]: spectral and Cesàro time averages, lower bounds and limits.
//! - [`gluedtree`]: glued tree construction and the lumping check.

pub mod analysis;
pub mod chebyshev;
mod error;
pub mod gluedtree;
pub mod jacobi;
mod matrix;
mod params;
mod sturm;
pub mod walk;

pub use analysis::{
    bound_report, limit_bound, lower_bound, lower_bound_generic, time_avg_empirical,
    time_avg_spectral, BoundReport, LimitProbe, LimitSite, Method, TimeAveragedDist,
};
pub use error::{Error, Result};
pub use gluedtree::{GluedTree, PathChain};
pub use jacobi::{Eigenpair, EigenKind, JacobiSpec, Mirror};
pub use matrix::Matrix;
pub use params::WalkParams;
pub use walk::{ArcIndex, Chirality, UnitaryEigenpair, WalkState};

pub use num_complex::Complex64;
