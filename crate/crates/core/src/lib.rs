//! Fractal calculus on fractal curves, fuzzy numbers in parametric r-cut
//! form, and their combination: fractal Hukuhara derivatives, fractal fuzzy
//! integrals and solvers for fractal fuzzy differential equations.
//!
//! The staircase function `J = S_F^α(u)` is the coordinate everything runs
//! in. Once a curve has been tabulated into a [`StaircaseTable`], the
//! `F^α`-derivative is an ordinary derivative in `J` and the `F^α`-integral
//! is a Riemann–Stieltjes sum with cell weights `ΔJ`.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`curve`] | Koch and polyline curves, mass function, γ-dimension, staircase |
//! | [`fuzzy`] | Fuzzy numbers, arithmetic, Hausdorff distance, Hukuhara difference |
//! | [`calc`] | Crisp `F^α`-derivative and integral |
//! | [`fuzzy_calc`] | Fuzzy continuity probe, fractal Hukuhara derivative, fuzzy integral |
//! | [`ode`] | Classical RK4 in the `J` coordinate with Hermite dense output |
//! | [`ffde`] | First-order FFDE solvers (cases I/II), second-order fuzzy BVP |
//! | [`io`] | JSON problem specs and CSV artifacts |
//! | [`cli`] | The `ffc` command pipeline and exit statuses |
//!
//! Heavy loops go through [`exec::Exec`], which runs on rayon when the
//! `parallel` feature is enabled and sequentially otherwise. Reductions use
//! fixed block boundaries so results are bitwise identical either way.

// Negated comparisons are the NaN-rejecting input guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calc;
pub mod cli;
pub mod curve;
pub mod error;
pub mod exec;
pub mod ffde;
pub mod fuzzy;
pub mod fuzzy_calc;
pub mod io;
pub mod ode;

pub use curve::{FractalCurve, MassEstimate, StaircaseTable, Subdivision};
pub use error::{Error, Result};
pub use exec::Exec;
pub use fuzzy::{FuzzyNumber, Interval, TriangularFuzzy};
