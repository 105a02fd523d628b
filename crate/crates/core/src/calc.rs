//! Crisp `F^α`-derivative and `F^α`-integral of real functions on a curve.
//!
//! Functions are evaluated through the curve parameter `u`; the point on the
//! curve is `θ = w(u)` and its staircase coordinate is `J(θ) = S_F^α(u)`.

use serde::Serialize;

use crate::curve::{FractalCurve, StaircaseTable};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Relative lower/upper sum gap above which an integral carries a warning.
pub const BRACKET_REL_TOL: f64 = 1e-2;

/// Central difference `(f(u+h) - f(u-h)) / (J(u+h) - J(u-h))`.
pub fn f_derivative<F>(f: F, table: &StaircaseTable, u: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (a0, b0) = table.domain();
    if !(h > 0.0) {
        return Err(Error::Validation(format!(
            "step h must be positive, got {h}"
        )));
    }
    if !(u - h >= a0 && u + h <= b0) {
        return Err(Error::Domain {
            what: "u ± h",
            value: u,
            lo: a0 + h,
            hi: b0 - h,
        });
    }
    let dj = table.j_at(u + h)? - table.j_at(u - h)?;
    if dj == 0.0 {
        return Err(Error::DegenerateDenominator {
            u_lo: u - h,
            u_hi: u + h,
        });
    }
    Ok((f(u + h) - f(u - h)) / dj)
}

/// Width of the table cell around `u`, the natural differencing step.
pub fn default_step(table: &StaircaseTable, u: f64) -> f64 {
    let us = table.us();
    let k = us.partition_point(|&t| t < u).clamp(1, us.len() - 1);
    let mut h = us[k] - us[k - 1];
    if us[k] == u && k + 1 < us.len() {
        h = h.min(us[k + 1] - us[k]);
    }
    h
}

/// Riemann–Stieltjes sums of `f` against `dJ` over one subdivision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult {
    /// Midpoint sum.
    pub value: f64,
    /// Sum of per-cell minima (endpoints and midpoint).
    pub lower: f64,
    /// Sum of per-cell maxima.
    pub upper: f64,
    pub cells: usize,
    pub warning: Option<String>,
}

impl IntegralResult {
    pub fn bracket_width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn f_integral<F>(
    f: F,
    curve: &FractalCurve,
    table: &StaircaseTable,
    a: f64,
    b: f64,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    f_integral_with(Exec::default(), f, curve, table, a, b)
}

pub fn f_integral_with<F>(
    exec: Exec,
    f: F,
    curve: &FractalCurve,
    table: &StaircaseTable,
    a: f64,
    b: f64,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let sub = curve.subdivision(a, b)?;
    let t = &sub.breakpoints;
    let js = t
        .iter()
        .map(|&u| table.j_at(u))
        .collect::<Result<Vec<f64>>>()?;
    let cells = sub.cells();
    if let Some(i) = js.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::Integrity {
            cell: i,
            delta: js[i + 1] - js[i],
        });
    }
    let terms = exec.map(cells, |i| {
        let dj = js[i + 1] - js[i];
        let (f0, fm, f1) = (f(t[i]), f(0.5 * (t[i] + t[i + 1])), f(t[i + 1]));
        (fm * dj, f0.min(fm).min(f1) * dj, f0.max(fm).max(f1) * dj)
    });
    let value = exec.sum(cells, |i| terms[i].0);
    let lower = exec.sum(cells, |i| terms[i].1);
    let upper = exec.sum(cells, |i| terms[i].2);
    let gap = upper - lower;
    let warning = (gap > BRACKET_REL_TOL * value.abs().max(1.0)).then(|| {
        format!("lower/upper sums differ by {gap:.3e} over {cells} cells; refine the curve")
    });
    Ok(IntegralResult {
        value,
        lower,
        upper,
        cells,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_staircase, generate_koch, generate_polyline, generate_segment};

    fn segment_setup(level: u32) -> (FractalCurve, StaircaseTable) {
        let c = generate_segment(level).unwrap();
        let t = build_staircase(&c, 1.0, 0.0).unwrap();
        (c, t)
    }

    #[test]
    fn derivative_examples() {
        let (_, t) = segment_setup(4);
        assert_eq!(f_derivative(|_| 3.0, &t, 0.5, 0.01).unwrap(), 0.0);
        let d = f_derivative(|u| t.j_at(u).unwrap(), &t, 0.3, 0.01).unwrap();
        assert!((d - 1.0).abs() < 1e-8);
        let d = f_derivative(|u| t.j_at(u).unwrap().powi(2), &t, 0.5, 0.01).unwrap();
        assert!((d - 1.0).abs() < 1e-6);
    }

    #[test]
    fn derivative_errors() {
        let (_, t) = segment_setup(2);
        assert!(matches!(
            f_derivative(|u| u, &t, 0.0, 0.1),
            Err(Error::Domain { .. })
        ));
        assert!(f_derivative(|u| u, &t, 0.5, 0.0).is_err());
        let flat = StaircaseTable::from_table(
            1.0,
            0.0,
            vec![0.0, 0.4, 0.6, 1.0],
            vec![0.0, 0.5, 0.5, 1.0],
        )
        .unwrap();
        assert!(matches!(
            f_derivative(|u| u, &flat, 0.5, 0.05),
            Err(Error::DegenerateDenominator { .. })
        ));
    }

    #[test]
    fn conjugacy_on_koch() {
        // f = g(J) differentiates to g'(J) in the staircase coordinate.
        let alpha = 4f64.ln() / 3f64.ln();
        let c = generate_koch(6).unwrap();
        let t = build_staircase(&c, alpha, 0.0).unwrap();
        let u = c.params()[1500];
        let h = default_step(&t, u);
        let j = t.j_at(u).unwrap();
        let d_exp = f_derivative(|x| t.j_at(x).unwrap().exp(), &t, u, h).unwrap();
        let d_sq = f_derivative(|x| t.j_at(x).unwrap().powi(2), &t, u, h).unwrap();
        assert!((d_exp - j.exp()).abs() < 1e-6, "{d_exp} vs {}", j.exp());
        assert!((d_sq - 2.0 * j).abs() < 1e-9);
    }

    #[test]
    fn integral_examples() {
        let (c, t) = segment_setup(10);
        let one = f_integral(|_| 1.0, &c, &t, 0.2, 0.9).unwrap();
        assert!((one.value - (t.j_at(0.9).unwrap() - t.j_at(0.2).unwrap())).abs() < 1e-15);
        assert_eq!(one.bracket_width(), 0.0);
        let lin = f_integral(|u| t.j_at(u).unwrap(), &c, &t, 0.0, 1.0).unwrap();
        assert!((lin.value - 0.5).abs() < 1e-6);
        assert!(lin.lower <= lin.value && lin.value <= lin.upper);
        assert!(lin.warning.is_none());
    }

    #[test]
    fn coarse_integral_warns() {
        let c = generate_polyline(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let t = build_staircase(&c, 1.0, 0.0).unwrap();
        let r = f_integral(|u| (5.0 * u).exp(), &c, &t, 0.0, 1.0).unwrap();
        assert!(r.warning.is_some());
    }

    #[test]
    fn integral_linearity_and_additivity() {
        let (c, t) = segment_setup(9);
        let f = |u: f64| (3.0 * u).sin();
        let g = |u: f64| u * u;
        let lhs = f_integral(|u| 2.0 * f(u) - 0.5 * g(u), &c, &t, 0.0, 1.0)
            .unwrap()
            .value;
        let rhs = 2.0 * f_integral(f, &c, &t, 0.0, 1.0).unwrap().value
            - 0.5 * f_integral(g, &c, &t, 0.0, 1.0).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-10);
        let b = c.params()[300];
        let whole = f_integral(f, &c, &t, 0.0, 1.0).unwrap().value;
        let parts = f_integral(f, &c, &t, 0.0, b).unwrap().value
            + f_integral(f, &c, &t, b, 1.0).unwrap().value;
        assert!((whole - parts).abs() < 1e-12);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let (c, t) = segment_setup(12);
        let f = |u: f64| (7.0 * u).cos();
        let a = f_integral_with(Exec::Sequential, f, &c, &t, 0.0, 1.0).unwrap();
        let b = f_integral_with(Exec::Parallel, f, &c, &t, 0.0, 1.0).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
