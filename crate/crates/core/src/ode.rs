//! Classical fourth-order Runge–Kutta on a uniform `J` grid.
//!
//! Under the staircase conjugacy `D_F^α = d/dJ`, so every crisp fractal ODE
//! here is an ordinary ODE in `J`.

use crate::curve::StaircaseTable;
use crate::error::{Error, Result};

pub const MIN_STEPS: usize = 16;

/// Nodes, states and slopes of an RK4 run. Between nodes the state is
/// reconstructed by cubic Hermite interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    js: Vec<f64>,
    states: Vec<[f64; N]>,
    slopes: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn js(&self) -> &[f64] {
        &self.js
    }

    pub fn states(&self) -> &[[f64; N]] {
        &self.states
    }

    pub fn slopes(&self) -> &[[f64; N]] {
        &self.slopes
    }

    pub fn last(&self) -> [f64; N] {
        self.states[self.states.len() - 1]
    }

    /// Dense output at any `j` in the span.
    pub fn eval(&self, j: f64) -> Result<[f64; N]> {
        let (lo, hi) = (self.js[0], self.js[self.js.len() - 1]);
        if !(j >= lo && j <= hi) {
            return Err(Error::Domain {
                what: "J",
                value: j,
                lo,
                hi,
            });
        }
        let k = self.js.partition_point(|&x| x < j);
        if self.js[k] == j {
            return Ok(self.states[k]);
        }
        let (j0, j1) = (self.js[k - 1], self.js[k]);
        let h = j1 - j0;
        let s = (j - j0) / h;
        let (h00, h10) = (
            2.0 * s.powi(3) - 3.0 * s * s + 1.0,
            s.powi(3) - 2.0 * s * s + s,
        );
        let (h01, h11) = (-2.0 * s.powi(3) + 3.0 * s * s, s.powi(3) - s * s);
        let (y0, y1, m0, m1) = (
            self.states[k - 1],
            self.states[k],
            self.slopes[k - 1],
            self.slopes[k],
        );
        Ok(std::array::from_fn(|d| {
            h00 * y0[d] + h10 * h * m0[d] + h01 * y1[d] + h11 * h * m1[d]
        }))
    }

    /// Dense output at curve parameters `us`, mapped through `J = S_F^α(u)`.
    pub fn eval_at_u(&self, table: &StaircaseTable, us: &[f64]) -> Result<Vec<[f64; N]>> {
        us.iter().map(|&u| self.eval(table.j_at(u)?)).collect()
    }

    /// Curve parameters of the nodes via the inverse staircase.
    pub fn node_params(&self, table: &StaircaseTable) -> Result<Vec<f64>> {
        self.js.iter().map(|&j| table.u_at(j)).collect()
    }
}

/// Integrates `dx/dJ = rhs(J, x)` from `x(J0) = x0` with `steps` RK4 steps.
pub fn solve_crisp_in_j<const N: usize, F>(
    rhs: F,
    x0: [f64; N],
    span: (f64, f64),
    steps: usize,
) -> Result<Trajectory<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if steps < MIN_STEPS {
        return Err(Error::Validation(format!(
            "need at least {MIN_STEPS} steps, got {steps}"
        )));
    }
    let (j0, j1) = span;
    if !(j1 > j0) || !j0.is_finite() || !j1.is_finite() {
        return Err(Error::Validation(format!("J span [{j0}, {j1}] is empty")));
    }
    if x0.iter().any(|x| !x.is_finite()) {
        return Err(Error::Validation("non-finite initial state".into()));
    }
    let h = (j1 - j0) / steps as f64;
    let mut js = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut slopes = Vec::with_capacity(steps + 1);
    let axpy = |x: &[f64; N], a: f64, k: &[f64; N]| -> [f64; N] {
        std::array::from_fn(|d| x[d] + a * k[d])
    };

    let mut x = x0;
    let mut k1 = rhs(j0, &x);
    js.push(j0);
    states.push(x);
    slopes.push(k1);
    for n in 0..steps {
        let j = j0 + n as f64 * h;
        let k2 = rhs(j + 0.5 * h, &axpy(&x, 0.5 * h, &k1));
        let k3 = rhs(j + 0.5 * h, &axpy(&x, 0.5 * h, &k2));
        let k4 = rhs(j + h, &axpy(&x, h, &k3));
        x = std::array::from_fn(|d| x[d] + h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]));
        let j_next = if n + 1 == steps {
            j1
        } else {
            j0 + (n + 1) as f64 * h
        };
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { last_j: j });
        }
        k1 = rhs(j_next, &x);
        js.push(j_next);
        states.push(x);
        slopes.push(k1);
    }
    Ok(Trajectory { js, states, slopes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let t = solve_crisp_in_j(|_, x: &[f64; 1]| [x[0]], [1.0], (0.0, 1.0), 256).unwrap();
        assert!((t.last()[0] - std::f64::consts::E).abs() < 1e-8);
        assert_eq!(t.js().len(), 257);
        assert_eq!(t.js()[256], 1.0);
    }

    #[test]
    fn constant() {
        let t = solve_crisp_in_j(|_, _: &[f64; 1]| [0.0], [4.5], (0.0, 2.0), 16).unwrap();
        assert!(t.states().iter().all(|s| s[0] == 4.5));
    }

    #[test]
    fn affine_matches_closed_form() {
        // dx/dJ = x - 1, x(0) = 0  ⇒  x = 1 - e^J.
        let t = solve_crisp_in_j(|_, x: &[f64; 1]| [x[0] - 1.0], [0.0], (0.0, 1.0), 256).unwrap();
        for (j, s) in t.js().iter().zip(t.states()) {
            assert!((s[0] - (1.0 - j.exp())).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_output_between_nodes() {
        let t = solve_crisp_in_j(|_, x: &[f64; 1]| [x[0]], [1.0], (0.0, 1.0), 64).unwrap();
        for j in [0.003, 0.5 + 1.0 / 256.0, 0.777] {
            assert!((t.eval(j).unwrap()[0] - f64::exp(j)).abs() < 1e-8);
        }
        assert!(t.eval(1.2).is_err());
    }

    #[test]
    fn divergence_is_reported() {
        let r = solve_crisp_in_j(|_, x: &[f64; 1]| [x[0] * x[0]], [1e200], (0.0, 1.0), 16);
        assert!(matches!(r, Err(Error::Divergence { last_j }) if last_j == 0.0));
    }

    #[test]
    fn argument_checks() {
        assert!(solve_crisp_in_j(|_, x: &[f64; 1]| *x, [1.0], (0.0, 1.0), 8).is_err());
        assert!(solve_crisp_in_j(|_, x: &[f64; 1]| *x, [1.0], (1.0, 1.0), 32).is_err());
    }

    #[test]
    fn fourth_order_convergence() {
        let err = |steps| {
            let t = solve_crisp_in_j(|_, x: &[f64; 1]| [x[0]], [1.0], (0.0, 1.0), steps).unwrap();
            (t.last()[0] - std::f64::consts::E).abs()
        };
        let ratio = err(16) / err(32);
        assert!(ratio > 14.0 && ratio < 18.0, "{ratio}");
    }
}
