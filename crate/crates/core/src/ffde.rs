//! Fractal fuzzy differential equations.
//!
//! First-order problems `D_{F,H}^α x = f(J, x)`, `x(θ₀) = x̃₀` are split into
//! crisp endpoint systems per membership level and integrated in `J`:
//!
//! * case I: `x̲′ = f̲(J, x̲, x̄, r)`, `x̄′ = f̄(J, x̲, x̄, r)`
//! * case II: `x̲′ = f̄(J, x̲, x̄, r)`, `x̄′ = f̲(J, x̲, x̄, r)`
//!
//! Both start from the r-cuts of `x̃₀`. Case II bands can stop being fuzzy
//! numbers at finite `J`; such slices are flagged invalid rather than
//! rejected, and the last valid node is reported as the validity horizon.
//!
//! Second-order linear problems with fuzzy boundary values are split into
//! a crisp boundary value problem on the peaks, solved by linear shooting,
//! plus an uncertainty part spanned by the fundamental pair of the
//! homogeneous equation.

use std::sync::Arc;

use serde::Serialize;

use crate::curve::StaircaseTable;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fuzzy::{
    check_endpoints, uniform_grid, FuzzyNumber, Interval, TriangularFuzzy, DEFAULT_R_POINTS,
};
use crate::fuzzy_calc::DiffCase;
use crate::ode::{solve_crisp_in_j, Trajectory};

pub const DEFAULT_J_STEPS: usize = 256;

/// Slack, relative to the slice magnitude, allowed before a slice counts as
/// an invalid fuzzy number.
pub const VALIDITY_REL_TOL: f64 = 1e-9;

/// Endpoint right-hand side `(f̲, f̄)` evaluated at `(J, x̲, x̄, r)`.
pub trait FuzzyRhs: Send + Sync {
    fn eval(&self, j: f64, lower: f64, upper: f64, r: f64) -> (f64, f64);
}

impl<F> FuzzyRhs for F
where
    F: Fn(f64, f64, f64, f64) -> (f64, f64) + Send + Sync,
{
    fn eval(&self, j: f64, lower: f64, upper: f64, r: f64) -> (f64, f64) {
        self(j, lower, upper, r)
    }
}

/// `f(J, x) = a ⊙ x ⊕ c̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRhs {
    pub a: f64,
    pub c: FuzzyNumber,
}

impl FuzzyRhs for LinearRhs {
    fn eval(&self, _j: f64, lower: f64, upper: f64, r: f64) -> (f64, f64) {
        let c = self.c.r_cut(r).expect("solver levels lie in [0, 1]");
        if self.a >= 0.0 {
            (self.a * lower + c.lo, self.a * upper + c.hi)
        } else {
            (self.a * upper + c.lo, self.a * lower + c.hi)
        }
    }
}

#[derive(Clone)]
pub struct FirstOrderFfdeProblem {
    pub table: StaircaseTable,
    pub rhs: Arc<dyn FuzzyRhs>,
    pub x0: FuzzyNumber,
    /// `[u_start, u_end]` in curve parameters; `x0` is imposed at `u_start`.
    pub span: (f64, f64),
    pub case: DiffCase,
    pub r_points: usize,
    pub j_steps: usize,
    pub exec: Exec,
}

impl std::fmt::Debug for FirstOrderFfdeProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FirstOrderFfdeProblem")
            .field("span", &self.span)
            .field("case", &self.case)
            .field("r_points", &self.r_points)
            .field("j_steps", &self.j_steps)
            .finish_non_exhaustive()
    }
}

impl FirstOrderFfdeProblem {
    pub fn new(
        table: StaircaseTable,
        rhs: Arc<dyn FuzzyRhs>,
        x0: FuzzyNumber,
        span: (f64, f64),
        case: DiffCase,
    ) -> Self {
        FirstOrderFfdeProblem {
            table,
            rhs,
            x0,
            span,
            case,
            r_points: DEFAULT_R_POINTS,
            j_steps: DEFAULT_J_STEPS,
            exec: Exec::default(),
        }
    }

    /// `D x = x ⊕ c̃` with `c̃ = [r-1, 1-r]`, `x(0) = [r, 2-r]` on the unit
    /// segment, where `J = u`.
    pub fn example1(case: DiffCase) -> Self {
        let table = StaircaseTable::identity(0.0, 1.0).expect("unit table");
        let tri = |a, b, c| {
            TriangularFuzzy::new(a, b, c)
                .and_then(|t| t.to_fuzzy(&uniform_grid(DEFAULT_R_POINTS)))
                .expect("static data")
        };
        let rhs = LinearRhs {
            a: 1.0,
            c: tri(-1.0, 0.0, 1.0),
        };
        Self::new(table, Arc::new(rhs), tri(0.0, 1.0, 2.0), (0.0, 1.0), case)
    }

    pub fn with_resolution(mut self, r_points: usize, j_steps: usize) -> Self {
        self.r_points = r_points;
        self.j_steps = j_steps;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    fn j_span(&self) -> Result<(f64, f64)> {
        let (a0, b0) = self.table.domain();
        let (u0, u1) = self.span;
        if !(a0 <= u0 && u0 < u1 && u1 <= b0) {
            return Err(Error::Validation(format!(
                "span [{u0}, {u1}] not inside the table domain [{a0}, {b0}]"
            )));
        }
        if self.r_points < 2 {
            return Err(Error::Validation("need at least two r levels".into()));
        }
        let span = (self.table.j_at(u0)?, self.table.j_at(u1)?);
        if !(span.1 > span.0) {
            return Err(Error::DegenerateDenominator { u_lo: u0, u_hi: u1 });
        }
        Ok(span)
    }
}

/// Band `[x̲(u, r), x̄(u, r)]` on a node × level grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySolution {
    pub case: DiffCase,
    pub us: Vec<f64>,
    pub js: Vec<f64>,
    pub rs: Vec<f64>,
    /// `lowers[k][i] = x̲(us[k], rs[i])`.
    pub lowers: Vec<Vec<f64>>,
    pub uppers: Vec<Vec<f64>>,
    pub valid: Vec<bool>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityHorizon {
    /// Last node before the first invalid one; `None` if the very first
    /// slice is invalid.
    pub last_valid: Option<usize>,
    pub first_invalid: Option<usize>,
    pub u: Option<f64>,
    pub j: Option<f64>,
}

impl FuzzySolution {
    /// Assembles a solution and computes per-node validity.
    pub fn from_parts(
        case: DiffCase,
        us: Vec<f64>,
        js: Vec<f64>,
        rs: Vec<f64>,
        lowers: Vec<Vec<f64>>,
        uppers: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = us.len();
        if js.len() != n || lowers.len() != n || uppers.len() != n {
            return Err(Error::Validation("solution arrays differ in length".into()));
        }
        if lowers
            .iter()
            .chain(&uppers)
            .any(|row| row.len() != rs.len())
        {
            return Err(Error::Validation(
                "solution rows differ from the r-grid".into(),
            ));
        }
        let valid = (0..n)
            .map(|k| {
                let scale = lowers[k]
                    .iter()
                    .chain(&uppers[k])
                    .fold(1.0f64, |m, x| m.max(x.abs()));
                check_endpoints(&rs, &lowers[k], &uppers[k], VALIDITY_REL_TOL * scale).is_valid()
            })
            .collect();
        let mut sol = FuzzySolution {
            case,
            us,
            js,
            rs,
            lowers,
            uppers,
            valid,
            warnings: Vec::new(),
        };
        let h = sol.horizon();
        if let Some(k) = h.first_invalid {
            if h.last_valid.is_none() {
                sol.warnings
                    .push("no slice of the solution is a valid fuzzy number".into());
            } else {
                sol.warnings.push(format!(
                    "solution stops being a fuzzy number after J = {} (u = {})",
                    sol.js[k - 1],
                    sol.us[k - 1]
                ));
            }
        }
        Ok(sol)
    }

    pub fn nodes(&self) -> usize {
        self.us.len()
    }

    /// The r-slice at node `k`, possibly invalid.
    pub fn slice(&self, k: usize) -> Result<FuzzyNumber> {
        FuzzyNumber::from_raw(
            self.rs.clone(),
            self.lowers[k].clone(),
            self.uppers[k].clone(),
        )
    }

    pub fn horizon(&self) -> ValidityHorizon {
        let first_invalid = self.valid.iter().position(|v| !v);
        let last_valid = match first_invalid {
            Some(0) => None,
            Some(k) => Some(k - 1),
            None => self.valid.len().checked_sub(1),
        };
        ValidityHorizon {
            last_valid,
            first_invalid,
            u: last_valid.map(|k| self.us[k]),
            j: last_valid.map(|k| self.js[k]),
        }
    }

    /// `x̄ - x̲` at node `k`, level index `i`.
    pub fn width(&self, k: usize, i: usize) -> f64 {
        self.uppers[k][i] - self.lowers[k][i]
    }
}

/// Dispatches on `problem.case`.
pub fn solve(problem: &FirstOrderFfdeProblem) -> Result<FuzzySolution> {
    match problem.case {
        DiffCase::I => solve_case1(problem),
        DiffCase::II => solve_case2(problem),
    }
}

pub fn solve_case1(problem: &FirstOrderFfdeProblem) -> Result<FuzzySolution> {
    if problem.case != DiffCase::I {
        return Err(Error::Validation(
            "solve_case1 needs a case I problem".into(),
        ));
    }
    solve_full_grid(problem)
}

pub fn solve_case2(problem: &FirstOrderFfdeProblem) -> Result<FuzzySolution> {
    if problem.case != DiffCase::II {
        return Err(Error::Validation(
            "solve_case2 needs a case II problem".into(),
        ));
    }
    solve_full_grid(problem)
}

fn solve_level(
    problem: &FirstOrderFfdeProblem,
    j_span: (f64, f64),
    r: f64,
) -> Result<Trajectory<2>> {
    let cut = problem.x0.r_cut(r)?;
    let rhs = &problem.rhs;
    let case = problem.case;
    solve_crisp_in_j(
        |j, x: &[f64; 2]| {
            let (fl, fu) = rhs.eval(j, x[0], x[1], r);
            match case {
                DiffCase::I => [fl, fu],
                DiffCase::II => [fu, fl],
            }
        },
        [cut.lo, cut.hi],
        j_span,
        problem.j_steps,
    )
}

fn node_params(problem: &FirstOrderFfdeProblem, traj: &Trajectory<2>) -> Result<Vec<f64>> {
    let mut us = traj.node_params(&problem.table)?;
    let last = us.len() - 1;
    us[0] = problem.span.0;
    us[last] = problem.span.1;
    Ok(us)
}

/// Integrates every level of the r-grid independently.
fn solve_full_grid(problem: &FirstOrderFfdeProblem) -> Result<FuzzySolution> {
    let j_span = problem.j_span()?;
    let rs = uniform_grid(problem.r_points);
    let trajs = problem
        .exec
        .map(rs.len(), |i| solve_level(problem, j_span, rs[i]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let js = trajs[0].js().to_vec();
    let us = node_params(problem, &trajs[0])?;
    let lowers = (0..js.len())
        .map(|k| trajs.iter().map(|t| t.states()[k][0]).collect())
        .collect();
    let uppers = (0..js.len())
        .map(|k| trajs.iter().map(|t| t.states()[k][1]).collect())
        .collect();
    FuzzySolution::from_parts(problem.case, us, js, rs, lowers, uppers)
}

/// Integrates only the 0-cut and 1-cut systems and assembles every level
/// as `(1 - r) x^[0] + r x^[1]`. Exact when the band is affine in `r`, as
/// for a linear right-hand side with r-linear data.
pub fn solve_zero_one_cut(problem: &FirstOrderFfdeProblem) -> Result<FuzzySolution> {
    let j_span = problem.j_span()?;
    let rs = uniform_grid(problem.r_points);
    let zero = solve_level(problem, j_span, 0.0)?;
    let one = solve_level(problem, j_span, 1.0)?;
    let js = zero.js().to_vec();
    let us = node_params(problem, &zero)?;
    let blend = |end: usize| -> Vec<Vec<f64>> {
        (0..js.len())
            .map(|k| {
                let (a, b) = (zero.states()[k][end], one.states()[k][end]);
                rs.iter().map(|&r| (1.0 - r) * a + r * b).collect()
            })
            .collect()
    };
    let (lowers, uppers) = (blend(0), blend(1));
    FuzzySolution::from_parts(problem.case, us, js, rs, lowers, uppers)
}

/// Band `(J, r) -> (lower, upper)`.
pub type ClosedForm = fn(f64, f64) -> (f64, f64);

/// Closed-form bands of the linear example `D x = x ⊕ [r-1, 1-r]`,
/// `x(0) = [r, 2-r]`, as functions of `(J, r)`.
pub fn example1_closed_form(case: DiffCase) -> ClosedForm {
    match case {
        DiffCase::I => |j, r| {
            let e = j.exp();
            (e * (2.0 * r - 1.0) - r + 1.0, r - e * (2.0 * r - 3.0) - 1.0)
        },
        DiffCase::II => |j, r| {
            let (e, inv) = (j.exp(), (-j).exp());
            (
                e - r + (2.0 * r - 2.0) * inv + 1.0,
                r + e - (2.0 * r - 2.0) * inv - 1.0,
            )
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub max_abs: f64,
    pub rms: f64,
    /// Grid points compared (each contributes two endpoint errors).
    pub points: usize,
    /// `(u, r)` of the largest error.
    pub worst: Option<(f64, f64)>,
    pub tol: f64,
    pub passed: bool,
}

/// Max and RMS endpoint error of `sol` against `closed(J, r)`. With
/// `restrict_to_valid` only nodes up to the validity horizon count.
pub fn verify_against_closed_form<F>(
    sol: &FuzzySolution,
    closed: F,
    tol: f64,
    restrict_to_valid: bool,
) -> ErrorReport
where
    F: Fn(f64, f64) -> (f64, f64),
{
    let limit = if restrict_to_valid {
        sol.horizon().last_valid.map_or(0, |k| k + 1)
    } else {
        sol.nodes()
    };
    let (mut max_abs, mut sq, mut points, mut worst) = (0.0f64, 0.0, 0usize, None);
    for k in 0..limit {
        for (i, &r) in sol.rs.iter().enumerate() {
            let (lo, hi) = closed(sol.js[k], r);
            let e = (sol.lowers[k][i] - lo)
                .abs()
                .max((sol.uppers[k][i] - hi).abs());
            sq += (sol.lowers[k][i] - lo).powi(2) + (sol.uppers[k][i] - hi).powi(2);
            points += 1;
            if e > max_abs || worst.is_none() {
                max_abs = max_abs.max(e);
                worst = Some((sol.us[k], r));
            }
        }
    }
    let rms = if points == 0 {
        0.0
    } else {
        (sq / (2 * points) as f64).sqrt()
    };
    ErrorReport {
        max_abs,
        rms,
        points,
        worst,
        tol,
        passed: points > 0 && max_abs <= tol,
    }
}

/// `x'' + damping·x' + stiffness·x = forcing(J)` on `j_span` with
/// triangular fuzzy values at both ends.
#[derive(Clone)]
pub struct SecondOrderFuzzyBvp {
    pub damping: f64,
    pub stiffness: f64,
    pub forcing: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub j_span: (f64, f64),
    pub left: TriangularFuzzy,
    pub right: TriangularFuzzy,
    pub steps: usize,
}

impl std::fmt::Debug for SecondOrderFuzzyBvp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SecondOrderFuzzyBvp")
            .field("damping", &self.damping)
            .field("stiffness", &self.stiffness)
            .field("j_span", &self.j_span)
            .field("left", &self.left)
            .field("right", &self.right)
            .field("steps", &self.steps)
            .finish_non_exhaustive()
    }
}

impl SecondOrderFuzzyBvp {
    /// `x'' - 4x' + 4x = 1 - 2J²`, `x(0) = (2,3,4)`, `x(1) = (1,2,2.5)`.
    pub fn example2() -> Self {
        SecondOrderFuzzyBvp {
            damping: -4.0,
            stiffness: 4.0,
            forcing: Arc::new(|j| 1.0 - 2.0 * j * j),
            j_span: (0.0, 1.0),
            left: TriangularFuzzy {
                a: 2.0,
                b: 3.0,
                c: 4.0,
            },
            right: TriangularFuzzy {
                a: 1.0,
                b: 2.0,
                c: 2.5,
            },
            steps: DEFAULT_J_STEPS,
        }
    }

    pub fn fundamental_pair(&self) -> FundamentalPair {
        FundamentalPair::new(self.damping, self.stiffness)
    }
}

/// Two independent solutions of `x'' + p x' + q x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FundamentalPair {
    /// `e^{λ₁J}`, `e^{λ₂J}`.
    Distinct(f64, f64),
    /// `e^{λJ}`, `J e^{λJ}`.
    Repeated(f64),
    /// `e^{σJ} cos ωJ`, `e^{σJ} sin ωJ`.
    Oscillatory { sigma: f64, omega: f64 },
}

impl FundamentalPair {
    pub fn new(p: f64, q: f64) -> Self {
        let disc = p * p - 4.0 * q;
        let scale = (p * p).max(q.abs()).max(1.0);
        if disc.abs() <= 1e-12 * scale {
            FundamentalPair::Repeated(-0.5 * p)
        } else if disc > 0.0 {
            let s = disc.sqrt();
            FundamentalPair::Distinct(0.5 * (-p + s), 0.5 * (-p - s))
        } else {
            FundamentalPair::Oscillatory {
                sigma: -0.5 * p,
                omega: 0.5 * (-disc).sqrt(),
            }
        }
    }

    pub fn eval(&self, j: f64) -> (f64, f64) {
        match *self {
            FundamentalPair::Distinct(l1, l2) => ((l1 * j).exp(), (l2 * j).exp()),
            FundamentalPair::Repeated(l) => {
                let e = (l * j).exp();
                (e, j * e)
            }
            FundamentalPair::Oscillatory { sigma, omega } => {
                let e = (sigma * j).exp();
                (e * (omega * j).cos(), e * (omega * j).sin())
            }
        }
    }
}

/// Crisp part, interpolation weights and uncertainty envelope on the `J`
/// nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct BvpSolution {
    pub js: Vec<f64>,
    pub crisp: Vec<f64>,
    /// Weights `q = p M⁻¹`, with `q(j_left) = (1, 0)` and `q(j_right) = (0, 1)`.
    pub weights: Vec<(f64, f64)>,
    /// `q₁ ⊙ B̃₀ ⊕ q₂ ⊙ B̃₁`, peak zero.
    pub uncertainty: Vec<TriangularFuzzy>,
    /// `M = [[x₁(j_left), x₂(j_left)], [x₁(j_right), x₂(j_right)]]`.
    pub boundary_matrix: [[f64; 2]; 2],
    /// Initial slope found by shooting.
    pub initial_slope: f64,
}

impl BvpSolution {
    /// `x_cr + (1 - κ)[x̲_un,0, x̄_un,0]` at node `k`.
    pub fn kappa_cut(&self, k: usize, kappa: f64) -> Result<Interval> {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(Error::Domain {
                what: "kappa",
                value: kappa,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let un = self.uncertainty[k];
        let s = 1.0 - kappa;
        Ok(Interval {
            lo: self.crisp[k] + s * un.a,
            hi: self.crisp[k] + s * un.c,
        })
    }

    pub fn kappa_band(&self, kappa: f64) -> Result<Vec<Interval>> {
        (0..self.js.len())
            .map(|k| self.kappa_cut(k, kappa))
            .collect()
    }

    /// The full fuzzy value `x_cr ⊕ x̃_un` at node `k`.
    pub fn value_at(&self, k: usize, rs: &[f64]) -> Result<FuzzyNumber> {
        let x = self.crisp[k];
        let un = self.uncertainty[k];
        TriangularFuzzy::new(x + un.a, x, x + un.c)?.to_fuzzy(rs)
    }
}

pub fn solve_second_order_bvp(problem: &SecondOrderFuzzyBvp) -> Result<BvpSolution> {
    let (jl, jr) = problem.j_span;
    let (p, q) = (problem.damping, problem.stiffness);
    let g = &problem.forcing;

    // Linear shooting: x = y_part + s · y_hom with y_part(jl) = peak, y_part'(jl) = 0
    // and y_hom(jl) = 0, y_hom'(jl) = 1.
    let forced = |j: f64, x: &[f64; 2]| [x[1], g(j) - p * x[1] - q * x[0]];
    let homogeneous = |_: f64, x: &[f64; 2]| [x[1], -p * x[1] - q * x[0]];
    let part = solve_crisp_in_j(forced, [problem.left.b, 0.0], (jl, jr), problem.steps)?;
    let hom = solve_crisp_in_j(homogeneous, [0.0, 1.0], (jl, jr), problem.steps)?;
    let hom_end = hom.last()[0];
    if hom_end.abs() < 1e-12 * hom.states().iter().fold(1.0f64, |m, s| m.max(s[0].abs())) {
        return Err(Error::Conditioning(
            "shooting: homogeneous solution vanishes at the right end".into(),
        ));
    }
    let s = (problem.right.b - part.last()[0]) / hom_end;
    let crisp: Vec<f64> = part
        .states()
        .iter()
        .zip(hom.states())
        .map(|(a, b)| a[0] + s * b[0])
        .collect();

    let pair = problem.fundamental_pair();
    let (l1, l2) = pair.eval(jl);
    let (r1, r2) = pair.eval(jr);
    let m = [[l1, l2], [r1, r2]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let norm2 = m.iter().flatten().map(|x| x * x).sum::<f64>();
    if !(det.abs() > 1e-12 * norm2) {
        return Err(Error::Conditioning(format!(
            "boundary matrix is singular (det = {det:e})"
        )));
    }
    // q M = p(J): solve Mᵀ qᵀ = pᵀ by Cramer's rule.
    let weights: Vec<(f64, f64)> = part
        .js()
        .iter()
        .map(|&j| {
            let (x1, x2) = pair.eval(j);
            let q1 = (x1 * m[1][1] - x2 * m[1][0]) / det;
            let q2 = (x2 * m[0][0] - x1 * m[0][1]) / det;
            (q1, q2)
        })
        .collect();
    let (b0, b1) = (problem.left.centered(), problem.right.centered());
    let uncertainty = weights
        .iter()
        .map(|&(q1, q2)| b0.scale(q1).add(&b1.scale(q2)))
        .collect();

    Ok(BvpSolution {
        js: part.js().to_vec(),
        crisp,
        weights,
        uncertainty,
        boundary_matrix: m,
        initial_slope: s,
    })
}

/// Largest `|x'' + p x' + q x - g(J)|` over interior nodes of the crisp
/// part, with derivatives from fourth-order central differences.
pub fn bvp_residual(problem: &SecondOrderFuzzyBvp, sol: &BvpSolution) -> f64 {
    let x = &sol.crisp;
    let n = x.len();
    let h = sol.js[1] - sol.js[0];
    (2..n - 2)
        .map(|k| {
            let d1 = (x[k - 2] - 8.0 * x[k - 1] + 8.0 * x[k + 1] - x[k + 2]) / (12.0 * h);
            let d2 = (-x[k - 2] + 16.0 * x[k - 1] - 30.0 * x[k] + 16.0 * x[k + 1] - x[k + 2])
                / (12.0 * h * h);
            (d2 + problem.damping * d1 + problem.stiffness * x[k] - (problem.forcing)(sol.js[k]))
                .abs()
        })
        .fold(0.0, f64::max)
}

/// `x_cr(J) = -½(J+1)² + 3.5(1-J)e^{2J} + 4J e^{2(J-1)}`.
pub fn example2_crisp_closed_form(j: f64) -> f64 {
    -0.5 * (j + 1.0).powi(2) + 3.5 * (1.0 - j) * (2.0 * j).exp() + 4.0 * j * (2.0 * (j - 1.0)).exp()
}
