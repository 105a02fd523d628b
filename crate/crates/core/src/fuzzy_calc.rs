//! Fuzzy-valued calculus on fractal curves.
//!
//! The fractal Hukuhara derivative uses one-sided (θ > θ₀) forward
//! differences. Parametrically a case I derivative is `(x̲′, x̄′)` and a case
//! II derivative is `(x̄′, x̲′)`, with `′` the derivative in `J`.

use serde::{Deserialize, Serialize};

use crate::curve::{FractalCurve, StaircaseTable};
use crate::error::{Error, Result};
use crate::exec::{pairwise_sum, Exec, BLOCK};
use crate::fuzzy::{FuzzyNumber, TriangularFuzzy};

/// Which Hukuhara difference ordering the derivative quotient uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiffCase {
    I,
    II,
}

impl DiffCase {
    pub fn label(self) -> &'static str {
        match self {
            DiffCase::I => "I",
            DiffCase::II => "II",
        }
    }
}

impl std::str::FromStr for DiffCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "1" => Ok(DiffCase::I),
            "II" | "ii" | "2" => Ok(DiffCase::II),
            _ => Err(Error::Validation(format!(
                "unknown case {s:?}, expected I or II"
            ))),
        }
    }
}

/// A fuzzy-number-valued function of the curve parameter.
pub trait FuzzyCurveFunction: Sync {
    fn domain(&self) -> (f64, f64);
    fn eval(&self, u: f64) -> Result<FuzzyNumber>;
}

/// Closure-backed [`FuzzyCurveFunction`].
pub struct FuzzyFn<F> {
    domain: (f64, f64),
    f: F,
}

impl<F> FuzzyFn<F>
where
    F: Fn(f64) -> Result<FuzzyNumber> + Sync,
{
    pub fn new(domain: (f64, f64), f: F) -> Self {
        FuzzyFn { domain, f }
    }
}

impl<F> FuzzyCurveFunction for FuzzyFn<F>
where
    F: Fn(f64) -> Result<FuzzyNumber> + Sync,
{
    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn eval(&self, u: f64) -> Result<FuzzyNumber> {
        let (lo, hi) = self.domain;
        if !(u >= lo && u <= hi) {
            return Err(Error::Domain {
                what: "u",
                value: u,
                lo,
                hi,
            });
        }
        (self.f)(u)
    }
}

/// Crisp function embedded as degenerate fuzzy numbers on `rs`.
pub fn embed_crisp<G>(
    domain: (f64, f64),
    rs: Vec<f64>,
    g: G,
) -> FuzzyFn<impl Fn(f64) -> Result<FuzzyNumber> + Sync>
where
    G: Fn(f64) -> f64 + Sync,
{
    FuzzyFn::new(domain, move |u| FuzzyNumber::crisp_on(g(u), &rs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    pub u0: f64,
    pub deltas: Vec<f64>,
    /// `d_H(f(u0 - δ), f(u0))`, `None` where `u0 - δ` leaves the domain.
    pub left: Vec<Option<f64>>,
    /// `d_H(f(u0 + δ), f(u0))`, `None` where `u0 + δ` leaves the domain.
    pub right: Vec<Option<f64>>,
}

impl ContinuityReport {
    /// Larger of the two one-sided distances per δ.
    pub fn distances(&self) -> Vec<f64> {
        self.left
            .iter()
            .zip(&self.right)
            .map(|(l, r)| l.unwrap_or(0.0).max(r.unwrap_or(0.0)))
            .collect()
    }

    /// Distances shrink as δ shrinks and end below `tol`.
    pub fn is_continuous(&self, tol: f64) -> bool {
        let d = self.distances();
        let decaying = d.windows(2).all(|w| w[1] <= w[0] + tol);
        decaying && d.last().is_some_and(|&x| x <= tol)
    }
}

/// Probes fuzzy F-continuity at `u0` along a decreasing sequence of offsets.
pub fn ff_continuity_probe<F: FuzzyCurveFunction>(
    f: &F,
    u0: f64,
    deltas: &[f64],
) -> Result<ContinuityReport> {
    if deltas.is_empty() || deltas.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::Validation("deltas must be positive".into()));
    }
    if deltas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Validation(
            "deltas must be strictly decreasing".into(),
        ));
    }
    let (lo, hi) = f.domain();
    let center = f.eval(u0)?;
    let side = |u: f64| -> Result<Option<f64>> {
        if u < lo || u > hi {
            return Ok(None);
        }
        Ok(Some(f.eval(u)?.hausdorff_distance(&center)))
    };
    let mut left = Vec::with_capacity(deltas.len());
    let mut right = Vec::with_capacity(deltas.len());
    for &d in deltas {
        left.push(side(u0 - d)?);
        right.push(side(u0 + d)?);
    }
    Ok(ContinuityReport {
        u0,
        deltas: deltas.to_vec(),
        left,
        right,
    })
}

/// Forward-difference fractal Hukuhara derivative at `u0`.
///
/// Case I: `(f(u0+h) ⊖ f(u0)) / ΔJ`. Case II: `-(f(u0) ⊖ f(u0+h)) / ΔJ`,
/// where the negative scalar swaps endpoints so the result is
/// `(x̄′, x̲′)`.
pub fn fractal_hukuhara_derivative<F: FuzzyCurveFunction>(
    f: &F,
    table: &StaircaseTable,
    u0: f64,
    case: DiffCase,
    h: f64,
) -> Result<FuzzyNumber> {
    let (lo, hi) = f.domain();
    if !(h > 0.0) {
        return Err(Error::Validation(format!(
            "step h must be positive, got {h}"
        )));
    }
    if !(u0 >= lo && u0 + h <= hi) {
        return Err(Error::Domain {
            what: "u0 + h",
            value: u0 + h,
            lo,
            hi,
        });
    }
    let dj = table.j_at(u0 + h)? - table.j_at(u0)?;
    if !(dj > 0.0) {
        return Err(Error::DegenerateDenominator {
            u_lo: u0,
            u_hi: u0 + h,
        });
    }
    let here = f.eval(u0)?;
    let ahead = f.eval(u0 + h)?;
    let inapplicable = |e: Error| match e {
        Error::HukuharaNonexistence { r, .. } => Error::CaseInapplicable {
            case: case.label(),
            r,
        },
        other => other,
    };
    match case {
        DiffCase::I => Ok(ahead
            .hukuhara_diff(&here)
            .map_err(inapplicable)?
            .scale(1.0 / dj)),
        DiffCase::II => Ok(here
            .hukuhara_diff(&ahead)
            .map_err(inapplicable)?
            .scale(-1.0 / dj)),
    }
}

/// Sample point of each cell in the fuzzy Riemann sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureRule {
    /// `f(θ_i)` at the left end of each cell.
    #[default]
    LeftEndpoint,
    Midpoint,
}

pub fn ff_riemann_integral<F: FuzzyCurveFunction>(
    f: &F,
    curve: &FractalCurve,
    table: &StaircaseTable,
    a: f64,
    b: f64,
) -> Result<FuzzyNumber> {
    ff_riemann_integral_with(
        Exec::default(),
        QuadratureRule::LeftEndpoint,
        f,
        curve,
        table,
        a,
        b,
    )
}

struct BlockSum {
    lowers: Vec<f64>,
    uppers: Vec<f64>,
    tri: Option<[f64; 3]>,
}

/// `⊕Σ ΔJ_i ⊙ f(θ_i)` over the vertex subdivision of `[a, b]`.
///
/// Since every `ΔJ_i ≥ 0` the fuzzy sum is the per-level crisp sum of the
/// endpoints, accumulated with the same blocked pairwise order as
/// [`Exec::sum`]. Evaluations are sampled on the r-grid of `f(a)`. When every
/// evaluation is triangular the result is built from the three
/// componentwise sums.
pub fn ff_riemann_integral_with<F: FuzzyCurveFunction>(
    exec: Exec,
    rule: QuadratureRule,
    f: &F,
    curve: &FractalCurve,
    table: &StaircaseTable,
    a: f64,
    b: f64,
) -> Result<FuzzyNumber> {
    let sub = curve.subdivision(a, b)?;
    let t = &sub.breakpoints;
    let js = t
        .iter()
        .map(|&u| table.j_at(u))
        .collect::<Result<Vec<f64>>>()?;
    if let Some(i) = js.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::Integrity {
            cell: i,
            delta: js[i + 1] - js[i],
        });
    }
    let cells = sub.cells();
    let rs = f.eval(a)?.rs().to_vec();
    let nr = rs.len();
    let sample = |i: usize| match rule {
        QuadratureRule::LeftEndpoint => t[i],
        QuadratureRule::Midpoint => 0.5 * (t[i] + t[i + 1]),
    };

    let blocks = exec.map(cells.div_ceil(BLOCK), |blk| -> Result<BlockSum> {
        let range = blk * BLOCK..((blk + 1) * BLOCK).min(cells);
        let m = range.len();
        let mut lo_terms = vec![0.0; m * nr];
        let mut hi_terms = vec![0.0; m * nr];
        let mut tri_terms: Option<Vec<[f64; 3]>> = Some(Vec::with_capacity(m));
        for (k, i) in range.enumerate() {
            let dj = js[i + 1] - js[i];
            let v = f.eval(sample(i))?.resample(&rs)?;
            for ri in 0..nr {
                lo_terms[ri * m + k] = dj * v.lowers()[ri];
                hi_terms[ri * m + k] = dj * v.uppers()[ri];
            }
            tri_terms = match (tri_terms, v.triangular()) {
                (Some(mut acc), Some(tv)) => {
                    acc.push([dj * tv.a, dj * tv.b, dj * tv.c]);
                    Some(acc)
                }
                _ => None,
            };
        }
        let column = |terms: &[f64], ri: usize| pairwise_sum(&terms[ri * m..(ri + 1) * m]);
        Ok(BlockSum {
            lowers: (0..nr).map(|ri| column(&lo_terms, ri)).collect(),
            uppers: (0..nr).map(|ri| column(&hi_terms, ri)).collect(),
            tri: tri_terms.map(|tt| {
                let comp = |c: usize| pairwise_sum(&tt.iter().map(|x| x[c]).collect::<Vec<_>>());
                [comp(0), comp(1), comp(2)]
            }),
        })
    });
    let blocks = blocks.into_iter().collect::<Result<Vec<BlockSum>>>()?;

    let across = |pick: &dyn Fn(&BlockSum) -> f64| {
        pairwise_sum(&blocks.iter().map(pick).collect::<Vec<_>>())
    };
    if blocks.iter().all(|b| b.tri.is_some()) {
        let comp = |c: usize| across(&|b: &BlockSum| b.tri.expect("checked")[c]);
        let tri = TriangularFuzzy::new(comp(0), comp(1), comp(2))?;
        return tri.to_fuzzy(&rs);
    }
    let lowers = (0..nr)
        .map(|ri| across(&|b: &BlockSum| b.lowers[ri]))
        .collect();
    let uppers = (0..nr)
        .map(|ri| across(&|b: &BlockSum| b.uppers[ri]))
        .collect();
    FuzzyNumber::from_table(rs, lowers, uppers)
}
