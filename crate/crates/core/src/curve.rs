//! Fractal curves as refinable polylines, their mass function, γ-dimension
//! and the staircase (rise) function `S_F^α`.
//!
//! A curve at refinement level `k` is the polyline through its vertices
//! `w(t_i)`. The mass of a parameter range is the sum of
//! `|w(t_{i+1}) - w(t_i)|^α / Γ(α+1)` over the vertex subdivision of that
//! range. Deeper levels give the refinement sequence whose growth or decay
//! with `k` locates the γ-dimension.

use std::borrow::Cow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Vertex in up to three dimensions. Unused trailing coordinates are zero.
pub type Point = [f64; 3];

pub const MAX_KOCH_LEVEL: u32 = 12;

/// Refinement depth used for γ-dimension estimation when the curve itself is
/// shallower.
pub const MIN_DIMENSION_LEVEL: u32 = 6;

/// Number of top refinement levels fitted by the γ-dimension slope.
pub const DIMENSION_FIT_LEVELS: u32 = 4;

const BISECTION_MAX_ITER: usize = 60;
const SLOPE_ZERO: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefineRule {
    /// Replace each segment by four segments of one third the length with a
    /// 60° bump on the left. Planar curves only.
    Koch,
    /// Split each segment at its parameter midpoint.
    Midpoint,
}

impl RefineRule {
    fn pieces(self) -> usize {
        match self {
            RefineRule::Koch => 4,
            RefineRule::Midpoint => 2,
        }
    }

    fn refine_segment(
        self,
        t: (f64, f64),
        p: Point,
        q: Point,
        params: &mut Vec<f64>,
        points: &mut Vec<Point>,
    ) {
        let n = self.pieces();
        let dt = (t.1 - t.0) / n as f64;
        match self {
            RefineRule::Koch => {
                let d = [(q[0] - p[0]) / 3.0, (q[1] - p[1]) / 3.0];
                let (s, c) = (std::f64::consts::FRAC_PI_3.sin(), 0.5);
                let a = [p[0] + d[0], p[1] + d[1], 0.0];
                let apex = [a[0] + d[0] * c - d[1] * s, a[1] + d[0] * s + d[1] * c, 0.0];
                let b = [p[0] + 2.0 * d[0], p[1] + 2.0 * d[1], 0.0];
                points.extend_from_slice(&[a, apex, b]);
            }
            RefineRule::Midpoint => {
                points.push(lerp(p, q, 0.5));
            }
        }
        params.extend((1..n).map(|j| t.0 + j as f64 * dt));
    }
}

#[derive(Debug, Clone)]
struct Refinement {
    rule: RefineRule,
    base_params: Arc<[f64]>,
    base_points: Arc<[Point]>,
}

/// A parametrized curve `w: [a0, b0] → ℝⁿ` held as a polyline at some
/// refinement level. Linear between vertices.
#[derive(Debug, Clone)]
pub struct FractalCurve {
    params: Vec<f64>,
    points: Vec<Point>,
    dim: usize,
    level: u32,
    refinement: Option<Refinement>,
}

/// Ordered breakpoints `a = t_0 < … < t_n = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    pub breakpoints: Vec<f64>,
}

impl Subdivision {
    pub fn mesh(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    pub fn cells(&self) -> usize {
        self.breakpoints.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassEstimate {
    pub alpha: f64,
    /// Partial sum at the deepest level evaluated.
    pub value: f64,
    /// `(level, partial sum)` for every level evaluated, shallowest first.
    pub levels: Vec<(u32, f64)>,
}

/// Von Koch curve over `[0, 1]` from `(0,0)` to `(1,0)` with `4^level`
/// segments.
pub fn generate_koch(level: u32) -> Result<FractalCurve> {
    if level > MAX_KOCH_LEVEL {
        return Err(Error::Domain {
            what: "koch level",
            value: level as f64,
            lo: 0.0,
            hi: MAX_KOCH_LEVEL as f64,
        });
    }
    let base = generate_polyline(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![1.0, 0.0]])?;
    base.with_refinement(RefineRule::Koch)?.at_level(level)
}

/// Unit straight segment `(0,0)–(1,0)` over `[0, 1]`, refinable by midpoint
/// splitting. At level `k` it has `2^k` equal segments.
pub fn generate_segment(level: u32) -> Result<FractalCurve> {
    let base = generate_polyline(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![1.0, 0.0]])?;
    base.with_refinement(RefineRule::Midpoint)?.at_level(level)
}

/// Wraps explicit vertex data as a non-refinable level-0 curve.
pub fn generate_polyline(params: Vec<f64>, points: Vec<Vec<f64>>) -> Result<FractalCurve> {
    if params.len() != points.len() {
        return Err(Error::Validation(format!(
            "{} params but {} points",
            params.len(),
            points.len()
        )));
    }
    if params.len() < 2 {
        return Err(Error::Validation(
            "a curve needs at least two vertices".into(),
        ));
    }
    if let Some(i) = params.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::Validation(format!(
            "params not strictly increasing at index {}",
            i + 1
        )));
    }
    if params.iter().any(|t| !t.is_finite()) {
        return Err(Error::Validation("non-finite parameter".into()));
    }
    let dim = points[0].len();
    if !(1..=3).contains(&dim) {
        return Err(Error::Validation(format!(
            "points must have 1 to 3 coordinates, got {dim}"
        )));
    }
    let mut pts = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::Validation(format!(
                "point {i} has {} coordinates, expected {dim}",
                p.len()
            )));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation(format!("point {i} is not finite")));
        }
        let mut q = [0.0; 3];
        q[..dim].copy_from_slice(p);
        pts.push(q);
    }
    Ok(FractalCurve {
        params,
        points: pts,
        dim,
        level: 0,
        refinement: None,
    })
}

impl FractalCurve {
    /// Makes the current polyline the level-0 base of a refinable curve.
    pub fn with_refinement(self, rule: RefineRule) -> Result<Self> {
        if rule == RefineRule::Koch && self.dim != 2 {
            return Err(Error::Validation(
                "Koch refinement needs planar points".into(),
            ));
        }
        let refinement = Refinement {
            rule,
            base_params: self.params.clone().into(),
            base_points: self.points.clone().into(),
        };
        Ok(FractalCurve {
            level: 0,
            refinement: Some(refinement),
            ..self
        })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn segments(&self) -> usize {
        self.params.len() - 1
    }

    pub fn is_refinable(&self) -> bool {
        self.refinement.is_some()
    }

    pub fn rule(&self) -> Option<RefineRule> {
        self.refinement.as_ref().map(|r| r.rule)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.params[0], self.params[self.params.len() - 1])
    }

    /// Next refinement level.
    pub fn refine(&self) -> Result<FractalCurve> {
        let refinement = self.refinement.as_ref().ok_or_else(not_refinable)?;
        let rule = refinement.rule;
        let n = self.segments() * rule.pieces() + 1;
        let mut params = Vec::with_capacity(n);
        let mut points = Vec::with_capacity(n);
        for i in 0..self.segments() {
            params.push(self.params[i]);
            points.push(self.points[i]);
            rule.refine_segment(
                (self.params[i], self.params[i + 1]),
                self.points[i],
                self.points[i + 1],
                &mut params,
                &mut points,
            );
        }
        params.push(self.params[self.segments()]);
        points.push(self.points[self.segments()]);
        Ok(FractalCurve {
            params,
            points,
            dim: self.dim,
            level: self.level + 1,
            refinement: self.refinement.clone(),
        })
    }

    /// The same curve at refinement level `level`, regenerated from the base
    /// polyline. A non-refinable curve only exists at its own level.
    pub fn at_level(&self, level: u32) -> Result<FractalCurve> {
        if level == self.level {
            return Ok(self.clone());
        }
        let refinement = self.refinement.as_ref().ok_or_else(not_refinable)?;
        let mut curve = if level > self.level {
            self.clone()
        } else {
            FractalCurve {
                params: refinement.base_params.to_vec(),
                points: refinement.base_points.to_vec(),
                dim: self.dim,
                level: 0,
                refinement: Some(refinement.clone()),
            }
        };
        while curve.level < level {
            curve = curve.refine()?;
        }
        Ok(curve)
    }

    fn check_param(&self, what: &'static str, u: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if u.is_nan() || u < lo || u > hi {
            return Err(Error::Domain {
                what,
                value: u,
                lo,
                hi,
            });
        }
        Ok(())
    }

    /// Index `i` of the segment `[t_i, t_{i+1}]` containing `u`.
    fn segment_of(&self, u: f64) -> usize {
        let k = self.params.partition_point(|&t| t <= u);
        k.clamp(1, self.segments()) - 1
    }

    /// `w(u)` with linear interpolation between vertices.
    pub fn point_at(&self, u: f64) -> Result<Point> {
        self.check_param("u", u)?;
        Ok(self.interpolate(u))
    }

    fn interpolate(&self, u: f64) -> Point {
        let i = self.segment_of(u);
        let (t0, t1) = (self.params[i], self.params[i + 1]);
        if u == t0 {
            return self.points[i];
        }
        if u == t1 {
            return self.points[i + 1];
        }
        lerp(self.points[i], self.points[i + 1], (u - t0) / (t1 - t0))
    }

    /// Vertex subdivision of `[a, b]`: `a`, every vertex strictly inside,
    /// then `b`.
    pub fn subdivision(&self, a: f64, b: f64) -> Result<Subdivision> {
        let (lo, hi) = self.interior_range(a, b)?;
        let mut breakpoints = Vec::with_capacity(hi - lo + 2);
        breakpoints.push(a);
        breakpoints.extend_from_slice(&self.params[lo..hi]);
        breakpoints.push(b);
        Ok(Subdivision { breakpoints })
    }

    /// Vertex index range strictly inside `(a, b)`.
    fn interior_range(&self, a: f64, b: f64) -> Result<(usize, usize)> {
        self.check_param("a", a)?;
        self.check_param("b", b)?;
        if !(a < b) {
            return Err(Error::Validation(format!("empty range [{a}, {b}]")));
        }
        let lo = self.params.partition_point(|&t| t <= a);
        let hi = self.params.partition_point(|&t| t < b);
        Ok((lo, hi.max(lo)))
    }

    fn check_alpha(&self, alpha: f64) -> Result<()> {
        if !(alpha >= 1.0 && alpha <= self.dim as f64) {
            return Err(Error::Order {
                alpha,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// `Σ |Δw|^α / Γ(α+1)` over the vertex subdivision of `[a, b]` at this
    /// curve's level.
    fn level_sum(&self, exec: Exec, alpha: f64, a: f64, b: f64) -> Result<f64> {
        let (lo, hi) = self.interior_range(a, b)?;
        let pa = self.interpolate(a);
        let pb = self.interpolate(b);
        let inner = hi - lo;
        let vertex = |j: usize| -> Point {
            if j == 0 {
                pa
            } else if j == inner + 1 {
                pb
            } else {
                self.points[lo + j - 1]
            }
        };
        let sum = exec.sum(inner + 1, |j| {
            distance(vertex(j), vertex(j + 1)).powf(alpha)
        });
        Ok(sum / gamma(alpha + 1.0))
    }

    /// `ln |Δw|` for each cell of the vertex subdivision of `[a, b]`.
    fn log_lengths(&self, exec: Exec, a: f64, b: f64) -> Result<Vec<f64>> {
        let sub = self.subdivision(a, b)?;
        let pts: Vec<Point> = sub
            .breakpoints
            .iter()
            .map(|&t| self.interpolate(t))
            .collect();
        let logs = exec.map(pts.len() - 1, |i| distance(pts[i], pts[i + 1]).ln());
        Ok(logs.into_iter().filter(|l| l.is_finite()).collect())
    }
}

fn not_refinable() -> Error {
    Error::Capability("polyline has no refinement rule".into())
}

fn lerp(p: Point, q: Point, s: f64) -> Point {
    [
        p[0] + s * (q[0] - p[0]),
        p[1] + s * (q[1] - p[1]),
        p[2] + s * (q[2] - p[2]),
    ]
}

fn distance(p: Point, q: Point) -> f64 {
    let d = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

pub fn mass_function(
    curve: &FractalCurve,
    alpha: f64,
    a: f64,
    b: f64,
    max_level: u32,
) -> Result<MassEstimate> {
    mass_function_with(Exec::default(), curve, alpha, a, b, max_level)
}

/// Level-wise mass sums for levels `curve.level()..=max_level`. A
/// non-refinable curve contributes its own level only.
pub fn mass_function_with(
    exec: Exec,
    curve: &FractalCurve,
    alpha: f64,
    a: f64,
    b: f64,
    max_level: u32,
) -> Result<MassEstimate> {
    curve.check_alpha(alpha)?;
    let top = if curve.is_refinable() {
        max_level.max(curve.level)
    } else {
        curve.level
    };
    let mut levels = Vec::new();
    let mut current = Cow::Borrowed(curve);
    loop {
        levels.push((current.level, current.level_sum(exec, alpha, a, b)?));
        if current.level >= top {
            break;
        }
        current = Cow::Owned(current.refine()?);
    }
    let value = levels.last().map(|l| l.1).unwrap_or(0.0);
    Ok(MassEstimate {
        alpha,
        value,
        levels,
    })
}

pub fn gamma_dimension(curve: &FractalCurve, a: f64, b: f64, tol: f64) -> Result<f64> {
    gamma_dimension_with(Exec::default(), curve, a, b, tol)
}

/// Bisection on α for the sign change of `d ln(sum) / d level`, fitted by
/// least squares over the top [`DIMENSION_FIT_LEVELS`] levels ending at
/// `max(curve.level(), MIN_DIMENSION_LEVEL)`.
pub fn gamma_dimension_with(
    exec: Exec,
    curve: &FractalCurve,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    if !curve.is_refinable() {
        return Err(not_refinable());
    }
    if !(tol > 0.0) {
        return Err(Error::Validation(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let top = curve.level.max(MIN_DIMENSION_LEVEL);
    let first = top + 1 - DIMENSION_FIT_LEVELS;
    let mut logs = Vec::with_capacity(DIMENSION_FIT_LEVELS as usize);
    let mut current = curve.at_level(first)?;
    loop {
        logs.push((current.level as f64, current.log_lengths(exec, a, b)?));
        if current.level == top {
            break;
        }
        current = current.refine()?;
    }

    // Γ(α+1) is constant across levels and drops out of the slope.
    let slope = |alpha: f64| -> f64 {
        let pts: Vec<(f64, f64)> = logs
            .iter()
            .map(|(k, ls)| (*k, exec.sum(ls.len(), |i| (alpha * ls[i]).exp()).ln()))
            .collect();
        least_squares_slope(&pts)
    };

    let (mut lo, mut hi) = (1.0, curve.dim as f64);
    let (s_lo, s_hi) = (slope(lo), slope(hi));
    if s_lo.abs() <= SLOPE_ZERO {
        return Ok(lo);
    }
    if s_hi.abs() <= SLOPE_ZERO {
        return Ok(hi);
    }
    if s_lo < 0.0 || s_hi > 0.0 {
        return Err(Error::Estimation(format!(
            "no sign change of the mass slope on [1, {}] (slopes {s_lo:.3e}, {s_hi:.3e})",
            curve.dim
        )));
    }
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let s = slope(mid);
        if s.abs() <= SLOPE_ZERO {
            return Ok(mid);
        }
        if s > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// `L(w(u)) = |w(u)|`.
pub fn euclidean_rise(curve: &FractalCurve, u: f64) -> Result<f64> {
    let p = curve.point_at(u)?;
    Ok(distance([0.0; 3], p))
}

/// Tabulated staircase `J = S_F^α(u)` anchored at `p0`.
#[derive(Debug, Clone, PartialEq)]
pub struct StaircaseTable {
    alpha: f64,
    p0: f64,
    us: Vec<f64>,
    js: Vec<f64>,
}

pub fn build_staircase(curve: &FractalCurve, alpha: f64, p0: f64) -> Result<StaircaseTable> {
    build_staircase_with(Exec::default(), curve, alpha, p0)
}

/// Tabulates `S_F^α` at every vertex, plus `p0` itself when it is not a
/// vertex.
pub fn build_staircase_with(
    exec: Exec,
    curve: &FractalCurve,
    alpha: f64,
    p0: f64,
) -> Result<StaircaseTable> {
    curve.check_alpha(alpha)?;
    curve.check_param("p0", p0)?;
    let mut us = curve.params.clone();
    let mut pts = curve.points.clone();
    let anchor = match us.binary_search_by(|t| t.total_cmp(&p0)) {
        Ok(i) => i,
        Err(i) => {
            us.insert(i, p0);
            pts.insert(i, curve.interpolate(p0));
            i
        }
    };
    let norm = gamma(alpha + 1.0);
    let cell = exec.map(us.len() - 1, |i| {
        distance(pts[i], pts[i + 1]).powf(alpha) / norm
    });
    let mut js = vec![0.0; us.len()];
    for k in anchor + 1..us.len() {
        js[k] = js[k - 1] + cell[k - 1];
    }
    for k in (0..anchor).rev() {
        js[k] = js[k + 1] - cell[k];
    }
    Ok(StaircaseTable { alpha, p0, us, js })
}

impl StaircaseTable {
    /// User-supplied staircase, e.g. the devil's staircase of a Cantor set.
    /// `p0` must be one of the nodes and carry `J = 0`.
    pub fn from_table(alpha: f64, p0: f64, us: Vec<f64>, js: Vec<f64>) -> Result<Self> {
        if us.len() != js.len() || us.len() < 2 {
            return Err(Error::Validation(
                "staircase needs ≥ 2 matching (u, J) pairs".into(),
            ));
        }
        if let Some(i) = us.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Validation(format!(
                "u not strictly increasing at {}",
                i + 1
            )));
        }
        if let Some(i) = js.windows(2).position(|w| !(w[1] >= w[0])) {
            return Err(Error::Integrity {
                cell: i,
                delta: js[i + 1] - js[i],
            });
        }
        match us.iter().position(|&u| u == p0) {
            Some(i) if js[i] == 0.0 => Ok(StaircaseTable { alpha, p0, us, js }),
            _ => Err(Error::Validation("p0 must be a node with J = 0".into())),
        }
    }

    /// `J = u` on `[a, b]` anchored at `a`: the staircase of a straight unit
    /// speed segment at α = 1.
    pub fn identity(a: f64, b: f64) -> Result<Self> {
        StaircaseTable::from_table(1.0, a, vec![a, b], vec![0.0, b - a])
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn us(&self) -> &[f64] {
        &self.us
    }

    pub fn js(&self) -> &[f64] {
        &self.js
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.us[0], self.us[self.us.len() - 1])
    }

    pub fn j_range(&self) -> (f64, f64) {
        (self.js[0], self.js[self.js.len() - 1])
    }

    /// Smallest gap between consecutive nodes.
    pub fn min_spacing(&self) -> f64 {
        self.us
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn j_at(&self, u: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if u.is_nan() || u < lo || u > hi {
            return Err(Error::Domain {
                what: "u",
                value: u,
                lo,
                hi,
            });
        }
        let k = self.us.partition_point(|&t| t < u);
        if self.us[k] == u {
            return Ok(self.js[k]);
        }
        let (u0, u1) = (self.us[k - 1], self.us[k]);
        let (j0, j1) = (self.js[k - 1], self.js[k]);
        Ok(j0 + (j1 - j0) * (u - u0) / (u1 - u0))
    }

    /// Inverse staircase. On a flat stretch returns the leftmost preimage.
    pub fn u_at(&self, j: f64) -> Result<f64> {
        let (lo, hi) = self.j_range();
        if j.is_nan() || j < lo || j > hi {
            return Err(Error::Domain {
                what: "J",
                value: j,
                lo,
                hi,
            });
        }
        let k = self.js.partition_point(|&x| x < j);
        if self.js[k] == j {
            return Ok(self.us[k]);
        }
        let (u0, u1) = (self.us[k - 1], self.us[k]);
        let (j0, j1) = (self.js[k - 1], self.js[k]);
        Ok(u0 + (u1 - u0) * (j - j0) / (j1 - j0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_segment() -> FractalCurve {
        generate_polyline(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap()
    }

    fn tent() -> FractalCurve {
        generate_polyline(
            vec![0.0, 0.5, 1.0],
            vec![vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 0.0]],
        )
        .unwrap()
    }

    /// Polyline length by direct vertex walk, independent of `level_sum`.
    fn walk_length(c: &FractalCurve) -> f64 {
        c.points().windows(2).map(|w| distance(w[0], w[1])).sum()
    }

    #[test]
    fn koch_vertex_counts_and_lengths() {
        let k0 = generate_koch(0).unwrap();
        assert_eq!(k0.len(), 2);
        assert!((walk_length(&k0) - 1.0).abs() < 1e-15);
        let k1 = generate_koch(1).unwrap();
        assert_eq!(k1.len(), 5);
        assert!((walk_length(&k1) - 4.0 / 3.0).abs() < 1e-14);
        let k2 = generate_koch(2).unwrap();
        assert_eq!(k2.len(), 17);
        assert!((walk_length(&k2) - 16.0 / 9.0).abs() < 1e-14);
        assert_eq!(k2.segments(), 16);
    }

    #[test]
    fn koch_refinement_keeps_endpoints() {
        let k3 = generate_koch(3).unwrap();
        assert_eq!(k3.points()[0], [0.0, 0.0, 0.0]);
        assert_eq!(*k3.points().last().unwrap(), [1.0, 0.0, 0.0]);
        let k4 = k3.refine().unwrap();
        assert!(k4.len() > k3.len());
        assert_eq!(k4.points()[0], k3.points()[0]);
        assert_eq!(k4.points().last(), k3.points().last());
        assert_eq!(k4.level(), 4);
    }

    #[test]
    fn koch_level_bounds() {
        assert!(matches!(generate_koch(13), Err(Error::Domain { .. })));
    }

    #[test]
    fn polyline_validation() {
        assert_eq!(unit_segment().len(), 2);
        assert_eq!(tent().segments(), 2);
        assert!(matches!(
            generate_polyline(vec![0.0, 1.0], vec![vec![0.0, 0.0]]),
            Err(Error::Validation(_))
        ));
        assert!(generate_polyline(vec![0.0, 0.0], vec![vec![0.0], vec![1.0]]).is_err());
        assert!(generate_polyline(vec![0.0, 1.0], vec![vec![0.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn mass_alpha_one_is_length() {
        let m = mass_function(&unit_segment(), 1.0, 0.0, 1.0, 0).unwrap();
        assert!((m.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn koch_mass_levels() {
        let k = generate_koch(0).unwrap();
        let m1 = mass_function(&k, 1.0, 0.0, 1.0, 5).unwrap();
        let m2 = mass_function(&k, 2.0, 0.0, 1.0, 5).unwrap();
        assert_eq!(m1.levels.len(), 6);
        for (i, ((l1, s1), (_, s2))) in m1.levels.iter().zip(&m2.levels).enumerate() {
            assert_eq!(*l1, i as u32);
            let k = i as i32;
            assert!(
                (s1 - (4.0f64 / 3.0).powi(k)).abs() < 1e-12,
                "level {k}: {s1}"
            );
            assert!(
                (s2 - (4.0f64 / 9.0).powi(k) / 2.0).abs() < 1e-12,
                "level {k}: {s2}"
            );
        }
        assert_eq!(m1.value, m1.levels[5].1);
    }

    #[test]
    fn mass_domain_and_order_errors() {
        let c = unit_segment();
        assert!(matches!(
            mass_function(&c, 1.0, -0.1, 1.0, 0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            mass_function(&c, 0.5, 0.0, 1.0, 0),
            Err(Error::Order { .. })
        ));
        assert!(matches!(
            mass_function(&c, 2.5, 0.0, 1.0, 0),
            Err(Error::Order { .. })
        ));
    }

    #[test]
    fn mass_additivity_at_vertex() {
        let k = generate_koch(4).unwrap();
        let alpha = 4f64.ln() / 3f64.ln();
        let b = k.params()[100];
        let ac = mass_function(&k, alpha, 0.0, 1.0, 4).unwrap().value;
        let ab = mass_function(&k, alpha, 0.0, b, 4).unwrap().value;
        let bc = mass_function(&k, alpha, b, 1.0, 4).unwrap().value;
        assert!((ac - ab - bc).abs() < 1e-12);
    }

    #[test]
    fn mass_on_partial_segment() {
        let m = mass_function(&unit_segment(), 1.0, 0.25, 0.75, 0).unwrap();
        assert!((m.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dimension_dichotomy() {
        let k = generate_koch(3).unwrap();
        for (alpha, growing) in [(1.1, true), (1.4, false)] {
            let m = mass_function(&k, alpha, 0.0, 1.0, 8).unwrap();
            let deep: Vec<f64> = m.levels.iter().filter(|l| l.0 >= 6).map(|l| l.1).collect();
            for w in deep.windows(2) {
                assert_eq!(w[1] > w[0], growing, "alpha {alpha}: {deep:?}");
            }
        }
    }

    #[test]
    fn gamma_dimension_values() {
        let koch = generate_koch(8).unwrap();
        let d = gamma_dimension(&koch, 0.0, 1.0, 1e-4).unwrap();
        assert!((d - 4f64.ln() / 3f64.ln()).abs() < 0.05, "{d}");
        let seg = generate_segment(6).unwrap();
        let d = gamma_dimension(&seg, 0.0, 1.0, 1e-4).unwrap();
        assert!((d - 1.0).abs() < 1e-4, "{d}");
        assert!(matches!(
            gamma_dimension(&tent(), 0.0, 1.0, 1e-3),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn staircase_on_segment() {
        let t = build_staircase(&unit_segment(), 1.0, 0.0).unwrap();
        assert_eq!(t.j_at(0.0).unwrap(), 0.0);
        assert!((t.j_at(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((t.j_at(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(t.j_at(1.5).is_err());
        assert!(t.u_at(-0.1).is_err());
    }

    #[test]
    fn staircase_anchor_inside() {
        let k = generate_koch(3).unwrap();
        let t = build_staircase(&k, 1.2, 0.3).unwrap();
        assert_eq!(t.j_at(0.3).unwrap(), 0.0);
        assert!(t.j_at(0.0).unwrap() < 0.0);
        assert!(t.j_at(1.0).unwrap() > 0.0);
        assert!(t.js().windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(t.us().len(), k.len() + 1);
    }

    #[test]
    fn koch_staircase_total_equals_mass() {
        let alpha = 4f64.ln() / 3f64.ln();
        let k = generate_koch(5).unwrap();
        let t = build_staircase(&k, alpha, 0.0).unwrap();
        let m = mass_function(&k, alpha, 0.0, 1.0, 5).unwrap();
        assert!((t.j_at(1.0).unwrap() - m.value).abs() < 1e-12);
        // Self-similar: every level carries mass 1 / Γ(α+1).
        assert!((m.value - 1.0 / gamma(alpha + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn anchor_antisymmetry() {
        let k = generate_koch(4).unwrap();
        let (p0, u) = (k.params()[20], k.params()[200]);
        let s_p0 = build_staircase(&k, 1.3, p0).unwrap();
        let s_u = build_staircase(&k, 1.3, u).unwrap();
        assert!((s_p0.j_at(u).unwrap() + s_u.j_at(p0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn flat_staircase_inverse_is_leftmost() {
        let t = StaircaseTable::from_table(
            1.0,
            0.0,
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0.0, 0.5, 0.5, 1.0],
        )
        .unwrap();
        assert_eq!(t.u_at(0.5).unwrap(), 1.0);
        assert!((t.u_at(0.75).unwrap() - 2.5).abs() < 1e-15);
        assert!(StaircaseTable::from_table(1.0, 0.0, vec![0.0, 1.0], vec![0.0, -1.0]).is_err());
    }

    #[test]
    fn euclidean_rise_values() {
        assert_eq!(euclidean_rise(&unit_segment(), 1.0).unwrap(), 1.0);
        assert_eq!(euclidean_rise(&unit_segment(), 0.0).unwrap(), 0.0);
        // Level-1 Koch apex sits at (1/2, √3/6).
        let k1 = generate_koch(1).unwrap();
        let expected = (0.25f64 + 3.0 / 36.0).sqrt();
        assert!((euclidean_rise(&k1, 0.5).unwrap() - expected).abs() < 1e-15);
        assert!(euclidean_rise(&k1, 1.01).is_err());
    }
}
