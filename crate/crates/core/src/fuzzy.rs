//! Fuzzy numbers in parametric form `A = (A⁻(r), A⁺(r))`, sampled on a grid
//! of membership levels, with an exact path for triangular numbers.
//!
//! Operands on different r-grids are resampled onto the union grid by
//! linear interpolation before any endpoint-wise operation.

use crate::error::{Error, Result};

/// Default number of membership levels, `{0, 0.01, …, 1}`.
pub const DEFAULT_R_POINTS: usize = 101;

/// Relative slack used when deciding whether a Hukuhara difference exists.
pub const HUKUHARA_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::Validation(format!(
                "interval [{lo}, {hi}] has lo > hi"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Triangular fuzzy number `(a, b, c)`: feet `a`, `c`, peak `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangularFuzzy {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TriangularFuzzy {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a <= b && b <= c) {
            return Err(Error::Validation(format!(
                "triangular ({a}, {b}, {c}) needs a ≤ b ≤ c"
            )));
        }
        Ok(TriangularFuzzy { a, b, c })
    }

    pub fn r_cut(&self, r: f64) -> Interval {
        Interval {
            lo: self.a + (self.b - self.a) * r,
            hi: self.c - (self.c - self.b) * r,
        }
    }

    /// Shifts the peak to zero: `(a - b, 0, c - b)`.
    pub fn centered(&self) -> TriangularFuzzy {
        TriangularFuzzy {
            a: self.a - self.b,
            b: 0.0,
            c: self.c - self.b,
        }
    }

    pub fn add(&self, o: &TriangularFuzzy) -> TriangularFuzzy {
        TriangularFuzzy {
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c,
        }
    }

    pub fn scale(&self, lambda: f64) -> TriangularFuzzy {
        let (a, b, c) = (lambda * self.a, lambda * self.b, lambda * self.c);
        if lambda >= 0.0 {
            TriangularFuzzy { a, b, c }
        } else {
            TriangularFuzzy { a: c, b, c: a }
        }
    }

    pub fn to_fuzzy(&self, rs: &[f64]) -> Result<FuzzyNumber> {
        check_grid(rs)?;
        let (lowers, uppers) = rs
            .iter()
            .map(|&r| {
                let cut = self.r_cut(r);
                (cut.lo, cut.hi)
            })
            .unzip();
        Ok(FuzzyNumber {
            rs: rs.to_vec(),
            lowers,
            uppers,
            tri: Some(*self),
        })
    }
}

/// `{0, 1/(n-1), …, 1}`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    let n = n.max(2);
    let mut rs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    rs[n - 1] = 1.0;
    rs
}

fn check_grid(rs: &[f64]) -> Result<()> {
    if rs.len() < 2 || rs[0] != 0.0 || rs[rs.len() - 1] != 1.0 {
        return Err(Error::Validation(
            "r-grid must start at 0 and end at 1".into(),
        ));
    }
    if rs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Validation(
            "r-grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `A⁻` decreases between grid levels `index` and `index + 1`.
    LowerDecreasing,
    /// `A⁺` increases between grid levels `index` and `index + 1`.
    UpperIncreasing,
    /// `A⁻(r) > A⁺(r)` at grid level `index`.
    LowerAboveUpper,
    /// The cut at `index + 1` is not contained in the cut at `index`.
    NotNested,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub index: usize,
    pub r: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub violations: Vec<Violation>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    /// Smallest r at which anything is violated.
    pub fn first_r(&self) -> Option<f64> {
        self.violations.iter().map(|v| v.r).reduce(f64::min)
    }
}

/// Checks the parametric-form conditions on sampled endpoints, allowing
/// violations up to `tol`.
pub fn check_endpoints(rs: &[f64], lowers: &[f64], uppers: &[f64], tol: f64) -> Diagnostics {
    let mut violations = Vec::new();
    let mut flag = |kind, index: usize| {
        violations.push(Violation {
            kind,
            index,
            r: rs[index],
        })
    };
    for i in 0..rs.len() {
        if lowers[i] > uppers[i] + tol {
            flag(ViolationKind::LowerAboveUpper, i);
        }
    }
    for i in 0..rs.len().saturating_sub(1) {
        let lower_down = lowers[i + 1] < lowers[i] - tol;
        let upper_up = uppers[i + 1] > uppers[i] + tol;
        if lower_down {
            flag(ViolationKind::LowerDecreasing, i);
        }
        if upper_up {
            flag(ViolationKind::UpperIncreasing, i);
        }
        if lower_down || upper_up {
            flag(ViolationKind::NotNested, i);
        }
    }
    violations.sort_by_key(|v| v.index);
    Diagnostics { violations }
}

/// A fuzzy number sampled on an r-grid `rs` containing 0 and 1.
///
/// Values from [`FuzzyNumber::from_raw`] may violate the fuzzy-number
/// conditions; every other constructor and operation returns a valid number.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNumber {
    rs: Vec<f64>,
    lowers: Vec<f64>,
    uppers: Vec<f64>,
    tri: Option<TriangularFuzzy>,
}

/// Triangular number on the default grid.
pub fn make_triangular(a: f64, b: f64, c: f64) -> Result<FuzzyNumber> {
    TriangularFuzzy::new(a, b, c)?.to_fuzzy(&uniform_grid(DEFAULT_R_POINTS))
}

impl FuzzyNumber {
    /// Table without invariant checks, for diagnostics. The grid shape is
    /// still checked.
    pub fn from_raw(rs: Vec<f64>, lowers: Vec<f64>, uppers: Vec<f64>) -> Result<Self> {
        check_grid(&rs)?;
        if lowers.len() != rs.len() || uppers.len() != rs.len() {
            return Err(Error::Validation(
                "rs, lowers and uppers differ in length".into(),
            ));
        }
        if lowers.iter().chain(&uppers).any(|x| !x.is_finite()) {
            return Err(Error::Validation("non-finite endpoint".into()));
        }
        Ok(FuzzyNumber {
            rs,
            lowers,
            uppers,
            tri: None,
        })
    }

    pub fn from_table(rs: Vec<f64>, lowers: Vec<f64>, uppers: Vec<f64>) -> Result<Self> {
        let f = Self::from_raw(rs, lowers, uppers)?;
        let diag = f.validate();
        if let Some(v) = diag.violations.first() {
            return Err(Error::Validation(format!("{:?} at r = {}", v.kind, v.r)));
        }
        Ok(f)
    }

    /// Samples `r ↦ (A⁻(r), A⁺(r))` on `rs`.
    pub fn from_fn(rs: &[f64], f: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        let (lowers, uppers) = rs.iter().map(|&r| f(r)).unzip();
        Self::from_table(rs.to_vec(), lowers, uppers)
    }

    pub fn crisp(x: f64) -> Self {
        TriangularFuzzy { a: x, b: x, c: x }
            .to_fuzzy(&uniform_grid(DEFAULT_R_POINTS))
            .expect("default grid is valid")
    }

    pub fn crisp_on(x: f64, rs: &[f64]) -> Result<Self> {
        TriangularFuzzy { a: x, b: x, c: x }.to_fuzzy(rs)
    }

    pub fn rs(&self) -> &[f64] {
        &self.rs
    }

    pub fn lowers(&self) -> &[f64] {
        &self.lowers
    }

    pub fn uppers(&self) -> &[f64] {
        &self.uppers
    }

    pub fn triangular(&self) -> Option<TriangularFuzzy> {
        self.tri
    }

    pub fn is_crisp(&self) -> bool {
        self.lowers.iter().zip(&self.uppers).all(|(l, u)| l == u)
    }

    /// Largest endpoint magnitude.
    pub fn magnitude(&self) -> f64 {
        self.lowers
            .iter()
            .chain(&self.uppers)
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn r_cut(&self, r: f64) -> Result<Interval> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Domain {
                what: "r",
                value: r,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(self.cut_unchecked(r))
    }

    fn cut_unchecked(&self, r: f64) -> Interval {
        if let Some(t) = self.tri {
            return t.r_cut(r);
        }
        let k = self.rs.partition_point(|&x| x < r);
        if self.rs[k] == r {
            return Interval {
                lo: self.lowers[k],
                hi: self.uppers[k],
            };
        }
        let s = (r - self.rs[k - 1]) / (self.rs[k] - self.rs[k - 1]);
        Interval {
            lo: self.lowers[k - 1] + s * (self.lowers[k] - self.lowers[k - 1]),
            hi: self.uppers[k - 1] + s * (self.uppers[k] - self.uppers[k - 1]),
        }
    }

    /// The same number sampled on `rs`.
    pub fn resample(&self, rs: &[f64]) -> Result<FuzzyNumber> {
        check_grid(rs)?;
        if rs == self.rs.as_slice() {
            return Ok(self.clone());
        }
        let (lowers, uppers) = rs
            .iter()
            .map(|&r| {
                let c = self.cut_unchecked(r);
                (c.lo, c.hi)
            })
            .unzip();
        Ok(FuzzyNumber {
            rs: rs.to_vec(),
            lowers,
            uppers,
            tri: self.tri,
        })
    }

    fn aligned(&self, other: &FuzzyNumber) -> (FuzzyNumber, FuzzyNumber) {
        if self.rs == other.rs {
            return (self.clone(), other.clone());
        }
        let grid = union_grid(&self.rs, &other.rs);
        (
            self.resample(&grid).expect("union of valid grids"),
            other.resample(&grid).expect("union of valid grids"),
        )
    }

    /// `(A ⊕ B)_r = A_r + B_r`.
    pub fn add(&self, other: &FuzzyNumber) -> FuzzyNumber {
        if self.rs == other.rs {
            return self.add_aligned(other);
        }
        let (a, b) = self.aligned(other);
        a.add_aligned(&b)
    }

    fn add_aligned(&self, other: &FuzzyNumber) -> FuzzyNumber {
        FuzzyNumber {
            rs: self.rs.clone(),
            lowers: self
                .lowers
                .iter()
                .zip(&other.lowers)
                .map(|(a, b)| a + b)
                .collect(),
            uppers: self
                .uppers
                .iter()
                .zip(&other.uppers)
                .map(|(a, b)| a + b)
                .collect(),
            tri: self.tri.zip(other.tri).map(|(a, b)| a.add(&b)),
        }
    }

    /// `(λ ⊙ A)_r = λ A_r`, endpoints swapped for `λ < 0`.
    pub fn scale(&self, lambda: f64) -> FuzzyNumber {
        let lo = self.lowers.iter().map(|x| lambda * x);
        let hi = self.uppers.iter().map(|x| lambda * x);
        let (lowers, uppers) = if lambda >= 0.0 {
            (lo.collect(), hi.collect())
        } else {
            (hi.collect(), lo.collect())
        };
        FuzzyNumber {
            rs: self.rs.clone(),
            lowers,
            uppers,
            tri: self.tri.map(|t| t.scale(lambda)),
        }
    }

    /// `sup_r max(|A⁻ - B⁻|, |A⁺ - B⁺|)` over the (union) grid.
    pub fn hausdorff_distance(&self, other: &FuzzyNumber) -> f64 {
        let (a, b) = self.aligned(other);
        a.lowers
            .iter()
            .zip(&b.lowers)
            .zip(a.uppers.iter().zip(&b.uppers))
            .map(|((al, bl), (au, bu))| (al - bl).abs().max((au - bu).abs()))
            .fold(0.0, f64::max)
    }

    /// `C = A ⊖ B` with `A = B ⊕ C`.
    ///
    /// Exists when `A` is at least as wide as `B` at every level and the
    /// endpoint differences keep their monotonicity. Shortfalls within
    /// [`HUKUHARA_REL_TOL`] of the operand magnitude are treated as rounding
    /// and projected away.
    pub fn hukuhara_diff(&self, other: &FuzzyNumber) -> Result<FuzzyNumber> {
        let (a, b) = self.aligned(other);
        let tol = HUKUHARA_REL_TOL * a.magnitude().max(b.magnitude()).max(1.0);
        let mut lowers: Vec<f64> = a.lowers.iter().zip(&b.lowers).map(|(x, y)| x - y).collect();
        let mut uppers: Vec<f64> = a.uppers.iter().zip(&b.uppers).map(|(x, y)| x - y).collect();
        let diag = check_endpoints(&a.rs, &lowers, &uppers, tol);
        if let Some(v) = diag.violations.first() {
            let reason = match v.kind {
                ViolationKind::LowerAboveUpper => "subtrahend wider than minuend",
                _ => "difference endpoints not monotone",
            };
            let r = diag.first_r().unwrap_or(v.r);
            return Err(Error::HukuharaNonexistence { r, reason });
        }
        project_valid(&mut lowers, &mut uppers);
        let tri = a
            .tri
            .zip(b.tri)
            .and_then(|(x, y)| TriangularFuzzy::new(x.a - y.a, x.b - y.b, x.c - y.c).ok());
        Ok(FuzzyNumber {
            rs: a.rs,
            lowers,
            uppers,
            tri,
        })
    }

    pub fn validate(&self) -> Diagnostics {
        check_endpoints(&self.rs, &self.lowers, &self.uppers, 0.0)
    }

    pub fn validate_with_tol(&self, tol: f64) -> Diagnostics {
        check_endpoints(&self.rs, &self.lowers, &self.uppers, tol)
    }
}

/// Removes sub-tolerance violations so the endpoints satisfy the
/// parametric-form conditions exactly. A no-op on already valid data.
fn project_valid(lowers: &mut [f64], uppers: &mut [f64]) {
    for i in 1..lowers.len() {
        if lowers[i] < lowers[i - 1] {
            lowers[i] = lowers[i - 1];
        }
        if uppers[i] > uppers[i - 1] {
            uppers[i] = uppers[i - 1];
        }
    }
    for (l, u) in lowers.iter_mut().zip(uppers.iter_mut()) {
        if *l > *u {
            let m = 0.5 * (*l + *u);
            *l = m;
            *u = m;
        }
    }
    // Collapsing to midpoints can break monotonicity only at levels that are
    // already degenerate; one more sweep settles it.
    for i in 1..lowers.len() {
        if lowers[i] < lowers[i - 1] {
            lowers[i] = lowers[i - 1];
        }
        if uppers[i] > uppers[i - 1] {
            uppers[i] = uppers[i - 1];
        }
        if lowers[i] > uppers[i] {
            uppers[i] = lowers[i];
        }
    }
}

fn union_grid(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = a.iter().chain(b).copied().collect();
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}
