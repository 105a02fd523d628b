//! JSON problem specs and CSV artifacts.
//!
//! Every float written to CSV uses 17 significant digits, which round-trips
//! an `f64` exactly.

use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::curve::{
    build_staircase, generate_koch, generate_polyline, generate_segment, FractalCurve, RefineRule,
    StaircaseTable,
};
use crate::error::{Error, Result};
use crate::ffde::{
    example1_closed_form, BvpSolution, ClosedForm, FirstOrderFfdeProblem, FuzzySolution, LinearRhs,
    SecondOrderFuzzyBvp,
};
use crate::fuzzy::{uniform_grid, FuzzyNumber, TriangularFuzzy, DEFAULT_R_POINTS};
use crate::fuzzy_calc::DiffCase;

/// Formats `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Koch {
        level: u32,
    },
    Segment {
        level: u32,
    },
    Polyline {
        params: Vec<f64>,
        points: Vec<Vec<f64>>,
        #[serde(default)]
        refine: Option<RefineRule>,
        #[serde(default)]
        level: Option<u32>,
    },
}

impl CurveSpec {
    pub fn build(&self) -> Result<FractalCurve> {
        match self {
            CurveSpec::Koch { level } => generate_koch(*level),
            CurveSpec::Segment { level } => generate_segment(*level),
            CurveSpec::Polyline {
                params,
                points,
                refine,
                level,
            } => {
                let base = generate_polyline(params.clone(), points.clone())?;
                match (refine, level) {
                    (Some(rule), lvl) => base.with_refinement(*rule)?.at_level(lvl.unwrap_or(0)),
                    (None, None | Some(0)) => Ok(base),
                    (None, Some(_)) => Err(Error::Capability(
                        "a polyline without a refine rule has only level 0".into(),
                    )),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FuzzySpec {
    Triangular {
        a: f64,
        b: f64,
        c: f64,
    },
    Table {
        rs: Vec<f64>,
        lowers: Vec<f64>,
        uppers: Vec<f64>,
    },
}

impl FuzzySpec {
    /// Triangular specs are sampled on `rs`; tables keep their own grid.
    pub fn build(&self, rs: &[f64]) -> Result<FuzzyNumber> {
        match self {
            FuzzySpec::Triangular { a, b, c } => TriangularFuzzy::new(*a, *b, *c)?.to_fuzzy(rs),
            FuzzySpec::Table { rs, lowers, uppers } => {
                FuzzyNumber::from_table(rs.clone(), lowers.clone(), uppers.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RhsSpec {
    Linear { a: f64, c: FuzzySpec },
    Builtin { name: String },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub case: Option<DiffCase>,
    pub rhs: RhsSpec,
    #[serde(default)]
    pub x0: Option<FuzzySpec>,
    #[serde(default)]
    pub span: Option<[f64; 2]>,
    #[serde(default)]
    pub r_points: Option<usize>,
    #[serde(default)]
    pub j_steps: Option<usize>,
}

/// A resolved problem ready to solve.
#[derive(Debug, Clone)]
pub enum Problem {
    FirstOrder {
        problem: FirstOrderFfdeProblem,
        /// Closed form `(J, r) -> (lower, upper)` when one is known.
        closed: Option<ClosedForm>,
    },
    SecondOrder(SecondOrderFuzzyBvp),
}

pub const BUILTINS: [&str; 2] = ["example1", "example2"];

/// Looks up a built-in problem. `case` defaults to I.
pub fn builtin(name: &str, case: Option<DiffCase>) -> Result<Problem> {
    match name {
        "example1" => {
            let case = case.unwrap_or(DiffCase::I);
            Ok(Problem::FirstOrder {
                problem: FirstOrderFfdeProblem::example1(case),
                closed: Some(example1_closed_form(case)),
            })
        }
        "example2" => Ok(Problem::SecondOrder(SecondOrderFuzzyBvp::example2())),
        _ => Err(Error::Validation(format!(
            "unknown builtin {name:?}, expected one of {}",
            BUILTINS.join(", ")
        ))),
    }
}

impl ProblemSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("problem spec: {e}")))
    }

    pub fn resolve(&self) -> Result<Problem> {
        let mut resolved = match &self.rhs {
            RhsSpec::Builtin { name } => builtin(name, self.case)?,
            RhsSpec::Linear { a, c } => self.resolve_linear(*a, c)?,
        };
        if let Problem::FirstOrder { problem, .. } = &mut resolved {
            if let Some(n) = self.r_points {
                problem.r_points = n;
            }
            if let Some(n) = self.j_steps {
                problem.j_steps = n;
            }
        }
        if let Problem::SecondOrder(bvp) = &mut resolved {
            if let Some(n) = self.j_steps {
                bvp.steps = n;
            }
        }
        Ok(resolved)
    }

    fn resolve_linear(&self, a: f64, c: &FuzzySpec) -> Result<Problem> {
        let rs = uniform_grid(self.r_points.unwrap_or(DEFAULT_R_POINTS));
        let x0 = self
            .x0
            .as_ref()
            .ok_or_else(|| Error::Validation("problem spec: a linear rhs needs x0".into()))?
            .build(&rs)?;
        let c = c.build(&rs)?;
        let (table, domain) = match &self.curve {
            None => {
                let [u0, u1] = self.span.unwrap_or([0.0, 1.0]);
                (StaircaseTable::identity(u0, u1)?, (u0, u1))
            }
            Some(spec) => {
                let curve = spec.build()?;
                let alpha = self
                    .alpha
                    .ok_or_else(|| Error::Validation("problem spec: a curve needs alpha".into()))?;
                let domain = self.span.map_or(curve.domain(), |[u0, u1]| (u0, u1));
                (build_staircase(&curve, alpha, domain.0)?, domain)
            }
        };
        if !a.is_finite() {
            return Err(Error::Validation("rhs coefficient a is not finite".into()));
        }
        let case = self.case.unwrap_or(DiffCase::I);
        let rhs = LinearRhs { a, c };
        Ok(Problem::FirstOrder {
            problem: FirstOrderFfdeProblem::new(table, Arc::new(rhs), x0, domain, case),
            closed: None,
        })
    }
}

pub fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    Ok(s)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Validation(format!("csv: {e}"))
}

fn io_err(e: std::io::Error) -> Error {
    Error::Validation(format!("write failed: {e}"))
}

/// Vertices as `u,x[,y[,z]]`.
pub fn write_curve_csv<W: Write>(w: W, curve: &FractalCurve) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let axes = ["x", "y", "z"];
    let mut header = vec!["u"];
    header.extend(&axes[..curve.dim()]);
    out.write_record(&header).map_err(csv_err)?;
    for (u, p) in curve.params().iter().zip(curve.points()) {
        let mut row = vec![fmt_f64(*u)];
        row.extend(p[..curve.dim()].iter().map(|&x| fmt_f64(x)));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush().map_err(io_err)
}

/// `u,J`, one row per table node.
pub fn write_staircase_csv<W: Write>(w: W, table: &StaircaseTable) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["u", "J"]).map_err(csv_err)?;
    for (u, j) in table.us().iter().zip(table.js()) {
        out.write_record([fmt_f64(*u), fmt_f64(*j)])
            .map_err(csv_err)?;
    }
    out.flush().map_err(io_err)
}

#[derive(Debug, Deserialize)]
struct StaircaseRow {
    u: f64,
    #[serde(rename = "J")]
    j: f64,
}

/// Reads a `u,J` table written by [`write_staircase_csv`].
pub fn read_staircase_csv<R: Read>(r: R, alpha: f64, p0: f64) -> Result<StaircaseTable> {
    let mut rdr = csv::Reader::from_reader(r);
    let (mut us, mut js) = (Vec::new(), Vec::new());
    for row in rdr.deserialize() {
        let row: StaircaseRow = row.map_err(csv_err)?;
        us.push(row.u);
        js.push(row.j);
    }
    StaircaseTable::from_table(alpha, p0, us, js)
}

/// `u,J,r,lower,upper,valid`, row-major over `u` then `r`.
pub fn write_solution_csv<W: Write>(w: W, sol: &FuzzySolution) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["u", "J", "r", "lower", "upper", "valid"])
        .map_err(csv_err)?;
    for k in 0..sol.nodes() {
        let (u, j) = (fmt_f64(sol.us[k]), fmt_f64(sol.js[k]));
        let valid = if sol.valid[k] { "1" } else { "0" };
        for (i, &r) in sol.rs.iter().enumerate() {
            out.write_record([
                u.as_str(),
                j.as_str(),
                &fmt_f64(r),
                &fmt_f64(sol.lowers[k][i]),
                &fmt_f64(sol.uppers[k][i]),
                valid,
            ])
            .map_err(csv_err)?;
        }
    }
    out.flush().map_err(io_err)
}

#[derive(Debug, Deserialize)]
struct SolutionRow {
    u: f64,
    #[serde(rename = "J")]
    j: f64,
    r: f64,
    lower: f64,
    upper: f64,
    valid: u8,
}

/// Reads a solution written by [`write_solution_csv`]. Validity flags are
/// taken from the file.
pub fn read_solution_csv<R: Read>(r: R, case: DiffCase) -> Result<FuzzySolution> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for row in rdr.deserialize() {
        rows.push(row.map_err(csv_err)?);
    }
    let rows: Vec<SolutionRow> = rows;
    let first = rows
        .first()
        .ok_or_else(|| Error::Validation("solution csv is empty".into()))?;
    let nr = rows
        .iter()
        .take_while(|row| row.u == first.u && row.j == first.j)
        .count();
    if !rows.len().is_multiple_of(nr) {
        return Err(Error::Validation(
            "solution csv is not a full u × r grid".into(),
        ));
    }
    let rs: Vec<f64> = rows[..nr].iter().map(|row| row.r).collect();
    let (mut us, mut js, mut lowers, mut uppers, mut valid) =
        (vec![], vec![], vec![], vec![], vec![]);
    for (k, chunk) in rows.chunks(nr).enumerate() {
        let (u, j, v) = (chunk[0].u, chunk[0].j, chunk[0].valid);
        if chunk
            .iter()
            .zip(&rs)
            .any(|(row, &r)| row.u != u || row.j != j || row.r != r || row.valid != v)
        {
            return Err(Error::Validation(format!(
                "solution csv: inconsistent block at node {k}"
            )));
        }
        us.push(u);
        js.push(j);
        valid.push(v == 1);
        lowers.push(chunk.iter().map(|row| row.lower).collect());
        uppers.push(chunk.iter().map(|row| row.upper).collect());
    }
    let mut sol = FuzzySolution::from_parts(case, us, js, rs, lowers, uppers)?;
    sol.valid = valid;
    Ok(sol)
}

/// `J,x_cr,q1,q2,un_lower,un_upper`: the crisp solution, interpolation
/// weights and the 0-cut of the uncertainty envelope.
pub fn write_bvp_csv<W: Write>(w: W, sol: &BvpSolution) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["J", "x_cr", "q1", "q2", "un_lower", "un_upper"])
        .map_err(csv_err)?;
    for k in 0..sol.js.len() {
        let (q1, q2) = sol.weights[k];
        let un = sol.uncertainty[k];
        out.write_record([sol.js[k], sol.crisp[k], q1, q2, un.a, un.c].map(fmt_f64))
            .map_err(csv_err)?;
    }
    out.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffde::{solve, verify_against_closed_form};

    #[test]
    fn curve_specs() {
        let c: CurveSpec = serde_json::from_str(r#"{"kind":"koch","level":2}"#).unwrap();
        assert_eq!(c.build().unwrap().segments(), 16);
        let p: CurveSpec = serde_json::from_str(
            r#"{"kind":"polyline","params":[0,1],"points":[[0,0],[1,0]],"refine":"koch","level":1}"#,
        )
        .unwrap();
        assert_eq!(p.build().unwrap().segments(), 4);
        let q: CurveSpec = serde_json::from_str(
            r#"{"kind":"polyline","params":[0,1],"points":[[0,0],[1,0]],"level":2}"#,
        )
        .unwrap();
        assert!(matches!(q.build(), Err(Error::Capability(_))));
    }

    #[test]
    fn malformed_json_reports_position() {
        let err =
            ProblemSpec::parse("{\n  \"rhs\": {\"kind\": \"builtin\", \"name\": }\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("column"), "{msg}");
    }

    #[test]
    fn unknown_builtin() {
        let spec = ProblemSpec::parse(r#"{"rhs":{"kind":"builtin","name":"example9"}}"#).unwrap();
        assert!(matches!(spec.resolve(), Err(Error::Validation(_))));
    }

    #[test]
    fn linear_spec_matches_builtin() {
        let spec = ProblemSpec::parse(
            r#"{"case":"I","rhs":{"kind":"linear","a":1,"c":{"kind":"triangular","a":-1,"b":0,"c":1}},
                "x0":{"kind":"triangular","a":0,"b":1,"c":2},"span":[0,1],"r_points":11,"j_steps":64}"#,
        )
        .unwrap();
        let Problem::FirstOrder { problem, .. } = spec.resolve().unwrap() else {
            panic!()
        };
        let a = solve(&problem).unwrap();
        let b =
            solve(&FirstOrderFfdeProblem::example1(DiffCase::I).with_resolution(11, 64)).unwrap();
        assert_eq!(a.lowers, b.lowers);
        assert_eq!(a.uppers, b.uppers);
    }

    #[test]
    fn staircase_round_trip() {
        let c = generate_koch(3).unwrap();
        let t = build_staircase(&c, 1.26, 0.0).unwrap();
        let mut buf = Vec::new();
        write_staircase_csv(&mut buf, &t).unwrap();
        assert!(buf.starts_with(b"u,J\n"));
        let back = read_staircase_csv(&buf[..], 1.26, 0.0).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn solution_round_trip() {
        let p = FirstOrderFfdeProblem::example1(DiffCase::II).with_resolution(21, 64);
        let sol = solve(&p).unwrap();
        let mut buf = Vec::new();
        write_solution_csv(&mut buf, &sol).unwrap();
        let back = read_solution_csv(&buf[..], DiffCase::II).unwrap();
        assert_eq!(back, sol);
        let f = example1_closed_form(DiffCase::II);
        assert_eq!(
            verify_against_closed_form(&back, f, 1e-6, true),
            verify_against_closed_form(&sol, f, 1e-6, true)
        );
    }
}
