use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("order alpha = {alpha} outside [1, {dim}]")]
    Order { alpha: f64, dim: usize },

    #[error("curve cannot be refined: {0}")]
    Capability(String),

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("Hukuhara difference does not exist: {reason} at r = {r}")]
    HukuharaNonexistence { r: f64, reason: &'static str },

    #[error("case {case} derivative inapplicable: Hukuhara difference fails at r = {r}")]
    CaseInapplicable { case: &'static str, r: f64 },

    #[error("staircase is flat between u = {u_lo} and u = {u_hi}")]
    DegenerateDenominator { u_lo: f64, u_hi: f64 },

    #[error("staircase table is not monotone at cell {cell} (ΔJ = {delta})")]
    Integrity { cell: usize, delta: f64 },

    #[error("integration diverged after J = {last_j}")]
    Divergence { last_j: f64 },

    #[error("ill-conditioned system: {0}")]
    Conditioning(String),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Divergence { .. }
                | Error::Conditioning(_)
                | Error::Estimation(_)
                | Error::DegenerateDenominator { .. }
                | Error::HukuharaNonexistence { .. }
                | Error::CaseInapplicable { .. }
        )
    }
}
