use crate::ratfun::Scalar;

/// Outcome of a single exact verification check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Both sides agreed exactly.
    Pass,
    /// The sides differ; carries the first point of disagreement.
    Fail(Witness),
    /// The check does not apply to this instance (reason included).
    Skipped(String),
}

/// Witness for a failed check: where the two sides first differ, and by how much.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Human-readable location, e.g. `basis state 17` or `(i,j,k,l)=(1,2,2,1) entry (3,5)`.
    pub location: String,
    /// Exact residual (lhs − rhs) at that location.
    pub value: Scalar,
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    /// Short token for reports: `ok`, `fail` or `skipped`.
    pub fn token(&self) -> &'static str {
        match self {
            Verdict::Pass => "ok",
            Verdict::Fail(_) => "fail",
            Verdict::Skipped(_) => "skipped",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "ok"),
            Verdict::Fail(w) => write!(f, "fail at {}: residual {}", w.location, w.value),
            Verdict::Skipped(why) => write!(f, "skipped ({why})"),
        }
    }
}
