use std::fmt;

use kll_core::counting::CountingError;
use kll_core::finquot::QuotientError;
use kll_core::fpgroups::GroupError;
use kll_core::numfield::NumFieldError;
use kll_core::orbifold::OrbifoldError;
use kll_core::quatalg::QuatError;
use kll_core::taugraphs::CheegerError;
use kll_core::towers::TowerError;
use kll_core::traceorders::TraceError;
use kll_core::trivalent::GraphError;

#[derive(Debug)]
pub enum CliError {
    /// Input does not match the command's schema; `pointer` is a JSON pointer.
    Schema { source: String, pointer: String, message: String },
    Precondition(String),
    Budget(String),
    /// Some corpus examples failed.
    Verify(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Schema { .. } | CliError::Precondition(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Schema { source, pointer, message } => serde_json::json!({
                "error": "schema",
                "source": source,
                "pointer": pointer,
                "message": message,
            }),
            CliError::Precondition(m) => serde_json::json!({ "error": "precondition", "message": m }),
            CliError::Budget(m) => serde_json::json!({ "error": "budget_exceeded", "message": m }),
            CliError::Verify(n) => serde_json::json!({ "error": "verify", "failed": n }),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema { source, pointer, message } => write!(f, "{source}: at \"{pointer}\": {message}"),
            CliError::Precondition(m) => write!(f, "precondition failed: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
            CliError::Verify(n) => write!(f, "{n} example(s) failed"),
        }
    }
}

pub fn pre(e: impl fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            _ => pre(e),
        }
    }
}

impl From<QuotientError> for CliError {
    fn from(e: QuotientError) -> Self {
        match e {
            QuotientError::BudgetExceeded(..) => CliError::Budget(e.to_string()),
            QuotientError::Group(g) => g.into(),
            _ => pre(e),
        }
    }
}

impl From<CountingError> for CliError {
    fn from(e: CountingError) -> Self {
        match e {
            CountingError::BudgetExceeded(..) => CliError::Budget(e.to_string()),
            CountingError::Quotient(q) => q.into(),
            _ => pre(e),
        }
    }
}

impl From<CheegerError> for CliError {
    fn from(e: CheegerError) -> Self {
        match e {
            CheegerError::TooLargeForExact(_) => CliError::Budget(e.to_string()),
            _ => pre(e),
        }
    }
}

impl From<OrbifoldError> for CliError {
    fn from(e: OrbifoldError) -> Self {
        match e {
            OrbifoldError::Group(g) => g.into(),
            _ => pre(e),
        }
    }
}

macro_rules! precondition_errors {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                pre(e)
            }
        })*
    };
}

precondition_errors!(NumFieldError, QuatError, TraceError, TowerError, GraphError, std::io::Error);
