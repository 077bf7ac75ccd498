use thiserror::Error;

use crate::multiweight::Violation;
use crate::weightgen::ConstructionError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("enumeration needs {required} subspaces, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("flag is not a strictly decreasing chain from the ambient space to zero")]
    NotNested,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid multiweight: {}", fmt_violations(.0))]
    InvalidMultiWeight(Vec<Violation>),
    #[error("construction infeasible: {0}")]
    Construction(Box<ConstructionError>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("search exhausted after {attempts} attempts: {reason}")]
    SearchExhausted { attempts: u64, reason: String },
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<ConstructionError> for Error {
    fn from(e: ConstructionError) -> Self {
        Error::Construction(Box::new(e))
    }
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }

    pub fn construction(&self) -> Option<&ConstructionError> {
        match self {
            Error::Construction(e) => Some(e),
            _ => None,
        }
    }
}
