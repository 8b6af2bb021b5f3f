use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside its admissible domain.
    #[error("{field}: {message}")]
    Domain { field: String, message: String },

    /// The measurement branch has (numerically) zero probability and cannot be normalized.
    #[error("degenerate measurement branch: outcome probability {0:e}")]
    DegenerateBranch(f64),

    #[error("non-physical Bloch vector: |s| = {0}")]
    NonPhysicalBloch(f64),

    #[error("unphysical channel: minimum eigenvalue {0:e}")]
    UnphysicalChannel(f64),

    /// A Fisher value came out more negative than rounding can explain.
    #[error("internal consistency: Fisher information {0:e} is negative")]
    NegativeFisher(f64),

    #[error("invalid sweep spec: {0}")]
    Spec(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Domain {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn parse(what: &'static str, input: &str) -> Self {
        Error::Parse {
            what,
            input: input.to_owned(),
        }
    }

    /// Process exit status used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            _ => 1,
        }
    }
}
