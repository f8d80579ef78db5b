use std::path::PathBuf;

use oil_core::exterior::ExteriorError;
use oil_core::fields::FieldError;
use oil_core::genmat::GenError;
use oil_core::idealmem::IdealError;
use oil_core::orbits::OrbitError;
use oil_core::poly::PolyError;

/// Process exit codes.
pub mod exit {
    pub const VERIFIED: i32 = 0;
    pub const REFUTED: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const SOFTWARE: i32 = 70;
    pub const IO: i32 = 74;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Internal(_) => exit::SOFTWARE,
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        })*
    };
}

usage_from!(FieldError, GenError, OrbitError, PolyError, ExteriorError);

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::Poly(p) => p.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}
