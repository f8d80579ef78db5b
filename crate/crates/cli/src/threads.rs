//! Thread pool sized by `OIL_THREADS`.

use crate::error::CliError;

pub const THREADS_VAR: &str = "OIL_THREADS";

/// Parses a thread cap; `None` means rayon's default.
pub fn parse_threads(value: Option<&str>) -> Result<Option<usize>, CliError> {
    match value {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Some(k)),
            _ => Err(CliError::usage(format!("{THREADS_VAR} must be a positive integer, got {s:?}"))),
        },
    }
}

pub fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        b = b.num_threads(k);
    }
    b.build().map_err(|e| CliError::Internal(e.to_string()))
}

/// Pool configured from the environment.
pub fn pool_from_env() -> Result<rayon::ThreadPool, CliError> {
    let v = std::env::var(THREADS_VAR).ok();
    pool(parse_threads(v.as_deref())?)
}
