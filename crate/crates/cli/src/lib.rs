//! Library side of the `oil` command: claim dispatch, reports and
//! generator-file I/O.

pub mod error;
pub mod gensio;
pub mod report;
pub mod tasks;
pub mod threads;

pub use error::CliError;
pub use report::{Report, Status};
pub use tasks::{run_task, Claim, VerificationTask};

/// Binds `$f` to a concrete field for `$spec` and evaluates `$body` once
/// per field type.
#[macro_export]
macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {{
        let spec: ::oil_core::fields::FieldSpec = $spec;
        if spec.is_rationals() {
            let $f = &::oil_core::fields::Rationals;
            $body
        } else {
            let field = ::oil_core::fields::PrimeField::new(spec.characteristic()).expect("FieldSpec holds a prime");
            let $f = &field;
            $body
        }
    }};
}
