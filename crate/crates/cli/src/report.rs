//! Verification reports and their canonical JSON form.

use std::fs;
use std::path::Path;

use oil_core::fields::Field;
use oil_core::idealmem::{MembershipDetail, Witness};
use oil_core::matrix::MatrixPoint;
use oil_core::poly::{Monomial, Polynomial};
use serde_json::{json, Map, Value};

use crate::error::{exit, CliError};

pub const SCHEMA: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Verified,
    Inconclusive,
    Refuted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => exit::VERIFIED,
            Status::Refuted => exit::REFUTED,
            Status::Inconclusive => exit::INCONCLUSIVE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub task: Value,
    pub status: Status,
    pub items: Vec<Value>,
    /// Required when `status` is refuted.
    pub witness: Option<Value>,
    pub summary: Map<String, Value>,
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(task: Value, seed: Option<u64>) -> Self {
        Report { task, status: Status::Verified, items: Vec::new(), witness: None, summary: Map::new(), seed }
    }

    /// Records a refutation; the first witness is kept.
    pub fn refute(&mut self, witness: Value) {
        self.status = Status::Refuted;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    pub fn inconclusive(&mut self) {
        if self.status == Status::Verified {
            self.status = Status::Inconclusive;
        }
    }

    pub fn to_json(&self) -> Value {
        // serde_json maps are ordered by key, which gives the canonical form
        json!({
            "schema": SCHEMA,
            "tool": "oil",
            "version": env!("CARGO_PKG_VERSION"),
            "task": self.task,
            "status": self.status.as_str(),
            "items": self.items,
            "witness": self.witness,
            "summary": self.summary,
            "seed": self.seed,
        })
    }

    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

pub fn emit_report(report: &Report, path: &Path) -> Result<(), CliError> {
    fs::write(path, report.to_canonical_string()).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn elem<F: Field>(field: &F, c: &F::Elem) -> Value {
    Value::String(field.fmt_elem(c))
}

pub fn monomial_text<F: Field>(field: &F, n: usize, m: &Monomial) -> String {
    Polynomial::monomial(field, n, m.clone(), field.one()).to_string()
}

pub fn matrix_json<F: Field>(m: &MatrixPoint<F>) -> Value {
    let f = m.field();
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| elem(f, m.get(i, j))).collect())).collect())
}

pub fn membership_json(d: &MembershipDetail) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("member".into(), json!(d.member));
    m.insert("degree".into(), json!(d.degree));
    m.insert("rows".into(), json!(d.rows));
    m.insert("cols".into(), json!(d.cols));
    m.insert("rank".into(), json!(d.rank));
    m.insert("rank_with_target".into(), json!(d.rank_with_target));
    m
}

/// Terms `{generator, multiplier, coefficient}`; generator indices refer to
/// the ideal's generator list.
pub fn witness_json<F: Field>(field: &F, n: usize, w: &Witness<F>) -> Value {
    Value::Array(
        w.terms
            .iter()
            .map(|t| {
                json!({
                    "generator": t.generator,
                    "multiplier": monomial_text(field, n, &t.multiplier),
                    "coefficient": elem(field, &t.coefficient),
                })
            })
            .collect(),
    )
}
