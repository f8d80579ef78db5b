//! Generator files: a JSON array of `{family, params, polynomial}` records,
//! or plain text with one polynomial per line (`#` starts a comment).

use std::fs;
use std::path::Path;

use oil_core::fields::Field;
use oil_core::genmat::{Family, Generator};
use oil_core::poly::{max_index, Polynomial};
use serde_json::{json, Value};

use crate::error::CliError;

pub fn family_params(family: &Family) -> Value {
    match family {
        Family::Trace { i } => json!({ "i": i }),
        Family::Power { e, row, col } => json!({ "e": e, "row": row, "col": col }),
        Family::Rel { r, p, rows, cols } => json!({ "r": r, "p": p, "rows": rows, "cols": cols }),
        Family::VSpace { i, p, rows, cols } => json!({ "i": i, "p": p, "rows": rows, "cols": cols }),
        Family::Minor { rows, cols } => json!({ "rows": rows, "cols": cols }),
        Family::External { label } => json!({ "label": label }),
    }
}

pub fn generator_json<F: Field>(g: &Generator<F>) -> Value {
    json!({
        "family": g.family.name(),
        "params": family_params(&g.family),
        "polynomial": g.poly.to_string(),
    })
}

pub fn generators_json<F: Field>(gens: &[Generator<F>]) -> Value {
    Value::Array(gens.iter().map(generator_json).collect())
}

fn family_from_json(name: &str, params: &Value) -> Option<Family> {
    let int = |k: &str| params.get(k).and_then(Value::as_u64).map(|v| v as usize);
    let seq = |k: &str| {
        params.get(k).and_then(Value::as_array).and_then(|a| a.iter().map(|v| v.as_u64().map(|x| x as usize)).collect())
    };
    Some(match name {
        "trace" => Family::Trace { i: int("i")? },
        "power" => Family::Power { e: int("e")?, row: int("row")?, col: int("col")? },
        "rel" => Family::Rel { r: int("r")?, p: int("p")?, rows: seq("rows")?, cols: seq("cols")? },
        "v_space" => Family::VSpace { i: int("i")?, p: int("p")?, rows: seq("rows")?, cols: seq("cols")? },
        "minor" => Family::Minor { rows: seq("rows")?, cols: seq("cols")? },
        _ => return None,
    })
}

/// Raw records before the dimension is known.
#[derive(Clone, Debug)]
pub struct GeneratorRecords {
    records: Vec<(Family, String)>,
}

impl GeneratorRecords {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|message| CliError::Input { path: path.to_path_buf(), message })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let trimmed = text.trim_start();
        let mut records = Vec::new();
        if trimmed.starts_with('[') {
            let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
            for (k, item) in v.as_array().expect("starts with [").iter().enumerate() {
                let poly = item
                    .get("polynomial")
                    .and_then(Value::as_str)
                    .ok_or_else(|| format!("record {k}: missing `polynomial`"))?;
                let name = item.get("family").and_then(Value::as_str).unwrap_or("external");
                let params = item.get("params").cloned().unwrap_or(Value::Null);
                let family = family_from_json(name, &params).unwrap_or_else(|| Family::External { label: format!("g{k}") });
                records.push((family, poly.to_string()));
            }
        } else {
            for line in text.lines() {
                let line = line.split('#').next().unwrap_or("").trim();
                if !line.is_empty() {
                    let label = format!("g{}", records.len());
                    records.push((Family::External { label }, line.to_string()));
                }
            }
        }
        Ok(GeneratorRecords { records })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Largest matrix index any record mentions.
    pub fn max_index(&self) -> Result<usize, CliError> {
        let mut n = 0;
        for (_, text) in &self.records {
            n = n.max(max_index(text)?);
        }
        Ok(n)
    }

    /// Parses every record over `field` in dimension `n`; zero polynomials
    /// are dropped.
    pub fn generators<F: Field>(&self, field: &F, n: usize) -> Result<Vec<Generator<F>>, CliError> {
        let mut out = self.generators_keep_zero(field, n)?;
        out.retain(|g| !g.poly.is_zero());
        Ok(out)
    }

    pub fn generators_keep_zero<F: Field>(&self, field: &F, n: usize) -> Result<Vec<Generator<F>>, CliError> {
        self.records
            .iter()
            .map(|(family, text)| Ok(Generator { family: family.clone(), poly: Polynomial::parse(field, n, text)? }))
            .collect()
    }
}
