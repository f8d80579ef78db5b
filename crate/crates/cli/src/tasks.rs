//! Claim dispatch: every verifiable statement maps to one task that yields
//! a [`Report`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use clap::ValueEnum;
use oil_core::exterior::{lemma1_rank_check, lemma5_spanning};
use oil_core::fields::{gcd_binomials, binom, Field, FieldSpec};
use oil_core::genmat::{
    all_rel_generators, compare_v1_with_power, minors_of_size, theorem1_set, theorem2_set, trace_invariant,
    v_space_generators, weyman_thm5_set, Family, Generator,
};
use oil_core::idealmem::{minimal_generator_count, GradedSlice, HomogeneousIdeal, IdealError, ResourceLimits};
use oil_core::orbits::{partition_mu, partitions, vanishing_report, Partition};
use oil_core::poly::Polynomial;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::report::{elem, matrix_json, membership_json, witness_json, Report};
use crate::with_field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Claim {
    Theorem1,
    Theorem2,
    Lemma1,
    Lemma2,
    Lemma3,
    Lemma4,
    Lemma5,
    Lemma6,
    Minimality,
    Vanishing,
    CharpExplore,
}

impl Claim {
    pub fn id(self) -> &'static str {
        match self {
            Claim::Theorem1 => "theorem1",
            Claim::Theorem2 => "theorem2",
            Claim::Lemma1 => "lemma1",
            Claim::Lemma2 => "lemma2",
            Claim::Lemma3 => "lemma3",
            Claim::Lemma4 => "lemma4",
            Claim::Lemma5 => "lemma5",
            Claim::Lemma6 => "lemma6",
            Claim::Minimality => "minimality",
            Claim::Vanishing => "vanishing",
            Claim::CharpExplore => "charp-explore",
        }
    }

    fn needs_e(self) -> bool {
        matches!(self, Claim::Theorem1 | Claim::Minimality | Claim::Vanishing)
    }

    fn rationals_only(self) -> bool {
        matches!(self, Claim::Theorem1 | Claim::Minimality | Claim::Lemma1)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationTask {
    pub claim: Claim,
    pub n: usize,
    pub e: Option<usize>,
    pub field: FieldSpec,
    pub seed: u64,
    /// Orbit samples per partition (vanishing only).
    pub samples: usize,
    /// Restricts the vanishing check to one Jordan type.
    pub lambda: Option<Partition>,
    pub limits: ResourceLimits,
    /// Embed membership certificates in the items.
    pub witness: bool,
}

impl VerificationTask {
    pub fn new(claim: Claim, n: usize, field: FieldSpec) -> Self {
        VerificationTask {
            claim,
            n,
            e: None,
            field,
            seed: 0,
            samples: 100,
            lambda: None,
            limits: ResourceLimits::default(),
            witness: false,
        }
    }

    pub fn with_e(mut self, e: usize) -> Self {
        self.e = Some(e);
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let c = self.claim;
        if self.n == 0 {
            return Err(CliError::usage("--n must be at least 1"));
        }
        if c.rationals_only() && !self.field.is_rationals() {
            return Err(CliError::usage(format!("claim {c} is stated over the rationals; use --field q")));
        }
        if c.needs_e() {
            let e = self.e.ok_or_else(|| CliError::usage(format!("claim {c} needs --e")))?;
            if e == 0 || e >= self.n {
                return Err(CliError::usage(format!("--e must satisfy 1 <= e < n, got e = {e}, n = {}", self.n)));
            }
        } else if self.e.is_some() && c != Claim::CharpExplore {
            return Err(CliError::usage(format!("claim {c} takes no --e")));
        }
        if let Some(l) = &self.lambda {
            if c != Claim::Vanishing {
                return Err(CliError::usage("--lambda only applies to the vanishing claim"));
            }
            if l.weight() != self.n {
                return Err(CliError::usage(format!("--lambda {l} is not a partition of {}", self.n)));
            }
        }
        if c == Claim::Lemma5 && self.n > oil_core::exterior::MAX_N {
            return Err(CliError::usage(format!("lemma5 supports n <= {}", oil_core::exterior::MAX_N)));
        }
        Ok(())
    }

    pub fn echo(&self) -> Value {
        json!({
            "claim": self.claim.id(),
            "n": self.n,
            "e": self.e,
            "field": self.field.to_string(),
            "samples": (self.claim == Claim::Vanishing).then_some(self.samples),
            "lambda": self.lambda.as_ref().map(|l| l.to_string()),
            "max_degree": self.limits.max_degree,
            "max_rows": self.limits.max_rows,
            "witness": self.witness,
        })
    }
}

/// Runs one claim inside the current rayon pool.
pub fn run_task(task: &VerificationTask) -> Result<Report, CliError> {
    task.validate()?;
    let seed = (task.claim == Claim::Vanishing).then_some(task.seed);
    let mut report = Report::new(task.echo(), seed);
    match task.claim {
        Claim::Lemma6 => lemma6(task, &mut report),
        Claim::Lemma5 => with_field!(task.field, f => lemma5(task, f, &mut report)),
        Claim::Lemma1 => with_field!(task.field, f => lemma1(task, f, &mut report)),
        Claim::Lemma2 => with_field!(task.field, f => lemma2(task, f, &mut report)),
        Claim::Lemma3 | Claim::Lemma4 | Claim::Theorem2 => with_field!(task.field, f => theorem2(task, f, &mut report)),
        Claim::Theorem1 => with_field!(task.field, f => theorem1(task, f, &mut report)),
        Claim::Minimality => with_field!(task.field, f => minimality(task, f, &mut report)),
        Claim::Vanishing => with_field!(task.field, f => vanishing(task, f, &mut report)),
        Claim::CharpExplore => with_field!(task.field, f => charp_explore(task, f, &mut report)),
    }?;
    Ok(report)
}

fn lemma6(task: &VerificationTask, report: &mut Report) -> Result<(), CliError> {
    let mut failures = 0usize;
    for k in 1..=task.n as u64 {
        let g = gcd_binomials(k);
        if g != 1u32.into() {
            failures += 1;
            let m = k / 2 + 1;
            let binomials: Vec<String> = (1..=m).map(|r| binom(k - m + r, r).to_string()).collect();
            let item = json!({ "n": k, "m": m, "gcd": g.to_string(), "binomials": binomials });
            report.items.push(item.clone());
            report.refute(item);
        }
    }
    report.summary.insert("checked".into(), json!(task.n));
    report.summary.insert("failures".into(), json!(failures));
    Ok(())
}

fn lemma5<F: Field>(task: &VerificationTask, field: &F, report: &mut Report) -> Result<(), CliError> {
    let r = lemma5_spanning(task.n, field)?;
    let item = json!({
        "n": r.n,
        "m": r.m,
        "rank": r.rank,
        "target": r.target.to_string(),
        "full": r.full,
    });
    report.items.push(item.clone());
    if !r.full {
        report.refute(item);
    }
    Ok(())
}

fn lemma1<F: Field>(task: &VerificationTask, field: &F, report: &mut Report) -> Result<(), CliError> {
    let n = task.n;
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|p| (0..=p).map(move |i| (i, p))).collect();
    let checks: Vec<_> = pairs.par_iter().map(|&(i, p)| lemma1_rank_check(field, i, p, n)).collect();
    for (&(i, p), check) in pairs.iter().zip(checks) {
        let c = check?;
        let item = json!({ "i": i, "p": p, "rank": c.rank, "expected": c.expected.to_string(), "holds": c.holds });
        report.items.push(item.clone());
        if !c.holds {
            report.refute(item);
        }
    }
    Ok(())
}

/// One membership question: does `poly` lie in the ideal?
pub struct Target<F: Field> {
    pub id: String,
    pub poly: Polynomial<F>,
}

impl<F: Field> From<Generator<F>> for Target<F> {
    fn from(g: Generator<F>) -> Self {
        Target { id: g.family.to_string(), poly: g.poly }
    }
}

/// Outcome of checking a list of targets against one ideal.
pub struct MembershipRun {
    pub items: Vec<Value>,
    pub refutation: Option<Value>,
    pub inconclusive: bool,
}

impl MembershipRun {
    pub fn merge_into(self, report: &mut Report) {
        report.items.extend(self.items);
        if let Some(w) = self.refutation {
            report.refute(w);
        }
        if self.inconclusive {
            report.inconclusive();
        }
    }
}

/// Checks every target against the ideal generated by `gens`. Each degree's
/// Macaulay matrix is built once, the degrees in parallel.
pub fn membership_run<F: Field>(
    field: &F,
    n: usize,
    ideal_label: &Value,
    gens: Vec<Polynomial<F>>,
    targets: &[Target<F>],
    limits: &ResourceLimits,
    certificates: bool,
) -> Result<MembershipRun, CliError> {
    let gens: Vec<Polynomial<F>> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    let ideal = HomogeneousIdeal::new(field, n, gens)?;
    let mut degrees = BTreeSet::new();
    for t in targets {
        if !t.poly.is_zero() {
            degrees.insert(t.poly.homogeneous_degree()?);
        }
    }
    let degrees: Vec<u32> = degrees.into_iter().collect();
    let built: Vec<Result<GradedSlice<F>, IdealError>> =
        degrees.par_iter().map(|&d| GradedSlice::build(&ideal, d, limits, certificates)).collect();
    let mut slices = BTreeMap::new();
    let mut limited = BTreeMap::new();
    for (d, s) in degrees.into_iter().zip(built) {
        match s {
            Ok(s) => {
                slices.insert(d, s);
            }
            Err(e) if e.is_resource_limit() => {
                limited.insert(d, e.to_string());
            }
            Err(e) => return Err(e.into()),
        }
    }
    let checked: Vec<Result<Value, CliError>> = targets
        .par_iter()
        .map(|t| {
            let mut item = Map::new();
            item.insert("id".into(), json!(t.id));
            if t.poly.is_zero() {
                item.insert("member".into(), json!(true));
                item.insert("degree".into(), Value::Null);
                return Ok(Value::Object(item));
            }
            let d = t.poly.homogeneous_degree()?;
            if let Some(reason) = limited.get(&d) {
                item.insert("member".into(), Value::Null);
                item.insert("degree".into(), json!(d));
                item.insert("inconclusive".into(), json!(reason));
                return Ok(Value::Object(item));
            }
            let slice = &slices[&d];
            let detail = slice.check(&t.poly)?;
            item.extend(membership_json(&detail));
            if certificates && detail.member {
                let w = slice.witness(&t.poly)?.expect("member has a certificate");
                item.insert("polynomial".into(), json!(t.poly.to_string()));
                item.insert("certificate".into(), witness_json(field, n, &w));
            }
            Ok(Value::Object(item))
        })
        .collect();
    let mut run = MembershipRun { items: Vec::with_capacity(targets.len()), refutation: None, inconclusive: false };
    for (t, item) in targets.iter().zip(checked) {
        let item = item?;
        match item.get("member") {
            Some(Value::Bool(false)) if run.refutation.is_none() => {
                let mut w = item.as_object().expect("object").clone();
                w.insert("polynomial".into(), json!(t.poly.to_string()));
                w.insert("ideal".into(), ideal_label.clone());
                run.refutation = Some(Value::Object(w));
            }
            Some(Value::Null) => run.inconclusive = true,
            _ => {}
        }
        run.items.push(item);
    }
    Ok(run)
}

fn lemma2<F: Field>(task: &VerificationTask, field: &F, report: &mut Report) -> Result<(), CliError> {
    let n = task.n;
    let blocks: Vec<(usize, usize)> = (1..n).flat_map(|p| (1..=p).map(move |i| (i, p))).collect();
    let runs: Vec<Result<MembershipRun, CliError>> = blocks
        .par_iter()
        .map(|&(i, p)| {
            let gens: Vec<_> = v_space_generators(field, i, p, n)?.into_iter().map(|g| g.poly).collect();
            let targets: Vec<Target<F>> = v_space_generators(field, i, p + 1, n)?.into_iter().map(Target::from).collect();
            let label = json!({ "generated_by": format!("V({i},{p})"), "n": n });
            let mut run = membership_run(field, n, &label, gens, &targets, &task.limits, task.witness)?;
            for item in &mut run.items {
                item.as_object_mut().expect("object").insert("block".into(), json!(format!("V({i},{})", p + 1)));
            }
            Ok(run)
        })
        .collect();
    for run in runs {
        run?.merge_into(report);
    }
    report.summary.insert("blocks".into(), json!(blocks.len()));
    Ok(())
}

fn theorem2<F: Field>(task: &VerificationTask, field: &F, report: &mut Report) -> Result<(), CliError> {
    let n = task.n;
    let mut targets: Vec<Target<F>> = Vec::new();
    if matches!(task.claim, Claim::Theorem2 | Claim::Lemma3) {
        targets.extend(all_rel_generators(field, n)?.into_iter().map(Target::from));
    }
    if matches!(task.claim, Claim::Theorem2 | Claim::Lemma4) {
        targets.extend(minors_of_size(field, n / 2 + 1, n)?.into_iter().map(Target::from));
    }
    let set = theorem2_set(field, n)?;
    let label = json!({ "set": "theorem2", "n": n });
    let run = membership_run(field, n, &label, set.polynomials(), &targets, &task.limits, task.witness)?;
    report.summary.insert("targets".into(), json!(targets.len()));
    report.summary.insert("generators".into(), json!(set.len()));
    run.merge_into(report);
    Ok(())
}

fn theorem1<F: Field>(task: &VerificationTask, field: &F, report: &mut Report) -> Result<(), CliError> {
    let (n, e) = (task.n, task.e.expect("validated"));
    let t1 = theorem1_set(field, n, e)?;
    let t5 = weyman_thm5_set(field, n, e)?;
    let directions = [("weyman_thm5 in theorem1", &t5, &t1), ("theorem1 in weyman_thm5", &t1, &t5)];
    for (label, small, big) in directions {
        let targets: Vec<Target<F>> = small.members.iter().cloned().map(Target::from).collect();
        let ideal = json!({ "set": big.label.name(), "n": n, "e": e });
        let mut run = membership_run(field, n, &ideal, big.polynomials(), &targets, &task.limits, task.witness)?;
        for item in &mut run.items {
            item.as_object_mut().expect("object").insert("direction".into(), json!(label));
        }
        run.merge_into(report);
    }
    // both readings of the V(1,e) description, recorded without a verdict
    let cmp = compare_v1_with_power(field, e, n)?;
    report.summary.insert(
        "v1_vs_power_spans".into(),
        json!({ "p": e, "v_space": cmp.v_space, "power_entries": cmp.power_entries, "union": cmp.union }),
    );
    report.summary.insert("theorem1_generators".into(), json!(t1.len()));
    report.summary.insert("weyman_thm5_generators".into(), json!(t5.len()));
    Ok(())
}

fn minimality<F: Field>(task: &VerificationTask, field: &F, report: &mut Report) -> Result<(), CliError> {
    let (n, e) = (task.n, task.e.expect("validated"));
    let set = theorem1_set(field, n, e)?;
    let ideal = HomogeneousIdeal::new(field, n, set.polynomials())?;
    let degrees: Vec<u32> = (1..=e as u32 + 1).collect();
    let counts: Vec<Result<usize, IdealError>> =
        degrees.par_iter().map(|&d| minimal_generator_count(&ideal, d, &task.limits)).collect();
    for (d, count) in degrees.into_iter().zip(counts) {
        let expected = match d as usize {
            d if d < e => 1,
            d if d == e => n * n,
            _ => 0,
        };
        match count {
            Ok(found) => {
                let item = json!({ "degree": d, "minimal_generators": found, "expected": expected });
                report.items.push(item.clone());
                if found != expected {
                    report.refute(item);
                }
            }
            Err(err) if err.is_resource_limit() => {
                report.items.push(json!({ "degree": d, "minimal_generators": null, "inconclusive": err.to_string() }));
                report.inconclusive();
            }
            Err(err) => return Err(err.into()),
        }
    }
    Ok(())
}

fn vanishing<F: Field>(task: &VerificationTask, field: &F, report: &mut Report) -> Result<(), CliError> {
    let (n, e) = (task.n, task.e.expect("validated"));
    let mut gens: Vec<(String, Polynomial<F>)> = Vec::new();
    for g in theorem1_set(field, n, e)?.members {
        gens.push((format!("theorem1:{}", g.family), g.poly));
    }
    if e == 2 {
        for g in theorem2_set(field, n)?.members {
            gens.push((format!("theorem2:{}", g.family), g.poly));
        }
    }
    let polys: Vec<Polynomial<F>> = gens.iter().map(|(_, p)| p.clone()).collect();
    let mu = partition_mu(n, e)?;
    let lambdas = match &task.lambda {
        Some(l) => vec![l.clone()],
        None => partitions(n),
    };
    let reports: Vec<_> =
        lambdas.par_iter().map(|l| vanishing_report(field, &polys, l, n, task.samples, task.seed)).collect();
    for (l, r) in lambdas.iter().zip(reports) {
        let r = r?;
        let dominated = l.dominance_leq(&mu)?;
        let mut item = Map::new();
        item.insert("lambda".into(), json!(l.to_string()));
        item.insert("dominated".into(), json!(dominated));
        item.insert("vanishes".into(), json!(r.vanishes()));
        item.insert("nonzero_generators".into(), json!(r.all_zero.iter().filter(|z| !**z).count()));
        let witness = r.witness.as_ref().map(|w| {
            json!({
                "lambda": l.to_string(),
                "generator": gens[w.generator].0,
                "polynomial": gens[w.generator].1.to_string(),
                "sample": w.sample,
                "seed": task.seed,
                "point": matrix_json(&w.point),
                "value": elem(field, &w.value),
            })
        });
        if let Some(w) = &witness {
            item.insert("witness".into(), w.clone());
        }
        report.items.push(Value::Object(item));
        match (&task.lambda, dominated, witness) {
            // a single requested orbit: the claim is "everything vanishes there"
            (Some(_), _, Some(w)) => report.refute(w),
            (None, true, Some(w)) => report.refute(w),
            // no finite witness that a non-dominated orbit satisfies the equations
            (None, false, None) => report.inconclusive(),
            _ => {}
        }
    }
    report.summary.insert("mu".into(), json!(mu.to_string()));
    report.summary.insert("generators".into(), json!(gens.len()));
    Ok(())
}

fn charp_explore<F: Field>(task: &VerificationTask, field: &F, report: &mut Report) -> Result<(), CliError> {
    let n = task.n;
    let mut gens = vec![trace_invariant(field, 1, n)?];
    gens.extend(theorem2_set(field, n)?.members.into_iter().filter(|g| matches!(g.family, Family::Power { .. })).map(|g| g.poly));
    let targets: Vec<Target<F>> = (2..=n)
        .map(|i| Ok(Target { id: format!("T{i}"), poly: trace_invariant(field, i, n)? }))
        .collect::<Result<_, CliError>>()?;
    let label = json!({ "generated_by": "T1 and the entries of Phi^2", "n": n });
    let run = membership_run(field, n, &label, gens, &targets, &task.limits, task.witness)?;
    // exploratory: membership is recorded, never asserted
    let mut members = Vec::new();
    let mut non_members = Vec::new();
    for item in &run.items {
        match item.get("member") {
            Some(Value::Bool(true)) => members.push(item["id"].clone()),
            Some(Value::Bool(false)) => non_members.push(item["id"].clone()),
            _ => {}
        }
    }
    report.items.extend(run.items);
    if run.inconclusive {
        report.inconclusive();
    }
    report.summary.insert("members".into(), Value::Array(members));
    report.summary.insert("non_members".into(), Value::Array(non_members));
    Ok(())
}
