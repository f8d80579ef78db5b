use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oil::error::{exit, CliError};
use oil::gensio::{generators_json, GeneratorRecords};
use oil::report::{emit_report, Report};
use oil::tasks::{membership_run, run_task, Claim, Target, VerificationTask};
use oil::threads::pool_from_env;
use oil::with_field;
use oil_core::fields::{Field, FieldSpec};
use oil_core::genmat::{
    all_rel_generators, minors_of_size, strickland_full_set, theorem1_set, theorem2_set, v_space_generators,
    weyman_thm5_set, Generator,
};
use oil_core::idealmem::{HomogeneousIdeal, ResourceLimits};
use oil_core::orbits::{partition_mu, vanishing_report, Partition};
use oil_core::poly::Polynomial;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "oil", version, about = "Generators of ideals of nilpotent orbit closures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a generator set as JSON or text.
    Gens(GensArgs),
    /// Decide whether polynomials lie in an ideal.
    Member(MemberArgs),
    /// Evaluate generators on a nilpotent orbit.
    Orbit(OrbitArgs),
    /// Check that the images of psi span the target space.
    Lemma5(Lemma5Args),
    /// Run one claim and write its report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SetName {
    Theorem1,
    Theorem2,
    #[value(name = "weyman_thm5")]
    WeymanThm5,
    #[value(name = "strickland_full")]
    StricklandFull,
    Rel,
    Minors,
    #[value(name = "v_space")]
    VSpace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Limits {
    /// Largest degree a Macaulay matrix may be built in.
    #[arg(long, default_value_t = ResourceLimits::default().max_degree)]
    max_degree: u32,
    /// Largest Macaulay matrix, in rows or columns.
    #[arg(long, default_value_t = ResourceLimits::default().max_rows)]
    max_rows: usize,
}

impl Limits {
    fn get(&self) -> ResourceLimits {
        ResourceLimits { max_degree: self.max_degree, max_rows: self.max_rows }
    }
}

#[derive(Args, Debug)]
struct GensArgs {
    #[arg(long, value_enum, default_value = "theorem2")]
    set: SetName,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    e: Option<usize>,
    /// Minor size for `--set minors`.
    #[arg(long)]
    size: Option<usize>,
    /// Block indices for `--set v_space`.
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, default_value = "q")]
    field: FieldSpec,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MemberArgs {
    /// Generator file: JSON records or one polynomial per line.
    #[arg(long)]
    ideal: PathBuf,
    /// Polynomials to test, same format.
    #[arg(long)]
    poly: PathBuf,
    #[arg(long, default_value = "q")]
    field: FieldSpec,
    /// Matrix size; inferred from the largest index when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Print a certificate for each member.
    #[arg(long)]
    witness: bool,
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[arg(long)]
    lambda: Partition,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "q")]
    field: FieldSpec,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generator file; defaults to the theorem1 set for `--e`.
    #[arg(long)]
    gens: Option<PathBuf>,
    #[arg(long)]
    e: Option<usize>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Lemma5Args {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "q")]
    field: FieldSpec,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    claim: Claim,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    e: Option<usize>,
    #[arg(long, default_value = "q")]
    field: FieldSpec,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Restrict the vanishing claim to one orbit.
    #[arg(long)]
    lambda: Option<Partition>,
    /// Embed membership certificates in the report.
    #[arg(long)]
    witness: bool,
    /// Print wall-clock time to stderr.
    #[arg(long)]
    timing: bool,
    /// Report path; `-` writes it to stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    limits: Limits,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    let result = pool_from_env().and_then(|pool| pool.install(|| run(cli.command)));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("oil: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Gens(a) => gens(a),
        Command::Member(a) => member(a),
        Command::Orbit(a) => orbit(a),
        Command::Lemma5(a) => {
            let task = VerificationTask::new(Claim::Lemma5, a.n, a.field);
            let report = run_task(&task)?;
            let item = &report.items[0];
            println!("m={} rank={} target={}", item["m"], item["rank"], item["target"].as_str().unwrap_or("?"));
            finish(&report, a.report.as_deref())
        }
        Command::Verify(a) => verify(a),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source })
        }
        _ => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

/// Prints a one-line verdict, writes the report if asked, returns the exit code.
fn finish(report: &Report, path: Option<&Path>) -> Result<i32, CliError> {
    let task = &report.task;
    let to_stdout = path == Some(Path::new("-"));
    let line = format!(
        "{} n={} field={}: {} ({} items)",
        task.get("claim").and_then(Value::as_str).unwrap_or("task"),
        task.get("n").cloned().unwrap_or(Value::Null),
        task.get("field").and_then(Value::as_str).unwrap_or("?"),
        report.status.as_str(),
        report.items.len()
    );
    if to_stdout {
        eprintln!("{line}");
    } else {
        println!("{line}");
    }
    if let Some(w) = &report.witness {
        eprintln!("witness: {w}");
    }
    match path {
        Some(p) if !to_stdout => emit_report(report, p)?,
        Some(_) => write_out(None, &report.to_canonical_string())?,
        None => {}
    }
    Ok(report.status.exit_code())
}

fn verify(a: VerifyArgs) -> Result<i32, CliError> {
    let task = VerificationTask {
        claim: a.claim,
        n: a.n,
        e: a.e,
        field: a.field,
        seed: a.seed,
        samples: a.samples,
        lambda: a.lambda,
        limits: a.limits.get(),
        witness: a.witness,
    };
    let start = Instant::now();
    let report = run_task(&task)?;
    if a.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    finish(&report, a.report.as_deref())
}

fn gens(a: GensArgs) -> Result<i32, CliError> {
    let text = with_field!(a.field, f => {
        let gens = build_set(f, &a)?;
        match a.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&generators_json(&gens)).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Text => gens.iter().map(|g| format!("{}  # {}\n", g.poly, g.family)).collect(),
        }
    });
    write_out(a.out.as_deref(), &text)?;
    Ok(exit::VERIFIED)
}

fn build_set<F: Field>(f: &F, a: &GensArgs) -> Result<Vec<Generator<F>>, CliError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::usage(format!("this set needs --{flag}")));
    Ok(match a.set {
        SetName::Theorem1 => theorem1_set(f, a.n, need(a.e, "e")?)?.members,
        SetName::Theorem2 => theorem2_set(f, a.n)?.members,
        SetName::WeymanThm5 => weyman_thm5_set(f, a.n, need(a.e, "e")?)?.members,
        SetName::StricklandFull => strickland_full_set(f, a.n)?.members,
        SetName::Rel => all_rel_generators(f, a.n)?,
        SetName::Minors => minors_of_size(f, need(a.size, "size")?, a.n)?.into_iter().filter(|g| !g.poly.is_zero()).collect(),
        SetName::VSpace => v_space_generators(f, need(a.i, "i")?, need(a.p, "p")?, a.n)?,
    })
}

fn member(a: MemberArgs) -> Result<i32, CliError> {
    let ideal = GeneratorRecords::read(&a.ideal)?;
    let polys = GeneratorRecords::read(&a.poly)?;
    if polys.is_empty() {
        return Err(CliError::Input { path: a.poly.clone(), message: "no polynomial given".into() });
    }
    let n = match a.n {
        Some(n) => n,
        None => ideal.max_index()?.max(polys.max_index()?),
    };
    if n == 0 {
        return Err(CliError::usage("cannot infer the matrix size; pass --n"));
    }
    let limits = a.limits.get();
    let task = json!({
        "claim": "member",
        "n": n,
        "field": a.field.to_string(),
        "ideal": a.ideal.display().to_string(),
        "poly": a.poly.display().to_string(),
        "max_degree": limits.max_degree,
        "max_rows": limits.max_rows,
        "witness": a.witness,
    });
    let mut report = Report::new(task, None);
    with_field!(a.field, f => {
        let gens: Vec<Polynomial<_>> = ideal.generators(f, n)?.into_iter().map(|g| g.poly).collect();
        let targets: Vec<Target<_>> = polys
            .generators_keep_zero(f, n)?
            .into_iter()
            .map(|g| Target { id: g.family.to_string(), poly: g.poly })
            .collect();
        let label = json!(a.ideal.display().to_string());
        let run = membership_run(f, n, &label, gens.clone(), &targets, &limits, a.witness)?;
        if a.witness {
            // certificates are re-expanded before anything is printed
            let ideal = HomogeneousIdeal::new(f, n, gens)?;
            check_certificates(&ideal, &targets, &run.items)?;
        }
        for (t, item) in targets.iter().zip(&run.items) {
            let verdict = match item.get("member") {
                Some(Value::Bool(true)) => "member",
                Some(Value::Bool(false)) => "non-member",
                _ => "inconclusive",
            };
            println!("{}: {verdict}", t.poly);
            if let Some(c) = item.get("certificate") {
                println!("  certificate: {c}");
            }
        }
        run.merge_into(&mut report);
    });
    if let Some(p) = &a.report {
        if p == Path::new("-") {
            write_out(None, &report.to_canonical_string())?;
        } else {
            emit_report(&report, p)?;
        }
    }
    Ok(report.status.exit_code())
}

fn check_certificates<F: Field>(
    ideal: &HomogeneousIdeal<F>,
    targets: &[Target<F>],
    items: &[Value],
) -> Result<(), CliError> {
    let field = ideal.field();
    let n = ideal.dimension();
    for (t, item) in targets.iter().zip(items) {
        let Some(terms) = item.get("certificate").and_then(Value::as_array) else { continue };
        let mut sum = Polynomial::zero(field, n);
        for term in terms {
            let k = term["generator"].as_u64().expect("index") as usize;
            let mult = Polynomial::parse(field, n, term["multiplier"].as_str().expect("text"))?;
            let coeff = Polynomial::parse(field, n, term["coefficient"].as_str().expect("text"))?;
            sum = &sum + &(&(&coeff * &mult) * &ideal.generators()[k]);
        }
        if sum != t.poly {
            return Err(CliError::Internal(format!("certificate for {} does not expand to it", t.id)));
        }
    }
    Ok(())
}

fn orbit(a: OrbitArgs) -> Result<i32, CliError> {
    let n = a.n;
    if a.lambda.weight() != n {
        return Err(CliError::usage(format!("--lambda {} is not a partition of {n}", a.lambda)));
    }
    let records = match &a.gens {
        Some(p) => Some(GeneratorRecords::read(p)?),
        None => None,
    };
    if records.is_none() && a.e.is_none() {
        return Err(CliError::usage("pass --gens <file> or --e <e>"));
    }
    let task = json!({
        "claim": "orbit",
        "n": n,
        "e": a.e,
        "field": a.field.to_string(),
        "lambda": a.lambda.to_string(),
        "samples": a.samples,
        "gens": a.gens.as_ref().map(|p| p.display().to_string()),
    });
    let mut report = Report::new(task, Some(a.seed));
    with_field!(a.field, f => {
        let gens = match &records {
            Some(r) => r.generators(f, n)?,
            None => theorem1_set(f, n, a.e.expect("checked"))?.members,
        };
        let polys: Vec<_> = gens.iter().map(|g| g.poly.clone()).collect();
        let r = vanishing_report(f, &polys, &a.lambda, n, a.samples, a.seed)?;
        for (g, zero) in gens.iter().zip(&r.all_zero) {
            report.items.push(json!({ "generator": g.family.to_string(), "vanishes": zero }));
        }
        if let Some(w) = &r.witness {
            report.refute(json!({
                "generator": gens[w.generator].family.to_string(),
                "polynomial": gens[w.generator].poly.to_string(),
                "sample": w.sample,
                "seed": a.seed,
                "point": oil::report::matrix_json(&w.point),
                "value": oil::report::elem(f, &w.value),
            }));
        }
        if let Some(e) = a.e {
            let mu = partition_mu(n, e)?;
            report.summary.insert("mu".into(), json!(mu.to_string()));
            report.summary.insert("dominated".into(), json!(a.lambda.dominance_leq(&mu)?));
        }
    });
    let vanishing = report.witness.is_none();
    println!(
        "lambda={} n={} field={}: {} ({} generators, {} samples)",
        a.lambda,
        n,
        a.field,
        if vanishing { "all vanish" } else { "nonzero" },
        report.items.len(),
        a.samples
    );
    if let Some(w) = &report.witness {
        eprintln!("witness: {w}");
    }
    if let Some(p) = &a.report {
        if p == Path::new("-") {
            write_out(None, &report.to_canonical_string())?;
        } else {
            emit_report(&report, p)?;
        }
    }
    Ok(report.status.exit_code())
}
