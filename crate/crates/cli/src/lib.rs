//! Command-line front end: reads operator files, runs one task and renders a
//! JSON or plain-text report.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use affconj::conjugacy::{canonical_affine, decide_affine, fixed_point};
use affconj::io::{read_operators, AnyOperator};
use affconj::spectral::{fitting_split, modulus_partition};
use affconj::witness::{nofix_pipeline, verify_conjugacy, Witness};
use affconj::{AffineOperator, Error, Field, FieldKind};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

pub const DEFAULT_SEED: u64 = 20_260_115;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    R,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(
    name = "affconj",
    version,
    about = "Classify affine maps x ↦ Ax + b up to topological conjugacy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Ground field; inferred from the entries when omitted.
    #[arg(long, global = true, value_enum)]
    pub field: Option<FieldArg>,
    /// Largest accepted residual for numerical witnesses.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Number of sample points for witness verification.
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
    /// Seed for the sample points.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Run the command on every operator file (or every pair, for `decide`)
    /// in a directory.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a fixed point, or none.
    FixedPoint { input: Option<PathBuf> },
    /// Fitting decomposition of the linear part and its modulus partition.
    Split { input: Option<PathBuf> },
    /// Canonical form of the conjugacy class.
    Canonical { input: Option<PathBuf> },
    /// Decide whether two operators are topologically conjugate.
    Decide {
        f: Option<PathBuf>,
        g: Option<PathBuf>,
    },
    /// Build and check a witness conjugating an operator without fixed point
    /// to its canonical form.
    Witness {
        input: Option<PathBuf>,
        /// Where to write the witness file.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a witness file `h` against operators `f` and `g`.
    Verify {
        f: PathBuf,
        g: PathBuf,
        witness: PathBuf,
    },
}

/// Exit code and report of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { code: 0, report }
    }
}

struct Settings {
    field: Option<FieldKind>,
    tol: f64,
    samples: usize,
    seed: u64,
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn outcome(self) -> Outcome {
        let (code, name, message) = match self {
            Failure::Input(m) => (3, "INPUT".to_string(), m),
            Failure::Lib(e) => {
                let code = if matches!(e, Error::Parse(_)) { 3 } else { 2 };
                (code, e.code().to_string(), e.to_string())
            }
        };
        Outcome {
            code,
            report: json!({ "error": { "code": name, "message": message } }),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(paths: &[&Path], field: Option<FieldKind>) -> Run<Vec<AnyOperator>> {
    let texts = paths.iter().map(|p| read(p)).collect::<Run<Vec<_>>>()?;
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    Ok(read_operators(&refs, field)?)
}

fn need<'a>(p: &'a Option<PathBuf>, what: &str) -> Run<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Failure::Input(format!("missing {what} (or use --corpus)")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn field_name(k: FieldKind) -> Value {
    to_value(&k)
}

macro_rules! dispatch {
    ($op:expr, |$f:ident| $body:expr) => {
        match $op {
            AnyOperator::Real($f) => $body,
            AnyOperator::Complex($f) => $body,
        }
    };
}

fn fixed_point_report(op: &AnyOperator) -> Run<Outcome> {
    let point = dispatch!(op, |f| fixed_point(f)?
        .map(|p| to_value(&p.iter().map(ToString::to_string).collect::<Vec<_>>())));
    Ok(Outcome::ok(json!({
        "command": "fixed-point",
        "field": field_name(op.field()),
        "fixed_point": point.unwrap_or(Value::Null),
    })))
}

fn split_report(op: &AnyOperator) -> Run<Outcome> {
    let (split, partition) = dispatch!(op, |f| (
        to_value(&fitting_split(&f.a)?),
        to_value(&modulus_partition(&f.a.charpoly()?)?)
    ));
    Ok(Outcome::ok(json!({
        "command": "split",
        "field": field_name(op.field()),
        "fitting_split": split,
        "modulus_partition": partition,
    })))
}

fn canonical_report(op: &AnyOperator) -> Run<Outcome> {
    let form = dispatch!(op, |f| canonical_affine(f)?);
    Ok(Outcome::ok(json!({
        "command": "canonical",
        "field": field_name(op.field()),
        "canonical": to_value(&form),
        "display": form.to_string(),
    })))
}

fn decide_report(f: &AnyOperator, g: &AnyOperator) -> Run<Outcome> {
    let verdict = match (f, g) {
        (AnyOperator::Real(f), AnyOperator::Real(g)) => decide_affine(f, g)?,
        (AnyOperator::Complex(f), AnyOperator::Complex(g)) => decide_affine(f, g)?,
        _ => {
            return Err(Error::FieldMismatch("operators read over different fields".into()).into())
        }
    };
    Ok(Outcome {
        code: if verdict.conjugate { 0 } else { 1 },
        report: json!({ "command": "decide", "verdict": to_value(&verdict) }),
    })
}

fn witness_typed<F: Field>(
    f: &AffineOperator<F>,
    s: &Settings,
    out: Option<&Path>,
) -> Run<Outcome> {
    let result = nofix_pipeline(f)?;
    let residual = verify_conjugacy(f, &result.canonical, &result.witness, s.samples, s.seed)?;
    let passed = residual.max() <= s.tol;
    let file = json!({
        "kind": to_value(&result.witness.kind()),
        "tolerance": s.tol,
        "seed": s.seed,
        "samples": s.samples,
        "canonical": to_value(&result.form),
        "canonical_operator": to_value(&result.canonical),
        "witness": to_value(&result.witness),
    });
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&file).expect("serializable");
        fs::write(path, text + "\n")
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    let mut report = json!({
        "command": "witness",
        "field": field_name(F::KIND),
        "display": result.form.to_string(),
        "residual": to_value(&residual),
        "passed": passed,
    });
    if let Value::Object(m) = &mut report {
        match out {
            Some(path) => {
                m.insert(
                    "witness_file".into(),
                    Value::String(path.display().to_string()),
                );
                m.insert("kind".into(), file["kind"].clone());
            }
            None => {
                m.insert("witness_file".into(), file);
            }
        }
    }
    Ok(Outcome {
        code: if passed { 0 } else { 1 },
        report,
    })
}

fn witness_report(op: &AnyOperator, s: &Settings, out: Option<&Path>) -> Run<Outcome> {
    dispatch!(op, |f| witness_typed(f, s, out))
}

fn verify_typed<F: Field>(
    f: &AffineOperator<F>,
    g: &AffineOperator<F>,
    w: &Value,
    s: &Settings,
) -> Run<Outcome> {
    let h: Witness<F> = serde_json::from_value(w.clone())
        .map_err(|e| Error::Parse(format!("witness file: {e}")))?;
    let residual = verify_conjugacy(f, g, &h, s.samples, s.seed)?;
    let passed = residual.max() <= s.tol;
    Ok(Outcome {
        code: if passed { 0 } else { 1 },
        report: json!({
            "command": "verify",
            "field": field_name(F::KIND),
            "kind": to_value(&h.kind()),
            "tolerance": s.tol,
            "residual": to_value(&residual),
            "passed": passed,
        }),
    })
}

fn verify_report(fp: &Path, gp: &Path, wp: &Path, s: &Settings) -> Run<Outcome> {
    let file: Value =
        serde_json::from_str(&read(wp)?).map_err(|e| Error::Parse(format!("witness file: {e}")))?;
    let w = file.get("witness").unwrap_or(&file);
    let field: FieldKind = w
        .get("field")
        .cloned()
        .map(serde_json::from_value)
        .transpose()
        .map_err(|e| Error::Parse(format!("witness field: {e}")))?
        .ok_or_else(|| Error::Parse("witness file has no field".into()))?;
    if s.field.is_some_and(|k| k != field) {
        return Err(Error::FieldMismatch("--field disagrees with the witness file".into()).into());
    }
    let ops = load(&[fp, gp], Some(field))?;
    match (&ops[0], &ops[1]) {
        (AnyOperator::Real(f), AnyOperator::Real(g)) => verify_typed(f, g, w, s),
        (AnyOperator::Complex(f), AnyOperator::Complex(g)) => verify_typed(f, g, w, s),
        _ => unreachable!("read over a common field"),
    }
}

fn single(cmd: &Command, s: &Settings) -> Run<Outcome> {
    match cmd {
        Command::FixedPoint { input } => {
            fixed_point_report(&load(&[need(input, "input file")?], s.field)?[0])
        }
        Command::Split { input } => split_report(&load(&[need(input, "input file")?], s.field)?[0]),
        Command::Canonical { input } => {
            canonical_report(&load(&[need(input, "input file")?], s.field)?[0])
        }
        Command::Decide { f, g } => {
            let ops = load(
                &[need(f, "first operator")?, need(g, "second operator")?],
                s.field,
            )?;
            decide_report(&ops[0], &ops[1])
        }
        Command::Witness { input, out } => witness_report(
            &load(&[need(input, "input file")?], s.field)?[0],
            s,
            out.as_deref(),
        ),
        Command::Verify { f, g, witness } => verify_report(f, g, witness, s),
    }
}

fn settle(r: Run<Outcome>) -> Outcome {
    r.unwrap_or_else(Failure::outcome)
}

fn corpus_files(dir: &Path) -> Run<Vec<PathBuf>> {
    let entries =
        fs::read_dir(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(
        || p.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

fn corpus(cmd: &Command, dir: &Path, s: &Settings) -> Run<Outcome> {
    let files = corpus_files(dir)?;
    let items: Vec<(Vec<String>, Outcome)> = match cmd {
        Command::Decide { .. } => {
            let dims: Vec<Option<usize>> = files
                .par_iter()
                .map(|p| load(&[p], s.field).ok().map(|o| o[0].dim()))
                .collect();
            let pairs: Vec<(usize, usize)> = (0..files.len())
                .flat_map(|i| (i + 1..files.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| dims[i].is_some() && dims[i] == dims[j])
                .collect();
            pairs
                .par_iter()
                .map(|&(i, j)| {
                    let run = load(&[&files[i], &files[j]], s.field)
                        .and_then(|o| decide_report(&o[0], &o[1]));
                    (
                        vec![file_name(&files[i]), file_name(&files[j])],
                        settle(run),
                    )
                })
                .collect()
        }
        Command::Verify { .. } => {
            return Err(Failure::Input(
                "verify takes explicit files, not --corpus".into(),
            ));
        }
        Command::Witness { out: Some(_), .. } => {
            return Err(Failure::Input(
                "--out cannot be combined with --corpus".into(),
            ));
        }
        _ => files
            .par_iter()
            .map(|p| {
                let run = load(&[p], s.field).and_then(|o| match cmd {
                    Command::FixedPoint { .. } => fixed_point_report(&o[0]),
                    Command::Split { .. } => split_report(&o[0]),
                    Command::Canonical { .. } => canonical_report(&o[0]),
                    Command::Witness { .. } => witness_report(&o[0], s, None),
                    Command::Decide { .. } | Command::Verify { .. } => {
                        unreachable!("handled above")
                    }
                });
                (vec![file_name(p)], settle(run))
            })
            .collect(),
    };
    let code = items
        .iter()
        .map(|(_, o)| o.code)
        .filter(|&c| c >= 2)
        .max()
        .unwrap_or(0);
    let results: Vec<Value> = items
        .into_iter()
        .map(|(names, o)| json!({ "files": names, "exit_code": o.code, "report": o.report }))
        .collect();
    Ok(Outcome {
        code,
        report: json!({ "corpus": dir.display().to_string(), "results": results }),
    })
}

/// Parses `argv` and runs the command. Usage errors exit with 3, `--help`
/// and `--version` with 0.
pub fn run<I, T>(argv: I) -> (Outcome, Format)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let report = Value::String(e.render().to_string());
            return (Outcome { code, report }, Format::Pretty);
        }
    };
    (execute(&cli), cli.format)
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    if cli.tol.is_nan() || cli.tol <= 0.0 || cli.samples == 0 {
        return Failure::Input("--tol must be positive and --samples at least 1".into()).outcome();
    }
    let s = Settings {
        field: cli.field.map(|f| match f {
            FieldArg::R => FieldKind::Real,
            FieldArg::C => FieldKind::Complex,
        }),
        tol: cli.tol,
        samples: cli.samples,
        seed: cli.seed,
    };
    settle(match &cli.corpus {
        Some(dir) => corpus(&cli.command, dir, &s),
        None => single(&cli.command, &s),
    })
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = a.iter().filter_map(scalar_text).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn pretty_into(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => pretty_object(m, indent, out),
        Value::Array(a) => {
            for item in a {
                match scalar_text(item) {
                    Some(t) => out.push_str(&format!("{pad}- {t}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        pretty_into(item, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!(
            "{pad}{}\n",
            scalar_text(other).unwrap_or_default()
        )),
    }
}

fn pretty_object(m: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (k, v) in m {
        match scalar_text(v) {
            Some(t) => out.push_str(&format!("{pad}{k}: {t}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                pretty_into(v, indent + 2, out);
            }
        }
    }
}

/// Renders a report in the requested format.
pub fn render(report: &Value, format: Format) -> String {
    match (format, report) {
        (_, Value::String(s)) => s.clone(),
        (Format::Json, v) => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        (Format::Pretty, v) => {
            let mut out = String::new();
            pretty_into(v, 0, &mut out);
            out
        }
    }
}
