//! `epimorph`: decide observability and epimorphicity of subalgebras.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use epimorph::corpus::run_corpus;
use epimorph::criteria::{orthogonal_centralizer, Question};
use epimorph::grading::{grade, sukhanov_certificate_check};
use epimorph::problem::{parse_problem, ProblemSpec};
use epimorph::report::{decide, render as render_json, report_json, versions, Verbosity};
use epimorph::transcript::{elem_json, elems_json, q_json, qs_json};
use epimorph::verify::{parse_vector, verify_report};
use epimorph::{Error, Subalgebra};
use serde_json::{json, Value};

use render::Style;

/// Exit codes for failures; answers use 0 (Yes), 1 (No) and 2 (Unknown).
const EXIT_USAGE: u8 = 10;
const EXIT_IO: u8 = 11;
const EXIT_INPUT: u8 = 12;
const EXIT_PRECONDITION: u8 = 13;
const EXIT_INTERNAL: u8 = 14;

#[derive(Parser, Debug)]
#[command(name = "epimorph", version, about = "Exact observability and epimorphicity checks for Lie subalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug, Clone, Default)]
struct Flags {
    /// Seed for every randomized step (overrides the problem file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Kempf–Ness stopping tolerance (overrides the problem file).
    #[arg(long, global = true)]
    kn_tol: Option<f64>,
    /// Kempf–Ness iteration limit (overrides the problem file).
    #[arg(long, global = true)]
    kn_max_iter: Option<usize>,
    /// Take "no proper reductive overgroup" as given.
    #[arg(long, global = true)]
    assert_no_reductive_overgroup: bool,
    /// Include every transcript step.
    #[arg(long, global = true, conflicts_with = "quiet")]
    trace: bool,
    /// Verdict and certificate only.
    #[arg(long, global = true)]
    quiet: bool,
    /// Print the machine-readable report only.
    #[arg(long, global = true)]
    json: bool,
}

impl Flags {
    fn verbosity(&self) -> Verbosity {
        if self.quiet {
            Verbosity::Quiet
        } else if self.trace {
            Verbosity::Trace
        } else {
            Verbosity::Default
        }
    }

    fn apply(&self, spec: &mut ProblemSpec) {
        if let Some(s) = self.seed {
            spec.options.seed = s;
        }
        if let Some(t) = self.kn_tol {
            spec.options.kn_tol = t;
        }
        if let Some(m) = self.kn_max_iter {
            spec.options.kn_max_iter = m;
        }
        if self.assert_no_reductive_overgroup {
            spec.options.assert_no_reductive_overgroup = true;
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Is the subalgebra observable?
    CheckObservable { file: PathBuf },
    /// Is the subalgebra epimorphic?
    CheckEpimorphic { file: PathBuf },
    /// Grading by a rational semisimple element, and the containment check for the subalgebra.
    Grading {
        file: PathBuf,
        /// Coordinates of s, as "a,b,..." or a JSON array.
        #[arg(long = "s", allow_hyphen_values = true)]
        s: String,
    },
    /// Orthogonal centralizer of a reductive subalgebra.
    Orthocent { file: PathBuf },
    /// Run the built-in regression corpus.
    Corpus,
    /// Re-check the certificates of a saved JSON report.
    Verify { report: PathBuf },
}

enum Failure {
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Io(_) => EXIT_IO,
        Failure::Lib(e) => match e {
            Error::Schema { .. }
            | Error::RationalParse { .. }
            | Error::DimensionMismatch { .. }
            | Error::LinearDependence
            | Error::NotClosed { .. }
            | Error::IndexOutOfRange(_)
            | Error::AntisymmetryViolation { .. }
            | Error::JacobiViolation { .. }
            | Error::DegenerateKillingForm { .. }
            | Error::UnsupportedParameter { .. }
            | Error::InvalidSplit(_) => EXIT_INPUT,
            Error::NotAlgebraicSubalgebra(_)
            | Error::NotSemisimple
            | Error::IrrationalEigenvalue { .. }
            | Error::NonCommutingTorus { .. }
            | Error::NonReductiveActingAlgebra
            | Error::NotReductiveInput => EXIT_PRECONDITION,
            Error::Certificate(_) | Error::Internal(_) => EXIT_INTERNAL,
        },
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf, flags: &Flags) -> Result<ProblemSpec, Failure> {
    let mut spec = parse_problem(&read(path)?)?;
    flags.apply(&mut spec);
    Ok(spec)
}

fn emit(value: &Value, human: impl FnOnce() -> String, flags: &Flags) {
    if flags.json {
        println!("{}", render_json(value));
    } else {
        print!("{}", human());
    }
}

fn check(path: &PathBuf, question: Question, flags: &Flags, style: Style) -> Result<u8, Failure> {
    let spec = load(path, flags)?;
    let verdict = decide(&spec, question)?;
    let report = report_json(&spec, &verdict, flags.verbosity());
    emit(&report, || render::verdict(&verdict, &report, style, flags.verbosity()), flags);
    Ok(verdict.answer.exit_code() as u8)
}

fn grading(path: &PathBuf, s: &str, flags: &Flags, style: Style) -> Result<u8, Failure> {
    let spec = load(path, flags)?;
    let p = spec.instantiate()?;
    let s = p.g.element(parse_vector(s)?)?;
    let gr = grade(&p.g, &s)?;
    let rep = sukhanov_certificate_check(&p.g, &p.h, &s)?;
    let pieces: Vec<Value> = gr
        .pieces
        .iter()
        .map(|(k, b)| json!({ "eigenvalue": q_json(k), "basis": elems_json(b) }))
        .collect();
    let value = json!({
        "versions": versions(),
        "problem": spec.to_json(),
        "grading": {
            "s": elem_json(&s),
            "eigenvalues": qs_json(&gr.eigenvalues()),
            "pieces": pieces,
            "p_basis": elems_json(&gr.p_basis),
            "q_basis": elems_json(&gr.q_basis),
            "n_basis": elems_json(&gr.n_basis),
        },
        "containment": {
            "holds": rep.holds(),
            "subalgebra_in_q": rep.h_in_q,
            "unipotent_radical_in_n": rep.radical_in_n,
            "failure": rep.failure(),
        },
    });
    emit(&value, || render::grading(&p.g, &gr, &rep, style), flags);
    Ok(if rep.holds() { 0 } else { 1 })
}

fn orthocent(path: &PathBuf, flags: &Flags, style: Style) -> Result<u8, Failure> {
    let spec = load(path, flags)?;
    let p = spec.instantiate()?;
    let z: Subalgebra = orthogonal_centralizer(&p.g, &p.h)?;
    let value = json!({
        "versions": versions(),
        "problem": spec.to_json(),
        "orthogonal_centralizer": elems_json(z.basis()),
    });
    emit(&value, || render::basis(&p.g, "orthogonal centralizer", z.basis(), style), flags);
    Ok(0)
}

fn corpus(flags: &Flags, style: Style) -> Result<u8, Failure> {
    let results = run_corpus(flags.seed.unwrap_or(0), flags.verbosity())?;
    let all_passed = results.iter().all(|c| c.passed());
    let value = json!({
        "versions": versions(),
        "cases": results.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed(),
            "reports": c.outcomes.iter().map(|o| o.report.clone()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "passed": all_passed,
    });
    emit(&value, || render::corpus(&results, style), flags);
    Ok(if all_passed { 0 } else { 1 })
}

fn verify(path: &PathBuf, flags: &Flags, style: Style) -> Result<u8, Failure> {
    let doc: Value = serde_json::from_str(&read(path)?).map_err(|e| {
        Failure::Lib(Error::Schema {
            path: "$".into(),
            message: e.to_string(),
        })
    })?;
    // A corpus document holds many reports.
    let reports: Vec<&Value> = match doc.get("cases").and_then(Value::as_array) {
        Some(cases) => cases
            .iter()
            .flat_map(|c| c["reports"].as_array().into_iter().flatten())
            .collect(),
        None => vec![&doc],
    };
    let outcomes: Vec<_> = reports.iter().map(|r| verify_report(r)).collect();
    let ok = outcomes.iter().all(|o| o.ok());
    let value = json!({
        "ok": ok,
        "reports": outcomes.iter().map(|o| json!({
            "ok": o.ok(), "checked": o.checked, "failures": o.failures, "unchecked": o.unchecked,
        })).collect::<Vec<_>>(),
    });
    emit(&value, || render::verification(&outcomes, style), flags);
    Ok(if ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let style = Style::detect();
    let f = &cli.flags;
    let result = match &cli.command {
        Command::CheckObservable { file } => check(file, Question::Observability, f, style),
        Command::CheckEpimorphic { file } => check(file, Question::Epimorphicity, f, style),
        Command::Grading { file, s } => grading(file, s, f, style),
        Command::Orthocent { file } => orthocent(file, f, style),
        Command::Corpus => corpus(f, style),
        Command::Verify { report } => verify(report, f, style),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            match &failure {
                Failure::Io(m) => eprintln!("error: {m}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&failure))
        }
    }
}
