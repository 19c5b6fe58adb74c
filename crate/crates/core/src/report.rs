//! Reports: the problem, the verdict and the transcript as one JSON document.

use serde_json::{json, Value};

use crate::criteria::{epimorphicity_check, observability_check, Question, Verdict};
use crate::error::Result;
use crate::overgroup::TABLE_VERSION;
use crate::problem::ProblemSpec;
use crate::transcript::Level;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Verbosity {
    /// Verdict and certificate only.
    Quiet,
    /// Adds the transcript steps that carry certificates and LP systems.
    #[default]
    Default,
    /// Everything, including eigenbasis dumps.
    Trace,
}

pub fn versions() -> Value {
    json!({ "tool": TOOL_VERSION, "table": TABLE_VERSION })
}

/// Decides `question` for a problem document.
pub fn decide(spec: &ProblemSpec, question: Question) -> Result<Verdict> {
    let p = spec.instantiate()?;
    let opts = spec.options.check_options();
    match question {
        Question::Observability => observability_check(&p.g, &p.h, &opts),
        Question::Epimorphicity => epimorphicity_check(&p.g, &p.h, &opts),
    }
}

pub fn report_json(spec: &ProblemSpec, verdict: &Verdict, verbosity: Verbosity) -> Value {
    let transcript = match verbosity {
        Verbosity::Quiet => Value::Array(Vec::new()),
        Verbosity::Default => verdict.transcript.to_json(Level::Default),
        Verbosity::Trace => verdict.transcript.to_json(Level::Trace),
    };
    json!({
        "versions": versions(),
        "problem": spec.to_json(),
        "verdict": verdict.to_json(),
        "transcript": transcript,
    })
}

pub fn render(report: &Value) -> String {
    serde_json::to_string_pretty(report).expect("JSON values serialize")
}
