//! Human-readable output.

use std::fmt::Write;
use std::io::IsTerminal;

use epimorph::corpus::CaseOutcome;
use epimorph::criteria::{Answer, Certificate, Verdict};
use epimorph::grading::{RationalGrading, SukhanovReport};
use epimorph::orbit::{Confidence, OrbitCertificate};
use epimorph::rational::fmt_q;
use epimorph::report::Verbosity;
use epimorph::verify::VerifyOutcome;
use epimorph::{Element, LieAlgebra};
use serde_json::Value;

#[derive(Clone, Copy, Debug)]
pub struct Style {
    color: bool,
}

impl Style {
    /// Color only on a terminal and only when `NO_COLOR` is unset or empty.
    pub fn detect() -> Self {
        let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
        Style {
            color: !no_color && std::io::stdout().is_terminal(),
        }
    }

    fn paint(self, text: &str, code: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn answer(self, a: Answer) -> String {
        let code = match a {
            Answer::Yes => "32",
            Answer::No => "31",
            Answer::Unknown => "33",
        };
        self.paint(a.name(), code)
    }

    fn pass(self, ok: bool) -> String {
        if ok {
            self.paint("pass", "32")
        } else {
            self.paint("FAIL", "31")
        }
    }
}

fn confidence(c: Confidence) -> String {
    match c {
        Confidence::Exact => "exact".into(),
        Confidence::Numerical { tol } => format!("numerical, tolerance {tol:e}"),
    }
}

fn vector(v: &[epimorph::Q]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("({})", parts.join(", "))
}

fn orbit_certificate(c: &OrbitCertificate) -> String {
    match c {
        OrbitCertificate::Destabilizing(op) => {
            format!("one-parameter subgroup λ = {} with pairings {}", vector(&op.lambda), vector(&op.pairings))
        }
        OrbitCertificate::Degenerating {
            cert,
            orbit_dim,
            limit_orbit_dim,
        } => format!(
            "degeneration λ = {} with pairings {}; orbit dimension {} drops to {}",
            vector(&cert.lambda),
            vector(&cert.pairings),
            orbit_dim,
            limit_orbit_dim
        ),
        OrbitCertificate::Stable(d) => format!("Gordan multipliers {}", vector(&d.multipliers)),
        OrbitCertificate::ClosedTorus(d) => format!("Stiemke multipliers {}", vector(&d.multipliers)),
    }
}

pub fn verdict(v: &Verdict, report: &Value, style: Style, verbosity: Verbosity) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}: {} ({})", v.question.name(), style.answer(v.answer), confidence(v.confidence));
    match &v.certificate {
        Some(Certificate::Sukhanov { s, eigenvalues, .. }) => {
            let _ = writeln!(out, "certificate: s = {} with ad-eigenvalues {}", vector(&s.0), vector(eigenvalues));
        }
        Some(Certificate::Orbit(c)) => {
            let _ = writeln!(out, "certificate: {}", orbit_certificate(c));
        }
        Some(Certificate::ReductiveOvergroup { witness }) => {
            let _ = writeln!(out, "certificate: proper reductive overgroup of dimension {}", witness.len());
        }
        None => {}
    }
    for sc in &v.side_conditions {
        let _ = writeln!(out, "  {} = {} ({})", sc.name, sc.holds, sc.note);
    }
    if let Some(r) = &v.unknown_reason {
        let _ = writeln!(out, "unknown because: {r}");
    }
    if verbosity != Verbosity::Quiet {
        if let Some(steps) = report["transcript"].as_array() {
            for step in steps {
                let name = step["step"].as_str().unwrap_or("?");
                if verbosity == Verbosity::Trace {
                    let _ = writeln!(out, "  step {name}: {}", step["data"]);
                } else {
                    let _ = writeln!(out, "  step {name}");
                }
            }
        }
    }
    out
}

pub fn basis(g: &LieAlgebra, title: &str, b: &[Element], _style: Style) -> String {
    let mut out = format!("{title}: dimension {}\n", b.len());
    for x in b {
        let _ = writeln!(out, "  {}", g.format_element(x));
    }
    out
}

pub fn grading(g: &LieAlgebra, gr: &RationalGrading, rep: &SukhanovReport, style: Style) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "s = {}", g.format_element(&gr.s));
    for (k, b) in &gr.pieces {
        let _ = writeln!(out, "  eigenvalue {}: dimension {}", fmt_q(k), b.len());
    }
    let _ = writeln!(
        out,
        "dim p_s = {}, dim q_s = {}, dim n_s = {}",
        gr.p_basis.len(),
        gr.q_basis.len(),
        gr.n_basis.len()
    );
    let _ = writeln!(out, "subalgebra in q_s: {}", style.pass(rep.h_in_q));
    let _ = writeln!(out, "unipotent radical in n_s: {}", style.pass(rep.radical_in_n));
    out
}

pub fn corpus(results: &[CaseOutcome], style: Style) -> String {
    let mut out = String::new();
    for c in results {
        let answers: Vec<String> = c
            .outcomes
            .iter()
            .map(|o| format!("{} {}", o.question.name(), style.answer(o.verdict.answer)))
            .collect();
        let _ = writeln!(out, "{} {}: {}", style.pass(c.passed()), c.name, answers.join(", "));
    }
    let passed = results.iter().filter(|c| c.passed()).count();
    let _ = writeln!(out, "{passed}/{} cases passed", results.len());
    out
}

pub fn verification(outcomes: &[VerifyOutcome], style: Style) -> String {
    let mut out = String::new();
    for (i, o) in outcomes.iter().enumerate() {
        let _ = writeln!(
            out,
            "report {i}: {} ({} checks, {} unchecked claims)",
            style.pass(o.ok()),
            o.checked.len(),
            o.unchecked.len()
        );
        for f in &o.failures {
            let _ = writeln!(out, "  failed: {f}");
        }
        for u in &o.unchecked {
            let _ = writeln!(out, "  unchecked: {u}");
        }
    }
    out
}
