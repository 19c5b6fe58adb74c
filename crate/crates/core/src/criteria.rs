//! Top-level decisions: observability and epimorphicity of a subalgebra.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::{coords_of, elements_of, is_reductive, levi_decomposition, Element, LieAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::grading::sukhanov_check_spans;
use crate::linalg::Matrix;
use crate::orbit::{
    hom_vector, orbit_closed, zero_in_orbit_closure, Confidence, OneParameterCertificate, OrbitCertificate,
    OrbitKind, OrbitOptions, OrbitVerdict,
};
use crate::overgroup::{not_in_proper_reductive, OvergroupStatus, ReductiveOvergroupReport};
use crate::rational::{clear_denominators, Q};
use crate::transcript::{elem_json, elems_json, qs_json, Transcript};

/// `{z : [z, l] = 0 and (z, l) = 0 for all l}` for a reductive `l`.
pub fn orthogonal_centralizer(g: &LieAlgebra, l: &Subalgebra) -> Result<Subalgebra> {
    if !is_reductive(g, l)? {
        return Err(Error::NotReductiveInput);
    }
    Ok(orthogonal_centralizer_unchecked(g, l.basis()))
}

fn orthogonal_centralizer_unchecked(g: &LieAlgebra, l: &[Element]) -> Subalgebra {
    let n = g.dim();
    let mut rows = Vec::new();
    for x in l {
        rows.extend(g.ad(x).to_rows());
        rows.push(g.killing_row(x));
    }
    let basis = if rows.is_empty() {
        (0..n).map(|i| Element::basis(n, i).0).collect()
    } else {
        Matrix::from_rows(&rows).kernel()
    };
    Subalgebra::new(g, elements_of(basis)).expect("orthogonal centralizers are subalgebras")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Question {
    Observability,
    Epimorphicity,
}

impl Question {
    pub fn name(self) -> &'static str {
        match self {
            Question::Observability => "observability",
            Question::Epimorphicity => "epimorphicity",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn name(self) -> &'static str {
        match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::Unknown => "Unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Answer> {
        match s {
            "Yes" => Some(Answer::Yes),
            "No" => Some(Answer::No),
            "Unknown" => Some(Answer::Unknown),
            _ => None,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Answer::Yes => 0,
            Answer::No => 1,
            Answer::Unknown => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `s` with `h ⊆ q_s` and `R_u(h) ⊆ n_s`, optionally with the one-parameter
    /// subgroup it came from.
    Sukhanov {
        s: Element,
        eigenvalues: Vec<Q>,
        one_parameter: Option<OneParameterCertificate>,
    },
    Orbit(OrbitCertificate),
    /// A proper reductive subalgebra containing `h`.
    ReductiveOvergroup { witness: Vec<Element> },
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        match self {
            Certificate::Sukhanov {
                s,
                eigenvalues,
                one_parameter,
            } => json!({ "sukhanov": {
                "s": elem_json(s),
                "eigenvalues": qs_json(eigenvalues),
                "one_parameter": one_parameter.as_ref().map(OneParameterCertificate::to_json),
            }}),
            Certificate::Orbit(c) => json!({ "orbit": c.to_json() }),
            Certificate::ReductiveOvergroup { witness } => {
                json!({ "reductive_overgroup": { "witness": elems_json(witness) } })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideCondition {
    pub name: String,
    pub holds: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub question: Question,
    pub answer: Answer,
    pub certificate: Option<Certificate>,
    pub side_conditions: Vec<SideCondition>,
    pub confidence: Confidence,
    /// Which sub-procedure fell short, for `Unknown` answers.
    pub unknown_reason: Option<String>,
    /// `(levi, unipotent radical)` used for the decision.
    pub split: Option<(Vec<Element>, Vec<Element>)>,
    /// Basis of the orthogonal centralizer of the Levi part.
    pub acting: Option<Vec<Element>>,
    pub orbit_kind: Option<OrbitKind>,
    pub overgroup: Option<ReductiveOvergroupReport>,
    pub transcript: Transcript,
}

impl Verdict {
    fn new(question: Question) -> Self {
        Verdict {
            question,
            answer: Answer::Unknown,
            certificate: None,
            side_conditions: Vec::new(),
            confidence: Confidence::Exact,
            unknown_reason: None,
            split: None,
            acting: None,
            orbit_kind: None,
            overgroup: None,
            transcript: Transcript::new(),
        }
    }

    fn side(&mut self, name: &str, holds: bool, note: &str) {
        self.side_conditions.push(SideCondition {
            name: name.into(),
            holds,
            note: note.into(),
        });
    }

    pub fn to_json(&self) -> Value {
        json!({
            "question": self.question.name(),
            "answer": self.answer.name(),
            "confidence": self.confidence.to_json(),
            "certificate": self.certificate.as_ref().map(Certificate::to_json),
            "side_conditions": self.side_conditions.iter().map(|s| json!({
                "name": s.name, "holds": s.holds, "note": s.note,
            })).collect::<Vec<_>>(),
            "unknown_reason": self.unknown_reason,
            "split": self.split.as_ref().map(|(l, u)| json!({
                "levi": elems_json(l), "unipotent_radical": elems_json(u),
            })),
            "acting": self.acting.as_ref().map(|a| elems_json(a)),
            "orbit": self.orbit_kind.map(|k| k.name()),
            "overgroup": self.overgroup.as_ref().map(ReductiveOvergroupReport::to_json),
        })
    }
}

/// Options shared by both decisions.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOptions {
    pub orbit: OrbitOptions,
    pub assert_no_reductive_overgroup: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            orbit: OrbitOptions::default(),
            assert_no_reductive_overgroup: false,
        }
    }
}

impl CheckOptions {
    pub fn with_seed(seed: u64) -> Self {
        let mut o = Self::default();
        o.orbit.seed = seed;
        o
    }
}

struct Prepared {
    unip: Subalgebra,
    acting: Subalgebra,
}

fn prepare(g: &LieAlgebra, h: &Subalgebra, v: &mut Verdict) -> Result<Option<Prepared>> {
    let (levi, unip) = levi_decomposition(g, h)?;
    v.split = Some((levi.basis().to_vec(), unip.basis().to_vec()));
    v.transcript.push(
        "levi_decomposition",
        json!({ "levi": elems_json(levi.basis()), "unipotent_radical": elems_json(unip.basis()) }),
    );
    if unip.is_zero() {
        return Ok(None);
    }
    let acting = orthogonal_centralizer_unchecked(g, levi.basis());
    v.acting = Some(acting.basis().to_vec());
    v.transcript.push("orthogonal_centralizer", json!({ "basis": elems_json(acting.basis()) }));
    Ok(Some(Prepared {
        unip,
        acting,
    }))
}

fn absorb(v: &mut Verdict, ov: &OrbitVerdict) {
    v.orbit_kind = Some(ov.kind);
    v.transcript.extend(ov.transcript.clone());
}

fn numerical_unknown(v: &mut Verdict, ov: &OrbitVerdict) {
    v.answer = Answer::Unknown;
    v.confidence = ov.confidence;
    v.unknown_reason = Some(format!(
        "orbit engine: {}",
        ov.note.clone().unwrap_or_else(|| "no exact verdict".into())
    ));
}

/// Is `h` observable in `g`?
pub fn observability_check(g: &LieAlgebra, h: &Subalgebra, opts: &CheckOptions) -> Result<Verdict> {
    let mut v = Verdict::new(Question::Observability);
    let Some(p) = prepare(g, h, &mut v)? else {
        let s = Element::zero(g.dim());
        let rep = sukhanov_check_spans(g, h.basis(), &[], &s)?;
        if !rep.holds() {
            return Err(Error::Internal("zero element fails to certify a reductive subalgebra".into()));
        }
        v.side(
            "nonreductive",
            false,
            "reductive subalgebras are observable; the orbit criterion needs a nonreductive subalgebra",
        );
        v.answer = Answer::Yes;
        v.certificate = Some(Certificate::Sukhanov {
            s,
            eigenvalues: rep.eigenvalues,
            one_parameter: None,
        });
        return Ok(v);
    };
    v.side("nonreductive", true, "unipotent radical is nonzero");
    let hv = hom_vector(g, &p.unip);
    let ov = zero_in_orbit_closure(g, &hv, &p.acting, &opts.orbit)?;
    absorb(&mut v, &ov);
    match (ov.kind, ov.confidence, ov.certificate.clone()) {
        (OrbitKind::ZeroInClosure, Confidence::Exact, Some(OrbitCertificate::Destabilizing(cert))) => {
            // Positive rescaling keeps the grading; report the primitive integral multiple.
            let s = Element(clear_denominators(&cert.realized_s.0));
            let rep = sukhanov_check_spans(g, h.basis(), p.unip.basis(), &s)?;
            if !rep.holds() {
                return Err(Error::Internal(format!(
                    "destabilizing element fails the containment check: {}",
                    rep.failure().unwrap_or("")
                )));
            }
            v.transcript.push(
                "sukhanov_check",
                json!({ "s": elem_json(&s), "eigenvalues": qs_json(&rep.eigenvalues), "holds": true }),
            );
            v.answer = Answer::Yes;
            v.certificate = Some(Certificate::Sukhanov {
                s,
                eigenvalues: rep.eigenvalues,
                one_parameter: Some(cert),
            });
        }
        (OrbitKind::ZeroNotInClosure, Confidence::Exact, Some(c)) => {
            v.answer = Answer::No;
            v.certificate = Some(Certificate::Orbit(c));
        }
        _ => numerical_unknown(&mut v, &ov),
    }
    Ok(v)
}

/// Is `h` epimorphic in `g`?
pub fn epimorphicity_check(g: &LieAlgebra, h: &Subalgebra, opts: &CheckOptions) -> Result<Verdict> {
    let mut v = Verdict::new(Question::Epimorphicity);
    if h.is_whole() {
        v.side("proper", false, "the whole algebra is epimorphic in itself");
        v.answer = Answer::Yes;
        return Ok(v);
    }
    let Some(p) = prepare(g, h, &mut v)? else {
        v.side(
            "nonreductive",
            false,
            "a proper reductive subalgebra is never epimorphic; it is its own reductive overgroup",
        );
        v.answer = Answer::No;
        v.certificate = Some(Certificate::ReductiveOvergroup {
            witness: h.basis().to_vec(),
        });
        return Ok(v);
    };
    v.side("nonreductive", true, "unipotent radical is nonzero");
    let hv = hom_vector(g, &p.unip);
    let ov = orbit_closed(g, &hv, &p.acting, &opts.orbit)?;
    absorb(&mut v, &ov);
    match (ov.kind, ov.confidence) {
        (OrbitKind::NotClosed, Confidence::Exact) => {
            v.answer = Answer::No;
            v.certificate = ov.certificate.map(Certificate::Orbit);
        }
        (OrbitKind::Closed, Confidence::Exact) => {
            let rep = not_in_proper_reductive(g, h, opts.assert_no_reductive_overgroup, opts.orbit.seed)?;
            v.transcript.push("reductive_overgroup", rep.to_json());
            match &rep.status {
                OvergroupStatus::NotContained => {
                    v.side("no proper reductive overgroup", true, rep.method.name());
                    v.answer = Answer::Yes;
                    v.certificate = ov.certificate.map(Certificate::Orbit);
                }
                OvergroupStatus::Contained { witness, test } => {
                    v.side("no proper reductive overgroup", false, test);
                    v.answer = Answer::No;
                    v.certificate = Some(Certificate::ReductiveOvergroup {
                        witness: witness.clone(),
                    });
                }
                OvergroupStatus::Unknown { reason } => {
                    v.answer = Answer::Unknown;
                    v.unknown_reason = Some(format!("reductive overgroup table: {reason}"));
                }
            }
            v.overgroup = Some(rep);
        }
        _ => numerical_unknown(&mut v, &ov),
    }
    Ok(v)
}

/// `span(a) ⊆ span(b)` in ambient coordinates.
pub fn span_within(g: &LieAlgebra, a: &[Element], b: &[Element]) -> bool {
    crate::linalg::span_contains_all(&coords_of(b), &coords_of(a), g.dim())
}

/// Killing form of `s` with itself, exposed for reports.
pub fn killing_norm(g: &LieAlgebra, s: &Element) -> Q {
    if s.is_zero() {
        return Q::zero();
    }
    g.killing_unchecked(s, s)
}
