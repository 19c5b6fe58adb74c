//! Problem documents: parsing, validation and serialization.

use serde_json::{json, Map, Value};

use crate::algebra::{Element, Family, LieAlgebra, Subalgebra};
use crate::criteria::CheckOptions;
use crate::descent::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::orbit::OrbitOptions;
use crate::rational::{fmt_q, Q};
use crate::transcript::{field, q_from_json, qss_from_json, qss_json, schema_error};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSpec {
    Classical {
        family: Family,
        n: usize,
    },
    Table {
        dim: usize,
        structure_constants: Vec<(usize, usize, usize, Q)>,
        labels: Option<Vec<String>>,
    },
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<LieAlgebra> {
        match self {
            AlgebraSpec::Classical { family, n } => LieAlgebra::classical(*family, *n),
            AlgebraSpec::Table {
                dim,
                structure_constants,
                labels,
            } => {
                let labels = labels
                    .clone()
                    .unwrap_or_else(|| (0..*dim).map(|i| format!("x{i}")).collect());
                LieAlgebra::from_structure_constants(*dim, structure_constants, labels)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemOptions {
    pub seed: u64,
    pub kn_tol: f64,
    pub kn_max_iter: usize,
    pub assert_no_reductive_overgroup: bool,
}

impl Default for ProblemOptions {
    fn default() -> Self {
        ProblemOptions {
            seed: 0,
            kn_tol: DEFAULT_TOL,
            kn_max_iter: DEFAULT_MAX_ITER,
            assert_no_reductive_overgroup: false,
        }
    }
}

impl ProblemOptions {
    pub fn check_options(&self) -> CheckOptions {
        CheckOptions {
            orbit: OrbitOptions {
                seed: self.seed,
                kn_tol: self.kn_tol,
                kn_max_iter: self.kn_max_iter,
                ..OrbitOptions::default()
            },
            assert_no_reductive_overgroup: self.assert_no_reductive_overgroup,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub name: Option<String>,
    pub algebra: AlgebraSpec,
    pub basis: Vec<Vec<Q>>,
    pub levi_basis: Option<Vec<Vec<Q>>>,
    pub unipotent_radical_basis: Option<Vec<Vec<Q>>>,
    pub options: ProblemOptions,
}

/// A validated problem: the ambient algebra and the subalgebra.
#[derive(Clone, Debug)]
pub struct Problem {
    pub g: LieAlgebra,
    pub h: Subalgebra,
}

impl ProblemSpec {
    pub fn classical(family: Family, n: usize, basis: Vec<Vec<Q>>) -> Self {
        ProblemSpec {
            name: None,
            algebra: AlgebraSpec::Classical { family, n },
            basis,
            levi_basis: None,
            unipotent_radical_basis: None,
            options: ProblemOptions::default(),
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn instantiate(&self) -> Result<Problem> {
        let g = self.algebra.build()?;
        let dim = g.dim();
        let check = |vs: &[Vec<Q>], path: &str| -> Result<Vec<Element>> {
            for (i, v) in vs.iter().enumerate() {
                if v.len() != dim {
                    return Err(Error::Schema {
                        path: format!("{path}[{i}]"),
                        message: format!("expected {dim} coordinates, found {}", v.len()),
                    });
                }
            }
            Ok(vs.iter().cloned().map(Element).collect())
        };
        let basis = check(&self.basis, "subalgebra.basis")?;
        let mut h = Subalgebra::new(&g, basis)?;
        match (&self.levi_basis, &self.unipotent_radical_basis) {
            (None, None) => {}
            (l, u) => {
                let l = check(l.as_deref().unwrap_or(&[]), "subalgebra.levi_basis")?;
                let u = check(u.as_deref().unwrap_or(&[]), "subalgebra.unipotent_radical_basis")?;
                h = h.with_declared_split(l, u)?;
            }
        }
        Ok(Problem { g, h })
    }

    pub fn to_json(&self) -> Value {
        let algebra = match &self.algebra {
            AlgebraSpec::Classical { family, n } => json!({ "family": family.name(), "n": n }),
            AlgebraSpec::Table {
                dim,
                structure_constants,
                labels,
            } => {
                let mut m = Map::new();
                m.insert("dim".into(), json!(dim));
                m.insert(
                    "structure_constants".into(),
                    Value::Array(
                        structure_constants
                            .iter()
                            .map(|(k, i, j, c)| json!([k, i, j, fmt_q(c)]))
                            .collect(),
                    ),
                );
                if let Some(l) = labels {
                    m.insert("labels".into(), json!(l));
                }
                Value::Object(m)
            }
        };
        let mut sub = Map::new();
        sub.insert("basis".into(), qss_json(&self.basis));
        if let Some(l) = &self.levi_basis {
            sub.insert("levi_basis".into(), qss_json(l));
        }
        if let Some(u) = &self.unipotent_radical_basis {
            sub.insert("unipotent_radical_basis".into(), qss_json(u));
        }
        let mut doc = Map::new();
        if let Some(n) = &self.name {
            doc.insert("name".into(), json!(n));
        }
        doc.insert("algebra".into(), algebra);
        doc.insert("subalgebra".into(), Value::Object(sub));
        doc.insert(
            "options".into(),
            json!({
                "seed": self.options.seed,
                "kn_tol": self.options.kn_tol,
                "kn_max_iter": self.options.kn_max_iter,
                "assert_no_reductive_overgroup": self.options.assert_no_reductive_overgroup,
            }),
        );
        Value::Object(doc)
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize")
    }
}

fn usize_at(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema_error(path, "expected a non-negative integer"))
}

fn algebra_from_json(v: &Value) -> Result<AlgebraSpec> {
    let path = "algebra";
    if !v.is_object() {
        return Err(schema_error(path, "expected an object"));
    }
    if let Some(f) = v.get("family") {
        let name = f
            .as_str()
            .ok_or_else(|| schema_error("algebra.family", "expected a string"))?;
        let family = Family::parse(name)
            .ok_or_else(|| schema_error("algebra.family", format!("unknown family {name:?}")))?;
        let n = usize_at(field(v, "n", path)?, "algebra.n")?;
        return Ok(AlgebraSpec::Classical { family, n });
    }
    let dim = usize_at(field(v, "dim", path)?, "algebra.dim")?;
    let sc = field(v, "structure_constants", path)?
        .as_array()
        .ok_or_else(|| schema_error("algebra.structure_constants", "expected an array"))?;
    let mut entries = Vec::with_capacity(sc.len());
    for (idx, e) in sc.iter().enumerate() {
        let p = format!("algebra.structure_constants[{idx}]");
        let a = e
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| schema_error(&p, "expected [k, i, j, c]"))?;
        let k = usize_at(&a[0], &format!("{p}[0]"))?;
        let i = usize_at(&a[1], &format!("{p}[1]"))?;
        let j = usize_at(&a[2], &format!("{p}[2]"))?;
        for (pos, x) in [k, i, j].into_iter().enumerate() {
            if x >= dim {
                return Err(schema_error(&format!("{p}[{pos}]"), format!("index {x} out of range for dimension {dim}")));
            }
        }
        entries.push((k, i, j, q_from_json(&a[3], &format!("{p}[3]"))?));
    }
    let labels = match v.get("labels") {
        None | Some(Value::Null) => None,
        Some(l) => {
            let arr = l
                .as_array()
                .ok_or_else(|| schema_error("algebra.labels", "expected an array of strings"))?;
            let mut out = Vec::new();
            for (i, x) in arr.iter().enumerate() {
                out.push(
                    x.as_str()
                        .ok_or_else(|| schema_error(&format!("algebra.labels[{i}]"), "expected a string"))?
                        .to_string(),
                );
            }
            Some(out)
        }
    };
    Ok(AlgebraSpec::Table {
        dim,
        structure_constants: entries,
        labels,
    })
}

fn options_from_json(v: Option<&Value>) -> Result<ProblemOptions> {
    let mut o = ProblemOptions::default();
    let Some(v) = v else { return Ok(o) };
    if !v.is_object() {
        return Err(schema_error("options", "expected an object"));
    }
    if let Some(x) = v.get("seed") {
        o.seed = x
            .as_u64()
            .ok_or_else(|| schema_error("options.seed", "expected a non-negative integer"))?;
    }
    if let Some(x) = v.get("kn_tol") {
        o.kn_tol = x
            .as_f64()
            .filter(|t| *t > 0.0 && t.is_finite())
            .ok_or_else(|| schema_error("options.kn_tol", "expected a positive number"))?;
    }
    if let Some(x) = v.get("kn_max_iter") {
        o.kn_max_iter = usize_at(x, "options.kn_max_iter")?;
    }
    if let Some(x) = v.get("assert_no_reductive_overgroup") {
        o.assert_no_reductive_overgroup = x
            .as_bool()
            .ok_or_else(|| schema_error("options.assert_no_reductive_overgroup", "expected a boolean"))?;
    }
    Ok(o)
}

/// Reads a problem document without validating it against the algebra.
pub fn problem_from_json(doc: &Value) -> Result<ProblemSpec> {
    if !doc.is_object() {
        return Err(schema_error("$", "expected an object"));
    }
    let name = match doc.get("name") {
        None | Some(Value::Null) => None,
        Some(n) => Some(
            n.as_str()
                .ok_or_else(|| schema_error("name", "expected a string"))?
                .to_string(),
        ),
    };
    let algebra = algebra_from_json(field(doc, "algebra", "$")?)?;
    let sub = field(doc, "subalgebra", "$")?;
    if !sub.is_object() {
        return Err(schema_error("subalgebra", "expected an object"));
    }
    let basis = qss_from_json(field(sub, "basis", "subalgebra")?, "subalgebra.basis")?;
    let optional = |key: &str| -> Result<Option<Vec<Vec<Q>>>> {
        match sub.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => qss_from_json(v, &format!("subalgebra.{key}")).map(Some),
        }
    };
    Ok(ProblemSpec {
        name,
        algebra,
        basis,
        levi_basis: optional("levi_basis")?,
        unipotent_radical_basis: optional("unipotent_radical_basis")?,
        options: options_from_json(doc.get("options"))?,
    })
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema_error("$", e.to_string()))?;
    let spec = problem_from_json(&doc)?;
    spec.instantiate()?;
    Ok(spec)
}
