//! Re-checks the certificates of a serialized report.
//!
//! Everything here works from the report document alone. The algebra and the
//! subalgebra are rebuilt from the embedded problem; every other fact (the split,
//! the acting algebra, gradings, weights, multipliers, orbit dimensions) is
//! recomputed with direct linear algebra instead of trusting the decision code.

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::algebra::{Element, LieAlgebra};
use crate::linalg::{self, Matrix};
use crate::poly::{charpoly, is_semisimple_matrix};
use crate::problem::problem_from_json;
use crate::rational::Q;
use crate::transcript::{elems_from_json, field, q_from_json, qs_from_json, qss_from_json};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyOutcome {
    /// Checks that passed.
    pub checked: Vec<String>,
    /// Checks that failed.
    pub failures: Vec<String>,
    /// Claims that carry no checkable certificate.
    pub unchecked: Vec<String>,
}

impl VerifyOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, name: &str, holds: bool) -> bool {
        if holds {
            self.checked.push(name.to_string());
        } else {
            self.failures.push(name.to_string());
        }
        holds
    }
}

type Vecs = Vec<Vec<Q>>;

fn vecs(es: &[Element]) -> Vecs {
    es.iter().map(|e| e.0.clone()).collect()
}

fn ad(g: &LieAlgebra, x: &[Q]) -> Matrix {
    g.ad(&Element(x.to_vec()))
}

fn bracket(g: &LieAlgebra, x: &[Q], y: &[Q]) -> Vec<Q> {
    ad(g, x).mul_vec(y)
}

fn killing(g: &LieAlgebra, x: &[Q], y: &[Q]) -> Q {
    ad(g, x).mul(&ad(g, y)).trace()
}

/// Spectral projectors of `m`, provided `Π (m - μ) = 0` over the given distinct
/// eigenvalues; `None` if `m` is not diagonalizable with those eigenvalues.
fn projectors(m: &Matrix, eigenvalues: &[Q]) -> Option<Vec<(Q, Matrix)>> {
    let n = m.rows();
    for (i, a) in eigenvalues.iter().enumerate() {
        if eigenvalues[..i].contains(a) {
            return None;
        }
    }
    let mut prod = Matrix::identity(n);
    for mu in eigenvalues {
        prod = prod.mul(&m.shift(mu));
    }
    if !prod.is_zero() {
        return None;
    }
    Some(
        eigenvalues
            .iter()
            .map(|mu| {
                let mut p = Matrix::identity(n);
                for nu in eigenvalues.iter().filter(|nu| *nu != mu) {
                    p = p.mul(&m.shift(nu)).scale(&(Q::one() / (mu - nu)));
                }
                (mu.clone(), p)
            })
            .collect(),
    )
}

fn eigenvalues_from_charpoly(m: &Matrix) -> Vec<Q> {
    charpoly(m).rational_roots()
}

fn orthogonal_centralizer(g: &LieAlgebra, l: &[Vec<Q>]) -> Vecs {
    let n = g.dim();
    if l.is_empty() {
        return (0..n).map(|i| Element::basis(n, i).0).collect();
    }
    let mut rows = Vec::new();
    for x in l {
        rows.extend(ad(g, x).to_rows());
        let kx = ad(g, x);
        rows.push((0..n).map(|i| kx.mul(g.ad_basis(i)).trace()).collect());
    }
    Matrix::from_rows(&rows).kernel()
}

fn is_subalgebra(g: &LieAlgebra, b: &[Vec<Q>]) -> bool {
    let n = g.dim();
    b.iter()
        .all(|x| b.iter().all(|y| linalg::span_contains(b, &bracket(g, x, y), n)))
}

/// Nondegenerate restricted Killing form and an ad-semisimple center: together
/// these make `b` reductive in `g`.
fn reductive_in_g(g: &LieAlgebra, b: &[Vec<Q>]) -> bool {
    if b.is_empty() {
        return true;
    }
    let gram: Vec<Vec<Q>> = b.iter().map(|x| b.iter().map(|y| killing(g, x, y)).collect()).collect();
    if Matrix::from_rows(&gram).determinant().is_zero() {
        return false;
    }
    // Center: coefficient vectors c with [Σ c_i b_i, b_j] = 0 for all j.
    let n = g.dim();
    let mut rows = Vec::new();
    for y in b {
        let cols: Vecs = b.iter().map(|x| bracket(g, x, y)).collect();
        rows.extend(Matrix::from_cols(&cols, n).to_rows());
    }
    let center = Matrix::from_rows(&rows).kernel();
    center
        .iter()
        .all(|c| is_semisimple_matrix(&ad(g, &linalg::combine(c, b, n))))
}

fn nilpotent_action(g: &LieAlgebra, u: &[Vec<Q>]) -> bool {
    // The associative envelope of ad(u) is nilpotent iff every product of
    // dim(g) factors vanishes; check via the descending flag g ⊇ u·g ⊇ …
    let n = g.dim();
    let mut space: Vecs = (0..n).map(|i| Element::basis(n, i).0).collect();
    for _ in 0..=n {
        if space.is_empty() {
            return true;
        }
        let mut next = Vec::new();
        for x in u {
            let m = ad(g, x);
            for v in &space {
                next.push(m.mul_vec(v));
            }
        }
        space = linalg::independent_subset(&next, n);
    }
    space.is_empty()
}

fn apply_all(m: &Matrix, v: &[Vec<Q>]) -> Vecs {
    v.iter().map(|x| m.mul_vec(x)).collect()
}

fn orbit_dim(g: &LieAlgebra, v: &[Vec<Q>], acting: &[Vec<Q>]) -> usize {
    let cols: Vecs = acting
        .iter()
        .map(|x| apply_all(&ad(g, x), v).concat())
        .collect();
    if cols.is_empty() {
        return 0;
    }
    linalg::rank_of(&cols, cols[0].len())
}

/// Weight support of `v` under the commuting family `torus`, by joint projectors.
fn support(g: &LieAlgebra, torus: &[Vec<Q>], v: &[Vec<Q>]) -> Option<Vec<(Vec<Q>, Vecs)>> {
    let mut parts: Vec<(Vec<Q>, Vecs)> = vec![(Vec::new(), v.to_vec())];
    for t in torus {
        let m = ad(g, t);
        let projs = projectors(&m, &eigenvalues_from_charpoly(&m))?;
        let mut next = Vec::new();
        for (w, comp) in parts {
            for (mu, p) in &projs {
                let c = apply_all(p, &comp);
                if c.iter().any(|x| !linalg::is_zero_vec(x)) {
                    let mut w2 = w.clone();
                    w2.push(mu.clone());
                    next.push((w2, c));
                }
            }
        }
        parts = next;
    }
    Some(parts)
}

struct Ctx<'a> {
    g: &'a LieAlgebra,
    h: Vecs,
    unip: Vecs,
    acting: Vecs,
    out: VerifyOutcome,
}

impl Ctx<'_> {
    fn torus_ok(&mut self, torus: &[Vec<Q>], spans_acting: bool) -> bool {
        let n = self.g.dim();
        let g = self.g;
        let commute = torus
            .iter()
            .all(|a| torus.iter().all(|b| linalg::is_zero_vec(&bracket(g, a, b))));
        let inside = linalg::span_contains_all(&self.acting, torus, n);
        let mut ok = self.out.check("torus commutes", commute) & self.out.check("torus lies in the acting algebra", inside);
        if spans_acting {
            ok &= self
                .out
                .check("torus spans the acting algebra", linalg::same_span(torus, &self.acting, n));
        }
        ok
    }

    fn weights_ok(&mut self, torus: &[Vec<Q>], weights: &[Vec<Q>]) -> bool {
        let Some(sup) = support(self.g, torus, &self.unip) else {
            return self.out.check("torus is rational semisimple", false);
        };
        let mut got: Vec<Vec<Q>> = sup.into_iter().map(|(w, _)| w).collect();
        got.sort();
        let mut want = weights.to_vec();
        want.sort();
        self.out.check("weights match the recomputed support", got == want)
    }

    /// Decomposes `v` under `ad s`; returns the components by eigenvalue.
    fn graded(&mut self, s: &[Q], v: &[Vec<Q>]) -> Option<Vec<(Q, Vecs)>> {
        let m = ad(self.g, s);
        let projs = projectors(&m, &eigenvalues_from_charpoly(&m));
        if !self.out.check("one-parameter element is rational semisimple", projs.is_some()) {
            return None;
        }
        Some(projs?.into_iter().map(|(mu, p)| (mu, apply_all(&p, v))).collect())
    }

    fn one_parameter(&mut self, c: &Value, strict: bool) -> Option<()> {
        let torus = vecs(&elems_from_json(field(c, "torus", "one_parameter").ok()?, "torus").ok()?);
        let weights = qss_from_json(field(c, "weights", "one_parameter").ok()?, "weights").ok()?;
        let lambda = qs_from_json(field(c, "lambda", "one_parameter").ok()?, "lambda").ok()?;
        let s = qs_from_json(field(c, "realized_s", "one_parameter").ok()?, "realized_s").ok()?;
        let pairings = qs_from_json(field(c, "pairings", "one_parameter").ok()?, "pairings").ok()?;
        let n = self.g.dim();
        self.torus_ok(&torus, false);
        self.out.check(
            "realized element equals the torus combination",
            lambda.len() == torus.len() && linalg::combine(&lambda, &torus, n) == s,
        );
        self.weights_ok(&torus, &weights);
        let expected: Vec<Q> = weights.iter().map(|a| linalg::dot(a, &lambda)).collect();
        self.out.check("pairings match the weights", expected == pairings);
        let sign_ok = if strict {
            pairings.iter().all(Signed::is_positive)
        } else {
            pairings.iter().all(|p| !p.is_negative()) && pairings.iter().any(Signed::is_positive)
        };
        self.out.check("pairing signs", sign_ok);
        let unip = self.unip.clone();
        let parts = self.graded(&s, &unip)?;
        let nonzero = |(_, c): &&(Q, Vecs)| c.iter().any(|x| !linalg::is_zero_vec(x));
        if strict {
            self.out.check(
                "every component has positive eigenvalue",
                parts.iter().filter(nonzero).all(|(mu, _)| mu.is_positive()),
            );
        } else {
            self.out.check(
                "no component has negative eigenvalue",
                parts.iter().filter(nonzero).all(|(mu, _)| !mu.is_negative()),
            );
            let limit: Vecs = parts
                .iter()
                .find(|(mu, _)| mu.is_zero())
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| vec![vec![Q::zero(); n]; unip.len()]);
            let d0 = orbit_dim(self.g, &unip, &self.acting);
            let d1 = orbit_dim(self.g, &limit, &self.acting);
            self.out.check("limit has smaller orbit dimension", d1 < d0);
        }
        Some(())
    }

    fn dual(&mut self, c: &Value, strict: bool) -> Option<()> {
        let torus = vecs(&elems_from_json(field(c, "torus", "dual").ok()?, "torus").ok()?);
        let weights = qss_from_json(field(c, "weights", "dual").ok()?, "weights").ok()?;
        let y = qs_from_json(field(c, "multipliers", "dual").ok()?, "multipliers").ok()?;
        self.torus_ok(&torus, true);
        self.weights_ok(&torus, &weights);
        let d = torus.len();
        let mut sum = vec![Q::zero(); d];
        for (yi, a) in y.iter().zip(&weights) {
            for (s, x) in sum.iter_mut().zip(a) {
                *s += yi * x;
            }
        }
        self.out.check(
            "multipliers balance the weights",
            y.len() == weights.len() && linalg::is_zero_vec(&sum),
        );
        let signs = if strict {
            y.iter().all(Signed::is_positive)
        } else {
            y.iter().all(|x| !x.is_negative()) && y.iter().any(Signed::is_positive)
        };
        self.out.check("multiplier signs", signs);
        Some(())
    }

    fn orbit(&mut self, c: &Value) -> bool {
        let r = if let Some(x) = c.get("destabilizing") {
            self.one_parameter(x, true)
        } else if let Some(x) = c.get("degenerating") {
            x.get("one_parameter").and_then(|p| self.one_parameter(p, false))
        } else if let Some(x) = c.get("stable") {
            self.dual(x, false)
        } else if let Some(x) = c.get("closed_torus") {
            self.dual(x, true)
        } else {
            None
        };
        self.out.check("orbit certificate is well formed", r.is_some())
    }

    /// `x ∈ q_s` (or `n_s` when `nil`) by spectral projection.
    fn in_grading(&self, projs: &[(Q, Matrix)], s: &[Q], x: &[Q], nil: bool) -> bool {
        projs.iter().all(|(mu, p)| {
            let c = p.mul_vec(x);
            if linalg::is_zero_vec(&c) || mu.is_positive() {
                return true;
            }
            !nil && mu.is_zero() && killing(self.g, &c, s).is_zero()
        })
    }

    fn sukhanov(&mut self, c: &Value) -> Option<()> {
        let s = qs_from_json(field(c, "s", "sukhanov").ok()?, "s").ok()?;
        let eig = qs_from_json(field(c, "eigenvalues", "sukhanov").ok()?, "eigenvalues").ok()?;
        let n = self.g.dim();
        if !self.out.check("grading element has the stated length", s.len() == n) {
            return None;
        }
        let projs = projectors(&ad(self.g, &s), &eig);
        if !self.out.check("ad s annihilated by the product over its eigenvalues", projs.is_some()) {
            return None;
        }
        let projs = projs?;
        self.out.check(
            "grading element lies in the acting algebra",
            linalg::span_contains(&self.acting, &s, n),
        );
        let h_ok = self.h.iter().all(|x| self.in_grading(&projs, &s, x, false));
        let u_ok = self.unip.iter().all(|x| self.in_grading(&projs, &s, x, true));
        self.out.check("subalgebra lies in q_s", h_ok);
        self.out.check("unipotent radical lies in n_s", u_ok);
        if let Some(op) = c.get("one_parameter").filter(|v| !v.is_null()) {
            self.one_parameter(op, true);
        }
        Some(())
    }

    fn overgroup(&mut self, c: &Value) -> Option<()> {
        let w = vecs(&elems_from_json(field(c, "witness", "reductive_overgroup").ok()?, "witness").ok()?);
        let n = self.g.dim();
        self.out.check("witness is independent", linalg::is_independent(&w, n));
        self.out.check("witness is proper", w.len() < n);
        self.out.check("witness contains the subalgebra", linalg::span_contains_all(&w, &self.h, n));
        self.out.check("witness is a subalgebra", is_subalgebra(self.g, &w));
        self.out.check("witness is reductive in the algebra", reductive_in_g(self.g, &w));
        Some(())
    }
}

/// Re-checks every certificate in a report produced by [`crate::report`].
pub fn verify_report(report: &Value) -> VerifyOutcome {
    let mut out = VerifyOutcome::default();
    let problem = match report.get("problem").map(problem_from_json) {
        Some(Ok(p)) => p,
        _ => {
            out.failures.push("report embeds a readable problem".into());
            return out;
        }
    };
    let parsed = match problem.instantiate() {
        Ok(p) => p,
        Err(e) => {
            out.failures.push(format!("problem instantiates: {e}"));
            return out;
        }
    };
    let Some(verdict) = report.get("verdict").filter(|v| v.is_object()) else {
        out.unchecked.push("report has no verdict".into());
        return out;
    };
    let g = &parsed.g;
    let n = g.dim();
    let h = vecs(parsed.h.basis());
    let answer = verdict.get("answer").and_then(Value::as_str).unwrap_or("");
    let question = verdict.get("question").and_then(Value::as_str).unwrap_or("");
    let exact = verdict.get("confidence") == Some(&Value::String("exact".into()));
    if answer == "Unknown" || !exact {
        out.unchecked.push(format!("{question}: {answer} is not an exact claim"));
        return out;
    }
    if question == "epimorphicity" && linalg::same_span(&h, &(0..n).map(|i| Element::basis(n, i).0).collect::<Vecs>(), n) {
        out.check("subalgebra is the whole algebra", answer == "Yes");
        return out;
    }

    let split = verdict.get("split").filter(|v| !v.is_null());
    let (levi, unip) = match split.map(|s| {
        (
            elems_from_json(&s["levi"], "split.levi"),
            elems_from_json(&s["unipotent_radical"], "split.unipotent_radical"),
        )
    }) {
        Some((Ok(l), Ok(u))) => (vecs(&l), vecs(&u)),
        _ => {
            out.failures.push("report carries a Levi split".into());
            return out;
        }
    };
    let mut all = levi.clone();
    all.extend(unip.iter().cloned());
    out.check("split spans the subalgebra", all.len() == h.len() && linalg::same_span(&all, &h, n));
    out.check("split parts are independent", linalg::is_independent(&all, n));
    out.check("Levi part is a subalgebra", is_subalgebra(g, &levi));
    out.check(
        "unipotent radical is an ideal",
        h.iter()
            .all(|x| unip.iter().all(|y| linalg::span_contains(&unip, &bracket(g, x, y), n))),
    );
    out.check("unipotent radical acts nilpotently", nilpotent_action(g, &unip));
    out.check("Levi part is reductive in the algebra", reductive_in_g(g, &levi));

    let acting = orthogonal_centralizer(g, &levi);
    if let Some(a) = verdict.get("acting").filter(|v| !v.is_null()) {
        match elems_from_json(a, "acting") {
            Ok(a) => {
                out.check("acting algebra matches", linalg::same_span(&vecs(&a), &acting, n));
            }
            Err(_) => out.failures.push("acting algebra is readable".into()),
        }
    }
    let mut ctx = Ctx {
        g,
        h,
        unip,
        acting,
        out,
    };
    let cert = verdict.get("certificate").filter(|v| !v.is_null());
    match (question, answer, cert) {
        ("observability", "Yes", Some(c)) => {
            let ok = c.get("sukhanov").and_then(|x| ctx.sukhanov(x));
            ctx.out.check("observability certificate is a grading element", ok.is_some());
        }
        ("observability", "No", Some(c)) => {
            let ok = c.get("orbit").filter(|o| o.get("stable").is_some());
            ctx.out.check("non-observability certificate is a Gordan certificate", ok.is_some());
            ctx.out.check("subalgebra is not reductive", !ctx.unip.is_empty());
            if let Some(o) = ok {
                ctx.orbit(o);
            }
        }
        ("epimorphicity", "No", Some(c)) => {
            if let Some(o) = c.get("orbit") {
                let deg = o.get("degenerating").is_some() || o.get("destabilizing").is_some();
                ctx.out.check("non-epimorphicity orbit certificate degenerates", deg);
                ctx.out.check("subalgebra is not reductive", !ctx.unip.is_empty());
                ctx.orbit(o);
            } else if let Some(w) = c.get("reductive_overgroup") {
                let ok = ctx.overgroup(w);
                ctx.out.check("reductive overgroup is well formed", ok.is_some());
            } else {
                ctx.out.failures.push("non-epimorphicity certificate kind".into());
            }
        }
        ("epimorphicity", "Yes", Some(c)) => {
            let ok = c.get("orbit").filter(|o| o.get("closed_torus").is_some());
            ctx.out.check("epimorphicity certificate is a Stiemke certificate", ok.is_some());
            ctx.out.check("subalgebra is not reductive", !ctx.unip.is_empty());
            if let Some(o) = ok {
                ctx.orbit(o);
            }
            let method = verdict
                .pointer("/overgroup/method")
                .and_then(Value::as_str)
                .unwrap_or("missing");
            ctx.out
                .unchecked
                .push(format!("no proper reductive overgroup ({method})"));
        }
        _ => ctx.out.failures.push(format!("{question}: exact {answer} without certificate")),
    }
    ctx.out
}

/// Reads a rational vector written as `"a,b,c"` or a JSON array.
pub fn parse_vector(text: &str) -> crate::Result<Vec<Q>> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|_| crate::Error::RationalParse { text: t.into() })?;
        return qs_from_json(&v, "vector");
    }
    t.split(',')
        .map(|p| q_from_json(&Value::String(p.trim().to_string()), "vector"))
        .collect()
}
