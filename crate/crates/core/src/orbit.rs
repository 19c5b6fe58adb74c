//! Orbits of a reductive acting subalgebra on `Hom(u, g)` where the group acts
//! on the target copy of `g` only.
//!
//! Torus actions are decided exactly by rational linear programming over the
//! weight support. Larger acting algebras are handled through a split Cartan
//! torus, seeded nilpotent conjugations and, as a last resort, Kempf–Ness descent.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{
    all_commute, coords_of, is_reductive_in, Element, LieAlgebra, Subalgebra,
};
use crate::descent::{kempf_ness_descent, DescentResult, DescentStatus};
use crate::error::{Error, Result};
use crate::grading::verify_rational_semisimple;
use crate::linalg::{self, Matrix};
use crate::lp::{self, LpOutcome};
use crate::rational::{clear_denominators, q, Q};
use crate::transcript::{elem_json, elems_json, qs_json, qss_json, Transcript};

/// A point of `Hom(u, g)`: the image of each domain basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomVector {
    domain_basis: Vec<Element>,
    images: Vec<Element>,
    dim: usize,
}

impl HomVector {
    pub fn new(g: &LieAlgebra, domain_basis: Vec<Element>, images: Vec<Element>) -> Result<Self> {
        if domain_basis.len() != images.len() {
            return Err(Error::DimensionMismatch {
                expected: domain_basis.len(),
                found: images.len(),
            });
        }
        for e in domain_basis.iter().chain(&images) {
            g.check(&e.0)?;
        }
        Ok(HomVector {
            domain_basis,
            images,
            dim: g.dim(),
        })
    }

    pub fn domain_basis(&self) -> &[Element] {
        &self.domain_basis
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Element::is_zero)
    }

    /// Applies a linear map of `g` to every image.
    pub fn transform(&self, m: &Matrix) -> HomVector {
        HomVector {
            domain_basis: self.domain_basis.clone(),
            images: self.images.iter().map(|x| Element(m.mul_vec(&x.0))).collect(),
            dim: self.dim,
        }
    }

    fn flatten(&self) -> Vec<Q> {
        self.images.iter().flat_map(|x| x.0.iter().cloned()).collect()
    }
}

/// The inclusion `u ↪ g` as a point of `Hom(u, g)`.
pub fn hom_vector(g: &LieAlgebra, ru: &Subalgebra) -> HomVector {
    HomVector {
        domain_basis: ru.basis().to_vec(),
        images: ru.basis().to_vec(),
        dim: g.dim(),
    }
}

/// Simultaneous eigenspaces of `ad t_1, …, ad t_r` inside the span of `space`.
pub(crate) fn joint_eigenspaces(
    g: &LieAlgebra,
    torus: &[Element],
    space: &[Vec<Q>],
) -> Result<Vec<(Vec<Q>, Vec<Vec<Q>>)>> {
    let n = g.dim();
    for (i, t) in torus.iter().enumerate() {
        for (j, u) in torus.iter().enumerate().skip(i + 1) {
            if !g.bracket(t, u)?.is_zero() {
                return Err(Error::NonCommutingTorus { i, j });
            }
        }
    }
    let mut parts: Vec<(Vec<Q>, Vec<Vec<Q>>)> = vec![(Vec::new(), space.to_vec())];
    for t in torus {
        let ad = g.ad(t);
        let eig = verify_rational_semisimple(g, t)?;
        let mut next = Vec::new();
        for (w, basis) in parts {
            if basis.is_empty() {
                continue;
            }
            let img: Vec<Vec<Q>> = basis.iter().map(|b| ad.mul_vec(b)).collect();
            for lam in &eig {
                // Coefficients c with (ad t − λ)(Σ c_k b_k) = 0.
                let cols: Vec<Vec<Q>> = img
                    .iter()
                    .zip(&basis)
                    .map(|(ib, b)| linalg::sub_vec(ib, &linalg::scale_vec(lam, b)))
                    .collect();
                let ker = Matrix::from_cols(&cols, n).kernel();
                if ker.is_empty() {
                    continue;
                }
                let sub: Vec<Vec<Q>> = ker.iter().map(|c| linalg::combine(c, &basis, n)).collect();
                let mut wt = w.clone();
                wt.push(lam.clone());
                next.push((wt, sub));
            }
        }
        parts = next;
    }
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(parts)
}

/// Weight decomposition of a [`HomVector`] under a commuting family of rational
/// semisimple elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSupport {
    pub ambient_dim: usize,
    pub torus_basis: Vec<Element>,
    /// Distinct weights with nonzero component, ascending lexicographically.
    pub weights: Vec<Vec<Q>>,
    /// `components[a][k]`: the weight-`weights[a]` part of the image of domain vector `k`.
    pub components: Vec<Vec<Element>>,
}

impl WeightSupport {
    pub fn reconstruct(&self, columns: usize) -> Vec<Element> {
        let mut out = vec![Element::zero(self.ambient_dim); columns];
        for comp in &self.components {
            for (o, c) in out.iter_mut().zip(comp) {
                *o = o.add(c);
            }
        }
        out
    }

    pub fn pairings(&self, lambda: &[Q]) -> Vec<Q> {
        self.weights.iter().map(|a| linalg::dot(a, lambda)).collect()
    }
}

pub fn weight_support(g: &LieAlgebra, v: &HomVector, torus: &[Element]) -> Result<WeightSupport> {
    let n = g.dim();
    let whole: Vec<Vec<Q>> = (0..n).map(|i| Element::basis(n, i).0).collect();
    let spaces = joint_eigenspaces(g, torus, &whole)?;
    let mut all = Vec::new();
    let mut owner = Vec::new();
    for (idx, (_, b)) in spaces.iter().enumerate() {
        for x in b {
            all.push(x.clone());
            owner.push(idx);
        }
    }
    let sys = Matrix::from_cols(&all, n);
    let mut comps = vec![vec![Element::zero(n); v.images.len()]; spaces.len()];
    for (k, img) in v.images.iter().enumerate() {
        let c = sys
            .solve(&img.0)
            .ok_or_else(|| Error::Internal("eigenspaces do not span the algebra".into()))?;
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let slot = &mut comps[owner[j]][k];
            *slot = Element(linalg::add_vec(&slot.0, &linalg::scale_vec(cj, &all[j])));
        }
    }
    let mut weights = Vec::new();
    let mut components = Vec::new();
    for ((w, _), comp) in spaces.into_iter().zip(comps) {
        if comp.iter().any(|c| !c.is_zero()) {
            weights.push(w);
            components.push(comp);
        }
    }
    Ok(WeightSupport {
        ambient_dim: n,
        torus_basis: torus.to_vec(),
        weights,
        components,
    })
}

/// A one-parameter subgroup `λ` of the torus, its realization `s = Σ λ_j t_j` and
/// its pairings with the support weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneParameterCertificate {
    pub torus: Vec<Element>,
    pub weights: Vec<Vec<Q>>,
    pub lambda: Vec<Q>,
    pub realized_s: Element,
    pub pairings: Vec<Q>,
}

impl OneParameterCertificate {
    fn from_lambda(ws: &WeightSupport, lambda: Vec<Q>) -> Self {
        let realized_s = Element(linalg::combine(&lambda, &coords_of(&ws.torus_basis), ws.ambient_dim));
        OneParameterCertificate {
            torus: ws.torus_basis.clone(),
            weights: ws.weights.clone(),
            pairings: ws.pairings(&lambda),
            lambda,
            realized_s,
        }
    }

    pub fn all_positive(&self) -> bool {
        self.pairings.iter().all(Signed::is_positive)
    }

    pub fn nonnegative_somewhere_positive(&self) -> bool {
        self.pairings.iter().all(|p| !p.is_negative()) && self.pairings.iter().any(Signed::is_positive)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "torus": elems_json(&self.torus),
            "weights": qss_json(&self.weights),
            "lambda": qs_json(&self.lambda),
            "realized_s": elem_json(&self.realized_s),
            "pairings": qs_json(&self.pairings),
        })
    }
}

/// Nonnegative multipliers `y` on the support weights with `Σ y_α α = 0`.
///
/// With `Σ y = 1` this proves no weight-positive `λ` exists; with every `y_α ≥ 1`
/// it proves that no `λ` is nonnegative on all weights and positive on one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    pub torus: Vec<Element>,
    pub weights: Vec<Vec<Q>>,
    pub multipliers: Vec<Q>,
}

impl DualCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "torus": elems_json(&self.torus),
            "weights": qss_json(&self.weights),
            "multipliers": qs_json(&self.multipliers),
        })
    }

    /// `Σ y_α α = 0` and `y ≥ 0`.
    pub fn balances(&self) -> bool {
        if self.multipliers.len() != self.weights.len() || self.multipliers.iter().any(Signed::is_negative) {
            return false;
        }
        let d = self.torus.len();
        let mut sum = vec![Q::zero(); d];
        for (y, a) in self.multipliers.iter().zip(&self.weights) {
            if a.len() != d {
                return false;
            }
            for (s, x) in sum.iter_mut().zip(a) {
                *s += y * x;
            }
        }
        linalg::is_zero_vec(&sum)
    }
}

fn dim_of_weights(ws: &WeightSupport) -> usize {
    ws.torus_basis.len()
}

/// Columns `[p | m | t]` with `⟨α, p − m⟩ − t_α = rhs_α`.
fn cone_system(ws: &WeightSupport, extra_sum_row: bool) -> (Matrix, Vec<Q>, Vec<Q>) {
    let d = dim_of_weights(ws);
    let w = ws.weights.len();
    let slack = w + usize::from(extra_sum_row);
    let cols = 2 * d + slack;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (a, alpha) in ws.weights.iter().enumerate() {
        let mut row = vec![Q::zero(); cols];
        for j in 0..d {
            row[j] = alpha[j].clone();
            row[d + j] = -alpha[j].clone();
        }
        row[2 * d + a] = -Q::one();
        rows.push(row);
        rhs.push(if extra_sum_row { Q::zero() } else { Q::one() });
    }
    if extra_sum_row {
        let mut row = vec![Q::zero(); cols];
        for alpha in &ws.weights {
            for j in 0..d {
                row[j] += &alpha[j];
                row[d + j] -= &alpha[j];
            }
        }
        row[2 * d + w] = -Q::one();
        rows.push(row);
        rhs.push(Q::one());
    }
    let mut cost = vec![Q::one(); 2 * d];
    cost.extend(std::iter::repeat_n(Q::zero(), slack));
    (Matrix::from_rows(&rows), rhs, cost)
}

fn lambda_from(x: &[Q], d: usize) -> Vec<Q> {
    (0..d).map(|j| &x[j] - &x[d + j]).collect()
}

/// Multipliers `y ≥ 0`, `Σ y = 1`, `Σ y_α α = 0`.
pub fn gordan_certificate(ws: &WeightSupport) -> Option<DualCertificate> {
    let d = dim_of_weights(ws);
    let w = ws.weights.len();
    if w == 0 {
        return None;
    }
    let mut rows: Vec<Vec<Q>> = (0..d)
        .map(|j| ws.weights.iter().map(|a| a[j].clone()).collect())
        .collect();
    rows.push(vec![Q::one(); w]);
    let mut rhs = vec![Q::zero(); d];
    rhs.push(Q::one());
    lp::feasible(&Matrix::from_rows(&rows), &rhs).map(|y| DualCertificate {
        torus: ws.torus_basis.clone(),
        weights: ws.weights.clone(),
        multipliers: y,
    })
}

/// Multipliers `y_α ≥ 1` with `Σ y_α α = 0`.
pub fn stiemke_certificate(ws: &WeightSupport) -> Option<DualCertificate> {
    let d = dim_of_weights(ws);
    let w = ws.weights.len();
    let done = |y: Vec<Q>| DualCertificate {
        torus: ws.torus_basis.clone(),
        weights: ws.weights.clone(),
        multipliers: y,
    };
    if d == 0 || w == 0 {
        return Some(done(vec![Q::one(); w]));
    }
    // y = 1 + z with z ≥ 0.
    let rows: Vec<Vec<Q>> = (0..d)
        .map(|j| ws.weights.iter().map(|a| a[j].clone()).collect())
        .collect();
    let rhs: Vec<Q> = (0..d)
        .map(|j| -ws.weights.iter().map(|a| a[j].clone()).sum::<Q>())
        .collect();
    lp::feasible(&Matrix::from_rows(&rows), &rhs)
        .map(|z| done(z.into_iter().map(|x| x + Q::one()).collect()))
}

/// A `λ` with `⟨α, λ⟩ > 0` on every support weight, cleared to integers and of
/// minimal ℓ¹ norm before clearing; `None` if no such `λ` exists.
///
/// Empty support (the zero vector) yields the zero certificate.
pub fn instability_lp(ws: &WeightSupport) -> Option<OneParameterCertificate> {
    let d = dim_of_weights(ws);
    if ws.weights.is_empty() {
        return Some(OneParameterCertificate::from_lambda(ws, vec![Q::zero(); d]));
    }
    let (a, b, c) = cone_system(ws, false);
    match lp::minimize(&a, &b, &c) {
        LpOutcome::Optimal { x, .. } => {
            let lambda = clear_denominators(&lambda_from(&x, d));
            Some(OneParameterCertificate::from_lambda(ws, lambda))
        }
        _ => None,
    }
}

/// Result of the torus closedness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosednessResult {
    pub closed: bool,
    /// For a non-closed orbit: `λ` nonnegative on all weights and positive on some.
    pub witness: Option<OneParameterCertificate>,
}

/// Whether the torus orbit is closed: true iff 0 lies in the relative interior of
/// the convex hull of the support weights.
pub fn closedness_lp(ws: &WeightSupport) -> ClosednessResult {
    let d = dim_of_weights(ws);
    if ws.weights.is_empty() || d == 0 {
        return ClosednessResult {
            closed: true,
            witness: None,
        };
    }
    let (a, b, c) = cone_system(ws, true);
    match lp::minimize(&a, &b, &c) {
        LpOutcome::Optimal { x, .. } => {
            let lambda = clear_denominators(&lambda_from(&x, d));
            ClosednessResult {
                closed: false,
                witness: Some(OneParameterCertificate::from_lambda(ws, lambda)),
            }
        }
        _ => ClosednessResult {
            closed: true,
            witness: None,
        },
    }
}

/// Destabilizing `λ` or a Gordan certificate; both are cross-checked.
pub fn decide_instability(ws: &WeightSupport) -> Result<std::result::Result<OneParameterCertificate, DualCertificate>> {
    let primal = instability_lp(ws);
    let dual = if ws.weights.is_empty() { None } else { gordan_certificate(ws) };
    match (primal, dual) {
        (Some(p), None) => Ok(Ok(p)),
        (None, Some(d)) => Ok(Err(d)),
        (Some(_), Some(_)) => Err(Error::Internal("weight cone is both stable and unstable".into())),
        (None, None) => Err(Error::Internal("neither a destabilizer nor a Gordan certificate found".into())),
    }
}

/// Degenerating `λ` or a Stiemke certificate; both are cross-checked.
pub fn decide_closedness(ws: &WeightSupport) -> Result<std::result::Result<OneParameterCertificate, DualCertificate>> {
    let primal = closedness_lp(ws);
    let dual = stiemke_certificate(ws);
    match (primal.witness, dual) {
        (Some(p), None) => Ok(Ok(p)),
        (None, Some(d)) => Ok(Err(d)),
        (Some(_), Some(_)) => Err(Error::Internal("torus orbit is both closed and not closed".into())),
        (None, None) => Err(Error::Internal("neither a degeneration nor a Stiemke certificate found".into())),
    }
}

/// Deterministic search parameters for the orbit procedures.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitOptions {
    pub seed: u64,
    pub kn_tol: f64,
    pub kn_max_iter: usize,
    /// Number of random nilpotent conjugations tried before numerical descent.
    pub conjugations: usize,
    /// Random candidates tried per step of the torus search.
    pub torus_attempts: usize,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            seed: 0,
            kn_tol: crate::descent::DEFAULT_TOL,
            kn_max_iter: crate::descent::DEFAULT_MAX_ITER,
            conjugations: 32,
            torus_attempts: 50,
        }
    }
}

/// A Cartan subalgebra of `acting` spanned by rational semisimple elements, if one
/// can be found; the center is always included.
///
/// Grows a commuting family greedily: while the centralizer of the family inside
/// `acting` is non-abelian, adds a non-central rational semisimple element of it.
pub fn split_torus(g: &LieAlgebra, acting: &Subalgebra, seed: u64, attempts: usize) -> Result<Option<Vec<Element>>> {
    let n = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x746f_7275);
    let mut c: Vec<Element> = acting.basis().to_vec();
    for _ in 0..=acting.dim() {
        if all_commute(g, &c) {
            for x in &c {
                match verify_rational_semisimple(g, x) {
                    Ok(_) => {}
                    Err(Error::NotSemisimple) => return Err(Error::NonReductiveActingAlgebra),
                    Err(_) => return Ok(None),
                }
            }
            return Ok(Some(c));
        }
        let central = |x: &Element| c.iter().all(|y| g.bracket_unchecked(x, y).is_zero());
        let good = |x: &Element| !x.is_zero() && !central(x) && verify_rational_semisimple(g, x).is_ok();
        let mut cands: Vec<Element> = c.clone();
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                cands.push(c[i].add(&c[j]));
                cands.push(c[i].sub(&c[j]));
            }
        }
        let mut found = cands.into_iter().find(|x| good(x));
        if found.is_none() {
            for _ in 0..attempts {
                let coeffs: Vec<Q> = (0..c.len()).map(|_| q(rng.gen_range(-3..=3))).collect();
                let x = Element(linalg::combine(&coeffs, &coords_of(&c), n));
                if good(&x) {
                    found = Some(x);
                    break;
                }
            }
        }
        let Some(x) = found else {
            return Ok(None);
        };
        // Centralizer of x inside span(c).
        let ad = g.ad(&x);
        let cols: Vec<Vec<Q>> = c.iter().map(|y| ad.mul_vec(&y.0)).collect();
        let ker = Matrix::from_cols(&cols, n).kernel();
        c = ker
            .iter()
            .map(|k| Element(linalg::combine(k, &coords_of(&c), n)))
            .collect();
    }
    Ok(None)
}

/// Exact `exp(ad x)` for ad-nilpotent `x`.
pub fn exp_ad_nilpotent(g: &LieAlgebra, x: &Element) -> Result<Matrix> {
    let ad = g.ad(x);
    let n = g.dim();
    let mut result = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=n {
        term = term.mul(&ad).scale(&Q::new(1.into(), k.into()));
        if term.is_zero() {
            return Ok(result);
        }
        result = result.add(&term);
    }
    if term.mul(&ad).is_zero() {
        Ok(result)
    } else {
        Err(Error::Internal("exponential of a non-nilpotent element".into()))
    }
}

/// Dimension of the tangent space `{ad X · v : X ∈ acting}` of the orbit at `v`.
pub fn orbit_dimension(g: &LieAlgebra, v: &HomVector, acting: &[Element]) -> usize {
    let cols: Vec<Vec<Q>> = acting
        .iter()
        .map(|x| {
            let ad = g.ad(x);
            v.transform(&ad).flatten()
        })
        .collect();
    if cols.is_empty() {
        return 0;
    }
    linalg::rank_of(&cols, cols[0].len())
}

/// Random ad-nilpotent element of `acting` built from root vectors that are
/// positive for a random generic functional on the torus weights.
fn random_nilpotent(
    g: &LieAlgebra,
    roots: &[(Vec<Q>, Vec<Vec<Q>>)],
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Element> {
    let nonzero: Vec<&(Vec<Q>, Vec<Vec<Q>>)> = roots.iter().filter(|(w, _)| !linalg::is_zero_vec(w)).collect();
    if nonzero.is_empty() {
        return None;
    }
    let phi = loop {
        let phi: Vec<Q> = (0..rank).map(|_| q(rng.gen_range(-100..=100))).collect();
        if nonzero.iter().all(|(w, _)| !linalg::dot(w, &phi).is_zero()) {
            break phi;
        }
    };
    let n = g.dim();
    let positive: Vec<&Vec<Vec<Q>>> = nonzero
        .iter()
        .filter(|(w, _)| linalg::dot(w, &phi).is_positive())
        .map(|(_, b)| b)
        .collect();
    if positive.is_empty() {
        return None;
    }
    loop {
        let mut x = vec![Q::zero(); n];
        for basis in &positive {
            for b in basis.iter() {
                let c = q(rng.gen_range(-2..=2));
                x = linalg::add_vec(&x, &linalg::scale_vec(&c, b));
            }
        }
        if !linalg::is_zero_vec(&x) {
            return Some(Element(x));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitKind {
    ZeroInClosure,
    ZeroNotInClosure,
    Closed,
    NotClosed,
    Undetermined,
}

impl OrbitKind {
    pub fn name(self) -> &'static str {
        match self {
            OrbitKind::ZeroInClosure => "ZeroInClosure",
            OrbitKind::ZeroNotInClosure => "ZeroNotInClosure",
            OrbitKind::Closed => "Closed",
            OrbitKind::NotClosed => "NotClosed",
            OrbitKind::Undetermined => "Undetermined",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Confidence {
    Exact,
    Numerical { tol: f64 },
}

impl Confidence {
    pub fn is_exact(self) -> bool {
        matches!(self, Confidence::Exact)
    }

    pub fn to_json(self) -> serde_json::Value {
        match self {
            Confidence::Exact => json!("exact"),
            Confidence::Numerical { tol } => json!({ "numerical": tol }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitCertificate {
    /// All pairings positive: the orbit closure contains 0.
    Destabilizing(OneParameterCertificate),
    /// Nonnegative pairings, one positive; the limit is a point of smaller orbit
    /// dimension (or, for a torus, a point outside the orbit).
    Degenerating {
        cert: OneParameterCertificate,
        orbit_dim: usize,
        limit_orbit_dim: usize,
    },
    /// Gordan multipliers: no torus `λ` destabilizes.
    Stable(DualCertificate),
    /// Stiemke multipliers: the torus orbit is closed.
    ClosedTorus(DualCertificate),
}

impl OrbitCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            OrbitCertificate::Destabilizing(c) => json!({ "destabilizing": c.to_json() }),
            OrbitCertificate::Degenerating {
                cert,
                orbit_dim,
                limit_orbit_dim,
            } => json!({ "degenerating": {
                "one_parameter": cert.to_json(),
                "orbit_dim": orbit_dim,
                "limit_orbit_dim": limit_orbit_dim,
            }}),
            OrbitCertificate::Stable(d) => json!({ "stable": d.to_json() }),
            OrbitCertificate::ClosedTorus(d) => json!({ "closed_torus": d.to_json() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitVerdict {
    pub kind: OrbitKind,
    pub confidence: Confidence,
    pub certificate: Option<OrbitCertificate>,
    pub descent: Option<DescentResult>,
    /// Names the sub-procedure that fell short when the verdict is not exact.
    pub note: Option<String>,
    pub transcript: Transcript,
}

impl OrbitVerdict {
    fn exact(kind: OrbitKind, certificate: OrbitCertificate, transcript: Transcript) -> Self {
        OrbitVerdict {
            kind,
            confidence: Confidence::Exact,
            certificate: Some(certificate),
            descent: None,
            note: None,
            transcript,
        }
    }
}

struct Context<'a> {
    g: &'a LieAlgebra,
    v: &'a HomVector,
    acting: &'a Subalgebra,
    opts: &'a OrbitOptions,
    torus: Option<Vec<Element>>,
    /// Torus spans the acting algebra, so torus verdicts are final.
    is_torus: bool,
    transcript: Transcript,
}

impl<'a> Context<'a> {
    fn new(g: &'a LieAlgebra, v: &'a HomVector, acting: &'a Subalgebra, opts: &'a OrbitOptions) -> Result<Self> {
        if !is_reductive_in(g, acting.basis()) {
            return Err(Error::NonReductiveActingAlgebra);
        }
        let mut transcript = Transcript::new();
        let torus = split_torus(g, acting, opts.seed, opts.torus_attempts)?;
        let is_torus = torus.as_ref().is_some_and(|t| t.len() == acting.dim());
        match &torus {
            Some(t) => transcript.push(
                "torus",
                json!({ "basis": elems_json(t), "spans_acting_algebra": is_torus }),
            ),
            None => transcript.push(
                "torus",
                json!({ "basis": null, "note": "no split Cartan torus found" }),
            ),
        }
        Ok(Context {
            g,
            v,
            acting,
            opts,
            torus,
            is_torus,
            transcript,
        })
    }

    fn support(&mut self, v: &HomVector, torus: &[Element], label: &str) -> Result<WeightSupport> {
        let ws = weight_support(self.g, v, torus)?;
        self.transcript.push(
            label,
            json!({ "weights": qss_json(&ws.weights) }),
        );
        Ok(ws)
    }

    /// Tries the torus and then conjugated tori for a destabilizing `λ`.
    /// Returns the certificate (in original coordinates) or the Gordan certificate
    /// on the unconjugated torus.
    fn destabilize(&mut self) -> Result<(Option<OneParameterCertificate>, Option<DualCertificate>)> {
        let Some(torus) = self.torus.clone() else {
            return Ok((None, None));
        };
        let ws = self.support(self.v, &torus, "weight_support")?;
        let gordan = match decide_instability(&ws)? {
            Ok(cert) => {
                self.transcript.push("instability_lp", cert.to_json());
                return Ok((Some(cert), None));
            }
            Err(d) => {
                self.transcript.push("gordan_certificate", d.to_json());
                d
            }
        };
        if self.is_torus {
            return Ok((None, Some(gordan)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        let roots = self.acting_roots(&torus)?;
        for attempt in 0..self.opts.conjugations {
            let Some(nil) = random_nilpotent(self.g, &roots, torus.len(), &mut rng) else {
                break;
            };
            // A λ for exp(ad n)·v under T corresponds to exp(−ad n)(T) for v.
            let back = exp_ad_nilpotent(self.g, &nil.scale(&-Q::one()))?;
            let conj_torus: Vec<Element> = torus.iter().map(|t| Element(back.mul_vec(&t.0))).collect();
            let ws = weight_support(self.g, self.v, &conj_torus)?;
            if let Some(cert) = instability_lp(&ws) {
                self.transcript.push(
                    "conjugated_instability_lp",
                    json!({ "attempt": attempt, "conjugator": elem_json(&nil), "certificate": cert.to_json() }),
                );
                return Ok((Some(cert), Some(gordan)));
            }
        }
        self.transcript.push(
            "conjugations",
            json!({ "tried": self.opts.conjugations, "destabilized": false }),
        );
        Ok((None, Some(gordan)))
    }

    fn acting_roots(&self, torus: &[Element]) -> Result<Vec<(Vec<Q>, Vec<Vec<Q>>)>> {
        joint_eigenspaces(self.g, torus, &coords_of(self.acting.basis()))
    }

    fn descent(&mut self) -> Result<DescentResult> {
        let r = kempf_ness_descent(self.g, self.v, self.acting, self.opts.kn_tol, self.opts.kn_max_iter)?;
        self.transcript.push(
            "kempf_ness_descent",
            json!({
                "status": r.status.name(),
                "infimum": r.infimum,
                "iterations": r.iterations,
                "gradient_norm": r.gradient_norm,
                "tolerance": self.opts.kn_tol,
            }),
        );
        Ok(r)
    }

    /// Torus degenerations whose limit has a strictly smaller orbit.
    fn degenerate(&mut self) -> Result<Option<OrbitCertificate>> {
        let Some(torus) = self.torus.clone() else {
            return Ok(None);
        };
        let orbit_dim = orbit_dimension(self.g, self.v, self.acting.basis());
        let mut tori = vec![torus.clone()];
        if !self.is_torus {
            let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed ^ 0x6465_6765);
            let roots = self.acting_roots(&torus)?;
            for _ in 0..self.opts.conjugations {
                let Some(nil) = random_nilpotent(self.g, &roots, torus.len(), &mut rng) else {
                    break;
                };
                let back = exp_ad_nilpotent(self.g, &nil.scale(&-Q::one()))?;
                tori.push(torus.iter().map(|t| Element(back.mul_vec(&t.0))).collect());
            }
        }
        for t in tori {
            let ws = weight_support(self.g, self.v, &t)?;
            let res = closedness_lp(&ws);
            let Some(cert) = res.witness else { continue };
            let limit = limit_point(self.g, self.v, &ws, &cert);
            let limit_dim = orbit_dimension(self.g, &limit, self.acting.basis());
            if self.is_torus || limit_dim < orbit_dim {
                let c = OrbitCertificate::Degenerating {
                    cert,
                    orbit_dim,
                    limit_orbit_dim: limit_dim,
                };
                self.transcript.push("degeneration", c.to_json());
                return Ok(Some(c));
            }
        }
        Ok(None)
    }
}

/// `lim_{τ→0} λ(τ)·v`: the components of zero pairing.
pub fn limit_point(g: &LieAlgebra, v: &HomVector, ws: &WeightSupport, cert: &OneParameterCertificate) -> HomVector {
    let n = g.dim();
    let mut images = vec![Element::zero(n); v.images.len()];
    for (comp, p) in ws.components.iter().zip(&cert.pairings) {
        if p.is_zero() {
            for (o, c) in images.iter_mut().zip(comp) {
                *o = o.add(c);
            }
        }
    }
    HomVector {
        domain_basis: v.domain_basis.clone(),
        images,
        dim: n,
    }
}

/// Does the closure of the orbit of `v` under the group of `acting` contain 0?
pub fn zero_in_orbit_closure(
    g: &LieAlgebra,
    v: &HomVector,
    acting: &Subalgebra,
    opts: &OrbitOptions,
) -> Result<OrbitVerdict> {
    let mut ctx = Context::new(g, v, acting, opts)?;
    if v.is_zero() {
        let ws = WeightSupport {
            ambient_dim: g.dim(),
            torus_basis: ctx.torus.clone().unwrap_or_default(),
            weights: Vec::new(),
            components: Vec::new(),
        };
        let cert = instability_lp(&ws).expect("empty support is unstable");
        return Ok(OrbitVerdict::exact(
            OrbitKind::ZeroInClosure,
            OrbitCertificate::Destabilizing(cert),
            ctx.transcript,
        ));
    }
    let (cert, gordan) = ctx.destabilize()?;
    if let Some(cert) = cert {
        return Ok(OrbitVerdict::exact(
            OrbitKind::ZeroInClosure,
            OrbitCertificate::Destabilizing(cert),
            ctx.transcript,
        ));
    }
    if ctx.is_torus {
        let gordan = gordan.expect("torus was found");
        return Ok(OrbitVerdict::exact(
            OrbitKind::ZeroNotInClosure,
            OrbitCertificate::Stable(gordan),
            ctx.transcript,
        ));
    }
    let r = ctx.descent()?;
    let (kind, note) = match r.status {
        DescentStatus::ConvergedToZero => (
            OrbitKind::ZeroInClosure,
            "descent reached zero but no exact destabilizing one-parameter subgroup was found",
        ),
        DescentStatus::ConvergedToPositiveMin => (
            OrbitKind::ZeroNotInClosure,
            "no destabilizer on the split torus or its sampled conjugates; descent stalled away from zero",
        ),
        DescentStatus::IterationLimit => (OrbitKind::Undetermined, "descent hit the iteration limit"),
    };
    Ok(OrbitVerdict {
        kind,
        confidence: Confidence::Numerical { tol: opts.kn_tol },
        certificate: None,
        descent: Some(r),
        note: Some(note.into()),
        transcript: ctx.transcript,
    })
}

/// Is the orbit of `v` under the group of `acting` closed?
pub fn orbit_closed(g: &LieAlgebra, v: &HomVector, acting: &Subalgebra, opts: &OrbitOptions) -> Result<OrbitVerdict> {
    let mut ctx = Context::new(g, v, acting, opts)?;
    let torus = ctx.torus.clone();
    if v.is_zero() || acting.is_zero() {
        let ws = weight_support(g, v, &torus.unwrap_or_default())?;
        let d = stiemke_certificate(&ws).expect("trivial action is closed");
        return Ok(OrbitVerdict::exact(
            OrbitKind::Closed,
            OrbitCertificate::ClosedTorus(d),
            ctx.transcript,
        ));
    }
    if ctx.is_torus {
        let torus = ctx.torus.clone().expect("torus");
        let ws = ctx.support(v, &torus, "weight_support")?;
        return Ok(match decide_closedness(&ws)? {
            Ok(cert) => {
                let orbit_dim = orbit_dimension(g, v, acting.basis());
                let limit = limit_point(g, v, &ws, &cert);
                let c = OrbitCertificate::Degenerating {
                    limit_orbit_dim: orbit_dimension(g, &limit, acting.basis()),
                    cert,
                    orbit_dim,
                };
                ctx.transcript.push("closedness_lp", c.to_json());
                OrbitVerdict::exact(OrbitKind::NotClosed, c, ctx.transcript)
            }
            Err(d) => {
                ctx.transcript.push("stiemke_certificate", d.to_json());
                OrbitVerdict::exact(OrbitKind::Closed, OrbitCertificate::ClosedTorus(d), ctx.transcript)
            }
        });
    }
    let (cert, _) = ctx.destabilize()?;
    if let Some(cert) = cert {
        return Ok(OrbitVerdict::exact(
            OrbitKind::NotClosed,
            OrbitCertificate::Destabilizing(cert),
            ctx.transcript,
        ));
    }
    if let Some(c) = ctx.degenerate()? {
        return Ok(OrbitVerdict::exact(OrbitKind::NotClosed, c, ctx.transcript));
    }
    let r = ctx.descent()?;
    let (kind, note) = match r.status {
        DescentStatus::ConvergedToPositiveMin => (
            OrbitKind::Closed,
            "no degeneration found; descent attained a positive minimum",
        ),
        DescentStatus::ConvergedToZero => (
            OrbitKind::NotClosed,
            "descent reached zero but no exact destabilizing one-parameter subgroup was found",
        ),
        DescentStatus::IterationLimit => (OrbitKind::Undetermined, "descent hit the iteration limit"),
    };
    Ok(OrbitVerdict {
        kind,
        confidence: Confidence::Numerical { tol: opts.kn_tol },
        certificate: None,
        descent: Some(r),
        note: Some(note.into()),
        transcript: ctx.transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Family;
    use crate::rational::qf;

    fn sl(n: usize) -> LieAlgebra {
        LieAlgebra::classical(Family::Sl, n).unwrap()
    }

    /// Weight support with the given integer weights over `d` abstract torus coordinates.
    fn abstract_support(weights: &[&[i64]], d: usize) -> WeightSupport {
        WeightSupport {
            ambient_dim: 1,
            torus_basis: vec![Element::zero(1); d],
            weights: weights.iter().map(|w| w.iter().map(|&x| q(x)).collect()).collect(),
            components: vec![Vec::new(); weights.len()],
        }
    }

    #[test]
    fn instability_examples() {
        assert_eq!(instability_lp(&abstract_support(&[&[3]], 1)).unwrap().lambda, vec![q(1)]);
        assert!(instability_lp(&abstract_support(&[&[1], &[-1]], 1)).is_none());
        assert_eq!(
            instability_lp(&abstract_support(&[&[2, 1], &[-1, 1]], 2)).unwrap().lambda,
            vec![q(0), q(1)]
        );
    }

    #[test]
    fn closedness_examples() {
        assert!(closedness_lp(&abstract_support(&[&[1], &[-1]], 1)).closed);
        let r = closedness_lp(&abstract_support(&[&[3]], 1));
        assert!(!r.closed);
        assert_eq!(r.witness.unwrap().lambda, vec![q(1)]);
        assert!(closedness_lp(&abstract_support(&[&[0]], 1)).closed);
    }

    #[test]
    fn dual_certificates_balance() {
        let ws = abstract_support(&[&[1], &[-2]], 1);
        let g = gordan_certificate(&ws).unwrap();
        assert!(g.balances());
        assert_eq!(g.multipliers.iter().sum::<Q>(), q(1));
        let s = stiemke_certificate(&ws).unwrap();
        assert!(s.balances());
        assert!(s.multipliers.iter().all(|y| *y >= q(1)));
        assert!(stiemke_certificate(&abstract_support(&[&[1], &[0]], 1)).is_none());
    }

    #[test]
    fn hom_vector_and_weights() {
        let g = sl(3);
        let u = Subalgebra::new(&g, vec![g.named("E13").unwrap(), g.named("E23").unwrap()]).unwrap();
        let v = hom_vector(&g, &u);
        assert_eq!(v.images(), v.domain_basis());
        let t = g.diagonal(&[q(1), q(1), q(-2)]).unwrap();
        let ws = weight_support(&g, &v, &[t]).unwrap();
        assert_eq!(ws.weights, vec![vec![q(3)]]);
        assert_eq!(ws.reconstruct(2), v.images().to_vec());

        let g2 = sl(2);
        let e = Subalgebra::new(&g2, vec![g2.named("E12").unwrap()]).unwrap();
        let v2 = hom_vector(&g2, &e);
        let ws2 = weight_support(&g2, &v2, &[g2.named("H1").unwrap()]).unwrap();
        assert_eq!(ws2.weights, vec![vec![q(2)]]);
        let ws0 = weight_support(&g2, &v2, &[]).unwrap();
        assert_eq!(ws0.weights, vec![Vec::<Q>::new()]);
        assert!(hom_vector(&g2, &Subalgebra::zero(&g2)).is_zero());
    }

    #[test]
    fn non_commuting_torus_is_rejected() {
        let g = sl(2);
        let v = hom_vector(&g, &Subalgebra::new(&g, vec![g.named("E12").unwrap()]).unwrap());
        let h = g.named("H1").unwrap();
        let x = h.add(&g.named("E12").unwrap());
        assert_eq!(
            weight_support(&g, &v, &[h, x]),
            Err(Error::NonCommutingTorus { i: 0, j: 1 })
        );
    }

    #[test]
    fn zero_in_closure_examples() {
        let opts = OrbitOptions::default();
        let g = sl(2);
        let e = Subalgebra::new(&g, vec![g.named("E12").unwrap()]).unwrap();
        let v = hom_vector(&g, &e);
        let r = zero_in_orbit_closure(&g, &v, &Subalgebra::whole(&g), &opts).unwrap();
        assert_eq!(r.kind, OrbitKind::ZeroInClosure);
        assert!(r.confidence.is_exact());
        let Some(OrbitCertificate::Destabilizing(c)) = r.certificate else { panic!() };
        assert_eq!(c.realized_s, g.named("H1").unwrap());

        let r0 = zero_in_orbit_closure(&g, &v, &Subalgebra::zero(&g), &opts).unwrap();
        assert_eq!(r0.kind, OrbitKind::ZeroNotInClosure);
        assert!(r0.confidence.is_exact());

        let g3 = sl(3);
        let u = Subalgebra::new(&g3, vec![g3.named("E13").unwrap(), g3.named("E23").unwrap()]).unwrap();
        let t = g3.diagonal(&[q(1), q(1), q(-2)]).unwrap();
        let acting = Subalgebra::new(&g3, vec![t.clone()]).unwrap();
        let r3 = zero_in_orbit_closure(&g3, &hom_vector(&g3, &u), &acting, &opts).unwrap();
        let Some(OrbitCertificate::Destabilizing(c3)) = r3.certificate else { panic!() };
        assert_eq!(c3.realized_s, t);
    }

    #[test]
    fn closed_orbit_examples() {
        let opts = OrbitOptions::default();
        let g = sl(2);
        let e = Subalgebra::new(&g, vec![g.named("E12").unwrap()]).unwrap();
        let v = hom_vector(&g, &e);
        let torus = Subalgebra::new(&g, vec![g.named("H1").unwrap()]).unwrap();
        let r = orbit_closed(&g, &v, &torus, &opts).unwrap();
        assert_eq!(r.kind, OrbitKind::NotClosed);
        let Some(OrbitCertificate::Degenerating { cert, .. }) = r.certificate else { panic!() };
        assert_eq!(cert.pairings, vec![q(2)]);

        let r0 = orbit_closed(&g, &v, &Subalgebra::zero(&g), &opts).unwrap();
        assert_eq!(r0.kind, OrbitKind::Closed);

        // images e and f under h/2: weights ±1.
        let v2 = HomVector::new(
            &g,
            vec![g.named("E12").unwrap(), g.named("E21").unwrap()],
            vec![g.named("E12").unwrap(), g.named("E21").unwrap()],
        )
        .unwrap();
        let half = Subalgebra::new(&g, vec![g.named("H1").unwrap().scale(&qf(1, 2))]).unwrap();
        let r2 = orbit_closed(&g, &v2, &half, &opts).unwrap();
        assert_eq!(r2.kind, OrbitKind::Closed);
        assert!(r2.confidence.is_exact());
    }

    #[test]
    fn non_abelian_closed_orbit_falls_back_to_descent() {
        // sl2 acting on (e, f): the orbit of the pair is closed (a generic pair).
        let g = sl(2);
        let v = HomVector::new(
            &g,
            vec![g.named("E12").unwrap(), g.named("E21").unwrap()],
            vec![g.named("E12").unwrap(), g.named("E21").unwrap()],
        )
        .unwrap();
        let r = orbit_closed(&g, &v, &Subalgebra::whole(&g), &OrbitOptions::default()).unwrap();
        assert_eq!(r.kind, OrbitKind::Closed);
        assert!(!r.confidence.is_exact());
    }

    #[test]
    fn split_torus_of_sl3() {
        let g = sl(3);
        let t = split_torus(&g, &Subalgebra::whole(&g), 0, 50).unwrap().unwrap();
        assert_eq!(t.len(), 2);
        assert!(all_commute(&g, &t));
    }

    #[test]
    fn nilpotent_exponential_round_trip() {
        let g = sl(3);
        let n = g.named("E12").unwrap().add(&g.named("E23").unwrap().scale(&q(3)));
        let a = exp_ad_nilpotent(&g, &n).unwrap();
        let b = exp_ad_nilpotent(&g, &n.scale(&q(-1))).unwrap();
        assert_eq!(a.mul(&b), Matrix::identity(8));
    }
}
