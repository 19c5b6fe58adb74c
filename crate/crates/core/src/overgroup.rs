//! Is a subalgebra contained in a proper reductive subalgebra?
//!
//! For a small table of ambient algebras every maximal proper reductive
//! subalgebra class has an exact, conjugation-invariant membership test:
//!
//! | ambient          | tests                                                   |
//! |------------------|---------------------------------------------------------|
//! | sl2, sp2, so3    | semisimple centralizer                                  |
//! | sl3              | semisimple centralizer, invariant symmetric form        |
//! | sl4              | semisimple centralizer, invariant symmetric form, invariant alternating form |
//! | sp4              | semisimple centralizer, orthogonal splitting, principal sl2 |
//! | so5              | semisimple centralizer, fixed non-isotropic vector, principal sl2 |
//!
//! A positive test always returns a witness that is re-validated exactly.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{
    acts_nilpotently, centralizer, centralizer_of, check_closed, coords_of, elements_of, is_reductive_in,
    levi_decomposition, Element, Family, LieAlgebra, Subalgebra,
};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::poly::semisimple_part;
use crate::rational::{q, Q};
use crate::transcript::elems_json;

pub const TABLE_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OvergroupStatus {
    NotContained,
    Contained { witness: Vec<Element>, test: String },
    Unknown { reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OvergroupMethod {
    Table,
    UserAssertion,
}

impl OvergroupMethod {
    pub fn name(self) -> &'static str {
        match self {
            OvergroupMethod::Table => "table",
            OvergroupMethod::UserAssertion => "user-assertion",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestOutcome {
    pub test: String,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductiveOvergroupReport {
    pub status: OvergroupStatus,
    pub method: OvergroupMethod,
    pub tests: Vec<TestOutcome>,
}

impl ReductiveOvergroupReport {
    pub fn to_json(&self) -> Value {
        let status = match &self.status {
            OvergroupStatus::NotContained => json!({ "kind": "NotContained" }),
            OvergroupStatus::Contained { witness, test } => {
                json!({ "kind": "Contained", "test": test, "witness": elems_json(witness) })
            }
            OvergroupStatus::Unknown { reason } => json!({ "kind": "Unknown", "reason": reason }),
        };
        json!({
            "status": status,
            "method": self.method.name(),
            "table_version": TABLE_VERSION,
            "tests": self.tests.iter().map(|t| json!({ "test": t.test, "outcome": t.outcome })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Test {
    Centralizer,
    SymmetricForm,
    AlternatingForm,
    OrthogonalSplitting,
    FixedVector,
    PrincipalSl2,
}

impl Test {
    fn name(self) -> &'static str {
        match self {
            Test::Centralizer => "semisimple centralizer",
            Test::SymmetricForm => "invariant symmetric form",
            Test::AlternatingForm => "invariant alternating form",
            Test::OrthogonalSplitting => "orthogonal splitting",
            Test::FixedVector => "fixed non-isotropic vector",
            Test::PrincipalSl2 => "principal sl2",
        }
    }
}

/// Tests that together cover every maximal proper reductive subalgebra, or `None`
/// for an untabulated ambient algebra.
fn table(g: &LieAlgebra) -> Option<&'static [Test]> {
    use Test::*;
    match g.family()? {
        (Family::Sl, 2) | (Family::Sp, 2) | (Family::So, 3) => Some(&[Centralizer]),
        (Family::Sl, 3) => Some(&[Centralizer, SymmetricForm]),
        (Family::Sl, 4) => Some(&[Centralizer, SymmetricForm, AlternatingForm]),
        (Family::Sp, 4) => Some(&[Centralizer, OrthogonalSplitting, PrincipalSl2]),
        (Family::So, 5) => Some(&[Centralizer, FixedVector, PrincipalSl2]),
        _ => None,
    }
}

/// Whether the ambient algebra has a table entry.
pub fn is_tabulated(g: &LieAlgebra) -> bool {
    table(g).is_some()
}

enum Search {
    Found(Vec<Q>),
    IdenticallyZero,
    Inconclusive,
}

/// Looks for a point where a polynomial predicate of per-variable degree at most
/// `deg` holds: unit vectors, then seeded random points, then the full grid
/// `{0..deg}^k` when small enough (a nonzero polynomial cannot vanish on all of it).
fn search_point(k: usize, deg: usize, rng: &mut ChaCha8Rng, pred: impl Fn(&[Q]) -> bool) -> Search {
    if k == 0 {
        return if pred(&[]) { Search::Found(Vec::new()) } else { Search::IdenticallyZero };
    }
    for i in 0..k {
        let mut p = vec![Q::zero(); k];
        p[i] = Q::one();
        if pred(&p) {
            return Search::Found(p);
        }
    }
    for _ in 0..64 {
        let p: Vec<Q> = (0..k).map(|_| q(rng.gen_range(-1000..=1000))).collect();
        if pred(&p) {
            return Search::Found(p);
        }
    }
    let side = deg + 1;
    let total = (side as f64).powi(k as i32);
    if total > 50_000.0 {
        return Search::Inconclusive;
    }
    let mut idx = vec![0usize; k];
    loop {
        let p: Vec<Q> = idx.iter().map(|&x| q(x as i64)).collect();
        if pred(&p) {
            return Search::Found(p);
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Search::IdenticallyZero;
            }
            idx[pos] += 1;
            if idx[pos] < side {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

enum Outcome {
    NotContained(String),
    Contained(Vec<Element>),
    Inconclusive(String),
}

fn matrix_combination(coeffs: &[Q], mats: &[Matrix]) -> Matrix {
    let n = mats[0].rows();
    let mut m = Matrix::zeros(n, n);
    for (c, x) in coeffs.iter().zip(mats) {
        m.add_scaled_assign(c, x);
    }
    m
}

/// Elements of `g` whose defining matrices satisfy the linear condition `f(X) = 0`.
fn elements_where(g: &LieAlgebra, f: impl Fn(&Matrix) -> Matrix) -> Vec<Element> {
    let c = g.classical_data().expect("tabulated algebras are classical");
    let cols: Vec<Vec<Q>> = c.basis_matrices.iter().map(|b| f(b).as_slice().to_vec()).collect();
    let len = cols[0].len();
    elements_of(Matrix::from_cols(&cols, len).kernel())
}

fn centralizer_test(g: &LieAlgebra, h: &Subalgebra, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let z = centralizer(g, h);
    if acts_nilpotently(g, z.basis()) {
        return Ok(Outcome::NotContained("centralizer consists of nilpotent elements".into()));
    }
    let zb = coords_of(z.basis());
    let n = g.dim();
    let found = search_point(z.dim(), n, rng, |c| {
        !g.ad(&Element(linalg::combine(c, &zb, n))).is_nilpotent()
    });
    let Search::Found(c) = found else {
        return Ok(Outcome::Inconclusive("no non-nilpotent centralizer element located".into()));
    };
    let x = Element(linalg::combine(&c, &zb, n));
    let xs = g.semisimple_part(&x)?;
    Ok(Outcome::Contained(centralizer_of(g, &[xs]).basis().to_vec()))
}

fn form_test(g: &LieAlgebra, h: &Subalgebra, symmetric: bool, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = g.classical_data().expect("classical").n;
    // Basis of symmetric or alternating n×n matrices.
    let mut forms = Vec::new();
    for i in 0..n {
        for j in i..n {
            if !symmetric && i == j {
                continue;
            }
            let mut b = Matrix::zeros(n, n);
            b[(i, j)] = Q::one();
            b[(j, i)] = if symmetric { Q::one() } else { -Q::one() };
            forms.push(b);
        }
    }
    let mats: Vec<Matrix> = h.basis().iter().map(|x| g.to_matrix(x).expect("classical")).collect();
    let cols: Vec<Vec<Q>> = forms
        .iter()
        .map(|b| {
            mats.iter()
                .flat_map(|x| x.transpose().mul(b).add(&b.mul(x)).as_slice().to_vec())
                .collect()
        })
        .collect();
    let invariant: Vec<Matrix> = if mats.is_empty() {
        forms.clone()
    } else {
        Matrix::from_cols(&cols, n * n * mats.len())
            .kernel()
            .iter()
            .map(|c| matrix_combination(c, &forms))
            .collect()
    };
    let kind = if symmetric { "symmetric" } else { "alternating" };
    if invariant.is_empty() {
        return Ok(Outcome::NotContained(format!("no invariant {kind} form")));
    }
    match search_point(invariant.len(), n, rng, |c| !matrix_combination(c, &invariant).determinant().is_zero()) {
        Search::Found(c) => {
            let beta = matrix_combination(&c, &invariant);
            Ok(Outcome::Contained(elements_where(g, |x| {
                x.transpose().mul(&beta).add(&beta.mul(x))
            })))
        }
        Search::IdenticallyZero => Ok(Outcome::NotContained(format!("every invariant {kind} form is degenerate"))),
        Search::Inconclusive => Ok(Outcome::Inconclusive(format!("nondegeneracy of invariant {kind} forms undecided"))),
    }
}

/// `sp4`: commuting ω-self-adjoint operators with non-scalar semisimple part.
fn splitting_test(g: &LieAlgebra, h: &Subalgebra, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let c = g.classical_data().expect("classical");
    let n = c.n;
    let j = c.form.clone().expect("sp has a form");
    let mats: Vec<Matrix> = h.basis().iter().map(|x| g.to_matrix(x).expect("classical")).collect();
    let units: Vec<Matrix> = (0..n * n)
        .map(|k| {
            let mut m = Matrix::zeros(n, n);
            m[(k / n, k % n)] = Q::one();
            m
        })
        .collect();
    let cols: Vec<Vec<Q>> = units
        .iter()
        .map(|m| {
            let mut col = m.transpose().mul(&j).sub(&j.mul(m)).as_slice().to_vec();
            for x in &mats {
                col.extend(m.mul(x).sub(&x.mul(m)).as_slice().to_vec());
            }
            col
        })
        .collect();
    let len = cols[0].len();
    let commutant: Vec<Matrix> = Matrix::from_cols(&cols, len)
        .kernel()
        .iter()
        .map(|k| matrix_combination(k, &units))
        .collect();
    let traceless = |m: &Matrix| m.shift(&(m.trace() / q(n as i64)));
    let found = search_point(commutant.len(), n, rng, |k| {
        !traceless(&matrix_combination(k, &commutant)).is_nilpotent()
    });
    match found {
        Search::Found(k) => {
            let ms = semisimple_part(&matrix_combination(&k, &commutant));
            Ok(Outcome::Contained(elements_where(g, |x| x.mul(&ms).sub(&ms.mul(x)))))
        }
        Search::IdenticallyZero => Ok(Outcome::NotContained("no invariant orthogonal splitting".into())),
        Search::Inconclusive => Ok(Outcome::Inconclusive("orthogonal splitting search undecided".into())),
    }
}

/// `so5`: a common null vector of `h` that is not isotropic.
fn fixed_vector_test(g: &LieAlgebra, h: &Subalgebra) -> Result<Outcome> {
    let c = g.classical_data().expect("classical");
    let n = c.n;
    let j = c.form.clone().expect("so has a form");
    let mut rows = Vec::new();
    for x in h.basis() {
        rows.extend(g.to_matrix(x).expect("classical").to_rows());
    }
    let fixed = if rows.is_empty() {
        (0..n).map(|i| Element::basis(n, i).0).collect()
    } else {
        Matrix::from_rows(&rows).kernel()
    };
    let norm = |v: &[Q]| linalg::dot(v, &j.mul_vec(v));
    let mut cands: Vec<Vec<Q>> = fixed.clone();
    for a in 0..fixed.len() {
        for b in a + 1..fixed.len() {
            cands.push(linalg::add_vec(&fixed[a], &fixed[b]));
        }
    }
    match cands.into_iter().find(|v| !norm(v).is_zero()) {
        Some(v) => Ok(Outcome::Contained(elements_where(g, |x| {
            Matrix::from_cols(&[x.mul_vec(&v)], n)
        }))),
        None => Ok(Outcome::NotContained("every fixed vector is isotropic".into())),
    }
}

/// Solves `[e, f] = h0`, `[h0, f] = −2f` for `f`.
fn complete_triple(g: &LieAlgebra, e: &Element, h0: &Element) -> Option<Element> {
    let n = g.dim();
    let ad_e = g.ad(e);
    let ad_h = g.ad(h0);
    let mut rows = ad_e.to_rows();
    rows.extend(ad_h.shift(&q(-2)).to_rows());
    let mut rhs = h0.0.clone();
    rhs.extend(vec![Q::zero(); n]);
    Matrix::from_rows(&rows).solve(&rhs).map(Element)
}

fn principal_test(g: &LieAlgebra, h: &Subalgebra, rank: usize) -> Result<Outcome> {
    let (levi, unip) = levi_decomposition(g, h)?;
    if unip.dim() != 1 || h.dim() > 2 {
        return Ok(Outcome::NotContained("not a nonreductive subalgebra of an sl2".into()));
    }
    let e = unip.basis()[0].clone();
    if centralizer_of(g, std::slice::from_ref(&e)).dim() != rank {
        return Ok(Outcome::NotContained("nilpotent part is not principal".into()));
    }
    let n = g.dim();
    let ad_e = g.ad(&e);
    let image: Vec<Vec<Q>> = (0..n).map(|i| ad_e.col(i)).collect();
    let h0 = match levi.basis().first() {
        None => {
            // [[e, y], e] = 2e: h0 = [e, y].
            let sys = g.ad(&e).mul(&ad_e).scale(&q(-1));
            let Some(y) = sys.solve(&e.0.iter().map(|x| x * q(2)).collect::<Vec<_>>()) else {
                return Ok(Outcome::Inconclusive("no neutral element for a principal nilpotent".into()));
            };
            Element(ad_e.mul_vec(&y))
        }
        Some(x) => {
            let bx = g.bracket(x, &e)?;
            let Some(c) = linalg::coordinates(&[e.0.clone()], &bx.0, n).map(|v| v[0].clone()) else {
                return Ok(Outcome::NotContained("levi element does not normalize the nilpotent line".into()));
            };
            if c.is_zero() {
                return Ok(Outcome::NotContained("levi element centralizes the nilpotent line".into()));
            }
            let h0 = x.scale(&(q(2) / c));
            if !linalg::span_contains(&image, &h0.0, n) {
                return Ok(Outcome::NotContained("neutral element is not in the image of ad e".into()));
            }
            h0
        }
    };
    match complete_triple(g, &e, &h0) {
        Some(f) => Ok(Outcome::Contained(vec![e, h0, f])),
        None => Ok(Outcome::Inconclusive("sl2 triple could not be completed".into())),
    }
}

fn validate_witness(g: &LieAlgebra, h: &Subalgebra, w: &[Element]) -> Result<()> {
    let n = g.dim();
    let wc = coords_of(w);
    let ok = linalg::is_independent(&wc, n)
        && w.len() < n
        && linalg::span_contains_all(&wc, &coords_of(h.basis()), n)
        && check_closed(g, w).is_ok()
        && is_reductive_in(g, w);
    if ok {
        Ok(())
    } else {
        Err(Error::Internal("reductive overgroup witness failed validation".into()))
    }
}

/// Decides whether `h` lies in a proper reductive subalgebra of `g`.
pub fn not_in_proper_reductive(g: &LieAlgebra, h: &Subalgebra, assert_not_contained: bool, seed: u64) -> Result<ReductiveOvergroupReport> {
    if assert_not_contained {
        return Ok(ReductiveOvergroupReport {
            status: OvergroupStatus::NotContained,
            method: OvergroupMethod::UserAssertion,
            tests: Vec::new(),
        });
    }
    let report = |status, tests| ReductiveOvergroupReport {
        status,
        method: OvergroupMethod::Table,
        tests,
    };
    if h.is_whole() {
        return Ok(report(OvergroupStatus::NotContained, Vec::new()));
    }
    let (_, unip) = levi_decomposition(g, h)?;
    if unip.is_zero() {
        return Ok(report(
            OvergroupStatus::Contained {
                witness: h.basis().to_vec(),
                test: "subalgebra is itself reductive".into(),
            },
            Vec::new(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6f76_6572);
    let mut tests = Vec::new();
    let tabulated = table(g);
    let list: &[Test] = tabulated.unwrap_or(&[Test::Centralizer]);
    let mut inconclusive = None;
    for &t in list {
        let outcome = match t {
            Test::Centralizer => centralizer_test(g, h, &mut rng)?,
            Test::SymmetricForm => form_test(g, h, true, &mut rng)?,
            Test::AlternatingForm => form_test(g, h, false, &mut rng)?,
            Test::OrthogonalSplitting => splitting_test(g, h, &mut rng)?,
            Test::FixedVector => fixed_vector_test(g, h)?,
            Test::PrincipalSl2 => principal_test(g, h, 2)?,
        };
        match outcome {
            Outcome::NotContained(why) => tests.push(TestOutcome {
                test: t.name().into(),
                outcome: format!("not contained: {why}"),
            }),
            Outcome::Contained(witness) => {
                validate_witness(g, h, &witness)?;
                tests.push(TestOutcome {
                    test: t.name().into(),
                    outcome: "contained".into(),
                });
                return Ok(report(
                    OvergroupStatus::Contained {
                        witness,
                        test: t.name().into(),
                    },
                    tests,
                ));
            }
            Outcome::Inconclusive(why) => {
                tests.push(TestOutcome {
                    test: t.name().into(),
                    outcome: format!("inconclusive: {why}"),
                });
                inconclusive.get_or_insert(why);
            }
        }
    }
    let status = match (tabulated, inconclusive) {
        (None, _) => OvergroupStatus::Unknown {
            reason: "ambient algebra has no reductive-overgroup table entry".into(),
        },
        (Some(_), Some(why)) => OvergroupStatus::Unknown { reason: why },
        (Some(_), None) => OvergroupStatus::NotContained,
    };
    Ok(report(status, tests))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(f: Family, n: usize) -> LieAlgebra {
        LieAlgebra::classical(f, n).unwrap()
    }

    fn status(g: &LieAlgebra, basis: Vec<Element>) -> OvergroupStatus {
        let h = Subalgebra::new(g, basis).unwrap();
        not_in_proper_reductive(g, &h, false, 0).unwrap().status
    }

    #[test]
    fn sl2_borel_not_contained() {
        let g = alg(Family::Sl, 2);
        let b = vec![g.named("E12").unwrap(), g.named("H1").unwrap()];
        assert_eq!(status(&g, b), OvergroupStatus::NotContained);
    }

    #[test]
    fn sl2_torus_is_its_own_witness() {
        let g = alg(Family::Sl, 2);
        let h = g.named("H1").unwrap();
        match status(&g, vec![h.clone()]) {
            OvergroupStatus::Contained { witness, .. } => assert_eq!(witness, vec![h]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sl2_nilpotent_line_not_contained() {
        // The centralizer of ⟨e⟩ is ⟨e⟩.
        let g = alg(Family::Sl, 2);
        assert_eq!(status(&g, vec![g.named("E12").unwrap()]), OvergroupStatus::NotContained);
    }

    #[test]
    fn sl3_parabolic_not_contained() {
        let g = alg(Family::Sl, 3);
        let n = |s: &str| g.named(s).unwrap();
        let p = vec![n("E12"), n("H1"), n("E21"), n("H2"), n("E13"), n("E23")];
        assert_eq!(status(&g, p), OvergroupStatus::NotContained);
    }

    #[test]
    fn sl3_root_line_lies_in_levi() {
        // ⟨E12⟩ commutes with diag(1,1,-2).
        let g = alg(Family::Sl, 3);
        match status(&g, vec![g.named("E12").unwrap()]) {
            OvergroupStatus::Contained { test, .. } => assert_eq!(test, "semisimple centralizer"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sl3_principal_borel_lies_in_so3() {
        // Borel of the principal sl2: ⟨diag(1,0,-1), E12 + E23⟩.
        let g = alg(Family::Sl, 3);
        let x = g.diagonal(&[q(1), q(0), q(-1)]).unwrap();
        let e = g.named("E12").unwrap().add(&g.named("E23").unwrap());
        match status(&g, vec![x, e]) {
            OvergroupStatus::Contained { test, witness } => {
                assert_eq!(test, "invariant symmetric form");
                assert_eq!(witness.len(), 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sp4_principal_line() {
        let g = alg(Family::Sp, 4);
        // Principal nilpotent: sum of simple root vectors.
        let m = Matrix::from_rows(&[
            vec![q(0), q(1), q(0), q(0)],
            vec![q(0), q(0), q(1), q(0)],
            vec![q(0), q(0), q(0), q(-1)],
            vec![q(0), q(0), q(0), q(0)],
        ]);
        let e = g.from_matrix(&m).expect("element of sp4");
        match status(&g, vec![e]) {
            OvergroupStatus::Contained { test, .. } => assert_eq!(test, "principal sl2"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn so5_borel_not_contained() {
        let g = alg(Family::So, 5);
        let upper: Vec<Element> = (0..g.dim())
            .filter(|&i| {
                let l = &g.labels()[i];
                let b = l.as_bytes();
                b[1] <= b[2]
            })
            .map(|i| g.basis_element(i))
            .collect();
        assert_eq!(upper.len(), 6);
        assert_eq!(status(&g, upper), OvergroupStatus::NotContained);
    }

    #[test]
    fn user_assertion_overrides() {
        let g = alg(Family::Sl, 2);
        let h = Subalgebra::new(&g, vec![g.named("H1").unwrap()]).unwrap();
        let r = not_in_proper_reductive(&g, &h, true, 0).unwrap();
        assert_eq!(r.status, OvergroupStatus::NotContained);
        assert_eq!(r.method, OvergroupMethod::UserAssertion);
    }
}
