//! Eigenspace gradings of the ambient algebra by rational semisimple elements.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::algebra::{coords_of, elements_of, levi_decomposition, Element, LieAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::poly::{charpoly, Poly};
use crate::rational::Q;

/// Distinct eigenvalues of `ad s`, ascending, after checking that `ad s` is
/// diagonalizable with rational spectrum.
pub fn verify_rational_semisimple(g: &LieAlgebra, s: &Element) -> Result<Vec<Q>> {
    g.check(&s.0)?;
    eigenvalues_of(&g.ad(s))
}

pub(crate) fn eigenvalues_of(a: &Matrix) -> Result<Vec<Q>> {
    let p = charpoly(a).squarefree_part();
    if !p.eval_matrix(a).is_zero() {
        return Err(Error::NotSemisimple);
    }
    let roots = p.rational_roots();
    if roots.len() < p.degree() {
        let mut rest = p.clone();
        for r in &roots {
            rest = rest.div_rem(&Poly::linear_root(r)).0;
        }
        return Err(Error::IrrationalEigenvalue {
            factor_degree: rest.degree(),
        });
    }
    Ok(roots)
}

/// The decomposition `g = ⊕ g_i` into eigenspaces of `ad s`, with the derived
/// subalgebras `p_s = ⊕_{i≥0} g_i`, `q_s = {p ∈ p_s : (p, s) = 0}` and `n_s = ⊕_{i>0} g_i`.
#[derive(Clone, Debug)]
pub struct RationalGrading {
    pub s: Element,
    /// Eigenvalue to eigenspace basis, ascending by eigenvalue.
    pub pieces: BTreeMap<Q, Vec<Element>>,
    pub p_basis: Vec<Element>,
    pub q_basis: Vec<Element>,
    pub n_basis: Vec<Element>,
}

impl RationalGrading {
    pub fn eigenvalues(&self) -> Vec<Q> {
        self.pieces.keys().cloned().collect()
    }

    pub fn piece_dims(&self) -> Vec<(Q, usize)> {
        self.pieces.iter().map(|(k, v)| (k.clone(), v.len())).collect()
    }

    pub fn piece(&self, i: &Q) -> &[Element] {
        self.pieces.get(i).map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn grade(g: &LieAlgebra, s: &Element) -> Result<RationalGrading> {
    let eig = verify_rational_semisimple(g, s)?;
    let ad = g.ad(s);
    let mut pieces = BTreeMap::new();
    for i in &eig {
        pieces.insert(i.clone(), elements_of(ad.shift(i).kernel()));
    }
    let total: usize = pieces.values().map(Vec::len).sum();
    if total != g.dim() {
        return Err(Error::Internal("eigenspaces do not fill the algebra".into()));
    }
    let mut p_basis = Vec::new();
    let mut n_basis = Vec::new();
    for (i, b) in &pieces {
        if !i.is_negative() {
            p_basis.extend(b.iter().cloned());
        }
        if i.is_positive() {
            n_basis.extend(b.iter().cloned());
        }
    }
    // (g_i, s) = 0 for i ≠ 0, so only the zero piece is cut down.
    let zero_piece = pieces.get(&Q::zero()).cloned().unwrap_or_default();
    let row = g.killing_row(s);
    let mut q_basis = if zero_piece.is_empty() {
        Vec::new()
    } else {
        let pairing: Vec<Q> = zero_piece.iter().map(|z| linalg::dot(&row, &z.0)).collect();
        let ker = Matrix::from_rows(&[pairing]).kernel();
        ker.iter()
            .map(|c| Element(linalg::combine(c, &coords_of(&zero_piece), g.dim())))
            .collect()
    };
    q_basis.extend(n_basis.iter().cloned());
    Ok(RationalGrading {
        s: s.clone(),
        pieces,
        p_basis,
        q_basis,
        n_basis,
    })
}

/// Outcome of checking `h ⊆ q_s` and `R_u(h) ⊆ n_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SukhanovReport {
    pub h_in_q: bool,
    pub radical_in_n: bool,
    pub eigenvalues: Vec<Q>,
}

impl SukhanovReport {
    pub fn holds(&self) -> bool {
        self.h_in_q && self.radical_in_n
    }

    pub fn failure(&self) -> Option<&'static str> {
        match (self.h_in_q, self.radical_in_n) {
            (true, true) => None,
            (false, true) => Some("subalgebra is not contained in q_s"),
            (true, false) => Some("unipotent radical is not contained in n_s"),
            (false, false) => Some("subalgebra not in q_s and unipotent radical not in n_s"),
        }
    }
}

/// Checks the two containments certifying observability for a given `s`.
///
/// The unipotent radical comes from the subalgebra's declared split when present,
/// otherwise from [`levi_decomposition`].
pub fn sukhanov_certificate_check(g: &LieAlgebra, h: &Subalgebra, s: &Element) -> Result<SukhanovReport> {
    let (_, unip) = levi_decomposition(g, h)?;
    sukhanov_check_spans(g, h.basis(), unip.basis(), s)
}

pub(crate) fn sukhanov_check_spans(
    g: &LieAlgebra,
    h: &[Element],
    radical: &[Element],
    s: &Element,
) -> Result<SukhanovReport> {
    let gr = grade(g, s)?;
    let n = g.dim();
    Ok(SukhanovReport {
        h_in_q: linalg::span_contains_all(&coords_of(&gr.q_basis), &coords_of(h), n),
        radical_in_n: linalg::span_contains_all(&coords_of(&gr.n_basis), &coords_of(radical), n),
        eigenvalues: gr.eigenvalues(),
    })
}
