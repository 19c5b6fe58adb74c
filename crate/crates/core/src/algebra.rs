//! Semisimple Lie algebras over ℚ given by structure constants, their elements
//! and subalgebras.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, Matrix};
use crate::poly;
use crate::rational::{fmt_q, Q};

/// One nonzero structure constant `c[k][i][j]`: `[b_i, b_j]` has coefficient `c` on `b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstant {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub c: Q,
}

/// Classical matrix families available through [`LieAlgebra::classical`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Sl,
    So,
    Sp,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sl => "sl",
            Family::So => "so",
            Family::Sp => "sp",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "sl" => Some(Family::Sl),
            "so" => Some(Family::So),
            "sp" => Some(Family::Sp),
            _ => None,
        }
    }

    /// Dimension of the algebra for matrix size `n`, if the parameter is supported.
    pub fn dim(self, n: usize) -> Option<usize> {
        match self {
            Family::Sl if n >= 2 => Some(n * n - 1),
            Family::So if n >= 3 => Some(n * (n - 1) / 2),
            Family::Sp if n >= 2 && n % 2 == 0 => Some(n * (n + 1) / 2),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Defining matrix representation of a classical algebra.
#[derive(Clone, Debug)]
pub struct Classical {
    pub family: Family,
    pub n: usize,
    /// Image of each basis vector as an `n × n` matrix.
    pub basis_matrices: Vec<Matrix>,
    /// Invariant form `J` with `Xᵀ J + J X = 0` (identity-free for `sl`).
    pub form: Option<Matrix>,
    /// Rows of the flattened basis matrices forming an invertible block, and that block's inverse.
    pivot_rows: Vec<usize>,
    pivot_inverse: Matrix,
}

#[derive(Debug)]
struct Inner {
    dim: usize,
    labels: Vec<String>,
    constants: Vec<StructureConstant>,
    /// `ad[i]` is the matrix of `ad b_i`; column `j` holds `[b_i, b_j]`.
    ad: Vec<Matrix>,
    killing: Matrix,
    classical: Option<Classical>,
}

/// A semisimple Lie algebra with validated structure constants.
///
/// Cheap to clone; ad-matrices and the Killing form are computed at construction.
#[derive(Clone, Debug)]
pub struct LieAlgebra(Arc<Inner>);

/// An element of the ambient algebra in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub Vec<Q>);

impl Element {
    pub fn zero(dim: usize) -> Self {
        Element(vec![Q::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![Q::zero(); dim];
        v[i] = Q::one();
        Element(v)
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.0)
    }

    pub fn add(&self, other: &Element) -> Element {
        Element(linalg::add_vec(&self.0, &other.0))
    }

    pub fn sub(&self, other: &Element) -> Element {
        Element(linalg::sub_vec(&self.0, &other.0))
    }

    pub fn scale(&self, c: &Q) -> Element {
        Element(linalg::scale_vec(c, &self.0))
    }
}

pub(crate) fn coords_of(elems: &[Element]) -> Vec<Vec<Q>> {
    elems.iter().map(|e| e.0.clone()).collect()
}

pub(crate) fn elements_of(vecs: Vec<Vec<Q>>) -> Vec<Element> {
    vecs.into_iter().map(Element).collect()
}

impl LieAlgebra {
    /// Validates a sparse structure-constant table and builds the algebra.
    ///
    /// Entries are quadruples `(k, i, j, c)`; unspecified constants are zero and
    /// repeated entries for the same `(k, i, j)` are summed.
    pub fn from_structure_constants(
        dim: usize,
        entries: &[(usize, usize, usize, Q)],
        labels: Vec<String>,
    ) -> Result<Self> {
        Self::build(dim, entries, labels, None)
    }

    fn build(
        dim: usize,
        entries: &[(usize, usize, usize, Q)],
        labels: Vec<String>,
        classical: Option<Classical>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if labels.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: labels.len(),
            });
        }
        let mut table = vec![Q::zero(); dim * dim * dim];
        let at = |k: usize, i: usize, j: usize| (k * dim + i) * dim + j;
        for (k, i, j, c) in entries {
            if *k >= dim || *i >= dim || *j >= dim {
                return Err(Error::IndexOutOfRange(format!(
                    "({k}, {i}, {j}) with dim {dim}"
                )));
            }
            table[at(*k, *i, *j)] += c;
        }
        for k in 0..dim {
            for i in 0..dim {
                for j in i..dim {
                    if table[at(k, i, j)] != -table[at(k, j, i)].clone() {
                        return Err(Error::AntisymmetryViolation { k, i, j });
                    }
                }
            }
        }
        let mut ad = vec![Matrix::zeros(dim, dim); dim];
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    let c = &table[at(k, i, j)];
                    if !c.is_zero() {
                        ad[i][(k, j)] = c.clone();
                    }
                }
            }
        }
        let mut constants = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in 0..dim {
                    let c = &table[at(k, i, j)];
                    if !c.is_zero() {
                        constants.push(StructureConstant {
                            k,
                            i,
                            j,
                            c: c.clone(),
                        });
                    }
                }
            }
        }
        // Jacobi: [b_i,[b_j,b_l]] + [b_j,[b_l,b_i]] + [b_l,[b_i,b_j]] = 0.
        for i in 0..dim {
            for j in i + 1..dim {
                for l in j + 1..dim {
                    let t1 = ad[i].mul_vec(&ad[j].col(l));
                    let t2 = ad[j].mul_vec(&ad[l].col(i));
                    let t3 = ad[l].mul_vec(&ad[i].col(j));
                    let s = linalg::add_vec(&linalg::add_vec(&t1, &t2), &t3);
                    if !linalg::is_zero_vec(&s) {
                        return Err(Error::JacobiViolation { i, j, l });
                    }
                }
            }
        }
        let mut killing = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = ad[i].mul(&ad[j]).trace();
                killing[(i, j)] = v.clone();
                killing[(j, i)] = v;
            }
        }
        let ker = killing.kernel();
        if let Some(w) = ker.first() {
            let witness = w
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, _)| i)
                .collect();
            return Err(Error::DegenerateKillingForm { witness });
        }
        Ok(LieAlgebra(Arc::new(Inner {
            dim,
            labels,
            constants,
            ad,
            killing,
            classical,
        })))
    }

    /// `sl_n`, `so_n` or `sp_n` from the defining matrix representation.
    ///
    /// `so` and `sp` use the split forms with anti-diagonal Gram matrix so that the
    /// diagonal matrices form a Cartan subalgebra. Basis order: strictly upper
    /// triangular root vectors (row-major), diagonal elements, strictly lower ones.
    pub fn classical(family: Family, n: usize) -> Result<Self> {
        let unsupported = || Error::UnsupportedParameter {
            family: family.name().to_string(),
            n,
        };
        let dim = family.dim(n).ok_or_else(unsupported)?;
        let unit = |i: usize, j: usize| {
            let mut m = Matrix::zeros(n, n);
            m[(i, j)] = Q::one();
            m
        };
        let (mut upper, mut diag, mut lower) = (Vec::new(), Vec::new(), Vec::new());
        let form;
        match family {
            Family::Sl => {
                form = None;
                for i in 0..n {
                    for j in 0..n {
                        if i < j {
                            upper.push((format!("E{}{}", i + 1, j + 1), unit(i, j)));
                        } else if i > j {
                            lower.push((format!("E{}{}", i + 1, j + 1), unit(i, j)));
                        }
                    }
                }
                for i in 0..n - 1 {
                    let h = unit(i, i).sub(&unit(i + 1, i + 1));
                    diag.push((format!("H{}", i + 1), h));
                }
            }
            Family::So | Family::Sp => {
                let mut j = Matrix::zeros(n, n);
                for i in 0..n {
                    let sign = if family == Family::Sp && i >= n / 2 {
                        -Q::one()
                    } else {
                        Q::one()
                    };
                    j[(i, n - 1 - i)] = sign;
                }
                let jinv = j.inverse().expect("form is invertible");
                let mut seen = Echelon::new(n * n);
                for a in 0..n {
                    for b in 0..n {
                        // Projection of E_ab onto the algebra: E_ab - J⁻¹ E_abᵀ J.
                        let e = unit(a, b);
                        let m = e.sub(&jinv.mul(&e.transpose()).mul(&j));
                        if m.is_zero() || !seen.insert(m.as_slice()) {
                            continue;
                        }
                        let label = format!("X{}{}", a + 1, b + 1);
                        match a.cmp(&b) {
                            std::cmp::Ordering::Less => upper.push((label, m)),
                            std::cmp::Ordering::Equal => diag.push((label, m)),
                            std::cmp::Ordering::Greater => lower.push((label, m)),
                        }
                    }
                }
                form = Some(j);
            }
        }
        let named: Vec<(String, Matrix)> = upper.into_iter().chain(diag).chain(lower).collect();
        if named.len() != dim {
            return Err(Error::Internal(format!(
                "classical {family}{n}: built {} basis matrices, expected {dim}",
                named.len()
            )));
        }
        let (labels, mats): (Vec<String>, Vec<Matrix>) = named.into_iter().unzip();
        let flat: Vec<Vec<Q>> = mats.iter().map(|m| m.as_slice().to_vec()).collect();
        let b = Matrix::from_cols(&flat, n * n);
        let (_, pivot_rows) = b.transpose().rref();
        let block = Matrix::from_rows(
            &pivot_rows
                .iter()
                .map(|&r| b.row(r).to_vec())
                .collect::<Vec<_>>(),
        );
        let pivot_inverse = block
            .inverse()
            .ok_or_else(|| Error::Internal("classical basis is not independent".into()))?;
        let data = Classical {
            family,
            n,
            basis_matrices: mats,
            form,
            pivot_rows,
            pivot_inverse,
        };
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let bi = &data.basis_matrices[i];
                let bj = &data.basis_matrices[j];
                let br = bi.mul(bj).sub(&bj.mul(bi));
                let c = data
                    .coords_of_matrix(&br)
                    .ok_or_else(|| Error::Internal("bracket left the matrix algebra".into()))?;
                for (k, x) in c.into_iter().enumerate() {
                    if !x.is_zero() {
                        entries.push((k, j, i, -x.clone()));
                        entries.push((k, i, j, x));
                    }
                }
            }
        }
        Self::build(dim, &entries, labels, Some(data))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    /// Nonzero structure constants with `i < j`.
    pub fn structure_constants(&self) -> &[StructureConstant] {
        &self.0.constants
    }

    pub fn classical_data(&self) -> Option<&Classical> {
        self.0.classical.as_ref()
    }

    /// `(family, n)` when built by [`LieAlgebra::classical`].
    pub fn family(&self) -> Option<(Family, usize)> {
        self.0.classical.as_ref().map(|c| (c.family, c.n))
    }

    pub fn killing_matrix(&self) -> &Matrix {
        &self.0.killing
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element::basis(self.dim(), i)
    }

    /// Basis element by label.
    pub fn named(&self, label: &str) -> Option<Element> {
        self.labels()
            .iter()
            .position(|l| l == label)
            .map(|i| self.basis_element(i))
    }

    pub fn element(&self, coords: Vec<Q>) -> Result<Element> {
        self.check(&coords)?;
        Ok(Element(coords))
    }

    pub(crate) fn check(&self, coords: &[Q]) -> Result<()> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: coords.len(),
            });
        }
        Ok(())
    }

    /// Matrix of `ad x` in the ambient basis.
    pub fn ad(&self, x: &Element) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, c) in x.0.iter().enumerate() {
            m.add_scaled_assign(c, &self.0.ad[i]);
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> &Matrix {
        &self.0.ad[i]
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(&x.0)?;
        self.check(&y.0)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Element, y: &Element) -> Element {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let ad = &self.0.ad[i];
            for (j, yj) in y.0.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let a = &ad[(k, j)];
                    if !a.is_zero() {
                        *o += &c * a;
                    }
                }
            }
        }
        Element(out)
    }

    /// Cartan–Killing form `trace(ad x ∘ ad y)`.
    pub fn killing(&self, x: &Element, y: &Element) -> Result<Q> {
        self.check(&x.0)?;
        self.check(&y.0)?;
        Ok(self.killing_unchecked(x, y))
    }

    pub(crate) fn killing_unchecked(&self, x: &Element, y: &Element) -> Q {
        linalg::dot(&x.0, &self.0.killing.mul_vec(&y.0))
    }

    /// Linear functional `y ↦ (x, y)` as a row vector.
    pub(crate) fn killing_row(&self, x: &Element) -> Vec<Q> {
        self.0.killing.mul_vec(&x.0)
    }

    /// Whether `ad x` is nilpotent.
    pub fn is_ad_nilpotent(&self, x: &Element) -> bool {
        self.ad(x).is_nilpotent()
    }

    /// Whether `ad x` is diagonalizable over the algebraic closure.
    pub fn is_ad_semisimple(&self, x: &Element) -> bool {
        poly::is_semisimple_matrix(&self.ad(x))
    }

    /// Semisimple part `x_s` of the abstract Jordan decomposition `x = x_s + x_n`.
    pub fn semisimple_part(&self, x: &Element) -> Result<Element> {
        let s = poly::semisimple_part(&self.ad(x));
        // ad is injective on a semisimple algebra, so solve ad(y) = s.
        let n = self.dim();
        let cols: Vec<Vec<Q>> = (0..n).map(|i| self.0.ad[i].as_slice().to_vec()).collect();
        let sys = Matrix::from_cols(&cols, n * n);
        sys.solve(s.as_slice())
            .map(Element)
            .ok_or_else(|| Error::Internal("semisimple part of ad x is not inner".into()))
    }

    /// Defining-representation matrix of an element (classical algebras only).
    pub fn to_matrix(&self, x: &Element) -> Option<Matrix> {
        let c = self.classical_data()?;
        let mut m = Matrix::zeros(c.n, c.n);
        for (xi, b) in x.0.iter().zip(&c.basis_matrices) {
            m.add_scaled_assign(xi, b);
        }
        Some(m)
    }

    /// Element with the given defining matrix, if the matrix lies in the algebra.
    pub fn from_matrix(&self, m: &Matrix) -> Option<Element> {
        self.classical_data()?.coords_of_matrix(m).map(Element)
    }

    /// Convenience: element from an integer matrix given row by row.
    pub fn from_int_matrix(&self, rows: &[&[i64]]) -> Option<Element> {
        let m = Matrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| crate::rational::q(x)).collect())
                .collect::<Vec<_>>(),
        );
        self.from_matrix(&m)
    }

    /// Diagonal element `diag(d_1, …, d_n)` of a classical algebra.
    pub fn diagonal(&self, d: &[Q]) -> Option<Element> {
        let n = self.classical_data()?.n;
        if d.len() != n {
            return None;
        }
        let mut m = Matrix::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        self.from_matrix(&m)
    }

    /// Human-readable linear combination of basis labels.
    pub fn format_element(&self, x: &Element) -> String {
        let mut parts = Vec::new();
        for (c, l) in x.0.iter().zip(self.labels()) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let term = if mag.is_one() {
                l.clone()
            } else {
                format!("{}*{}", fmt_q(&mag), l)
            };
            parts.push((sign, term));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (sign, term)) in parts.into_iter().enumerate() {
            if k == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(if sign == "-" { " - " } else { " + " });
            }
            s.push_str(&term);
        }
        s
    }
}

impl Classical {
    fn coords_of_matrix(&self, m: &Matrix) -> Option<Vec<Q>> {
        let flat = m.as_slice();
        let rhs: Vec<Q> = self.pivot_rows.iter().map(|&r| flat[r].clone()).collect();
        let c = self.pivot_inverse.mul_vec(&rhs);
        let mut back = Matrix::zeros(self.n, self.n);
        for (ci, b) in c.iter().zip(&self.basis_matrices) {
            back.add_scaled_assign(ci, b);
        }
        (back == *m).then_some(c)
    }
}

/// A bracket-closed subspace of a [`LieAlgebra`], optionally carrying a Levi split.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    ambient: LieAlgebra,
    basis: Vec<Element>,
    levi_part: Option<Vec<Element>>,
    unipotent_radical: Option<Vec<Element>>,
}

impl Subalgebra {
    /// Validates independence and bracket closure.
    pub fn new(ambient: &LieAlgebra, basis: Vec<Element>) -> Result<Self> {
        let n = ambient.dim();
        for b in &basis {
            ambient.check(&b.0)?;
        }
        if !linalg::is_independent(&coords_of(&basis), n) {
            return Err(Error::LinearDependence);
        }
        check_closed(ambient, &basis)?;
        Ok(Subalgebra {
            ambient: ambient.clone(),
            basis,
            levi_part: None,
            unipotent_radical: None,
        })
    }

    /// Subalgebra spanned by an arbitrary family (dependent vectors are dropped).
    pub fn spanned_by(ambient: &LieAlgebra, gens: &[Element]) -> Result<Self> {
        for g in gens {
            ambient.check(&g.0)?;
        }
        let basis = elements_of(linalg::independent_subset(&coords_of(gens), ambient.dim()));
        Self::new(ambient, basis)
    }

    /// Smallest subalgebra containing the generators.
    pub fn generated_by(ambient: &LieAlgebra, gens: &[Element]) -> Result<Self> {
        let n = ambient.dim();
        for g in gens {
            ambient.check(&g.0)?;
        }
        let mut ech = Echelon::new(n);
        let mut basis: Vec<Element> = Vec::new();
        for g in gens {
            if ech.insert(&g.0) {
                basis.push(g.clone());
            }
        }
        let mut i = 0;
        while i < basis.len() {
            for j in 0..i {
                let b = ambient.bracket_unchecked(&basis[j], &basis[i]);
                if ech.insert(&b.0) {
                    basis.push(b);
                }
            }
            i += 1;
        }
        Self::new(ambient, basis)
    }

    pub fn zero(ambient: &LieAlgebra) -> Self {
        Subalgebra {
            ambient: ambient.clone(),
            basis: Vec::new(),
            levi_part: Some(Vec::new()),
            unipotent_radical: Some(Vec::new()),
        }
    }

    pub fn whole(ambient: &LieAlgebra) -> Self {
        let basis = (0..ambient.dim()).map(|i| ambient.basis_element(i)).collect();
        Subalgebra {
            ambient: ambient.clone(),
            basis,
            levi_part: None,
            unipotent_radical: None,
        }
    }

    /// Attaches a declared Levi split; it is validated by [`levi_decomposition`].
    pub fn with_declared_split(
        mut self,
        levi_part: Vec<Element>,
        unipotent_radical: Vec<Element>,
    ) -> Result<Self> {
        for e in levi_part.iter().chain(&unipotent_radical) {
            self.ambient.check(&e.0)?;
        }
        self.levi_part = Some(levi_part);
        self.unipotent_radical = Some(unipotent_radical);
        Ok(self)
    }

    pub fn ambient(&self) -> &LieAlgebra {
        &self.ambient
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn declared_split(&self) -> Option<(&[Element], &[Element])> {
        match (&self.levi_part, &self.unipotent_radical) {
            (Some(l), Some(u)) => Some((l, u)),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        linalg::span_contains(&coords_of(&self.basis), &x.0, self.ambient.dim())
    }

    /// `span(self) ⊆ span(other)`.
    pub fn is_subspace_of(&self, other: &[Element]) -> bool {
        linalg::span_contains_all(&coords_of(other), &coords_of(&self.basis), self.ambient.dim())
    }

    pub fn same_span(&self, other: &[Element]) -> bool {
        linalg::same_span(&coords_of(&self.basis), &coords_of(other), self.ambient.dim())
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.ambient.dim()
    }

    pub fn is_abelian(&self) -> bool {
        all_commute(&self.ambient, &self.basis)
    }
}

pub(crate) fn all_commute(g: &LieAlgebra, xs: &[Element]) -> bool {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if !g.bracket_unchecked(&xs[i], &xs[j]).is_zero() {
                return false;
            }
        }
    }
    true
}

pub(crate) fn check_closed(g: &LieAlgebra, basis: &[Element]) -> Result<()> {
    let ech = Echelon::from_vectors(g.dim(), &coords_of(basis));
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if !ech.contains(&g.bracket_unchecked(&basis[i], &basis[j]).0) {
                return Err(Error::NotClosed { i, j });
            }
        }
    }
    Ok(())
}

/// `[a, b] ⊆ span(target)` for the spans of `a` and `b`.
pub(crate) fn brackets_within(g: &LieAlgebra, a: &[Element], b: &[Element], target: &[Element]) -> bool {
    let ech = Echelon::from_vectors(g.dim(), &coords_of(target));
    a.iter()
        .all(|x| b.iter().all(|y| ech.contains(&g.bracket_unchecked(x, y).0)))
}

/// Whether the linear span of `xs` acts nilpotently on the ambient algebra:
/// the descending flag `g ⊇ ad(xs)·g ⊇ ad(xs)²·g ⊇ …` reaches zero.
pub fn acts_nilpotently(g: &LieAlgebra, xs: &[Element]) -> bool {
    let n = g.dim();
    let ads: Vec<Matrix> = xs.iter().map(|x| g.ad(x)).collect();
    let mut current: Vec<Vec<Q>> = (0..n).map(|i| Element::basis(n, i).0).collect();
    for _ in 0..=n {
        if current.is_empty() {
            return true;
        }
        let mut next = Echelon::new(n);
        let mut basis = Vec::new();
        for a in &ads {
            for w in &current {
                let v = a.mul_vec(w);
                if next.insert(&v) {
                    basis.push(v);
                }
            }
        }
        if basis.len() >= current.len() {
            return false;
        }
        current = basis;
    }
    current.is_empty()
}

/// Centralizer `{z : [z, h] = 0 for all h ∈ s}`.
pub fn centralizer(g: &LieAlgebra, s: &Subalgebra) -> Subalgebra {
    centralizer_of(g, s.basis())
}

pub(crate) fn centralizer_of(g: &LieAlgebra, xs: &[Element]) -> Subalgebra {
    let n = g.dim();
    let mut rows = Vec::new();
    for x in xs {
        rows.extend(g.ad(x).to_rows());
    }
    let basis = if rows.is_empty() {
        (0..n).map(|i| Element::basis(n, i).0).collect()
    } else {
        Matrix::from_rows(&rows).kernel()
    };
    Subalgebra::new(g, elements_of(basis)).expect("centralizers are subalgebras")
}

/// Structure of `h` in its own basis: `ad_h` matrices.
fn intrinsic_ad(g: &LieAlgebra, basis: &[Element]) -> Vec<Matrix> {
    let n = g.dim();
    let k = basis.len();
    let coords = coords_of(basis);
    let sys = Matrix::from_cols(&coords, n);
    (0..k)
        .map(|i| {
            let cols: Vec<Vec<Q>> = (0..k)
                .map(|j| {
                    let b = g.bracket_unchecked(&basis[i], &basis[j]);
                    sys.solve(&b.0).expect("subalgebra is closed")
                })
                .collect();
            Matrix::from_cols(&cols, k)
        })
        .collect()
}

/// Solvable radical of `h`: the orthogonal of `[h, h]` under the Killing form of `h`.
pub fn solvable_radical(g: &LieAlgebra, h: &Subalgebra) -> Vec<Element> {
    let k = h.dim();
    if k == 0 {
        return Vec::new();
    }
    let ad_h = intrinsic_ad(g, h.basis());
    let mut kappa = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = ad_h[i].mul(&ad_h[j]).trace();
            kappa[(i, j)] = v.clone();
            kappa[(j, i)] = v;
        }
    }
    // [h,h] in h-coordinates: columns of the ad_h matrices.
    let mut derived = Echelon::new(k);
    let mut dvecs = Vec::new();
    for a in &ad_h {
        for j in 0..k {
            let c = a.col(j);
            if derived.insert(&c) {
                dvecs.push(c);
            }
        }
    }
    let rows: Vec<Vec<Q>> = dvecs.iter().map(|d| kappa.mul_vec(d)).collect();
    let coeffs = if rows.is_empty() {
        (0..k).map(|i| Element::basis(k, i).0).collect()
    } else {
        Matrix::from_rows(&rows).kernel()
    };
    let hb = coords_of(h.basis());
    coeffs
        .iter()
        .map(|c| Element(linalg::combine(c, &hb, g.dim())))
        .collect()
}

/// Elements of the solvable subalgebra spanned by `r` that act nilpotently on `g`.
///
/// Computed as `{x ∈ r : trace(ad x · a) = 0 for all a}` with `a` ranging over the
/// associative algebra generated by `ad r`, which is triangularizable.
fn nilpotent_elements(g: &LieAlgebra, r: &[Element]) -> Vec<Element> {
    if r.is_empty() {
        return Vec::new();
    }
    let n = g.dim();
    let gens: Vec<Matrix> = r.iter().map(|x| g.ad(x)).collect();
    let mut ech = Echelon::new(n * n);
    let mut env: Vec<Matrix> = Vec::new();
    for m in &gens {
        if ech.insert(m.as_slice()) {
            env.push(m.clone());
        }
    }
    let mut i = 0;
    while i < env.len() {
        for gm in &gens {
            let p = env[i].mul(gm);
            if ech.insert(p.as_slice()) {
                env.push(p);
            }
        }
        i += 1;
    }
    let rows: Vec<Vec<Q>> = env
        .iter()
        .map(|a| gens.iter().map(|x| x.mul(a).trace()).collect())
        .collect();
    let coeffs = Matrix::from_rows(&rows).kernel();
    let rb = coords_of(r);
    let out: Vec<Vec<Q>> = coeffs.iter().map(|c| linalg::combine(c, &rb, n)).collect();
    elements_of(linalg::independent_subset(&out, n))
}

/// Lower central series `u ⊇ [u,u] ⊇ [u,[u,u]] ⊇ … ⊇ 0` of a nilpotent subalgebra.
fn lower_central_series(g: &LieAlgebra, u: &[Element]) -> Vec<Vec<Element>> {
    let n = g.dim();
    let mut series = vec![u.to_vec()];
    loop {
        let last = series.last().expect("nonempty");
        if last.is_empty() {
            break;
        }
        let mut ech = Echelon::new(n);
        let mut next = Vec::new();
        for x in u {
            for y in last {
                let b = g.bracket_unchecked(x, y);
                if ech.insert(&b.0) {
                    next.push(b);
                }
            }
        }
        if next.len() >= last.len() {
            // Not nilpotent; the caller verifies nilpotency separately.
            break;
        }
        series.push(next);
    }
    series
}

/// Splits `h = levi ⊕ unip` with `unip` the ideal of ad-nilpotent elements of the
/// radical and `levi` a reductive complement.
///
/// A declared split is validated and returned unchanged.
pub fn levi_decomposition(g: &LieAlgebra, h: &Subalgebra) -> Result<(Subalgebra, Subalgebra)> {
    if let Some((l, u)) = h.declared_split() {
        validate_split(g, h, l, u)?;
        let mut levi = Subalgebra::new(g, l.to_vec())?;
        levi.levi_part = Some(l.to_vec());
        levi.unipotent_radical = Some(Vec::new());
        let unip = Subalgebra::new(g, u.to_vec())?;
        return Ok((levi, unip));
    }
    let n = g.dim();
    let rad = solvable_radical(g, h);
    let unip = nilpotent_elements(g, &rad);
    let hb = coords_of(h.basis());
    let ub = coords_of(&unip);

    let mut levi: Vec<Element> = elements_of(linalg::complement_from(&ub, &hb, n));
    let series = lower_central_series(g, &unip);
    for w in series.windows(2) {
        let (uk, uk1) = (&w[0], &w[1]);
        levi = correct_complement(g, &levi, &unip, uk, uk1)?;
    }
    let levi = reductive_fix(g, h, levi, &unip)?;
    validate_split(g, h, &levi, &unip)?;
    let mut levi_sub = Subalgebra::new(g, levi.clone())?;
    levi_sub.levi_part = Some(levi);
    levi_sub.unipotent_radical = Some(Vec::new());
    let unip_sub = Subalgebra::new(g, unip)?;
    Ok((levi_sub, unip_sub))
}

/// One step of the linear Levi-complement correction: given a complement `L` of
/// `u` with `[L, L] ⊆ L + u_k`, finds `φ: L → u_k` so that `{x + φ(x)}` is closed
/// modulo `u_{k+1}`.
fn correct_complement(
    g: &LieAlgebra,
    levi: &[Element],
    unip: &[Element],
    uk: &[Element],
    uk1: &[Element],
) -> Result<Vec<Element>> {
    let n = g.dim();
    let m = levi.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let quot: Vec<Element> = elements_of(linalg::complement_from(
        &coords_of(uk1),
        &coords_of(uk),
        n,
    ));
    let r = quot.len();
    if r == 0 {
        return Ok(levi.to_vec());
    }
    // Coordinates in the basis [L ; u]: the first m give the L-part.
    let mut full = coords_of(levi);
    full.extend(coords_of(unip));
    let full_sys = Matrix::from_cols(&full, n);
    let split = |v: &Element| -> Result<Vec<Q>> {
        full_sys
            .solve(&v.0)
            .ok_or_else(|| Error::NotAlgebraicSubalgebra("bracket left the subalgebra".into()))
    };
    // Coordinates of u_k-vectors modulo u_{k+1}: first r in the basis [quot ; u_{k+1}].
    let mut qb = coords_of(&quot);
    qb.extend(coords_of(uk1));
    let q_sys = Matrix::from_cols(&qb, n);
    let modq = |v: &Element| -> Result<Vec<Q>> {
        q_sys
            .solve(&v.0)
            .map(|c| c[..r].to_vec())
            .ok_or_else(|| Error::NotAlgebraicSubalgebra("series is not an h-ideal".into()))
    };
    // Unknown Φ[a][d]: φ(l_a) = Σ_d Φ[a][d] quot_d; variable index a*r + d.
    let nvars = m * r;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    // act[a][d] = [l_a, quot_d] mod u_{k+1}.
    let mut act = vec![vec![Vec::new(); r]; m];
    for a in 0..m {
        for d in 0..r {
            act[a][d] = modq(&g.bracket_unchecked(&levi[a], &quot[d]))?;
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let br = g.bracket_unchecked(&levi[a], &levi[b]);
            let c = split(&br)?;
            let gamma = &c[..m];
            let nu = Element(linalg::combine(&c[m..], &coords_of(unip), n));
            let nu_q = modq(&nu)?;
            // ν + [l_a, φ(l_b)] − [l_b, φ(l_a)] − Σ_c γ_c φ(l_c) ≡ 0.
            for e in 0..r {
                let mut row = vec![Q::zero(); nvars];
                for d in 0..r {
                    row[b * r + d] += &act[a][d][e];
                    row[a * r + d] -= &act[b][d][e];
                }
                for (cidx, gc) in gamma.iter().enumerate() {
                    if !gc.is_zero() {
                        row[cidx * r + e] -= gc;
                    }
                }
                rows.push(row);
                rhs.push(-nu_q[e].clone());
            }
        }
    }
    if rows.is_empty() {
        return Ok(levi.to_vec());
    }
    let phi = Matrix::from_rows(&rows)
        .solve(&rhs)
        .ok_or_else(|| Error::NotAlgebraicSubalgebra("linear splitting system is inconsistent".into()))?;
    Ok((0..m)
        .map(|a| {
            let corr = linalg::combine(&phi[a * r..(a + 1) * r], &coords_of(&quot), n);
            Element(linalg::add_vec(&levi[a].0, &corr))
        })
        .collect())
}

/// Replaces central elements of the complement by their semisimple parts so that
/// the complement is reductive in `g`.
fn reductive_fix(
    g: &LieAlgebra,
    h: &Subalgebra,
    levi: Vec<Element>,
    unip: &[Element],
) -> Result<Vec<Element>> {
    if levi.is_empty() {
        return Ok(levi);
    }
    let center = center_of(g, &levi);
    if center.iter().all(|z| g.is_ad_semisimple(z)) {
        return Ok(levi);
    }
    let n = g.dim();
    let mut derived = Echelon::new(n);
    let mut basis = Vec::new();
    for i in 0..levi.len() {
        for j in i + 1..levi.len() {
            let b = g.bracket_unchecked(&levi[i], &levi[j]);
            if derived.insert(&b.0) {
                basis.push(b);
            }
        }
    }
    for z in &center {
        let zs = g.semisimple_part(z)?;
        if !h.contains(&zs) {
            return Err(Error::NotAlgebraicSubalgebra(format!(
                "semisimple part of central element {} lies outside the subalgebra",
                g.format_element(z)
            )));
        }
        if derived.insert(&zs.0) {
            basis.push(zs);
        }
    }
    if basis.len() + unip.len() != h.dim() {
        return Err(Error::NotAlgebraicSubalgebra(
            "semisimple parts do not complement the nilpotent ideal".into(),
        ));
    }
    Ok(basis)
}

/// Center of the Lie algebra spanned by `xs` (assumed closed).
pub(crate) fn center_of(g: &LieAlgebra, xs: &[Element]) -> Vec<Element> {
    let k = xs.len();
    if k == 0 {
        return Vec::new();
    }
    let n = g.dim();
    // Σ c_i [x_i, x_j] = 0 for all j.
    let mut rows = Vec::new();
    for j in 0..k {
        let cols: Vec<Vec<Q>> = (0..k)
            .map(|i| g.bracket_unchecked(&xs[i], &xs[j]).0)
            .collect();
        rows.extend(Matrix::from_cols(&cols, n).to_rows());
    }
    let xb = coords_of(xs);
    Matrix::from_rows(&rows)
        .kernel()
        .iter()
        .map(|c| Element(linalg::combine(c, &xb, n)))
        .collect()
}

fn validate_split(g: &LieAlgebra, h: &Subalgebra, levi: &[Element], unip: &[Element]) -> Result<()> {
    let n = g.dim();
    let mut all = coords_of(levi);
    all.extend(coords_of(unip));
    if all.len() != h.dim() || !linalg::is_independent(&all, n) {
        return Err(Error::InvalidSplit(
            "levi and unipotent parts do not form a basis of the subalgebra".into(),
        ));
    }
    if !linalg::span_contains_all(&coords_of(h.basis()), &all, n) {
        return Err(Error::InvalidSplit("split vectors lie outside the subalgebra".into()));
    }
    if !brackets_within(g, unip, h.basis(), unip) {
        return Err(Error::InvalidSplit("unipotent part is not an ideal".into()));
    }
    if !acts_nilpotently(g, unip) {
        return Err(Error::InvalidSplit("unipotent part is not ad-nilpotent".into()));
    }
    if check_closed(g, levi).is_err() {
        return Err(Error::InvalidSplit("levi part is not bracket-closed".into()));
    }
    if !is_reductive_in(g, levi) {
        return Err(Error::InvalidSplit("levi part is not reductive in the ambient algebra".into()));
    }
    Ok(())
}

/// Whether a closed subspace is reductive in `g`: its radical equals its center and
/// the center consists of ad-semisimple elements.
pub(crate) fn is_reductive_in(g: &LieAlgebra, xs: &[Element]) -> bool {
    if xs.is_empty() {
        return true;
    }
    let sub = match Subalgebra::new(g, xs.to_vec()) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let rad = solvable_radical(g, &sub);
    let center = center_of(g, xs);
    let n = g.dim();
    if !linalg::same_span(&coords_of(&rad), &coords_of(&center), n) {
        return false;
    }
    center.iter().all(|z| g.is_ad_semisimple(z))
}

/// True iff the Levi decomposition has trivial unipotent part.
pub fn is_reductive(g: &LieAlgebra, h: &Subalgebra) -> Result<bool> {
    let (_, u) = levi_decomposition(g, h)?;
    Ok(u.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn sl(n: usize) -> LieAlgebra {
        LieAlgebra::classical(Family::Sl, n).unwrap()
    }

    #[test]
    fn sl2_from_table() {
        // basis (h, e, f): [h,e]=2e, [h,f]=-2f, [e,f]=h
        let t = vec![
            (1, 0, 1, q(2)),
            (1, 1, 0, q(-2)),
            (2, 0, 2, q(-2)),
            (2, 2, 0, q(2)),
            (0, 1, 2, q(1)),
            (0, 2, 1, q(-1)),
        ];
        let g = LieAlgebra::from_structure_constants(3, &t, vec!["h".into(), "e".into(), "f".into()])
            .unwrap();
        assert_eq!(g.dim(), 3);
        let (h, e, f) = (g.basis_element(0), g.basis_element(1), g.basis_element(2));
        assert_eq!(g.bracket(&h, &e).unwrap(), e.scale(&q(2)));
        assert_eq!(g.bracket(&e, &e).unwrap(), Element::zero(3));
        assert_eq!(g.killing(&h, &h).unwrap(), q(8));
        assert_eq!(g.killing(&e, &f).unwrap(), q(4));
        assert_eq!(g.killing(&e, &e).unwrap(), q(0));
    }

    #[test]
    fn antisymmetry_violation_is_reported() {
        let t = vec![(0, 0, 1, q(1)), (0, 1, 0, q(1))];
        let err = LieAlgebra::from_structure_constants(2, &t, vec!["a".into(), "b".into()])
            .unwrap_err();
        assert_eq!(err, Error::AntisymmetryViolation { k: 0, i: 0, j: 1 });
    }

    #[test]
    fn abelian_table_is_degenerate() {
        let err = LieAlgebra::from_structure_constants(2, &[], vec!["a".into(), "b".into()])
            .unwrap_err();
        assert!(matches!(err, Error::DegenerateKillingForm { .. }));
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [a,b]=c, [b,c]=a, [c,a]=a violates Jacobi
        let t = vec![
            (2, 0, 1, q(1)),
            (2, 1, 0, q(-1)),
            (0, 1, 2, q(1)),
            (0, 2, 1, q(-1)),
            (0, 2, 0, q(1)),
            (0, 0, 2, q(-1)),
        ];
        let err = LieAlgebra::from_structure_constants(3, &t, vec!["a".into(), "b".into(), "c".into()])
            .unwrap_err();
        assert!(matches!(err, Error::JacobiViolation { .. }));
    }

    #[test]
    fn classical_dimensions() {
        assert_eq!(sl(2).dim(), 3);
        assert_eq!(sl(3).dim(), 8);
        assert_eq!(LieAlgebra::classical(Family::Sp, 4).unwrap().dim(), 10);
        assert_eq!(LieAlgebra::classical(Family::So, 5).unwrap().dim(), 10);
        assert!(matches!(
            LieAlgebra::classical(Family::Sl, 1),
            Err(Error::UnsupportedParameter { .. })
        ));
        assert!(LieAlgebra::classical(Family::Sp, 3).is_err());
    }

    #[test]
    fn sl2_basis_order_is_e_h_f() {
        assert_eq!(sl(2).labels(), &["E12", "H1", "E21"]);
    }

    #[test]
    fn sl3_elementary_bracket() {
        let g = sl(3);
        let e12 = g.named("E12").unwrap();
        let e23 = g.named("E23").unwrap();
        assert_eq!(g.bracket(&e12, &e23).unwrap(), g.named("E13").unwrap());
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let g = sl(2);
        let bad = Element(vec![q(1)]);
        assert_eq!(
            g.bracket(&bad, &g.basis_element(0)).unwrap_err(),
            Error::DimensionMismatch { expected: 3, found: 1 }
        );
    }

    #[test]
    fn centralizer_examples() {
        let g = sl(2);
        let h = Subalgebra::new(&g, vec![g.named("H1").unwrap()]).unwrap();
        let c = centralizer(&g, &h);
        assert!(c.same_span(&[g.named("H1").unwrap()]));
        assert_eq!(centralizer(&g, &Subalgebra::zero(&g)).dim(), 3);

        let g3 = sl(3);
        let block = Subalgebra::new(
            &g3,
            vec![g3.named("E12").unwrap(), g3.named("H1").unwrap(), g3.named("E21").unwrap()],
        )
        .unwrap();
        let c3 = centralizer(&g3, &block);
        let z = g3.diagonal(&[q(1), q(1), q(-2)]).unwrap();
        assert!(c3.same_span(&[z]));
    }

    #[test]
    fn levi_of_borel() {
        let g = sl(2);
        let b = Subalgebra::new(&g, vec![g.named("E12").unwrap(), g.named("H1").unwrap()]).unwrap();
        let (l, u) = levi_decomposition(&g, &b).unwrap();
        assert!(l.same_span(&[g.named("H1").unwrap()]));
        assert!(u.same_span(&[g.named("E12").unwrap()]));
        assert!(!is_reductive(&g, &b).unwrap());
    }

    #[test]
    fn levi_of_nilpotent_line_and_torus() {
        let g = sl(2);
        let e = Subalgebra::new(&g, vec![g.named("E12").unwrap()]).unwrap();
        let (l, u) = levi_decomposition(&g, &e).unwrap();
        assert!(l.is_zero());
        assert_eq!(u.dim(), 1);
        let t = Subalgebra::new(&g, vec![g.named("H1").unwrap()]).unwrap();
        assert!(is_reductive(&g, &t).unwrap());
    }

    #[test]
    fn levi_of_block_semidirect_product() {
        let g = sl(3);
        let n = |s: &str| g.named(s).unwrap();
        let h = Subalgebra::new(&g, vec![n("E12"), n("H1"), n("E21"), n("E13"), n("E23")]).unwrap();
        let (l, u) = levi_decomposition(&g, &h).unwrap();
        assert!(l.same_span(&[n("E12"), n("H1"), n("E21")]));
        assert!(u.same_span(&[n("E13"), n("E23")]));
    }

    #[test]
    fn levi_complement_needs_correction() {
        // ⟨E12, H1 + E13 ... ⟩: the torus direction diag(1,-2,1) shifted by a central nilpotent.
        let g = sl(3);
        let t = g.diagonal(&[q(1), q(-2), q(1)]).unwrap();
        let e13 = g.named("E13").unwrap();
        let h = Subalgebra::new(
            &g,
            vec![t.add(&e13), g.named("E12").unwrap(), g.named("E23").unwrap(), e13.clone()],
        )
        .unwrap();
        let (l, u) = levi_decomposition(&g, &h).unwrap();
        assert_eq!(l.dim(), 1);
        assert!(g.is_ad_semisimple(&l.basis()[0]));
        assert_eq!(u.dim(), 3);
    }

    #[test]
    fn non_algebraic_line_is_rejected() {
        // ⟨diag(1,1,-2) + E12⟩: semisimple and nilpotent parts commute but are not in the line.
        let g = sl(3);
        let x = g.diagonal(&[q(1), q(1), q(-2)]).unwrap().add(&g.named("E12").unwrap());
        let h = Subalgebra::new(&g, vec![x]).unwrap();
        assert!(matches!(
            levi_decomposition(&g, &h),
            Err(Error::NotAlgebraicSubalgebra(_))
        ));
    }

    #[test]
    fn declared_split_is_validated() {
        let g = sl(2);
        let e = g.named("E12").unwrap();
        let hh = g.named("H1").unwrap();
        let b = Subalgebra::new(&g, vec![e.clone(), hh.clone()]).unwrap();
        let good = b.clone().with_declared_split(vec![hh.clone()], vec![e.clone()]).unwrap();
        assert!(levi_decomposition(&g, &good).is_ok());
        let bad = b.with_declared_split(vec![e], vec![hh]).unwrap();
        assert!(matches!(levi_decomposition(&g, &bad), Err(Error::InvalidSplit(_))));
    }

    #[test]
    fn not_closed_subspace() {
        let g = sl(2);
        let err = Subalgebra::new(&g, vec![g.named("E12").unwrap(), g.named("E21").unwrap()])
            .unwrap_err();
        assert!(matches!(err, Error::NotClosed { .. }));
    }
}
