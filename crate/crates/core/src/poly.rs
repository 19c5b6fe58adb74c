//! Univariate polynomials over the rationals: characteristic polynomials,
//! squarefree parts, exact rational-root extraction and the Jordan semisimple part
//! of a matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::Matrix;
use crate::rational::Q;

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: &Q) -> Self {
        Poly::new(vec![-r.clone(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(a);
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(Q::zero)
                        - other.0.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        let lead_inv = d.lead().recip();
        if self.is_zero() || self.degree() < dd {
            return (Poly::zero(), self.clone());
        }
        let mut qt = vec![Q::zero(); self.degree() - dd + 1];
        for k in (0..qt.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            qt[k] = c;
        }
        (Poly::new(qt), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().recip();
        Poly(self.0.iter().map(|c| c * &inv).collect())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Poly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Integer multiple with coprime integer coefficients and positive leading term.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.0 {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        let sign = if ints.last().is_some_and(|x| x.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|x| x / &g * &sign).collect()
    }

    fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        seq
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Q> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let p = self.squarefree_part();
        let ints = p.primitive_integer();
        let lead = ints.last().cloned().unwrap_or_else(BigInt::one);
        let lead_q = Q::from_integer(lead.clone());
        let p = Poly::new(ints.iter().cloned().map(Q::from_integer).collect());
        let seq = p.sturm_sequence();
        let variations = |x: &Q| -> usize {
            let mut last = 0i8;
            let mut count = 0;
            for s in &seq {
                let v = s.eval(x);
                let sg = if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                };
                if sg != 0 {
                    if last != 0 && sg != last {
                        count += 1;
                    }
                    last = sg;
                }
            }
            count
        };
        // Cauchy bound on |root|.
        let bound = Q::one()
            + p.0
                .iter()
                .map(|c| (c / &p.lead()).abs())
                .max()
                .unwrap_or_else(Q::zero);
        let spacing = lead_q.recip();
        let mut roots = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((a, b)) = stack.pop() {
            let count = variations(&a).saturating_sub(variations(&b));
            if count == 0 {
                continue;
            }
            if count == 1 && &b - &a < spacing {
                // A rational root has the form k / lead for an integer k.
                let lo = (&a * &lead_q).floor().to_integer();
                let hi = (&b * &lead_q).ceil().to_integer();
                let mut k = lo;
                while k <= hi {
                    let r = Q::new(k.clone(), lead.clone());
                    if r > a && r <= b && p.eval(&r).is_zero() {
                        roots.push(r);
                    }
                    k += 1;
                }
                continue;
            }
            let mid = (&a + &b) / Q::from_integer(BigInt::from(2));
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

/// Characteristic polynomial `det(x I - A)` by Faddeev–LeVerrier.
pub fn charpoly(a: &Matrix) -> Poly {
    let n = a.rows();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m);
        for i in 0..n {
            m[(i, i)] += &coeffs[n - k + 1];
        }
        let am = a.mul(&m);
        coeffs[n - k] = -am.trace() / Q::from_integer(BigInt::from(k));
    }
    Poly::new(coeffs)
}

/// Whether `A` is diagonalizable over the algebraic closure.
pub fn is_semisimple_matrix(a: &Matrix) -> bool {
    charpoly(a).squarefree_part().eval_matrix(a).is_zero()
}

/// Semisimple part of the additive Jordan decomposition, by Newton iteration
/// on the squarefree part of the characteristic polynomial.
pub fn semisimple_part(a: &Matrix) -> Matrix {
    let p = charpoly(a).squarefree_part();
    let dp = p.derivative();
    let mut s = a.clone();
    for _ in 0..64 {
        let ps = p.eval_matrix(&s);
        if ps.is_zero() {
            return s;
        }
        let inv = dp
            .eval_matrix(&s)
            .inverse()
            .expect("p'(S) is invertible along the Newton iteration");
        s = s.sub(&ps.mul(&inv));
    }
    unreachable!("Newton iteration for the Jordan decomposition terminates")
}
