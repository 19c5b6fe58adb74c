//! Benchmark fixtures shared by the criterion targets.

use epimorph::algebra::{Element, Family, LieAlgebra};
use epimorph::corpus::corpus_cases;
use epimorph::orbit::WeightSupport;
use epimorph::problem::ProblemSpec;
use epimorph::rational::q;
use epimorph::Q;

/// Corpus problems, by name.
pub fn problems() -> Vec<(String, ProblemSpec)> {
    corpus_cases().into_iter().map(|c| (c.name, c.spec)).collect()
}

/// The Borel subalgebra of `sl_n`.
pub fn borel(n: usize) -> ProblemSpec {
    let g = LieAlgebra::classical(Family::Sl, n).expect("sl_n");
    let mut basis = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            basis.push(g.named(&format!("E{i}{j}")).expect("root vector").0);
        }
    }
    for i in 1..n {
        basis.push(g.named(&format!("H{i}")).expect("coroot").0);
    }
    ProblemSpec::classical(Family::Sl, n, basis).named(&format!("sl{n}_borel"))
}

/// Weights `e_i - e_j` for `i < j` on a rank `r` torus: the positive roots of type A.
pub fn positive_roots(r: usize) -> WeightSupport {
    let mut weights: Vec<Vec<Q>> = Vec::new();
    for i in 0..r {
        for j in i + 1..=r {
            let mut w = vec![q(0); r];
            w[i] = q(1);
            if j < r {
                w[j] = q(-1);
            }
            weights.push(w);
        }
    }
    let unit = Element(vec![q(1)]);
    WeightSupport {
        ambient_dim: 1,
        torus_basis: vec![unit.clone(); r],
        components: vec![vec![unit]; weights.len()],
        weights,
    }
}
