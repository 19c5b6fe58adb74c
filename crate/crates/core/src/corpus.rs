//! Built-in regression cases with their expected answers.

use serde_json::Value;

use crate::algebra::{Element, Family, LieAlgebra};
use crate::criteria::{Answer, Question, Verdict};
use crate::error::Result;
use crate::grading::grade;
use crate::orbit::exp_ad_nilpotent;
use crate::problem::ProblemSpec;
use crate::rational::q;
use crate::report::{decide, report_json, Verbosity};
use crate::verify::{verify_report, VerifyOutcome};

#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: String,
    pub spec: ProblemSpec,
    pub observable: Answer,
    pub epimorphic: Answer,
    /// Nilpotent `x` when the case is `exp(ad x)` applied to a simpler subalgebra.
    pub conjugation: Option<Element>,
}

impl CorpusCase {
    pub fn expected(&self, question: Question) -> Answer {
        match question {
            Question::Observability => self.observable,
            Question::Epimorphicity => self.epimorphic,
        }
    }
}

fn algebra(family: Family, n: usize) -> LieAlgebra {
    LieAlgebra::classical(family, n).expect("corpus algebras are supported")
}

fn named(g: &LieAlgebra, labels: &[&str]) -> Vec<Element> {
    labels
        .iter()
        .map(|l| g.named(l).unwrap_or_else(|| panic!("no basis element {l}")))
        .collect()
}

fn diag(g: &LieAlgebra, d: &[i64]) -> Element {
    let d: Vec<_> = d.iter().map(|&x| q(x)).collect();
    g.diagonal(&d).expect("traceless diagonal")
}

fn case(name: &str, n: usize, basis: Vec<Element>, observable: Answer, epimorphic: Answer) -> CorpusCase {
    let spec = ProblemSpec::classical(Family::Sl, n, basis.into_iter().map(|e| e.0).collect()).named(name);
    CorpusCase {
        name: name.to_string(),
        spec,
        observable,
        epimorphic,
        conjugation: None,
    }
}

/// `q_s` for a diagonal `s` in `sl_n`.
fn quasiparabolic(g: &LieAlgebra, d: &[i64]) -> Vec<Element> {
    grade(g, &diag(g, d)).expect("rational semisimple").q_basis
}

/// The regression corpus, sorted by name.
pub fn corpus_cases() -> Vec<CorpusCase> {
    use Answer::{No, Yes};
    let sl2 = algebra(Family::Sl, 2);
    let sl3 = algebra(Family::Sl, 3);
    let all2: Vec<Element> = (0..3).map(|i| sl2.basis_element(i)).collect();
    let all3: Vec<Element> = (0..8).map(|i| sl3.basis_element(i)).collect();
    let block = named(&sl3, &["E12", "H1", "E21"]);
    let mut block_radical = block.clone();
    block_radical.extend(named(&sl3, &["E13", "E23"]));
    let mut parabolic = block_radical.clone();
    parabolic.push(diag(&sl3, &[1, 1, -2]));
    let f = sl2.named("E21").unwrap();
    let conj = exp_ad_nilpotent(&sl2, &f).expect("f is nilpotent");
    let conj_e = Element(conj.mul_vec(&sl2.named("E12").unwrap().0));

    let mut cases = vec![
        case("sl2_nilpotent_line", 2, named(&sl2, &["E12"]), Yes, No),
        case("sl2_borel", 2, named(&sl2, &["E12", "H1"]), No, Yes),
        case("sl2_cartan", 2, named(&sl2, &["H1"]), Yes, No),
        case("sl2_quasiparabolic_h", 2, quasiparabolic(&sl2, &[1, -1]), Yes, No),
        CorpusCase {
            conjugation: Some(f),
            ..case("sl2_conjugated_line", 2, vec![conj_e], Yes, No)
        },
        case("sl2_whole", 2, all2, Yes, Yes),
        case("sl2_zero", 2, Vec::new(), Yes, No),
        case("sl3_quasiparabolic_1_0_m1", 3, quasiparabolic(&sl3, &[1, 0, -1]), Yes, No),
        case("sl3_quasiparabolic_2_m1_m1", 3, quasiparabolic(&sl3, &[2, -1, -1]), Yes, No),
        case("sl3_quasiparabolic_1_m1_0", 3, quasiparabolic(&sl3, &[1, -1, 0]), Yes, No),
        case("sl3_block_with_radical", 3, block_radical, Yes, No),
        case("sl3_parabolic", 3, parabolic, No, Yes),
        case("sl3_sl2_block", 3, block, Yes, No),
        case("sl3_whole", 3, all3, Yes, Yes),
        case(
            "sl3_borel",
            3,
            named(&sl3, &["E12", "E13", "E23", "H1", "H2"]),
            No,
            Yes,
        ),
        case("sl3_nilradical", 3, named(&sl3, &["E12", "E13", "E23"]), Yes, No),
        case("sl3_abelian_radical", 3, named(&sl3, &["E13", "E23"]), Yes, No),
    ];
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    cases
}

#[derive(Clone, Debug)]
pub struct QuestionOutcome {
    pub question: Question,
    pub expected: Answer,
    pub verdict: Verdict,
    pub report: Value,
    pub verification: VerifyOutcome,
}

impl QuestionOutcome {
    /// Expected answer, exact confidence and a clean verification.
    pub fn passed(&self) -> bool {
        self.verdict.answer == self.expected && self.verdict.confidence.is_exact() && self.verification.ok()
    }
}

#[derive(Clone, Debug)]
pub struct CaseOutcome {
    pub name: String,
    pub outcomes: Vec<QuestionOutcome>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(QuestionOutcome::passed)
    }
}

pub fn run_case(case: &CorpusCase, seed: u64, verbosity: Verbosity) -> Result<CaseOutcome> {
    let mut spec = case.spec.clone();
    spec.options.seed = seed;
    let mut outcomes = Vec::new();
    for question in [Question::Observability, Question::Epimorphicity] {
        let verdict = decide(&spec, question)?;
        let report = report_json(&spec, &verdict, verbosity);
        let verification = verify_report(&report);
        outcomes.push(QuestionOutcome {
            question,
            expected: case.expected(question),
            verdict,
            report,
            verification,
        });
    }
    Ok(CaseOutcome {
        name: case.name.clone(),
        outcomes,
    })
}

/// Runs every case on its own thread; results come back in case-name order.
pub fn run_corpus(seed: u64, verbosity: Verbosity) -> Result<Vec<CaseOutcome>> {
    let cases = corpus_cases();
    std::thread::scope(|scope| {
        let handles: Vec<_> = cases
            .iter()
            .map(|c| scope.spawn(move || run_case(c, seed, verbosity)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("corpus worker panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;

    #[test]
    fn corpus_is_large_enough_and_sorted() {
        let cases = corpus_cases();
        assert!(cases.len() >= 12);
        assert!(cases.windows(2).all(|w| w[0].name < w[1].name));
    }

    #[test]
    fn corpus_specs_round_trip() {
        for c in corpus_cases() {
            assert_eq!(parse_problem(&c.spec.serialize()).unwrap(), c.spec, "{}", c.name);
        }
    }

    #[test]
    fn quasiparabolic_for_h_is_the_nilpotent_line() {
        let g = algebra(Family::Sl, 2);
        let qb = quasiparabolic(&g, &[1, -1]);
        assert_eq!(qb.len(), 1);
        assert!(crate::Subalgebra::new(&g, qb).unwrap().same_span(&named(&g, &["E12"])));
    }
}
