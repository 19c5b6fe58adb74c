use epimorph::corpus::run_corpus;
use epimorph::report::Verbosity;

#[test]
fn corpus_reproduces_expected_answers() {
    let results = run_corpus(0, Verbosity::Default).unwrap();
    let mut failed = Vec::new();
    for case in &results {
        for o in &case.outcomes {
            if !o.passed() {
                failed.push(format!(
                    "{} {}: expected {} got {} ({:?}) failures {:?} reason {:?}",
                    case.name,
                    o.question.name(),
                    o.expected.name(),
                    o.verdict.answer.name(),
                    o.verdict.confidence,
                    o.verification.failures,
                    o.verdict.unknown_reason,
                ));
            }
        }
    }
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
