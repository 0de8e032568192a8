use peirce_coord::corpus::standard_corpus;
use peirce_coord::suite::{verify_lemmas, Status, SuiteOptions};

#[test]
fn no_check_fails_on_the_corpus() {
    let opts = SuiteOptions::default();
    let mut failures = Vec::new();
    for e in standard_corpus() {
        for c in verify_lemmas(&e.ring, &opts) {
            println!("{:<24} {:<30} {:<7} {:>8.1?} {}", e.name, c.name, c.status.name(), c.elapsed, c.detail);
            if c.status == Status::Fail {
                failures.push(format!("{} {}: {:?}", e.name, c.name, c.witness));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
