use miniw_core::suite::{all_ids, run_criterion};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in all_ids() {
        let r = run_criterion(id);
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {}. {} ({:.2}s): {}", r.id, r.name, r.seconds, r.detail);
        if !r.passed {
            failed.push(r.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
