//! Acceptance criteria 1-8, one line per criterion. Exits non-zero if any fails.

use boolsd_core::reproduce::{run_criterion, CRITERIA};

fn main() {
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let o = run_criterion(id).expect("criterion id is listed");
        println!("{}", o.line());
        if !o.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
