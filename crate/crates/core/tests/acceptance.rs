//! Runs the acceptance suite and prints one line per criterion.

use std::process::ExitCode;

use gci_core::acceptance::run_suite;

fn main() -> ExitCode {
    let filter = std::env::var("GCI_ACCEPT_FILTER").ok();
    let results = run_suite(filter.as_deref());
    let mut failed = 0;
    for r in &results {
        println!("{}", r.line());
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
