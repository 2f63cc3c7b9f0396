//! Acceptance suite: every numbered criterion at its stated tolerance, one
//! pass/fail line each. Runs without the libtest harness so the lines come
//! out in order and unbuffered.

use std::process::ExitCode;

use memweight_core::weight::WeightOptions;
use memweight_verification::{run_criterion, Tolerances, CRITERIA};

fn main() -> ExitCode {
    let tol = Tolerances::default();
    let opts = WeightOptions::default();
    println!("\nrunning {} acceptance criteria", CRITERIA.len());
    let mut failed = 0;
    for &(id, _) in &CRITERIA {
        let r = run_criterion(id, &tol, opts);
        if !r.passed {
            failed += 1;
        }
        println!("{}", r.line());
    }
    println!(
        "\nacceptance: {} passed; {failed} failed\n",
        CRITERIA.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
