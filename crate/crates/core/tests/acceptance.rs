//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;

use unclab::acceptance::{run_all, SuiteTolerances};

fn main() -> ExitCode {
    let outcomes = run_all(&SuiteTolerances::default());
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    let total: f64 = outcomes.iter().map(|o| o.seconds).sum();
    println!("acceptance: {} passed, {failed} failed, {total:.1} s", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
