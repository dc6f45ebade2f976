//! Runs the independent reference checks also exposed as `dsmqr verify`.
//!
//! Run with `cargo run --example oracle_checks`.

use std::process::ExitCode;

fn main() -> ExitCode {
    let outcomes = dsmqr::oracle::run_all();
    for outcome in &outcomes {
        println!("{outcome}");
    }
    if outcomes.iter().all(|o| o.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
