//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::thread;

use pantograph_cli::checks::{criterion, CRITERIA};

fn main() -> ExitCode {
    let reports: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = CRITERIA.iter().map(|&(id, _)| s.spawn(move || criterion(id).expect("known criterion"))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    println!();
    println!("acceptance criteria");
    let mut failed = 0;
    for r in &reports {
        println!("{}", r.line());
        if !r.passed {
            failed += 1;
            for m in r.measurements.iter().filter(|m| !m.passed) {
                println!("    {}: {:e} (tolerance {:e})", m.name, m.value, m.tolerance);
            }
        }
    }
    println!("{} of {} criteria passed", reports.len() - failed, reports.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
