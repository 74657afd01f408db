//! Run the built-in verification suites.
use polarfade::verify::{verify, Suite, VerifyOptions};

fn main() {
    let report = verify(&Suite::ALL, &VerifyOptions::default());
    for c in &report.checks {
        println!(
            "{:<4} {:<13} {:<40} {}",
            if c.passed { "ok" } else { "FAIL" },
            c.suite.name(),
            c.name,
            c.detail
        );
    }
    std::process::exit(if report.passed() { 0 } else { 2 });
}
