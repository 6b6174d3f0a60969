//! Run the cross-checks programmatically and summarise the report.
//!
//! cargo run --release --example verify -- 8

use permstat::verify::{self, VerifyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_max: usize = std::env::args().nth(1).map_or(Ok(8), |s| s.parse())?;
    let report = verify::run(&VerifyConfig {
        n_max,
        ..VerifyConfig::default()
    })?;
    for check in &report.checks {
        let mark = if check.passed { "ok  " } else { "FAIL" };
        println!("{mark} [{}] {}", check.group, check.name);
    }
    let failed = report.failures().count();
    println!("{} checks, {failed} failed", report.checks.len());
    if let Some(f) = report.first_failure() {
        println!("first failure: {f}");
    }
    std::process::exit(if report.passed() { 0 } else { 1 });
}
