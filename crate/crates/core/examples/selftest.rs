//! Runs the seeded suites and prints the pass/fail table.
//!
//! cargo run --release --example selftest -- [seed] [--quick]

use ajt_lab::suites::{selftest, DEFAULT_SEED};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let quick = args.iter().any(|a| a == "--quick");
    let seed = match args.iter().find(|a| !a.starts_with("--")) {
        Some(s) => s.parse()?,
        None => DEFAULT_SEED,
    };
    let report = selftest(seed, quick);
    print!("{}", report.table());
    if let Some(s) = report.suites.iter().find(|s| !s.passed()) {
        println!("first failure in {}: {:?}", s.name, s.first_failure);
        std::process::exit(2);
    }
    Ok(())
}
