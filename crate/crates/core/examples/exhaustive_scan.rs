//! Scans GL_n(F_p) and prints the tallies.
//!
//! cargo run --release --example exhaustive_scan -- 5 2 [--canonicalize] [--full]

use std::time::Instant;

use ajt_lab::scan::{flagged_orbits, scan, ScanConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let p = args.first().map_or(Ok(3), |s| s.parse())?;
    let n = args.get(1).map_or(Ok(2), |s| s.parse())?;
    let mut cfg = ScanConfig::new(p, n);
    cfg.canonicalize = args.iter().any(|a| a == "--canonicalize");
    cfg.cross_check_full = args.iter().any(|a| a == "--full");

    let start = Instant::now();
    let report = scan(&cfg)?;
    let t = &report.totals;
    println!("p = {p}, n = {n}, canonicalize = {}", report.canonicalize);
    println!(
        "enumerated {} / classes {} / covered {}",
        t.enumerated, t.classes, t.covered
    );
    println!(
        "F_p identity {} / Z identity {} / counterexamples {}",
        t.fp_identity, t.z_identity, t.counterexamples
    );
    println!(
        "violations {} / inconsistencies {}",
        t.violations, t.inconsistencies
    );
    if report.cross_check_full {
        println!(
            "dense vs reduced F_p: {} compared, {} disagree",
            t.fp_modes_compared, t.fp_mode_disagreements
        );
    }
    for m in flagged_orbits(&report.counterexamples).iter().take(5) {
        println!("counterexample orbit: {m}");
    }
    for m in flagged_orbits(&report.violations).iter().take(5) {
        println!("violation orbit: {m}");
    }
    println!("digest {}  ({:.2?})", report.digest, start.elapsed());
    Ok(())
}
