//! Runs every step of the reduction along one coordinate and prints the
//! outcome of each check.
//!
//! cargo run --example lemma_walkthrough -- 3 "1,1;1,2" 1

use ajt_lab::lemma::{check_all, LabOptions};
use ajt_lab::report::parse_matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let p = args.first().map_or(Ok(3), |s| s.parse())?;
    let rows = args.get(1).map_or("1,1;1,2", String::as_str);
    let i: usize = args.get(2).map_or(Ok(1), |s| s.parse())?;
    let m = parse_matrix(p, rows)?;

    let r = check_all(&m, i - 1, &LabOptions::default())?;
    println!(
        "M = [{m}] over F_{p}, coordinate {i}, F_p identity {}",
        r.fp_identity
    );
    let a: Vec<String> = r.split.a_prime.iter().map(|v| v.to_string()).collect();
    println!("a' = {}  pivots = {:?}", a.join(" "), r.split.pivots);
    for (name, check) in r.checks() {
        let kind = if check.unconditional {
            "unconditional"
        } else {
            "conditional"
        };
        println!("  {name:<28} {kind:<13} {:?}", check.outcome);
    }
    if let Some(x) = &r.xprime {
        println!(
            "x' search: {} heads tried, witness {:?}",
            x.heads_tried,
            x.witness.as_ref().map(|w| w.to_string())
        );
    }
    if let Some(v) = &r.cascade.submatrix_verdict {
        println!("minor verdict: F_p {} Z {}", v.fp_identity, v.z_identity);
    }
    let failed = r.hard_failures();
    println!("{} unconditional failures, {} us", failed.len(), r.total_us);
    Ok(())
}
