//! Interrupts a checkpointed scan and resumes it, then splits the same scan
//! into shards and merges them back into the single-run report.
//!
//! cargo run --release --example sharded_scan -- 3 3 4

use std::time::Duration;

use ajt_lab::report::{Payload, ReportEnvelope};
use ajt_lab::scan::{merge, scan, Checkpoint, ScanConfig, Shard};
use serde_json::json;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let p = args.first().map_or(Ok(3), |s| s.parse())?;
    let n = args.get(1).map_or(Ok(3), |s| s.parse())?;
    let m: u32 = args.get(2).map_or(Ok(4), |s| s.parse())?;
    let dir = std::env::temp_dir().join(format!("ajt-shards-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let mut cfg = ScanConfig::new(p, n);
    cfg.checkpoint = Some(dir.join("single.jsonl"));
    cfg.max_duration = Some(Duration::ZERO);
    let first = scan(&cfg)?;
    let cp = Checkpoint::load(&dir.join("single.jsonl"))?.expect("written");
    println!(
        "stopped after {} matrices (partial {}, next counter {})",
        first.totals.enumerated, first.partial, cp.next_counter
    );
    cfg.max_duration = None;
    let single = scan(&cfg)?;
    println!(
        "resumed to {} matrices, digest {}",
        single.totals.enumerated, single.digest
    );

    let mut parts = Vec::new();
    for k in 0..m {
        let mut cfg = ScanConfig::new(p, n);
        cfg.shard = Shard::new(k, m)?;
        cfg.checkpoint = Some(dir.join(format!("shard{k}.jsonl")));
        let r = scan(&cfg)?;
        println!(
            "shard {}: {} matrices, digest {}",
            r.shard, r.totals.enumerated, r.digest
        );
        let path = dir.join(format!("shard{k}.json"));
        ReportEnvelope::new(
            "scan",
            json!({"p": p, "n": n, "shard": r.shard.to_string()}),
            Payload::Scan(r),
        )?
        .write(&path)?;
        parts.push(path);
    }

    let reports = parts
        .iter()
        .map(|path| match ReportEnvelope::read(path)?.payload {
            Payload::Scan(r) => Ok(r),
            _ => Err("not a scan report".into()),
        })
        .collect::<Result<Vec<_>, Box<dyn std::error::Error>>>()?;
    let merged = merge(&reports)?;
    println!(
        "merged: {} matrices, digest {}",
        merged.totals.enumerated, merged.digest
    );
    println!(
        "byte-identical to one run: {}",
        serde_json::to_vec(&merged)? == serde_json::to_vec(&single)?
    );
    print!("{}", merged.to_csv());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
