//! Exhaustive scans of GL_n(F_p) with sharding and checkpoints.
//!
//! Every enumerated matrix (or, with canonicalization, every orbit
//! representative) gets the reduced F_p test, the character test over Z and
//! the brute-force witness search. Matrices where the three disagree in a way
//! the theory forbids land in `inconsistencies`; those where the F_p identity
//! holds but the Z identity fails land in `violations` after a dense
//! re-check.

mod canonical;
mod checkpoint;
mod enumerate;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use canonical::canonical_form;
pub use checkpoint::{config_hash, Checkpoint, CHECKPOINT_VERSION};
pub use enumerate::{enumerate_invertible, gl_order};

use crate::ajt::{good_vector_unchecked, MatrixVerdict};
use crate::binomial::{fp_identity_test, BinomialProduct, FpMode};
use crate::error::{Error, Result};
use crate::group::{is_prime, GroupContext, GroupVector};
use crate::matrix::MatrixFp;
use crate::ring::Ring;
use crate::suites;
use crate::truncated::{reduced_identity, ReducedScratch};

use canonical::{test_representative, ColumnTransforms};
use enumerate::Walker;

/// Shard `index` of `total`: the matrices whose enumeration counter is
/// congruent to `index` mod `total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shard {
    pub index: u32,
    pub total: u32,
}

impl Shard {
    pub fn new(index: u32, total: u32) -> Result<Self> {
        if total == 0 || index >= total {
            return Err(Error::Parse(format!(
                "shard {index}/{total} is out of range"
            )));
        }
        Ok(Shard { index, total })
    }

    pub fn whole() -> Self {
        Shard { index: 0, total: 1 }
    }

    fn owns(&self, counter: u64) -> bool {
        counter % self.total as u64 == self.index as u64
    }
}

impl fmt::Display for Shard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.index, self.total)
    }
}

impl FromStr for Shard {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (k, m) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("expected k/m, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad shard number {t:?}")))
        };
        Shard::new(parse(k)?, parse(m)?)
    }
}

/// Sizes the scanner accepts: p <= 5 with n <= 3, and p = 7 with n = 2.
/// (7, 3) is accepted only with canonicalization and more than one shard.
pub fn check_scan_feasible(p: u32, n: usize, canonicalize: bool, shard: Shard) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let ok = (p <= 5 && n <= 3)
        || (p == 7 && n <= 2)
        || (p == 7 && n == 3 && canonicalize && shard.total > 1);
    if ok {
        Ok(())
    } else if p == 7 && n == 3 {
        Err(Error::Infeasible(
            "p = 7, n = 3 needs --canonicalize and more than one shard".into(),
        ))
    } else {
        Err(Error::Infeasible(format!(
            "scans are limited to p <= 5 with n <= 3 and p = 7 with n <= 2; got p = {p}, n = {n}"
        )))
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub p: u32,
    pub n: usize,
    pub canonicalize: bool,
    pub shard: Shard,
    /// Worker threads; 0 means one per available core.
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    /// Matrices of this shard between checkpoint writes.
    pub checkpoint_interval: u64,
    /// Wall-clock cap; the scan stops with a partial report when it runs out.
    pub max_duration: Option<Duration>,
    /// Also run the dense F_p test and compare it with the reduced one.
    pub cross_check_full: bool,
}

impl ScanConfig {
    pub fn new(p: u32, n: usize) -> Self {
        ScanConfig {
            p,
            n,
            canonicalize: false,
            shard: Shard::whole(),
            workers: 0,
            checkpoint: None,
            checkpoint_interval: 100_000,
            max_duration: None,
            cross_check_full: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagKind {
    /// F_p identity holds, Z identity fails, confirmed densely.
    Violation,
    /// No nowhere-zero x with Mx nowhere zero.
    Counterexample,
    /// Z identity and witness search disagree.
    CharacterMismatch,
    /// Reduced and dense F_p tests disagree.
    FpModeMismatch,
    /// Z identity holds but the F_p identity does not.
    ModPIncompatible,
    /// Reduced-mode violation that did not survive the dense re-check.
    ReverificationFailed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlaggedMatrix {
    pub counter: u64,
    pub kind: FlagKind,
    pub matrix: MatrixFp,
    pub verdict: MatrixVerdict,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanTotals {
    /// Matrices walked by the enumerator in this shard.
    pub enumerated: u64,
    /// Matrices that received a verdict (orbit representatives when
    /// canonicalizing).
    pub classes: u64,
    /// Matrices of GL_n(F_p) accounted for, counting whole orbits.
    pub covered: u64,
    pub fp_identity: u64,
    pub z_identity: u64,
    pub counterexamples: u64,
    pub violations: u64,
    pub inconsistencies: u64,
    pub fp_modes_compared: u64,
    pub fp_mode_disagreements: u64,
}

impl ScanTotals {
    fn absorb(&mut self, o: &ScanTotals) {
        self.enumerated += o.enumerated;
        self.classes += o.classes;
        self.covered += o.covered;
        self.fp_identity += o.fp_identity;
        self.z_identity += o.z_identity;
        self.counterexamples += o.counterexamples;
        self.violations += o.violations;
        self.inconsistencies += o.inconsistencies;
        self.fp_modes_compared += o.fp_modes_compared;
        self.fp_mode_disagreements += o.fp_mode_disagreements;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub p: u32,
    pub n: usize,
    pub canonicalize: bool,
    /// Canonicalization was requested but the invariance suite failed.
    pub canonicalization_disabled: bool,
    pub cross_check_full: bool,
    pub shard: Shard,
    pub partial: bool,
    pub totals: ScanTotals,
    pub violations: Vec<FlaggedMatrix>,
    pub inconsistencies: Vec<FlaggedMatrix>,
    pub counterexamples: Vec<FlaggedMatrix>,
    /// Order-independent hash of every verdict, as 16 hex digits.
    pub digest: String,
}

impl ScanReport {
    fn empty(cfg: &ScanConfig, canonicalize: bool) -> Self {
        ScanReport {
            p: cfg.p,
            n: cfg.n,
            canonicalize,
            canonicalization_disabled: cfg.canonicalize && !canonicalize,
            cross_check_full: cfg.cross_check_full,
            shard: cfg.shard,
            partial: true,
            totals: ScanTotals::default(),
            violations: Vec::new(),
            inconsistencies: Vec::new(),
            counterexamples: Vec::new(),
            digest: format_digest(0),
        }
    }

    /// No violations and no inconsistencies.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.inconsistencies.is_empty()
    }

    pub fn digest_value(&self) -> Result<u64> {
        u64::from_str_radix(&self.digest, 16)
            .map_err(|_| Error::Merge(format!("bad digest {:?}", self.digest)))
    }

    fn sort_lists(&mut self) {
        for list in [
            &mut self.violations,
            &mut self.inconsistencies,
            &mut self.counterexamples,
        ] {
            list.sort_by_key(|a| (a.counter, a.kind));
        }
    }

    /// One header line and one data line of tallies.
    pub fn to_csv(&self) -> String {
        let t = &self.totals;
        format!(
            "p,n,canonicalize,shard,partial,enumerated,classes,covered,fp_identity,z_identity,counterexamples,violations,inconsistencies,fp_modes_compared,fp_mode_disagreements,digest\n\
             {},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            self.p,
            self.n,
            self.canonicalize,
            self.shard,
            self.partial,
            t.enumerated,
            t.classes,
            t.covered,
            t.fp_identity,
            t.z_identity,
            t.counterexamples,
            t.violations,
            t.inconsistencies,
            t.fp_modes_compared,
            t.fp_mode_disagreements,
            self.digest
        )
    }
}

fn format_digest(d: u64) -> String {
    format!("{d:016x}")
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Combines the reports of all `m` shards of one scan into the report an
/// unsharded run would produce.
pub fn merge(reports: &[ScanReport]) -> Result<ScanReport> {
    let first = reports
        .first()
        .ok_or_else(|| Error::Merge("no reports given".into()))?;
    let total = first.shard.total;
    let mut seen = vec![false; total as usize];
    for r in reports {
        if (
            r.p,
            r.n,
            r.canonicalize,
            r.canonicalization_disabled,
            r.cross_check_full,
        ) != (
            first.p,
            first.n,
            first.canonicalize,
            first.canonicalization_disabled,
            first.cross_check_full,
        ) {
            return Err(Error::Merge(
                "reports come from different scan configurations".into(),
            ));
        }
        if r.shard.total != total {
            return Err(Error::Merge(format!(
                "shard {} does not belong to a {total}-way split",
                r.shard
            )));
        }
        let slot = &mut seen[r.shard.index as usize];
        if *slot {
            return Err(Error::Merge(format!("shard {} appears twice", r.shard)));
        }
        *slot = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Merge(format!("shard {missing}/{total} is missing")));
    }
    let mut out = ScanReport {
        shard: Shard::whole(),
        partial: reports.iter().any(|r| r.partial),
        totals: ScanTotals::default(),
        violations: Vec::new(),
        inconsistencies: Vec::new(),
        counterexamples: Vec::new(),
        digest: String::new(),
        ..first.clone()
    };
    let mut digest = 0u64;
    for r in reports {
        out.totals.absorb(&r.totals);
        out.violations.extend(r.violations.iter().cloned());
        out.inconsistencies
            .extend(r.inconsistencies.iter().cloned());
        out.counterexamples
            .extend(r.counterexamples.iter().cloned());
        digest = digest.wrapping_add(r.digest_value()?);
    }
    out.digest = format_digest(digest);
    out.sort_lists();
    Ok(out)
}

/// Everything learned about one matrix.
#[derive(Debug)]
struct Evaluation {
    counter: u64,
    orbit: u64,
    verdict: MatrixVerdict,
    fp_full: Option<bool>,
    /// Dense re-check of a violation: (F_p product zero, Z product zero).
    recheck: Option<(bool, bool)>,
    digest: u64,
    rows: Vec<u32>,
}

struct Evaluator {
    ctx: GroupContext,
    transforms: Option<ColumnTransforms>,
    cross_check_full: bool,
}

impl Evaluator {
    fn matrix(&self, flat: &[u32]) -> MatrixFp {
        let n = self.ctx.n();
        let rows = flat
            .chunks(n)
            .map(|r| self.ctx.vector(r.to_vec()).expect("reduced entries"))
            .collect();
        MatrixFp::new(self.ctx, rows).expect("square")
    }

    fn evaluate(
        &self,
        counter: u64,
        flat: &[u32],
        scratch: &mut ReducedScratch,
    ) -> Option<Evaluation> {
        let (p, n) = (self.ctx.p(), self.ctx.n());
        let orbit = match &self.transforms {
            Some(t) => {
                let test = test_representative(flat, n, t);
                if !test.is_minimum {
                    return None;
                }
                t.group_order() / test.stabilizer
            }
            None => 1,
        };
        let m = self.matrix(flat);
        let fp = reduced_identity(flat.chunks(n), p, n, scratch);
        let product = BinomialProduct::for_matrix(&m);
        let fp_full = self
            .cross_check_full
            .then(|| product.dense_product(Ring::Fp).is_ok_and(|x| x.is_zero()));
        let z = product.z_identity_holds();
        let witness = good_vector_unchecked(&m);
        let verdict = MatrixVerdict::from_parts(fp, z, witness);
        let recheck = verdict.violates_conjecture().then(|| {
            let fp_dense = fp_identity_test(&m, FpMode::Full).unwrap_or(false);
            let z_dense = product
                .dense_product(Ring::Z)
                .map(|x| x.is_zero())
                .unwrap_or(true);
            (fp_dense, z_dense)
        });
        let code = flat
            .iter()
            .rev()
            .fold(0u64, |acc, &x| acc * p as u64 + x as u64);
        let bits =
            u64::from(fp) | u64::from(z) << 1 | u64::from(verdict.ajt_witness.is_some()) << 2;
        Some(Evaluation {
            counter,
            orbit,
            verdict,
            fp_full,
            recheck,
            digest: splitmix64(code.wrapping_mul(8) ^ bits),
            rows: flat.to_vec(),
        })
    }
}

struct Accumulator {
    report: ScanReport,
    digest: u64,
}

impl Accumulator {
    fn absorb(&mut self, ev: Evaluation, matrix: impl Fn(&[u32]) -> MatrixFp) {
        let t = &mut self.report.totals;
        let v = &ev.verdict;
        t.classes += 1;
        t.covered += ev.orbit;
        t.fp_identity += u64::from(v.fp_identity);
        t.z_identity += u64::from(v.z_identity);
        t.counterexamples += u64::from(v.is_counterexample());
        self.digest = self.digest.wrapping_add(ev.digest);

        let mut flags = Vec::new();
        if !v.consistent {
            flags.push(FlagKind::CharacterMismatch);
        }
        if !v.mod_p_compatible() {
            flags.push(FlagKind::ModPIncompatible);
        }
        if let Some(full) = ev.fp_full {
            t.fp_modes_compared += 1;
            if full != v.fp_identity {
                t.fp_mode_disagreements += 1;
                flags.push(FlagKind::FpModeMismatch);
            }
        }
        if let Some((fp_dense, z_dense)) = ev.recheck {
            if fp_dense && !z_dense {
                flags.push(FlagKind::Violation);
            } else {
                flags.push(FlagKind::ReverificationFailed);
            }
        }
        if v.is_counterexample() {
            flags.push(FlagKind::Counterexample);
        }
        if flags.is_empty() {
            return;
        }
        let m = matrix(&ev.rows);
        for kind in flags {
            let item = FlaggedMatrix {
                counter: ev.counter,
                kind,
                matrix: m.clone(),
                verdict: ev.verdict.clone(),
            };
            match kind {
                FlagKind::Violation => {
                    t.violations += 1;
                    self.report.violations.push(item);
                }
                FlagKind::Counterexample => self.report.counterexamples.push(item),
                _ => {
                    t.inconsistencies += 1;
                    self.report.inconsistencies.push(item);
                }
            }
        }
    }

    fn finish(mut self, partial: bool) -> ScanReport {
        self.report.partial = partial;
        self.report.digest = format_digest(self.digest);
        self.report.sort_lists();
        self.report
    }
}

/// Number of invariance cases run before trusting canonical forms.
pub const CANONICAL_GATE_CASES: usize = 50;

const BATCH: usize = 4096;

/// Runs a scan, resuming from `cfg.checkpoint` if that file exists.
pub fn scan(cfg: &ScanConfig) -> Result<ScanReport> {
    check_scan_feasible(cfg.p, cfg.n, cfg.canonicalize, cfg.shard)?;
    let canonicalize = cfg.canonicalize
        && suites::monomial_invariance(cfg.p, cfg.n, CANONICAL_GATE_CASES, suites::DEFAULT_SEED)
            .passed();
    let hash = config_hash(cfg);

    let mut start_counter = 0;
    let mut acc = Accumulator {
        report: ScanReport::empty(cfg, canonicalize),
        digest: 0,
    };
    if let Some(path) = &cfg.checkpoint {
        if let Some(cp) = Checkpoint::load(path)? {
            cp.verify(&hash)?;
            if cp.finished {
                return Ok(cp.report);
            }
            start_counter = cp.next_counter;
            acc.digest = cp.report.digest_value()?;
            acc.report = cp.report;
        }
    }

    let ctx = GroupContext::new(cfg.p, cfg.n)?;
    let evaluator = Evaluator {
        ctx,
        transforms: canonicalize.then(|| ColumnTransforms::new(cfg.p, cfg.n)),
        cross_check_full: cfg.cross_check_full,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;

    let mut walker = Walker::new(cfg.p, cfg.n, canonicalize);
    let mut counter = 0u64;
    while counter < start_counter {
        if walker.advance().is_none() {
            return Err(Error::Checkpoint(format!(
                "checkpoint counter {start_counter} is past the end of the enumeration"
            )));
        }
        counter += 1;
    }

    let started = Instant::now();
    let mut since_checkpoint = 0u64;
    let mut entries = Vec::new();
    loop {
        let mut batch: Vec<(u64, Vec<u32>)> = Vec::with_capacity(BATCH);
        let mut exhausted = false;
        while batch.len() < BATCH {
            let Some(rows) = walker.advance() else {
                exhausted = true;
                break;
            };
            let rows = rows.to_vec();
            let c = counter;
            counter += 1;
            if cfg.shard.owns(c) {
                walker.entries(&rows, &mut entries);
                batch.push((c, entries.clone()));
            }
        }
        acc.report.totals.enumerated += batch.len() as u64;
        since_checkpoint += batch.len() as u64;
        let evals: Vec<Option<Evaluation>> = pool.install(|| {
            batch
                .par_iter()
                .map_init(ReducedScratch::default, |s, (c, flat)| {
                    evaluator.evaluate(*c, flat, s)
                })
                .collect()
        });
        for ev in evals.into_iter().flatten() {
            acc.absorb(ev, |flat| evaluator.matrix(flat));
        }
        if exhausted {
            break;
        }
        let out_of_time = cfg.max_duration.is_some_and(|d| started.elapsed() >= d);
        if let Some(path) = &cfg.checkpoint {
            if out_of_time || since_checkpoint >= cfg.checkpoint_interval {
                acc.report.digest = format_digest(acc.digest);
                Checkpoint::new(&hash, counter, false, acc.report.clone()).store(path)?;
                since_checkpoint = 0;
            }
        }
        if out_of_time {
            return Ok(acc.finish(true));
        }
    }
    let report = acc.finish(false);
    if let Some(path) = &cfg.checkpoint {
        Checkpoint::new(&hash, counter, true, report.clone()).store(path)?;
    }
    Ok(report)
}

/// The orbit representative of a flagged matrix, for comparing flagged sets
/// across canonicalized and plain scans.
pub fn flagged_orbits(list: &[FlaggedMatrix]) -> Vec<MatrixFp> {
    let mut out: Vec<MatrixFp> = list.iter().map(|f| canonical_form(&f.matrix)).collect();
    out.sort_by_key(|m| m.to_rows());
    out.dedup();
    out
}

/// Convenience: the matrix for an entry vector, used by tests and examples.
pub fn matrix_from_flat(p: u32, n: usize, flat: &[u32]) -> Result<MatrixFp> {
    let ctx = GroupContext::new(p, n)?;
    if flat.len() != n * n {
        return Err(Error::NotSquare {
            rows: n,
            cols: flat.len() / n.max(1),
        });
    }
    let rows = flat
        .chunks(n)
        .map(|r| ctx.vector(r.to_vec()))
        .collect::<Result<Vec<GroupVector>>>()?;
    MatrixFp::new(ctx, rows)
}
