//! Seeded self-checks: oracle equivalence, the Leibniz rule, the kernel fact
//! and monomial invariance. Output is deterministic for a given seed.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ajt::verdict;
use crate::binomial::{derivation, fp_identity_test, BinomialProduct, FpMode};
use crate::group::{GroupContext, GroupVector};
use crate::lemma::kernel_equivalence_check;
use crate::matrix::{MatrixFp, MonomialMatrix};
use crate::ring::{GroupRingElement, Ring};

pub const DEFAULT_SEED: u64 = 0x00A1_7E55;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.to_string(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

fn rng_for(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn random_vector<R: Rng + ?Sized>(ctx: GroupContext, rng: &mut R) -> GroupVector {
    let p = ctx.p();
    ctx.vector(
        (0..ctx.n())
            .map(|_| rng.gen_range(0..p))
            .collect::<Vec<_>>(),
    )
    .expect("reduced coordinates")
}

pub fn random_nonsingular<R: Rng + ?Sized>(ctx: GroupContext, rng: &mut R) -> MatrixFp {
    loop {
        let rows = (0..ctx.n()).map(|_| random_vector(ctx, rng)).collect();
        let m = MatrixFp::new(ctx, rows).expect("square");
        if m.is_nonsingular() {
            return m;
        }
    }
}

/// Random element with coefficients in `-bound..=bound` (reduced for F_p).
pub fn random_element<R: Rng + ?Sized>(
    ctx: GroupContext,
    ring: Ring,
    bound: i64,
    rng: &mut R,
) -> GroupRingElement {
    let coeffs = (0..ctx.order())
        .map(|_| rng.gen_range(-bound..=bound))
        .collect();
    GroupRingElement::from_coeffs(ctx, ring, coeffs).expect("sized table")
}

/// All multisets of size `k` from `items`, as index lists in nondecreasing order.
fn multisets(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            go(i, len, k, cur, out);
            cur.pop();
        }
    }
    go(0, len, k, &mut cur, &mut out);
    out
}

fn z_case(ctx: GroupContext, factors: Vec<GroupVector>, res: &mut SuiteResult) {
    let prod = BinomialProduct::new(ctx, factors).expect("vectors from ctx");
    let dense = prod.dense_product(Ring::Z).expect("small products fit");
    let fast = prod.z_identity_holds();
    res.record(fast == dense.is_zero(), || {
        let fs: Vec<String> = prod.factors().iter().map(|v| v.to_string()).collect();
        format!(
            "p={} factors {}: character test {fast}, dense {}",
            ctx.p(),
            fs.join(" "),
            dense.is_zero()
        )
    });
}

/// Character test against the dense Z product: every multiset of at most
/// `max_factors` nonzero vectors for p in {2, 3}, n = 2, plus `random`
/// seeded cases at p = 5 with n <= 3 and up to 8 factors.
pub fn oracle_equivalence_z(max_factors: usize, random: usize, seed: u64) -> SuiteResult {
    let mut res = SuiteResult::new("oracle equivalence (Z)");
    for p in [2, 3] {
        let ctx = GroupContext::new(p, 2).unwrap();
        let nonzero: Vec<GroupVector> = ctx.vectors().filter(|v| !v.is_zero()).collect();
        for k in 0..=max_factors {
            for idx in multisets(nonzero.len(), k) {
                z_case(
                    ctx,
                    idx.iter().map(|&i| nonzero[i].clone()).collect(),
                    &mut res,
                );
            }
        }
    }
    let mut rng = rng_for(seed, 1);
    for _ in 0..random {
        let n = rng.gen_range(1..=3);
        let ctx = GroupContext::new(5, n).unwrap();
        let m = rng.gen_range(0..=8);
        let factors = (0..m).map(|_| random_vector(ctx, &mut rng)).collect();
        z_case(ctx, factors, &mut res);
    }
    res
}

/// Dense and reduced F_p tests on seeded random nonsingular matrices.
pub fn oracle_equivalence_fp(cases: usize, seed: u64) -> SuiteResult {
    let mut res = SuiteResult::new("oracle equivalence (F_p)");
    let mut rng = rng_for(seed, 2);
    let sizes = [
        (2, 2),
        (2, 3),
        (3, 2),
        (3, 3),
        (5, 2),
        (5, 3),
        (7, 2),
        (7, 3),
    ];
    for i in 0..cases {
        let (p, n) = sizes[i % sizes.len()];
        let m = random_nonsingular(GroupContext::new(p, n).unwrap(), &mut rng);
        let full = fp_identity_test(&m, FpMode::Full).unwrap();
        let reduced = fp_identity_test(&m, FpMode::Reduced).unwrap();
        res.record(full == reduced, || {
            format!("p={p} M={m}: full {full}, reduced {reduced}")
        });
    }
    res
}

/// `d_i(xy) = d_i(x) y + x d_i(y)` in F_p[G] for p in {2, 3, 5}, n in {1, 2}.
pub fn leibniz(cases: usize, seed: u64) -> SuiteResult {
    let mut res = SuiteResult::new("Leibniz rule");
    let mut rng = rng_for(seed, 3);
    for p in [2, 3, 5] {
        for n in [1, 2] {
            let ctx = GroupContext::new(p, n).unwrap();
            for _ in 0..cases {
                let x = random_element(ctx, Ring::Fp, p as i64, &mut rng);
                let y = random_element(ctx, Ring::Fp, p as i64, &mut rng);
                let i = rng.gen_range(0..n);
                let lhs = derivation(&x.mul_general(&y).unwrap(), i).unwrap();
                let rhs = derivation(&x, i)
                    .unwrap()
                    .mul_general(&y)
                    .unwrap()
                    .add(&x.mul_general(&derivation(&y, i).unwrap()).unwrap())
                    .unwrap();
                res.record(lhs == rhs, || format!("p={p} n={n} axis {i}: x={x} y={y}"));
            }
        }
    }
    res
}

/// The three kernel predicates on random Z elements and on constructed
/// kernel members (coset sums times random elements).
pub fn kernel(random: usize, constructed: usize, seed: u64) -> SuiteResult {
    let mut res = SuiteResult::new("kernel fact");
    let mut rng = rng_for(seed, 4);
    for p in [2, 3, 5] {
        for n in [1, 2] {
            let ctx = GroupContext::new(p, n).unwrap();
            let check =
                |x: &GroupRingElement, axis: usize, expect_kernel: bool, res: &mut SuiteResult| {
                    let k = kernel_equivalence_check(x, axis).unwrap();
                    let ok = k.agree() && (!expect_kernel || k.annihilated_by_t);
                    res.record(ok, || format!("p={p} n={n} axis {axis}: {k:?} for x={x}"));
                };
            for _ in 0..random {
                let x = random_element(ctx, Ring::Z, 3, &mut rng);
                let axis = rng.gen_range(0..n);
                check(&x, axis, false, &mut res);
            }
            for _ in 0..constructed {
                let axis = rng.gen_range(0..n);
                let e = ctx.basis(axis).unwrap();
                let mut coset = GroupRingElement::zero(ctx, Ring::Z);
                let mut v = ctx.zero_vector();
                for _ in 0..p {
                    coset = coset
                        .add(&GroupRingElement::monomial(ctx, Ring::Z, &v).unwrap())
                        .unwrap();
                    v = ctx.add(&v, &e);
                }
                let y = random_element(ctx, Ring::Z, 3, &mut rng);
                check(&coset.mul_general(&y).unwrap(), axis, true, &mut res);
            }
        }
    }
    res
}

/// Verdict booleans are unchanged by `M -> L M R^T` with L, R monomial.
pub fn monomial_invariance(p: u32, n: usize, cases: usize, seed: u64) -> SuiteResult {
    let mut res = SuiteResult::new(&format!("monomial invariance p={p} n={n}"));
    let Ok(ctx) = GroupContext::new(p, n) else {
        return res;
    };
    let mut rng = rng_for(seed, 5 + (p as u64) * 16 + n as u64);
    for _ in 0..cases {
        let m = random_nonsingular(ctx, &mut rng);
        let l = MonomialMatrix::random(n, p, &mut rng);
        let r = MonomialMatrix::random(n, p, &mut rng);
        let t = m.monomial_transform(&l, &r);
        let a = verdict(&m).unwrap();
        let b = verdict(&t).unwrap();
        let same = (a.fp_identity, a.z_identity, a.is_counterexample())
            == (b.fp_identity, b.z_identity, b.is_counterexample());
        res.record(same, || format!("M={m} and L M R^T={t} differ"));
    }
    res
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub quick: bool,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    /// Fixed-width pass/fail table without timings.
    pub fn table(&self) -> String {
        let width = self
            .suites
            .iter()
            .map(|s| s.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let mut out = String::new();
        writeln!(
            out,
            "seed {:#x}{}",
            self.seed,
            if self.quick { " (quick)" } else { "" }
        )
        .unwrap();
        writeln!(
            out,
            "{:<width$}  {:>7}  {:>8}  result",
            "suite", "cases", "failures"
        )
        .unwrap();
        for s in &self.suites {
            writeln!(
                out,
                "{:<width$}  {:>7}  {:>8}  {}",
                s.name,
                s.cases,
                s.failures,
                if s.passed() { "pass" } else { "FAIL" }
            )
            .unwrap();
            if let Some(f) = &s.first_failure {
                writeln!(out, "    first failure: {f}").unwrap();
            }
        }
        out
    }
}

/// Every suite at its pinned size, or at reduced counts with `quick`.
pub fn selftest(seed: u64, quick: bool) -> SelftestReport {
    let (max_factors, z_random, fp_cases, leibniz_cases, kernel_random, kernel_built, invariance) =
        if quick {
            (4, 100, 100, 50, 20, 10, 20)
        } else {
            (6, 1000, 500, 500, 200, 50, 200)
        };
    let mut suites = vec![
        oracle_equivalence_z(max_factors, z_random, seed),
        oracle_equivalence_fp(fp_cases, seed),
        leibniz(leibniz_cases, seed),
        kernel(kernel_random, kernel_built, seed),
    ];
    for (p, n) in [(2, 2), (3, 2), (5, 2)] {
        suites.push(monomial_invariance(p, n, invariance, seed));
    }
    SelftestReport {
        seed,
        quick,
        suites,
    }
}
