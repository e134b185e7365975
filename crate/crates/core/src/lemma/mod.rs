//! Step-by-step verification of the reduction argument on concrete matrices.
//!
//! Each step yields a [`Check`]. Steps marked `unconditional` follow from the
//! F_p identity alone (or are plain algebra) and must hold whenever they are
//! not skipped. The remaining steps are statements over Z, or consequences
//! of them, that the argument obtains from the conjectured implication; at
//! p = 2 and p = 3 they can genuinely fail, so their outcome is recorded
//! without being asserted.
//!
//! Axis indices are 0-based throughout the library.

mod cascade;
mod vprime;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use cascade::{derivation_cascade, CascadeReport};
pub use vprime::{
    block_targets, build_vprime, check_factorization, check_feasible, check_ut_identities,
    is_good_for_bases, u_t, verify_bases, vprime_dimension, xprime_search, BasesCheck, BlockRoute,
    BlockSolution, FactorizationCheck, VPrimeConstruction, XPrimeSearch, DEFAULT_LAB_BUDGET,
    LARGE_LAB_BUDGET,
};

use crate::binomial::{fp_identity_test, t_decompose, BinomialProduct, FpMode};
use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupVector};
use crate::matrix::MatrixFp;
use crate::ring::{GroupRingElement, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Fails { witness: String },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub unconditional: bool,
    pub outcome: Outcome,
    pub elapsed_us: u64,
}

impl Check {
    pub fn from_bool(unconditional: bool, holds: bool, witness: impl FnOnce() -> String) -> Self {
        let outcome = if holds {
            Outcome::Holds
        } else {
            Outcome::Fails { witness: witness() }
        };
        Check {
            unconditional,
            outcome,
            elapsed_us: 0,
        }
    }

    pub fn skipped(unconditional: bool, reason: impl Into<String>) -> Self {
        Check {
            unconditional,
            outcome: Outcome::Skipped {
                reason: reason.into(),
            },
            elapsed_us: 0,
        }
    }

    pub fn with_time(mut self, us: u64) -> Self {
        self.elapsed_us = us;
        self
    }

    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.outcome, Outcome::Skipped { .. })
    }

    /// An unconditional step that failed: a genuine inconsistency.
    pub fn is_hard_failure(&self) -> bool {
        self.unconditional && matches!(self.outcome, Outcome::Fails { .. })
    }
}

pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_micros() as u64)
}

/// `a_j = a'_j + a_{j,axis} e_axis` for every row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowSplit {
    pub axis: usize,
    pub a_prime: Vec<GroupVector>,
    pub pivots: Vec<u32>,
}

pub fn split_rows(m: &MatrixFp, axis: usize) -> Result<RowSplit> {
    m.ctx().check_axis(axis)?;
    Ok(RowSplit {
        axis,
        a_prime: m.rows().iter().map(|r| r.with_zeroed(axis)).collect(),
        pivots: m.rows().iter().map(|r| r.get(axis)).collect(),
    })
}

impl RowSplit {
    /// Rebuilds `a'_j + a_{j,axis} e_axis`.
    pub fn reconstruct(&self, ctx: GroupContext) -> Result<Vec<GroupVector>> {
        let e = ctx.basis(self.axis)?;
        Ok(self
            .a_prime
            .iter()
            .zip(&self.pivots)
            .map(|(a, &c)| ctx.add(a, &ctx.scale(&e, c)))
            .collect())
    }
}

/// Checks `1 - g^{a_j} = (1 - g^{a'_j}) + y_j (1 - g^{e_axis})` in Z[G] with
/// `y_j = g^{a'_j} (1 + g^{e_axis} + ... + g^{(a_{j,axis} - 1) e_axis})`.
pub fn expansion_check(m: &MatrixFp, axis: usize) -> Result<bool> {
    let ctx = m.ctx();
    let split = split_rows(m, axis)?;
    let e = ctx.basis(axis)?;
    for (j, a) in m.rows().iter().enumerate() {
        let y = expansion_cofactor(ctx, &split.a_prime[j], &e, split.pivots[j])?;
        let lhs = GroupRingElement::binomial(ctx, Ring::Z, a)?;
        let rhs = GroupRingElement::binomial(ctx, Ring::Z, &split.a_prime[j])?
            .add(&y.mul_binomial(&e)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The element `y_j` of the expansion.
pub fn expansion_cofactor(
    ctx: GroupContext,
    a_prime: &GroupVector,
    e: &GroupVector,
    pivot: u32,
) -> Result<GroupRingElement> {
    let mut y = GroupRingElement::zero(ctx, Ring::Z);
    let mut step = ctx.zero_vector();
    for _ in 0..pivot {
        y = y.add(&GroupRingElement::monomial(
            ctx,
            Ring::Z,
            &ctx.add(a_prime, &step),
        )?)?;
        step = ctx.add(&step, e);
    }
    Ok(y)
}

/// The coefficient b_1 of `(1 - g^{e_axis})` computed two ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct B1Extraction {
    /// `prod_{j != axis} (1 - g^{e_j}) prod_j (1 - g^{a'_j})`, supported on G'.
    pub direct: GroupRingElement,
    /// Part 1 of the t-adic decomposition of the full F_p product.
    pub via_decomposition: GroupRingElement,
}

impl B1Extraction {
    pub fn routes_agree(&self) -> bool {
        self.direct == self.via_decomposition
    }

    pub fn is_zero(&self) -> bool {
        self.direct.is_zero()
    }
}

/// Both routes to b_1, regardless of whether the F_p identity holds.
pub fn b1_routes(m: &MatrixFp, axis: usize) -> Result<B1Extraction> {
    let ctx = m.ctx();
    let split = split_rows(m, axis)?;
    let complement: Vec<GroupVector> = (0..ctx.n())
        .filter(|&j| j != axis)
        .map(|j| ctx.basis(j).unwrap())
        .collect();
    let direct = BinomialProduct::new(ctx, complement.into_iter().chain(split.a_prime).collect())?
        .dense_product(Ring::Fp)?;
    let full = BinomialProduct::for_matrix(m).dense_product(Ring::Fp)?;
    let via_decomposition = t_decompose(&full, axis)?.part(1).clone();
    Ok(B1Extraction {
        direct,
        via_decomposition,
    })
}

/// b_1 when the F_p identity holds, `None` otherwise.
pub fn extract_b1(m: &MatrixFp, axis: usize) -> Result<Option<B1Extraction>> {
    if !fp_identity_test(m, FpMode::Full)? {
        return Ok(None);
    }
    b1_routes(m, axis).map(Some)
}

/// The three predicates describing the kernel of multiplication by
/// `1 - g^{e_axis}` and its square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub annihilated_by_t: bool,
    pub annihilated_by_t_squared: bool,
    pub constant_on_cosets: bool,
}

impl KernelCheck {
    pub fn agree(&self) -> bool {
        self.annihilated_by_t == self.annihilated_by_t_squared
            && self.annihilated_by_t == self.constant_on_cosets
    }
}

pub fn kernel_equivalence_check(x: &GroupRingElement, axis: usize) -> Result<KernelCheck> {
    if x.ring() != Ring::Z {
        return Err(Error::WrongRing("Z"));
    }
    let ctx = x.ctx();
    let e = ctx.basis(axis)?;
    let once = x.mul_binomial(&e)?;
    let twice = once.mul_binomial(&e)?;
    // c_v = c_{v - e}: compare x with its shift by e.
    let constant_on_cosets = x.shift(&e)? == *x;
    Ok(KernelCheck {
        annihilated_by_t: once.is_zero(),
        annihilated_by_t_squared: twice.is_zero(),
        constant_on_cosets,
    })
}

#[derive(Debug, Clone)]
pub struct LabOptions {
    pub budget: usize,
    pub fixed_head: Option<Vec<u32>>,
}

impl Default for LabOptions {
    fn default() -> Self {
        LabOptions {
            budget: DEFAULT_LAB_BUDGET,
            fixed_head: None,
        }
    }
}

/// Everything checked for one matrix and one axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub matrix: MatrixFp,
    pub axis: usize,
    pub fp_identity: bool,
    pub split: RowSplit,
    pub expansion: Check,
    pub b1_routes_agree: Check,
    pub b1_zero: Check,
    pub row_order: Option<Vec<usize>>,
    pub bases: Check,
    pub ut_identities: Check,
    pub factorization: Check,
    pub xprime_witness: Check,
    pub xprime: Option<XPrimeSearch>,
    pub xprime_cross_check: Check,
    pub ideal_membership: Check,
    pub q_kernel: Check,
    pub q_annihilated: Check,
    pub reduced_identity: Check,
    pub cascade: CascadeReport,
    pub total_us: u64,
}

impl LemmaReport {
    pub fn checks(&self) -> Vec<(&'static str, &Check)> {
        let mut v = vec![
            ("expansion", &self.expansion),
            ("b1_routes_agree", &self.b1_routes_agree),
            ("b1_zero", &self.b1_zero),
            ("bases", &self.bases),
            ("ut_identities", &self.ut_identities),
            ("factorization", &self.factorization),
            ("xprime_witness", &self.xprime_witness),
            ("xprime_cross_check", &self.xprime_cross_check),
            ("ideal_membership", &self.ideal_membership),
            ("q_kernel", &self.q_kernel),
            ("q_annihilated", &self.q_annihilated),
            ("reduced_identity", &self.reduced_identity),
        ];
        v.extend(self.cascade.checks());
        v
    }

    /// Names of unconditional steps that failed.
    pub fn hard_failures(&self) -> Vec<&'static str> {
        self.checks()
            .into_iter()
            .filter(|(_, c)| c.is_hard_failure())
            .map(|(name, _)| name)
            .collect()
    }
}

/// Runs every step for `m` along `axis`.
pub fn check_all(m: &MatrixFp, axis: usize, opts: &LabOptions) -> Result<LemmaReport> {
    let start = Instant::now();
    m.require_nonsingular()?;
    let ctx = m.ctx();
    ctx.check_axis(axis)?;
    if ctx.n() >= 2 {
        check_feasible(ctx.p(), ctx.n(), opts.budget)?;
    }
    let fp_identity = fp_identity_test(m, FpMode::Full)?;
    let split = split_rows(m, axis)?;

    let (ok, us) = timed(|| expansion_check(m, axis));
    let expansion = Check::from_bool(true, ok?, || "expansion mismatch".into()).with_time(us);

    let (b1, us) = timed(|| b1_routes(m, axis));
    let b1 = b1?;
    let b1_routes_agree = Check::from_bool(true, b1.routes_agree(), || {
        format!(
            "direct {} vs decomposition {}",
            b1.direct, b1.via_decomposition
        )
    })
    .with_time(us);
    let b1_zero = if fp_identity {
        Check::from_bool(true, b1.is_zero(), || format!("b_1 = {}", b1.direct))
    } else {
        Check::skipped(true, "the F_p identity does not hold")
    };

    let mut row_order = None;
    let mut xprime = None;
    let (bases, ut_identities, factorization, xprime_witness, xprime_cross_check);
    if ctx.n() < 2 {
        let reason = "n = 1: the complementary subgroup is trivial";
        bases = Check::skipped(true, reason);
        ut_identities = Check::skipped(true, reason);
        factorization = Check::skipped(true, reason);
        xprime_witness = Check::skipped(false, reason);
        xprime_cross_check = Check::skipped(true, reason);
    } else {
        let c = build_vprime(m, axis, opts.budget)?;
        row_order = Some(c.row_order.clone());

        let (bc, us) = timed(|| verify_bases(&c));
        bases = Check::from_bool(true, bc.both_bases(), || {
            format!(
                "ranks {} and {} in dimension {}",
                bc.rank_b1, bc.rank_b2, bc.dimension
            )
        })
        .with_time(us);

        let ut_ok = if b1_zero.holds() {
            let (ut, us) = timed(|| check_ut_identities(&c));
            let ut = ut?;
            let bad: Vec<String> = ut
                .iter()
                .enumerate()
                .filter(|(_, &ok)| !ok)
                .map(|(t, _)| t.to_string())
                .collect();
            ut_identities = Check::from_bool(true, bad.is_empty(), || {
                format!("U_t (1 - g^v_t) != 0 for t in {{{}}}", bad.join(","))
            })
            .with_time(us);
            ut_identities.holds()
        } else {
            ut_identities = Check::skipped(true, "b_1 is not known to vanish");
            false
        };

        factorization = if ut_ok {
            let (fc, us) = timed(|| check_factorization(&c));
            let fc = fc?;
            Check::from_bool(true, fc.sides_equal, || {
                format!(
                    "sides differ (lhs zero: {}, rhs zero: {})",
                    fc.lhs_zero, fc.rhs_zero
                )
            })
            .with_time(us)
        } else {
            Check::skipped(true, "the U_t identities were not established")
        };

        let (search, us) = timed(|| xprime_search(&c, opts.fixed_head.as_deref()));
        let search = search?;
        xprime_witness = match &search.witness {
            Some(x) if !is_good_for_bases(&c, x) => Check {
                unconditional: true,
                outcome: Outcome::Fails {
                    witness: format!(
                        "search returned {x}, which pairs to zero with a basis vector"
                    ),
                },
                elapsed_us: us,
            },
            Some(_) => Check::from_bool(false, true, String::new).with_time(us),
            None => Check::from_bool(false, false, || {
                "no x in V' pairs nonzero with all of B1 and B2".into()
            })
            .with_time(us),
        };
        xprime_cross_check = if opts.fixed_head.is_some() {
            Check::skipped(true, "search restricted to a fixed head")
        } else {
            let (z, us) = timed(|| c.full_product().z_identity_holds());
            Check::from_bool(true, search.witness.is_some() == !z, || {
                format!(
                    "search found witness: {}, Z identity holds: {z}",
                    search.witness.is_some()
                )
            })
            .with_time(us)
        };
        xprime = Some(search);
    }

    // Q = prod_{j != axis} (1 - g^{e_j}) prod_j (1 - g^{a_j}) over Z.
    let e: Vec<GroupVector> = (0..ctx.n()).map(|j| ctx.basis(j).unwrap()).collect();
    let q_product = BinomialProduct::new(
        ctx,
        e.iter()
            .enumerate()
            .filter(|&(j, _)| j != axis)
            .map(|(_, v)| v.clone())
            .chain(m.rows().iter().cloned())
            .collect(),
    )?;
    let big_q = q_product.dense_product(Ring::Z)?;
    let in_ideal = big_q.in_binomial_ideal(axis)?;
    let ideal_membership = Check::from_bool(false, in_ideal, || {
        "the projection of Q along e_axis is nonzero".into()
    });
    let q_kernel = if in_ideal {
        let q = big_q.divide_by_binomial(axis)?;
        let k = kernel_equivalence_check(&q, axis)?;
        Check::from_bool(
            true,
            k.agree() && q.mul_binomial(&e[axis])? == big_q,
            || format!("{k:?}"),
        )
    } else {
        Check::skipped(true, "Q is not in the ideal")
    };
    let q_annihilated = Check::from_bool(false, big_q.mul_binomial(&e[axis])?.is_zero(), || {
        "Q (1 - g^e_axis) != 0 in Z[G]".into()
    });
    let reduced_identity = Check::from_bool(false, big_q.is_zero(), || "Q != 0 in Z[G]".into());

    let cascade = derivation_cascade(m)?;

    Ok(LemmaReport {
        matrix: m.clone(),
        axis,
        fp_identity,
        split,
        expansion,
        b1_routes_agree,
        b1_zero,
        row_order,
        bases,
        ut_identities,
        factorization,
        xprime_witness,
        xprime,
        xprime_cross_check,
        ideal_membership,
        q_kernel,
        q_annihilated,
        reduced_identity,
        cascade,
        total_us: start.elapsed().as_micros() as u64,
    })
}

/// Rejects inputs that [`check_all`] cannot process.
pub fn validate_axis(m: &MatrixFp, axis: usize) -> Result<()> {
    if axis >= m.n() {
        return Err(Error::AxisOutOfRange { axis, n: m.n() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[&[i64]]) -> MatrixFp {
        MatrixFp::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn split_examples() {
        let s = split_rows(&m(3, &[&[1, 1], &[1, 2]]), 0).unwrap();
        assert_eq!(
            s.a_prime
                .iter()
                .map(|v| v.coords().to_vec())
                .collect::<Vec<_>>(),
            vec![vec![0, 1], vec![0, 2]]
        );
        assert_eq!(s.pivots, vec![1, 1]);

        let mat = m(2, &[&[1, 1], &[1, 0]]);
        let s = split_rows(&mat, 1).unwrap();
        assert_eq!(
            s.a_prime
                .iter()
                .map(|v| v.coords().to_vec())
                .collect::<Vec<_>>(),
            vec![vec![1, 0], vec![1, 0]]
        );
        assert_eq!(s.pivots, vec![1, 0]);
        assert_eq!(s.reconstruct(mat.ctx()).unwrap(), mat.rows());
    }

    #[test]
    fn expansion_examples() {
        let ctx = GroupContext::new(5, 2).unwrap();
        let e = ctx.basis(0).unwrap();
        let a = ctx.vector([0, 3]).unwrap();
        assert!(expansion_cofactor(ctx, &a, &e, 0).unwrap().is_zero());
        assert_eq!(
            expansion_cofactor(ctx, &a, &e, 1).unwrap(),
            GroupRingElement::monomial(ctx, Ring::Z, &a).unwrap()
        );
        assert!(expansion_check(&m(3, &[&[1, 1], &[1, 2]]), 0).unwrap());
        assert!(expansion_check(&m(5, &[&[4, 1], &[3, 2]]), 1).unwrap());
    }

    #[test]
    fn b1_examples() {
        let b = extract_b1(&m(3, &[&[1, 1], &[1, 2]]), 0).unwrap().unwrap();
        assert!(b.is_zero() && b.routes_agree());
        let b = extract_b1(&m(2, &[&[1, 0], &[0, 1]]), 0).unwrap().unwrap();
        assert!(b.is_zero() && b.routes_agree());
        assert!(extract_b1(&m(5, &[&[1, 0], &[0, 1]]), 0).unwrap().is_none());
        let b = b1_routes(&m(5, &[&[1, 1], &[2, 1]]), 1).unwrap();
        assert!(b.routes_agree() && !b.is_zero());
    }

    #[test]
    fn kernel_examples() {
        let ctx = GroupContext::new(3, 2).unwrap();
        for axis in 0..2 {
            let e = ctx.basis(axis).unwrap();
            let mut coset = GroupRingElement::zero(ctx, Ring::Z);
            let mut v = ctx.zero_vector();
            for _ in 0..3 {
                coset = coset
                    .add(&GroupRingElement::monomial(ctx, Ring::Z, &v).unwrap())
                    .unwrap();
                v = ctx.add(&v, &e);
            }
            let k = kernel_equivalence_check(&coset, axis).unwrap();
            assert!(k.annihilated_by_t && k.annihilated_by_t_squared && k.constant_on_cosets);
            let k = kernel_equivalence_check(&GroupRingElement::one(ctx, Ring::Z), axis).unwrap();
            assert!(!k.annihilated_by_t && !k.annihilated_by_t_squared && !k.constant_on_cosets);
        }
    }

    #[test]
    fn p3_counterexample_report() {
        let r = check_all(&m(3, &[&[1, 1], &[1, 2]]), 0, &LabOptions::default()).unwrap();
        assert!(r.hard_failures().is_empty(), "{:?}", r.hard_failures());
        for c in [
            &r.expansion,
            &r.b1_routes_agree,
            &r.b1_zero,
            &r.bases,
            &r.ut_identities,
            &r.factorization,
        ] {
            assert!(c.holds());
        }
        assert!(r.q_annihilated.holds());
    }

    #[test]
    fn gating_at_p5_identity() {
        let r = check_all(&m(5, &[&[1, 0], &[0, 1]]), 0, &LabOptions::default()).unwrap();
        assert!(!r.fp_identity);
        assert!(r.b1_zero.is_skipped());
        assert!(r.ut_identities.is_skipped());
        assert!(r.factorization.is_skipped());
        assert!(r.cascade.checks().iter().all(|(_, c)| c.is_skipped()));
        assert!(r.bases.holds());
        assert!(r.xprime_witness.holds());
        assert!(r.hard_failures().is_empty());
    }

    #[test]
    fn one_dimensional_matrices_skip_vprime() {
        let r = check_all(&m(2, &[&[1]]), 0, &LabOptions::default()).unwrap();
        assert!(r.bases.is_skipped() && r.factorization.is_skipped());
        assert!(r.hard_failures().is_empty());
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = check_all(&m(3, &[&[1, 1], &[1, 2]]), 1, &LabOptions::default()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: LemmaReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
