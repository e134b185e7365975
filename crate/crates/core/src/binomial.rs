//! Products of binomials `prod_j (1 - g^{v_j})` and the tools used to test
//! them: the dense product, the character criterion over Z, the F_p identity
//! test for matrices, the t-adic decomposition along a coordinate and the
//! derivation `d_i`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupVector};
use crate::matrix::MatrixFp;
use crate::ring::{GroupRingElement, Ring};
use crate::truncated::{self, ReducedScratch};

/// The multiset of exponent vectors of `prod_j (1 - g^{v_j})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialProduct {
    ctx: GroupContext,
    factors: Vec<GroupVector>,
}

impl BinomialProduct {
    pub fn new(ctx: GroupContext, factors: Vec<GroupVector>) -> Result<Self> {
        for v in &factors {
            ctx.check_vector(v)?;
        }
        Ok(BinomialProduct { ctx, factors })
    }

    pub fn ctx(&self) -> GroupContext {
        self.ctx
    }

    pub fn factors(&self) -> &[GroupVector] {
        &self.factors
    }

    /// `prod_i (1 - g^{e_i}) * prod_j (1 - g^{a_j})` for the rows a_j of `m`.
    pub fn for_matrix(m: &MatrixFp) -> Self {
        let ctx = m.ctx();
        let factors = (0..ctx.n())
            .map(|i| ctx.basis(i).unwrap())
            .chain(m.rows().iter().cloned())
            .collect();
        BinomialProduct { ctx, factors }
    }

    /// Left fold of `mul_binomial` starting from 1.
    pub fn dense_product(&self, ring: Ring) -> Result<GroupRingElement> {
        let mut acc = GroupRingElement::one(self.ctx, ring);
        for v in &self.factors {
            acc = acc.mul_binomial(v)?;
        }
        if ring == Ring::Z && self.factors.len() < 127 {
            debug_assert!(acc.l1_norm() <= 1u128 << self.factors.len());
        }
        Ok(acc)
    }

    /// Smallest x (mixed-radix order) with `<x, v_j> != 0` for every factor.
    ///
    /// The complex character attached to x sends the product to
    /// `prod_j (1 - w^{<x, v_j>})`, which is nonzero exactly when no inner
    /// product vanishes, so a witness certifies the Z product is nonzero.
    pub fn good_x_witness(&self) -> Option<GroupVector> {
        let p = self.ctx.p();
        let n = self.ctx.n();
        let m = self.factors.len();
        if self.factors.iter().any(|v| v.is_zero()) {
            return None;
        }
        if m == 0 {
            return Some(self.ctx.zero_vector());
        }
        let mut digits = vec![0u32; n];
        let mut dots = vec![0u32; m];
        for _ in 0..self.ctx.order() {
            if dots.iter().all(|&d| d != 0) {
                return Some(self.ctx.vector(digits).unwrap());
            }
            // Odometer step; every digit that moves (including a wrap) adds its
            // axis column to the inner products.
            for axis in 0..n {
                digits[axis] += 1;
                for (d, v) in dots.iter_mut().zip(&self.factors) {
                    *d = (*d + v.get(axis)) % p;
                }
                if digits[axis] < p {
                    break;
                }
                digits[axis] = 0;
            }
        }
        None
    }

    /// Samples `tries` random x and returns the first good one. Only a
    /// positive answer is conclusive.
    pub fn random_x_witness<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        tries: usize,
    ) -> Option<GroupVector> {
        let p = self.ctx.p();
        (0..tries).find_map(|_| {
            let x = self
                .ctx
                .vector(
                    (0..self.ctx.n())
                        .map(|_| rng.gen_range(0..p))
                        .collect::<Vec<_>>(),
                )
                .unwrap();
            self.factors
                .iter()
                .all(|v| self.ctx.dot(&x, v) != 0)
                .then_some(x)
        })
    }

    /// True iff the product vanishes in Z[G]: every x is orthogonal mod p to
    /// some factor.
    pub fn z_identity_holds(&self) -> bool {
        self.good_x_witness().is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FpMode {
    /// Dense computation in F_p[G].
    Full,
    /// Truncated polynomial model with (p-1)^n coefficients.
    Reduced,
}

/// Whether `prod_i (1 - g^{e_i}) * prod_j (1 - g^{a_j}) = 0` in F_p[G].
pub fn fp_identity_test(m: &MatrixFp, mode: FpMode) -> Result<bool> {
    m.require_nonsingular()?;
    Ok(match mode {
        FpMode::Full => BinomialProduct::for_matrix(m)
            .dense_product(Ring::Fp)?
            .is_zero(),
        FpMode::Reduced => {
            let mut scratch = ReducedScratch::default();
            truncated::reduced_identity(
                m.rows().iter().map(|r| r.coords()),
                m.p(),
                m.n(),
                &mut scratch,
            )
        }
    })
}

/// `x = sum_k (1 - g^{e_axis})^k b_k` with every `b_k` supported on the
/// complementary coordinate subgroup (coordinate `axis` equal to 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDecomposition {
    pub axis: usize,
    pub parts: Vec<GroupRingElement>,
}

impl TDecomposition {
    /// Recomputes `sum_k (1 - g^{e_axis})^k b_k`.
    pub fn reconstruct(&self) -> Result<GroupRingElement> {
        let first = self.parts.first().ok_or(Error::ZeroDimension)?;
        let ctx = first.ctx();
        let e = ctx.basis(self.axis)?;
        let mut acc = GroupRingElement::zero(ctx, first.ring());
        for (k, b) in self.parts.iter().enumerate() {
            let mut term = b.clone();
            for _ in 0..k {
                term = term.mul_binomial(&e)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    pub fn part(&self, k: usize) -> &GroupRingElement {
        &self.parts[k]
    }
}

fn binomial_table(p: u32) -> Vec<Vec<u64>> {
    let p = p as usize;
    let mut c = vec![vec![0u64; p]; p];
    for m in 0..p {
        c[m][0] = 1;
        for k in 1..=m {
            c[m][k] = (c[m - 1][k - 1] + if k < m { c[m - 1][k] } else { 0 }) % p as u64;
        }
    }
    c
}

/// Rewrites `x` as a polynomial in `t = 1 - g^{e_axis}`.
///
/// On the coset through `w` (with `w_axis = 0`) we have `g^{m e} = (1 - t)^m`,
/// so `b_k[w] = (-1)^k sum_{m >= k} C(m, k) x[w + m e]`.
pub fn t_decompose(x: &GroupRingElement, axis: usize) -> Result<TDecomposition> {
    if x.ring() != Ring::Fp {
        return Err(Error::WrongRing("F_p"));
    }
    let ctx = x.ctx();
    ctx.check_axis(axis)?;
    let p = ctx.p() as usize;
    let pm = p as u64;
    let stride = ctx.stride(axis);
    let block = stride * p;
    let binom = binomial_table(ctx.p());
    let mut parts = vec![vec![0i64; ctx.order()]; p];
    let coeffs = x.coeffs();
    for base in (0..ctx.order()).step_by(block) {
        for inner in 0..stride {
            let rep = base + inner;
            for (k, part) in parts.iter_mut().enumerate() {
                let mut s = 0u64;
                for m in k..p {
                    s = (s + binom[m][k] * coeffs[rep + m * stride] as u64) % pm;
                }
                if k % 2 == 1 {
                    s = (pm - s) % pm;
                }
                part[rep] = s as i64;
            }
        }
    }
    let parts = parts
        .into_iter()
        .map(|c| GroupRingElement::from_coeffs(ctx, Ring::Fp, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(TDecomposition { axis, parts })
}

/// `d_axis(sum_v x_v g^v) = sum_v x_v v_axis g^v` over F_p.
pub fn derivation(x: &GroupRingElement, axis: usize) -> Result<GroupRingElement> {
    if x.ring() != Ring::Fp {
        return Err(Error::WrongRing("F_p"));
    }
    let ctx = x.ctx();
    ctx.check_axis(axis)?;
    let p = ctx.p() as i64;
    let stride = ctx.stride(axis);
    let coeffs = x
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| c * ((i / stride) % p as usize) as i64 % p)
        .collect();
    GroupRingElement::from_coeffs(ctx, Ring::Fp, coeffs)
}
