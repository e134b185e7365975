//! Dense elements of the group rings Z[G] and F_p[G].
//!
//! An element `sum_v r_v g^v` is stored as the coefficient table `r` indexed
//! by the mixed-radix encoding of `v` (see [`crate::group`]). Integer
//! coefficients are `i64` with checked arithmetic: any overflow surfaces as
//! [`Error::Overflow`] instead of wrapping. F_p coefficients are kept reduced
//! into `[0, p-1]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupVector};

/// Coefficient ring of a group ring element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Z,
    Fp,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Fp => write!(f, "F_p"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    ctx: GroupContext,
    ring: Ring,
    coeffs: Vec<i64>,
}

impl GroupRingElement {
    pub fn zero(ctx: GroupContext, ring: Ring) -> Self {
        GroupRingElement {
            ctx,
            ring,
            coeffs: vec![0; ctx.order()],
        }
    }

    /// The identity g^0.
    pub fn one(ctx: GroupContext, ring: Ring) -> Self {
        let mut e = Self::zero(ctx, ring);
        e.coeffs[0] = 1;
        e
    }

    /// The single group element g^v.
    pub fn monomial(ctx: GroupContext, ring: Ring, v: &GroupVector) -> Result<Self> {
        ctx.check_vector(v)?;
        let mut e = Self::zero(ctx, ring);
        e.coeffs[ctx.index_of(v)] = 1;
        Ok(e)
    }

    /// `1 - g^v`.
    pub fn binomial(ctx: GroupContext, ring: Ring, v: &GroupVector) -> Result<Self> {
        Self::one(ctx, ring).mul_binomial(v)
    }

    /// Builds an element from a full coefficient table; F_p entries are reduced.
    pub fn from_coeffs(ctx: GroupContext, ring: Ring, mut coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != ctx.order() {
            return Err(Error::DimensionMismatch {
                expected: ctx.order(),
                got: coeffs.len(),
            });
        }
        if ring == Ring::Fp {
            let p = ctx.p() as i64;
            coeffs.iter_mut().for_each(|c| *c = c.rem_euclid(p));
        }
        Ok(GroupRingElement { ctx, ring, coeffs })
    }

    #[inline]
    pub fn ctx(&self) -> GroupContext {
        self.ctx
    }

    #[inline]
    pub fn ring(&self) -> Ring {
        self.ring
    }

    #[inline]
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, v: &GroupVector) -> i64 {
        self.coeffs[self.ctx.index_of(v)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> u128 {
        self.coeffs.iter().map(|&c| c.unsigned_abs() as u128).sum()
    }

    /// Group elements carrying a nonzero coefficient, in index order.
    pub fn support(&self) -> impl Iterator<Item = (GroupVector, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.ctx.vector_at(i), c))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    #[inline]
    fn p(&self) -> i64 {
        self.ctx.p() as i64
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.checked_add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.checked_sub(b))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(i64, i64) -> Option<i64>) -> Result<Self> {
        self.check_compatible(other)?;
        let p = self.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| {
                let c = op(a, b).ok_or(Error::Overflow)?;
                Ok(match self.ring {
                    Ring::Z => c,
                    Ring::Fp => c.rem_euclid(p),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupRingElement {
            ctx: self.ctx,
            ring: self.ring,
            coeffs,
        })
    }

    pub fn neg(&self) -> Result<Self> {
        Self::zero(self.ctx, self.ring).sub(self)
    }

    /// Multiplies every coefficient by the integer `k`.
    pub fn scale(&self, k: i64) -> Result<Self> {
        let p = self.p();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| match self.ring {
                Ring::Z => c.checked_mul(k).ok_or(Error::Overflow),
                Ring::Fp => Ok(((c as i128 * k as i128).rem_euclid(p as i128)) as i64),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupRingElement {
            ctx: self.ctx,
            ring: self.ring,
            coeffs,
        })
    }

    /// Full convolution `sum_v (sum_w x_w y_{v-w}) g^v`.
    ///
    /// O(p^{2n}); this is the reference product used by tests and oracles.
    pub fn mul_general(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let ctx = self.ctx;
        let p = ctx.p() as usize;
        let n = ctx.n();
        let mut out = vec![0i64; ctx.order()];
        let digits: Vec<Vec<usize>> = (0..ctx.order())
            .map(|i| {
                let mut i = i;
                (0..n)
                    .map(|_| {
                        let d = i % p;
                        i /= p;
                        d
                    })
                    .collect()
            })
            .collect();
        for (w, &xw) in self.coeffs.iter().enumerate() {
            if xw == 0 {
                continue;
            }
            for (u, &yu) in other.coeffs.iter().enumerate() {
                if yu == 0 {
                    continue;
                }
                let target = digits[w]
                    .iter()
                    .zip(&digits[u])
                    .rev()
                    .fold(0usize, |acc, (a, b)| acc * p + (a + b) % p);
                match self.ring {
                    Ring::Z => {
                        let prod = xw.checked_mul(yu).ok_or(Error::Overflow)?;
                        out[target] = out[target].checked_add(prod).ok_or(Error::Overflow)?;
                    }
                    Ring::Fp => {
                        out[target] =
                            ((out[target] as i128 + xw as i128 * yu as i128) % p as i128) as i64;
                    }
                }
            }
        }
        Ok(GroupRingElement {
            ctx,
            ring: self.ring,
            coeffs: out,
        })
    }

    /// Multiplication by the group element g^v: the coefficient at w moves to w + v.
    pub fn shift(&self, v: &GroupVector) -> Result<Self> {
        self.ctx.check_vector(v)?;
        let mut cur = self.coeffs.clone();
        let mut scratch = vec![0i64; cur.len()];
        let p = self.ctx.p() as usize;
        for axis in 0..self.ctx.n() {
            let c = v.get(axis) as usize;
            if c == 0 {
                continue;
            }
            rotate_axis(&cur, &mut scratch, self.ctx.stride(axis), p, c);
            std::mem::swap(&mut cur, &mut scratch);
        }
        Ok(GroupRingElement {
            ctx: self.ctx,
            ring: self.ring,
            coeffs: cur,
        })
    }

    /// `x * (1 - g^v)` computed as `x - shift(x, v)` in O(p^n).
    pub fn mul_binomial(&self, v: &GroupVector) -> Result<Self> {
        let shifted = self.shift(v)?;
        self.sub(&shifted)
    }

    /// Coefficientwise reduction Z[G] -> F_p[G].
    pub fn reduce_mod_p(&self) -> Result<Self> {
        if self.ring != Ring::Z {
            return Err(Error::WrongRing("Z"));
        }
        let p = self.p();
        Ok(GroupRingElement {
            ctx: self.ctx,
            ring: Ring::Fp,
            coeffs: self.coeffs.iter().map(|c| c.rem_euclid(p)).collect(),
        })
    }

    /// Reinterprets F_p coefficients as their integer representatives in `[0, p-1]`.
    pub fn lift_to_z(&self) -> Self {
        GroupRingElement {
            ctx: self.ctx,
            ring: Ring::Z,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Sums of the coefficients along each coset `w + <e_axis>`, indexed by the
    /// representative with `axis`-coordinate 0. This is the image under the
    /// projection G -> G / <e_axis>.
    pub fn coset_sums(&self, axis: usize) -> Result<Vec<i64>> {
        self.ctx.check_axis(axis)?;
        let p = self.ctx.p() as usize;
        let stride = self.ctx.stride(axis);
        let block = stride * p;
        let mut sums = Vec::with_capacity(self.ctx.order() / p);
        for base in (0..self.ctx.order()).step_by(block) {
            for inner in 0..stride {
                let mut s: i64 = 0;
                for k in 0..p {
                    s = s
                        .checked_add(self.coeffs[base + k * stride + inner])
                        .ok_or(Error::Overflow)?;
                }
                if self.ring == Ring::Fp {
                    s = s.rem_euclid(self.p());
                }
                sums.push(s);
            }
        }
        Ok(sums)
    }

    /// True iff the element lies in the principal ideal generated by `1 - g^e_axis`.
    pub fn in_binomial_ideal(&self, axis: usize) -> Result<bool> {
        Ok(self.coset_sums(axis)?.iter().all(|&s| s == 0))
    }

    /// Solves `q * (1 - g^e_axis) = self` for the canonical `q`.
    ///
    /// Along each coset with coefficients `Q_0, ..., Q_{p-1}` (position k is
    /// the element with `axis`-coordinate k), `q_k = Q_0 + ... + Q_k`. This is
    /// the unique solution whose coefficient at `axis`-coordinate `p-1`
    /// vanishes on every coset.
    pub fn divide_by_binomial(&self, axis: usize) -> Result<Self> {
        if !self.in_binomial_ideal(axis)? {
            return Err(Error::NotInIdeal { axis });
        }
        let p = self.ctx.p() as usize;
        let stride = self.ctx.stride(axis);
        let block = stride * p;
        let mut q = vec![0i64; self.ctx.order()];
        for base in (0..self.ctx.order()).step_by(block) {
            for inner in 0..stride {
                let mut acc: i64 = 0;
                for k in 0..p {
                    let idx = base + k * stride + inner;
                    acc = acc.checked_add(self.coeffs[idx]).ok_or(Error::Overflow)?;
                    if self.ring == Ring::Fp {
                        acc = acc.rem_euclid(self.p());
                    }
                    q[idx] = acc;
                }
            }
        }
        Ok(GroupRingElement {
            ctx: self.ctx,
            ring: self.ring,
            coeffs: q,
        })
    }

    /// True when every nonzero coefficient sits at a vector with `axis`-coordinate 0.
    pub fn supported_off_axis(&self, axis: usize) -> bool {
        let p = self.ctx.p() as usize;
        let stride = self.ctx.stride(axis);
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || (i / stride).is_multiple_of(p))
    }
}

/// Rotates the `axis` digit of every index by `c`: `dst[w + c e_axis] = src[w]`.
fn rotate_axis(src: &[i64], dst: &mut [i64], stride: usize, p: usize, c: usize) {
    let block = stride * p;
    for base in (0..src.len()).step_by(block) {
        for k in 0..p {
            let from = base + k * stride;
            let to = base + ((k + c) % p) * stride;
            dst[to..to + stride].copy_from_slice(&src[from..from + stride]);
        }
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in self.support() {
            let (sign, mag) = if c < 0 {
                ("-", -(c as i128))
            } else {
                ("+", c as i128)
            };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if v.is_zero() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "g^{v}")?;
            } else {
                write!(f, "{mag}g^{v}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
