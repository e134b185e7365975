//! The elementary abelian group G = F_p^n and its exponent vectors.
//!
//! Elements of G are stored as coordinate vectors with entries in `[0, p-1]`.
//! Every dense table over G uses the mixed-radix index
//! `index(v) = v_0 + v_1 p + ... + v_{n-1} p^{n-1}`, so axis 0 is the
//! fastest-varying coordinate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted by [`GroupContext::new`].
///
/// 2^24 covers every dense computation the lemma checks allow (the largest is
/// 3^15 = 14,348,907 coefficients).
pub const DEFAULT_COEFF_BUDGET: usize = 1 << 24;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Shape of G = F_p^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupContext {
    p: u32,
    n: usize,
    order: usize,
}

impl GroupContext {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        Self::with_budget(p, n, DEFAULT_COEFF_BUDGET)
    }

    /// Like [`GroupContext::new`] but with an explicit cap on `p^n`.
    pub fn with_budget(p: u32, n: usize, budget: usize) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let order = checked_pow(p as usize, n)
            .filter(|&o| o <= budget)
            .ok_or(Error::OverBudget { p, n, budget })?;
        Ok(GroupContext { p, n, order })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `p^n`, the number of group elements.
    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// `p^axis`, the index step of one unit along `axis`.
    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        (self.p as usize).pow(axis as u32)
    }

    pub fn check_axis(&self, axis: usize) -> Result<()> {
        if axis < self.n {
            Ok(())
        } else {
            Err(Error::AxisOutOfRange { axis, n: self.n })
        }
    }

    /// Validates coordinates and wraps them as a vector of this group.
    pub fn vector(&self, coords: impl Into<Vec<u32>>) -> Result<GroupVector> {
        let coords = coords.into();
        if coords.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: coords.len(),
            });
        }
        if let Some(&bad) = coords.iter().find(|&&c| c >= self.p) {
            return Err(Error::CoordinateOutOfRange {
                value: bad,
                p: self.p,
            });
        }
        Ok(GroupVector { coords })
    }

    /// Reduces arbitrary integers mod p into a vector.
    pub fn vector_reduced(&self, coords: &[i64]) -> Result<GroupVector> {
        let p = self.p as i64;
        self.vector(
            coords
                .iter()
                .map(|&c| c.rem_euclid(p) as u32)
                .collect::<Vec<_>>(),
        )
    }

    pub fn zero_vector(&self) -> GroupVector {
        GroupVector {
            coords: vec![0; self.n],
        }
    }

    /// The standard basis vector e_axis.
    pub fn basis(&self, axis: usize) -> Result<GroupVector> {
        self.check_axis(axis)?;
        let mut v = self.zero_vector();
        v.coords[axis] = 1;
        Ok(v)
    }

    pub fn check_vector(&self, v: &GroupVector) -> Result<()> {
        if v.coords.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.coords.len(),
            });
        }
        if let Some(&bad) = v.coords.iter().find(|&&c| c >= self.p) {
            return Err(Error::CoordinateOutOfRange {
                value: bad,
                p: self.p,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn index_of(&self, v: &GroupVector) -> usize {
        let p = self.p as usize;
        v.coords
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * p + c as usize)
    }

    pub fn vector_at(&self, mut index: usize) -> GroupVector {
        let p = self.p as usize;
        let coords = (0..self.n)
            .map(|_| {
                let c = index % p;
                index /= p;
                c as u32
            })
            .collect();
        GroupVector { coords }
    }

    /// All group elements in mixed-radix order.
    pub fn vectors(&self) -> impl Iterator<Item = GroupVector> + '_ {
        (0..self.order).map(move |i| self.vector_at(i))
    }

    /// Inner product mod p.
    #[inline]
    pub fn dot(&self, a: &GroupVector, b: &GroupVector) -> u32 {
        dot_mod(&a.coords, &b.coords, self.p)
    }

    pub fn add(&self, a: &GroupVector, b: &GroupVector) -> GroupVector {
        GroupVector {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupVector) -> GroupVector {
        GroupVector {
            coords: a.coords.iter().map(|&x| (self.p - x) % self.p).collect(),
        }
    }

    pub fn scale(&self, a: &GroupVector, k: u32) -> GroupVector {
        let p = self.p as u64;
        GroupVector {
            coords: a
                .coords
                .iter()
                .map(|&x| ((x as u64 * (k as u64 % p)) % p) as u32)
                .collect(),
        }
    }
}

#[inline]
pub(crate) fn dot_mod(a: &[u32], b: &[u32], p: u32) -> u32 {
    let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
    (s % p as u64) as u32
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

/// An exponent vector v in F_p^n, standing for the group element g^v.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupVector {
    coords: Vec<u32>,
}

impl GroupVector {
    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn get(&self, axis: usize) -> u32 {
        self.coords[axis]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// True when no coordinate is zero.
    pub fn is_nowhere_zero(&self) -> bool {
        self.coords.iter().all(|&c| c != 0)
    }

    /// Copy of the vector with coordinate `axis` set to zero.
    pub fn with_zeroed(&self, axis: usize) -> GroupVector {
        let mut coords = self.coords.clone();
        coords[axis] = 0;
        GroupVector { coords }
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }
}

impl fmt::Display for GroupVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
