//! The truncated polynomial model of F_p[G].
//!
//! With `t_i = 1 - g^{e_i}` the group algebra F_p[F_p^n] is isomorphic to
//! F_p[t_1, ..., t_n] / (t_i^p), and `g^v = prod_i (1 - t_i)^{v_i}`. This module
//! works in the further quotient by `(t_i^cap)` for a chosen `cap <= p`, which
//! is what the fast identity test needs (`cap = p - 1`).

/// Dense element of F_p[t_1..t_n] / (t_i^cap), exponents in `[0, cap)`.
///
/// Coefficient of `t^alpha` sits at index `alpha_0 + alpha_1 cap + ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPoly {
    p: u32,
    n: usize,
    cap: usize,
    coeffs: Vec<u32>,
}

impl TruncatedPoly {
    pub fn one(p: u32, n: usize, cap: usize) -> Self {
        let size = cap.pow(n as u32);
        let mut coeffs = vec![0; size];
        if size > 0 {
            coeffs[0] = 1;
        }
        TruncatedPoly { p, n, cap, coeffs }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Multiplies by `1 - g^v`.
    pub fn mul_binomial(&mut self, v: &[u32], scratch: &mut Vec<u32>) {
        scratch.clear();
        scratch.extend_from_slice(&self.coeffs);
        mul_group_element(scratch, v, self.p, self.cap);
        let p = self.p;
        for (x, &y) in self.coeffs.iter_mut().zip(scratch.iter()) {
            *x = (*x + p - y) % p;
        }
    }
}

/// Multiplies `coeffs` in place by `g^v = prod_i (1 - t_i)^{v_i}`.
fn mul_group_element(coeffs: &mut [u32], v: &[u32], p: u32, cap: usize) {
    let mut stride = 1usize;
    for &vi in v {
        for _ in 0..vi {
            mul_one_minus_t(coeffs, stride, cap, p);
        }
        stride *= cap;
    }
}

/// In place `x <- x * (1 - t_axis)` where `stride = cap^axis`.
#[inline]
fn mul_one_minus_t(coeffs: &mut [u32], stride: usize, cap: usize, p: u32) {
    let block = stride * cap;
    for base in (0..coeffs.len()).step_by(block) {
        for e in (1..cap).rev() {
            let hi = base + e * stride;
            let lo = hi - stride;
            for k in 0..stride {
                let y = coeffs[lo + k];
                let x = &mut coeffs[hi + k];
                *x = (*x + p - y) % p;
            }
        }
    }
}

/// Reusable buffers for [`reduced_identity`] on hot paths.
#[derive(Debug, Default)]
pub struct ReducedScratch {
    acc: Vec<u32>,
    tmp: Vec<u32>,
}

/// Decides `prod_i (1 - g^{e_i}) * prod_j (1 - g^{a_j}) = 0` in F_p[F_p^n].
///
/// The standard-basis product is `t_1 ... t_n`, so the identity holds iff
/// `prod_j (1 - g^{a_j})` vanishes modulo `(t_i^{p-1})`.
pub fn reduced_identity<'a>(
    rows: impl IntoIterator<Item = &'a [u32]>,
    p: u32,
    n: usize,
    scratch: &mut ReducedScratch,
) -> bool {
    let cap = (p - 1) as usize;
    let size = cap.pow(n as u32);
    let acc = &mut scratch.acc;
    acc.clear();
    acc.resize(size, 0);
    acc[0] = 1;
    for a in rows {
        let tmp = &mut scratch.tmp;
        tmp.clear();
        tmp.extend_from_slice(acc);
        mul_group_element(tmp, a, p, cap);
        let mut any = false;
        for (x, &y) in acc.iter_mut().zip(tmp.iter()) {
            *x = (*x + p - y) % p;
            any |= *x != 0;
        }
        if !any {
            return true;
        }
    }
    acc.iter().all(|&c| c == 0)
}
