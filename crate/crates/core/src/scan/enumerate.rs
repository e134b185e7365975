//! Depth-first enumeration of GL_n(F_p), one row at a time.

use crate::error::Result;
use crate::group::GroupContext;
use crate::matrix::MatrixFp;

use super::Shard;

/// Precomputed data about every vector of F_p^n, by mixed-radix index.
#[derive(Debug, Clone)]
pub(crate) struct VectorTable {
    pub p: u32,
    pub n: usize,
    pub coords: Vec<Vec<u32>>,
    /// Position in the row order used by canonical forms (smaller is first).
    pub key: Vec<u32>,
    /// First nonzero coordinate equals 1.
    pub normalized: Vec<bool>,
}

impl VectorTable {
    pub fn new(p: u32, n: usize) -> Self {
        let order = (p as usize).pow(n as u32);
        let mut coords = Vec::with_capacity(order);
        let mut key = Vec::with_capacity(order);
        let mut normalized = Vec::with_capacity(order);
        for idx in 0..order {
            let mut v = vec![0u32; n];
            let mut rest = idx;
            for c in v.iter_mut() {
                *c = (rest % p as usize) as u32;
                rest /= p as usize;
            }
            key.push(row_key(&v, p));
            normalized.push(v.iter().find(|&&c| c != 0) == Some(&1));
            coords.push(v);
        }
        VectorTable {
            p,
            n,
            coords,
            key,
            normalized,
        }
    }

    pub fn order(&self) -> usize {
        self.coords.len()
    }

    fn add_scaled(&self, a: usize, b: usize, k: u32) -> usize {
        let p = self.p as usize;
        let mut idx = 0;
        let mut stride = 1;
        for (x, y) in self.coords[a].iter().zip(&self.coords[b]) {
            idx += (*x as usize + k as usize * *y as usize) % p * stride;
            stride *= p;
        }
        idx
    }
}

/// Sort key of a row: coordinates compared left to right, with residues
/// ordered 1 < 2 < ... < p-1 < 0.
pub(crate) fn row_key(v: &[u32], p: u32) -> u32 {
    v.iter().fold(0, |acc, &c| acc * p + (c + p - 1) % p)
}

/// Walks nonsingular matrices in a fixed order: row 0 varies slowest and each
/// row runs through F_p^n by mixed-radix index, skipping vectors in the span
/// of the rows above it.
///
/// With `row_canonical` only matrices whose rows are normalized (first
/// nonzero entry 1) and strictly increasing in the canonical row order are
/// produced: one per orbit of the row-side monomial group.
#[derive(Debug, Clone)]
pub(crate) struct Walker {
    table: VectorTable,
    row_canonical: bool,
    chosen: Vec<usize>,
    next_try: Vec<usize>,
    /// `spans[k]` marks the span of rows `0..k`.
    spans: Vec<Vec<bool>>,
    level: usize,
    done: bool,
}

impl Walker {
    pub fn new(p: u32, n: usize, row_canonical: bool) -> Self {
        let table = VectorTable::new(p, n);
        let order = table.order();
        let mut spans = vec![vec![false; order]; n];
        spans[0][0] = true;
        Walker {
            table,
            row_canonical,
            chosen: vec![0; n],
            next_try: vec![0; n],
            spans,
            level: 0,
            done: false,
        }
    }

    pub fn table(&self) -> &VectorTable {
        &self.table
    }

    fn admissible(&self, k: usize, idx: usize) -> bool {
        if self.spans[k][idx] {
            return false;
        }
        if self.row_canonical {
            if !self.table.normalized[idx] {
                return false;
            }
            if k > 0 && self.table.key[idx] <= self.table.key[self.chosen[k - 1]] {
                return false;
            }
        }
        true
    }

    /// Advances to the next matrix and returns its rows as vector indices.
    pub fn advance(&mut self) -> Option<&[usize]> {
        let n = self.table.n;
        let order = self.table.order();
        loop {
            if self.done {
                return None;
            }
            let k = self.level;
            let found = (self.next_try[k]..order).find(|&idx| self.admissible(k, idx));
            match found {
                Some(idx) => {
                    self.chosen[k] = idx;
                    self.next_try[k] = idx + 1;
                    if k + 1 == n {
                        return Some(&self.chosen);
                    }
                    let (lo, hi) = self.spans.split_at_mut(k + 1);
                    let (cur, next) = (&lo[k], &mut hi[0]);
                    next.iter_mut().for_each(|b| *b = false);
                    for s in (0..order).filter(|&s| cur[s]) {
                        for c in 0..self.table.p {
                            next[self.table.add_scaled(s, idx, c)] = true;
                        }
                    }
                    self.level += 1;
                    self.next_try[self.level] = 0;
                }
                None => {
                    if k == 0 {
                        self.done = true;
                    } else {
                        self.level -= 1;
                    }
                }
            }
        }
    }

    /// Flat row-major entries of the current matrix.
    pub fn entries(&self, rows: &[usize], out: &mut Vec<u32>) {
        out.clear();
        for &r in rows {
            out.extend_from_slice(&self.table.coords[r]);
        }
    }
}

/// |GL_n(F_p)| = prod_{k<n} (p^n - p^k).
pub fn gl_order(p: u32, n: usize) -> u64 {
    let q = (p as u64).pow(n as u32);
    (0..n as u32).map(|k| q - (p as u64).pow(k)).product()
}

/// Every nonsingular matrix of the shard, in enumeration order. Matrix number
/// `c` (counting from 0 over all of GL_n(F_p)) belongs to shard `c mod m`.
pub fn enumerate_invertible(
    p: u32,
    n: usize,
    shard: Shard,
) -> Result<impl Iterator<Item = MatrixFp>> {
    super::check_scan_feasible(p, n, false, shard)?;
    let ctx = GroupContext::new(p, n)?;
    let mut walker = Walker::new(p, n, false);
    let mut counter = 0u64;
    Ok(std::iter::from_fn(move || loop {
        let rows = walker.advance()?.to_vec();
        let c = counter;
        counter += 1;
        if c % shard.total as u64 == shard.index as u64 {
            let table = walker.table();
            let vecs = rows
                .iter()
                .map(|&r| ctx.vector(table.coords[r].clone()).unwrap())
                .collect();
            return Some(MatrixFp::new(ctx, vecs).unwrap());
        }
    }))
}
