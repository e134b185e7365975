//! Square matrices over F_p with rows viewed as group vectors.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupVector};
use crate::linalg;

/// An n x n matrix over F_p. Row `j` is the vector a_j; `(Mx)_j = <a_j, x>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixRepr", try_from = "MatrixRepr")]
pub struct MatrixFp {
    ctx: GroupContext,
    rows: Vec<GroupVector>,
    det_nonzero: bool,
}

/// Wire form of a matrix: the prime and the reduced rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRepr {
    pub p: u32,
    pub rows: Vec<Vec<u32>>,
}

impl From<MatrixFp> for MatrixRepr {
    fn from(m: MatrixFp) -> Self {
        MatrixRepr {
            p: m.p(),
            rows: m.to_rows(),
        }
    }
}

impl TryFrom<MatrixRepr> for MatrixFp {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let rows: Vec<Vec<i64>> = r
            .rows
            .iter()
            .map(|row| row.iter().map(|&x| x as i64).collect())
            .collect();
        MatrixFp::from_rows(r.p, &rows)
    }
}

impl MatrixFp {
    pub fn new(ctx: GroupContext, rows: Vec<GroupVector>) -> Result<Self> {
        if rows.len() != ctx.n() {
            return Err(Error::NotSquare {
                rows: rows.len(),
                cols: ctx.n(),
            });
        }
        for r in &rows {
            ctx.check_vector(r)?;
        }
        let plain: Vec<Vec<u32>> = rows.iter().map(|r| r.coords().to_vec()).collect();
        let det_nonzero = linalg::det_mod_p(&plain, ctx.p()) != 0;
        Ok(MatrixFp {
            ctx,
            rows,
            det_nonzero,
        })
    }

    /// Builds a matrix from integer rows, reducing entries mod p.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        let ctx = GroupContext::new(p, n)?;
        let vecs = rows
            .iter()
            .map(|r| ctx.vector_reduced(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, vecs)
    }

    pub fn identity(ctx: GroupContext) -> Self {
        let rows = (0..ctx.n()).map(|i| ctx.basis(i).unwrap()).collect();
        MatrixFp {
            ctx,
            rows,
            det_nonzero: true,
        }
    }

    #[inline]
    pub fn ctx(&self) -> GroupContext {
        self.ctx
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    pub fn rows(&self) -> &[GroupVector] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> &GroupVector {
        &self.rows[j]
    }

    pub fn entry(&self, j: usize, k: usize) -> u32 {
        self.rows[j].get(k)
    }

    pub fn is_nonsingular(&self) -> bool {
        self.det_nonzero
    }

    pub fn require_nonsingular(&self) -> Result<()> {
        if self.det_nonzero {
            Ok(())
        } else {
            Err(Error::Singular { p: self.p() })
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|r| r.coords().to_vec()).collect()
    }

    /// `Mx`.
    pub fn apply(&self, x: &GroupVector) -> GroupVector {
        self.ctx
            .vector(
                self.rows
                    .iter()
                    .map(|r| self.ctx.dot(r, x))
                    .collect::<Vec<_>>(),
            )
            .expect("dot products are reduced")
    }

    pub fn transpose(&self) -> MatrixFp {
        let rows = (0..self.n())
            .map(|k| {
                self.ctx
                    .vector((0..self.n()).map(|j| self.entry(j, k)).collect::<Vec<_>>())
                    .unwrap()
            })
            .collect();
        MatrixFp {
            ctx: self.ctx,
            rows,
            det_nonzero: self.det_nonzero,
        }
    }

    pub fn inverse(&self) -> Option<MatrixFp> {
        let inv = linalg::inverse_mod_p(&self.to_rows(), self.p())?;
        let rows = inv
            .into_iter()
            .map(|r| self.ctx.vector(r).unwrap())
            .collect();
        Some(MatrixFp {
            ctx: self.ctx,
            rows,
            det_nonzero: true,
        })
    }

    /// Matrix with row `j` and column `k` removed, or `None` for n = 1.
    pub fn minor(&self, j: usize, k: usize) -> Option<MatrixFp> {
        if self.n() < 2 {
            return None;
        }
        let ctx = GroupContext::new(self.p(), self.n() - 1).ok()?;
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != j)
            .map(|(_, row)| {
                let coords: Vec<u32> = row
                    .coords()
                    .iter()
                    .enumerate()
                    .filter(|&(c, _)| c != k)
                    .map(|(_, &x)| x)
                    .collect();
                ctx.vector(coords).unwrap()
            })
            .collect();
        MatrixFp::new(ctx, rows).ok()
    }

    /// Rows reordered so that new row `r` is old row `order[r]`.
    pub fn permute_rows(&self, order: &[usize]) -> MatrixFp {
        MatrixFp {
            ctx: self.ctx,
            rows: order.iter().map(|&r| self.rows[r].clone()).collect(),
            det_nonzero: self.det_nonzero,
        }
    }

    /// `L * M * R^T` for monomial matrices L (row side) and R (coordinate side).
    pub fn monomial_transform(&self, left: &MonomialMatrix, right: &MonomialMatrix) -> MatrixFp {
        let p = self.p() as u64;
        let n = self.n();
        let rows = (0..n)
            .map(|r| {
                let src = &self.rows[left.perm[r]];
                let lam = left.scales[r] as u64;
                let coords: Vec<u32> = (0..n)
                    .map(|c| {
                        let x = src.get(right.perm[c]) as u64;
                        (lam * x % p * right.scales[c] as u64 % p) as u32
                    })
                    .collect();
                self.ctx.vector(coords).unwrap()
            })
            .collect();
        MatrixFp {
            ctx: self.ctx,
            rows,
            det_nonzero: self.det_nonzero,
        }
    }
}

impl fmt::Display for MatrixFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, r) in self.rows.iter().enumerate() {
            if j > 0 {
                write!(f, ";")?;
            }
            for (k, x) in r.coords().iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// A permutation matrix times a nonsingular diagonal: row `r` has the single
/// nonzero entry `scales[r]` in column `perm[r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub perm: Vec<usize>,
    pub scales: Vec<u32>,
}

impl MonomialMatrix {
    pub fn identity(n: usize) -> Self {
        MonomialMatrix {
            perm: (0..n).collect(),
            scales: vec![1; n],
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, p: u32, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let scales = (0..n).map(|_| rng.gen_range(1..p)).collect();
        MonomialMatrix { perm, scales }
    }
}
