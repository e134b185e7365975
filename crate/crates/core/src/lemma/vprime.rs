//! The auxiliary space V' of dimension 2n^2 - n and its two bases.
//!
//! Coordinates of V' are laid out as the head `e_0..e_{n-1}` followed by 2n
//! blocks of width n - 1; block `t` holds `e_{t,k}` for the coordinates
//! `k != axis` in increasing order.

use serde::{Deserialize, Serialize};

use crate::binomial::BinomialProduct;
use crate::error::{Error, Result};
use crate::group::{dot_mod, GroupContext, GroupVector};
use crate::linalg::rank_mod_p;
use crate::matrix::MatrixFp;
use crate::ring::{GroupRingElement, Ring};

use super::{split_rows, RowSplit};

/// Coefficient budget for dense work in F_p[V'] without opting in.
pub const DEFAULT_LAB_BUDGET: usize = 32_768;
/// Opt-in budget; fits p = 3, n = 3 (3^15 coefficients).
pub const LARGE_LAB_BUDGET: usize = 14_348_907;

pub fn vprime_dimension(n: usize) -> usize {
    2 * n * n - n
}

/// Rejects (p, n) whose dense F_p[V'] table would exceed `budget`.
pub fn check_feasible(p: u32, n: usize, budget: usize) -> Result<()> {
    let dim = vprime_dimension(n);
    let size = (p as u128).checked_pow(dim as u32);
    match size {
        Some(s) if s <= budget as u128 => Ok(()),
        _ => Err(Error::Infeasible(format!(
            "dense F_{p}[V'] needs {p}^{dim} = {} coefficients, over the budget of {budget}; \
             opt in to the large budget ({LARGE_LAB_BUDGET}) if it fits",
            size.map_or_else(|| "overflowing".to_string(), |s| s.to_string())
        ))),
    }
}

#[derive(Debug, Clone)]
pub struct VPrimeConstruction {
    pub base: GroupContext,
    pub big: GroupContext,
    pub axis: usize,
    /// `matrix` is the input with rows reordered by `row_order`.
    pub matrix: MatrixFp,
    pub row_order: Vec<usize>,
    pub split: RowSplit,
    /// a'_l restricted to the coordinates other than `axis`.
    pub local_rows: Vec<Vec<u32>>,
    pub v: Vec<GroupVector>,
    pub w: Vec<GroupVector>,
    pub b1_primary: Vec<GroupVector>,
    pub b1_aux: Vec<Vec<GroupVector>>,
    pub b2_primary: Vec<GroupVector>,
    pub b2_aux: Vec<Vec<GroupVector>>,
}

impl VPrimeConstruction {
    fn n(&self) -> usize {
        self.base.n()
    }

    pub fn block_coord(&self, t: usize, k: usize) -> usize {
        let n = self.n();
        let local = if k < self.axis { k } else { k - 1 };
        n + t * (n - 1) + local
    }

    fn embed_block(&self, t: usize, local: &[u32]) -> GroupVector {
        let mut coords = vec![0u32; self.big.n()];
        let start = self.n() + t * (self.n() - 1);
        coords[start..start + local.len()].copy_from_slice(local);
        self.big.vector(coords).unwrap()
    }

    pub fn b1(&self) -> impl Iterator<Item = &GroupVector> {
        self.b1_primary.iter().chain(self.b1_aux.iter().flatten())
    }

    pub fn b2(&self) -> impl Iterator<Item = &GroupVector> {
        self.b2_primary.iter().chain(self.b2_aux.iter().flatten())
    }

    /// `prod_{b in B1} (1 - g^b) * prod_{b in B2} (1 - g^b)`.
    pub fn full_product(&self) -> BinomialProduct {
        BinomialProduct::new(self.big, self.b1().chain(self.b2()).cloned().collect()).unwrap()
    }
}

/// Builds V', reordering rows so that a'_2..a'_n span the complementary subgroup.
pub fn build_vprime(m: &MatrixFp, axis: usize, budget: usize) -> Result<VPrimeConstruction> {
    m.require_nonsingular()?;
    let base = m.ctx();
    base.check_axis(axis)?;
    let n = base.n();
    let p = base.p();
    if n < 2 {
        return Err(Error::Infeasible(
            "n = 1: the complementary subgroup is trivial and V' is degenerate".into(),
        ));
    }
    check_feasible(p, n, budget)?;
    let dim = vprime_dimension(n);
    let big = GroupContext::with_budget(p, dim, budget)?;

    let local = |row: &GroupVector| -> Vec<u32> {
        row.coords()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != axis)
            .map(|(_, &x)| x)
            .collect()
    };
    let first = (0..n)
        .find(|&j0| {
            let rest: Vec<Vec<u32>> = (0..n)
                .filter(|&j| j != j0)
                .map(|j| local(m.row(j)))
                .collect();
            rank_mod_p(&rest, p) == n - 1
        })
        .expect("the projection of a nonsingular matrix spans the complement");
    let row_order: Vec<usize> = std::iter::once(first)
        .chain((0..n).filter(|&j| j != first))
        .collect();
    let matrix = m.permute_rows(&row_order);
    let split = split_rows(&matrix, axis)?;
    let local_rows: Vec<Vec<u32>> = matrix.rows().iter().map(local).collect();

    let mut c = VPrimeConstruction {
        base,
        big,
        axis,
        matrix,
        row_order,
        split,
        local_rows,
        v: Vec::new(),
        w: Vec::new(),
        b1_primary: Vec::new(),
        b1_aux: Vec::new(),
        b2_primary: Vec::new(),
        b2_aux: Vec::new(),
    };

    c.v = (0..2 * n)
        .map(|t| c.embed_block(t, &c.local_rows[0]))
        .collect();
    c.w = (0..n)
        .map(|j| {
            let mut coords = vec![0u32; dim];
            coords[..n].copy_from_slice(c.matrix.row(j).coords());
            big.vector(coords).unwrap()
        })
        .collect();
    c.b1_primary = (0..n)
        .map(|j| big.add(&big.basis(j).unwrap(), &c.v[j]))
        .collect();
    c.b2_primary = (0..n).map(|j| big.add(&c.w[j], &c.v[j + n])).collect();
    c.b1_aux = (0..2 * n)
        .map(|t| {
            (0..n)
                .filter(|&k| k != axis)
                .map(|k| big.basis(c.block_coord(t, k)).unwrap())
                .collect()
        })
        .collect();
    c.b2_aux = (0..2 * n)
        .map(|t| (1..n).map(|l| c.embed_block(t, &c.local_rows[l])).collect())
        .collect();
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasesCheck {
    pub dimension: usize,
    pub rank_b1: usize,
    pub rank_b2: usize,
}

impl BasesCheck {
    pub fn both_bases(&self) -> bool {
        self.rank_b1 == self.dimension && self.rank_b2 == self.dimension
    }
}

pub fn verify_bases(c: &VPrimeConstruction) -> BasesCheck {
    let p = c.big.p();
    let rows = |it: &mut dyn Iterator<Item = &GroupVector>| -> Vec<Vec<u32>> {
        it.map(|v| v.coords().to_vec()).collect()
    };
    let b1 = rows(&mut c.b1());
    let b2 = rows(&mut c.b2());
    BasesCheck {
        dimension: c.big.n(),
        rank_b1: if b1.len() == c.big.n() {
            rank_mod_p(&b1, p)
        } else {
            0
        },
        rank_b2: if b2.len() == c.big.n() {
            rank_mod_p(&b2, p)
        } else {
            0
        },
    }
}

fn fp_product<'a>(
    ctx: GroupContext,
    factors: impl IntoIterator<Item = &'a GroupVector>,
) -> Result<GroupRingElement> {
    let mut acc = GroupRingElement::one(ctx, Ring::Fp);
    for v in factors {
        acc = acc.mul_binomial(v)?;
    }
    Ok(acc)
}

/// `U_t = prod_{B'_{1,t}} (1 - g^b) * prod_{B'_{2,t}} (1 - g^b)` in F_p[V'].
pub fn u_t(c: &VPrimeConstruction, t: usize) -> Result<GroupRingElement> {
    fp_product(c.big, c.b1_aux[t].iter().chain(&c.b2_aux[t]))
}

/// For each block t, whether `U_t (1 - g^{v_t}) = 0` in F_p[V'].
pub fn check_ut_identities(c: &VPrimeConstruction) -> Result<Vec<bool>> {
    (0..2 * c.n())
        .map(|t| Ok(u_t(c, t)?.mul_binomial(&c.v[t])?.is_zero()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationCheck {
    pub sides_equal: bool,
    pub lhs_zero: bool,
    pub rhs_zero: bool,
}

/// Compares `prod_{B1} prod_{B2}` with `prod_t U_t * prod_j (1 - g^{e_j}) * prod_j (1 - g^{w_j})`.
pub fn check_factorization(c: &VPrimeConstruction) -> Result<FactorizationCheck> {
    let lhs = fp_product(c.big, c.b1().chain(c.b2()))?;
    let heads: Vec<GroupVector> = (0..c.n()).map(|j| c.big.basis(j).unwrap()).collect();
    let rhs = fp_product(
        c.big,
        c.b1_aux
            .iter()
            .zip(&c.b2_aux)
            .flat_map(|(a, b)| a.iter().chain(b))
            .chain(&heads)
            .chain(&c.w),
    )?;
    Ok(FactorizationCheck {
        sides_equal: lhs == rhs,
        lhs_zero: lhs.is_zero(),
        rhs_zero: rhs.is_zero(),
    })
}

/// How one block's coordinates were found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum BlockRoute {
    /// A vector y meeting the first two condition families with
    /// `<a'_1, y> != 0`, scaled by `lambda` to avoid the target.
    Scaled { lambda: u32 },
    /// Direct scan for the full condition set.
    Direct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSolution {
    pub target: u32,
    #[serde(flatten)]
    pub route: BlockRoute,
    pub values: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XPrimeSearch {
    pub witness: Option<GroupVector>,
    pub head: Option<Vec<u32>>,
    pub blocks: Vec<BlockSolution>,
    pub heads_tried: usize,
}

/// Candidate block values: nowhere-zero y with `<a'_l, y> != 0` for l >= 2,
/// paired with `<a'_1, y>`, in mixed-radix order.
fn admissible_block_values(c: &VPrimeConstruction) -> Vec<(Vec<u32>, u32)> {
    let p = c.big.p();
    let m = c.n() - 1;
    let mut out = Vec::new();
    let mut y = vec![1u32; m];
    loop {
        if c.local_rows[1..].iter().all(|r| dot_mod(r, &y, p) != 0) {
            out.push((y.clone(), dot_mod(&c.local_rows[0], &y, p)));
        }
        let mut k = 0;
        loop {
            if k == m {
                return out;
            }
            y[k] += 1;
            if y[k] < p {
                break;
            }
            y[k] = 1;
            k += 1;
        }
    }
}

fn solve_block(admissible: &[(Vec<u32>, u32)], target: u32, p: u32) -> Option<BlockSolution> {
    if let Some((y, s)) = admissible.iter().find(|(_, s)| *s != 0) {
        let lambda = if target == 0 {
            Some(1)
        } else {
            (1..p).find(|&l| (l as u64 * *s as u64 % p as u64) as u32 != target)
        };
        if let Some(lambda) = lambda {
            return Some(BlockSolution {
                target,
                route: BlockRoute::Scaled { lambda },
                values: y
                    .iter()
                    .map(|&v| (v as u64 * lambda as u64 % p as u64) as u32)
                    .collect(),
            });
        }
    }
    admissible
        .iter()
        .find(|(_, s)| *s != target)
        .map(|(y, _)| BlockSolution {
            target,
            route: BlockRoute::Direct,
            values: y.clone(),
        })
}

/// Targets c_j for each block given the head x_1..x_n: the B'_1 and B'_2
/// conditions on block j read `<a'_1, x_block> != c_j`.
pub fn block_targets(c: &VPrimeConstruction, head: &[u32]) -> Vec<u32> {
    let p = c.big.p();
    let n = c.n();
    (0..2 * n)
        .map(|j| {
            let s = if j < n {
                head[j] % p
            } else {
                dot_mod(c.matrix.row(j - n).coords(), head, p)
            };
            (p - s) % p
        })
        .collect()
}

/// Searches for x in V' with `<x, b> != 0` for every b in B1 and B2.
///
/// With `fixed_head` only that head is tried. Without it the all-ones head
/// goes first and then every head in mixed-radix order, which makes the
/// search complete because the blocks decouple once the head is fixed.
pub fn xprime_search(c: &VPrimeConstruction, fixed_head: Option<&[u32]>) -> Result<XPrimeSearch> {
    let n = c.n();
    let p = c.big.p();
    if let Some(h) = fixed_head {
        c.base.vector(h.to_vec())?;
    }
    let admissible = admissible_block_values(c);
    let per_target: Vec<Option<BlockSolution>> =
        (0..p).map(|t| solve_block(&admissible, t, p)).collect();

    let heads: Vec<Vec<u32>> = match fixed_head {
        Some(h) => vec![h.to_vec()],
        None => std::iter::once(vec![1u32; n])
            .chain(
                c.base
                    .vectors()
                    .map(|v| v.into_coords())
                    .filter(|h| h.iter().any(|&x| x != 1)),
            )
            .collect(),
    };
    let mut tried = 0;
    for head in heads {
        tried += 1;
        let targets = block_targets(c, &head);
        let blocks: Option<Vec<BlockSolution>> = targets
            .iter()
            .map(|&t| per_target[t as usize].clone())
            .collect();
        if let Some(blocks) = blocks {
            let mut coords = vec![0u32; c.big.n()];
            coords[..n].copy_from_slice(&head);
            for (t, b) in blocks.iter().enumerate() {
                let start = n + t * (n - 1);
                coords[start..start + n - 1].copy_from_slice(&b.values);
            }
            return Ok(XPrimeSearch {
                witness: Some(c.big.vector(coords)?),
                head: Some(head),
                blocks,
                heads_tried: tried,
            });
        }
    }
    Ok(XPrimeSearch {
        witness: None,
        head: None,
        blocks: Vec::new(),
        heads_tried: tried,
    })
}

/// True when `x` pairs to a nonzero value with every basis vector of B1 and B2.
pub fn is_good_for_bases(c: &VPrimeConstruction, x: &GroupVector) -> bool {
    c.b1().chain(c.b2()).all(|b| c.big.dot(x, b) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[&[i64]]) -> MatrixFp {
        MatrixFp::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn dimension_and_sizes() {
        let c = build_vprime(&m(3, &[&[1, 1], &[1, 2]]), 0, DEFAULT_LAB_BUDGET).unwrap();
        assert_eq!(c.big.n(), 6);
        assert_eq!(c.big.order(), 729);
        assert_eq!(c.b1().count(), 6);
        assert_eq!(c.b2().count(), 6);
        assert_eq!(vprime_dimension(3), 15);
    }

    #[test]
    fn reindexing_for_degenerate_projection() {
        // a' = [(0,1),(0,0)] along axis 0: only row 0 removed leaves a zero span,
        // so row 1 moves first.
        let c = build_vprime(&m(2, &[&[1, 1], &[1, 0]]), 0, DEFAULT_LAB_BUDGET).unwrap();
        assert_eq!(c.row_order, vec![1, 0]);
        assert!(c.v.iter().all(|v| v.is_zero()));
        assert!(verify_bases(&c).both_bases());
    }

    #[test]
    fn bases_for_counterexamples() {
        for (p, rows) in [(3u32, [[1i64, 1], [1, 2]]), (2, [[1, 1], [1, 0]])] {
            for axis in 0..2 {
                let mat = m(p, &[&rows[0], &rows[1]]);
                let c = build_vprime(&mat, axis, DEFAULT_LAB_BUDGET).unwrap();
                assert!(verify_bases(&c).both_bases());
            }
        }
    }

    #[test]
    fn dropping_a_vector_drops_rank() {
        let c = build_vprime(&m(3, &[&[1, 1], &[1, 2]]), 0, DEFAULT_LAB_BUDGET).unwrap();
        let rows: Vec<Vec<u32>> = c.b1().skip(1).map(|v| v.coords().to_vec()).collect();
        assert_eq!(rank_mod_p(&rows, 3), c.big.n() - 1);
    }

    #[test]
    fn feasibility_gate() {
        assert!(check_feasible(3, 2, DEFAULT_LAB_BUDGET).is_ok());
        assert!(check_feasible(5, 2, DEFAULT_LAB_BUDGET).is_ok());
        assert!(check_feasible(2, 3, DEFAULT_LAB_BUDGET).is_ok());
        let err = check_feasible(3, 3, DEFAULT_LAB_BUDGET)
            .unwrap_err()
            .to_string();
        assert!(err.contains("3^15"), "{err}");
        assert!(check_feasible(3, 3, LARGE_LAB_BUDGET).is_ok());
        assert!(check_feasible(5, 3, LARGE_LAB_BUDGET).is_err());
        let one = m(5, &[&[2]]);
        assert!(matches!(
            build_vprime(&one, 0, DEFAULT_LAB_BUDGET),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn identity_at_p5_has_witness() {
        let c = build_vprime(&m(5, &[&[1, 0], &[0, 1]]), 0, DEFAULT_LAB_BUDGET).unwrap();
        let s = xprime_search(&c, Some(&[1, 1])).unwrap();
        let x = s.witness.expect("witness");
        assert!(is_good_for_bases(&c, &x));
        assert!(!c.full_product().z_identity_holds());
    }

    #[test]
    fn search_agrees_with_character_criterion() {
        for (p, rows) in [
            (2u32, [[1i64, 1], [1, 0]]),
            (2, [[1, 0], [0, 1]]),
            (3, [[1, 1], [1, 2]]),
            (3, [[1, 0], [0, 1]]),
            (5, [[1, 2], [3, 4]]),
        ] {
            for axis in 0..2 {
                let c =
                    build_vprime(&m(p, &[&rows[0], &rows[1]]), axis, DEFAULT_LAB_BUDGET).unwrap();
                let s = xprime_search(&c, None).unwrap();
                assert_eq!(s.witness.is_some(), !c.full_product().z_identity_holds());
                if let Some(x) = &s.witness {
                    assert!(is_good_for_bases(&c, x));
                }
            }
        }
    }

    #[test]
    fn block_order_does_not_matter() {
        let c = build_vprime(&m(5, &[&[1, 2], &[3, 4]]), 1, DEFAULT_LAB_BUDGET).unwrap();
        let admissible = admissible_block_values(&c);
        let targets = block_targets(&c, &[1, 1]);
        let forward: Vec<_> = targets
            .iter()
            .map(|&t| solve_block(&admissible, t, 5))
            .collect();
        let backward: Vec<_> = targets
            .iter()
            .rev()
            .map(|&t| solve_block(&admissible, t, 5))
            .collect();
        assert_eq!(forward, backward.into_iter().rev().collect::<Vec<_>>());
    }
}
