//! Orbit representatives under `M -> L M R^T` with L, R monomial.
//!
//! The left factor is absorbed by normalizing rows (first nonzero entry 1)
//! and sorting them; the right factor is explored exhaustively. Matrices are
//! compared row-major with residues ordered 1 < 2 < ... < p-1 < 0, so the
//! identity is its own representative.

use crate::group::GroupContext;
use crate::linalg::inv_mod;
use crate::matrix::MatrixFp;

use super::enumerate::row_key;

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// All coordinate-side monomial transforms as (perm, scales).
#[derive(Debug, Clone)]
pub(crate) struct ColumnTransforms {
    p: u32,
    n: usize,
    items: Vec<(Vec<usize>, Vec<u32>)>,
}

impl ColumnTransforms {
    pub fn new(p: u32, n: usize) -> Self {
        let mut scales = vec![Vec::new()];
        for _ in 0..n {
            scales = scales
                .into_iter()
                .flat_map(|s: Vec<u32>| {
                    (1..p).map(move |c| {
                        let mut t = s.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        let items = permutations(n)
            .into_iter()
            .flat_map(|perm| scales.iter().map(move |s| (perm.clone(), s.clone())))
            .collect();
        ColumnTransforms { p, n, items }
    }

    /// Size of the full two-sided monomial group acting on matrices.
    pub fn group_order(&self) -> u64 {
        (self.items.len() as u64).pow(2)
    }
}

/// Applies a column transform and then row normalization and sorting. `rows`
/// receives the row keys, which determine the matrix completely.
fn normalized_keys(
    m: &[u32],
    n: usize,
    p: u32,
    perm: &[usize],
    scales: &[u32],
    buf: &mut Vec<u32>,
    rows: &mut Vec<u32>,
) {
    rows.clear();
    for r in 0..n {
        buf.clear();
        let src = &m[r * n..(r + 1) * n];
        buf.extend((0..n).map(|c| src[perm[c]] * scales[c] % p));
        let lead = buf.iter().copied().find(|&x| x != 0).unwrap_or(1);
        let inv = inv_mod(lead, p).unwrap_or(1);
        for x in buf.iter_mut() {
            *x = *x * inv % p;
        }
        rows.push(row_key(buf, p));
    }
    rows.sort_unstable();
}

fn keys_to_rows(keys: &[u32], n: usize, p: u32) -> Vec<Vec<u32>> {
    keys.iter()
        .map(|&k| {
            let mut v = vec![0u32; n];
            let mut rest = k;
            for c in v.iter_mut().rev() {
                *c = (rest % p + 1) % p;
                rest /= p;
            }
            v
        })
        .collect()
}

/// Outcome of testing whether a row-canonical matrix is an orbit minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct RepresentativeTest {
    pub is_minimum: bool,
    /// Number of column transforms that map the matrix back to itself.
    pub stabilizer: u64,
}

/// `m` must already be row-canonical (normalized rows in increasing order).
pub(crate) fn test_representative(
    m: &[u32],
    n: usize,
    transforms: &ColumnTransforms,
) -> RepresentativeTest {
    let p = transforms.p;
    let own: Vec<u32> = {
        let mut v: Vec<u32> = (0..n).map(|r| row_key(&m[r * n..(r + 1) * n], p)).collect();
        v.sort_unstable();
        v
    };
    let mut buf = Vec::with_capacity(n);
    let mut keys = Vec::with_capacity(n);
    let mut stabilizer = 0;
    for (perm, scales) in &transforms.items {
        normalized_keys(m, n, p, perm, scales, &mut buf, &mut keys);
        match keys.cmp(&own) {
            std::cmp::Ordering::Less => {
                return RepresentativeTest {
                    is_minimum: false,
                    stabilizer: 0,
                }
            }
            std::cmp::Ordering::Equal => stabilizer += 1,
            std::cmp::Ordering::Greater => {}
        }
    }
    RepresentativeTest {
        is_minimum: true,
        stabilizer,
    }
}

/// The least matrix in the monomial orbit of `m`.
pub fn canonical_form(m: &MatrixFp) -> MatrixFp {
    let (p, n) = (m.p(), m.n());
    let transforms = ColumnTransforms::new(p, n);
    debug_assert_eq!(transforms.n, n);
    let flat: Vec<u32> = m
        .rows()
        .iter()
        .flat_map(|r| r.coords().iter().copied())
        .collect();
    let mut buf = Vec::with_capacity(n);
    let mut keys = Vec::with_capacity(n);
    let mut best: Option<Vec<u32>> = None;
    for (perm, scales) in &transforms.items {
        normalized_keys(&flat, n, p, perm, scales, &mut buf, &mut keys);
        if best.as_ref().is_none_or(|b| keys < *b) {
            best = Some(keys.clone());
        }
    }
    let ctx = GroupContext::new(p, n).expect("context of an existing matrix");
    let rows = keys_to_rows(&best.expect("at least one transform"), n, p)
        .into_iter()
        .map(|r| ctx.vector(r).unwrap())
        .collect();
    MatrixFp::new(ctx, rows).expect("orbit members share the rank")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::MonomialMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(p: u32, rows: &[&[i64]]) -> MatrixFp {
        MatrixFp::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_is_canonical() {
        for (p, n) in [(2, 2), (3, 3), (5, 2), (7, 3)] {
            let id = MatrixFp::identity(GroupContext::new(p, n).unwrap());
            assert_eq!(canonical_form(&id), id);
        }
    }

    #[test]
    fn counterexample_orbit() {
        // [[1,1],[1,2]] over F_3: columns scaled/permuted, rows normalized.
        let c = canonical_form(&m(3, &[&[1, 1], &[1, 2]]));
        assert_eq!(canonical_form(&m(3, &[&[2, 1], &[1, 1]])), c);
        assert_eq!(canonical_form(&c), c);
    }

    #[test]
    fn orbit_invariant_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, n) in [(3, 2), (5, 2), (5, 3), (2, 3)] {
            let ctx = GroupContext::new(p, n).unwrap();
            for _ in 0..40 {
                let mat = loop {
                    let rows = (0..n)
                        .map(|_| {
                            ctx.vector(
                                (0..n)
                                    .map(|_| rand::Rng::gen_range(&mut rng, 0..p))
                                    .collect::<Vec<_>>(),
                            )
                            .unwrap()
                        })
                        .collect();
                    let cand = MatrixFp::new(ctx, rows).unwrap();
                    if cand.is_nonsingular() {
                        break cand;
                    }
                };
                let l = MonomialMatrix::random(n, p, &mut rng);
                let r = MonomialMatrix::random(n, p, &mut rng);
                let c = canonical_form(&mat);
                assert_eq!(canonical_form(&mat.monomial_transform(&l, &r)), c);
                assert_eq!(canonical_form(&c), c);
            }
        }
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(1), vec![vec![0]]);
    }
}
