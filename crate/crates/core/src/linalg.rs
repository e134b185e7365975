//! Gaussian elimination over F_p on plain row vectors.

pub fn inv_mod(a: u32, p: u32) -> Option<u32> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (a as u64, p as u64 - 2, 1u64);
    let m = p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    Some(acc as u32)
}

/// Reduces `rows` in place to row echelon form and returns the rank.
fn echelon(rows: &mut [Vec<u32>], p: u32) -> usize {
    let m = p as u64;
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], p).expect("nonzero pivot") as u64;
        for x in rows[rank].iter_mut() {
            *x = (*x as u64 * inv % m) as u32;
        }
        for r in 0..rows.len() {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let f = rows[r][col] as u64;
            let (head, tail) = if r < rank {
                let (a, b) = rows.split_at_mut(rank);
                (&mut a[r], &b[0])
            } else {
                let (a, b) = rows.split_at_mut(r);
                (&mut b[0], &a[rank])
            };
            for (x, &y) in head.iter_mut().zip(tail.iter()) {
                *x = ((*x as u64 + m * m - f * y as u64) % m) as u32;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    let mut work = rows.to_vec();
    echelon(&mut work, p)
}

pub fn det_mod_p(rows: &[Vec<u32>], p: u32) -> u32 {
    let n = rows.len();
    let m = p as u64;
    let mut a = rows.to_vec();
    let mut det = 1u64;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            a.swap(pivot, col);
            det = (m - det) % m;
        }
        det = det * a[col][col] as u64 % m;
        let inv = inv_mod(a[col][col], p).expect("nonzero pivot") as u64;
        for r in col + 1..n {
            let f = a[r][col] as u64 * inv % m;
            if f == 0 {
                continue;
            }
            for k in col..n {
                a[r][k] = ((a[r][k] as u64 + m * m - f * a[col][k] as u64) % m) as u32;
            }
        }
    }
    det as u32
}

/// Inverse of a square matrix mod p, or `None` when singular.
pub fn inverse_mod_p(rows: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = rows.len();
    let mut aug: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u32::from(i == j)));
            row
        })
        .collect();
    // Pivot only within the left block.
    let m = p as u64;
    for col in 0..n {
        let pivot = (col..n).find(|&r| aug[r][col] != 0)?;
        aug.swap(col, pivot);
        let inv = inv_mod(aug[col][col], p)? as u64;
        for x in aug[col].iter_mut() {
            *x = (*x as u64 * inv % m) as u32;
        }
        for r in 0..n {
            if r == col || aug[r][col] == 0 {
                continue;
            }
            let f = aug[r][col] as u64;
            let pivot_row = aug[col].clone();
            for (x, y) in aug[r].iter_mut().zip(pivot_row) {
                *x = ((*x as u64 + m * m - f * y as u64) % m) as u32;
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul_mod_p(a: &[Vec<u32>], b: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let m = p as u64;
    a.iter()
        .map(|row| {
            (0..b.first().map_or(0, |r| r.len()))
                .map(|c| {
                    (row.iter()
                        .zip(b)
                        .map(|(&x, br)| x as u64 * br[c] as u64 % m)
                        .sum::<u64>()
                        % m) as u32
                })
                .collect()
        })
        .collect()
}
