//! Exact integer and rational matrix routines: determinant, rank, inertia,
//! Smith normal form. Matrices are row-major `Vec<Vec<_>>`.

// Row operations read better with explicit indices.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Q;

pub type IntMatrix = Vec<Vec<i64>>;

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn to_q(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    m.iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
        .collect()
}

/// Fraction-free (Bareiss) determinant.
pub fn det(m: &[Vec<i64>]) -> BigInt {
    det_big(to_big(m))
}

pub fn det_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over Q.
pub fn rank(m: &[Vec<i64>]) -> usize {
    rank_q(to_q(m))
}

pub fn rank_q(mut a: Vec<Vec<Q>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Inertia `(positive, negative, zero)` of a symmetric integer matrix, by
/// exact congruence diagonalization over Q.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let mut a = to_q(m);
    let n = a.len();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        // Bring a nonzero diagonal entry to position k.
        if let Some(i) = (k..n).find(|&i| !a[i][i].is_zero()) {
            sym_swap(&mut a, i, k);
        } else {
            let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
            let Some((i, j)) = off else { break };
            // row_i += row_j, col_i += col_j gives diagonal 2 a_ij
            sym_add(&mut a, i, j);
            sym_swap(&mut a, i, k);
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
            for j in k..n {
                let v = &f * &a[j][k];
                a[j][i] -= v;
            }
        }
        k += 1;
    }
    (pos, neg, n - pos - neg)
}

fn sym_swap(a: &mut [Vec<Q>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn sym_add(a: &mut [Vec<Q>], i: usize, j: usize) {
    let n = a.len();
    for c in 0..n {
        let v = a[j][c].clone();
        a[i][c] += v;
    }
    for r in 0..n {
        let v = a[r][j].clone();
        a[r][i] += v;
    }
}

/// Diagonal of the Smith normal form (nonnegative, each dividing the next),
/// of length `min(rows, cols)`.
pub fn smith_diagonal(m: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a = to_big(m);
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let n = rows.min(cols);
    for t in 0..n {
        // Pivot: smallest nonzero absolute value in the remaining block.
        loop {
            let piv = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = piv else {
                return finish_smith(a, n);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&p);
                if !q.is_zero() {
                    for i in t..rows {
                        let v = &q * &a[i][t];
                        a[i][j] -= v;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any offending entry into row t and retry.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &p).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
    }
    finish_smith(a, n)
}

fn finish_smith(a: Vec<Vec<BigInt>>, n: usize) -> Vec<BigInt> {
    (0..n).map(|i| a[i][i].abs()).collect()
}

/// Block-diagonal sum of square matrices.
pub fn block_sum(blocks: &[IntMatrix]) -> IntMatrix {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec![0; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out[off + i][off + j] = v;
            }
        }
        off += b.len();
    }
    out
}
