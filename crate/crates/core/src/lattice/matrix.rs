//! Exact integer and rational matrix routines: Hermite and Smith normal
//! forms, Bareiss determinants, rational inverses, and an LLL pass on Gram
//! matrices used to speed up enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn sub_row_multiple(a: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < source {
        let (lo, hi) = a.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

fn sub_col_multiple(a: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let s = row[source].clone();
        row[target] -= q * s;
    }
}

/// Row-style Hermite normal form of the row span of `rows`.
///
/// The result is upper echelon with positive pivots and entries above each
/// pivot reduced into `[0, pivot)`; zero rows are dropped, so the number of
/// rows is the rank. Two integer matrices span the same Z-module iff their
/// HNFs are identical.
pub fn hnf(rows: &[Vec<BigInt>]) -> IntMatrix {
    let mut a: IntMatrix = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return a;
    }
    let n = a[0].len();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(piv) = piv else { break };
            a.swap(r, piv);
            let mut clean = true;
            for i in r + 1..m {
                if !a[i][c].is_zero() {
                    let q = a[i][c].div_floor(&a[r][c]);
                    sub_row_multiple(&mut a, i, r, &q);
                    if !a[i][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            sub_row_multiple(&mut a, i, r, &q);
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Smith normal form `U·A·V = diag(d_1, …, d_n)` of a square nonsingular
/// integer matrix, with `d_i | d_{i+1}` and `U`, `V` unimodular.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn snf(a: &[Vec<BigInt>]) -> Snf {
    let n = a.len();
    let mut a: IntMatrix = a.to_vec();
    let mut u = identity(n);
    let mut v = identity(n);
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..n {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    sub_row_multiple(&mut a, i, t, &q);
                    sub_row_multiple(&mut u, i, t, &q);
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    sub_col_multiple(&mut a, j, t, &q);
                    sub_col_multiple(&mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    sub_row_multiple(&mut a, t, i, &minus_one);
                    sub_row_multiple(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i].clone()).collect();
    Snf { diag, u, v }
}

/// Fraction-free Gaussian elimination (Bareiss). Exact for any size.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = val / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Leading principal minors of a square matrix, orders `1..=n`.
pub fn leading_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    (1..=m.len())
        .map(|k| {
            let sub: IntMatrix = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

pub fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Inverse of a nonsingular integer matrix over the rationals.
pub fn inverse(m: &[Vec<BigInt>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.iter().map(|r| r.iter().map(rat).collect()).collect();
    let mut inv: RatMatrix = identity(n)
        .iter()
        .map(|r| r.iter().map(rat).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let pivot = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &pivot;
            inv[c][j] = &inv[c][j] / &pivot;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                    let d = &f * &inv[c][j];
                    inv[i][j] -= d;
                }
            }
        }
    }
    Some(inv)
}

/// Rank of a set of bit rows over F_2.
pub fn rank_mod2(rows: &[u64]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in 0..64 {
        let mask = 1u64 << bit;
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i] & mask != 0 {
                rows[i] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

/// Result of LLL-reducing a Gram matrix: `reduced = T·G·Tᵀ` with `T`
/// unimodular (row `i` of `T` is the `i`-th reduced basis vector written in
/// the original basis).
#[derive(Debug, Clone)]
pub struct LllGram {
    pub transform: Vec<Vec<i64>>,
    pub reduced: Vec<Vec<i64>>,
}

fn gso(g: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j] as f64;
            for l in 0..j {
                s -= mu[j][l] * mu[i][l] * b[l];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[i][i] as f64;
        for l in 0..i {
            s -= mu[i][l] * mu[i][l] * b[l];
        }
        b[i] = s;
    }
    (mu, b)
}

/// LLL with δ = 0.99 on a positive-definite integer Gram matrix.
///
/// Gram-Schmidt data is floating point, but every basis change is an exact
/// integer operation, so the output is always an exact congruent Gram
/// matrix even if the reduction is imperfect.
pub fn lll_gram(g: &[Vec<i64>]) -> LllGram {
    const DELTA: f64 = 0.99;
    let n = g.len();
    let mut gm: Vec<Vec<i128>> = g
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut t: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i128).collect())
        .collect();
    let mut k = 1;
    let mut iterations = 0usize;
    while k < n && iterations < 100_000 {
        iterations += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&gm);
            let r = mu[k][j].round();
            if r != 0.0 {
                let r = r as i128;
                for c in 0..n {
                    t[k][c] -= r * t[j][c];
                    gm[k][c] -= r * gm[j][c];
                }
                for row in gm.iter_mut() {
                    row[k] -= r * row[j];
                }
            }
        }
        let (mu, b) = gso(&gm);
        if b[k] >= (DELTA - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            k += 1;
        } else {
            t.swap(k, k - 1);
            gm.swap(k, k - 1);
            for row in gm.iter_mut() {
                row.swap(k, k - 1);
            }
            k = k.max(2) - 1;
        }
    }
    let conv = |m: Vec<Vec<i128>>| -> Vec<Vec<i64>> {
        m.into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("LLL overflow")).collect())
            .collect()
    };
    LllGram {
        transform: conv(t),
        reduced: conv(gm),
    }
}

/// Converts a matrix of small big integers to `i64`, panicking on overflow.
pub fn to_i64(m: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().expect("entry does not fit in i64"))
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|l| &row[l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(m: &[&[i64]]) -> IntMatrix {
        m.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn hnf_of_dependent_rows() {
        let h = hnf(&big(&[&[4, 0], &[0, 4], &[2, 2], &[4, 4]]));
        assert_eq!(h, big(&[&[2, 2], &[0, 4]]));
    }

    #[test]
    fn snf_of_diagonal_and_a2() {
        let s = snf(&big(&[&[4, 0], &[0, 6]]));
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(12)]);
        let s = snf(&big(&[&[2, 1], &[1, 2]]));
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(3)]);
        let a = big(&[&[2, 1], &[1, 2]]);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        assert_eq!(d, big(&[&[1, 0], &[0, 3]]));
    }

    #[test]
    fn determinant_by_cofactor() {
        assert_eq!(determinant(&big(&[&[2, 1], &[1, 2]])), BigInt::from(3));
        assert_eq!(
            determinant(&big(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])),
            BigInt::from(-5)
        );
    }

    #[test]
    fn lll_keeps_congruence() {
        let g = vec![vec![2, 2], vec![2, 4]];
        let r = lll_gram(&g);
        assert_eq!(r.reduced, vec![vec![2, 0], vec![0, 2]]);
        let t = to_big(&r.transform);
        let back = mat_mul(&mat_mul(&t, &to_big(&g)), &transpose(&t));
        assert_eq!(back, to_big(&r.reduced));
    }

    #[test]
    fn rank_over_f2() {
        assert_eq!(rank_mod2(&[0b11, 0b01, 0b10]), 2);
        assert_eq!(rank_mod2(&[0, 0]), 0);
    }
}
