//! Order of the isometry group `O(L)` by backtracking over images of the
//! basis vectors.

use super::Lattice;
use crate::error::{Error, Result};

/// Default largest rank accepted by [`orthogonal_group_order`].
pub const DEFAULT_RANK_BOUND: usize = 4;

/// Counts the isometries of `L`.
///
/// A candidate image of `b_i` is any vector of norm `⟨b_i,b_i⟩`; a partial
/// assignment survives only if it reproduces the Gram entries against every
/// image already chosen. Basis vectors are processed in order of increasing
/// candidate count.
pub fn orthogonal_group_order(l: &Lattice, rank_bound: usize) -> Result<u64> {
    let n = l.rank();
    if n > rank_bound {
        return Err(Error::RankBoundExceeded { rank: n, bound: rank_bound });
    }
    let gram = l.gram();
    let candidates: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|i| l.enumerator().integral_vectors(gram[i][i]))
        .collect();
    // G·v for each candidate so that inner products are dot products.
    let paired: Vec<Vec<Vec<i64>>> = candidates
        .iter()
        .map(|cs| {
            cs.iter()
                .map(|v| {
                    gram.iter()
                        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));

    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    Ok(count(&order, &candidates, &paired, gram, &mut chosen))
}

fn count(
    order: &[usize],
    candidates: &[Vec<Vec<i64>>],
    paired: &[Vec<Vec<i64>>],
    gram: &[Vec<i64>],
    chosen: &mut Vec<usize>,
) -> u64 {
    let p = chosen.len();
    if p == order.len() {
        return 1;
    }
    let i = order[p];
    let mut total = 0;
    'cand: for (ci, v) in candidates[i].iter().enumerate() {
        for (q, &cj) in chosen.iter().enumerate() {
            let j = order[q];
            let gw = &paired[j][cj];
            let ip: i64 = v.iter().zip(gw).map(|(a, b)| a * b).sum();
            if ip != gram[i][j] {
                continue 'cand;
            }
        }
        chosen.push(ci);
        total += count(order, candidates, paired, gram, chosen);
        chosen.pop();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        let l = Lattice::new(vec![vec![8]]).unwrap();
        assert_eq!(orthogonal_group_order(&l, 4).unwrap(), 2);
        let l = Lattice::new(vec![vec![4, 0], vec![0, 4]]).unwrap();
        assert_eq!(orthogonal_group_order(&l, 4).unwrap(), 8);
        let a2 = Lattice::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(orthogonal_group_order(&a2, 4).unwrap(), 12);
    }

    #[test]
    fn sqrt2_a3_has_order_48() {
        let l = Lattice::new(vec![vec![4, -2, 0], vec![-2, 4, -2], vec![0, -2, 4]]).unwrap();
        assert_eq!(orthogonal_group_order(&l, 4).unwrap(), 48);
    }

    #[test]
    fn rank_bound_enforced() {
        let l = Lattice::new((0..5).map(|i| (0..5).map(|j| 2 * (i == j) as i64).collect()).collect())
            .unwrap();
        assert_eq!(
            orthogonal_group_order(&l, 4),
            Err(Error::RankBoundExceeded { rank: 5, bound: 4 })
        );
        assert_eq!(orthogonal_group_order(&l, 5).unwrap(), 3840);
    }
}
