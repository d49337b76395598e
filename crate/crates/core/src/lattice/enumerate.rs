//! Exact enumeration of vectors of a given norm in a coset `shift + L`.
//!
//! Fincke–Pohst over an LLL-reduced basis. The floating-point Cholesky data
//! only prunes the search tree (with a small slack); every reported vector
//! has its norm re-checked in exact integer arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::matrix::{self, lll_gram};
use super::{DualVector, Lattice, Coset};
use crate::error::{Error, Result};

const SLACK: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct Enumerator {
    n: usize,
    /// Rows: reduced basis vectors in original coordinates.
    transform: Vec<Vec<i64>>,
    /// Maps original coordinates to reduced coordinates (`T⁻ᵀ`).
    back: Vec<Vec<i64>>,
    gram: Vec<Vec<i64>>,
    qdiag: Vec<f64>,
    q: Vec<Vec<f64>>,
}

impl Enumerator {
    pub fn new(gram: &[Vec<i64>]) -> Self {
        let n = gram.len();
        let red = lll_gram(gram);
        let inv = matrix::inverse(&matrix::to_big(&red.transform)).expect("unimodular");
        let back: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = &inv[j][i];
                        assert!(x.is_integer(), "LLL transform is not unimodular");
                        x.to_integer().to_i64().expect("small transform")
                    })
                    .collect()
            })
            .collect();
        // Cholesky of the reduced Gram matrix in the "q" form:
        // norm(w) = Σ_i q_ii (w_i + Σ_{j>i} q_ij w_j)².
        let mut qdiag = vec![0.0; n];
        let mut q = vec![vec![0.0; n]; n];
        let g: Vec<Vec<f64>> = red
            .reduced
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect();
        let mut a = g.clone();
        for i in 0..n {
            qdiag[i] = a[i][i];
            for j in i + 1..n {
                q[i][j] = a[i][j] / a[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    a[k][l] -= q[i][k] * q[i][l] * qdiag[i];
                    a[l][k] = a[k][l];
                }
            }
        }
        Enumerator {
            n,
            transform: red.transform,
            back,
            gram: red.reduced,
            qdiag,
            q,
        }
    }

    pub fn reduced_gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    fn exact_norm(&self, u: &[i128]) -> i128 {
        let mut s = 0i128;
        for i in 0..self.n {
            if u[i] == 0 {
                continue;
            }
            let mut r = 0i128;
            for j in 0..self.n {
                r += self.gram[i][j] as i128 * u[j];
            }
            s += u[i] * r;
        }
        s
    }

    /// Visits every `u ∈ s + denom·Zⁿ` (reduced coordinates, scaled by
    /// `denom`) whose exact scaled norm satisfies
    /// `target_den · uᵀGu = target_num · denom²`.
    fn search(
        &self,
        s: &[i128],
        denom: i128,
        target_num: i128,
        target_den: i128,
        visit: &mut dyn FnMut(&[i128]),
    ) {
        if self.n == 0 {
            return;
        }
        let radius = target_num as f64 / target_den as f64;
        let budget = radius * (1.0 + SLACK) + SLACK;
        let mut u = vec![0i128; self.n];
        let mut w = vec![0.0f64; self.n];
        let goal = target_num * denom * denom;
        self.descend(
            self.n - 1,
            budget,
            s,
            denom,
            &mut u,
            &mut w,
            &mut |u: &[i128]| {
                if target_den * self.exact_norm(u) == goal {
                    visit(u);
                }
            },
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        i: usize,
        remaining: f64,
        s: &[i128],
        denom: i128,
        u: &mut [i128],
        w: &mut [f64],
        leaf: &mut dyn FnMut(&[i128]),
    ) {
        let c: f64 = (i + 1..self.n).map(|j| self.q[i][j] * w[j]).sum();
        let half = (remaining.max(0.0) / self.qdiag[i]).sqrt() + SLACK;
        let offset = s[i] as f64 / denom as f64;
        let lo = (-c - half - offset).ceil() as i128;
        let hi = (-c + half - offset).floor() as i128;
        for k in lo..=hi {
            let ui = s[i] + denom * k;
            let wi = ui as f64 / denom as f64;
            let t = wi + c;
            let rest = remaining - self.qdiag[i] * t * t;
            if rest < -SLACK * (1.0 + remaining.abs()) {
                continue;
            }
            u[i] = ui;
            w[i] = wi;
            if i == 0 {
                leaf(u);
            } else {
                self.descend(i - 1, rest, s, denom, u, w, leaf);
            }
        }
        u[i] = 0;
        w[i] = 0.0;
    }

    /// Every vector of `shift + L` with norm exactly `target`, in
    /// lexicographic order of original coordinates.
    pub fn vectors(&self, shift: &DualVector, target: &BigRational) -> Result<Vec<DualVector>> {
        if target.is_negative() {
            return Err(Error::NormNegative(super::vector::format_rational(target)));
        }
        if shift.len() != self.n {
            return Err(Error::DimensionMismatch { rank: self.n, got: shift.len() });
        }
        let denom_big = shift.denominator();
        let denom = denom_big.to_i128().expect("small denominator");
        let x: Vec<i128> = shift
            .scaled_integers(&denom_big)
            .iter()
            .map(|v| v.to_i128().expect("small coordinate"))
            .collect();
        let s: Vec<i128> = self
            .back
            .iter()
            .map(|row| row.iter().zip(&x).map(|(&b, &v)| b as i128 * v).sum())
            .collect();
        let (tn, td) = (
            target.numer().to_i128().expect("small norm"),
            target.denom().to_i128().expect("small norm"),
        );
        let mut out = Vec::new();
        self.search(&s, denom, tn, td, &mut |u| {
            let orig: Vec<i128> = (0..self.n)
                .map(|c| (0..self.n).map(|l| self.transform[l][c] as i128 * u[l]).sum())
                .collect();
            out.push(DualVector::from_scaled(&orig, denom));
        });
        out.sort();
        Ok(out)
    }

    /// Integer-coordinate lattice vectors of norm `m`, sorted.
    pub fn integral_vectors(&self, m: i64) -> Vec<Vec<i64>> {
        let zero = vec![0i128; self.n];
        let mut out = Vec::new();
        self.search(&zero, 1, m as i128, 1, &mut |u| {
            let orig: Vec<i64> = (0..self.n)
                .map(|c| {
                    let v: i128 = (0..self.n).map(|l| self.transform[l][c] as i128 * u[l]).sum();
                    v as i64
                })
                .collect();
            out.push(orig);
        });
        out.sort();
        out
    }

    pub fn count_integral(&self, m: i64) -> usize {
        let zero = vec![0i128; self.n];
        let mut count = 0;
        self.search(&zero, 1, m as i128, 1, &mut |_| count += 1);
        count
    }
}

/// Every `v ∈ coset` with `⟨v,v⟩ = m`, lexicographically ordered.
pub fn vectors_of_norm(l: &Lattice, coset: &Coset, m: &BigRational) -> Result<Vec<DualVector>> {
    l.enumerator().vectors(coset.rep(), m)
}

pub fn count_norm(l: &Lattice, coset: &Coset, m: &BigRational) -> Result<usize> {
    Ok(vectors_of_norm(l, coset, m)?.len())
}

/// Same as [`vectors_of_norm`] for an arbitrary shift vector (not
/// necessarily canonical).
pub fn vectors_of_norm_shifted(
    l: &Lattice,
    shift: &DualVector,
    m: &BigRational,
) -> Result<Vec<DualVector>> {
    l.enumerator().vectors(shift, m)
}

pub fn norm_value(m: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8() -> Lattice {
        // Cartan matrix of E8 (Bourbaki labelling).
        let c = vec![
            vec![2, 0, -1, 0, 0, 0, 0, 0],
            vec![0, 2, 0, -1, 0, 0, 0, 0],
            vec![-1, 0, 2, -1, 0, 0, 0, 0],
            vec![0, -1, -1, 2, -1, 0, 0, 0],
            vec![0, 0, 0, -1, 2, -1, 0, 0],
            vec![0, 0, 0, 0, -1, 2, -1, 0],
            vec![0, 0, 0, 0, 0, -1, 2, -1],
            vec![0, 0, 0, 0, 0, 0, -1, 2],
        ];
        Lattice::new(c).unwrap()
    }

    #[test]
    fn two_a1_cosets() {
        let l = Lattice::new(vec![vec![8]]).unwrap();
        let d = l.discriminant();
        let trivial = d.trivial();
        assert!(vectors_of_norm(&l, &trivial, &norm_value(2)).unwrap().is_empty());
        let half = &d.torsion2_reps()[1];
        let v = vectors_of_norm(&l, half, &norm_value(2)).unwrap();
        assert_eq!(
            v,
            vec![DualVector::from_scaled(&[-1], 2), DualVector::from_scaled(&[1], 2)]
        );
    }

    #[test]
    fn e8_roots_and_norm4() {
        let l = e8();
        let t = l.discriminant().trivial();
        assert_eq!(count_norm(&l, &t, &norm_value(2)).unwrap(), 240);
        assert_eq!(count_norm(&l, &t, &norm_value(4)).unwrap(), 2160);
        assert_eq!(count_norm(&l, &t, &norm_value(0)).unwrap(), 1);
    }

    #[test]
    fn negative_norm_rejected() {
        let l = Lattice::new(vec![vec![2]]).unwrap();
        let t = l.discriminant().trivial();
        assert!(matches!(
            vectors_of_norm(&l, &t, &norm_value(-2)),
            Err(Error::NormNegative(_))
        ));
    }

    #[test]
    fn a2_dual_coset_of_norm_two_thirds() {
        let l = Lattice::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
        let d = l.discriminant();
        let nontrivial: Vec<_> = (0..3)
            .map(|k| d.from_element(vec![BigInt::from(0), BigInt::from(k)]))
            .filter(|c| !c.is_trivial())
            .collect();
        let m = BigRational::new(2.into(), 3.into());
        for c in nontrivial {
            assert_eq!(count_norm(&l, &c, &m).unwrap(), 3);
        }
    }
}
