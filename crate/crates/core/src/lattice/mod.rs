//! Integral positive-definite lattices given by Gram matrices.
//!
//! Every vector is written in coordinates of the lattice basis. Lattice
//! vectors have integer coordinates, dual vectors rational ones.

pub mod discriminant;
pub mod enumerate;
pub mod isometry;
pub mod matrix;
mod vector;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
pub use discriminant::{Coset, DiscriminantGroup};
pub use enumerate::Enumerator;
pub use vector::{format_rational, parse_rational, DualVector};

/// An integral positive-definite lattice.
#[derive(Clone)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
    det: BigInt,
    discriminant: OnceLock<DiscriminantGroup>,
    enumerator: OnceLock<Enumerator>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}
impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice").field("gram", &self.gram).finish()
    }
}

impl Lattice {
    /// Validates a Gram matrix and wraps it.
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::NotSquare("empty matrix".into()));
        }
        if let Some(r) = gram.iter().position(|r| r.len() != n) {
            return Err(Error::NotSquare(format!(
                "row {} has {} entries, expected {}",
                r,
                gram[r].len(),
                n
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let minors = matrix::leading_minors(&matrix::to_big(&gram));
        if let Some(k) = minors.iter().position(|m| !m.is_positive()) {
            return Err(Error::NotPositiveDefinite { order: k + 1 });
        }
        let det = minors[n - 1].clone();
        Ok(Lattice {
            gram,
            det,
            discriminant: OnceLock::new(),
            enumerator: OnceLock::new(),
        })
    }

    /// Accepts rational entries, rejecting any that are not integers.
    pub fn from_rational(gram: &[Vec<BigRational>]) -> Result<Self> {
        let mut rows = Vec::with_capacity(gram.len());
        for (i, r) in gram.iter().enumerate() {
            let mut row = Vec::with_capacity(r.len());
            for (j, x) in r.iter().enumerate() {
                let v = if x.is_integer() { x.to_integer().to_i64() } else { None };
                match v {
                    Some(v) => row.push(v),
                    None => {
                        return Err(Error::NotIntegral {
                            row: i,
                            col: j,
                            value: vector::format_rational(x),
                        })
                    }
                }
            }
            rows.push(row);
        }
        Lattice::new(rows)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn determinant(&self) -> &BigInt {
        &self.det
    }

    /// All diagonal entries even; for an integral Gram matrix this is the
    /// same as every vector having even norm.
    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.is_one()
    }

    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let gy: i64 = row.iter().zip(y).map(|(a, b)| a * b).sum();
            s += x[i] * gy;
        }
        s
    }

    pub fn norm(&self, x: &[i64]) -> i64 {
        self.inner(x, x)
    }

    /// Exact rational bilinear form on dual vectors.
    pub fn inner_rational(&self, x: &DualVector, y: &DualVector) -> BigRational {
        let mut s = BigRational::zero();
        for (i, row) in self.gram.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let mut gy = BigRational::zero();
            for (j, &g) in row.iter().enumerate() {
                if g != 0 && !y[j].is_zero() {
                    gy += &y[j] * BigInt::from(g);
                }
            }
            s += &x[i] * gy;
        }
        s
    }

    pub fn norm_rational(&self, x: &DualVector) -> BigRational {
        self.inner_rational(x, x)
    }

    /// `G·x`; `x` lies in the dual lattice iff this is integral.
    pub fn pairing_vector(&self, x: &DualVector) -> Vec<BigRational> {
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x.coords())
                    .filter(|(&g, _)| g != 0)
                    .map(|(&g, c)| c * BigInt::from(g))
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn contains_dual(&self, x: &DualVector) -> bool {
        x.len() == self.rank() && self.pairing_vector(x).iter().all(|c| c.is_integer())
    }

    /// Gram matrix of the dual lattice in the dual basis: `G⁻¹`.
    pub fn dual_gram(&self) -> Vec<Vec<BigRational>> {
        matrix::inverse(&matrix::to_big(&self.gram)).expect("gram is nonsingular")
    }

    pub fn discriminant(&self) -> &DiscriminantGroup {
        self.discriminant
            .get_or_init(|| DiscriminantGroup::new(&self.gram))
    }

    pub(crate) fn enumerator(&self) -> &Enumerator {
        self.enumerator.get_or_init(|| Enumerator::new(&self.gram))
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let (n, m) = (self.rank(), other.rank());
        let mut g = vec![vec![0i64; n + m]; n + m];
        for i in 0..n {
            g[i][..n].copy_from_slice(&self.gram[i]);
        }
        for i in 0..m {
            g[n + i][n..].copy_from_slice(&other.gram[i]);
        }
        Lattice::new(g).expect("direct sum of lattices is a lattice")
    }

    /// Multiplies the Gram matrix by a positive integer `k`; `k = 2` is the
    /// usual √2-scaling.
    pub fn rescale(&self, k: i64) -> Result<Lattice> {
        if k <= 0 {
            return Err(Error::Input(format!("scale factor {k} must be positive")));
        }
        Lattice::new(
            self.gram
                .iter()
                .map(|r| r.iter().map(|x| x * k).collect())
                .collect(),
        )
    }

    /// Every invariant factor of `L*/L` divides 2, i.e. `2L* ⊆ L`.
    pub fn is_2_elementary(&self) -> bool {
        let two = BigInt::from(2);
        self.discriminant()
            .invariant_factors()
            .iter()
            .all(|d| (&two % d).is_zero())
    }

    /// `L` even and `√2·L*` even: the dual Gram has integral diagonal and
    /// half-integral off-diagonal entries.
    pub fn is_totally_even(&self) -> bool {
        if !self.is_even() {
            return false;
        }
        let d = self.dual_gram();
        let two = BigInt::from(2);
        d.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| {
                if i == j {
                    x.is_integer()
                } else {
                    (x * &two).is_integer()
                }
            })
        })
    }

    /// Sublattice spanned by the rows of `basis` (coordinates in this
    /// lattice's basis), re-presented in an LLL-reduced basis.
    ///
    /// Returns the new lattice and the matrix whose rows are its basis
    /// vectors written in the old coordinates.
    pub fn sublattice(&self, generators: &[Vec<i64>]) -> Result<(Lattice, Vec<Vec<i64>>)> {
        let n = self.rank();
        let h = matrix::hnf(&matrix::to_big(generators));
        if h.len() < n {
            return Err(Error::RankDeficient { rank: h.len(), dim: n });
        }
        let b = matrix::to_i64(&h);
        let g: Vec<Vec<i64>> = b
            .iter()
            .map(|x| b.iter().map(|y| self.inner(x, y)).collect())
            .collect();
        let red = matrix::lll_gram(&g);
        let basis: Vec<Vec<i64>> = red
            .transform
            .iter()
            .map(|t| (0..n).map(|c| (0..n).map(|l| t[l] * b[l][c]).sum()).collect())
            .collect();
        Ok((Lattice::new(red.reduced)?, basis))
    }

    /// Number of norm-2 vectors (roots).
    pub fn root_count(&self) -> usize {
        self.enumerator().count_integral(2)
    }

    /// Compact textual form used by the catalog DSL: `gram(a,b;c,d)`.
    pub fn to_expr(&self) -> String {
        let rows: Vec<String> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!("gram({})", rows.join(";"))
    }

    /// Orders of `L*/L`.
    pub fn discriminant_order(&self) -> BigInt {
        self.det.clone()
    }

    /// Parity of the norm, as a linear functional mod 2 on coordinates.
    pub(crate) fn odd_diagonal(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| self.gram[i][i].is_odd())
            .collect()
    }
}

/// Whether two generator lists span the same Z-module of the ambient
/// rational space. Compared through Hermite normal forms after clearing
/// denominators.
pub fn same_lattice(a: &[DualVector], b: &[DualVector]) -> Result<bool> {
    Ok(span_hnf(a, b)? == span_hnf(b, a)?)
}

fn span_hnf(gens: &[DualVector], other: &[DualVector]) -> Result<matrix::IntMatrix> {
    let dim = gens
        .first()
        .or(other.first())
        .map(|v| v.len())
        .ok_or(Error::RankDeficient { rank: 0, dim: 0 })?;
    if let Some(v) = gens.iter().chain(other).find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch { rank: dim, got: v.len() });
    }
    let denom = gens
        .iter()
        .chain(other)
        .fold(BigInt::one(), |acc, v| acc.lcm(&v.denominator()));
    let rows: Vec<Vec<BigInt>> = gens.iter().map(|v| v.scaled_integers(&denom)).collect();
    let h = matrix::hnf(&rows);
    if h.len() < dim {
        return Err(Error::RankDeficient { rank: h.len(), dim });
    }
    Ok(h)
}
