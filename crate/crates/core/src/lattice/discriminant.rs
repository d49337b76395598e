//! The discriminant group `L*/L` through the Smith normal form of the Gram
//! matrix.
//!
//! With `U·G·V = diag(d_1, …, d_n)`, a dual vector `x` maps to the group
//! element `z = U·G·x mod d`. The element `z` is represented by
//! `V·(z_1/d_1, …, z_n/d_n)` reduced modulo `Zⁿ = L`, so every coordinate of
//! the canonical representative lies in `[0, 1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::{self, IntMatrix};
use super::DualVector;
use crate::error::{Error, Result};

/// An element `λ + L` of `L*/L`, identified by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    rep: DualVector,
    order2: bool,
    element: Vec<BigInt>,
}

impl Coset {
    pub fn rep(&self) -> &DualVector {
        &self.rep
    }

    /// `2λ ∈ L`.
    pub fn order2(&self) -> bool {
        self.order2
    }

    pub fn is_trivial(&self) -> bool {
        self.element.iter().all(|z| z.is_zero())
    }

    /// Coordinates in `⊕ Z/d_i`.
    pub fn element(&self) -> &[BigInt] {
        &self.element
    }
}

impl serde::Serialize for Coset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rep.serialize(s)
    }
}

#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    invariant_factors: Vec<BigInt>,
    torsion2: Vec<Coset>,
    gram: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl DiscriminantGroup {
    pub fn new(gram: &[Vec<i64>]) -> Self {
        let g = matrix::to_big(gram);
        let s = matrix::snf(&g);
        let mut group = DiscriminantGroup {
            invariant_factors: s.diag,
            torsion2: Vec::new(),
            gram: g,
            u: s.u,
            v: s.v,
        };
        group.torsion2 = group.enumerate_torsion2();
        group
    }

    /// `d_1 | d_2 | … | d_n`, including the unit factors.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// All cosets `λ + L` with `2λ ∈ L`, trivial coset first, then in
    /// canonical order.
    pub fn torsion2_reps(&self) -> &[Coset] {
        &self.torsion2
    }

    pub fn trivial(&self) -> Coset {
        self.from_element(vec![BigInt::zero(); self.invariant_factors.len()])
    }

    fn enumerate_torsion2(&self) -> Vec<Coset> {
        let two = BigInt::from(2);
        let even: Vec<usize> = (0..self.invariant_factors.len())
            .filter(|&i| self.invariant_factors[i].is_even())
            .collect();
        let mut out = Vec::with_capacity(1 << even.len());
        for mask in 0u64..(1u64 << even.len()) {
            let mut z = vec![BigInt::zero(); self.invariant_factors.len()];
            for (bit, &i) in even.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    z[i] = &self.invariant_factors[i] / &two;
                }
            }
            out.push(self.from_element(z));
        }
        out.sort_by(|a, b| b.is_trivial().cmp(&a.is_trivial()).then(a.cmp(b)));
        out
    }

    /// Builds the coset of a group element, reducing coordinates mod `d_i`.
    pub fn from_element(&self, z: Vec<BigInt>) -> Coset {
        let z: Vec<BigInt> = z
            .into_iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        let n = z.len();
        let t: Vec<BigRational> = z
            .iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| BigRational::new(x.clone(), d.clone()))
            .collect();
        let rep: Vec<BigRational> = (0..n)
            .map(|i| {
                let x = (0..n)
                    .filter(|&j| !t[j].is_zero())
                    .map(|j| &t[j] * &self.v[i][j])
                    .fold(BigRational::zero(), |a, b| a + b);
                &x - x.floor()
            })
            .collect();
        let order2 = z
            .iter()
            .zip(&self.invariant_factors)
            .all(|(x, d)| (x * 2u32).mod_floor(d).is_zero());
        Coset {
            rep: DualVector::new(rep),
            order2,
            element: z,
        }
    }

    /// Group element `U·G·x mod d` of a dual vector.
    pub fn element_of(&self, x: &DualVector) -> Result<Vec<BigInt>> {
        let n = self.invariant_factors.len();
        if x.len() != n {
            return Err(Error::DimensionMismatch { rank: n, got: x.len() });
        }
        let mut y = Vec::with_capacity(n);
        for row in &self.gram {
            let s = row
                .iter()
                .zip(x.coords())
                .filter(|(g, _)| !g.is_zero())
                .map(|(g, c)| c * g)
                .fold(BigRational::zero(), |a, b| a + b);
            if !s.is_integer() {
                return Err(Error::NotInDual);
            }
            y.push(s.to_integer());
        }
        Ok((0..n)
            .map(|i| {
                let s: BigInt = (0..n).map(|j| &self.u[i][j] * &y[j]).sum();
                s.mod_floor(&self.invariant_factors[i])
            })
            .collect())
    }

    /// The canonical coset `x + L` of a dual vector.
    pub fn coset_of(&self, x: &DualVector) -> Result<Coset> {
        Ok(self.from_element(self.element_of(x)?))
    }

    /// Number of order-≤2 elements, `Π gcd(d_i, 2)`.
    pub fn torsion2_count(&self) -> u64 {
        1u64 << self
            .invariant_factors
            .iter()
            .filter(|d| d.is_even())
            .count()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn is_trivial_group(&self) -> bool {
        self.invariant_factors.iter().all(|d| d.is_one())
    }
}
