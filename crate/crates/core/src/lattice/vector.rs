use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// A vector of the rational span, in lattice-basis coordinates.
///
/// Ordering is lexicographic on coordinates, which is the canonical output
/// order of every enumeration.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DualVector(Vec<BigRational>);

/// `p/q` with `q > 0` and `gcd(p, q) = 1`; integers render as `p/1`.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl DualVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        DualVector(coords)
    }

    pub fn zero(n: usize) -> Self {
        DualVector(vec![BigRational::zero(); n])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DualVector(
            coords
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    /// `coords / denom`.
    pub fn from_scaled(coords: &[i128], denom: i128) -> Self {
        let d = BigInt::from(denom);
        DualVector(
            coords
                .iter()
                .map(|&x| BigRational::new(BigInt::from(x), d.clone()))
                .collect(),
        )
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// All coordinates integral, i.e. the vector lies in the lattice itself.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn to_integral(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        DualVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Integer numerators after multiplying by `denominator()`.
    pub fn scaled_integers(&self, denom: &BigInt) -> Vec<BigInt> {
        self.0
            .iter()
            .map(|x| (x * BigRational::from_integer(denom.clone())).to_integer())
            .collect()
    }

    pub fn abs_max(&self) -> BigRational {
        self.0
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl Index<usize> for DualVector {
    type Output = BigRational;
    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl Add for &DualVector {
    type Output = DualVector;
    fn add(self, rhs: &DualVector) -> DualVector {
        DualVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DualVector {
    type Output = DualVector;
    fn sub(self, rhs: &DualVector) -> DualVector {
        DualVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DualVector {
    type Output = DualVector;
    fn neg(self) -> DualVector {
        DualVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for DualVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        parts.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let x = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&x), "-3/2");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5/1");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn lexicographic_order() {
        let a = DualVector::from_ints(&[-1, 5]);
        let b = DualVector::from_ints(&[0, -7]);
        assert!(a < b);
        let h = DualVector::from_scaled(&[1, 1], 2);
        assert_eq!(h.denominator(), BigInt::from(2));
        assert!(!h.is_integral());
        assert!((&h + &h).is_integral());
    }
}
