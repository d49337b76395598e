//! Module-class bookkeeping for `V_L^+` and the orbit `Q_L` of `[0]^-`.
//!
//! Classes are never constructed; only their labels and counts matter. The
//! orbit is read off from `R_L` and the three twisted conditions:
//!
//! * (a) rank 8 and Construction B from a code containing the all-one word,
//! * (b) rank 16 and Construction B from a code containing a copy of `RM(1,4)`,
//! * (c) `L ≅ E_8`, decided as rank 8, even, determinant 1.

use std::fmt;

use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::code::has_rm14_subcode;
use crate::construction_b::{
    compute_r, decompose_all, structural_cosets, FrameDecomposition, RSet,
};
use crate::error::{Error, Result};
use crate::lattice::matrix::rank_mod2;
use crate::lattice::{Coset, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An isomorphism class of irreducible `V_L^+`-modules, or a block of
/// twisted classes of one sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleClass {
    /// `[μ]` for `2μ ∉ L`, stored once per pair `±μ`.
    UntwistedPlain { coset: Coset },
    /// `[λ]^±` for `2λ ∈ L`.
    UntwistedSigned { coset: Coset, sign: Sign },
    /// `count` classes `[χ]^sign`, one per central character.
    Twisted { sign: Sign, count: u64 },
}

impl fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleClass::UntwistedPlain { coset } => write!(f, "[{}]", coset.rep()),
            ModuleClass::UntwistedSigned { coset, sign } => {
                if coset.is_trivial() {
                    write!(f, "[0]^{sign}")
                } else {
                    write!(f, "[{}]^{sign}", coset.rep())
                }
            }
            ModuleClass::Twisted { sign, count } => write!(f, "{count} x [chi]^{sign}"),
        }
    }
}

/// Counts of irreducible module classes by type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleCounts {
    pub untwisted_signed: u64,
    pub untwisted_plain: u64,
    pub twisted: u64,
}

impl ModuleCounts {
    pub fn total(&self) -> u64 {
        self.untwisted_signed + self.untwisted_plain + self.twisted
    }
}

fn require_even(l: &Lattice) -> Result<()> {
    if l.is_even() {
        Ok(())
    } else {
        Err(Error::NotEven)
    }
}

/// Number of central characters per sign, `|(L ∩ 2L*)/2L|`.
///
/// `L ∩ 2L*` is the set of `x` with `G·x ≡ 0 (mod 2)`, so the quotient by
/// `2L` is the kernel of the Gram matrix over `F_2`.
pub fn twisted_character_count(l: &Lattice) -> Result<u64> {
    require_even(l)?;
    let rows: Vec<u64> = l
        .gram()
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, &g)| g.rem_euclid(2) == 1)
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    Ok(1u64 << (l.rank() - rank_mod2(&rows)))
}

pub fn classify_modules(l: &Lattice) -> Result<ModuleCounts> {
    require_even(l)?;
    let disc = l.discriminant();
    let order = disc
        .order()
        .to_u64()
        .ok_or_else(|| Error::Input("discriminant group too large".into()))?;
    let t2 = disc.torsion2_count();
    Ok(ModuleCounts {
        untwisted_signed: 2 * t2,
        untwisted_plain: (order - t2) / 2,
        twisted: 2 * twisted_character_count(l)?,
    })
}

/// Evidence that a twisted condition holds.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionWitness {
    /// Index into the decomposition list (and into `R_L`).
    pub decomposition: usize,
    /// The `γ` coset for (a), the `β` coset for (b).
    pub structural_coset: Coset,
    /// Basis of an `RM(1,4)` copy inside the code, for (b).
    pub rm14_basis: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Conditions {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub witness_a: Option<ConditionWitness>,
    pub witness_b: Option<ConditionWitness>,
    /// `L` is 2-elementary and totally even, necessary for (a) and (b).
    pub two_elementary_totally_even: bool,
}

impl Conditions {
    pub fn any(&self) -> bool {
        self.a || self.b || self.c
    }
}

/// `L` is isomorphic to `E_8`: the only even unimodular lattice of rank 8.
pub fn condition_c(l: &Lattice) -> Result<bool> {
    require_even(l)?;
    Ok(l.rank() == 8 && l.determinant().is_one())
}

/// Decides (a), (b), (c) from precomputed decompositions, one per coset of
/// `R_L`. Each decomposition is checked against its structural cosets:
/// the code contains the all-one word at rank 8 iff `γ + L ∈ R_L`, and it
/// contains `RM(1,4)` at rank 16 iff `β + L ∈ R_L`.
pub fn evaluate_conditions(
    l: &Lattice,
    r: &RSet,
    decompositions: &[FrameDecomposition],
) -> Result<Conditions> {
    require_even(l)?;
    let n = l.rank();
    let mut witness_a = None;
    let mut witness_b = None;
    for (idx, d) in decompositions.iter().enumerate() {
        let s = structural_cosets(l, d)?;
        let gamma_in_r = s.gamma.as_ref().is_some_and(|g| r.contains(g));
        let beta_in_r = s.beta.as_ref().is_some_and(|b| r.contains(b));

        let by_code_a = n == 8 && d.code.contains_all_one();
        if by_code_a != gamma_in_r {
            return Err(Error::CrossCheck(format!(
                "decomposition {idx}: all-one test {by_code_a}, gamma test {gamma_in_r}"
            )));
        }
        if by_code_a && witness_a.is_none() {
            witness_a = Some(ConditionWitness {
                decomposition: idx,
                structural_coset: s.gamma.clone().expect("gamma in R"),
                rm14_basis: None,
            });
        }

        let rm = if n == 16 { has_rm14_subcode(&d.code)? } else { None };
        if rm.is_some() != beta_in_r {
            return Err(Error::CrossCheck(format!(
                "decomposition {idx}: RM(1,4) test {}, beta test {beta_in_r}",
                rm.is_some()
            )));
        }
        if let (Some(rm), None) = (rm, &witness_b) {
            witness_b = Some(ConditionWitness {
                decomposition: idx,
                structural_coset: s.beta.clone().expect("beta in R"),
                rm14_basis: Some(rm.basis_strings()),
            });
        }
    }
    let intrinsic = l.is_2_elementary() && l.is_totally_even();
    let (a, b) = (witness_a.is_some(), witness_b.is_some());
    if (a || b) && !intrinsic {
        return Err(Error::CrossCheck(
            "twisted condition holds but L is not 2-elementary totally even".into(),
        ));
    }
    Ok(Conditions {
        a,
        b,
        c: condition_c(l)?,
        witness_a,
        witness_b,
        two_elementary_totally_even: intrinsic,
    })
}

/// Everything the orbit depends on, computed once.
#[derive(Clone, Debug)]
pub struct OrbitAnalysis {
    pub r_set: RSet,
    pub decompositions: Vec<FrameDecomposition>,
    pub conditions: Conditions,
    pub twisted_character_count: u64,
    pub orbit: OrbitSet,
}

pub fn analyze_orbit(l: &Lattice) -> Result<OrbitAnalysis> {
    require_even(l)?;
    let r = compute_r(l)?;
    let decompositions = decompose_all(l, &r)?;
    let conditions = evaluate_conditions(l, &r, &decompositions)?;
    let tcc = twisted_character_count(l)?;
    let orbit = OrbitSet::new(l, r.clone(), &conditions, tcc)?;
    Ok(OrbitAnalysis {
        r_set: r,
        decompositions,
        conditions,
        twisted_character_count: tcc,
        orbit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionFlags {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

/// The orbit `Q_L` of `[0]^-`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitSet {
    pub classes: Vec<ModuleClass>,
    pub r_set: RSet,
    pub twisted_sign: Option<Sign>,
    pub twisted_count: Option<u64>,
    pub conditions: ConditionFlags,
}

impl OrbitSet {
    fn new(l: &Lattice, r: RSet, cond: &Conditions, tcc: u64) -> Result<Self> {
        let twisted_sign = if cond.a || cond.c {
            Some(Sign::Minus)
        } else if cond.b {
            Some(Sign::Plus)
        } else {
            None
        };
        if twisted_sign.is_some() && !matches!(l.rank(), 8 | 16) {
            return Err(Error::CrossCheck("twisted classes outside ranks 8 and 16".into()));
        }
        let mut classes = vec![ModuleClass::UntwistedSigned {
            coset: l.discriminant().trivial(),
            sign: Sign::Minus,
        }];
        for c in &r.cosets {
            for sign in [Sign::Plus, Sign::Minus] {
                classes.push(ModuleClass::UntwistedSigned { coset: c.clone(), sign });
            }
        }
        if let Some(sign) = twisted_sign {
            classes.push(ModuleClass::Twisted { sign, count: tcc });
        }
        Ok(OrbitSet {
            classes,
            r_set: r,
            twisted_sign,
            twisted_count: twisted_sign.map(|_| tcc),
            conditions: ConditionFlags {
                a: cond.a,
                b: cond.b,
                c: cond.c,
            },
        })
    }

    /// `|Q_L| = 1 + 2|R_L| + (twisted count if present)`.
    pub fn size(&self) -> u64 {
        1 + 2 * self.r_set.len() as u64 + self.twisted_count.unwrap_or(0)
    }
}

pub fn orbit_q(l: &Lattice) -> Result<OrbitSet> {
    Ok(analyze_orbit(l)?.orbit)
}

pub fn condition_a(l: &Lattice) -> Result<Option<ConditionWitness>> {
    Ok(analyze_orbit(l)?.conditions.witness_a)
}

pub fn condition_b(l: &Lattice) -> Result<Option<ConditionWitness>> {
    Ok(analyze_orbit(l)?.conditions.witness_b)
}

/// `P_L = {[0]^+} ∪ Q_L` as an elementary abelian 2-group, in the case where
/// none of (a), (b), (c) holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionSpace {
    pub size: u64,
    pub dimension: u32,
    /// `|GL(dimension, F_2)|`.
    pub gl_order: u128,
}

pub fn gl2_order(dim: u32) -> u128 {
    let q = 1u128 << dim;
    (0..dim).map(|i| q - (1u128 << i)).product()
}

pub fn fusion_space_from(orbit: &OrbitSet) -> Result<FusionSpace> {
    let c = orbit.conditions;
    if c.a || c.b || c.c {
        return Err(Error::ConditionAbc);
    }
    let size = 2 + 2 * orbit.r_set.len() as u64;
    if !size.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(size));
    }
    let dimension = size.trailing_zeros();
    Ok(FusionSpace {
        size,
        dimension,
        gl_order: gl2_order(dimension),
    })
}

pub fn fusion_space(l: &Lattice) -> Result<FusionSpace> {
    fusion_space_from(&orbit_q(l)?)
}
