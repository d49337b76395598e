//! Group-order conclusions for `Aut(V_L^+)` assembled from the orbit data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::construction_b::{FrameDecomposition, RSet};
use crate::error::{Error, Result};
use crate::lattice::isometry::{orthogonal_group_order, DEFAULT_RANK_BOUND};
use crate::lattice::{matrix, Coset, DualVector, Lattice};
use crate::orbit::{analyze_orbit, fusion_space_from, Conditions, FusionSpace, ModuleCounts, OrbitSet};

pub const SCHEMA_VERSION: u32 = 1;

pub const NOTE_H_ORDER: &str =
    "h_order = 2^(n-1)|O(L)| is a derived formula, used only for rootless lattices";
pub const NOTE_TWISTED_COUNT: &str =
    "twisted character count = |(L cap 2L*)/2L| = 2^(n - rank_F2(G mod 2)) is derived";
pub const NOTE_STRUCTURE: &str =
    "group structure matched by lattice invariants; only the order is computed";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest rank for which `|O(L)|` is computed.
    pub rank_bound: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { rank_bound: DEFAULT_RANK_BOUND }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Absence {
    RootsPresent,
    RankBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HOrder {
    Known { o_l: u64, h: u64 },
    Absent(Absence),
}

impl HOrder {
    pub fn value(self) -> Option<u64> {
        match self {
            HOrder::Known { h, .. } => Some(h),
            HOrder::Absent(_) => None,
        }
    }
}

fn require_even(l: &Lattice) -> Result<()> {
    if l.is_even() {
        Ok(())
    } else {
        Err(Error::NotEven)
    }
}

/// `|H_L| = 2^{n-1}|O(L)|` for rootless `L` of rank within the bound.
pub fn h_order(l: &Lattice, cfg: Config) -> Result<HOrder> {
    require_even(l)?;
    if l.root_count() > 0 {
        return Ok(HOrder::Absent(Absence::RootsPresent));
    }
    if l.rank() > cfg.rank_bound {
        return Ok(HOrder::Absent(Absence::RankBound));
    }
    let o_l = orthogonal_group_order(l, cfg.rank_bound)?;
    let h = o_l
        .checked_shl(l.rank() as u32 - 1)
        .filter(|h| h >> (l.rank() - 1) == o_l)
        .ok_or_else(|| Error::Input("group order exceeds 64 bits".into()))?;
    Ok(HOrder::Known { o_l, h })
}

pub fn aut_order(l: &Lattice, cfg: Config) -> Result<Option<u64>> {
    let h = h_order(l, cfg)?;
    match h.value() {
        Some(h) => Ok(Some(h * analyze_orbit(l)?.orbit.size())),
        None => Ok(None),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeSummary {
    pub rank: usize,
    pub determinant: String,
    pub root_count: usize,
    pub even: bool,
    pub unimodular: bool,
    pub two_elementary: bool,
    pub totally_even: bool,
    pub invariant_factors: Vec<String>,
    pub gram: Vec<Vec<i64>>,
}

impl LatticeSummary {
    pub fn of(l: &Lattice) -> Self {
        LatticeSummary {
            rank: l.rank(),
            determinant: l.determinant().to_string(),
            root_count: l.root_count(),
            even: l.is_even(),
            unimodular: l.is_unimodular(),
            two_elementary: l.is_2_elementary(),
            totally_even: l.is_totally_even(),
            invariant_factors: l
                .discriminant()
                .invariant_factors()
                .iter()
                .filter(|d| !d.is_one())
                .map(|d| d.to_string())
                .collect(),
            gram: l.gram().to_vec(),
        }
    }
}

/// Shape of the group for the small rootless cases whose structure is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnownStructure {
    pub case: &'static str,
    pub structure: &'static str,
    pub order: u64,
}

fn norm_count(l: &Lattice, m: i64) -> usize {
    l.enumerator().count_integral(m)
}

/// Recognizes `2A_1`, `√2(A_1⊕A_1)` and `√2A_3` from rank, determinant and
/// the number of vectors of norm 4.
pub fn identify_structure(l: &Lattice) -> Option<KnownStructure> {
    if !l.is_even() || l.root_count() > 0 {
        return None;
    }
    let det = l.determinant().to_u64()?;
    let (case, structure, order) = match (l.rank(), det) {
        (1, 8) => ("2A1", "S_3", 6),
        (2, 16) if norm_count(l, 4) == 4 => ("sqrt2*(A1+A1)", "S_4 x Z_2", 48),
        (3, 32) if norm_count(l, 4) == 12 => ("sqrt2*A3", "(2^2:S_4).S_3", 576),
        _ => return None,
    };
    Some(KnownStructure { case, structure, order })
}

#[derive(Clone, Debug, Serialize)]
pub struct AutReport {
    pub lattice: LatticeSummary,
    pub r_set: RSet,
    pub decompositions: Vec<FrameDecomposition>,
    pub conditions: Conditions,
    pub module_counts: ModuleCounts,
    pub twisted_character_count: u64,
    pub orbit: OrbitSet,
    pub q_size: u64,
    pub index_aut_over_h: u64,
    pub fusion_space: Option<FusionSpace>,
    pub o_l_order: Option<u64>,
    pub h_order: Option<u64>,
    pub h_order_absent: Option<Absence>,
    pub aut_order: Option<u64>,
    pub exceeds_h: bool,
    pub structure: Option<KnownStructure>,
    pub notes: Vec<String>,
}

pub fn analyze(l: &Lattice, cfg: Config) -> Result<AutReport> {
    require_even(l)?;
    let an = analyze_orbit(l)?;
    let q_size = an.orbit.size();
    let expected = 1
        + 2 * an.r_set.len() as u64
        + if an.conditions.any() { an.twisted_character_count } else { 0 };
    if q_size != expected {
        return Err(Error::CrossCheck(format!("q_size {q_size}, formula {expected}")));
    }
    let exceeds_h = q_size > 1;
    if exceeds_h != (!an.r_set.is_empty() || an.conditions.c) {
        return Err(Error::CrossCheck(
            "index exceeds 1 but L is neither Construction B nor E8".into(),
        ));
    }
    let fusion_space = if an.conditions.any() {
        None
    } else {
        Some(fusion_space_from(&an.orbit)?)
    };
    let h = h_order(l, cfg)?;
    let (o_l_order, h_value, h_order_absent) = match h {
        HOrder::Known { o_l, h } => (Some(o_l), Some(h), None),
        HOrder::Absent(a) => (None, None, Some(a)),
    };
    let aut = match h_value {
        Some(h) => Some(
            h.checked_mul(q_size)
                .ok_or_else(|| Error::Input("group order exceeds 64 bits".into()))?,
        ),
        None => None,
    };
    let mut notes = vec![NOTE_TWISTED_COUNT.to_string()];
    if h_value.is_some() {
        notes.push(NOTE_H_ORDER.to_string());
    }
    let structure = identify_structure(l).filter(|s| Some(s.order) == aut);
    if structure.is_some() {
        notes.push(NOTE_STRUCTURE.to_string());
    }
    Ok(AutReport {
        lattice: LatticeSummary::of(l),
        module_counts: crate::orbit::classify_modules(l)?,
        twisted_character_count: an.twisted_character_count,
        r_set: an.r_set,
        decompositions: an.decompositions,
        conditions: an.conditions,
        orbit: an.orbit,
        q_size,
        index_aut_over_h: q_size,
        fusion_space,
        o_l_order,
        h_order: h_value,
        h_order_absent,
        aut_order: aut,
        exceeds_h,
        structure,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularVerdict {
    pub rank: usize,
    pub q_size: u64,
    pub index: u64,
    pub verdict: String,
}

pub fn unimodular_report(l: &Lattice) -> Result<UnimodularVerdict> {
    if !l.is_even() || !l.is_unimodular() {
        return Err(Error::NotUnimodular(format!("determinant {}", l.determinant())));
    }
    let q = analyze_orbit(l)?.orbit;
    let index = q.size();
    let verdict = match index {
        1 => "Aut = H_L, index 1".to_string(),
        2 => "Aut = H_L . Z_2, index 2".to_string(),
        k => format!("Aut contains H_L with index {k}"),
    };
    Ok(UnimodularVerdict {
        rank: l.rank(),
        q_size: index,
        index,
        verdict,
    })
}

/// Result of splitting an odd lattice into `L^0 ∪ L^1`.
#[derive(Clone, Debug, Serialize)]
pub struct OddReport {
    pub lattice: LatticeSummary,
    /// Basis of `L^0` in the coordinates of `L`.
    pub even_basis: Vec<Vec<i64>>,
    pub even_gram: Vec<Vec<i64>>,
    pub index: u64,
    /// Representative of `L^1` in the coordinates of `L`.
    pub alpha: Vec<i64>,
    /// The same vector in the coordinates of `L^0`.
    pub alpha_even_coords: DualVector,
    pub alpha_norm: i64,
    pub two_alpha_in_even: bool,
    pub doubles_in_even: bool,
    pub alpha_coset: Coset,
    /// `[α + L^0]^±` lies in `Q_{L^0}`.
    pub alpha_in_orbit: bool,
    pub even_report: AutReport,
    pub extension: String,
    pub aut_order: Option<u64>,
}

fn coords_in(basis_inv: &[Vec<BigRational>], v: &[i64]) -> DualVector {
    let n = basis_inv.len();
    DualVector::new(
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| &basis_inv[i][j] * BigInt::from(v[i]))
                    .fold(BigRational::from_integer(0.into()), |a, b| a + b)
            })
            .collect(),
    )
}

pub fn odd_split(l: &Lattice, cfg: Config) -> Result<OddReport> {
    if l.is_even() {
        return Err(Error::NotOdd);
    }
    let n = l.rank();
    let odd = l.odd_diagonal();
    let i0 = odd[0];
    let unit = |i: usize, k: i64| -> Vec<i64> {
        let mut v = vec![0; n];
        v[i] += k;
        v
    };
    let mut gens = Vec::with_capacity(n);
    for i in 0..n {
        if i == i0 {
            gens.push(unit(i0, 2));
        } else if odd.contains(&i) {
            let mut v = unit(i, 1);
            v[i0] += 1;
            gens.push(v);
        } else {
            gens.push(unit(i, 1));
        }
    }
    let (even, basis) = l.sublattice(&gens)?;
    if !even.is_even() {
        return Err(Error::CrossCheck("L^0 is not even".into()));
    }
    let ratio = BigRational::new(even.determinant().clone(), l.determinant().clone());
    if ratio != BigRational::from_integer(4.into()) {
        return Err(Error::CrossCheck(format!("index squared of L^0 is {ratio}")));
    }
    let inv = matrix::inverse(&matrix::to_big(&basis))
        .ok_or_else(|| Error::CrossCheck("singular basis for L^0".into()))?;
    let doubles_in_even = (0..n).all(|i| coords_in(&inv, &unit(i, 2)).is_integral());

    let alpha = unit(i0, 1);
    let alpha_even_coords = coords_in(&inv, &alpha);
    let alpha_norm = l.norm(&alpha);
    let two_alpha_in_even = alpha_even_coords.scale_int(2).is_integral();
    if !doubles_in_even || !two_alpha_in_even || alpha_norm % 2 == 0 {
        return Err(Error::CrossCheck("L^0 does not split L as expected".into()));
    }
    let alpha_coset = even.discriminant().coset_of(&alpha_even_coords)?;

    let even_report = analyze(&even, cfg)?;
    let alpha_in_orbit = even_report.r_set.contains(&alpha_coset);
    let aut = match even_report.aut_order {
        Some(a) if alpha_in_orbit => Some(2 * a / even_report.q_size),
        _ => None,
    };
    Ok(OddReport {
        lattice: LatticeSummary::of(l),
        even_basis: basis,
        even_gram: even.gram().to_vec(),
        index: 2,
        alpha,
        alpha_even_coords,
        alpha_norm,
        two_alpha_in_even,
        doubles_in_even,
        alpha_coset,
        alpha_in_orbit,
        even_report,
        extension: "Aut(V_L^+) = <tau>.Aut(V_{L0}^+; V_{L1}^+)".into(),
        aut_order: aut,
    })
}
