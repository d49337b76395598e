//! Construction B in both directions.
//!
//! Forward: a doubly even code `C` of length `n` gives the lattice generated
//! by `α_c/2` (`c ∈ C`) and `α_i + α_j` over an orthogonal frame with
//! `⟨α_i, α_j⟩ = 2δ_ij`. Backward: an even lattice is of this form iff some
//! order-2 coset `λ + L` carries at least `2n + |L_2|` norm-2 vectors; such a
//! coset yields an orthogonal frame, the code, and a sign pattern that
//! rebuild the lattice exactly.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{BinaryCode, Word};
use crate::error::{Error, Result};
use crate::lattice::enumerate::{norm_value, vectors_of_norm};
use crate::lattice::matrix::{self, lll_gram};
use crate::lattice::{same_lattice, Coset, DualVector, Lattice};

/// Output of [`build_construction_b`].
#[derive(Clone, Debug)]
pub struct Built {
    pub lattice: Lattice,
    /// The frame vectors `α_i` (signs applied), in the lattice basis.
    pub frame: Vec<DualVector>,
}

fn check_signs(n: usize, signs: Option<&[i8]>) -> Result<Vec<i8>> {
    match signs {
        None => Ok(vec![1; n]),
        Some(s) if s.len() != n => Err(Error::SignLength { expected: n, got: s.len() }),
        Some(s) if s.iter().any(|&x| x != 1 && x != -1) => {
            Err(Error::Input("signs must be +1 or -1".into()))
        }
        Some(s) => Ok(s.to_vec()),
    }
}

/// Builds `L_B(C)` with frame signs `s_i` (default all `+1`).
///
/// Generators are doubled so that everything stays integral, reduced to a
/// basis by HNF and then LLL-reduced for a compact Gram matrix.
pub fn build_construction_b(code: &BinaryCode, signs: Option<&[i8]>) -> Result<Built> {
    if !code.is_doubly_even() {
        return Err(Error::NotDoublyEven);
    }
    let n = code.length();
    let s = check_signs(n, signs)?;
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for &c in code.basis() {
        gens.push(
            (0..n)
                .map(|i| BigInt::from(if c >> i & 1 == 1 { s[i] as i64 } else { 0 }))
                .collect(),
        );
    }
    for i in 0..n {
        for j in i..n {
            let mut v = vec![BigInt::zero(); n];
            v[i] += 2 * s[i] as i64;
            v[j] += 2 * s[j] as i64;
            gens.push(v);
        }
    }
    let h = matrix::to_i64(&matrix::hnf(&gens));
    // Frame vectors have norm 2, so doubled coordinates pair to 2·(x·y)/4.
    let gram: Vec<Vec<i64>> = h
        .iter()
        .map(|x| {
            h.iter()
                .map(|y| {
                    let d: i64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                    debug_assert_eq!(d % 2, 0);
                    d / 2
                })
                .collect()
        })
        .collect();
    let red = lll_gram(&gram);
    let basis: Vec<Vec<BigInt>> = red
        .transform
        .iter()
        .map(|t| {
            (0..n)
                .map(|c| BigInt::from((0..n).map(|l| t[l] * h[l][c]).sum::<i64>()))
                .collect()
        })
        .collect();
    let inv = matrix::inverse(&basis).expect("full rank");
    let frame = (0..n)
        .map(|i| {
            // doubled coordinates of α_i are 2·s_i·e_i
            let k = BigRational::from_integer(BigInt::from(2 * s[i] as i64));
            DualVector::new((0..n).map(|c| &inv[i][c] * &k).collect())
        })
        .collect();
    Ok(Built {
        lattice: Lattice::new(red.reduced)?,
        frame,
    })
}

/// `R_L`: order-2 cosets whose norm-2 count reaches `2n + |L_2|`.
#[derive(Clone, Debug, Serialize)]
pub struct RSet {
    pub cosets: Vec<Coset>,
    pub counts: Vec<usize>,
    pub bound: usize,
    pub root_count: usize,
    /// `(c)_2` for each member, kept for frame extraction.
    #[serde(skip)]
    pub(crate) vectors: Vec<Vec<DualVector>>,
}

impl RSet {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn contains(&self, c: &Coset) -> bool {
        self.cosets.binary_search(c).is_ok()
    }

    /// Every listed count must equal the bound exactly.
    pub fn validate(&self) -> Result<()> {
        for &count in &self.counts {
            if count != self.bound {
                return Err(Error::EqualityViolated { count, bound: self.bound });
            }
        }
        Ok(())
    }
}

fn require_even(l: &Lattice) -> Result<()> {
    if l.is_even() {
        Ok(())
    } else {
        Err(Error::NotEven)
    }
}

/// Norm-2 counts for every order-≤2 coset, in `torsion2_reps` order.
///
/// One enumeration over `L* ∩ L/2` (the union of those cosets) followed by
/// bucketing by coset.
pub fn torsion2_norm2_counts(l: &Lattice) -> Result<Vec<(Coset, usize)>> {
    Ok(torsion2_norm2_vectors(l)?
        .into_iter()
        .map(|(c, vs)| (c, vs.len()))
        .collect())
}

/// The norm-2 vectors themselves, sorted within each coset.
pub fn torsion2_norm2_vectors(l: &Lattice) -> Result<Vec<(Coset, Vec<DualVector>)>> {
    let disc = l.discriminant();
    let n = l.rank();
    // Doubled generators of T = L* ∩ L/2: 2·e_i and 2·λ for the order-2
    // generators λ; all integral.
    let mut gens: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(2 * (i == j) as i64)).collect())
        .collect();
    let two = BigInt::from(2);
    for (i, d) in disc.invariant_factors().iter().enumerate() {
        if (d % &two).is_zero() {
            let mut z = vec![BigInt::zero(); n];
            z[i] = d / &two;
            let c = disc.from_element(z);
            gens.push(c.rep().scaled_integers(&two));
        }
    }
    let h = matrix::to_i64(&matrix::hnf(&gens));
    // Gram of T scaled by 2: (h_a/2)ᵀG(h_b/2)·2 = h_aᵀGh_b/2.
    let gram: Vec<Vec<i64>> = h
        .iter()
        .map(|x| {
            h.iter()
                .map(|y| {
                    let d = l.inner(x, y);
                    debug_assert_eq!(d % 2, 0);
                    d / 2
                })
                .collect()
        })
        .collect();
    let en = crate::lattice::Enumerator::new(&gram);
    let mut buckets: HashMap<Vec<BigInt>, Vec<DualVector>> = HashMap::new();
    for w in en.integral_vectors(4) {
        let x: Vec<i128> = (0..n)
            .map(|c| (0..n).map(|r| w[r] as i128 * h[r][c] as i128).sum())
            .collect();
        let v = DualVector::from_scaled(&x, 2);
        buckets.entry(disc.element_of(&v)?).or_default().push(v);
    }
    Ok(disc
        .torsion2_reps()
        .iter()
        .map(|c| {
            let mut vs = buckets.remove(c.element()).unwrap_or_default();
            vs.sort();
            (c.clone(), vs)
        })
        .collect())
}

/// Computes `R_L`, asserting that every member meets the bound with
/// equality.
pub fn compute_r(l: &Lattice) -> Result<RSet> {
    require_even(l)?;
    let root_count = l.root_count();
    let bound = 2 * l.rank() + root_count;
    let buckets = torsion2_norm2_vectors(l)?;
    let (trivial, roots) = &buckets[0];
    let t_count = roots.len();
    if !trivial.is_trivial() || t_count != root_count {
        return Err(Error::CrossCheck(format!(
            "trivial coset holds {t_count} norm-2 vectors, lattice has {root_count} roots"
        )));
    }
    let mut set = RSet {
        cosets: Vec::new(),
        counts: Vec::new(),
        bound,
        root_count,
        vectors: Vec::new(),
    };
    for (c, vs) in buckets {
        if vs.len() >= bound {
            set.cosets.push(c);
            set.counts.push(vs.len());
            set.vectors.push(vs);
        }
    }
    set.validate()?;
    Ok(set)
}

/// `L` is a Construction-B lattice iff `R_L` is nonempty. A positive answer is re-verified
/// by decomposing the lattice.
pub fn is_construction_b(l: &Lattice) -> Result<bool> {
    let r = compute_r(l)?;
    match r.cosets.first() {
        None => Ok(false),
        Some(c) => {
            decompose(l, c)?;
            Ok(true)
        }
    }
}

fn coset_norm2(l: &Lattice, c: &Coset) -> Result<Vec<DualVector>> {
    vectors_of_norm(l, c, &norm_value(2))
}

/// Greedy orthogonal frame inside `(c)_2`: at each step the
/// lexicographically smallest norm-2 vector of the coset orthogonal to all
/// previous picks.
pub fn extract_frame(l: &Lattice, c: &Coset) -> Result<Vec<DualVector>> {
    require_even(l)?;
    frame_from(l, c, &coset_norm2(l, c)?)
}

fn frame_from(l: &Lattice, c: &Coset, vectors: &[DualVector]) -> Result<Vec<DualVector>> {
    let n = l.rank();
    let bound = 2 * n + l.root_count();
    if !c.order2() || vectors.len() < bound {
        return Err(Error::CosetNotInR);
    }
    if vectors.len() > bound {
        return Err(Error::EqualityViolated { count: vectors.len(), bound });
    }
    // 2v ∈ L for every v in an order-2 coset, so orthogonality is an
    // integer test on doubled coordinates.
    let two = BigInt::from(2);
    let doubled: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| {
            v.scaled_integers(&two)
                .iter()
                .map(|x| x.to_i128().expect("small coordinate"))
                .collect()
        })
        .collect();
    let gram = l.gram();
    let paired: Vec<Vec<i128>> = doubled
        .iter()
        .map(|u| {
            gram.iter()
                .map(|row| row.iter().zip(u).map(|(&g, &x)| g as i128 * x).sum())
                .collect()
        })
        .collect();
    let mut picked: Vec<usize> = Vec::with_capacity(n);
    while picked.len() < n {
        let next = (0..vectors.len()).find(|&a| {
            picked.iter().all(|&b| {
                doubled[a].iter().zip(&paired[b]).map(|(x, y)| x * y).sum::<i128>() == 0
            })
        });
        match next {
            Some(a) => picked.push(a),
            None => return Err(Error::Incomplete { found: picked.len(), rank: n }),
        }
    }
    Ok(picked.into_iter().map(|a| vectors[a].clone()).collect())
}

/// A Construction-B witness for `L`.
#[derive(Clone, Debug, Serialize)]
pub struct FrameDecomposition {
    pub coset: Coset,
    /// Frame vectors as extracted, before signs.
    pub frame: Vec<DualVector>,
    #[serde(serialize_with = "serialize_code")]
    pub code: BinaryCode,
    pub signs: Vec<i8>,
}

fn serialize_code<S: serde::Serializer>(c: &BinaryCode, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct CodeOut {
        length: usize,
        dimension: usize,
        generators: Vec<String>,
    }
    CodeOut {
        length: c.length(),
        dimension: c.dimension(),
        generators: c.basis_strings(),
    }
    .serialize(s)
}

impl FrameDecomposition {
    pub fn signed_frame(&self) -> Vec<DualVector> {
        self.frame
            .iter()
            .zip(&self.signs)
            .map(|(f, &s)| f.scale_int(s as i64))
            .collect()
    }

    /// Generators of `L_B(C)` for this code and signed frame: half-sums of
    /// the basis codewords and the pair sums `α_i + α_j`, in the lattice
    /// basis.
    pub fn rebuild_generators(&self) -> Vec<DualVector> {
        rebuild_generators(&self.code, &self.signed_frame())
    }
}

fn half_sum(frame: &[DualVector], word: Word) -> DualVector {
    let n = frame[0].len();
    let mut acc = DualVector::zero(n);
    for (i, f) in frame.iter().enumerate() {
        if word >> i & 1 == 1 {
            acc = &acc + f;
        }
    }
    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
}

fn rebuild_generators(code: &BinaryCode, frame: &[DualVector]) -> Vec<DualVector> {
    let n = frame.len();
    let mut gens: Vec<DualVector> = code.basis().iter().map(|&c| half_sum(frame, c)).collect();
    // α_i + α_j = (α_0 + α_i) + (α_0 + α_j) - 2α_0, so these span all pair sums.
    gens.push(frame[0].scale_int(2));
    for f in &frame[1..n] {
        gens.push(&frame[0] + f);
    }
    gens
}

/// Recovers the code from a frame and searches sign patterns until the
/// rebuilt lattice equals `L`.
///
/// Sign patterns are visited in lexicographic order (`+1` before `-1`);
/// a branch is cut as soon as some basis codeword supported on decided
/// coordinates gives a half-sum outside `L`.
pub fn extract_code(l: &Lattice, frame: &[DualVector], c: &Coset) -> Result<FrameDecomposition> {
    let n = l.rank();
    if frame.len() != n {
        return Err(Error::Incomplete { found: frame.len(), rank: n });
    }
    let mut gens: Vec<DualVector> = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            DualVector::from_ints(&e)
        })
        .collect();
    gens.push(c.rep().clone());
    let mut words = Vec::with_capacity(gens.len());
    for g in &gens {
        let mut w: Word = 0;
        for (i, f) in frame.iter().enumerate() {
            let p = l.inner_rational(g, f);
            if !p.is_integer() {
                return Err(Error::CrossCheck("frame pairing is not integral".into()));
            }
            if p.to_integer().bit(0) {
                w |= 1 << i;
            }
        }
        words.push(w);
    }
    let code = BinaryCode::new(n, &words)?;
    if !code.is_doubly_even() {
        return Err(Error::CrossCheck("recovered code is not doubly even".into()));
    }
    let by_top: Vec<Vec<Word>> = (0..n)
        .map(|i| {
            code.basis()
                .iter()
                .copied()
                .filter(|&w| 63 - w.leading_zeros() as usize == i)
                .collect()
        })
        .collect();
    let identity: Vec<DualVector> = gens[..n].to_vec();
    let mut signs = vec![1i8; n];
    let mut signed: Vec<DualVector> = frame.to_vec();
    if search_signs(0, frame, &by_top, &mut signs, &mut signed, &code, &identity)? {
        Ok(FrameDecomposition {
            coset: c.clone(),
            frame: frame.to_vec(),
            code,
            signs,
        })
    } else {
        Err(Error::NoSignPattern)
    }
}

fn search_signs(
    i: usize,
    frame: &[DualVector],
    by_top: &[Vec<Word>],
    signs: &mut [i8],
    signed: &mut [DualVector],
    code: &BinaryCode,
    identity: &[DualVector],
) -> Result<bool> {
    let n = frame.len();
    if i == n {
        return same_lattice(&rebuild_generators(code, signed), identity);
    }
    for s in [1i8, -1] {
        signs[i] = s;
        signed[i] = frame[i].scale_int(s as i64);
        if by_top[i].iter().all(|&w| half_sum(signed, w).is_integral())
            && search_signs(i + 1, frame, by_top, signs, signed, code, identity)?
        {
            return Ok(true);
        }
    }
    signs[i] = 1;
    signed[i] = frame[i].clone();
    Ok(false)
}

/// `extract_frame` followed by `extract_code`.
pub fn decompose(l: &Lattice, c: &Coset) -> Result<FrameDecomposition> {
    let frame = extract_frame(l, c)?;
    extract_code(l, &frame, c)
}

/// One decomposition per coset of `R_L`, in the order of `r.cosets`.
pub fn decompose_all(l: &Lattice, r: &RSet) -> Result<Vec<FrameDecomposition>> {
    require_even(l)?;
    if r.vectors.len() != r.cosets.len() {
        return r.cosets.par_iter().map(|c| decompose(l, c)).collect();
    }
    r.cosets
        .par_iter()
        .zip(&r.vectors)
        .map(|(c, vs)| extract_code(l, &frame_from(l, c, vs)?, c))
        .collect()
}

/// The cosets of `β = Σ s_i e_i / 4` and `γ = β − s_1 e_1`, each present
/// only when it lies in `L* ∩ L/2`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct StructuralCosets {
    pub beta: Option<Coset>,
    pub gamma: Option<Coset>,
}

pub fn structural_cosets(l: &Lattice, d: &FrameDecomposition) -> Result<StructuralCosets> {
    let signed = d.signed_frame();
    let n = l.rank();
    let mut sum = DualVector::zero(n);
    for f in &signed {
        sum = &sum + f;
    }
    let beta = sum.scale(&BigRational::new(BigInt::one(), BigInt::from(4)));
    let gamma = &beta - &signed[0];
    let as_coset = |v: &DualVector| -> Result<Option<Coset>> {
        if l.contains_dual(v) && v.scale_int(2).is_integral() {
            Ok(Some(l.discriminant().coset_of(v)?))
        } else {
            Ok(None)
        }
    };
    Ok(StructuralCosets {
        beta: as_coset(&beta)?,
        gamma: as_coset(&gamma)?,
    })
}

/// `|(c)_2|` for a coset.
pub fn norm2_count(l: &Lattice, c: &Coset) -> Result<usize> {
    Ok(coset_norm2(l, c)?.len())
}
