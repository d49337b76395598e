//! Binary linear codes with bit-packed codewords.
//!
//! Coordinate `i` (1-based, leftmost in text form) is bit `i-1` of a `u64`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Enumeration of all codewords is refused above this dimension.
pub const MAX_ENUM_DIM: usize = 20;

pub type Word = u64;

/// A binary linear code, stored by its reduced row-echelon basis.
///
/// Pivots are the lowest coordinates; rows are sorted by pivot and each
/// pivot column is cleared in every other row, so equal codes have equal
/// bases.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    length: usize,
    basis: Vec<Word>,
}

pub fn weight(w: Word) -> u32 {
    w.count_ones()
}

pub fn parse_word(s: &str) -> Result<(usize, Word)> {
    let mut w = 0;
    let s = s.trim();
    if s.len() > 64 {
        return Err(Error::BadCodeLength(s.len()));
    }
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => w |= 1 << i,
            _ => return Err(Error::Input(format!("invalid codeword character `{ch}` in `{s}`"))),
        }
    }
    Ok((s.len(), w))
}

pub fn format_word(length: usize, w: Word) -> String {
    (0..length)
        .map(|i| if w >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn full_mask(length: usize) -> Word {
    if length == 64 {
        u64::MAX
    } else {
        (1u64 << length) - 1
    }
}

/// Sort key realizing lexicographic order of the text form.
fn text_order_key(length: usize, w: Word) -> Word {
    w.reverse_bits() >> (64 - length)
}

impl BinaryCode {
    /// The code spanned by `generators`.
    pub fn new(length: usize, generators: &[Word]) -> Result<Self> {
        if length == 0 || length > 64 {
            return Err(Error::BadCodeLength(length));
        }
        if let Some(&g) = generators.iter().find(|&&g| g & !full_mask(length) != 0) {
            return Err(Error::LengthMismatch {
                expected: length,
                got: 64 - g.leading_zeros() as usize,
            });
        }
        let mut rows: Vec<Word> = generators.to_vec();
        let mut basis: Vec<Word> = Vec::new();
        for bit in 0..length {
            let mask = 1u64 << bit;
            let Some(p) = rows.iter().position(|&r| r & mask != 0) else {
                continue;
            };
            let pivot = rows.swap_remove(p);
            for r in rows.iter_mut().chain(basis.iter_mut()) {
                if *r & mask != 0 {
                    *r ^= pivot;
                }
            }
            basis.push(pivot);
            rows.retain(|&r| r != 0);
        }
        Ok(BinaryCode { length, basis })
    }

    /// Parses generators written as 0/1 strings of equal length.
    pub fn from_strings<S: AsRef<str>>(length: usize, generators: &[S]) -> Result<Self> {
        let mut words = Vec::with_capacity(generators.len());
        for g in generators {
            let (len, w) = parse_word(g.as_ref())?;
            if len != length {
                return Err(Error::LengthMismatch { expected: length, got: len });
            }
            words.push(w);
        }
        BinaryCode::new(length, &words)
    }

    pub fn zero(length: usize) -> Result<Self> {
        BinaryCode::new(length, &[])
    }

    /// The repetition code `{0…0, 1…1}`.
    pub fn repetition(length: usize) -> Result<Self> {
        BinaryCode::new(length, &[full_mask(length.min(64))])
    }

    /// The extended Hamming `[8,4,4]` code.
    pub fn hamming8() -> Self {
        BinaryCode::from_strings(8, &["11110000", "11001100", "10101010", "11111111"])
            .expect("valid generators")
    }

    /// First-order Reed–Muller code `RM(1,4)`: coordinate `p+1` is the
    /// point `p ∈ {0,1}⁴`, generated by the all-one word and the four
    /// coordinate-function indicator words.
    pub fn rm14() -> Self {
        let mut gens = vec![u64::from(u16::MAX)];
        for i in 0..4 {
            let w = (0..16u64).filter(|p| p >> i & 1 == 1).fold(0, |acc, p| acc | 1 << p);
            gens.push(w);
        }
        BinaryCode::new(16, &gens).expect("valid generators")
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn all_one(&self) -> Word {
        full_mask(self.length)
    }

    pub fn contains(&self, w: Word) -> bool {
        if w & !full_mask(self.length) != 0 {
            return false;
        }
        let mut r = w;
        for &b in &self.basis {
            let pivot = b.trailing_zeros();
            if r >> pivot & 1 == 1 {
                r ^= b;
            }
        }
        r == 0
    }

    pub fn contains_all_one(&self) -> bool {
        self.contains(self.all_one())
    }

    /// Every codeword has weight divisible by 4.
    ///
    /// Checked on all `2^k` codewords when `k ≤ 20`; above that through the
    /// equivalent basis test (weights `≡ 0 mod 4`, pairwise even overlaps).
    pub fn is_doubly_even(&self) -> bool {
        if self.dimension() <= MAX_ENUM_DIM {
            let mut ok = true;
            self.for_each_codeword(|w| ok &= weight(w) % 4 == 0);
            ok
        } else {
            self.basis.iter().all(|&b| weight(b) % 4 == 0)
                && self
                    .basis
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| self.basis[i + 1..].iter().all(|&b| weight(a & b) % 2 == 0))
        }
    }

    /// Gray-code walk over all codewords (no enumeration limit here).
    fn for_each_codeword(&self, mut f: impl FnMut(Word)) {
        let k = self.dimension();
        let mut w = 0;
        f(w);
        for i in 1u64..(1u64 << k) {
            w ^= self.basis[i.trailing_zeros() as usize];
            f(w);
        }
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.dimension() > MAX_ENUM_DIM {
            Err(Error::DimensionTooLarge(self.dimension()))
        } else {
            Ok(())
        }
    }

    /// All codewords in canonical (text-lexicographic) order.
    pub fn codewords(&self) -> Result<Vec<Word>> {
        self.check_enumerable()?;
        let mut out = Vec::with_capacity(1 << self.dimension());
        self.for_each_codeword(|w| out.push(w));
        out.sort_by_key(|&w| text_order_key(self.length, w));
        Ok(out)
    }

    /// Codewords of weight exactly `w`, in canonical order.
    pub fn words_of_weight(&self, w: u32) -> Result<Vec<Word>> {
        self.check_enumerable()?;
        let mut out = Vec::new();
        self.for_each_codeword(|c| {
            if weight(c) == w {
                out.push(c)
            }
        });
        out.sort_by_key(|&c| text_order_key(self.length, c));
        Ok(out)
    }

    pub fn weight_distribution(&self) -> Result<BTreeMap<u32, u64>> {
        self.check_enumerable()?;
        let mut dist = BTreeMap::new();
        self.for_each_codeword(|c| *dist.entry(weight(c)).or_insert(0) += 1);
        Ok(dist)
    }

    /// Image under a coordinate permutation: coordinate `i` moves to
    /// `perm[i]` (0-based).
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.length {
            return Err(Error::LengthMismatch { expected: self.length, got: perm.len() });
        }
        let map = |w: Word| {
            (0..self.length)
                .filter(|&i| w >> i & 1 == 1)
                .fold(0u64, |acc, i| acc | 1 << perm[i])
        };
        let gens: Vec<Word> = self.basis.iter().map(|&b| map(b)).collect();
        BinaryCode::new(self.length, &gens)
    }

    /// Span of this code and extra words.
    pub fn extend(&self, extra: &[Word]) -> Result<Self> {
        let mut gens = self.basis.clone();
        gens.extend_from_slice(extra);
        BinaryCode::new(self.length, &gens)
    }

    pub fn direct_sum(&self, other: &BinaryCode) -> Result<Self> {
        let length = self.length + other.length;
        if length > 64 {
            return Err(Error::BadCodeLength(length));
        }
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().map(|&b| b << self.length));
        BinaryCode::new(length, &gens)
    }

    /// Text form accepted by the catalog DSL: `code(n; w1, w2, …)`, or
    /// `zero(n)` for the zero code.
    pub fn to_expr(&self) -> String {
        if self.basis.is_empty() {
            return format!("zero({})", self.length);
        }
        let words: Vec<String> = self
            .basis
            .iter()
            .map(|&b| format_word(self.length, b))
            .collect();
        format!("code({}; {})", self.length, words.join(", "))
    }

    pub fn basis_strings(&self) -> Vec<String> {
        self.basis.iter().map(|&b| format_word(self.length, b)).collect()
    }
}

impl fmt::Debug for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Looks for a 5-dimensional subcode with weight distribution
/// `{0:1, 8:30, 16:1}`, which for length 16 is exactly a copy of `RM(1,4)`.
///
/// The search starts from the all-one word and adds weight-8 codewords in
/// increasing canonical order, keeping every nonzero word of the span other
/// than the all-one word at weight 8. Returns the witness subcode.
pub fn has_rm14_subcode(code: &BinaryCode) -> Result<Option<BinaryCode>> {
    if code.length() != 16 {
        return Err(Error::WrongLength { expected: 16, got: code.length() });
    }
    if !code.contains_all_one() {
        return Ok(None);
    }
    let candidates = code.words_of_weight(8)?;
    let one = code.all_one();
    let mut span = vec![0, one];
    let mut chosen = vec![one];
    if extend_rm(&candidates, 0, &mut span, &mut chosen) {
        Ok(Some(BinaryCode::new(16, &chosen)?))
    } else {
        Ok(None)
    }
}

fn extend_rm(candidates: &[Word], start: usize, span: &mut Vec<Word>, chosen: &mut Vec<Word>) -> bool {
    if span.len() == 32 {
        return true;
    }
    for (idx, &w) in candidates.iter().enumerate().skip(start) {
        if span.contains(&w) {
            continue;
        }
        if !span.iter().all(|&s| weight(s ^ w) == 8) {
            continue;
        }
        let old = span.len();
        let coset: Vec<Word> = span.iter().map(|&s| s ^ w).collect();
        span.extend(coset);
        chosen.push(w);
        if extend_rm(candidates, idx + 1, span, chosen) {
            return true;
        }
        chosen.pop();
        span.truncate(old);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_eight() {
        let c = BinaryCode::from_strings(8, &["11111111"]).unwrap();
        assert_eq!(c.dimension(), 1);
        assert!(c.is_doubly_even());
        assert!(c.contains_all_one());
    }

    #[test]
    fn short_codes_are_doubly_even_only_when_zero() {
        let z = BinaryCode::zero(1).unwrap();
        assert_eq!(z.dimension(), 0);
        assert!(z.is_doubly_even());
        assert_eq!(z.words_of_weight(0).unwrap(), vec![0]);
        for n in 1..=3 {
            for w in 1u64..(1 << n) {
                assert!(!BinaryCode::new(n, &[w]).unwrap().is_doubly_even());
            }
        }
    }

    #[test]
    fn hamming_distribution() {
        let h = BinaryCode::hamming8();
        assert_eq!(h.dimension(), 4);
        assert!(h.is_doubly_even());
        let d = h.weight_distribution().unwrap();
        assert_eq!(d, BTreeMap::from([(0, 1), (4, 14), (8, 1)]));
        assert_eq!(h.words_of_weight(4).unwrap().len(), 14);
    }

    #[test]
    fn rm14_properties() {
        let rm = BinaryCode::rm14();
        assert_eq!(rm.dimension(), 5);
        assert_eq!(
            rm.weight_distribution().unwrap(),
            BTreeMap::from([(0, 1), (8, 30), (16, 1)])
        );
        assert!(rm.is_doubly_even());
        assert!(rm.contains_all_one());
        assert_eq!(rm.words_of_weight(8).unwrap().len(), 30);
    }

    #[test]
    fn rm14_subcode_detection() {
        let rm = BinaryCode::rm14();
        assert_eq!(has_rm14_subcode(&rm).unwrap(), Some(rm.clone()));
        assert_eq!(has_rm14_subcode(&BinaryCode::zero(16).unwrap()).unwrap(), None);
        assert!(matches!(
            has_rm14_subcode(&BinaryCode::hamming8()),
            Err(Error::WrongLength { expected: 16, got: 8 })
        ));
        // a weight-4 word meeting every RM(1,4) word evenly: an affine
        // 2-flat {0,1,2,3}
        let w = 0b1111u64;
        let ext = rm.extend(&[w]).unwrap();
        assert_eq!(ext.dimension(), 6);
        assert!(ext.is_doubly_even());
        let witness = has_rm14_subcode(&ext).unwrap().unwrap();
        assert_eq!(witness.dimension(), 5);
        assert_eq!(
            witness.weight_distribution().unwrap(),
            BTreeMap::from([(0, 1), (8, 30), (16, 1)])
        );
    }

    #[test]
    fn canonical_form_and_errors() {
        let a = BinaryCode::from_strings(4, &["1100", "0110"]).unwrap();
        let b = BinaryCode::from_strings(4, &["1010", "0110", "1100"]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis_strings(), vec!["1010", "0110"]);
        assert!(matches!(
            BinaryCode::from_strings(4, &["110"]),
            Err(Error::LengthMismatch { expected: 4, got: 3 })
        ));
        assert!(BinaryCode::new(70, &[]).is_err());
    }

    #[test]
    fn enumeration_limit() {
        let gens: Vec<Word> = (0..21).map(|i| 1u64 << i).collect();
        let c = BinaryCode::new(21, &gens).unwrap();
        assert_eq!(c.words_of_weight(1), Err(Error::DimensionTooLarge(21)));
        assert!(!c.is_doubly_even());
    }
}
