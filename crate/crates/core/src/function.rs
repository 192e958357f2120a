//! Bit-packed truth tables.
//!
//! A function of arity `n` is stored as `2^n` bits. Bit `i` holds the value at
//! the point whose `j`-th coordinate is `(i >> (j - 1)) & 1`, so `x1` is the
//! least significant selector bit and toggles fastest. Tables shorter than a
//! word live in the low bits of word 0; the unused high bits are always zero.
//!
//! Public APIs index variables from 1. Helpers that take 0-based variable
//! positions are marked as such.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Largest supported arity.
pub const MAX_ARITY: usize = 20;

/// Projection masks for the first six variables inside one 64-bit word.
pub(crate) const VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctionError {
    #[error("arity {0} is outside the supported range 1..=20")]
    ArityOutOfRange(usize),
    #[error("variable index {index} is outside 1..={arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("composition needs {expected} inner functions, got {found}")]
    WrongInnerCount { expected: usize, found: usize },
    #[error("point {bits:#x} does not fit arity {arity}")]
    PointOutOfRange { bits: u32, arity: usize },
    #[error("truth table has {found} words, arity {arity} needs {expected}")]
    TableLength { arity: usize, expected: usize, found: usize },
    #[error("truth table has bits set beyond 2^{0}")]
    TrailingBits(usize),
}

fn check_arity(n: usize) -> Result<(), FunctionError> {
    if (1..=MAX_ARITY).contains(&n) {
        Ok(())
    } else {
        Err(FunctionError::ArityOutOfRange(n))
    }
}

#[inline]
pub(crate) fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

/// Mask of the valid bits of word 0 for tables smaller than a word.
#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

/// A Boolean function of positive arity with a bit-packed truth table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanFunction {
    arity: u8,
    words: Vec<u64>,
}

/// An input vector for a function of the given arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    arity: u8,
    bits: u32,
}

impl Point {
    pub fn new(arity: usize, bits: u32) -> Result<Self, FunctionError> {
        check_arity(arity)?;
        if (bits as u64) >> arity != 0 {
            return Err(FunctionError::PointOutOfRange { bits, arity });
        }
        Ok(Point {
            arity: arity as u8,
            bits,
        })
    }

    /// Builds a point from coordinates `(a_1, ..., a_n)`.
    pub fn from_coords(coords: &[bool]) -> Result<Self, FunctionError> {
        let bits = coords
            .iter()
            .enumerate()
            .fold(0u32, |acc, (j, &b)| acc | ((b as u32) << j));
        Point::new(coords.len(), bits)
    }

    /// Point whose coordinates equal 1 exactly at the given 1-based positions.
    pub fn with_ones(arity: usize, ones: impl IntoIterator<Item = usize>) -> Result<Self, FunctionError> {
        let mut bits = 0u32;
        for t in ones {
            if t == 0 || t > arity {
                return Err(FunctionError::IndexOutOfRange { index: t, arity });
            }
            bits |= 1 << (t - 1);
        }
        Point::new(arity, bits)
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Coordinate `a_j`, 1-based.
    pub fn coord(&self, j: usize) -> bool {
        (self.bits >> (j - 1)) & 1 == 1
    }
}

impl BooleanFunction {
    /// Wraps a raw table. Word 0 holds the lowest indices.
    pub fn from_words(arity: usize, words: Vec<u64>) -> Result<Self, FunctionError> {
        check_arity(arity)?;
        let expected = word_count(arity);
        if words.len() != expected {
            return Err(FunctionError::TableLength {
                arity,
                expected,
                found: words.len(),
            });
        }
        if words[0] & !low_mask(arity) != 0 {
            return Err(FunctionError::TrailingBits(arity));
        }
        Ok(BooleanFunction {
            arity: arity as u8,
            words,
        })
    }

    pub(crate) fn from_words_unchecked(arity: usize, mut words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(arity));
        words[0] &= low_mask(arity);
        BooleanFunction {
            arity: arity as u8,
            words,
        }
    }

    /// Builds a table by evaluating `f` at every point index.
    pub fn from_fn(arity: usize, mut f: impl FnMut(u32) -> bool) -> Result<Self, FunctionError> {
        check_arity(arity)?;
        let mut words = vec![0u64; word_count(arity)];
        for idx in 0..(1u32 << arity) {
            if f(idx) {
                words[(idx >> 6) as usize] |= 1 << (idx & 63);
            }
        }
        Ok(BooleanFunction {
            arity: arity as u8,
            words,
        })
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self, FunctionError> {
        check_arity(arity)?;
        let fill = if value { u64::MAX } else { 0 };
        Ok(BooleanFunction::from_words_unchecked(
            arity,
            vec![fill; word_count(arity)],
        ))
    }

    /// The `m`-ary projection onto `x_i` (1-based).
    pub fn projection(m: usize, i: usize) -> Result<Self, FunctionError> {
        check_arity(m)?;
        if i == 0 || i > m {
            return Err(FunctionError::IndexOutOfRange { index: i, arity: m });
        }
        Ok(Self::var0(m, i - 1))
    }

    /// Projection with a 0-based variable position.
    pub(crate) fn var0(m: usize, v: usize) -> Self {
        let words = (0..word_count(m))
            .map(|k| {
                if v < 6 {
                    VAR_MASKS[v]
                } else if (k >> (v - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            })
            .collect();
        BooleanFunction::from_words_unchecked(m, words)
    }

    /// Every function of arity `n`, in table order. Only for `n <= 5`.
    pub fn all_of_arity(n: usize) -> impl Iterator<Item = BooleanFunction> {
        assert!((1..=5).contains(&n), "exhaustive enumeration is limited to arity 5");
        (0..(1u64 << (1u32 << n))).map(move |t| BooleanFunction::from_words_unchecked(n, vec![t]))
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Number of points, `2^arity`.
    pub fn table_len(&self) -> usize {
        1 << self.arity
    }

    /// Value at a point index; the caller guarantees `idx < 2^arity`.
    #[inline]
    pub fn value(&self, idx: u32) -> bool {
        (self.words[(idx >> 6) as usize] >> (idx & 63)) & 1 == 1
    }

    pub fn eval(&self, p: &Point) -> Result<bool, FunctionError> {
        if p.arity() != self.arity() {
            return Err(FunctionError::ArityMismatch {
                expected: self.arity(),
                found: p.arity(),
            });
        }
        Ok(self.value(p.bits))
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Returns `Some(c)` when the function is constant with value `c`.
    pub fn constant_value(&self) -> Option<bool> {
        let ones = self.count_ones();
        if ones == 0 {
            Some(false)
        } else if ones == self.table_len() as u64 {
            Some(true)
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Iterator over the point indices where the function is 1.
    pub fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    Some(((k as u32) << 6) | b)
                }
            })
        })
    }

    /// `f(g_1, ..., g_n)` computed pointwise.
    pub fn compose(&self, gs: &[BooleanFunction]) -> Result<BooleanFunction, FunctionError> {
        if gs.len() != self.arity() {
            return Err(FunctionError::WrongInnerCount {
                expected: self.arity(),
                found: gs.len(),
            });
        }
        let m = gs[0].arity();
        if let Some(g) = gs.iter().find(|g| g.arity() != m) {
            return Err(FunctionError::ArityMismatch {
                expected: m,
                found: g.arity(),
            });
        }
        let mut words = vec![0u64; word_count(m)];
        for a in 0..(1u32 << m) {
            let idx = gs
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, g)| acc | ((g.value(a) as u32) << i));
            if self.value(idx) {
                words[(a >> 6) as usize] |= 1 << (a & 63);
            }
        }
        Ok(BooleanFunction::from_words_unchecked(m, words))
    }

    /// Simple variable substitution `f(x_{map[0]}, ..., x_{map[n-1]})` into
    /// arity `m`, with 0-based targets.
    pub(crate) fn substitute0(&self, map: &[usize], m: usize) -> BooleanFunction {
        debug_assert_eq!(map.len(), self.arity());
        let mut words = vec![0u64; word_count(m)];
        for a in 0..(1u32 << m) {
            let idx = map
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &v)| acc | (((a >> v) & 1) << i));
            if self.value(idx) {
                words[(a >> 6) as usize] |= 1 << (a & 63);
            }
        }
        BooleanFunction::from_words_unchecked(m, words)
    }

    /// Same as [`substitute0`](Self::substitute0) with 1-based targets.
    pub fn substitute(&self, map: &[usize], m: usize) -> Result<BooleanFunction, FunctionError> {
        check_arity(m)?;
        if map.len() != self.arity() {
            return Err(FunctionError::WrongInnerCount {
                expected: self.arity(),
                found: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&v| v == 0 || v > m) {
            return Err(FunctionError::IndexOutOfRange { index: bad, arity: m });
        }
        let zero_based: Vec<usize> = map.iter().map(|v| v - 1).collect();
        Ok(self.substitute0(&zero_based, m))
    }

    /// Adds dummy variables at the end.
    pub fn widen(&self, arity: usize) -> Result<BooleanFunction, FunctionError> {
        check_arity(arity)?;
        if arity < self.arity() {
            return Err(FunctionError::ArityMismatch {
                expected: self.arity(),
                found: arity,
            });
        }
        let map: Vec<usize> = (0..self.arity()).collect();
        Ok(self.substitute0(&map, arity))
    }

    /// Whether the 0-based variable `v` is essential.
    pub(crate) fn depends_on0(&self, v: usize) -> bool {
        if v < 6 {
            let s = 1u32 << v;
            let lo = !VAR_MASKS[v];
            self.words.iter().any(|&w| ((w >> s) ^ w) & lo != 0)
        } else {
            let stride = 1usize << (v - 6);
            (0..self.words.len())
                .filter(|k| k & stride == 0)
                .any(|k| self.words[k] != self.words[k | stride])
        }
    }

    /// The 1-based indices of the essential variables.
    pub fn essential_indices(&self) -> BTreeSet<usize> {
        (0..self.arity())
            .filter(|&v| self.depends_on0(v))
            .map(|v| v + 1)
            .collect()
    }

    pub fn essential_arity(&self) -> usize {
        (0..self.arity()).filter(|&v| self.depends_on0(v)).count()
    }

    pub fn has_dummies(&self) -> bool {
        self.essential_arity() != self.arity()
    }

    /// Restriction to the essential variables, in ascending order, plus the
    /// map from core positions to original 1-based indices. A constant maps to
    /// the unary constant with an empty map.
    pub fn essential_core(&self) -> (BooleanFunction, Vec<usize>) {
        let ess: Vec<usize> = (0..self.arity()).filter(|&v| self.depends_on0(v)).collect();
        if ess.is_empty() {
            let c = self.value(0);
            return (
                BooleanFunction::from_words_unchecked(1, vec![if c { 3 } else { 0 }]),
                Vec::new(),
            );
        }
        if ess.len() == self.arity() {
            return (self.clone(), (1..=self.arity()).collect());
        }
        let k = ess.len();
        let mut words = vec![0u64; word_count(k)];
        for a in 0..(1u32 << k) {
            let idx = ess
                .iter()
                .enumerate()
                .fold(0u32, |acc, (c, &v)| acc | (((a >> c) & 1) << v));
            if self.value(idx) {
                words[(a >> 6) as usize] |= 1 << (a & 63);
            }
        }
        (
            BooleanFunction::from_words_unchecked(k, words),
            ess.into_iter().map(|v| v + 1).collect(),
        )
    }

    pub fn complement(&self) -> BooleanFunction {
        let words = self.words.iter().map(|w| !w).collect();
        BooleanFunction::from_words_unchecked(self.arity(), words)
    }

    /// `f^d(a) = !f(!a)`.
    pub fn dual(&self) -> BooleanFunction {
        self.reversed().complement()
    }

    /// Complement of the dual, i.e. `a -> f(!a)`.
    pub fn underline(&self) -> BooleanFunction {
        self.reversed()
    }

    /// Table with point `a` moved to `!a`.
    fn reversed(&self) -> BooleanFunction {
        let n = self.arity();
        if n >= 6 {
            let words = self.words.iter().rev().map(|w| w.reverse_bits()).collect();
            BooleanFunction::from_words_unchecked(n, words)
        } else {
            let len = 1u32 << n;
            let w = self.words[0].reverse_bits() >> (64 - len);
            BooleanFunction::from_words_unchecked(n, vec![w])
        }
    }

    /// True when `f(x, ..., x) = x`.
    pub fn is_idempotent(&self) -> bool {
        !self.value(0) && self.value((self.table_len() - 1) as u32)
    }

    /// Swaps two 0-based variables in place.
    pub(crate) fn swap_vars0(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if j < 6 {
            let delta = (1u32 << j) - (1u32 << i);
            let m = VAR_MASKS[i] & !VAR_MASKS[j];
            for w in self.words.iter_mut() {
                let t = ((*w >> delta) ^ *w) & m;
                *w ^= t ^ (t << delta);
            }
        } else if i < 6 {
            let s = 1u32 << i;
            let lo = !VAR_MASKS[i];
            let stride = 1usize << (j - 6);
            for k in 0..self.words.len() {
                if k & stride == 0 {
                    let a = self.words[k];
                    let b = self.words[k | stride];
                    let t = ((a >> s) ^ b) & lo;
                    self.words[k | stride] = b ^ t;
                    self.words[k] = a ^ (t << s);
                }
            }
        } else {
            let si = 1usize << (i - 6);
            let sj = 1usize << (j - 6);
            for k in 0..self.words.len() {
                if k & si != 0 && k & sj == 0 {
                    self.words.swap(k, k - si + sj);
                }
            }
        }
    }

    /// True when swapping the 0-based variables `i` and `j` leaves the table unchanged.
    pub(crate) fn symmetric_in0(&self, i: usize, j: usize) -> bool {
        let mut t = self.clone();
        t.swap_vars0(i, j);
        t == *self
    }

    /// True if `a <= b` coordinatewise implies `f(a) <= f(b)`.
    pub fn is_monotone(&self) -> bool {
        (0..self.arity()).all(|v| {
            if v < 6 {
                let s = 1u32 << v;
                let lo = !VAR_MASKS[v];
                self.words.iter().all(|&w| ((w & lo) << s) & !w == 0)
            } else {
                let stride = 1usize << (v - 6);
                (0..self.words.len())
                    .filter(|k| k & stride == 0)
                    .all(|k| self.words[k] & !self.words[k | stride] == 0)
            }
        })
    }

    /// Möbius transform over GF(2); maps a table to its Zhegalkin coefficients
    /// and back (the transform is an involution).
    fn moebius(&self) -> BooleanFunction {
        let mut words = self.words.clone();
        for v in 0..self.arity() {
            if v < 6 {
                let s = 1u32 << v;
                let lo = !VAR_MASKS[v];
                for w in words.iter_mut() {
                    *w ^= (*w & lo) << s;
                }
            } else {
                let stride = 1usize << (v - 6);
                for k in 0..words.len() {
                    if k & stride == 0 {
                        words[k | stride] ^= words[k];
                    }
                }
            }
        }
        BooleanFunction::from_words_unchecked(self.arity(), words)
    }

    pub fn zhegalkin(&self) -> Polynomial {
        let coeffs = self.moebius();
        Polynomial {
            arity: self.arity,
            monomials: coeffs.ones().collect(),
        }
    }

    pub fn from_zhegalkin(p: &Polynomial) -> BooleanFunction {
        let mut words = vec![0u64; word_count(p.arity())];
        for &m in &p.monomials {
            words[(m >> 6) as usize] |= 1 << (m & 63);
        }
        BooleanFunction::from_words_unchecked(p.arity(), words).moebius()
    }

    /// Degree of the Zhegalkin polynomial (0 for constants).
    pub fn degree(&self) -> u32 {
        self.moebius().ones().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// Lexicographic comparison of the tables read as bit strings from index 0.
    pub fn cmp_bits(&self, other: &BooleanFunction) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let d = a ^ b;
            if d != 0 {
                let low = d.trailing_zeros();
                return if (a >> low) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.words.len().cmp(&other.words.len())
    }

    /// The table as a string of `0`/`1` characters, index 0 first.
    pub fn bit_string(&self) -> String {
        (0..self.table_len() as u32)
            .map(|i| if self.value(i) { '1' } else { '0' })
            .collect()
    }

    fn zip_with(&self, other: &BooleanFunction, op: impl Fn(u64, u64) -> u64) -> BooleanFunction {
        assert_eq!(self.arity, other.arity, "bitwise operation on different arities");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        BooleanFunction::from_words_unchecked(self.arity(), words)
    }

    pub fn and(&self, other: &BooleanFunction) -> BooleanFunction {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn or(&self, other: &BooleanFunction) -> BooleanFunction {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &BooleanFunction) -> BooleanFunction {
        self.zip_with(other, |a, b| a ^ b)
    }

    /// Pointwise `self <= other`.
    pub fn implies(&self, other: &BooleanFunction) -> bool {
        self.arity == other.arity && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::format_hex(self))
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::format_hex(self))
    }
}

/// Serializes as the `tt:` literal.
impl serde::Serialize for BooleanFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::parse::format_hex(self))
    }
}

/// A multilinear polynomial over GF(2). Each monomial is a bitmask of
/// 0-based variable positions; the empty mask is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: u8,
    monomials: BTreeSet<u32>,
}

impl Polynomial {
    /// Builds a polynomial from monomials given as lists of 1-based indices.
    /// Repeated monomials cancel, as they do over GF(2).
    pub fn new(arity: usize, monomials: &[Vec<usize>]) -> Result<Self, FunctionError> {
        check_arity(arity)?;
        let mut set = BTreeSet::new();
        for mono in monomials {
            let mut mask = 0u32;
            for &i in mono {
                if i == 0 || i > arity {
                    return Err(FunctionError::IndexOutOfRange { index: i, arity });
                }
                mask |= 1 << (i - 1);
            }
            if !set.insert(mask) {
                set.remove(&mask);
            }
        }
        Ok(Polynomial {
            arity: arity as u8,
            monomials: set,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Monomials as sorted lists of 1-based indices, ordered by degree then
    /// lexicographically.
    pub fn monomials(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .monomials
            .iter()
            .map(|&m| (0..32).filter(|b| (m >> b) & 1 == 1).map(|b| b as usize + 1).collect())
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn degree(&self) -> u32 {
        self.monomials.iter().map(|m| m.count_ones()).max().unwrap_or(0)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .monomials()
            .into_iter()
            .map(|m| {
                if m.is_empty() {
                    "1".to_string()
                } else {
                    m.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join("*")
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and2() -> BooleanFunction {
        BooleanFunction::from_words(2, vec![0x8]).unwrap()
    }

    fn or2() -> BooleanFunction {
        BooleanFunction::from_words(2, vec![0xE]).unwrap()
    }

    fn all_functions(n: usize) -> impl Iterator<Item = BooleanFunction> {
        (0..(1u64 << (1 << n))).map(move |t| BooleanFunction::from_words(n, vec![t]).unwrap())
    }

    #[test]
    fn eval_and() {
        let f = and2();
        assert!(!f.eval(&Point::from_coords(&[true, false]).unwrap()).unwrap());
        assert!(f.eval(&Point::from_coords(&[true, true]).unwrap()).unwrap());
        assert!(matches!(
            f.eval(&Point::new(3, 0).unwrap()),
            Err(FunctionError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn projections() {
        assert_eq!(BooleanFunction::projection(1, 1).unwrap().words(), &[0b10]);
        assert_eq!(BooleanFunction::projection(2, 2).unwrap().words(), &[0xC]);
        assert_eq!(BooleanFunction::projection(3, 1).unwrap().essential_arity(), 1);
        assert!(BooleanFunction::projection(3, 4).is_err());
        assert!(BooleanFunction::projection(3, 0).is_err());
        let p = BooleanFunction::projection(9, 8).unwrap();
        for a in 0..512u32 {
            assert_eq!(p.value(a), (a >> 7) & 1 == 1);
        }
    }

    #[test]
    fn compose_examples() {
        let x1 = BooleanFunction::projection(1, 1).unwrap();
        assert_eq!(and2().compose(&[x1.clone(), x1.clone()]).unwrap(), x1);
        let g = or2();
        assert_eq!(x1.compose(&[g.clone()]).unwrap(), g);
        assert!(and2().compose(&[x1.clone()]).is_err());
    }

    #[test]
    fn essential_examples() {
        let p = BooleanFunction::projection(3, 2).unwrap();
        assert_eq!(p.essential_indices(), BTreeSet::from([2]));
        let zero = BooleanFunction::constant(4, false).unwrap();
        assert!(zero.essential_indices().is_empty());
        let (core, map) = p.essential_core();
        assert_eq!(core, BooleanFunction::projection(1, 1).unwrap());
        assert_eq!(map, vec![2]);
        let wide = and2().widen(4).unwrap();
        assert_eq!(wide.essential_core(), (and2(), vec![1, 2]));
        let one = BooleanFunction::constant(3, true).unwrap();
        assert_eq!(
            one.essential_core(),
            (BooleanFunction::constant(1, true).unwrap(), vec![])
        );
    }

    #[test]
    fn core_of_core_is_itself() {
        for f in all_functions(3) {
            let (c, _) = f.essential_core();
            let (cc, map) = c.essential_core();
            assert_eq!(cc, c);
            if !c.is_constant() {
                assert_eq!(map, (1..=c.arity()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn duality_examples() {
        assert_eq!(and2().dual(), or2());
        for n in 1..=3 {
            for f in all_functions(n) {
                assert_eq!(f.dual().dual(), f);
                assert_eq!(f.complement().complement(), f);
                assert_eq!(f.dual().complement(), f.underline());
                assert_eq!(f.complement().dual(), f.underline());
                let direct = BooleanFunction::from_fn(n, |a| {
                    !f.value(!a & ((1 << n) - 1))
                })
                .unwrap();
                assert_eq!(f.dual(), direct);
            }
        }
        let big = BooleanFunction::from_fn(8, |a| a.count_ones() >= 3).unwrap();
        let direct = BooleanFunction::from_fn(8, |a| !big.value(!a & 0xFF)).unwrap();
        assert_eq!(big.dual(), direct);
    }

    #[test]
    fn zhegalkin_examples() {
        let p = or2().zhegalkin();
        assert_eq!(p.monomials(), vec![vec![1], vec![2], vec![1, 2]]);
        assert_eq!(p.to_string(), "x1 + x2 + x1*x2");
        assert!(BooleanFunction::constant(2, false).unwrap().zhegalkin().is_zero());
        assert_eq!(BooleanFunction::constant(1, true).unwrap().zhegalkin().to_string(), "1");
        for n in 1..=4 {
            for f in all_functions(n).step_by(if n == 4 { 7 } else { 1 }) {
                assert_eq!(BooleanFunction::from_zhegalkin(&f.zhegalkin()), f);
            }
        }
    }

    #[test]
    fn zhegalkin_on_wide_tables() {
        let f = BooleanFunction::from_fn(9, |a| (a.count_ones() % 3) == 1).unwrap();
        assert_eq!(BooleanFunction::from_zhegalkin(&f.zhegalkin()), f);
        let x7 = BooleanFunction::projection(8, 7).unwrap();
        assert_eq!(x7.zhegalkin().monomials(), vec![vec![7]]);
    }

    #[test]
    fn swap_matches_substitution() {
        for n in [3usize, 7, 9] {
            let f = BooleanFunction::from_fn(n, |a| (a.wrapping_mul(2654435761) >> 7) & 1 == 1).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let mut s = f.clone();
                    s.swap_vars0(i, j);
                    let mut map: Vec<usize> = (0..n).collect();
                    map.swap(i, j);
                    assert_eq!(s, f.substitute0(&map, n), "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn monotone_detection() {
        assert!(and2().is_monotone());
        assert!(!and2().complement().is_monotone());
        let maj7 = BooleanFunction::from_fn(7, |a| a.count_ones() >= 4).unwrap();
        assert!(maj7.is_monotone());
        let bad = BooleanFunction::from_fn(7, |a| a.count_ones() == 4).unwrap();
        assert!(!bad.is_monotone());
    }

    #[test]
    fn idempotent_functions() {
        assert!(and2().is_idempotent());
        assert!(!BooleanFunction::constant(1, true).unwrap().is_idempotent());
    }

    #[test]
    fn cmp_bits_reads_from_index_zero() {
        let a = BooleanFunction::from_words(2, vec![0b0010]).unwrap();
        let b = BooleanFunction::from_words(2, vec![0b0001]).unwrap();
        assert_eq!(a.cmp_bits(&b), Ordering::Less);
        assert_eq!(a.bit_string(), "0100");
    }

    #[test]
    fn reject_bad_tables() {
        assert!(BooleanFunction::from_words(2, vec![0x10]).is_err());
        assert!(BooleanFunction::from_words(7, vec![0]).is_err());
        assert!(BooleanFunction::from_words(21, vec![]).is_err());
        assert!(BooleanFunction::constant(0, true).is_err());
    }
}
