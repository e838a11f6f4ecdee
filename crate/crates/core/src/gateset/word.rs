use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::GateSet;
use crate::error::{Error, Result};
use crate::geometry::qubit::Mat2;
use crate::geometry::{UnitaryMatrix, REUNITARIZE_EVERY, REUNITARIZE_MIN_LEN};

/// A sequence of gate indices. The empty word is the identity.
///
/// Ordering is lexicographic, which for words of equal length coincides with
/// the order of their base-`m` integers.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(indices: Vec<u8>) -> Self {
        Self(indices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn into_indices(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, alphabet: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i as usize >= alphabet) {
            Some(&i) => Err(Error::IndexOutOfRange {
                index: i as usize,
                alphabet,
            }),
            None => Ok(()),
        }
    }

    /// `self || other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Concatenation of several words.
    pub fn join<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        Word(
            parts
                .into_iter()
                .flat_map(|w| w.0.iter().copied())
                .collect(),
        )
    }

    /// Left rotation by `k`: `[w_k, ..., w_{L-1}, w_0, ..., w_{k-1}]`.
    pub fn rotated(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = Vec::with_capacity(self.0.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Smallest `p` with `rotated(p) == self` (`p` divides the length).
    pub fn rotation_period(&self) -> usize {
        let n = self.0.len();
        if n == 0 {
            return 0;
        }
        // KMP failure function: the shortest period is n - border(n).
        let s = &self.0;
        let mut fail = vec![0usize; n];
        let mut k = 0;
        for i in 1..n {
            while k > 0 && s[i] != s[k] {
                k = fail[k - 1];
            }
            if s[i] == s[k] {
                k += 1;
            }
            fail[i] = k;
        }
        let p = n - fail[n - 1];
        if n % p == 0 {
            p
        } else {
            n
        }
    }

    /// Lexicographically least rotation (Booth's algorithm) and the rotation
    /// offset that produces it.
    pub fn least_rotation(&self) -> (Word, usize) {
        let n = self.0.len();
        if n == 0 {
            return (self.clone(), 0);
        }
        let s: Vec<u8> = self.0.iter().chain(self.0.iter()).copied().collect();
        let mut f: Vec<isize> = vec![-1; 2 * n];
        let mut k: usize = 0;
        for j in 1..2 * n {
            let sj = s[j];
            let mut i = f[j - k - 1];
            while i != -1 && sj != s[k + i as usize + 1] {
                if sj < s[k + i as usize + 1] {
                    k = j - i as usize - 1;
                }
                i = f[i as usize];
            }
            if i == -1 && sj != s[k] {
                if sj < s[k] {
                    k = j;
                }
                f[j - k] = -1;
            } else {
                f[j - k] = i + 1;
            }
        }
        (self.rotated(k), k)
    }

    /// The word of the inverse product: reversed, each gate replaced by its
    /// inverse gate.
    pub fn inverse_in(&self, gs: &GateSet) -> Result<Word> {
        if !gs.includes_inverses() {
            return Err(Error::InversesUnavailable(gs.label().to_string()));
        }
        self.validate(gs.len())?;
        Ok(Word(
            self.0
                .iter()
                .rev()
                .map(|&i| gs.inverse_index(i as usize).expect("validated index") as u8)
                .collect(),
        ))
    }

    /// Gate symbols concatenated, e.g. `ABBa`.
    pub fn label(&self, gs: &GateSet) -> String {
        self.0.iter().map(|&i| gs.symbol(i as usize)).collect()
    }

    /// Parses a symbol string produced by [`Word::label`].
    pub fn parse_label(gs: &GateSet, s: &str) -> Result<Word> {
        let symbols: Vec<String> = (0..gs.len()).map(|i| gs.symbol(i)).collect();
        let mut out = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let (i, sym) = symbols
                .iter()
                .enumerate()
                .filter(|(_, sym)| rest.starts_with(sym.as_str()))
                .max_by_key(|(_, sym)| sym.len())
                .ok_or_else(|| Error::Format(format!("unknown gate symbol at `{rest}`")))?;
            out.push(i as u8);
            rest = &rest[sym.len()..];
        }
        Ok(Word(out))
    }

    /// Base-`m` value for `m^L <= 2^64`.
    #[cfg(test)]
    pub(crate) fn to_u64(&self, m: usize) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &i| acc * m as u64 + i as u64)
    }

    pub(crate) fn from_u64(mut k: u64, len: usize, m: usize) -> Word {
        let mut v = vec![0u8; len];
        for slot in v.iter_mut().rev() {
            *slot = (k % m as u64) as u8;
            k /= m as u64;
        }
        Word(v)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

/// Big-endian base-`m` integer of a word.
pub fn word_to_integer(w: &Word, m: usize) -> Result<BigUint> {
    if m < 2 {
        return Err(Error::Domain(format!(
            "alphabet size must be at least 2, got {m}"
        )));
    }
    w.validate(m)?;
    let base = BigUint::from(m);
    Ok(w.0
        .iter()
        .fold(BigUint::zero(), |acc, &i| acc * &base + BigUint::from(i)))
}

/// Inverse of [`word_to_integer`] for words of length `len`.
pub fn integer_to_word(k: &BigUint, len: usize, m: usize) -> Result<Word> {
    if !(2..=256).contains(&m) {
        return Err(Error::Domain(format!(
            "alphabet size must be in 2..=256, got {m}"
        )));
    }
    let base = BigUint::from(m);
    if *k >= base.pow(len as u32) {
        return Err(Error::IntegerOutOfRange {
            length: len,
            alphabet: m,
        });
    }
    let mut rest = k.clone();
    let mut v = vec![0u8; len];
    for slot in v.iter_mut().rev() {
        *slot = (&rest % &base).to_u8().expect("digit below 256");
        rest /= &base;
    }
    Ok(Word(v))
}

/// All `L` left rotations of a non-empty word, starting with the word itself.
pub fn cyclic_shifts(w: &Word) -> Result<Vec<Word>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok((0..w.len()).map(|k| w.rotated(k)).collect())
}

/// Product of the word's gates, first index leftmost. Long words are
/// re-unitarized every [`REUNITARIZE_EVERY`] multiplications.
pub fn evaluate_word(gs: &GateSet, w: &Word) -> Result<UnitaryMatrix> {
    w.validate(gs.len())?;
    if let Some(q) = gs.qubit_gates() {
        return Ok(evaluate_qubit(q, w.indices()).to_unitary());
    }
    let long = w.len() >= REUNITARIZE_MIN_LEN;
    let mut acc = UnitaryMatrix::identity(gs.dim());
    for (step, &i) in w.indices().iter().enumerate() {
        acc = &acc * &gs.gates()[i as usize];
        if long && (step + 1) % REUNITARIZE_EVERY == 0 {
            acc = acc.reunitarize();
        }
    }
    Ok(acc)
}

pub(crate) fn evaluate_qubit(gates: &[Mat2], w: &[u8]) -> Mat2 {
    let long = w.len() >= REUNITARIZE_MIN_LEN;
    let mut acc = Mat2::IDENTITY;
    for (step, &i) in w.iter().enumerate() {
        acc = acc.mul(&gates[i as usize]);
        if long && (step + 1) % REUNITARIZE_EVERY == 0 {
            acc = acc.reunitarize();
        }
    }
    acc
}
