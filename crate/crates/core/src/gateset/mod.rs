//! Gate sets, words over a gate alphabet, and word evaluation.
//!
//! A word `[f, j, ..., q]` stands for the product `G_f G_j ... G_q`: the first
//! index is the leftmost factor.

mod builtin;
mod io;
mod word;

pub use builtin::{
    clifford_t_set, hadamard, make_diffusive_qubit_set, reference_mixer_entries,
    standard_diffusive_set, t_gate, DiffusiveSet, MixerSource, MIXER_TOLERANCE,
};
pub(crate) use word::evaluate_qubit;
pub use word::{cyclic_shifts, evaluate_word, integer_to_word, word_to_integer, Word};

use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::qubit::Mat2;
use crate::geometry::UnitaryMatrix;

/// SHA-256 of the canonical text serialization of a gate set.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fingerprint(pub [u8; 32]);

impl Fingerprint {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fingerprint({})", &self.to_hex()[..16])
    }
}

/// An immutable, ordered set of `m >= 2` unitary gates of equal dimension.
///
/// When `includes_inverses` is set the set has even size `2k` and gate
/// `i + k` is the inverse of gate `i`.
#[derive(Clone, Debug)]
pub struct GateSet {
    dim: usize,
    gates: Vec<UnitaryMatrix>,
    label: String,
    includes_inverses: bool,
    qubit: Option<Vec<Mat2>>,
}

impl GateSet {
    pub fn new(
        label: impl Into<String>,
        gates: Vec<UnitaryMatrix>,
        includes_inverses: bool,
    ) -> Result<Self> {
        let label = label.into();
        if label.contains('\n') {
            return Err(Error::Format("gate-set label must be a single line".into()));
        }
        if gates.len() < 2 {
            return Err(Error::Domain(format!(
                "a gate set needs at least 2 gates, got {}",
                gates.len()
            )));
        }
        if gates.len() > 256 {
            return Err(Error::Domain("at most 256 gates are supported".into()));
        }
        let dim = gates[0].dim();
        for g in &gates {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.dim(),
                });
            }
            let deviation = g.unitarity_deviation();
            if !(deviation <= crate::geometry::UNITARITY_TOL) {
                return Err(Error::NotUnitary {
                    deviation,
                    tolerance: crate::geometry::UNITARITY_TOL,
                });
            }
        }
        if includes_inverses {
            if gates.len() % 2 != 0 {
                return Err(Error::Domain(
                    "an inverse-closed set must have even size".into(),
                ));
            }
            let k = gates.len() / 2;
            for i in 0..k {
                let p = &gates[i] * &gates[i + k];
                if p.max_abs_diff(&UnitaryMatrix::identity(dim)) > 1e-10 {
                    return Err(Error::Domain(format!(
                        "gate {} is not the inverse of gate {i}",
                        i + k
                    )));
                }
            }
        }
        let qubit = (dim == 2).then(|| gates.iter().map(Mat2::from_unitary).collect());
        Ok(Self {
            dim,
            gates,
            label,
            includes_inverses,
            qubit,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Alphabet size `m`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[UnitaryMatrix] {
        &self.gates
    }

    pub fn gate(&self, i: usize) -> Result<&UnitaryMatrix> {
        self.gates.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            alphabet: self.len(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn includes_inverses(&self) -> bool {
        self.includes_inverses
    }

    /// Number of "physical" gates: all of them, or the first half of an
    /// inverse-closed set.
    pub fn direct_count(&self) -> usize {
        if self.includes_inverses {
            self.len() / 2
        } else {
            self.len()
        }
    }

    /// Index of the inverse of gate `i`, when the set carries inverses.
    pub fn inverse_index(&self, i: usize) -> Option<usize> {
        if !self.includes_inverses || i >= self.len() {
            return None;
        }
        let k = self.len() / 2;
        Some(if i < k { i + k } else { i - k })
    }

    /// Display symbol: `A, B, ...` for direct gates, lowercase for inverses.
    pub fn symbol(&self, i: usize) -> String {
        let k = self.direct_count();
        if k <= 26 && i < self.len() {
            let base = if i < k { b'A' } else { b'a' };
            ((base + (i % k) as u8) as char).to_string()
        } else {
            format!("[{i}]")
        }
    }

    pub(crate) fn qubit_gates(&self) -> Option<&[Mat2]> {
        self.qubit.as_deref()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let digest = Sha256::digest(self.to_text().as_bytes());
        let mut out = [0u8; 32];
        out.copy_from_slice(&digest);
        Fingerprint(out)
    }

    /// Appends the conjugate transposes: `{G_0..G_{m-1}, G_0^dag..G_{m-1}^dag}`.
    /// A set that already carries inverses is returned unchanged.
    pub fn augment_with_inverses(&self) -> GateSet {
        if self.includes_inverses {
            return self.clone();
        }
        let mut gates = self.gates.clone();
        gates.extend(self.gates.iter().map(UnitaryMatrix::adjoint));
        let qubit = (self.dim == 2).then(|| gates.iter().map(Mat2::from_unitary).collect());
        GateSet {
            dim: self.dim,
            gates,
            label: format!("{}+inv", self.label),
            includes_inverses: true,
            qubit,
        }
    }
}

/// Free-function form of [`GateSet::augment_with_inverses`].
pub fn augment_with_inverses(gs: &GateSet) -> GateSet {
    gs.augment_with_inverses()
}
