//! Nets of words around the identity.
//!
//! Level `-1` is the sampling net of all words of one length; level `0` is an
//! `epsilon`-ball selected from it; each shrink step produces the next level
//! with radius `epsilon^2`.

mod build;
mod persist;
mod search;

pub use build::{
    build_sampling_net, build_sampling_net_with, SamplingOptions, DEFAULT_ENUMERATION_CAP,
};
pub use persist::{load_net, read_net_header, save_net, NetHeader, NET_FORMAT_VERSION};
pub use search::{nearest_point, nearest_point_with, Nearest, NetIndex};

use crate::error::{Error, Result};
use crate::gateset::{evaluate_word, Fingerprint, GateSet, Word};
use crate::geometry::qubit::Mat2;
use crate::geometry::{
    make_generator_basis, unitary_to_vector, GeneratorBasis, SuVector, UnitaryMatrix,
};

/// Level index of the sampling net.
pub const SAMPLING_LEVEL: i32 = -1;

/// Default density constant `C` in `C / epsilon^d` (calibrated for `d = 3`).
pub const DEFAULT_DENSITY_CONSTANT: f64 = 8.0;

/// A word together with its product matrix, folded vector and `|r|`.
#[derive(Clone, Debug)]
pub struct NetPoint {
    pub word: Word,
    pub vector: SuVector,
    pub radius: f64,
    pub matrix: UnitaryMatrix,
}

impl NetPoint {
    pub fn from_matrix(
        word: Word,
        matrix: UnitaryMatrix,
        basis: &GeneratorBasis,
    ) -> Result<NetPoint> {
        let vector = unitary_to_vector(&matrix, basis)?;
        Ok(NetPoint {
            word,
            radius: vector.norm(),
            vector,
            matrix,
        })
    }

    pub(crate) fn from_qubit(word: Word, m: Mat2) -> NetPoint {
        let vector = SuVector::from(m.vector());
        NetPoint {
            word,
            radius: vector.norm(),
            vector,
            matrix: m.to_unitary(),
        }
    }
}

/// A collection of equal-length words, all within `radius` of the identity
/// (the sampling net is unrestricted and carries an infinite radius).
///
/// Points are kept sorted by word. Equality compares the persisted fields:
/// level, radius, word length, fingerprint, dimension, words and vectors.
#[derive(Clone, Debug)]
pub struct EpsilonNet {
    level: i32,
    radius: f64,
    word_len: usize,
    fingerprint: Fingerprint,
    dim: usize,
    points: Vec<NetPoint>,
    qubit: Option<Vec<Mat2>>,
}

impl PartialEq for EpsilonNet {
    fn eq(&self, o: &Self) -> bool {
        self.level == o.level
            && self.radius.to_bits() == o.radius.to_bits()
            && self.word_len == o.word_len
            && self.fingerprint == o.fingerprint
            && self.dim == o.dim
            && self.points.len() == o.points.len()
            && self
                .points
                .iter()
                .zip(&o.points)
                .all(|(a, b)| a.word == b.word && a.vector == b.vector)
    }
}

impl EpsilonNet {
    /// Assembles a net, checking the shared word length and, for
    /// `level >= 0`, that every point lies strictly inside `radius`.
    pub fn new(
        level: i32,
        radius: f64,
        word_len: usize,
        fingerprint: Fingerprint,
        dim: usize,
        mut points: Vec<NetPoint>,
    ) -> Result<EpsilonNet> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!(
                "net radius must be positive, got {radius}"
            )));
        }
        if level < SAMPLING_LEVEL {
            return Err(Error::Domain(format!(
                "net level must be at least -1, got {level}"
            )));
        }
        if let Some(p) = points.iter().find(|p| p.word.len() != word_len) {
            return Err(Error::Domain(format!(
                "word {:?} has length {}, expected {word_len}",
                p.word,
                p.word.len()
            )));
        }
        if level >= 0 {
            if let Some(p) = points.iter().find(|p| !(p.radius < radius)) {
                return Err(Error::Domain(format!(
                    "point at |r| = {} is outside radius {radius}",
                    p.radius
                )));
            }
        }
        if let Some(p) = points.iter().find(|p| p.matrix.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.matrix.dim(),
            });
        }
        if !points.windows(2).all(|w| w[0].word < w[1].word) {
            points.sort_by(|a, b| a.word.cmp(&b.word));
            points.dedup_by(|a, b| a.word == b.word);
        }
        Ok(Self::assemble(
            level,
            radius,
            word_len,
            fingerprint,
            dim,
            points,
        ))
    }

    pub(crate) fn assemble(
        level: i32,
        radius: f64,
        word_len: usize,
        fingerprint: Fingerprint,
        dim: usize,
        points: Vec<NetPoint>,
    ) -> EpsilonNet {
        let qubit = (dim == 2).then(|| {
            points
                .iter()
                .map(|p| Mat2::from_unitary(&p.matrix))
                .collect()
        });
        EpsilonNet {
            level,
            radius,
            word_len,
            fingerprint,
            dim,
            points,
            qubit,
        }
    }

    /// Evaluates `words` against `gs` and builds a net from the products.
    pub fn from_words(
        gs: &GateSet,
        level: i32,
        radius: f64,
        word_len: usize,
        words: Vec<Word>,
    ) -> Result<EpsilonNet> {
        let basis = make_generator_basis(gs.dim())?;
        let points = words
            .into_iter()
            .map(|w| {
                let m = evaluate_word(gs, &w)?;
                NetPoint::from_matrix(w, m, &basis)
            })
            .collect::<Result<Vec<_>>>()?;
        EpsilonNet::new(level, radius, word_len, gs.fingerprint(), gs.dim(), points)
    }

    pub fn level(&self) -> i32 {
        self.level
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `epsilon^2`, the covering resolution the net is meant to achieve.
    pub fn resolution(&self) -> f64 {
        self.radius * self.radius
    }

    pub fn word_len(&self) -> usize {
        self.word_len
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension `N^2 - 1` of the vector space.
    pub fn algebra_dim(&self) -> usize {
        self.dim * self.dim - 1
    }

    pub fn points(&self) -> &[NetPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn qubit_matrices(&self) -> Option<&[Mat2]> {
        self.qubit.as_deref()
    }

    /// Fails unless the net was built from `gs`.
    pub fn check_gate_set(&self, gs: &GateSet) -> Result<()> {
        let found = gs.fingerprint();
        if found != self.fingerprint {
            return Err(Error::FingerprintMismatch {
                expected: self.fingerprint.to_hex(),
                found: found.to_hex(),
            });
        }
        Ok(())
    }
}

/// Advisory radius `2^{1/4} sqrt(pi) / k^{1/3}` for a net of `k` points.
pub fn sampling_radius(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("point count must be at least 1".into()));
    }
    Ok(2f64.powf(0.25) * std::f64::consts::PI.sqrt() / (k as f64).cbrt())
}

/// Keeps the points with `|r| < radius`. Applied to the sampling net the
/// result is level `0`; otherwise the level is kept.
pub fn select_ball(net: &EpsilonNet, radius: f64) -> Result<EpsilonNet> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!(
            "ball radius must be positive, got {radius}"
        )));
    }
    let points: Vec<NetPoint> = net
        .points
        .iter()
        .filter(|p| p.radius < radius)
        .cloned()
        .collect();
    if points.is_empty() {
        return Err(Error::EmptyNet(format!(
            "no point of the level-{} net lies within {radius}; increase the word length",
            net.level
        )));
    }
    let level = if net.level == SAMPLING_LEVEL {
        0
    } else {
        net.level
    };
    let radius = if net.level >= 0 {
        radius.min(net.radius)
    } else {
        radius
    };
    Ok(EpsilonNet::assemble(
        level,
        radius,
        net.word_len,
        net.fingerprint,
        net.dim,
        points,
    ))
}

/// `ceil(C / epsilon^d)`, the number of points a net of radius `epsilon` needs.
pub fn required_point_count(epsilon: f64, d: usize, c: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if d == 0 || !(c > 0.0) {
        return Err(Error::Domain(
            "dimension and density constant must be positive".into(),
        ));
    }
    let n = (c / epsilon.powi(d as i32)).ceil();
    if n >= u64::MAX as f64 {
        return Err(Error::Domain(format!(
            "required point count overflows for epsilon = {epsilon}, d = {d}"
        )));
    }
    Ok(n as u64)
}
