use crate::error::{Error, Result};
use crate::exec::{flat_map_indexed, try_map_indexed, Execution};
use crate::gateset::{GateSet, Word};
use crate::geometry::qubit::Mat2;
use crate::geometry::{make_generator_basis, UnitaryMatrix};

use super::{EpsilonNet, NetPoint, SAMPLING_LEVEL};

/// Largest number of words the sampling net enumerates by default (`2^24`).
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

#[derive(Clone, Copy, Debug)]
pub struct SamplingOptions {
    pub cap: u64,
    /// Use only the first `alphabet` gates (all gates when `None`).
    pub alphabet: Option<usize>,
    pub exec: Execution,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            alphabet: None,
            exec: Execution::default(),
        }
    }
}

/// All `m^L` words of length `L`, ordered by word integer.
pub fn build_sampling_net(gs: &GateSet, len: usize) -> Result<EpsilonNet> {
    build_sampling_net_with(gs, len, &SamplingOptions::default())
}

/// Enumerates by meeting in the middle: every word is a prefix product times
/// a suffix product, so each costs a single matrix multiplication.
pub fn build_sampling_net_with(
    gs: &GateSet,
    len: usize,
    opts: &SamplingOptions,
) -> Result<EpsilonNet> {
    let m = opts.alphabet.unwrap_or(gs.len());
    if m < 1 || m > gs.len() {
        return Err(Error::Domain(format!(
            "alphabet of {m} letters is not available in a set of {}",
            gs.len()
        )));
    }
    let required = (m as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if required > opts.cap as u128 {
        return Err(Error::EnumerationCap {
            required,
            cap: opts.cap,
        });
    }
    let suffix_len = len / 2;
    let prefix_len = len - suffix_len;
    let n_suffix = m.pow(suffix_len as u32);
    let n_prefix = m.pow(prefix_len as u32);
    let fp = gs.fingerprint();

    let points = if let Some(q) = gs.qubit_gates() {
        let prefixes = products(&q[..m], prefix_len, &Mat2::IDENTITY, |a, b| a.mul(b));
        let suffixes = products(&q[..m], suffix_len, &Mat2::IDENTITY, |a, b| a.mul(b));
        flat_map_indexed(opts.exec, n_prefix, |a| {
            (0..n_suffix)
                .map(|b| {
                    let word = Word::from_u64((a * n_suffix + b) as u64, len, m);
                    NetPoint::from_qubit(word, prefixes[a].mul(&suffixes[b]))
                })
                .collect()
        })
    } else {
        let basis = make_generator_basis(gs.dim())?;
        let id = UnitaryMatrix::identity(gs.dim());
        let prefixes = products(&gs.gates()[..m], prefix_len, &id, |a, b| a * b);
        let suffixes = products(&gs.gates()[..m], suffix_len, &id, |a, b| a * b);
        let chunks = try_map_indexed(opts.exec, n_prefix, |a| {
            (0..n_suffix)
                .map(|b| {
                    let word = Word::from_u64((a * n_suffix + b) as u64, len, m);
                    NetPoint::from_matrix(word, &prefixes[a] * &suffixes[b], &basis)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        chunks.into_iter().flatten().collect()
    };
    Ok(EpsilonNet::assemble(
        SAMPLING_LEVEL,
        f64::INFINITY,
        len,
        fp,
        gs.dim(),
        points,
    ))
}

/// Products of all words of length `len`, indexed by word integer.
fn products<T: Clone>(gates: &[T], len: usize, id: &T, mul: impl Fn(&T, &T) -> T) -> Vec<T> {
    let mut out = vec![id.clone()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|p| gates.iter().map(|g| mul(p, g)).collect::<Vec<_>>())
            .collect();
    }
    out
}
