//! Cyclic-rotation augmentation of survivor words.
//!
//! Every rotation of a word is a conjugate of its product, so it keeps the
//! same distance from the identity. Survivors are grouped by rotation orbit
//! (least rotation plus period) so that the augmented set can be counted
//! and subsampled without materializing it.

use rand::seq::index;
use rand::Rng;

use crate::gateset::Word;

/// One rotation orbit and the offsets (rotations of the least rotation)
/// that belong to the augmented set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub canonical: Word,
    pub offsets: Vec<usize>,
}

/// Groups `words` by rotation orbit. With `cap = None` every rotation is
/// included; with `Some(c)` each word contributes its first `c` rotations.
pub fn rotation_orbits(words: &[Word], cap: Option<usize>) -> Vec<Orbit> {
    let mut entries: Vec<(Word, usize, usize)> = words
        .iter()
        .map(|w| {
            let (canonical, k) = w.least_rotation();
            let p = canonical.rotation_period().max(1);
            // w == canonical.rotated(j)
            let j = (w.len() - k) % w.len().max(1) % p;
            (canonical, p, j)
        })
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));

    let mut orbits = Vec::new();
    let mut i = 0;
    while i < entries.len() {
        let (canonical, p, _) = entries[i].clone();
        let mut hit = vec![false; p];
        while i < entries.len() && entries[i].0 == canonical {
            let j = entries[i].2;
            match cap {
                Some(c) if c < p => (0..c).for_each(|s| hit[(j + s) % p] = true),
                _ => hit.iter_mut().for_each(|h| *h = true),
            }
            i += 1;
        }
        let offsets = hit
            .iter()
            .enumerate()
            .filter(|(_, h)| **h)
            .map(|(k, _)| k)
            .collect();
        orbits.push(Orbit { canonical, offsets });
    }
    orbits
}

pub fn augmented_count(orbits: &[Orbit]) -> u64 {
    orbits.iter().map(|o| o.offsets.len() as u64).sum()
}

/// Every word of the augmented set, sorted.
pub fn materialize(orbits: &[Orbit]) -> Vec<Word> {
    let mut out: Vec<Word> = orbits
        .iter()
        .flat_map(|o| o.offsets.iter().map(move |&k| o.canonical.rotated(k)))
        .collect();
    out.sort();
    out
}

/// Uniform choice of `k` distinct augmented words (all when `k >= total`),
/// returned sorted.
pub fn subsample<R: Rng + ?Sized>(orbits: &[Orbit], k: u64, rng: &mut R) -> Vec<Word> {
    let total = augmented_count(orbits);
    if k >= total {
        return materialize(orbits);
    }
    let mut picks = index::sample(rng, total as usize, k as usize).into_vec();
    picks.sort_unstable();
    let mut out = Vec::with_capacity(picks.len());
    let mut orbit = 0;
    let mut start = 0usize;
    for p in picks {
        while p >= start + orbits[orbit].offsets.len() {
            start += orbits[orbit].offsets.len();
            orbit += 1;
        }
        let o = &orbits[orbit];
        out.push(o.canonical.rotated(o.offsets[p - start]));
    }
    out.sort();
    out
}

/// Reference augmentation: materialize the rotations, sort and deduplicate.
pub fn augment_by_materializing(words: &[Word], cap: Option<usize>) -> Vec<Word> {
    let mut out: Vec<Word> = words
        .iter()
        .flat_map(|w| {
            let n = cap.map_or(w.len(), |c| c.min(w.len())).max(1);
            (0..n).map(move |k| w.rotated(k))
        })
        .collect();
    out.sort();
    out.dedup();
    out
}
