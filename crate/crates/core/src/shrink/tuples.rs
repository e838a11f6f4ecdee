//! Candidate enumeration: ordered `M`-tuples for diffusion, ordered pairs
//! for commutators. Work is partitioned by the first tuple index and merged
//! in index order.

use num_complex::Complex64;

use crate::error::Result;
use crate::exec::{flat_map_indexed, try_map_indexed, Execution};
use crate::geometry::qubit::Mat2;
use crate::geometry::{unitary_to_vector, GeneratorBasis, UnitaryMatrix};

/// A surviving tuple: indices into the base list and the exact `|r|` of the
/// product.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Survivor {
    pub idx: Vec<u32>,
    pub distance: f64,
}

/// Loose trace bound: `|Tr U| > 2 cos(t)` is necessary for half-angle below
/// `t`; the small widening keeps the prefilter conservative under rounding.
fn loose_trace_bound(cut: f64) -> f64 {
    2.0 * (cut / std::f64::consts::SQRT_2 * (1.0 + 1e-6)).cos() - 1e-12
}

pub(crate) fn diffusion_qubit(
    mats: &[Mat2],
    steps: usize,
    cut: f64,
    exec: Execution,
) -> Vec<Survivor> {
    let bound = loose_trace_bound(cut);
    flat_map_indexed(exec, mats.len(), |i0| {
        let mut out = Vec::new();
        let mut idx = vec![0u32; steps];
        idx[0] = i0 as u32;
        qubit_rec(mats, &mats[i0], 1, steps, cut, bound, &mut idx, &mut out);
        out
    })
}

#[allow(clippy::too_many_arguments)]
fn qubit_rec(
    mats: &[Mat2],
    prefix: &Mat2,
    depth: usize,
    steps: usize,
    cut: f64,
    bound: f64,
    idx: &mut Vec<u32>,
    out: &mut Vec<Survivor>,
) {
    if depth + 1 == steps {
        for (k, p) in mats.iter().enumerate() {
            if prefix.trace_mul(p).norm() > bound {
                let d = prefix.mul(p).distance_from_identity();
                if d < cut {
                    idx[depth] = k as u32;
                    out.push(Survivor {
                        idx: idx.clone(),
                        distance: d,
                    });
                }
            }
        }
        return;
    }
    for (k, p) in mats.iter().enumerate() {
        idx[depth] = k as u32;
        qubit_rec(mats, &prefix.mul(p), depth + 1, steps, cut, bound, idx, out);
    }
}

pub(crate) fn diffusion_general(
    mats: &[UnitaryMatrix],
    steps: usize,
    cut: f64,
    basis: &GeneratorBasis,
    exec: Execution,
) -> Result<Vec<Survivor>> {
    let chunks = try_map_indexed(exec, mats.len(), |i0| {
        let mut out = Vec::new();
        let mut idx = vec![0u32; steps];
        idx[0] = i0 as u32;
        general_rec(mats, &mats[i0], 1, steps, cut, basis, &mut idx, &mut out)?;
        Ok::<_, crate::error::Error>(out)
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

#[allow(clippy::too_many_arguments)]
fn general_rec(
    mats: &[UnitaryMatrix],
    prefix: &UnitaryMatrix,
    depth: usize,
    steps: usize,
    cut: f64,
    basis: &GeneratorBasis,
    idx: &mut Vec<u32>,
    out: &mut Vec<Survivor>,
) -> Result<()> {
    for (k, p) in mats.iter().enumerate() {
        idx[depth] = k as u32;
        let prod = prefix * p;
        if depth + 1 == steps {
            let d = unitary_to_vector(&prod, basis)?.norm();
            if d < cut {
                out.push(Survivor {
                    idx: idx.clone(),
                    distance: d,
                });
            }
        } else {
            general_rec(mats, &prod, depth + 1, steps, cut, basis, idx, out)?;
        }
    }
    Ok(())
}

pub(crate) fn commutator_qubit(mats: &[Mat2], cut: f64, exec: Execution) -> Vec<Survivor> {
    flat_map_indexed(exec, mats.len(), |i| {
        let a = mats[i];
        let a_inv = a.adjoint();
        mats.iter()
            .enumerate()
            .filter_map(|(j, b)| {
                let c = a.mul(b).mul(&a_inv).mul(&b.adjoint());
                let d = c.distance_from_identity();
                (d < cut).then(|| Survivor {
                    idx: vec![i as u32, j as u32],
                    distance: d,
                })
            })
            .collect()
    })
}

pub(crate) fn commutator_general(
    mats: &[UnitaryMatrix],
    cut: f64,
    basis: &GeneratorBasis,
    exec: Execution,
) -> Result<Vec<Survivor>> {
    let chunks = try_map_indexed(exec, mats.len(), |i| {
        let a = &mats[i];
        let a_inv = a.adjoint();
        let mut out = Vec::new();
        for (j, b) in mats.iter().enumerate() {
            let c = &(&(a * b) * &a_inv) * &b.adjoint();
            let d = unitary_to_vector(&c, basis)?.norm();
            if d < cut {
                out.push(Survivor {
                    idx: vec![i as u32, j as u32],
                    distance: d,
                });
            }
        }
        Ok::<_, crate::error::Error>(out)
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Statistics comparing vector-sum pre-selection with exact post-selection
/// over all ordered triples of a base set.
#[derive(Clone, Debug, PartialEq)]
pub struct PreselectionStudy {
    pub triples: u64,
    /// `|r1 + r2 + r3| < cut`.
    pub preselected: u64,
    /// Exact product within `cut`.
    pub postselected: u64,
    /// Pre-selected triples whose exact product is not within `cut`.
    pub preselected_rejected: u64,
    /// Largest exact distance among pre-selected triples.
    pub max_preselected_distance: f64,
}

impl PreselectionStudy {
    /// Fraction of pre-selected triples that fail exact post-selection.
    pub fn disagreement_rate(&self) -> f64 {
        if self.preselected == 0 {
            0.0
        } else {
            self.preselected_rejected as f64 / self.preselected as f64
        }
    }
}

pub(crate) fn preselection_qubit(
    mats: &[Mat2],
    vecs: &[[f64; 3]],
    cut: f64,
    exec: Execution,
) -> PreselectionStudy {
    let k = mats.len();
    let bound = loose_trace_bound(cut);
    let rows = crate::exec::map_indexed(exec, k, |i| {
        let (mut pre, mut post, mut rej, mut max_d) = (0u64, 0u64, 0u64, 0.0f64);
        for j in 0..k {
            let pij = mats[i].mul(&mats[j]);
            let sij = [
                vecs[i][0] + vecs[j][0],
                vecs[i][1] + vecs[j][1],
                vecs[i][2] + vecs[j][2],
            ];
            for l in 0..k {
                let s = [
                    sij[0] + vecs[l][0],
                    sij[1] + vecs[l][1],
                    sij[2] + vecs[l][2],
                ];
                let in_pre = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt() < cut;
                let tr: Complex64 = pij.trace_mul(&mats[l]);
                let d = if in_pre || tr.norm() > bound {
                    pij.mul(&mats[l]).distance_from_identity()
                } else {
                    f64::INFINITY
                };
                let in_post = d < cut;
                post += in_post as u64;
                if in_pre {
                    pre += 1;
                    max_d = max_d.max(d);
                    rej += (!in_post) as u64;
                }
            }
        }
        (pre, post, rej, max_d)
    });
    let mut s = PreselectionStudy {
        triples: (k as u64).pow(3),
        preselected: 0,
        postselected: 0,
        preselected_rejected: 0,
        max_preselected_distance: 0.0,
    };
    for (pre, post, rej, max_d) in rows {
        s.preselected += pre;
        s.postselected += post;
        s.preselected_rejected += rej;
        s.max_preselected_distance = s.max_preselected_distance.max(max_d);
    }
    s
}
