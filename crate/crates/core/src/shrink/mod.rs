//! Shrinking an `(eps, eps^2)`-net into an `(eps^2, eps^4)`-net.
//!
//! Diffusion multiplies ordered `M`-tuples of net points and keeps the
//! products that land within `eps^2` of the identity; no inverse gates are
//! needed. The commutator method forms `T1 T2 T1^-1 T2^-1` from ordered pairs
//! and needs a gate set that carries inverses. Both then add cyclic
//! rotations of the survivors, deduplicate and subsample to the required
//! density.

mod augment;
mod diffusivity;
mod tuples;
mod walk;

pub use augment::{
    augment_by_materializing, augmented_count, materialize, rotation_orbits, subsample, Orbit,
};
pub use diffusivity::{
    angular_statistics, diffusivity_report, haar_radial_cdf, ks_critical_value, ks_statistic,
    two_sample_ks, write_cloud_csv, AngularStatistics, DiffusivityOptions, DiffusivityReport,
};
pub use tuples::PreselectionStudy;
pub use walk::{expected_survivors, walk_cdf, walk_cdf_approx, walk_pdf, WalkApprox, WalkModel};

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{try_map_indexed, Execution};
use crate::gateset::{evaluate_word, GateSet, Word};
use crate::geometry::make_generator_basis;
use crate::nets::{required_point_count, EpsilonNet, NetPoint, DEFAULT_DENSITY_CONSTANT};

/// Default cap on the number of candidate tuples (`10^8`).
pub const DEFAULT_CANDIDATE_BUDGET: u64 = 100_000_000;

/// Survivors this close to the new radius are discarded so that rounding in
/// their rotations cannot push them outside.
const BOUNDARY_MARGIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShrinkMethod {
    Diffusion,
    Commutator,
}

impl ShrinkMethod {
    pub fn name(self) -> &'static str {
        match self {
            ShrinkMethod::Diffusion => "diffusion",
            ShrinkMethod::Commutator => "commutator",
        }
    }
}

impl fmt::Display for ShrinkMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ShrinkMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diffusion" => Ok(ShrinkMethod::Diffusion),
            "commutator" => Ok(ShrinkMethod::Commutator),
            _ => Err(Error::Domain(format!(
                "unknown shrink method `{s}` (expected diffusion or commutator)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ShrinkOptions {
    /// Tuple size `M` for diffusion.
    pub steps: usize,
    /// Size of the output net; defaults to `ceil(C / eps_out^d)`.
    pub target: Option<u64>,
    pub density_constant: f64,
    pub candidate_budget: u64,
    /// Each survivor contributes at most this many rotations (all when `None`).
    pub rotation_cap: Option<usize>,
    /// Commutator survivors satisfy `|r| < slack * eps^2`; must lie in `(0, 1]`.
    pub commutator_slack: f64,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for ShrinkOptions {
    fn default() -> Self {
        Self {
            steps: 3,
            target: None,
            density_constant: DEFAULT_DENSITY_CONSTANT,
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
            rotation_cap: None,
            commutator_slack: 1.0,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

/// Counts from one shrink step. Wall time is kept out of [`ShrinkReport::to_text`]
/// so that persisted reports are reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct ShrinkReport {
    pub method: ShrinkMethod,
    pub level: i32,
    pub radius_in: f64,
    pub radius_out: f64,
    pub steps: usize,
    pub base_points: u64,
    pub base_used: u64,
    pub estimate_mode: bool,
    pub candidates: u128,
    pub survivors: u64,
    pub boundary_dropped: u64,
    pub augmented: u64,
    pub target: u64,
    pub final_count: u64,
    /// Walk-model probability of landing within the new radius (diffusion only).
    pub predicted_fraction: Option<f64>,
    pub wall_time: Duration,
}

impl ShrinkReport {
    pub fn acceptance_fraction(&self) -> f64 {
        if self.candidates == 0 {
            0.0
        } else {
            self.survivors as f64 / self.candidates as f64
        }
    }

    /// Flat `key=value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "method={}", self.method);
        let _ = writeln!(s, "level={}", self.level);
        let _ = writeln!(s, "radius_in={:.17e}", self.radius_in);
        let _ = writeln!(s, "radius_out={:.17e}", self.radius_out);
        let _ = writeln!(s, "steps={}", self.steps);
        let _ = writeln!(s, "base_points={}", self.base_points);
        let _ = writeln!(s, "base_used={}", self.base_used);
        let _ = writeln!(s, "estimate_mode={}", self.estimate_mode);
        let _ = writeln!(s, "candidates={}", self.candidates);
        let _ = writeln!(s, "survivors={}", self.survivors);
        let _ = writeln!(s, "boundary_dropped={}", self.boundary_dropped);
        let _ = writeln!(s, "acceptance_fraction={:.6e}", self.acceptance_fraction());
        match self.predicted_fraction {
            Some(p) => {
                let _ = writeln!(s, "predicted_fraction={p:.6e}");
            }
            None => s.push_str("predicted_fraction=none\n"),
        }
        let _ = writeln!(s, "augmented={}", self.augmented);
        let _ = writeln!(s, "target={}", self.target);
        let _ = writeln!(s, "final={}", self.final_count);
        s
    }
}

impl fmt::Display for ShrinkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())?;
        writeln!(f, "wall_time_ms={}", self.wall_time.as_millis())
    }
}

/// Dispatches on `method`.
pub fn shrink(
    net: &EpsilonNet,
    gs: &GateSet,
    method: ShrinkMethod,
    opts: &ShrinkOptions,
) -> Result<(EpsilonNet, ShrinkReport)> {
    match method {
        ShrinkMethod::Diffusion => shrink_diffusion(net, gs, opts),
        ShrinkMethod::Commutator => shrink_commutator(net, gs, opts),
    }
}

/// Ordered `M`-tuples of net points, post-selected on the exact product.
pub fn shrink_diffusion(
    net: &EpsilonNet,
    gs: &GateSet,
    opts: &ShrinkOptions,
) -> Result<(EpsilonNet, ShrinkReport)> {
    if opts.steps < 2 {
        return Err(Error::Domain(format!(
            "diffusion needs at least 2 steps, got {}",
            opts.steps
        )));
    }
    run(net, gs, ShrinkMethod::Diffusion, opts.steps, 1.0, opts)
}

/// Normal commutators of ordered pairs of net points.
pub fn shrink_commutator(
    net: &EpsilonNet,
    gs: &GateSet,
    opts: &ShrinkOptions,
) -> Result<(EpsilonNet, ShrinkReport)> {
    if !gs.includes_inverses() {
        return Err(Error::InversesUnavailable(gs.label().to_string()));
    }
    let c = opts.commutator_slack;
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::Domain(format!(
            "commutator slack must lie in (0, 1], got {c}"
        )));
    }
    run(net, gs, ShrinkMethod::Commutator, 2, c, opts)
}

fn run(
    net: &EpsilonNet,
    gs: &GateSet,
    method: ShrinkMethod,
    arity: usize,
    slack: f64,
    opts: &ShrinkOptions,
) -> Result<(EpsilonNet, ShrinkReport)> {
    let start = Instant::now();
    if net.level() < 0 {
        return Err(Error::Domain(
            "shrinking needs a ball (level >= 0), not the sampling net".into(),
        ));
    }
    if net.is_empty() {
        return Err(Error::EmptyNet(format!(
            "level-{} net has no points",
            net.level()
        )));
    }
    net.check_gate_set(gs)?;
    let eps = net.radius();
    let eps_out = eps * eps;
    let cut = slack * eps_out;
    let d = net.algebra_dim();
    let target = match opts.target {
        Some(t) => t,
        None => required_point_count(eps_out, d, opts.density_constant)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let k = net.len();
    let (base, estimate_mode) = budgeted_base(k, arity, opts.candidate_budget, &mut rng);
    let kb = base.len();
    let candidates = (kb as u128).pow(arity as u32);

    let survivors = match (method, net.qubit_matrices()) {
        (ShrinkMethod::Diffusion, Some(q)) => {
            let mats: Vec<_> = base.iter().map(|&i| q[i]).collect();
            tuples::diffusion_qubit(&mats, arity, cut, opts.exec)
        }
        (ShrinkMethod::Commutator, Some(q)) => {
            let mats: Vec<_> = base.iter().map(|&i| q[i]).collect();
            tuples::commutator_qubit(&mats, cut, opts.exec)
        }
        (_, None) => {
            let basis = make_generator_basis(net.dim())?;
            let mats: Vec<_> = base
                .iter()
                .map(|&i| net.points()[i].matrix.clone())
                .collect();
            if method == ShrinkMethod::Diffusion {
                tuples::diffusion_general(&mats, arity, cut, &basis, opts.exec)?
            } else {
                tuples::commutator_general(&mats, cut, &basis, opts.exec)?
            }
        }
    };
    let n_survivors = survivors.len() as u64;
    let kept: Vec<_> = survivors
        .into_iter()
        .filter(|s| s.distance < cut - BOUNDARY_MARGIN)
        .collect();
    let boundary_dropped = n_survivors - kept.len() as u64;

    let points = net.points();
    let inverses: Option<Vec<Word>> = if method == ShrinkMethod::Commutator {
        Some(
            base.iter()
                .map(|&i| points[i].word.inverse_in(gs))
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };
    let words: Vec<Word> = kept
        .iter()
        .map(|s| match &inverses {
            None => Word::join(s.idx.iter().map(|&i| &points[base[i as usize]].word)),
            Some(inv) => {
                let (a, b) = (s.idx[0] as usize, s.idx[1] as usize);
                Word::join([
                    &points[base[a]].word,
                    &points[base[b]].word,
                    &inv[a],
                    &inv[b],
                ])
            }
        })
        .collect();
    let word_len = net.word_len()
        * if method == ShrinkMethod::Commutator {
            4
        } else {
            arity
        };

    let orbits = rotation_orbits(&words, opts.rotation_cap);
    let augmented = augmented_count(&orbits);
    if augmented < target {
        return Err(Error::InsufficientDensity {
            available: augmented,
            target,
        });
    }
    let chosen = subsample(&orbits, target, &mut rng);

    let basis = make_generator_basis(gs.dim())?;
    let new_points = try_map_indexed(opts.exec, chosen.len(), |i| {
        let w = chosen[i].clone();
        let m = evaluate_word(gs, &w)?;
        let p = NetPoint::from_matrix(w, m, &basis)?;
        if p.radius < eps_out {
            Ok(p)
        } else {
            Err(Error::Numerical(format!(
                "rotated word drifted to |r| = {} outside {eps_out}",
                p.radius
            )))
        }
    })?;
    let final_count = new_points.len() as u64;
    let out = EpsilonNet::new(
        net.level() + 1,
        eps_out,
        word_len,
        net.fingerprint(),
        net.dim(),
        new_points,
    )?;

    let predicted_fraction = match method {
        ShrinkMethod::Diffusion => Some(walk_cdf(eps_out, &WalkModel::new(d, arity, eps)?)?),
        ShrinkMethod::Commutator => None,
    };
    let report = ShrinkReport {
        method,
        level: out.level(),
        radius_in: eps,
        radius_out: eps_out,
        steps: arity,
        base_points: k as u64,
        base_used: kb as u64,
        estimate_mode,
        candidates,
        survivors: n_survivors,
        boundary_dropped,
        augmented,
        target,
        final_count,
        predicted_fraction,
        wall_time: start.elapsed(),
    };
    Ok((out, report))
}

/// Indices of the base points to tuple. When `k^arity` exceeds the budget a
/// seeded subset of `floor(budget^{1/arity})` points is used instead.
fn budgeted_base(k: usize, arity: usize, budget: u64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let fits = |n: usize| {
        (n as u128)
            .checked_pow(arity as u32)
            .is_some_and(|c| c <= budget as u128)
    };
    if fits(k) {
        return ((0..k).collect(), false);
    }
    let mut n = (budget as f64).powf(1.0 / arity as f64).floor() as usize;
    while n > 0 && !fits(n) {
        n -= 1;
    }
    while fits(n + 1) {
        n += 1;
    }
    let n = n.clamp(1, k);
    let mut picks = index::sample(rng, k, n).into_vec();
    picks.sort_unstable();
    (picks, true)
}

/// Compares vector-sum pre-selection `|r1 + r2 + r3| < eps^2` with exact
/// post-selection over all ordered triples of a qubit net.
pub fn preselection_study(net: &EpsilonNet, exec: Execution) -> Result<PreselectionStudy> {
    let q = net
        .qubit_matrices()
        .ok_or(Error::UnsupportedDimension(net.dim()))?;
    let vecs: Vec<[f64; 3]> = net
        .points()
        .iter()
        .map(|p| {
            let c = p.vector.components();
            [c[0], c[1], c[2]]
        })
        .collect();
    Ok(tuples::preselection_qubit(q, &vecs, net.resolution(), exec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateset::standard_diffusive_set;
    use crate::nets::{build_sampling_net, select_ball};

    fn small_ball() -> (GateSet, EpsilonNet) {
        let gs = standard_diffusive_set().unwrap();
        let ball = select_ball(&build_sampling_net(&gs, 12).unwrap(), 0.5).unwrap();
        (gs, ball)
    }

    #[test]
    fn diffusion_counts_and_soundness() {
        let (gs, ball) = small_ball();
        let k = ball.len() as u128;
        let opts = ShrinkOptions {
            target: Some(50),
            ..Default::default()
        };
        let (net, rep) = shrink_diffusion(&ball, &gs, &opts).unwrap();
        assert_eq!(rep.candidates, k * k * k);
        assert!(rep.survivors as u128 <= rep.candidates);
        assert!(rep.final_count <= rep.augmented);
        assert_eq!(rep.final_count, 50);
        assert_eq!(net.level(), 1);
        assert_eq!(net.word_len(), 36);
        assert!((net.radius() - 0.25).abs() < 1e-15);
        for p in net.points() {
            let d = crate::geometry::distance_from_identity(&evaluate_word(&gs, &p.word).unwrap())
                .unwrap();
            assert!(d < 0.25);
        }
    }

    #[test]
    fn identity_base_point() {
        let gs = standard_diffusive_set().unwrap().augment_with_inverses();
        let w = Word::new(vec![0, 2]);
        let base = EpsilonNet::from_words(&gs, 0, 0.3, 2, vec![w]).unwrap();
        assert!(base.points()[0].radius < 1e-15);
        let opts = ShrinkOptions {
            target: Some(1),
            ..Default::default()
        };
        let (net, rep) = shrink_diffusion(&base, &gs, &opts).unwrap();
        assert_eq!((rep.candidates, rep.survivors, rep.final_count), (1, 1, 1));
        assert!(net.points()[0].radius < 1e-15);
        let (net, rep) = shrink_commutator(&base, &gs, &opts).unwrap();
        assert_eq!((rep.candidates, rep.survivors), (1, 1));
        assert_eq!(net.word_len(), 8);
    }

    #[test]
    fn insufficient_density_reports_shortfall() {
        let (gs, ball) = small_ball();
        let opts = ShrinkOptions {
            target: Some(u64::MAX / 2),
            ..Default::default()
        };
        match shrink_diffusion(&ball, &gs, &opts) {
            Err(Error::InsufficientDensity { available, target }) => assert!(available < target),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn commutator_requires_inverses() {
        let (gs, ball) = small_ball();
        assert!(matches!(
            shrink_commutator(&ball, &gs, &ShrinkOptions::default()),
            Err(Error::InversesUnavailable(_))
        ));
    }

    #[test]
    fn budget_subsamples_base() {
        let (gs, ball) = small_ball();
        let opts = ShrinkOptions {
            target: Some(1),
            candidate_budget: 1000,
            ..Default::default()
        };
        let (_, rep) = shrink_diffusion(&ball, &gs, &opts).unwrap();
        assert!(rep.estimate_mode);
        assert_eq!(rep.base_used, 10);
        assert_eq!(rep.candidates, 1000);
    }

    #[test]
    fn deterministic_across_execution_modes() {
        let (gs, ball) = small_ball();
        let seq = ShrinkOptions {
            target: Some(200),
            exec: Execution::Sequential,
            seed: 4,
            ..Default::default()
        };
        let par = ShrinkOptions {
            exec: Execution::Parallel,
            ..seq.clone()
        };
        let (a, ra) = shrink_diffusion(&ball, &gs, &seq).unwrap();
        let (b, rb) = shrink_diffusion(&ball, &gs, &par).unwrap();
        assert_eq!(a, b);
        assert_eq!(ra.to_text(), rb.to_text());
    }

    #[test]
    fn report_text_has_no_timing() {
        let (gs, ball) = small_ball();
        let (_, rep) = shrink_diffusion(
            &ball,
            &gs,
            &ShrinkOptions {
                target: Some(5),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!rep.to_text().contains("wall_time"));
        assert!(rep.to_string().contains("wall_time_ms="));
        assert!(rep.to_text().lines().all(|l| l.contains('=')));
    }

    #[test]
    fn method_names() {
        assert_eq!(
            "diffusion".parse::<ShrinkMethod>().unwrap(),
            ShrinkMethod::Diffusion
        );
        assert_eq!(
            "commutator".parse::<ShrinkMethod>().unwrap(),
            ShrinkMethod::Commutator
        );
        assert!("other".parse::<ShrinkMethod>().is_err());
    }
}
