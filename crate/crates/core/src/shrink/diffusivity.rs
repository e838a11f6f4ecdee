//! How uniformly moderate-length words cover the group.
//!
//! Two ingredients: the Kolmogorov-Smirnov distance between the radial
//! distribution `|r|` of the words and that of Haar-random unitaries, and
//! the mean and variance of pairwise dot products of the unit directions
//! `r / |r|` (isotropic points give mean 0 and variance `1/d`). The score is
//! `q_r * q_a` with `q_r = 1 - KS` and
//! `q_a = (1 - |mean|) (1 - |var - 1/d| / (1 - 1/d))`, clamped to `[0, 1]`.

use std::fmt::Write as _;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exec::{map_indexed, try_map_indexed, Execution};
use crate::gateset::{evaluate_word, GateSet, Word};
use crate::geometry::{make_generator_basis, sample_haar_with, unitary_to_vector, SuVector};
use crate::nets::{build_sampling_net_with, SamplingOptions};

const HISTOGRAM_BINS: usize = 20;

#[derive(Clone, Debug)]
pub struct DiffusivityOptions {
    pub word_len: usize,
    /// Number of random words; all words are used when `m^L` does not exceed it.
    pub sample: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for DiffusivityOptions {
    fn default() -> Self {
        Self {
            word_len: 17,
            sample: 1 << 17,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularStatistics {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub expected_variance: f64,
}

#[derive(Clone, Debug)]
pub struct DiffusivityReport {
    pub label: String,
    pub word_len: usize,
    pub exhaustive: bool,
    pub points: Vec<SuVector>,
    pub radial_ks: f64,
    pub ks_critical_1pct: f64,
    /// `(upper bin edge, observed fraction, Haar fraction)` over `|r|`.
    pub radial_histogram: Vec<(f64, f64, f64)>,
    pub angular: AngularStatistics,
    pub radial_quality: f64,
    pub angular_quality: f64,
    pub score: f64,
}

impl DiffusivityReport {
    /// Flat `key=value` summary followed by the histogram rows.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "gate_set={}", self.label);
        let _ = writeln!(s, "word_len={}", self.word_len);
        let _ = writeln!(s, "points={}", self.points.len());
        let _ = writeln!(s, "exhaustive={}", self.exhaustive);
        let _ = writeln!(s, "radial_ks={:.6e}", self.radial_ks);
        let _ = writeln!(s, "ks_critical_1pct={:.6e}", self.ks_critical_1pct);
        let _ = writeln!(s, "angular_mean={:.6e}", self.angular.mean);
        let _ = writeln!(s, "angular_variance={:.6e}", self.angular.variance);
        let _ = writeln!(
            s,
            "angular_expected_variance={:.6e}",
            self.angular.expected_variance
        );
        let _ = writeln!(s, "radial_quality={:.6}", self.radial_quality);
        let _ = writeln!(s, "angular_quality={:.6}", self.angular_quality);
        let _ = writeln!(s, "score={:.6}", self.score);
        for (edge, obs, haar) in &self.radial_histogram {
            let _ = writeln!(s, "hist_upper={edge:.6} observed={obs:.6} haar={haar:.6}");
        }
        s
    }
}

/// Haar CDF of `|r|` on `PU(2)`: `(w - sin w) / pi` with `w = sqrt(2) |r|`.
pub fn haar_radial_cdf(r: f64) -> f64 {
    let w = (std::f64::consts::SQRT_2 * r).clamp(0.0, std::f64::consts::PI);
    (w - w.sin()) / std::f64::consts::PI
}

/// One-sample KS statistic `sup |F_n - F|`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut x = samples.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    x.iter().enumerate().fold(0.0, |m, (i, &v)| {
        let f = cdf(v);
        m.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    })
}

/// Two-sample KS statistic.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value `sqrt(-ln(alpha / 2) / 2) / sqrt(n_eff)`.
pub fn ks_critical_value(n_eff: f64, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / n_eff.sqrt()
}

/// Exact mean and variance of `u_i . u_j` over all ordered pairs `i != j` of
/// unit directions, from `S = sum u_i` and `T = sum u_i u_i^T`. Zero vectors
/// are skipped.
pub fn angular_statistics(points: &[SuVector]) -> AngularStatistics {
    let d = points.first().map_or(3, SuVector::dim);
    let mut s = vec![0.0; d];
    let mut t = vec![0.0; d * d];
    let mut n = 0usize;
    for p in points {
        let norm = p.norm();
        if norm < 1e-15 {
            continue;
        }
        n += 1;
        let u: Vec<f64> = p.components().iter().map(|x| x / norm).collect();
        for a in 0..d {
            s[a] += u[a];
            for b in 0..d {
                t[a * d + b] += u[a] * u[b];
            }
        }
    }
    let expected_variance = 1.0 / d as f64;
    if n < 2 {
        return AngularStatistics {
            count: n,
            mean: 1.0,
            variance: 0.0,
            expected_variance,
        };
    }
    let pairs = n as f64 * (n as f64 - 1.0);
    let s2: f64 = s.iter().map(|x| x * x).sum();
    let t2: f64 = t.iter().map(|x| x * x).sum();
    let mean = (s2 - n as f64) / pairs;
    let second = (t2 - n as f64) / pairs;
    AngularStatistics {
        count: n,
        mean,
        variance: (second - mean * mean).max(0.0),
        expected_variance,
    }
}

pub fn diffusivity_report(gs: &GateSet, opts: &DiffusivityOptions) -> Result<DiffusivityReport> {
    let m = gs.len();
    let total = (m as u128)
        .checked_pow(opts.word_len as u32)
        .unwrap_or(u128::MAX);
    let exhaustive = total <= opts.sample as u128;
    let points: Vec<SuVector> = if exhaustive {
        let sopts = SamplingOptions {
            cap: opts.sample as u64,
            alphabet: None,
            exec: opts.exec,
        };
        build_sampling_net_with(gs, opts.word_len, &sopts)?
            .points()
            .iter()
            .map(|p| p.vector.clone())
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let words: Vec<Word> = (0..opts.sample)
            .map(|_| {
                Word::new(
                    (0..opts.word_len)
                        .map(|_| rng.random_range(0..m) as u8)
                        .collect(),
                )
            })
            .collect();
        if let Some(q) = gs.qubit_gates() {
            map_indexed(opts.exec, words.len(), |i| {
                SuVector::from(crate::gateset::evaluate_qubit(q, words[i].indices()).vector())
            })
        } else {
            let basis = make_generator_basis(gs.dim())?;
            try_map_indexed(opts.exec, words.len(), |i| {
                unitary_to_vector(&evaluate_word(gs, &words[i])?, &basis)
            })?
        }
    };
    let radii: Vec<f64> = points.iter().map(SuVector::norm).collect();
    let n = radii.len() as f64;

    let (radial_ks, ks_critical_1pct, reference): (f64, f64, Box<dyn Fn(f64) -> f64>) = if gs.dim()
        == 2
    {
        (
            ks_statistic(&radii, haar_radial_cdf),
            ks_critical_value(n, 0.01),
            Box::new(haar_radial_cdf),
        )
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
        let basis = make_generator_basis(gs.dim())?;
        let count = radii.len().clamp(1, 20_000);
        let mut haar = Vec::with_capacity(count);
        for _ in 0..count {
            haar.push(unitary_to_vector(&sample_haar_with(gs.dim(), &mut rng)?, &basis)?.norm());
        }
        haar.sort_by(f64::total_cmp);
        let nh = haar.len() as f64;
        let ks = two_sample_ks(&radii, &haar);
        let crit = ks_critical_value(n * nh / (n + nh), 0.01);
        let cdf = move |r: f64| haar.partition_point(|&h| h <= r) as f64 / nh;
        (ks, crit, Box::new(cdf))
    };

    let r_max = radii.iter().copied().fold(0.0, f64::max).max(1e-12);
    let mut counts = vec![0usize; HISTOGRAM_BINS];
    for &r in &radii {
        let b = ((r / r_max) * HISTOGRAM_BINS as f64) as usize;
        counts[b.min(HISTOGRAM_BINS - 1)] += 1;
    }
    let radial_histogram = (0..HISTOGRAM_BINS)
        .map(|b| {
            let lo = r_max * b as f64 / HISTOGRAM_BINS as f64;
            let hi = r_max * (b + 1) as f64 / HISTOGRAM_BINS as f64;
            (hi, counts[b] as f64 / n, reference(hi) - reference(lo))
        })
        .collect();

    let angular = angular_statistics(&points);
    let d = gs.dim() * gs.dim() - 1;
    let inv_d = 1.0 / d as f64;
    let radial_quality = (1.0 - radial_ks).clamp(0.0, 1.0);
    let angular_quality = ((1.0 - angular.mean.abs())
        * (1.0 - (angular.variance - inv_d).abs() / (1.0 - inv_d)))
        .clamp(0.0, 1.0);
    Ok(DiffusivityReport {
        label: gs.label().to_string(),
        word_len: opts.word_len,
        exhaustive,
        points,
        radial_ks,
        ks_critical_1pct,
        radial_histogram,
        angular,
        radial_quality,
        angular_quality,
        score: radial_quality * angular_quality,
    })
}

/// One vector per line, comma-separated, 17 significant digits.
pub fn write_cloud_csv<W: Write>(points: &[SuVector], mut out: W) -> std::io::Result<()> {
    let mut line = String::new();
    for p in points {
        line.clear();
        for (i, x) in p.components().iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            let _ = write!(line, "{x:.16e}");
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}
