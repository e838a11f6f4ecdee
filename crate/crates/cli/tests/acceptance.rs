//! End-to-end acceptance checks. Each criterion prints one `PASS` or `FAIL`
//! line with the measured values; the test fails if any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use diffuse_cli::commands::{benchmark_csv, build_stack, run_benchmark, BenchRow};
use diffuse_cli::RunConfig;
use diffuse_core::exec::with_threads;
use diffuse_core::gateset::{
    clifford_t_set, cyclic_shifts, evaluate_word, integer_to_word, standard_diffusive_set,
};
use diffuse_core::geometry::{
    distance_from_identity, fold_vector, make_generator_basis, unitary_to_vector,
    vector_to_unitary, Complex64, SuVector, UnitaryMatrix,
};
use diffuse_core::nets::required_point_count;
use diffuse_core::shrink::{
    diffusivity_report, preselection_study, walk_cdf, walk_cdf_approx, DiffusivityOptions,
    ShrinkMethod, WalkModel,
};
use diffuse_core::Execution;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(results: &mut Vec<(usize, bool)>, n: usize, title: &str, o: Outcome) {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("criterion {n} [{tag}] {title}: {}", o.detail);
    results.push((n, o.pass));
}

fn default_config() -> RunConfig {
    RunConfig {
        output: std::env::temp_dir(),
        ..RunConfig::default()
    }
}

fn criterion_1() -> Outcome {
    let cfg = default_config();
    let start = Instant::now();
    let (stack, summary) = build_stack(&cfg, ShrinkMethod::Diffusion).unwrap();
    let elapsed = start.elapsed();
    let rep = &summary.reports[0];
    let required = required_point_count(0.09, 3, 8.0).unwrap();
    let pass = stack.sampling().len() == 65536
        && (80..=250).contains(&summary.ball_points)
        && rep.augmented >= required
        && required == 10974
        && stack.levels()[1].len() as u64 == required
        && elapsed <= Duration::from_secs(300);
    Outcome {
        pass,
        detail: format!(
            "sampling={} ball={} (80..=250) survivors={} augmented={} required={} final={} build={:.2}s (<= 300s)",
            stack.sampling().len(),
            summary.ball_points,
            rep.survivors,
            rep.augmented,
            required,
            stack.levels()[1].len(),
            elapsed.as_secs_f64()
        ),
    }
}

fn criterion_2() -> Outcome {
    let cfg = default_config();
    let (_, summary) = build_stack(&cfg, ShrinkMethod::Diffusion).unwrap();
    let rep = &summary.reports[0];
    let model = WalkModel::new(3, 3, 0.3).unwrap();
    let predicted = walk_cdf(0.09, &model).unwrap();
    let fraction = rep.acceptance_fraction();
    let ratio = fraction / predicted;
    let within = (0.5..=2.0).contains(&ratio);
    let approx = walk_cdf_approx(0.3, &model).unwrap();
    let printed = format!("{:.2e}", approx.printed);
    let exact = format!("{:.2e}", approx.exact_small_r);
    let digits = printed == "2.15e-2" && exact == "7.18e-3";
    let symbolic = (approx.printed / approx.exact_small_r - 3.0).abs() < 1e-12;
    Outcome {
        pass: within && digits && symbolic,
        detail: format!(
            "fraction={fraction:.4e} ({}/{}) predicted={predicted:.4e} ratio={ratio:.3} (within factor 2: {within}); \
             printed={printed} exact_small_r={exact} (3 digits: {digits}) ratio={:.12} (= d: {symbolic})",
            rep.survivors,
            rep.candidates,
            approx.printed / approx.exact_small_r
        ),
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn criterion_3(rows: &[BenchRow]) -> Outcome {
    let r16: Vec<&BenchRow> = rows
        .iter()
        .filter(|r| r.method == ShrinkMethod::Diffusion && r.r == 16)
        .collect();
    let dfs: Vec<f64> = r16.iter().map(|r| r.df).collect();
    let good = dfs.iter().filter(|&&x| x < 2e-2).count();
    let med = median(dfs.clone());
    let diffusion: Vec<&BenchRow> = rows
        .iter()
        .filter(|r| r.method == ShrinkMethod::Diffusion)
        .collect();
    let lengths_ok = diffusion.iter().all(|r| r.length == 4 * r.r);
    let mut lengths: Vec<usize> = diffusion.iter().map(|r| r.length).collect();
    lengths.dedup();
    Outcome {
        pass: r16.len() == 7 && good >= 6 && med < 1.5e-2 && lengths_ok,
        detail: format!(
            "r=16 d_F={:?} below 2e-2: {good}/7 (>= 6) median={med:.3e} (< 1.5e-2); diffusion lengths {lengths:?} = 4r: {lengths_ok}",
            dfs.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>()
        ),
    }
}

fn criterion_4() -> Outcome {
    let cfg = default_config();
    let (dstack, dsum) = build_stack(&cfg, ShrinkMethod::Diffusion).unwrap();
    let (cstack, csum) = build_stack(&cfg, ShrinkMethod::Commutator).unwrap();
    let k = dsum.ball_points as u128;
    let counts = csum.ball_points as u128 == k
        && dsum.reports[0].candidates == k * k * k
        && csum.reports[0].candidates == k * k;
    let lens = dstack.levels()[1].word_len() == 3 * 16 && cstack.levels()[1].word_len() == 4 * 16;

    let two = RunConfig {
        levels: 2,
        target_count: Some(200),
        budget: 10_000_000,
        ..default_config()
    };
    let (d2, _) = build_stack(&two, ShrinkMethod::Diffusion).unwrap();
    let (c2, _) = build_stack(&two, ShrinkMethod::Commutator).unwrap();
    let ed = d2.length_exponent().unwrap();
    let ec = c2.length_exponent().unwrap();
    let target_d = 3f64.ln() / 2f64.ln();
    let exps = (ed - target_d).abs() < 1e-12 && (ec - 2.0).abs() < 1e-12;
    Outcome {
        pass: counts && lens && exps,
        detail: format!(
            "K={k} diffusion candidates={} (K^3) commutator candidates={} (K^2); level word lengths {} (3x16) and {} (4x16); \
             two-level exponents diffusion={ed:.15} (log3/log2={target_d:.15}) commutator={ec:.15} (2)",
            dsum.reports[0].candidates,
            csum.reports[0].candidates,
            dstack.levels()[1].word_len(),
            cstack.levels()[1].word_len()
        ),
    }
}

fn on_sphere(rng: &mut impl Rng, norm: f64) -> SuVector {
    loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return SuVector::from(v.map(|x| x * norm / n));
        }
    }
}

fn in_ball(rng: &mut impl Rng, radius: f64) -> SuVector {
    let s: f64 = rng.random_range(0.0f64..1.0).cbrt();
    on_sphere(rng, radius * s)
}

fn bch_window() -> (bool, String) {
    let basis = make_generator_basis(2).unwrap();
    let mut worst = Vec::new();
    for eps in [0.2, 0.1, 0.05] {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut w = 0.0f64;
        for _ in 0..4000 {
            let r1 = on_sphere(&mut rng, eps);
            let r2 = on_sphere(&mut rng, eps);
            let u = vector_to_unitary(&r1, &basis)
                .unwrap()
                .try_mul(&vector_to_unitary(&r2, &basis).unwrap())
                .unwrap();
            let r = unitary_to_vector(&u, &basis).unwrap();
            w = w.max(r.sub(&r1.add(&r2)).norm());
        }
        worst.push(w);
    }
    let ratios = [worst[0] / worst[1], worst[1] / worst[2]];
    let ok = ratios.iter().all(|r| (3.0..=5.5).contains(r));
    (
        ok,
        format!("bch halving ratios {:.3}/{:.3}", ratios[0], ratios[1]),
    )
}

fn cyclic_invariance() -> (bool, String) {
    let gs = standard_diffusive_set().unwrap();
    let mut worst = 0.0f64;
    for len in 1..=8usize {
        for k in 0..(1usize << len) {
            let w = integer_to_word(&BigUint::from(k), len, 2).unwrap();
            let d = distance_from_identity(&evaluate_word(&gs, &w).unwrap()).unwrap();
            for s in cyclic_shifts(&w).unwrap() {
                let ds = distance_from_identity(&evaluate_word(&gs, &s).unwrap()).unwrap();
                worst = worst.max((ds - d).abs());
            }
        }
    }
    (worst <= 1e-10, format!("cyclic max dev {worst:.1e}"))
}

fn round_trip_and_fold() -> (bool, String) {
    let basis = make_generator_basis(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let threshold = PI / SQRT_2;
    let (mut rt, mut fold_dev) = (0.0f64, 0.0f64);
    for _ in 0..2000 {
        let r = in_ball(&mut rng, threshold * 0.999);
        let back = unitary_to_vector(&vector_to_unitary(&r, &basis).unwrap(), &basis).unwrap();
        rt = rt.max(back.distance(&r));
        let big = in_ball(&mut rng, 2.0 * threshold);
        let once = fold_vector(&big, 2).unwrap();
        fold_dev = fold_dev.max(fold_vector(&once, 2).unwrap().distance(&once));
    }
    let minus = UnitaryMatrix::identity(2).scaled(Complex64::new(-1.0, 0.0));
    let origin = unitary_to_vector(&minus, &basis).unwrap().norm();
    let ok = rt <= 1e-10 && fold_dev == 0.0 && origin <= 1e-6;
    (
        ok,
        format!("round trip {rt:.1e}, fold idempotence dev {fold_dev:.1e}, |r(-I)|={origin:.1e}"),
    )
}

fn commutator_shrinkage() -> (bool, String) {
    let basis = make_generator_basis(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let eps = 0.1;
    let mut ds: Vec<f64> = (0..10_000)
        .map(|_| {
            let a = vector_to_unitary(&in_ball(&mut rng, eps), &basis).unwrap();
            let b = vector_to_unitary(&in_ball(&mut rng, eps), &basis).unwrap();
            let c = a
                .try_mul(&b)
                .unwrap()
                .try_mul(&a.adjoint())
                .unwrap()
                .try_mul(&b.adjoint())
                .unwrap();
            distance_from_identity(&c).unwrap()
        })
        .collect();
    ds.sort_by(f64::total_cmp);
    let p99 = ds[(0.99 * ds.len() as f64) as usize - 1];
    (
        p99 <= 4.0 * eps * eps,
        format!("commutator p99 {p99:.3e} (<= {:.0e})", 4.0 * eps * eps),
    )
}

fn preselection() -> (bool, String) {
    let cfg = default_config();
    let gs = standard_diffusive_set().unwrap();
    let sampling = diffuse_core::nets::build_sampling_net(&gs, cfg.length).unwrap();
    let ball = diffuse_core::nets::select_ball(&sampling, cfg.eps_s).unwrap();
    let study = preselection_study(&ball, Execution::Parallel).unwrap();
    let rate = study.disagreement_rate();
    (
        rate <= 0.15,
        format!("pre/post disagreement {rate:.4} (<= 0.15)"),
    )
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

fn determinism(first_csv: &str) -> (bool, String) {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = default_config();
    let save = |threads: usize, name: &str| {
        let dir = tmp.path().join(name);
        let (stack, summary) = with_threads(threads, || build_stack(&cfg, cfg.method).unwrap());
        stack.save(&dir).unwrap();
        (dir_bytes(&dir), summary.to_text())
    };
    let a = save(1, "a");
    let b = save(4, "b");
    let build_same = a == b;
    let again = benchmark_csv(&run_benchmark(&cfg).unwrap());
    let bench_same = again == first_csv;
    (
        build_same && bench_same,
        format!("build reruns identical: {build_same}, benchmark reruns identical: {bench_same}"),
    )
}

fn criterion_5(first_csv: &str) -> Outcome {
    let start = Instant::now();
    let checks = [
        bch_window(),
        cyclic_invariance(),
        round_trip_and_fold(),
        commutator_shrinkage(),
        preselection(),
        determinism(first_csv),
    ];
    let elapsed = start.elapsed();
    let pass = checks.iter().all(|c| c.0) && elapsed < Duration::from_secs(60);
    let detail: Vec<&str> = checks.iter().map(|c| c.1.as_str()).collect();
    Outcome {
        pass,
        detail: format!(
            "{}; suite time {:.1}s (< 60s)",
            detail.join("; "),
            elapsed.as_secs_f64()
        ),
    }
}

fn criterion_6() -> Outcome {
    let standard = standard_diffusive_set().unwrap();
    let bare = clifford_t_set().unwrap();
    let mut wins = 0;
    let mut margins = Vec::new();
    for seed in 0..10 {
        let opts = DiffusivityOptions {
            word_len: 17,
            sample: 1 << 16,
            seed,
            exec: Execution::Parallel,
        };
        let a = diffusivity_report(&standard, &opts).unwrap();
        let b = diffusivity_report(&bare, &opts).unwrap();
        assert!(!a.exhaustive && !b.exhaustive);
        if a.score > b.score {
            wins += 1;
        }
        margins.push(format!("{:.3}>{:.3}", a.score, b.score));
    }
    Outcome {
        pass: wins == 10,
        detail: format!(
            "standard beats bare H,T in {wins}/10 seeded trials at L=17 [{}]",
            margins.join(" ")
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let cfg = default_config();
    let rows = run_benchmark(&cfg).unwrap();
    let csv = benchmark_csv(&rows);

    let mut results = Vec::new();
    report(&mut results, 1, "net sizes", criterion_1());
    report(&mut results, 2, "walk statistics", criterion_2());
    report(&mut results, 3, "benchmark accuracy", criterion_3(&rows));
    report(&mut results, 4, "method comparison", criterion_4());
    report(&mut results, 5, "property suites", criterion_5(&csv));
    report(&mut results, 6, "diagnostics discrimination", criterion_6());

    let failed: Vec<usize> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    println!(
        "acceptance summary: {}/{} criteria pass",
        results.len() - failed.len(),
        results.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
