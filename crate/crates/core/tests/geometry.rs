use std::f64::consts::PI;

use diffuse_core::geometry::{
    distance_d, distance_df, fold_threshold, fold_vector, make_generator_basis,
    sample_haar_unitary, sample_haar_with, unitary_to_vector, vector_to_unitary, Complex64,
    GeneratorBasis, SuVector,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn qubit_basis() -> GeneratorBasis {
    make_generator_basis(2).unwrap()
}

/// Uniform direction times a fixed norm.
fn on_sphere(rng: &mut impl Rng, d: usize, norm: f64) -> SuVector {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return SuVector::new(v.iter().map(|x| x * norm / n).collect());
        }
    }
}

fn in_ball(rng: &mut impl Rng, d: usize, radius: f64) -> SuVector {
    let s: f64 = rng.random_range(0.0f64..1.0).powf(1.0 / d as f64);
    on_sphere(rng, d, radius * s)
}

fn vector_strategy(max_norm: f64) -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-max_norm..max_norm).prop_filter("inside ball", move |v| {
        (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() < max_norm
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn round_trip_below_fold_threshold(v in vector_strategy(2.2)) {
        let basis = qubit_basis();
        let r = SuVector::from(v);
        let back = unitary_to_vector(&vector_to_unitary(&r, &basis).unwrap(), &basis).unwrap();
        prop_assert!(back.distance(&r) < 1e-10, "{:?} -> {:?}", r, back);
    }

    #[test]
    fn global_phase_is_ignored(v in vector_strategy(3.0), phi in -PI..PI) {
        let basis = qubit_basis();
        let u = vector_to_unitary(&SuVector::from(v), &basis).unwrap();
        let a = unitary_to_vector(&u, &basis).unwrap();
        let b = unitary_to_vector(&u.scaled(Complex64::from_polar(1.0, phi)), &basis).unwrap();
        prop_assert!(a.distance(&b) < 1e-10);
    }

    #[test]
    fn fold_is_idempotent(v in vector_strategy(2.0 * PI / std::f64::consts::SQRT_2)) {
        let r = SuVector::from(v);
        let once = fold_vector(&r, 2).unwrap();
        let twice = fold_vector(&once, 2).unwrap();
        prop_assert!(once.norm() <= fold_threshold(2).unwrap() + 1e-12);
        prop_assert!(once.distance(&twice) < 1e-15);
    }

    #[test]
    fn distances_are_symmetric(a in any::<u64>(), b in any::<u64>()) {
        let u1 = sample_haar_unitary(2, a).unwrap();
        let u2 = sample_haar_unitary(2, b).unwrap();
        prop_assert!((distance_d(&u1, &u2).unwrap() - distance_d(&u2, &u1).unwrap()).abs() < 1e-10);
        prop_assert!((distance_df(&u1, &u2).unwrap() - distance_df(&u2, &u1).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn qutrit_and_two_qubit_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [3usize, 4] {
        let basis = make_generator_basis(n).unwrap();
        for _ in 0..50 {
            let r = in_ball(&mut rng, n * n - 1, 1.0);
            let back = unitary_to_vector(&vector_to_unitary(&r, &basis).unwrap(), &basis).unwrap();
            assert!(back.distance(&r) < 1e-10, "N={n}");
        }
    }
}

#[test]
fn minus_identity_is_the_origin() {
    let basis = qubit_basis();
    let minus =
        diffuse_core::geometry::UnitaryMatrix::identity(2).scaled(Complex64::new(-1.0, 0.0));
    assert!(unitary_to_vector(&minus, &basis).unwrap().norm() <= 1e-6);
}

/// Worst-case `|r(U1 U2) - r1 - r2|` over random pairs with `|r_i| = eps`.
fn worst_bch_deviation(eps: f64, pairs: usize, seed: u64) -> f64 {
    let basis = qubit_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let r1 = on_sphere(&mut rng, 3, eps);
        let r2 = on_sphere(&mut rng, 3, eps);
        let u = vector_to_unitary(&r1, &basis)
            .unwrap()
            .try_mul(&vector_to_unitary(&r2, &basis).unwrap())
            .unwrap();
        let r = unitary_to_vector(&u, &basis).unwrap();
        worst = worst.max(r.sub(&r1.add(&r2)).norm());
    }
    worst
}

#[test]
fn bch_deviation_scales_quadratically() {
    let eps = [0.2, 0.1, 0.05];
    let worst: Vec<f64> = eps
        .iter()
        .map(|&e| worst_bch_deviation(e, 4000, 11))
        .collect();
    let c: Vec<f64> = worst.iter().zip(&eps).map(|(w, e)| w / (e * e)).collect();
    // The leading term is |r1 x r2| / sqrt2, at most eps^2 / sqrt2.
    for k in &c {
        assert!((k - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.02, "{c:?}");
    }
    let c_max = c.iter().cloned().fold(0.0, f64::max);
    for (w, e) in worst.iter().zip(&eps) {
        assert!(*w <= c_max * e * e * (1.0 + 1e-12));
    }
    for pair in worst.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((3.0..=5.5).contains(&ratio), "halving ratio {ratio}");
    }
}

#[test]
fn df_over_d_is_calibrated_at_small_distances() {
    let basis = qubit_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..2000 {
        let u1 = sample_haar_with(2, &mut rng).unwrap();
        let step = vector_to_unitary(&in_ball(&mut rng, 3, 0.1), &basis).unwrap();
        let u2 = u1.try_mul(&step).unwrap();
        let d = distance_d(&u1, &u2).unwrap();
        if d < 1e-6 || d >= 0.1 {
            continue;
        }
        let ratio = distance_df(&u1, &u2).unwrap() / d;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    println!("d_F / D in [{lo}, {hi}]");
    assert!(lo >= 0.3 && hi <= 0.6);
    // d_F = sqrt2 sin(t/2) and D = sqrt2 t, so the ratio tends to 1/2.
    assert!((lo - 0.5).abs() < 1e-3 && (hi - 0.5).abs() < 1e-3);
}
