use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::UnitaryMatrix;
use crate::error::{Error, Result};

/// Haar-distributed `N x N` unitary, deterministic in `seed`.
pub fn sample_haar_unitary(n: usize, seed: u64) -> Result<UnitaryMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_haar_with(n, &mut rng)
}

/// QR of a complex Ginibre matrix with the phases of `diag(R)` moved into `Q`,
/// which makes the law of `Q` exactly Haar.
pub fn sample_haar_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let z = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = sample_haar_unitary(2, 42).unwrap();
        let b = sample_haar_unitary(2, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_haar_unitary(2, 43).unwrap());
    }

    #[test]
    fn output_is_unitary() {
        for n in 2..6 {
            let u = sample_haar_unitary(n, n as u64).unwrap();
            assert!(u.unitarity_deviation() <= 1e-10);
        }
    }

    #[test]
    fn second_trace_moment() {
        // Haar: E|Tr U|^2 = 1 on U(N).
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10_000;
        let mean = (0..n)
            .map(|_| sample_haar_with(2, &mut rng).unwrap().trace().norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0).abs() < 0.05, "mean |Tr U|^2 = {mean}");
    }

    #[test]
    fn rejects_tiny_dimension() {
        assert!(sample_haar_unitary(1, 0).is_err());
    }
}
