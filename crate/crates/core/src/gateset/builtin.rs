use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::GateSet;
use crate::error::{Error, Result};
use crate::geometry::{sample_haar_unitary, UnitaryMatrix};

/// Largest unitarity deviation accepted for a mixing matrix before polar
/// projection.
pub const MIXER_TOLERANCE: f64 = 1e-3;

pub fn hadamard() -> UnitaryMatrix {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    UnitaryMatrix::from_trusted(DMatrix::from_row_slice(2, 2, &[s, s, s, -s]))
}

/// `T = diag(1, e^{i pi/4})`.
pub fn t_gate() -> UnitaryMatrix {
    UnitaryMatrix::diagonal_phases(&[0.0, FRAC_PI_4])
}

/// Row-major entries of the published random mixer (5 decimals, hence only
/// approximately unitary).
pub fn reference_mixer_entries() -> [Complex64; 4] {
    [
        Complex64::new(-0.40194, -0.43507),
        Complex64::new(-0.36803, -0.71674),
        Complex64::new(0.36803, -0.71674),
        Complex64::new(-0.40194, 0.43507),
    ]
}

/// Where the mixing matrix `F` of a diffusive set comes from.
#[derive(Clone, Debug)]
pub enum MixerSource {
    /// A 2x2 matrix, projected to the nearest unitary.
    Matrix(DMatrix<Complex64>),
    /// A Haar-random `F` drawn from this seed.
    Seed(u64),
}

/// The pair `{H F, T F}` along with the mixer actually used.
#[derive(Clone, Debug)]
pub struct DiffusiveSet {
    pub gate_set: GateSet,
    pub mixer: UnitaryMatrix,
    /// Frobenius norm of the polar-projection correction applied to `F`.
    pub correction: f64,
}

pub fn make_diffusive_qubit_set(source: MixerSource) -> Result<DiffusiveSet> {
    let (mixer, correction, label) = match source {
        MixerSource::Matrix(f) => {
            if f.nrows() != 2 || f.ncols() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: f.nrows(),
                });
            }
            let deviation =
                crate::geometry::UnitaryMatrix::from_trusted(f.clone()).unitarity_deviation();
            if !(deviation <= MIXER_TOLERANCE) {
                return Err(Error::NotUnitary {
                    deviation,
                    tolerance: MIXER_TOLERANCE,
                });
            }
            let u = UnitaryMatrix::polar_projection(&f)?;
            let correction = (&f - u.as_matrix()).norm();
            (u, correction, "diffusive".to_string())
        }
        MixerSource::Seed(seed) => (
            sample_haar_unitary(2, seed)?,
            0.0,
            format!("diffusive-seed-{seed}"),
        ),
    };
    let a = &hadamard() * &mixer;
    let b = &t_gate() * &mixer;
    let gate_set = GateSet::new(label, vec![a, b], false)?;
    Ok(DiffusiveSet {
        gate_set,
        mixer,
        correction,
    })
}

/// The diffusive pair `{H F, T F}` built from the published mixer.
pub fn standard_diffusive_set() -> Result<GateSet> {
    let f = DMatrix::from_row_slice(2, 2, &reference_mixer_entries());
    let mut set = make_diffusive_qubit_set(MixerSource::Matrix(f))?.gate_set;
    set.label = "standard".into();
    Ok(set)
}

/// The bare Clifford+T pair `{H, T}`.
pub fn clifford_t_set() -> Result<GateSet> {
    GateSet::new("h-t", vec![hadamard(), t_gate()], false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateset::{evaluate_word, Word};

    #[test]
    fn published_mixer_is_projected() {
        let f = DMatrix::from_row_slice(2, 2, &reference_mixer_entries());
        let set = make_diffusive_qubit_set(MixerSource::Matrix(f)).unwrap();
        assert!(set.mixer.unitarity_deviation() < 1e-10);
        // The 5-decimal entries are off by a few parts in 10^6.
        assert!(
            set.correction > 1e-7 && set.correction < 1e-4,
            "{}",
            set.correction
        );
        let a = set.gate_set.gate(0).unwrap();
        assert!(a.unitarity_deviation() < 1e-10);
        assert!(a.max_abs_diff(&(&hadamard() * &set.mixer)) < 1e-15);
    }

    #[test]
    fn identity_mixer_gives_h_and_t() {
        let set = make_diffusive_qubit_set(MixerSource::Matrix(DMatrix::identity(2, 2))).unwrap();
        assert!(set.gate_set.gate(0).unwrap().max_abs_diff(&hadamard()) < 1e-15);
        assert!(set.gate_set.gate(1).unwrap().max_abs_diff(&t_gate()) < 1e-15);
        assert_eq!(set.correction, 0.0);
    }

    #[test]
    fn seeded_mixer_is_deterministic() {
        let a = make_diffusive_qubit_set(MixerSource::Seed(5)).unwrap();
        let b = make_diffusive_qubit_set(MixerSource::Seed(5)).unwrap();
        assert_eq!(a.gate_set.fingerprint(), b.gate_set.fingerprint());
    }

    #[test]
    fn rejects_far_from_unitary_mixer() {
        let mut f = DMatrix::identity(2, 2);
        f[(0, 1)] = Complex64::new(0.01, 0.0);
        assert!(matches!(
            make_diffusive_qubit_set(MixerSource::Matrix(f)),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn gates_do_not_commute() {
        let gs = standard_diffusive_set().unwrap();
        let ab = evaluate_word(&gs, &Word::new(vec![0, 1])).unwrap();
        let ba = evaluate_word(&gs, &Word::new(vec![1, 0])).unwrap();
        assert!(ab.max_abs_diff(&ba) > 1e-2);
    }
}
