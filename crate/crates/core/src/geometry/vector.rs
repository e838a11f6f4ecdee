use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::GeneratorBasis;
use super::qubit::Mat2;
use super::{qubit_count, UnitaryMatrix, UNITARITY_TOL};
use crate::error::{Error, Result};

/// Coordinates `r_n` of a unitary in the generator basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SuVector(Vec<f64>);

impl SuVector {
    pub fn new(components: Vec<f64>) -> Self {
        Self(components)
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0.0; d])
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn into_components(self) -> Vec<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &SuVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: f64) -> SuVector {
        SuVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &SuVector) -> SuVector {
        SuVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &SuVector) -> SuVector {
        SuVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn distance(&self, other: &SuVector) -> f64 {
        self.sub(other).norm()
    }
}

impl From<[f64; 3]> for SuVector {
    fn from(v: [f64; 3]) -> Self {
        SuVector(v.to_vec())
    }
}

/// Fold threshold `2^{n/2 - 1} pi` for `N = 2^n`.
pub fn fold_threshold(n: usize) -> Result<f64> {
    let q = qubit_count(n).ok_or(Error::UnsupportedDimension(n))?;
    Ok(2f64.powf(q as f64 / 2.0 - 1.0) * PI)
}

/// Radius `2^{n/2} pi` of the unfolded ball for `N = 2^n`.
pub fn outer_radius(n: usize) -> Result<f64> {
    Ok(2.0 * fold_threshold(n)?)
}

/// Identifies `U` with `-U`: vectors beyond the fold threshold are sent to
/// `-r (R - |r|) / |r|` with `R` the outer radius. Idempotent.
pub fn fold_vector(r: &SuVector, n: usize) -> Result<SuVector> {
    let threshold = fold_threshold(n)?;
    let norm = r.norm();
    if norm > threshold {
        Ok(r.scaled(-(2.0 * threshold - norm) / norm))
    } else {
        Ok(r.clone())
    }
}

fn check_basis(u: &UnitaryMatrix, basis: &GeneratorBasis) -> Result<()> {
    if u.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: u.dim(),
        });
    }
    Ok(())
}

fn check_unitary(u: &UnitaryMatrix) -> Result<()> {
    let deviation = u.unitarity_deviation();
    if !(deviation <= UNITARITY_TOL) {
        return Err(Error::NotUnitary {
            deviation,
            tolerance: UNITARITY_TOL,
        });
    }
    Ok(())
}

/// Hermitian `-i log U` on the principal branch (eigenphases in `(-pi, pi]`),
/// via the complex Schur form, which is diagonal for a normal matrix.
fn principal_log(u: &UnitaryMatrix) -> Result<DMatrix<Complex64>> {
    let n = u.dim();
    let schur = nalgebra::linalg::Schur::try_new(u.as_matrix().clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    let mut phases = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut arg = t[(i, i)].arg();
        if arg <= -PI {
            arg = PI;
        }
        phases[(i, i)] = Complex64::new(arg, 0.0);
    }
    Ok(&q * phases * q.adjoint())
}

/// Projection of the traceless part of `-i log U` on the basis, without the
/// fold. This is the eigendecomposition reference route for any `N`.
pub fn log_vector_unfolded(u: &UnitaryMatrix, basis: &GeneratorBasis) -> Result<SuVector> {
    check_basis(u, basis)?;
    check_unitary(u)?;
    let mut h = principal_log(u)?;
    let n = u.dim();
    let mean = h.trace() / Complex64::new(n as f64, 0.0);
    for i in 0..n {
        h[(i, i)] -= mean;
    }
    Ok(SuVector(basis.project(&h)))
}

/// Maps a unitary to its folded vector `r`, discarding the global phase.
///
/// Qubits use the closed form of [`Mat2::vector`]. Other powers of two use
/// the eigendecomposition route followed by [`fold_vector`]. For dimensions
/// that are not powers of two the fold is undefined and the unfolded vector
/// is returned.
pub fn unitary_to_vector(u: &UnitaryMatrix, basis: &GeneratorBasis) -> Result<SuVector> {
    check_basis(u, basis)?;
    if u.dim() == 2 {
        check_unitary(u)?;
        return Ok(SuVector::from(Mat2::from_unitary(u).vector()));
    }
    let r = log_vector_unfolded(u, basis)?;
    if qubit_count(u.dim()).is_some() {
        fold_vector(&r, u.dim())
    } else {
        Ok(r)
    }
}

/// `exp(i r.g)`.
pub fn vector_to_unitary(r: &SuVector, basis: &GeneratorBasis) -> Result<UnitaryMatrix> {
    if r.dim() != basis.algebra_dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.algebra_dim(),
            found: r.dim(),
        });
    }
    if !r.components().iter().all(|x| x.is_finite()) {
        return Err(Error::Domain("vector has non-finite components".into()));
    }
    if basis.dim() == 2 {
        let c = r.components();
        return Ok(Mat2::from_vector(&[c[0], c[1], c[2]]).to_unitary());
    }
    let h = basis.combine(r.components());
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let n = basis.dim();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = Complex64::from_polar(1.0, eig.eigenvalues[i]);
    }
    let v = eig.eigenvectors;
    Ok(UnitaryMatrix::from_trusted(&v * d * v.adjoint()))
}
