use num_complex::Complex64;

use super::basis::make_generator_basis;
use super::qubit::Mat2;
use super::unitary::check_same_dim;
use super::{unitary_to_vector, UnitaryMatrix};
use crate::error::Result;

/// `D(U1, U2) = |r(U1^dag U2)|`.
pub fn distance_d(u1: &UnitaryMatrix, u2: &UnitaryMatrix) -> Result<f64> {
    check_same_dim(u1, u2)?;
    if u1.dim() == 2 {
        let a = Mat2::from_unitary(u1).adjoint();
        return Ok(a.mul(&Mat2::from_unitary(u2)).distance_from_identity());
    }
    let basis = make_generator_basis(u1.dim())?;
    Ok(unitary_to_vector(&(&u1.adjoint() * u2), &basis)?.norm())
}

/// `D(U, I) = |r(U)|`.
pub fn distance_from_identity(u: &UnitaryMatrix) -> Result<f64> {
    distance_d(&UnitaryMatrix::identity(u.dim()), u)
}

/// `d_F(U1, U2) = sqrt((N - |Tr(U1 U2^dag)|) / N)`; insensitive to global phase.
pub fn distance_df(u1: &UnitaryMatrix, u2: &UnitaryMatrix) -> Result<f64> {
    check_same_dim(u1, u2)?;
    let n = u1.dim() as f64;
    let mut tr = Complex64::new(0.0, 0.0);
    let (a, b) = (u1.as_matrix(), u2.as_matrix());
    for i in 0..u1.dim() {
        for k in 0..u1.dim() {
            tr += a[(i, k)] * b[(i, k)].conj();
        }
    }
    Ok(((n - tr.norm()) / n).max(0.0).sqrt())
}
