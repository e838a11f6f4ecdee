use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Max-abs deviation of `U U^dag` from the identity accepted for a unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Words at least this long are re-unitarized while being multiplied out.
pub const REUNITARIZE_MIN_LEN: usize = 50;
/// Number of multiplications between two polar projections of a long product.
pub const REUNITARIZE_EVERY: usize = 32;

/// An `N x N` complex matrix that is unitary within [`UNITARITY_TOL`].
#[derive(Clone, PartialEq)]
pub struct UnitaryMatrix {
    m: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    /// Validates `m` and wraps it. Inputs are never repaired here; use
    /// [`UnitaryMatrix::polar_projection`] explicitly for that.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() < 1 {
            return Err(Error::InvalidDimension(m.nrows()));
        }
        let deviation = unitarity_deviation(&m);
        if !(deviation <= UNITARITY_TOL) {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: UNITARITY_TOL,
            });
        }
        Ok(Self { m })
    }

    /// Builds from row-major entries.
    pub fn from_rows(n: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    /// Wraps a matrix known to be unitary up to rounding (products, adjoints).
    pub(crate) fn from_trusted(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.is_square());
        Self { m }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: DMatrix::identity(n, n),
        }
    }

    pub fn diagonal_phases(phases: &[f64]) -> Self {
        let n = phases.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &p) in phases.iter().enumerate() {
            m[(i, i)] = Complex64::from_polar(1.0, p);
        }
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|ij| self.m[ij])
            .collect()
    }

    /// Conjugate transpose, which is the inverse.
    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn scaled(&self, phase: Complex64) -> Self {
        Self { m: &self.m * phase }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        check_same_dim(self, rhs)?;
        Ok(Self {
            m: &self.m * &rhs.m,
        })
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.m)
    }

    /// Max-abs entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.m - &other.m)
            .iter()
            .fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Nearest unitary in Frobenius norm (`W V^dag` from the SVD `W S V^dag`).
    pub fn polar_projection(m: &DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let svd = m.clone().svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(Error::Numerical("SVD did not converge".into())),
        };
        Ok(Self { m: u * v_t })
    }

    /// Polar projection of an already (approximately) unitary matrix.
    pub fn reunitarize(&self) -> Self {
        Self::polar_projection(&self.m).unwrap_or_else(|_| self.clone())
    }
}

pub(crate) fn check_same_dim(a: &UnitaryMatrix, b: &UnitaryMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

pub(crate) fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let p = m * m.adjoint();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((p[(i, j)] - expect).norm());
        }
    }
    worst
}

impl Mul for &UnitaryMatrix {
    type Output = UnitaryMatrix;

    /// Panics on dimension mismatch; see [`UnitaryMatrix::try_mul`].
    fn mul(self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "dimension mismatch in unitary product"
        );
        UnitaryMatrix {
            m: &self.m * &rhs.m,
        }
    }
}

impl fmt::Debug for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitaryMatrix{}", self)
    }
}

impl fmt::Display for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        write!(f, "[")?;
        for i in 0..n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..n {
                let z = self.m[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}
