use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Orthonormal basis of `su(N)`: `N^2 - 1` traceless Hermitian matrices with
/// `Tr(g_i g_j) = delta_ij`.
///
/// Ordering is the generalized Gell-Mann order, fixed so that stored vectors
/// stay portable:
///
/// 1. symmetric `(E_jk + E_kj) / sqrt 2` for `j < k`, pairs in lexicographic order;
/// 2. antisymmetric `(-i E_jk + i E_kj) / sqrt 2`, same pair order;
/// 3. diagonal `(E_00 + ... + E_{l-1,l-1} - l E_ll) / sqrt(l (l + 1))`, `l = 1 .. N-1`.
///
/// For `N = 2` this is `(sigma_x, sigma_y, sigma_z) / sqrt 2`.
#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<DMatrix<Complex64>>,
}

impl GeneratorBasis {
    /// Matrix dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vector-space dimension `d = N^2 - 1`.
    pub fn algebra_dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[DMatrix<Complex64>] {
        &self.generators
    }

    /// `r_n = Re Tr(h g_n)` for a Hermitian `h`.
    pub(crate) fn project(&self, h: &DMatrix<Complex64>) -> Vec<f64> {
        self.generators
            .iter()
            .map(|g| {
                // Tr(h g) without forming the product.
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        acc += h[(i, j)] * g[(j, i)];
                    }
                }
                acc.re
            })
            .collect()
    }

    /// `sum_n r_n g_n`.
    pub(crate) fn combine(&self, r: &[f64]) -> DMatrix<Complex64> {
        let mut h = DMatrix::zeros(self.dim, self.dim);
        for (g, &c) in self.generators.iter().zip(r) {
            h += g * Complex64::new(c, 0.0);
        }
        h
    }
}

pub fn make_generator_basis(n: usize) -> Result<GeneratorBasis> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let zero = Complex64::new(0.0, 0.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .collect();
    let mut generators = Vec::with_capacity(n * n - 1);
    for &(j, k) in &pairs {
        let mut g = DMatrix::from_element(n, n, zero);
        g[(j, k)] = Complex64::new(s, 0.0);
        g[(k, j)] = Complex64::new(s, 0.0);
        generators.push(g);
    }
    for &(j, k) in &pairs {
        let mut g = DMatrix::from_element(n, n, zero);
        g[(j, k)] = Complex64::new(0.0, -s);
        g[(k, j)] = Complex64::new(0.0, s);
        generators.push(g);
    }
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut g = DMatrix::from_element(n, n, zero);
        for i in 0..l {
            g[(i, i)] = Complex64::new(norm, 0.0);
        }
        g[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        generators.push(g);
    }
    Ok(GeneratorBasis { dim: n, generators })
}
