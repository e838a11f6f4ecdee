//! Closed-form single-qubit geometry on a stack-allocated `2 x 2` matrix.
//!
//! Every `U` in `U(2)` can be written `e^{i phi} (cos t I + i sin t n.sigma)`
//! with `t` in `[0, pi/2]` once `U` and `-U` are identified. In the
//! normalized Pauli basis this gives `r = sqrt(2) t n`, so that
//! `|r| = sqrt(2) t` is the bi-invariant distance to the identity on
//! `PU(2)`. These routines are the hot path for nets of qubit words; the
//! eigendecomposition route in the parent module is the reference.

use num_complex::Complex64;

use super::UnitaryMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major `[a, b, c, d]` for `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [Complex64; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([ONE, ZERO, ZERO, ONE]);

    pub fn from_unitary(u: &UnitaryMatrix) -> Mat2 {
        debug_assert_eq!(u.dim(), 2);
        Mat2([u.get(0, 0), u.get(0, 1), u.get(1, 0), u.get(1, 1)])
    }

    pub fn to_unitary(self) -> UnitaryMatrix {
        UnitaryMatrix::from_trusted(nalgebra::DMatrix::from_row_slice(2, 2, &self.0))
    }

    #[inline]
    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    #[inline]
    pub fn adjoint(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    #[inline]
    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    #[inline]
    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    /// `Tr(self * o)` without forming the product.
    #[inline]
    pub fn trace_mul(&self, o: &Mat2) -> Complex64 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        a * e + b * g + c * f + d * h
    }

    /// Folded half-angle `t` in `[0, pi/2]`, computed as
    /// `atan2(|U - Tr(U)/2| / sqrt 2, |Tr U| / 2)`, stable at both ends.
    #[inline]
    pub fn half_angle(&self) -> f64 {
        let [a, b, c, d] = self.0;
        let w = (a + d) * 0.5;
        let x2 = (a - w).norm_sqr() + b.norm_sqr() + c.norm_sqr() + (d - w).norm_sqr();
        (0.5 * x2).sqrt().atan2(w.norm())
    }

    /// `|r|`, the distance `D(U, I)`.
    #[inline]
    pub fn distance_from_identity(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.half_angle()
    }

    /// Folded vector in the `(sigma_x, sigma_y, sigma_z) / sqrt 2` basis.
    pub fn vector(&self) -> [f64; 3] {
        let [a, b, c, d] = self.0;
        let w = (a + d) * 0.5;
        // Global phase from sqrt(det), sign chosen so that cos t >= 0.
        let mut q = self.det().sqrt();
        if (q.conj() * w).re < 0.0 {
            q = -q;
        }
        let qc = q.conj();
        let cos_t = (qc * w).re;
        let half = Complex64::new(0.5, 0.0);
        let cx = (b + c) * half;
        let cy = Complex64::new(0.0, 0.5) * (b - c);
        let cz = (a - d) * half;
        let sn = [(qc * cx).im, (qc * cy).im, (qc * cz).im];
        let s = (sn[0] * sn[0] + sn[1] * sn[1] + sn[2] * sn[2]).sqrt();
        if s == 0.0 {
            return [0.0; 3];
        }
        let scale = std::f64::consts::SQRT_2 * s.atan2(cos_t) / s;
        [scale * sn[0], scale * sn[1], scale * sn[2]]
    }

    /// `exp(i r.g)` for `r` in the normalized Pauli basis.
    pub fn from_vector(r: &[f64; 3]) -> Mat2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        let t = n * s;
        if t == 0.0 {
            return Mat2::IDENTITY;
        }
        let (sin, cos) = t.sin_cos();
        // exp(i t n.sigma) = cos t I + i sin t n.sigma with n = r / |r|.
        let (nx, ny, nz) = (r[0] / n, r[1] / n, r[2] / n);
        let i = Complex64::new(0.0, 1.0);
        Mat2([
            Complex64::new(cos, 0.0) + i * sin * nz,
            i * sin * Complex64::new(nx, -ny),
            i * sin * Complex64::new(nx, ny),
            Complex64::new(cos, 0.0) - i * sin * nz,
        ])
    }

    /// Polar projection by Newton iteration `X <- (X + X^{-dag}) / 2`.
    pub fn reunitarize(&self) -> Mat2 {
        let mut x = *self;
        for _ in 0..3 {
            let det = x.det();
            let [a, b, c, d] = x.0;
            // X^{-1} = [[d, -b], [-c, a]] / det, then take the adjoint.
            let inv = Mat2([d / det, -b / det, -c / det, a / det]).adjoint();
            let next = Mat2([
                (x.0[0] + inv.0[0]) * 0.5,
                (x.0[1] + inv.0[1]) * 0.5,
                (x.0[2] + inv.0[2]) * 0.5,
                (x.0[3] + inv.0[3]) * 0.5,
            ]);
            let delta: f64 = next.0.iter().zip(&x.0).map(|(p, q)| (p - q).norm()).sum();
            x = next;
            if delta < 1e-16 {
                break;
            }
        }
        x
    }

    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        self.0
            .iter()
            .zip(&o.0)
            .fold(0.0, |m, (p, q)| m.max((p - q).norm()))
    }
}
