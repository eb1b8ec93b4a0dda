//! Dense 2x2 complex matrices.
//!
//! Everything downstream of the Hamiltonian system works with 2x2 blocks,
//! so this is a fixed-size value type with inline arithmetic rather than a
//! general matrix abstraction. Norms follow the conventions used by the
//! rest of the crate: [`Mat2::sup_norm`] is the maximum entry modulus and
//! [`Mat2::max_abs_component`] is the maximum over the eight real
//! components, which is the norm the step-size control of the integrator
//! applies.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// 2x2 complex matrix `[[e11, e12], [e21, e22]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub e11: Complex64,
    pub e12: Complex64,
    pub e21: Complex64,
    pub e22: Complex64,
}

impl Mat2 {
    pub const fn new(e11: Complex64, e12: Complex64, e21: Complex64, e22: Complex64) -> Self {
        Self { e11, e12, e21, e22 }
    }

    /// Matrix with all entries zero.
    pub fn zero() -> Self {
        Self::scalar(Complex64::new(0.0, 0.0))
    }

    /// Identity matrix.
    pub fn identity() -> Self {
        Self::diag(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// `z * I`.
    pub fn scalar(z: Complex64) -> Self {
        Self::diag(z, z)
    }

    /// Diagonal matrix.
    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(d1, zero, zero, d2)
    }

    /// Matrix from real entries.
    pub fn from_real(e11: f64, e12: f64, e21: f64, e22: f64) -> Self {
        Self::new(
            Complex64::new(e11, 0.0),
            Complex64::new(e12, 0.0),
            Complex64::new(e21, 0.0),
            Complex64::new(e22, 0.0),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.e11 + self.e22
    }

    pub fn det(&self) -> Complex64 {
        self.e11 * self.e22 - self.e12 * self.e21
    }

    /// Adjugate: `m * m.adjugate() == m.det() * I`.
    pub fn adjugate(&self) -> Self {
        Self::new(self.e22, -self.e12, -self.e21, self.e11)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.e11, self.e21, self.e12, self.e22)
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::new(
            self.e11.conj(),
            self.e12.conj(),
            self.e21.conj(),
            self.e22.conj(),
        )
    }

    /// Inverse, or `None` when the determinant vanishes exactly.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == Complex64::new(0.0, 0.0) {
            return None;
        }
        Some(self.adjugate() / d)
    }

    /// Entrywise real parts.
    pub fn re(&self) -> [[f64; 2]; 2] {
        [[self.e11.re, self.e12.re], [self.e21.re, self.e22.re]]
    }

    /// Entrywise imaginary parts.
    pub fn im(&self) -> [[f64; 2]; 2] {
        [[self.e11.im, self.e12.im], [self.e21.im, self.e22.im]]
    }

    /// Imaginary part as a matrix with real entries.
    pub fn im_mat(&self) -> Self {
        let [[a, b], [c, d]] = self.im();
        Self::from_real(a, b, c, d)
    }

    /// Maximum entry modulus.
    pub fn sup_norm(&self) -> f64 {
        self.e11
            .norm()
            .max(self.e12.norm())
            .max(self.e21.norm())
            .max(self.e22.norm())
    }

    /// Maximum over the eight real components.
    pub fn max_abs_component(&self) -> f64 {
        [self.e11, self.e12, self.e21, self.e22]
            .iter()
            .map(|z| z.re.abs().max(z.im.abs()))
            .fold(0.0, f64::max)
    }

    /// Sup-norm of the imaginary part.
    pub fn im_sup_norm(&self) -> f64 {
        self.e11
            .im
            .abs()
            .max(self.e12.im.abs())
            .max(self.e21.im.abs())
            .max(self.e22.im.abs())
    }

    /// Sup-norm of `self - self.transpose()`.
    pub fn symmetry_defect(&self) -> f64 {
        (self.e12 - self.e21).norm()
    }

    /// Entries as `[e11, e12, e21, e22]`, row major.
    pub fn entries(&self) -> [Complex64; 4] {
        [self.e11, self.e12, self.e21, self.e22]
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.e11 + rhs.e11,
            self.e12 + rhs.e12,
            self.e21 + rhs.e21,
            self.e22 + rhs.e22,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.e11 - rhs.e11,
            self.e12 - rhs.e12,
            self.e21 - rhs.e21,
            self.e22 - rhs.e22,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-self.e11, -self.e12, -self.e21, -self.e22)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.e11 * rhs.e11 + self.e12 * rhs.e21,
            self.e11 * rhs.e12 + self.e12 * rhs.e22,
            self.e21 * rhs.e11 + self.e22 * rhs.e21,
            self.e21 * rhs.e12 + self.e22 * rhs.e22,
        )
    }
}

impl Mul<Complex64> for Mat2 {
    type Output = Mat2;
    fn mul(self, z: Complex64) -> Mat2 {
        Mat2::new(self.e11 * z, self.e12 * z, self.e21 * z, self.e22 * z)
    }
}

impl Mul<Mat2> for Complex64 {
    type Output = Mat2;
    fn mul(self, m: Mat2) -> Mat2 {
        m * self
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, t: f64) -> Mat2 {
        self * Complex64::new(t, 0.0)
    }
}

impl Mul<Mat2> for f64 {
    type Output = Mat2;
    fn mul(self, m: Mat2) -> Mat2 {
        m * self
    }
}

impl Div<Complex64> for Mat2 {
    type Output = Mat2;
    fn div(self, z: Complex64) -> Mat2 {
        Mat2::new(self.e11 / z, self.e12 / z, self.e21 / z, self.e22 / z)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e11, self.e12, self.e21, self.e22
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjugate_identity() {
        let m = Mat2::new(c(1.0, 2.0), c(-0.5, 0.25), c(3.0, -1.0), c(0.0, 4.0));
        let prod = m * m.adjugate();
        let expect = Mat2::scalar(m.det());
        assert!((prod - expect).sup_norm() < 1e-14);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat2::new(c(2.0, 1.0), c(0.5, 0.0), c(-1.0, 0.5), c(1.0, -2.0));
        let inv = m.inverse().expect("nonsingular");
        assert!((m * inv - Mat2::identity()).sup_norm() < 1e-14);
        assert!((inv * m - Mat2::identity()).sup_norm() < 1e-14);
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Mat2::from_real(1.0, 2.0, 2.0, 4.0);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn norms_agree_on_real_matrices() {
        let m = Mat2::from_real(1.0, -3.0, 0.5, 2.0);
        assert_eq!(m.sup_norm(), 3.0);
        assert_eq!(m.max_abs_component(), 3.0);
    }

    #[test]
    fn trace_and_det() {
        let m = Mat2::from_real(3.0, 1.0, 2.0, 5.0);
        assert_eq!(m.trace(), c(8.0, 0.0));
        assert_eq!(m.det(), c(13.0, 0.0));
    }

    #[test]
    fn symmetry_defect_measures_off_diagonal_gap() {
        let m = Mat2::from_real(1.0, 2.0, 2.5, 1.0);
        assert!((m.symmetry_defect() - 0.5).abs() < 1e-15);
    }
}
