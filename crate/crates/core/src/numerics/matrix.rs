use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// A dense 2×2 complex matrix. This is the workhorse type for monodromy
/// matrices, diagonalizers, and eigenfunction frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl Matrix2 {
    pub const fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Matrix2 { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Matrix2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Matrix2::new(z, z, z, z)
    }

    /// diag(a, b)
    pub fn diag(a: Complex64, b: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Matrix2::new(a, z, z, b)
    }

    /// Third Pauli matrix diag(1, -1).
    pub fn sigma3() -> Self {
        Matrix2::diag(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
    }

    /// First Pauli matrix (off-diagonal ones).
    pub fn sigma1() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Matrix2::new(z, one, one, z)
    }

    /// e^{c sigma3} = diag(e^c, e^{-c})
    pub fn exp_sigma3(c: Complex64) -> Self {
        Matrix2::diag(c.exp(), (-c).exp())
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> Complex64 {
        self.m11 + self.m22
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Matrix2::new(
            self.m11.conj(),
            self.m12.conj(),
            self.m21.conj(),
            self.m22.conj(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Matrix2::new(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)
    }

    /// Maximum entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.m11
            .norm()
            .max(self.m12.norm())
            .max(self.m21.norm())
            .max(self.m22.norm())
    }

    pub fn is_finite(&self) -> bool {
        [self.m11, self.m12, self.m21, self.m22]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Inverse; returns None when the determinant magnitude is below 1e-300.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() < 1e-300 {
            return None;
        }
        Some(Matrix2::new(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d))
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, r: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.m11 + r.m11,
            self.m12 + r.m12,
            self.m21 + r.m21,
            self.m22 + r.m22,
        )
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, r: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.m11 - r.m11,
            self.m12 - r.m12,
            self.m21 - r.m21,
            self.m22 - r.m22,
        )
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, r: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.m11 * r.m11 + self.m12 * r.m21,
            self.m11 * r.m12 + self.m12 * r.m22,
            self.m21 * r.m11 + self.m22 * r.m21,
            self.m21 * r.m12 + self.m22 * r.m22,
        )
    }
}

impl Mul<f64> for Matrix2 {
    type Output = Matrix2;
    fn mul(self, s: f64) -> Matrix2 {
        self.scale(Complex64::new(s, 0.0))
    }
}
