//! Closed forms for the stationary one-soliton boundary pair: spectral
//! functions, eigenfunction entries, branch points, and the global-relation
//! identity. Serves as an exact oracle for the numerical pipeline.

use num_complex::Complex64;
use thiserror::Error;

use crate::background::{BackgroundError, PeriodicPair};
use crate::numerics::Matrix2;

/// Exclusion radius around the pole/branch points and the cuts.
pub const PROXIMITY_RADIUS: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SolitonError {
    #[error("omega must be positive, got {0}")]
    InvalidOmega(f64),
    #[error("k = {0} is too close to a pole")]
    PoleProximity(Complex64),
    #[error("k = {0} is too close to a branch cut")]
    CutProximity(Complex64),
    #[error(transparent)]
    Background(#[from] BackgroundError),
}

/// Parameters of the stationary soliton sqrt(omega) sech(x sqrt(omega) - gamma) e^{i omega t}.
#[derive(Debug, Clone, Copy)]
pub struct SolitonParams {
    pub gamma: f64,
    pub omega: f64,
    /// Dirichlet amplitude sqrt(omega)/cosh(gamma).
    pub alpha: f64,
    /// Neumann amplitude omega sinh(gamma)/cosh^2(gamma) = sgn(gamma) alpha sqrt(omega - alpha^2).
    pub c: f64,
    /// Outer branch point i sqrt(omega)/2.
    pub k1: Complex64,
    /// Inner branch point i sqrt(omega) tanh(gamma)/2.
    pub k2: Complex64,
}

pub fn soliton_params(gamma: f64, omega: f64) -> Result<SolitonParams, SolitonError> {
    if !(omega > 0.0) || !omega.is_finite() || !gamma.is_finite() {
        return Err(SolitonError::InvalidOmega(omega));
    }
    let root = omega.sqrt();
    let alpha = root / gamma.cosh();
    let c = omega * gamma.sinh() / gamma.cosh().powi(2);
    let k1 = Complex64::new(0.0, root / 2.0);
    let k2 = Complex64::new(0.0, root * gamma.tanh() / 2.0);
    // Internal consistency: c = sgn(gamma) alpha sqrt(omega - alpha^2), |K2| <= |K1|.
    let alt = gamma.signum() * alpha * (omega - alpha * alpha).max(0.0).sqrt();
    debug_assert!((c - alt).abs() <= 1e-12 * (1.0 + c.abs()));
    debug_assert!(k2.norm() <= k1.norm() + 1e-12);
    Ok(SolitonParams { gamma, omega, alpha, c, k1, k2 })
}

impl SolitonParams {
    /// Period of the induced boundary pair.
    pub fn tau(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }

    /// The induced periodic boundary pair g0 = alpha e^{i omega t}, g1 = c e^{i omega t}.
    pub fn pair(&self) -> PeriodicPair {
        PeriodicPair::single_exponential(-1, self.alpha, self.omega, Complex64::new(self.c, 0.0))
            .expect("omega > 0 by construction")
    }

    /// L^1 norm of the profile in x, constant in t: 2 arctan(e^gamma).
    pub fn profile_l1(&self) -> f64 {
        2.0 * self.gamma.exp().atan()
    }

    fn check_poles(&self, k: Complex64) -> Result<(), SolitonError> {
        let scale = PROXIMITY_RADIUS * (1.0 + self.k1.norm());
        if (k - self.k1).norm() < scale || (k + self.k1).norm() < scale {
            return Err(SolitonError::PoleProximity(k));
        }
        Ok(())
    }

    fn check_cuts(&self, k: Complex64) -> Result<(), SolitonError> {
        let scale = PROXIMITY_RADIUS * (1.0 + self.k1.norm());
        // Cuts are the vertical segments [K2, K1] and [-K1, -K2].
        let lo = self.k2.im.abs().min(self.k1.im);
        let hi = self.k1.im;
        let im = k.im.abs();
        let dist = if im < lo {
            (k.re * k.re + (lo - im) * (lo - im)).sqrt()
        } else if im > hi {
            (k.re * k.re + (im - hi) * (im - hi)).sqrt()
        } else {
            k.re.abs()
        };
        if dist < scale {
            return Err(SolitonError::CutProximity(k));
        }
        Ok(())
    }
}

/// Spectral functions (a, b, A, B) of the stationary soliton.
///
/// a, b come from the initial datum (rational in k), A, B from the boundary
/// pair (square-root branch cut on the two imaginary segments).
pub fn soliton_spectra(
    p: &SolitonParams,
    k: Complex64,
) -> Result<(Complex64, Complex64, Complex64, Complex64), SolitonError> {
    p.check_poles(k)?;
    p.check_cuts(k)?;
    let i = Complex64::new(0.0, 1.0);
    let root = p.omega.sqrt();
    let a = (k - p.k2) / (k + p.k1);
    let b = p.alpha / (2.0 * i * (k + p.k1));
    let sech2 = 1.0 / p.gamma.cosh().powi(2);
    let big_a = (1.0 - p.omega * sech2 / (4.0 * k * k + p.omega)).sqrt();
    let big_b = root * big_a / (root * p.gamma.sinh() + 2.0 * i * k * p.gamma.cosh());
    Ok((a, b, big_a, big_b))
}

/// Closed-form eigenfunction entries: ((mu1)_12, (mu1)_22, mu3).
pub fn soliton_eigenfunctions(
    p: &SolitonParams,
    x: f64,
    t: f64,
    k: Complex64,
) -> Result<(Complex64, Complex64, Matrix2), SolitonError> {
    assert!(x >= 0.0, "x must be nonnegative");
    p.check_poles(k)?;
    p.check_cuts(k)?;
    let i = Complex64::new(0.0, 1.0);
    let root = p.omega.sqrt();
    let arg = p.gamma - x * root;
    let sech = 1.0 / arg.cosh();
    let tanh = arg.tanh();
    let phase = Complex64::new(0.0, p.omega * t).exp();
    let mu3 = Matrix2::new(
        (2.0 * k + i * root * tanh) / (2.0 * k - i * root),
        -phase * root * sech / (root - 2.0 * i * k),
        (root * sech / (2.0 * i * k + root)) / phase,
        (2.0 * k - i * root * tanh) / (2.0 * k + i * root),
    );
    let sech2 = 1.0 / p.gamma.cosh().powi(2);
    let big_a = (1.0 - p.omega * sech2 / (4.0 * k * k + p.omega)).sqrt();
    let denom = root * p.gamma.tanh() + 2.0 * i * k;
    let mu1_12 = big_a * root * phase * sech / denom;
    let mu1_22 = big_a * (root * tanh + 2.0 * i * k) / denom;
    Ok((mu1_12, mu1_22, mu3))
}

/// |b A - a B|; vanishes identically in the open first quadrant.
pub fn soliton_global_relation_residual(
    p: &SolitonParams,
    k: Complex64,
) -> Result<f64, SolitonError> {
    let (a, b, big_a, big_b) = soliton_spectra(p, k)?;
    Ok((b * big_a - a * big_b).norm())
}
