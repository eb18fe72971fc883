//! Periodic boundary pairs and the background data the Floquet machinery
//! consumes.

use crate::numerics::{integrate, Matrix2, NumericsError};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BackgroundError {
    #[error("lambda must be +1 or -1, got {0}")]
    InvalidLambda(i32),
    #[error("period must be positive, got {0}")]
    InvalidPeriod(f64),
    #[error("single-exponential pairs require omega != 0")]
    ZeroFrequency,
    #[error("quadrature failure: {0}")]
    Quadrature(#[from] NumericsError),
}

/// A period-tau boundary pair {g0, g1} stored as finite Fourier series
/// g_j(t) = sum_n coeff * e^{2 pi i n t / tau}, plus the NLS sign lambda.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPair {
    lambda: i32,
    tau: f64,
    g0_modes: Vec<(i64, Complex64)>,
    g1_modes: Vec<(i64, Complex64)>,
}

/// The eta integrals entering the large-k expansion of the monodromy.
#[derive(Debug, Clone, Copy)]
pub struct EtaValues {
    pub eta1: f64,
    pub eta2: Complex64,
    pub t: f64,
}

impl PeriodicPair {
    pub fn new(
        lambda: i32,
        tau: f64,
        g0_modes: Vec<(i64, Complex64)>,
        g1_modes: Vec<(i64, Complex64)>,
    ) -> Result<Self, BackgroundError> {
        if lambda != 1 && lambda != -1 {
            return Err(BackgroundError::InvalidLambda(lambda));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(BackgroundError::InvalidPeriod(tau));
        }
        Ok(PeriodicPair { lambda, tau, g0_modes, g1_modes })
    }

    /// The pair g0 = g1 = 0.
    pub fn zero(lambda: i32, tau: f64) -> Result<Self, BackgroundError> {
        PeriodicPair::new(lambda, tau, Vec::new(), Vec::new())
    }

    /// g0 = alpha e^{i omega t}, g1 = c e^{i omega t}, with tau = 2 pi / |omega|.
    pub fn single_exponential(
        lambda: i32,
        alpha: f64,
        omega: f64,
        c: Complex64,
    ) -> Result<Self, BackgroundError> {
        if omega == 0.0 {
            return Err(BackgroundError::ZeroFrequency);
        }
        let n = if omega > 0.0 { 1 } else { -1 };
        let tau = 2.0 * PI / omega.abs();
        PeriodicPair::new(
            lambda,
            tau,
            vec![(n, Complex64::new(alpha, 0.0))],
            vec![(n, c)],
        )
    }

    pub fn lambda(&self) -> i32 {
        self.lambda
    }

    pub fn lambda_f(&self) -> f64 {
        self.lambda as f64
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn g0_modes(&self) -> &[(i64, Complex64)] {
        &self.g0_modes
    }

    pub fn g1_modes(&self) -> &[(i64, Complex64)] {
        &self.g1_modes
    }

    fn eval_series(modes: &[(i64, Complex64)], tau: f64, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(n, coeff) in modes {
            let phase = 2.0 * PI * n as f64 * t / tau;
            acc += coeff * Complex64::new(0.0, phase).exp();
        }
        acc
    }

    /// (g0(t), g1(t)).
    pub fn eval(&self, t: f64) -> (Complex64, Complex64) {
        (
            Self::eval_series(&self.g0_modes, self.tau, t),
            Self::eval_series(&self.g1_modes, self.tau, t),
        )
    }

    /// d g0 / dt, exact from the mode list.
    pub fn g0_dot(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(n, coeff) in &self.g0_modes {
            let freq = 2.0 * PI * n as f64 / self.tau;
            acc += coeff * Complex64::new(0.0, freq) * Complex64::new(0.0, freq * t).exp();
        }
        acc
    }

    /// Crude amplitude scale of the pair, used for window defaults.
    pub fn amplitude(&self) -> f64 {
        let a0: f64 = self.g0_modes.iter().map(|(_, c)| c.norm()).sum();
        let a1: f64 = self.g1_modes.iter().map(|(_, c)| c.norm()).sum();
        a0.max(a1)
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude() == 0.0
    }
}

/// The coefficient matrix of the t-part built from boundary values (g0, g1):
/// entries (-i lam |g0|^2, 2k g0 + i g1; 2 lam k conj(g0) - i lam conj(g1), i lam |g0|^2).
pub fn v_matrix(lambda: f64, g0: Complex64, g1: Complex64, k: Complex64) -> Matrix2 {
    let i = Complex64::new(0.0, 1.0);
    let mod2 = Complex64::new(g0.norm_sqr(), 0.0);
    Matrix2::new(
        -i * lambda * mod2,
        2.0 * k * g0 + i * g1,
        2.0 * lambda * k * g0.conj() - i * lambda * g1.conj(),
        i * lambda * mod2,
    )
}

/// V^b(t, k) for the background pair.
pub fn assemble_vb(pair: &PeriodicPair, t: f64, k: Complex64) -> Matrix2 {
    let (g0, g1) = pair.eval(t);
    v_matrix(pair.lambda_f(), g0, g1, k)
}

/// eta1(t) = lambda * int_0^t Im(conj(g0) g1) dt' and the companion eta2
/// quadrature, both to absolute tolerance 1e-11.
pub fn eta(pair: &PeriodicPair, t: f64) -> Result<EtaValues, BackgroundError> {
    let lambda = pair.lambda_f();
    let tol = 1e-11;
    let eta1_at = |s: f64| -> Result<f64, NumericsError> {
        let v = integrate(
            |tp| {
                let (g0, g1) = pair.eval(tp);
                Complex64::new((g0.conj() * g1).im, 0.0)
            },
            0.0,
            s,
            tol,
        )?;
        Ok(lambda * v.re)
    };
    let eta1 = eta1_at(t)?;
    let eta2 = integrate(
        |tp| {
            let (g0, g1) = pair.eval(tp);
            let e1 = eta1_at(tp).unwrap_or(f64::NAN);
            let i = Complex64::new(0.0, 1.0);
            let im_part = (g0.conj() * g1).im;
            Complex64::new(lambda * g0.norm_sqr() * g0.norm_sqr() - g1.norm_sqr(), 0.0)
                - 4.0 * i * im_part * e1
                - i * g0.conj() * pair.g0_dot(tp)
        },
        0.0,
        t,
        tol,
    )? * (lambda / 4.0);
    Ok(EtaValues { eta1, eta2, t })
}
