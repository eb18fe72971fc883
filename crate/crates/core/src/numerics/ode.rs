//! Adaptive matrix ODE integration with the Dormand–Prince 5(4) embedded pair.

use super::matrix::Matrix2;
use super::NumericsError;

#[derive(Debug, Clone, Copy, Default)]
pub struct OdeStats {
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct OdeSolution {
    pub y: Matrix2,
    pub stats: OdeStats,
}

// Dormand-Prince RK5(4)7M tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 4th-order embedded weights.
const E1: f64 = 5179.0 / 57600.0;
const E3: f64 = 7571.0 / 16695.0;
const E4: f64 = 393.0 / 640.0;
const E5: f64 = -92097.0 / 339200.0;
const E6: f64 = 187.0 / 2100.0;
const E7: f64 = 1.0 / 40.0;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

/// One Dormand-Prince step from (t, y) with step h. Returns the 5th-order
/// solution and the embedded error estimate.
pub fn rk45_step<F>(rhs: &mut F, t: f64, y: &Matrix2, h: f64) -> (Matrix2, Matrix2)
where
    F: FnMut(f64, &Matrix2) -> Matrix2,
{
    let k1 = rhs(t, y);
    let k2 = rhs(t + C2 * h, &(*y + k1 * (A21 * h)));
    let k3 = rhs(t + C3 * h, &(*y + k1 * (A31 * h) + k2 * (A32 * h)));
    let k4 = rhs(
        t + C4 * h,
        &(*y + k1 * (A41 * h) + k2 * (A42 * h) + k3 * (A43 * h)),
    );
    let k5 = rhs(
        t + C5 * h,
        &(*y + k1 * (A51 * h) + k2 * (A52 * h) + k3 * (A53 * h) + k4 * (A54 * h)),
    );
    let k6 = rhs(
        t + h,
        &(*y + k1 * (A61 * h) + k2 * (A62 * h) + k3 * (A63 * h) + k4 * (A64 * h) + k5 * (A65 * h)),
    );
    let y5 = *y + k1 * (B1 * h) + k3 * (B3 * h) + k4 * (B4 * h) + k5 * (B5 * h) + k6 * (B6 * h);
    let k7 = rhs(t + h, &y5);
    let y4 = *y + k1 * (E1 * h) + k3 * (E3 * h) + k4 * (E4 * h) + k5 * (E5 * h) + k6 * (E6 * h)
        + k7 * (E7 * h);
    (y5, y5 - y4)
}

/// Integrate Y' = rhs(t, Y) from t0 to t1 with embedded-pair adaptive stepping.
///
/// The local error is controlled against abs_tol + rel_tol * |Y|.
pub fn solve_matrix_ode<F>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: Matrix2,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<OdeSolution, NumericsError>
where
    F: FnMut(f64, &Matrix2) -> Matrix2,
{
    assert!(t1 >= t0, "solve_matrix_ode requires t1 >= t0");
    assert!(abs_tol > 0.0 && rel_tol > 0.0, "tolerances must be positive");

    let span = t1 - t0;
    let mut stats = OdeStats::default();
    if span == 0.0 {
        return Ok(OdeSolution { y: y0, stats });
    }

    let mut t = t0;
    let mut y = y0;
    let mut h = (span / 100.0).min(0.1 * span.max(1e-3));
    let h_min = 1e-14 * span;

    while t < t1 {
        if h < h_min {
            return Err(NumericsError::StepUnderflow { step: h, span });
        }
        if t + h > t1 {
            h = t1 - t;
        }
        let mut nonfinite = false;
        let (y_new, err) = rk45_step(
            &mut |tt, yy| {
                let v = rhs(tt, yy);
                if !v.is_finite() {
                    nonfinite = true;
                }
                v
            },
            t,
            &y,
            h,
        );
        stats.rhs_evals += 7;
        if nonfinite || !y_new.is_finite() {
            return Err(NumericsError::NonFinite { at: t });
        }

        let scale = abs_tol + rel_tol * y.max_norm().max(y_new.max_norm());
        let err_norm = err.max_norm() / scale;

        if err_norm <= 1.0 {
            t += h;
            y = y_new;
            stats.steps_accepted += 1;
        } else {
            stats.steps_rejected += 1;
        }
        let factor = if err_norm > 0.0 {
            0.9 * err_norm.powf(-0.2)
        } else {
            5.0
        };
        h *= factor.clamp(0.2, 5.0);
    }

    Ok(OdeSolution { y, stats })
}
