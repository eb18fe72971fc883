//! Self-contained numerical kernels: 2×2 complex matrices, adaptive matrix
//! ODE integration, polynomial roots, contour winding numbers, and adaptive
//! quadrature.

pub mod matrix;
pub mod ode;
pub mod poly;
pub mod quadrature;
pub mod winding;

pub use matrix::Matrix2;
pub use ode::{solve_matrix_ode, OdeSolution, OdeStats};
pub use poly::{poly_roots, Polynomial};
pub use quadrature::integrate;
pub use winding::{winding_number, Contour};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("required step {step:e} fell below 1e-14 of the interval length {span:e}")]
    StepUnderflow { step: f64, span: f64 },
    #[error("non-finite value encountered at t = {at}")]
    NonFinite { at: f64 },
    #[error("leading coefficient magnitude {0:e} below 1e-300")]
    DegenerateLeadingCoefficient(f64),
    #[error("|f| = {min:e} on the contour is below the floor {floor:e}")]
    ZeroOnContour { min: f64, floor: f64 },
    #[error("phase increment refinement failed to drop below pi")]
    PhaseJump,
    #[error("adaptive quadrature did not converge to tolerance {0:e}")]
    QuadratureFailure(f64),
    #[error("root iteration did not converge")]
    RootsNotConverged,
}
