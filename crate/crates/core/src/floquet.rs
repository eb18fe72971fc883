//! Monodromy matrix of the background t-part and derived Floquet quantities:
//! discriminant, multiplier, exponent, diagonalizer, and the anchored branch
//! continuation that fixes square roots and logarithms by their large-k
//! behavior.

use crate::background::{assemble_vb, eta, BackgroundError, PeriodicPair};
use crate::numerics::{solve_matrix_ode, Matrix2, NumericsError};
use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum FloquetError {
    #[error("k = {0} is within tolerance of a branch point; diagonalization declined")]
    BranchPointProximity(Complex64),
    #[error("no admissible continuation path from the anchor to {0}")]
    PathBlocked(Complex64),
    #[error("branch continuation could not disambiguate the square-root sign near {0}")]
    ContinuationAmbiguous(Complex64),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Background(#[from] BackgroundError),
}

/// All Floquet quantities at one k, with branch provenance.
#[derive(Debug, Clone)]
pub struct FloquetPoint {
    pub k: Complex64,
    /// Monodromy matrix Z(k).
    pub monodromy: Matrix2,
    /// Discriminant G = (tr Z)^2 - 4.
    pub g: Complex64,
    pub sqrt_g: Complex64,
    /// Floquet multiplier z = (tr Z - sqrt G)/2.
    pub multiplier: Complex64,
    /// Exponent: i log z / tau.
    pub omega_tilde: Complex64,
    /// Diagonalizer S^b; absent when k is too close to a branch point.
    pub sb: Option<Matrix2>,
    /// Whether sqrt_g/z came from anchored continuation rather than the raw
    /// principal square root.
    pub branch_anchored: bool,
}

/// Fundamental-solution frame at time t: psi(0) = I, P periodic, E = P S^b,
/// psi_b = E e^{-i OmegaTilde t sigma3}.
#[derive(Debug, Clone)]
pub struct BackgroundFrame {
    pub t: f64,
    pub psi: Matrix2,
    pub p: Matrix2,
    pub e: Matrix2,
    pub psi_b: Matrix2,
    pub omega_tilde: Complex64,
}

/// Monodromy matrix Z(k) = psi(tau, k) of psi_t + 2ik^2 sigma3 psi = V^b psi.
pub fn monodromy(pair: &PeriodicPair, k: Complex64, tol: f64) -> Result<Matrix2, FloquetError> {
    let free = Matrix2::sigma3().scale(Complex64::new(0.0, -2.0) * k * k);
    let sol = solve_matrix_ode(
        |t, y| (assemble_vb(pair, t, k) + free) * *y,
        0.0,
        pair.tau(),
        Matrix2::identity(),
        tol,
        tol,
    )?;
    Ok(sol.y)
}

/// Fundamental solution psi(t, k) for arbitrary t >= 0.
pub fn fundamental_solution(
    pair: &PeriodicPair,
    t: f64,
    k: Complex64,
    tol: f64,
) -> Result<Matrix2, FloquetError> {
    let free = Matrix2::sigma3().scale(Complex64::new(0.0, -2.0) * k * k);
    let sol = solve_matrix_ode(
        |s, y| (assemble_vb(pair, s, k) + free) * *y,
        0.0,
        t,
        Matrix2::identity(),
        tol,
        tol,
    )?;
    Ok(sol.y)
}

/// Principal-branch discriminant data derived from a monodromy matrix.
#[derive(Debug, Clone, Copy)]
pub struct Discriminant {
    pub g: Complex64,
    pub sqrt_g: Complex64,
    pub multiplier: Complex64,
    pub omega_tilde: Complex64,
}

/// G, z, and OmegaTilde from Z with the principal square root and logarithm.
pub fn discriminant(z_mat: &Matrix2, tau: f64) -> Discriminant {
    let tr = z_mat.trace();
    let g = tr * tr - 4.0;
    let sqrt_g = g.sqrt();
    let multiplier = 0.5 * (tr - sqrt_g);
    let omega_tilde = Complex64::new(0.0, 1.0) * multiplier.ln() / tau;
    Discriminant { g, sqrt_g, multiplier, omega_tilde }
}

/// The unit-determinant diagonalizer S^b with Z = S^b diag(z, 1/z) (S^b)^{-1}.
///
/// `sqrt_g` carries the caller's branch. Declines when k sits within
/// tolerance of a branch point (G or the relevant denominators vanish).
pub fn diagonalizer(z_mat: &Matrix2, sqrt_g: Complex64) -> Result<Matrix2, FloquetError> {
    let tr = z_mat.trace();
    let scale = 1.0 + tr.norm();
    if sqrt_g.norm() < 1e-7 * scale {
        return Err(FloquetError::BranchPointProximity(Complex64::new(0.0, 0.0)));
    }
    let diff = z_mat.m11 - z_mat.m22;
    let mut denom = diff - sqrt_g;
    if denom.norm() < 1e-9 * scale {
        // (Z11 - Z22 - sqrtG)(Z11 - Z22 + sqrtG) = -4 Z12 Z21 rewrites the
        // denominator away from the cancellation.
        let alt = diff + sqrt_g;
        if alt.norm() < 1e-9 * scale {
            return Err(FloquetError::BranchPointProximity(Complex64::new(0.0, 0.0)));
        }
        denom = -4.0 * z_mat.m12 * z_mat.m21 / alt;
        if denom.norm() < 1e-12 * scale {
            return Err(FloquetError::BranchPointProximity(Complex64::new(0.0, 0.0)));
        }
    }
    let prefactor = (-denom / (2.0 * sqrt_g)).sqrt();
    let one = Complex64::new(1.0, 0.0);
    Ok(Matrix2::new(
        one,
        -2.0 * z_mat.m12 / denom,
        2.0 * z_mat.m21 / denom,
        one,
    )
    .scale(prefactor))
}

/// Branch-continued values at one point of a continuation path.
#[derive(Debug, Clone, Copy)]
pub struct BranchState {
    pub k: Complex64,
    pub sqrt_g: Complex64,
    pub multiplier: Complex64,
    /// Unwrapped log z along the path.
    pub log_z: Complex64,
}

impl BranchState {
    pub fn omega_tilde(&self, tau: f64) -> Complex64 {
        Complex64::new(0.0, 1.0) * self.log_z / tau
    }

    /// Im OmegaTilde = log|z| / tau, independent of the log branch.
    pub fn im_omega_tilde(&self, tau: f64) -> f64 {
        self.log_z.re / tau
    }
}

/// z = (tr - sqrt G)/2 without cancellation: when that difference is the
/// smaller eigenvalue by far, compute the larger one and invert (det Z = 1).
fn stable_multiplier(tr: Complex64, sqrt_g: Complex64) -> Complex64 {
    let small = 0.5 * (tr - sqrt_g);
    let large = 0.5 * (tr + sqrt_g);
    if large.norm() > small.norm() {
        1.0 / large
    } else {
        small
    }
}

/// Continues sqrt G and log z from a large-|k| anchor where both are pinned
/// by the free-evolution asymptotics. Caches monodromy evaluations per pair.
pub struct BranchTracker<'a> {
    pair: &'a PeriodicPair,
    tol: f64,
    pub path_tol: f64,
    cache: HashMap<(u64, u64), Matrix2>,
}

fn key(k: Complex64) -> (u64, u64) {
    (k.re.to_bits(), k.im.to_bits())
}

impl<'a> BranchTracker<'a> {
    pub fn new(pair: &'a PeriodicPair, tol: f64) -> Self {
        BranchTracker { pair, tol, path_tol: 1e-2, cache: HashMap::new() }
    }

    pub fn pair(&self) -> &PeriodicPair {
        self.pair
    }

    pub fn monodromy_cached(&mut self, k: Complex64) -> Result<Matrix2, FloquetError> {
        if let Some(m) = self.cache.get(&key(k)) {
            return Ok(*m);
        }
        let m = monodromy(self.pair, k, self.tol)?;
        self.cache.insert(key(k), m);
        Ok(m)
    }

    /// Anchor radius: 4x the window scale, capped so the monodromy entries
    /// stay representable (|entries| ~ e^{2 tau Im k^2}).
    fn anchor_radius(&self, scale: f64) -> f64 {
        let desired = 4.0 * (1.0 + scale);
        // The cap keeps 2 tau Im k^2 at the anchor near 300 so that norms of
        // the monodromy entries stay finite in f64; it must win over the
        // keep-outside-the-window floor or the integration overflows.
        let cap = (300.0 / (2.0 * self.pair.tau() * std::f64::consts::FRAC_1_SQRT_2)).sqrt();
        desired.max(1.2 * scale + 0.5).min(cap)
    }

    /// Branch state at the anchor k_A = R e^{+-i pi/8}, where sqrt G must
    /// agree with 2i sin(2 k^2 tau) and log z with -2ik^2 tau. The anchor
    /// sits in the same half plane as the eventual target so that paths to
    /// conjugate targets are mirror images, which is what makes the
    /// conjugation symmetries of sqrt G and z hold for the continued branch.
    pub fn anchor_state(&mut self, scale: f64, upper: bool) -> Result<BranchState, FloquetError> {
        let tau = self.pair.tau();
        let angle = if upper {
            std::f64::consts::PI / 8.0
        } else {
            -std::f64::consts::PI / 8.0
        };
        let mut radius = self.anchor_radius(scale);
        for _ in 0..3 {
            let k = Complex64::from_polar(radius, angle);
            let z_mat = self.monodromy_cached(k)?;
            let tr = z_mat.trace();
            let g = tr * tr - 4.0;
            let principal = g.sqrt();
            let target = Complex64::new(0.0, 2.0) * (2.0 * k * k * tau).sin();
            let sqrt_g = if (principal - target).norm() <= (-principal - target).norm() {
                principal
            } else {
                -principal
            };
            if (sqrt_g - target).norm() <= 0.5 * target.norm() {
                let multiplier = stable_multiplier(tr, sqrt_g);
                let expected_im = (-Complex64::new(0.0, 2.0) * k * k * tau).im;
                let arg = multiplier.arg();
                let n = ((expected_im - arg) / (2.0 * std::f64::consts::PI)).round();
                let log_z = Complex64::new(
                    multiplier.norm().ln(),
                    arg + 2.0 * std::f64::consts::PI * n,
                );
                return Ok(BranchState { k, sqrt_g, multiplier, log_z });
            }
            // Growing past ~1.1x the overflow cap trades a clean failure here
            // for a non-finite ODE state, so retries stay close to it.
            let cap = (330.0 / (2.0 * tau * std::f64::consts::FRAC_1_SQRT_2)).sqrt();
            radius = (radius * 1.2).min(cap);
        }
        Err(FloquetError::ContinuationAmbiguous(Complex64::from_polar(radius, angle)))
    }

    /// One continuation move from `from` to `k_next`, bisecting the leg until
    /// sqrt G never jumps by more than 50% of its magnitude.
    pub fn step_to(
        &mut self,
        from: &BranchState,
        k_next: Complex64,
    ) -> Result<BranchState, FloquetError> {
        let mut state = *from;
        // Pending sub-targets, nearest first.
        let mut targets = vec![k_next];
        let mut bisections = 0usize;
        while let Some(target) = targets.last().copied() {
            let z_mat = self.monodromy_cached(target)?;
            let tr = z_mat.trace();
            let g = tr * tr - 4.0;
            let principal = g.sqrt();
            let cand = if (principal - state.sqrt_g).norm() <= (-principal - state.sqrt_g).norm() {
                principal
            } else {
                -principal
            };
            let allowed = 0.5 * state.sqrt_g.norm() + 1e-10 * (1.0 + tr.norm());
            if (cand - state.sqrt_g).norm() <= allowed
                || (target - state.k).norm() < 1e-13 * (1.0 + state.k.norm())
            {
                let multiplier = stable_multiplier(tr, cand);
                let ratio = multiplier / state.multiplier;
                let log_z = state.log_z + ratio.ln();
                state = BranchState { k: target, sqrt_g: cand, multiplier, log_z };
                targets.pop();
            } else {
                bisections += 1;
                if bisections > 4000 {
                    return Err(FloquetError::ContinuationAmbiguous(target));
                }
                targets.push(0.5 * (state.k + target));
            }
        }
        Ok(state)
    }

    /// Straight anchor-to-target continuation with radial detours of radius
    /// 3 * path_tol around every point in `avoid`.
    pub fn branch_at(
        &mut self,
        k_target: Complex64,
        avoid: &[Complex64],
        scale: f64,
    ) -> Result<BranchState, FloquetError> {
        let start = self.anchor_state(scale.max(k_target.norm()), k_target.im >= 0.0)?;
        let waypoints = detour_path(start.k, k_target, avoid, 3.0 * self.path_tol);
        let mut state = start;
        for wp in waypoints {
            state = self.step_to(&state, wp)?;
        }
        Ok(state)
    }
}

/// Waypoints from a to b, pushing interior points radially away from any
/// avoid point closer than `clearance`. Endpoints are kept exact.
fn detour_path(a: Complex64, b: Complex64, avoid: &[Complex64], clearance: f64) -> Vec<Complex64> {
    let n = 96usize;
    let mut out = Vec::with_capacity(n + 1);
    for i in 1..=n {
        let s = i as f64 / n as f64;
        let mut p = a + (b - a) * s;
        if i < n {
            for &q in avoid {
                let d = p - q;
                let dist = d.norm();
                if dist < clearance {
                    p = if dist < 1e-14 {
                        // Push perpendicular to the segment.
                        let dir = (b - a) / (b - a).norm();
                        q + Complex64::new(-dir.im, dir.re) * clearance
                    } else {
                        q + d * (clearance / dist)
                    };
                }
            }
        }
        out.push(p);
    }
    out
}

impl FloquetPoint {
    /// Assemble every Floquet quantity at k. With `anchored` the square root
    /// and logarithm follow the anchored continuation (avoiding `avoid`);
    /// otherwise the raw principal branch is used.
    pub fn compute(
        pair: &PeriodicPair,
        k: Complex64,
        tol: f64,
        anchored: bool,
        avoid: &[Complex64],
    ) -> Result<FloquetPoint, FloquetError> {
        let z_mat = monodromy(pair, k, tol)?;
        let (sqrt_g, multiplier, omega_tilde) = if anchored {
            let mut tracker = BranchTracker::new(pair, tol);
            let st = tracker.branch_at(k, avoid, k.norm())?;
            (st.sqrt_g, st.multiplier, st.omega_tilde(pair.tau()))
        } else {
            let d = discriminant(&z_mat, pair.tau());
            (d.sqrt_g, d.multiplier, d.omega_tilde)
        };
        let tr = z_mat.trace();
        let g = tr * tr - 4.0;
        let sb = diagonalizer(&z_mat, sqrt_g).ok();
        Ok(FloquetPoint {
            k,
            monodromy: z_mat,
            g,
            sqrt_g,
            multiplier,
            omega_tilde,
            sb,
            branch_anchored: anchored,
        })
    }
}

/// psi, P, E, psi_b at time t under the anchored branch.
pub fn background_eigenfunction(
    pair: &PeriodicPair,
    t: f64,
    k: Complex64,
    tol: f64,
) -> Result<BackgroundFrame, FloquetError> {
    let mut tracker = BranchTracker::new(pair, tol);
    let st = tracker.branch_at(k, &[], k.norm())?;
    let z_mat = tracker.monodromy_cached(k)?;
    let sb = diagonalizer(&z_mat, st.sqrt_g)?;
    let sb_inv = sb
        .inverse()
        .ok_or(FloquetError::BranchPointProximity(k))?;
    let omega_tilde = st.omega_tilde(pair.tau());
    let psi = fundamental_solution(pair, t, k, tol)?;
    let i = Complex64::new(0.0, 1.0);
    // e^{-t B} = S^b e^{i t OmegaTilde sigma3} (S^b)^{-1}
    let exp_neg_tb = sb * Matrix2::exp_sigma3(i * omega_tilde * t) * sb_inv;
    let p = psi * exp_neg_tb;
    let e = p * sb;
    let psi_b = e * Matrix2::exp_sigma3(-i * omega_tilde * t);
    Ok(BackgroundFrame { t, psi, p, e, psi_b, omega_tilde })
}

#[derive(Debug, Clone)]
pub struct AsymptoticsRow {
    pub angle: f64,
    pub radius: f64,
    /// |G + 4 sin^2(2k^2 tau)| * |k| over the envelope of the error terms.
    pub leading_ratio: f64,
    /// Residual after also subtracting the 1/k term -8 eta1 cos sin / k.
    pub first_order_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct AsymptoticsReport {
    pub eta1_tau: f64,
    pub rows: Vec<AsymptoticsRow>,
    pub pass: bool,
}

/// Validate G(k) against its large-k expansion along the given rays.
///
/// Rays must avoid the real and imaginary axes by at least 0.1 rad; radii
/// must be increasing. FAIL is flagged when the normalized leading residual
/// grows with radius along some ray.
pub fn check_asymptotics(
    pair: &PeriodicPair,
    rays: &[f64],
    radii: &[f64],
    tol: f64,
) -> Result<AsymptoticsReport, FloquetError> {
    assert!(radii.windows(2).all(|w| w[1] > w[0]), "radii must be increasing");
    for &a in rays {
        let m = (a.rem_euclid(std::f64::consts::FRAC_PI_2)).min(
            std::f64::consts::FRAC_PI_2 - a.rem_euclid(std::f64::consts::FRAC_PI_2),
        );
        assert!(m >= 0.1, "ray {a} too close to an axis");
    }
    let tau = pair.tau();
    let eta1_tau = eta(pair, tau)?.eta1;
    let mut rows = Vec::new();
    let mut pass = true;
    for &angle in rays {
        let mut first: Option<f64> = None;
        for &radius in radii {
            let k = Complex64::from_polar(radius, angle);
            let z_mat = monodromy(pair, k, tol)?;
            let tr = z_mat.trace();
            let g = tr * tr - 4.0;
            let w = 2.0 * k * k * tau;
            let s = w.sin();
            let c = w.cos();
            let envelope = 1.0
                + (Complex64::new(0.0, 2.0) * w).exp().norm()
                + (Complex64::new(0.0, -2.0) * w).exp().norm();
            let lead = (g + 4.0 * s * s) * k;
            let leading_ratio = lead.norm() / envelope;
            let first_order_ratio = (lead + 8.0 * eta1_tau * c * s).norm() / envelope;
            rows.push(AsymptoticsRow { angle, radius, leading_ratio, first_order_ratio });
            match first {
                None => first = Some(leading_ratio),
                Some(f0) => {
                    if leading_ratio > 2.0 * f0 + 1e-6 {
                        pass = false;
                    }
                }
            }
        }
    }
    Ok(AsymptoticsReport { eta1_tau, rows, pass })
}
