//! Spectral functions from sampled data: a(k), b(k) from an initial datum,
//! A(k), B(k) from boundary traces via a truncated Volterra series, the
//! global-relation residual, and the quotient determinant d(k).

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::background::{v_matrix, assemble_vb, BackgroundError, PeriodicPair};
use crate::floquet::{diagonalizer, BranchTracker, FloquetError};
use crate::numerics::{solve_matrix_ode, Matrix2, NumericsError};

/// Relative tail bound required beyond the last grid node.
pub const TAIL_BOUND: f64 = 1e-10;
/// Truncation threshold for the Neumann series terms.
pub const SERIES_TOL: f64 = 1e-12;
/// Maximum number of Neumann series terms.
pub const SERIES_MAX_TERMS: usize = 30;
/// Decay exponent of the boundary-trace model (1+t)^{-p}.
pub const DECAY_P: f64 = 3.5;
/// Margin required of Im(OmegaTilde + 2k^2) before a global-relation check.
pub const GROWTH_MARGIN: f64 = 0.1;

#[derive(Debug, Error)]
pub enum HalflineError {
    #[error("tail beyond x = {x_last} is {tail:.3e}, above the bound {bound:.3e}")]
    TailTooLarge { x_last: f64, tail: f64, bound: f64 },
    #[error("trace perturbation decays slower than the (1+t)^-7/2 model (late/early ratio {0:.3e})")]
    SlowDecay(f64),
    #[error("Neumann series did not reach tolerance after {0} terms")]
    SeriesStall(usize),
    #[error("invalid sampled data: {0}")]
    BadSamples(String),
    #[error(transparent)]
    Floquet(#[from] FloquetError),
    #[error(transparent)]
    Background(#[from] BackgroundError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Piecewise-cubic interpolant through strictly increasing nodes.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    grid: Vec<f64>,
    values: Vec<Complex64>,
}

impl SampledCurve {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self, HalflineError> {
        if grid.len() != values.len() {
            return Err(HalflineError::BadSamples(format!(
                "{} nodes vs {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.len() < 4 {
            return Err(HalflineError::BadSamples("need at least 4 nodes".into()));
        }
        if !grid.windows(2).all(|w| w[1] > w[0]) {
            return Err(HalflineError::BadSamples(
                "nodes must be strictly increasing".into(),
            ));
        }
        Ok(SampledCurve { grid, values })
    }

    pub fn first(&self) -> f64 {
        self.grid[0]
    }

    pub fn last(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// 4-point Lagrange interpolation on the bracketing stencil; zero beyond
    /// the last node, clamped stencil near the ends.
    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.grid.len();
        if x > self.last() {
            return Complex64::new(0.0, 0.0);
        }
        let x = x.max(self.first());
        let j = match self
            .grid
            .binary_search_by(|g| g.partial_cmp(&x).unwrap())
        {
            Ok(j) => j,
            Err(j) => j.saturating_sub(1),
        };
        let lo = j.saturating_sub(1).min(n - 4);
        let mut acc = Complex64::new(0.0, 0.0);
        for p in lo..lo + 4 {
            let mut w = 1.0;
            for q in lo..lo + 4 {
                if q != p {
                    w *= (x - self.grid[q]) / (self.grid[p] - self.grid[q]);
                }
            }
            acc += self.values[p] * w;
        }
        acc
    }
}

/// Initial datum sampled on [0, x_N] with an asserted decay bound
/// |u0(x)| <= M (1+x)^{-p}.
#[derive(Debug, Clone)]
pub struct SampledInitialDatum {
    pub curve: SampledCurve,
    pub decay_m: f64,
    pub decay_p: f64,
}

impl SampledInitialDatum {
    pub fn new(
        grid: Vec<f64>,
        values: Vec<Complex64>,
        decay_m: f64,
        decay_p: f64,
    ) -> Result<Self, HalflineError> {
        if grid.first() != Some(&0.0) {
            return Err(HalflineError::BadSamples("grid must start at x = 0".into()));
        }
        let curve = SampledCurve::new(grid, values)?;
        if !(decay_m >= 0.0) || !(decay_p > 1.0) {
            return Err(HalflineError::BadSamples(
                "need M >= 0 and decay exponent p > 1".into(),
            ));
        }
        let x_last = curve.last();
        let tail = decay_m * (1.0 + x_last).powf(-decay_p);
        let bound = TAIL_BOUND * decay_m.max(f64::MIN_POSITIVE);
        if tail > bound {
            return Err(HalflineError::TailTooLarge { x_last, tail, bound });
        }
        Ok(SampledInitialDatum { curve, decay_m, decay_p })
    }
}

/// One spectral evaluation point.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSample {
    #[serde(with = "crate::report::cpx")]
    pub k: Complex64,
    #[serde(with = "crate::report::cpx")]
    pub a: Complex64,
    #[serde(with = "crate::report::cpx")]
    pub b: Complex64,
    #[serde(rename = "A", with = "crate::report::cpx")]
    pub big_a: Complex64,
    #[serde(rename = "B", with = "crate::report::cpx")]
    pub big_b: Complex64,
    #[serde(with = "crate::report::cpx")]
    pub d: Complex64,
    pub gr_residual: f64,
    pub t_used: f64,
}

/// a(k), b(k) from the initial datum: integrate the x-part of the Lax pair
/// for mu3(x, 0, k) from the far end (where mu3 ~ I) down to x = 0 and read
/// off a = (mu3)_22, b = (mu3)_12.
pub fn initial_spectra(
    u0: &SampledInitialDatum,
    lambda: i32,
    k: Complex64,
    tol: f64,
) -> Result<(Complex64, Complex64), HalflineError> {
    let lam = lambda as f64;
    let i = Complex64::new(0.0, 1.0);
    let x_last = u0.curve.last();
    let s3 = Matrix2::sigma3();
    // Substitute s = x_last - x so the solver marches forward.
    let rhs = |s: f64, m: &Matrix2| {
        let x = x_last - s;
        let u = u0.curve.eval(x);
        let umat = Matrix2::new(
            Complex64::new(0.0, 0.0),
            u,
            lam * u.conj(),
            Complex64::new(0.0, 0.0),
        );
        ((s3 * *m - *m * s3).scale(-i * k) + umat * *m).scale(Complex64::new(-1.0, 0.0))
    };
    let sol = solve_matrix_ode(rhs, 0.0, x_last, Matrix2::identity(), tol, tol)?;
    Ok((sol.y.m22, sol.y.m12))
}

/// Interior state used by the Volterra iteration: the background frame and
/// the perturbation sampled on a uniform grid over [0, T].
struct VolterraGrid {
    t: Vec<f64>,
    e: Vec<Matrix2>,
    e_inv: Vec<Matrix2>,
    delta: Vec<Matrix2>,
    omega_tilde: Complex64,
    sb: Matrix2,
}

fn build_grid(
    pair: &PeriodicPair,
    g0: &SampledCurve,
    g1: &SampledCurve,
    k: Complex64,
    horizon: f64,
    n_cells: usize,
    tol: f64,
) -> Result<VolterraGrid, HalflineError> {
    let mut tracker = BranchTracker::new(pair, tol);
    let st = tracker.branch_at(k, &[], k.norm())?;
    let z = tracker.monodromy_cached(k)?;
    let sb = diagonalizer(&z, st.sqrt_g)?;
    let omega_tilde = st.omega_tilde(pair.tau());
    let i = Complex64::new(0.0, 1.0);

    let h = horizon / n_cells as f64;
    let t: Vec<f64> = (0..=n_cells).map(|j| j as f64 * h).collect();

    // One forward pass of the t-part ODE gives psi on the whole grid.
    let rhs = |t: f64, m: &Matrix2| {
        (assemble_vb(pair, t, k) - Matrix2::sigma3().scale(2.0 * i * k * k)) * *m
    };
    let mut psi = Matrix2::identity();
    let mut e = Vec::with_capacity(t.len());
    let mut e_inv = Vec::with_capacity(t.len());
    let mut delta = Vec::with_capacity(t.len());
    for (j, &tj) in t.iter().enumerate() {
        if j > 0 {
            psi = solve_matrix_ode(rhs, t[j - 1], tj, psi, tol, tol)?.y;
        }
        // E(t) = psi(t) S^b e^{i OmegaTilde t sigma3}.
        let ej = psi * sb * Matrix2::exp_sigma3(i * omega_tilde * tj);
        let ej_inv = ej
            .inverse()
            .ok_or(FloquetError::BranchPointProximity(k))?;
        let v = v_matrix(pair.lambda_f(), g0.eval(tj), g1.eval(tj), k);
        delta.push(v - assemble_vb(pair, tj, k));
        e.push(ej);
        e_inv.push(ej_inv);
    }
    Ok(VolterraGrid { t, e, e_inv, delta, omega_tilde, sb })
}

/// Reject traces whose deviation from the background decays slower than the
/// (1+t)^{-7/2} model: compare the scaled deviation on the late half of the
/// horizon against the early half.
fn check_decay(grid: &VolterraGrid) -> Result<(), HalflineError> {
    let n = grid.t.len();
    let scaled: Vec<f64> = grid
        .t
        .iter()
        .zip(&grid.delta)
        .map(|(&t, d)| d.max_norm() * (1.0 + t).powf(DECAY_P))
        .collect();
    // Sampling noise shows up as a tiny constant-amplitude perturbation;
    // it must not trip the decay model.
    let amp = grid.delta.iter().map(|d| d.max_norm()).fold(0.0, f64::max);
    if amp < 1e-6 {
        return Ok(());
    }
    let early = scaled[..n / 2].iter().cloned().fold(0.0, f64::max);
    let late = scaled[n / 2..].iter().cloned().fold(0.0, f64::max);
    let floor = 1e-13;
    if late > 4.0 * early.max(floor) {
        return Err(HalflineError::SlowDecay(late / early.max(floor)));
    }
    Ok(())
}

/// Cumulative right-to-left quadrature: out[j] = int_{t_j}^{T} w(t') f(t') dt'
/// with the integrand interpolated cubically between nodes.
fn cumulative_integral(t: &[f64], f: &[[Complex64; 2]]) -> Vec<[Complex64; 2]> {
    let n = t.len();
    let h = t[1] - t[0];
    let mut out = vec![[Complex64::new(0.0, 0.0); 2]; n];
    for j in (0..n - 1).rev() {
        // Cubic Newton-Cotes over one cell using the bracketing stencil.
        let lo = j.saturating_sub(1).min(n - 4);
        let idx = [lo, lo + 1, lo + 2, lo + 3];
        let mut cell = [Complex64::new(0.0, 0.0); 2];
        for (p, &ip) in idx.iter().enumerate() {
            // Weight = integral over [t_j, t_{j+1}] of the Lagrange basis.
            let w = lagrange_cell_weight(t, &idx, p, t[j], t[j + 1]);
            cell[0] += f[ip][0] * w;
            cell[1] += f[ip][1] * w;
        }
        let _ = h;
        out[j][0] = out[j + 1][0] + cell[0];
        out[j][1] = out[j + 1][1] + cell[1];
    }
    out
}

/// Integral over [a, b] of the Lagrange basis polynomial through the stencil
/// nodes, evaluated with 4-point Gauss-Legendre (exact for cubics).
fn lagrange_cell_weight(t: &[f64], idx: &[usize; 4], p: usize, a: f64, b: f64) -> f64 {
    const GL_X: [f64; 4] = [
        -0.8611363115940526,
        -0.33998104358485626,
        0.33998104358485626,
        0.8611363115940526,
    ];
    const GL_W: [f64; 4] = [
        0.34785484513745385,
        0.6521451548625461,
        0.6521451548625461,
        0.34785484513745385,
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for q in 0..4 {
        let x = mid + half * GL_X[q];
        let mut w = 1.0;
        for r in 0..4 {
            if r != p {
                w *= (x - t[idx[r]]) / (t[idx[p]] - t[idx[r]]);
            }
        }
        acc += GL_W[q] * w;
    }
    acc * half
}

/// Outcome of the Volterra iteration for one column.
pub struct VolterraResult {
    /// Psi(t) on the grid (the iterated column of mu1(0, t, k)).
    pub psi: Vec<[Complex64; 2]>,
    /// The unperturbed background column [E(t)]_2 on the same grid.
    pub background: Vec<[Complex64; 2]>,
    pub t: Vec<f64>,
    /// Sup-norm of each Neumann term over the grid.
    pub term_norms: Vec<f64>,
    pub omega_tilde: Complex64,
    pub sb: Matrix2,
}

fn second_column_norm(v: &[[Complex64; 2]]) -> f64 {
    v.iter()
        .map(|c| c[0].norm().max(c[1].norm()))
        .fold(0.0, f64::max)
}

/// Iterate Psi_{l+1}(t) = -int_t^T E1(t, t', k) Delta(t') Psi_l(t') dt' for
/// the second column, starting from Psi_0 = [E]_2.
fn volterra_iterate(grid: &VolterraGrid) -> Result<VolterraResult, HalflineError> {
    let n = grid.t.len();
    let i = Complex64::new(0.0, 1.0);
    let two_i_om = 2.0 * i * grid.omega_tilde;
    let zero = Complex64::new(0.0, 0.0);

    let mut psi: Vec<[Complex64; 2]> = grid.e.iter().map(|e| [e.m12, e.m22]).collect();
    let background = psi.clone();
    let mut term: Vec<[Complex64; 2]> = psi.clone();
    let scale = second_column_norm(&psi).max(1.0);
    let mut term_norms = vec![second_column_norm(&term)];

    for _ in 0..SERIES_MAX_TERMS {
        if *term_norms.last().unwrap() < SERIES_TOL * scale {
            return Ok(VolterraResult {
                psi,
                background,
                t: grid.t.clone(),
                term_norms,
                omega_tilde: grid.omega_tilde,
                sb: grid.sb,
            });
        }
        // f(t') = e^{2i OmegaTilde t'} selective on the first component of
        // E^{-1} Delta term; second component carries no exponential.
        let mut f: Vec<[Complex64; 2]> = Vec::with_capacity(n);
        for j in 0..n {
            let d = grid.delta[j];
            let v = [
                d.m11 * term[j][0] + d.m12 * term[j][1],
                d.m21 * term[j][0] + d.m22 * term[j][1],
            ];
            let ei = grid.e_inv[j];
            let g = [
                ei.m11 * v[0] + ei.m12 * v[1],
                ei.m21 * v[0] + ei.m22 * v[1],
            ];
            let w = (two_i_om * grid.t[j]).exp();
            f.push([g[0] * w, g[1]]);
        }
        let cum = cumulative_integral(&grid.t, &f);
        for j in 0..n {
            let w = (-two_i_om * grid.t[j]).exp();
            let g = [cum[j][0] * w, cum[j][1]];
            let e = grid.e[j];
            let next = [
                -(e.m11 * g[0] + e.m12 * g[1]),
                -(e.m21 * g[0] + e.m22 * g[1]),
            ];
            term[j] = next;
        }
        let _ = zero;
        term_norms.push(second_column_norm(&term));
        for j in 0..n {
            psi[j][0] += term[j][0];
            psi[j][1] += term[j][1];
        }
    }
    Err(HalflineError::SeriesStall(SERIES_MAX_TERMS))
}

/// A(k), B(k) from sampled boundary traces on [0, T] via the truncated
/// Volterra series: A = Psi_2(0, k), B = Psi_1(0, k).
pub fn boundary_spectra(
    pair: &PeriodicPair,
    g0: &SampledCurve,
    g1: &SampledCurve,
    k: Complex64,
    horizon: f64,
    tol: f64,
) -> Result<(Complex64, Complex64), HalflineError> {
    let res = boundary_spectra_full(pair, g0, g1, k, horizon, tol)?;
    Ok((res.psi[0][1], res.psi[0][0]))
}

/// As `boundary_spectra` but exposing the whole iterate for decay studies.
pub fn boundary_spectra_full(
    pair: &PeriodicPair,
    g0: &SampledCurve,
    g1: &SampledCurve,
    k: Complex64,
    horizon: f64,
    tol: f64,
) -> Result<VolterraResult, HalflineError> {
    if !(horizon > 0.0) || horizon > g0.last() + 1e-9 || horizon > g1.last() + 1e-9 {
        return Err(HalflineError::BadSamples(
            "horizon must be positive and covered by the traces".into(),
        ));
    }
    let n_cells = ((horizon / pair.tau()).ceil() as usize * 512).clamp(512, 16384);
    let grid = build_grid(pair, g0, g1, k, horizon, n_cells, tol)?;
    check_decay(&grid)?;
    volterra_iterate(&grid)
}

/// |A b - B a|.
pub fn global_relation_residual(sample: &SpectralSample) -> f64 {
    (sample.big_a * sample.b - sample.big_b * sample.a).norm()
}

/// |(A b - B a)(t1) - (A b - B a)(t2)| for spectral values recorded at two
/// times.
pub fn t_independence_check(
    at_t1: (Complex64, Complex64, Complex64, Complex64),
    at_t2: (Complex64, Complex64, Complex64, Complex64),
) -> f64 {
    let f = |(a, b, big_a, big_b): (Complex64, Complex64, Complex64, Complex64)| {
        big_a * b - big_b * a
    };
    (f(at_t1) - f(at_t2)).norm()
}

/// d(k) = a(k) conj(A(conj k)) - lambda b(k) conj(B(conj k)).
pub fn compute_d(
    a: Complex64,
    b: Complex64,
    big_a_at_kbar: Complex64,
    big_b_at_kbar: Complex64,
    lambda: i32,
) -> Complex64 {
    a * big_a_at_kbar.conj() - lambda as f64 * b * big_b_at_kbar.conj()
}

/// True when k sits inside the region where the global relation is checked:
/// Im(OmegaTilde + 2k^2) above the fixed margin.
pub fn growth_margin_ok(omega_tilde: Complex64, k: Complex64) -> bool {
    (omega_tilde + 2.0 * k * k).im > GROWTH_MARGIN
}

/// Parse a CSV curve with header `x,re,im` or `t,re,im`.
pub fn parse_curve_csv(text: &str) -> Result<SampledCurve, HalflineError> {
    let mut grid = Vec::new();
    let mut values = Vec::new();
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) => break l.trim(),
            None => return Err(HalflineError::BadSamples("empty CSV".into())),
        }
    };
    let cols: Vec<&str> = header.split(',').map(|c| c.trim()).collect();
    if cols.len() != 3 || (cols[0] != "x" && cols[0] != "t") || cols[1] != "re" || cols[2] != "im" {
        return Err(HalflineError::BadSamples(format!(
            "expected header x,re,im or t,re,im, got {header:?}"
        )));
    }
    for (ln, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(|c| c.trim()).collect();
        if parts.len() != 3 {
            return Err(HalflineError::BadSamples(format!(
                "line {}: expected 3 fields",
                ln + 1
            )));
        }
        let mut nums = [0.0; 3];
        for (slot, raw) in nums.iter_mut().zip(&parts) {
            *slot = raw.parse::<f64>().map_err(|e| {
                HalflineError::BadSamples(format!("line {}: {e}", ln + 1))
            })?;
        }
        grid.push(nums[0]);
        values.push(Complex64::new(nums[1], nums[2]));
    }
    SampledCurve::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::DEFAULT_TOL;
    use crate::soliton::{soliton_params, soliton_spectra};

    fn cpx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sampled_fn<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> SampledCurve {
        let grid: Vec<f64> = (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect();
        let values = grid.iter().map(|&x| f(x)).collect();
        SampledCurve::new(grid, values).unwrap()
    }

    fn soliton_datum(gamma: f64, omega: f64) -> SampledInitialDatum {
        let root = omega.sqrt();
        // sech decays like e^{-x sqrt(omega)}; pick x_N so the tail bound holds.
        let x_n: f64 = 40.0 / root;
        let n = 4000;
        let grid: Vec<f64> = (0..=n).map(|j| x_n * j as f64 / n as f64).collect();
        let values = grid
            .iter()
            .map(|&x| cpx(root / (x * root - gamma).cosh(), 0.0))
            .collect();
        // The asserted algebraic bound: M (1+x)^{-p} dominating the profile.
        let p = 12.0;
        let m = root * (1.0f64 + x_n).powf(p) * (x_n * root - gamma).cosh().recip();
        let m = m.max(2.0 * root);
        SampledInitialDatum::new(grid, values, m, p).unwrap()
    }

    #[test]
    fn curve_interpolation_quartic_accuracy() {
        let f = |x: f64| cpx((1.3 * x).sin(), (0.7 * x).cos());
        let c = sampled_fn(f, 0.0, 5.0, 200);
        let mut worst = 0.0_f64;
        for j in 0..499 {
            let x = 5.0 * (j as f64 + 0.31) / 500.0;
            worst = worst.max((c.eval(x) - f(x)).norm());
        }
        assert!(worst < 1e-6, "worst {}", worst);
        assert_eq!(c.eval(6.0), cpx(0.0, 0.0));
    }

    #[test]
    fn datum_tail_guard() {
        let grid: Vec<f64> = (0..=10).map(|j| j as f64).collect();
        let values: Vec<Complex64> = grid.iter().map(|&x| cpx((-x).exp(), 0.0)).collect();
        // (1+10)^{-2} = 8e-3 > 1e-10: rejected.
        assert!(matches!(
            SampledInitialDatum::new(grid.clone(), values.clone(), 1.0, 2.0),
            Err(HalflineError::TailTooLarge { .. })
        ));
        assert!(SampledInitialDatum::new(grid, values, 1.0, 11.0).is_ok());
    }

    #[test]
    fn initial_spectra_zero_datum() {
        let grid: Vec<f64> = (0..=10).map(|j| j as f64 * 0.5).collect();
        let values = vec![cpx(0.0, 0.0); grid.len()];
        let u0 = SampledInitialDatum::new(grid, values, 0.0, 4.0).unwrap();
        let (a, b) = initial_spectra(&u0, -1, cpx(0.7, 0.4), 1e-12).unwrap();
        assert!((a - 1.0).norm() < 1e-12);
        assert!(b.norm() < 1e-12);
    }

    #[test]
    fn initial_spectra_soliton_oracle() {
        let u0 = soliton_datum(0.0, 4.0);
        let (a, b) = initial_spectra(&u0, -1, cpx(1.0, 0.0), 1e-12).unwrap();
        assert!((a - cpx(0.5, -0.5)).norm() < 1e-8, "a = {}", a);
        assert!((b - cpx(-0.5, -0.5)).norm() < 1e-8, "b = {}", b);
    }

    #[test]
    fn initial_spectra_unit_determinant_real_k() {
        let u0 = soliton_datum(0.6, 2.0);
        for &kr in &[0.3, 0.9, 1.7, 2.4] {
            let (a, b) = initial_spectra(&u0, -1, cpx(kr, 0.0), 1e-12).unwrap();
            let det = a.norm_sqr() - (-1.0_f64) * b.norm_sqr();
            assert!((det - 1.0).abs() < 1e-9, "det {} at k {}", det, kr);
        }
    }

    #[test]
    fn boundary_spectra_zero_perturbation() {
        // Traces identical to the background: Psi = [E]_2, so (A, B) are the
        // second-column entries of S^b.
        let p = soliton_params(0.9, 2.0).unwrap();
        let pair = p.pair();
        let tau = p.tau();
        let horizon = 3.0 * tau;
        let g0 = sampled_fn(
            |t| cpx(p.alpha, 0.0) * cpx(0.0, p.omega * t).exp(),
            0.0,
            horizon + 1.0,
            20000,
        );
        let g1 = sampled_fn(
            |t| cpx(p.c, 0.0) * cpx(0.0, p.omega * t).exp(),
            0.0,
            horizon + 1.0,
            20000,
        );
        let k = cpx(0.8, 0.6);
        let res = boundary_spectra_full(&pair, &g0, &g1, k, horizon, DEFAULT_TOL).unwrap();
        // Interpolation noise may add a couple of tiny correction terms.
        assert!(res.term_norms.len() <= 3);
        let (big_a, big_b) = (res.psi[0][1], res.psi[0][0]);
        assert!((big_a - res.sb.m22).norm() < 1e-9);
        assert!((big_b - res.sb.m12).norm() < 1e-9);
        // Against the closed forms.
        let (_, _, a_exact, b_exact) = soliton_spectra(&p, k).unwrap();
        assert!((big_a - a_exact).norm() < 1e-8, "A {} vs {}", big_a, a_exact);
        assert!((big_b - b_exact).norm() < 1e-8, "B {} vs {}", big_b, b_exact);
    }

    #[test]
    fn boundary_spectra_t_horizon_independent() {
        let p = soliton_params(0.5, 3.0).unwrap();
        let pair = p.pair();
        let tau = p.tau();
        let g0 = sampled_fn(
            |t| cpx(p.alpha, 0.0) * cpx(0.0, p.omega * t).exp(),
            0.0,
            9.0 * tau,
            40000,
        );
        let g1 = sampled_fn(
            |t| cpx(p.c, 0.0) * cpx(0.0, p.omega * t).exp(),
            0.0,
            9.0 * tau,
            40000,
        );
        let k = cpx(0.5, 0.9);
        let (a3, b3) = boundary_spectra(&pair, &g0, &g1, k, 3.0 * tau, DEFAULT_TOL).unwrap();
        let (a5, b5) = boundary_spectra(&pair, &g0, &g1, k, 5.0 * tau, DEFAULT_TOL).unwrap();
        assert!((a3 - a5).norm() < 1e-9);
        assert!((b3 - b5).norm() < 1e-9);
    }

    #[test]
    fn perturbed_series_terms_decay() {
        // Background plus an algebraically decaying perturbation: terms must
        // fall off at least geometrically after the first few.
        let p = soliton_params(0.4, 4.0).unwrap();
        let pair = p.pair();
        let tau = p.tau();
        let horizon = 6.0 * tau;
        let eps = 1e-2;
        let g0 = sampled_fn(
            |t| (cpx(p.alpha, 0.0) + eps * (1.0 + t).powf(-DECAY_P)) * cpx(0.0, p.omega * t).exp(),
            0.0,
            horizon + 1.0,
            6000,
        );
        let g1 = sampled_fn(
            |t| cpx(p.c, 0.0) * cpx(0.0, p.omega * t).exp(),
            0.0,
            horizon + 1.0,
            6000,
        );
        let k = cpx(0.9, 0.7);
        let res = boundary_spectra_full(&pair, &g0, &g1, k, horizon, DEFAULT_TOL).unwrap();
        assert!(res.term_norms.len() >= 3);
        for w in res.term_norms[2.min(res.term_norms.len() - 1)..].windows(2) {
            assert!(w[1] < w[0], "terms not decreasing: {:?}", res.term_norms);
        }
    }

    #[test]
    fn slow_decay_guard() {
        // A perturbation that does not die out at all trips the decay check.
        let p = soliton_params(0.0, 4.0).unwrap();
        let pair = p.pair();
        let tau = p.tau();
        let horizon = 6.0 * tau;
        let g0 = sampled_fn(
            |t| (cpx(p.alpha, 0.0) + 0.05) * cpx(0.0, p.omega * t).exp(),
            0.0,
            horizon + 1.0,
            3000,
        );
        let g1 = sampled_fn(
            |t| cpx(p.c, 0.0) * cpx(0.0, p.omega * t).exp(),
            0.0,
            horizon + 1.0,
            3000,
        );
        // A constant offset scaled by (1+t)^{7/2} grows without bound.
        let err = boundary_spectra(&pair, &g0, &g1, cpx(0.8, 0.6), horizon, DEFAULT_TOL);
        assert!(matches!(err, Err(HalflineError::SlowDecay(_))), "{err:?}");
    }

    #[test]
    fn global_relation_soliton_consistency() {
        let p = soliton_params(0.0, 4.0).unwrap();
        let pair = p.pair();
        let tau = p.tau();
        let u0 = soliton_datum(0.0, 4.0);
        let horizon = 3.0 * tau;
        let g0 = sampled_fn(
            |t| cpx(p.alpha, 0.0) * cpx(0.0, p.omega * t).exp(),
            0.0,
            horizon + 1.0,
            3000,
        );
        let g1 = sampled_fn(
            |t| cpx(p.c, 0.0) * cpx(0.0, p.omega * t).exp(),
            0.0,
            horizon + 1.0,
            3000,
        );
        let k = cpx(1.0, 1.0);
        let (a, b) = initial_spectra(&u0, -1, k, 1e-12).unwrap();
        let (big_a, big_b) = boundary_spectra(&pair, &g0, &g1, k, horizon, DEFAULT_TOL).unwrap();
        let sample = SpectralSample {
            k,
            a,
            b,
            big_a,
            big_b,
            d: compute_d(a, b, big_a, big_b, -1),
            gr_residual: 0.0,
            t_used: horizon,
        };
        let res = global_relation_residual(&sample);
        assert!(res <= 1e-8, "residual {}", res);

        // Mismatched data: soliton initial datum with zero-background traces.
        let zero_pair = PeriodicPair::zero(-1, tau).unwrap();
        let zg = sampled_fn(|_| cpx(0.0, 0.0), 0.0, horizon + 1.0, 64);
        let (za, zb) = boundary_spectra(&zero_pair, &zg, &zg, k, horizon, DEFAULT_TOL).unwrap();
        let bad = SpectralSample {
            k,
            a,
            b,
            big_a: za,
            big_b: zb,
            d: compute_d(a, b, za, zb, -1),
            gr_residual: 0.0,
            t_used: horizon,
        };
        assert!(global_relation_residual(&bad) > 1e-3);
    }

    #[test]
    fn d_and_t_independence() {
        // Zero data: a = A = 1, b = B = 0, d = 1, all residuals vanish.
        let d = compute_d(cpx(1.0, 0.0), cpx(0.0, 0.0), cpx(1.0, 0.0), cpx(0.0, 0.0), -1);
        assert!((d - 1.0).norm() < 1e-15);
        let z = (cpx(1.0, 0.0), cpx(0.0, 0.0), cpx(1.0, 0.0), cpx(0.0, 0.0));
        assert_eq!(t_independence_check(z, z), 0.0);

        // Soliton closed forms: d(k) -> 1 along arg k = pi/8.
        let p = soliton_params(0.7, 2.0).unwrap();
        let dir = Complex64::from_polar(1.0, std::f64::consts::PI / 8.0);
        let mut prev = f64::INFINITY;
        for &r in &[5.0, 20.0, 80.0] {
            let k = dir * r;
            let (a, b, _, _) = soliton_spectra(&p, k).unwrap();
            let (_, _, big_a, big_b) = soliton_spectra(&p, k.conj()).unwrap();
            let d = compute_d(a, b, big_a, big_b, -1);
            let dev = (d - 1.0).norm();
            assert!(dev < prev);
            prev = dev;
        }
        assert!(prev < 0.05);
    }

    #[test]
    fn growth_margin_and_csv() {
        // Zero background: OmegaTilde = 2k^2, margin is Im(4k^2).
        assert!(growth_margin_ok(2.0 * cpx(1.0, 1.0).powi(2), cpx(1.0, 1.0)));
        assert!(!growth_margin_ok(2.0 * cpx(1.0, -1.0).powi(2), cpx(1.0, -1.0)));

        let text = "x,re,im\n0,1.0,0.0\n1,0.5,0.1\n2,0.2,0.0\n3,0.1,0.0\n";
        let c = parse_curve_csv(text).unwrap();
        assert_eq!(c.first(), 0.0);
        assert_eq!(c.last(), 3.0);
        assert!((c.eval(1.0) - cpx(0.5, 0.1)).norm() < 1e-15);
        assert!(parse_curve_csv("a,b\n1,2\n").is_err());
        assert!(parse_curve_csv("t,re,im\n0,1,0\n1,oops,0\n2,0,0\n3,0,0\n").is_err());
    }
}
