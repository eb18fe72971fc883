//! Zero location for the Floquet discriminant, domain labeling, and the
//! asymptotic-consistency verdict: a periodic pair passes iff G has no
//! odd-order zeros adjacent to D1 (upper half plane) or D4 (lower).

use crate::background::PeriodicPair;
use crate::floquet::{monodromy, BranchTracker, FloquetError};
use crate::numerics::{winding_number, Contour, NumericsError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

/// Zero locations are resolved to this tolerance. The classification circle
/// radius and the real-axis attribution cutoff are multiples of it.
pub const DEFAULT_LOC_TOL: f64 = 2e-3;
/// Samples with |Im k| or |Im OmegaTilde| below this go to `boundary`.
pub const BOUNDARY_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_DEPTH: usize = 40;
/// ODE tolerance for zero hunting. Tight because G near a multiplicity-4
/// zero is quartically small and winding needs it above the noise floor.
const ODE_TOL: f64 = 1e-11;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("subdivision reached max depth with unresolved zero clusters")]
    DepthExceeded,
    #[error("{0:.0}% of classification samples fell on the domain boundary")]
    Undecidable(f64),
    #[error("denominator vanished within tolerance at k = {0}")]
    DivisionNearZero(Complex64),
    #[error("contour could not be nudged off a zero")]
    StuckOnZero,
    #[error(transparent)]
    Floquet(#[from] FloquetError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Closed rectangle in the spectral plane.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Window {
        assert!(re_min < re_max && im_min < im_max);
        Window { re_min, re_max, im_min, im_max }
    }

    pub fn square(half_side: f64) -> Window {
        Window::new(-half_side, half_side, -half_side, half_side)
    }

    pub fn contains(&self, k: Complex64) -> bool {
        k.re >= self.re_min && k.re <= self.re_max && k.im >= self.im_min && k.im <= self.im_max
    }

    pub fn max_side(&self) -> f64 {
        (self.re_max - self.re_min).max(self.im_max - self.im_min)
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn corner_radius(&self) -> f64 {
        [self.re_min, self.re_max]
            .iter()
            .flat_map(|&re| {
                [self.im_min, self.im_max]
                    .iter()
                    .map(move |&im| Complex64::new(re, im).norm())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_conjugation_symmetric(&self, tol: f64) -> bool {
        (self.im_min + self.im_max).abs() <= tol * self.max_side()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    G,
    Z12,
    Z21,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HalfPlane {
    Upper,
    Lower,
    RealAxis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DomainLabel {
    D1,
    D2,
    D3,
    D4,
    #[serde(rename = "boundary")]
    Boundary,
}

/// The three built-in placements of the branch cut at an odd-order zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutStrategy {
    /// Cut along the ray from the origin through the zero, outward.
    Radial,
    /// Cut along the local Im OmegaTilde = 0 level direction.
    LevelCurve,
    /// Cut straight toward the real axis.
    Vertical,
}

impl CutStrategy {
    pub const ALL: [CutStrategy; 3] =
        [CutStrategy::Radial, CutStrategy::LevelCurve, CutStrategy::Vertical];

    pub fn name(&self) -> &'static str {
        match self {
            CutStrategy::Radial => "radial",
            CutStrategy::LevelCurve => "level-curve",
            CutStrategy::Vertical => "vertical",
        }
    }
}

impl std::str::FromStr for CutStrategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "radial" => Ok(CutStrategy::Radial),
            "level-curve" => Ok(CutStrategy::LevelCurve),
            "vertical" => Ok(CutStrategy::Vertical),
            other => Err(format!("unknown cut strategy: {other}")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroRecord {
    #[serde(with = "crate::report::cpx")]
    pub location: Complex64,
    pub multiplicity: usize,
    pub parity: Parity,
    pub kind: TargetKind,
    pub half_plane: HalfPlane,
    pub adjacency: BTreeSet<DomainLabel>,
    pub violating: bool,
}

impl ZeroRecord {
    pub fn unclassified(location: Complex64, multiplicity: usize, kind: TargetKind) -> ZeroRecord {
        let parity = if multiplicity % 2 == 1 { Parity::Odd } else { Parity::Even };
        let half_plane = if location.im > DEFAULT_LOC_TOL {
            HalfPlane::Upper
        } else if location.im < -DEFAULT_LOC_TOL {
            HalfPlane::Lower
        } else {
            HalfPlane::RealAxis
        };
        ZeroRecord {
            location,
            multiplicity,
            parity,
            kind,
            half_plane,
            adjacency: BTreeSet::new(),
            violating: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Consistent,
    Inconsistent,
    Undecided,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub witnesses: Vec<ZeroRecord>,
    pub window: Window,
    pub cut_strategy: String,
    pub notes: String,
}

/// Result of a zero scan: records plus the argument-principle total for the
/// whole window. `complete` is false when subdivision hit max_depth.
#[derive(Debug, Clone)]
pub struct ZeroScan {
    pub records: Vec<ZeroRecord>,
    pub total_winding: i32,
    pub complete: bool,
}

fn bits(k: Complex64) -> (u64, u64) {
    (k.re.to_bits(), k.im.to_bits())
}

/// Cached evaluator of G, Z12, or Z21. ODE failures surface as NaN, which
/// the winding routine reports as NonFinite.
struct TargetEval<'a> {
    pair: &'a PeriodicPair,
    kind: TargetKind,
    cache: HashMap<(u64, u64), Complex64>,
}

impl<'a> TargetEval<'a> {
    fn new(pair: &'a PeriodicPair, kind: TargetKind) -> Self {
        TargetEval { pair, kind, cache: HashMap::new() }
    }

    fn eval(&mut self, k: Complex64) -> Complex64 {
        if let Some(v) = self.cache.get(&bits(k)) {
            return *v;
        }
        let v = match monodromy(self.pair, k, ODE_TOL) {
            Ok(z) => match self.kind {
                TargetKind::G => {
                    let tr = z.trace();
                    tr * tr - 4.0
                }
                TargetKind::Z12 => z.m12,
                TargetKind::Z21 => z.m21,
            },
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        };
        self.cache.insert(bits(k), v);
        v
    }
}

/// Winding over a rectangle, retrying with nudged sides when the contour
/// runs through a zero. The nudge never exceeds 1% of the side length and
/// only moves sides outward so no zero is lost.
fn rect_winding(
    eval: &mut TargetEval,
    w: &Window,
    outward_only: bool,
) -> Result<(i32, Window), SpectrumError> {
    let side_re = w.re_max - w.re_min;
    let side_im = w.im_max - w.im_min;
    let mut current = *w;
    for attempt in 0..8 {
        let contour =
            Contour::rectangle(current.re_min, current.re_max, current.im_min, current.im_max);
        match winding_number(|k| eval.eval(k), &contour, 64) {
            Ok(n) => return Ok((n, current)),
            Err(NumericsError::ZeroOnContour { .. }) | Err(NumericsError::PhaseJump) => {
                let f = 0.002 * (attempt + 1) as f64;
                if outward_only {
                    current = Window::new(
                        current.re_min - f * side_re,
                        current.re_max + f * side_re,
                        current.im_min - f * side_im,
                        current.im_max + f * side_im,
                    );
                } else {
                    current = Window::new(
                        current.re_min + f * side_re,
                        current.re_max + f * side_re,
                        current.im_min + f * side_im,
                        current.im_max + f * side_im,
                    );
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(SpectrumError::StuckOnZero)
}

fn circle_winding(
    eval: &mut TargetEval,
    center: Complex64,
    radius: f64,
) -> Result<i32, SpectrumError> {
    let mut r = radius;
    for _ in 0..6 {
        let contour = Contour::Circle { center, radius: r };
        match winding_number(|k| eval.eval(k), &contour, 96) {
            Ok(n) => return Ok(n),
            Err(NumericsError::ZeroOnContour { .. }) | Err(NumericsError::PhaseJump) => {
                r *= 1.17;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(SpectrumError::StuckOnZero)
}

/// Locate all zeros of the target function inside the window by adaptive
/// quadrisection on argument-principle counts.
pub fn find_zeros(
    pair: &PeriodicPair,
    window: Window,
    target: TargetKind,
    max_depth: usize,
) -> Result<ZeroScan, SpectrumError> {
    let mut eval = TargetEval::new(pair, target);
    let (total_winding, root) = rect_winding(&mut eval, &window, true)?;

    let mut complete = true;
    let mut centers: Vec<Complex64> = Vec::new();
    let mut queue: Vec<(Window, i32, usize)> = vec![(root, total_winding, 0)];
    while let Some((cell, count, depth)) = queue.pop() {
        if count == 0 {
            continue;
        }
        if cell.max_side() < DEFAULT_LOC_TOL {
            centers.push(cell.center());
            continue;
        }
        if depth >= max_depth {
            complete = false;
            centers.push(cell.center());
            continue;
        }
        // Quadrisect with the split lines jittered away from exact zeros
        // (the first splits of symmetric windows land on the axes, where
        // zeros live).
        let mut placed = false;
        'jitter: for &j in &[0.0, 0.013, -0.017, 0.029, -0.031, 0.043] {
            let mid_re = 0.5 * (cell.re_min + cell.re_max) + j * (cell.re_max - cell.re_min);
            let mid_im = 0.5 * (cell.im_min + cell.im_max) + j * (cell.im_max - cell.im_min);
            let quads = [
                Window::new(cell.re_min, mid_re, cell.im_min, mid_im),
                Window::new(mid_re, cell.re_max, cell.im_min, mid_im),
                Window::new(cell.re_min, mid_re, mid_im, cell.im_max),
                Window::new(mid_re, cell.re_max, mid_im, cell.im_max),
            ];
            let mut found = Vec::with_capacity(4);
            let mut sum = 0;
            for q in quads {
                let contour = Contour::rectangle(q.re_min, q.re_max, q.im_min, q.im_max);
                match winding_number(|k| eval.eval(k), &contour, 64) {
                    Ok(n) => {
                        sum += n;
                        found.push((q, n, depth + 1));
                    }
                    Err(NumericsError::ZeroOnContour { .. })
                    | Err(NumericsError::PhaseJump) => continue 'jitter,
                    Err(e) => return Err(e.into()),
                }
            }
            if sum != count {
                // A zero slipped between the jittered lines; try another split.
                continue 'jitter;
            }
            queue.extend(found);
            placed = true;
            break;
        }
        if !placed {
            complete = false;
            centers.push(cell.center());
        }
    }

    // Merge centers that resolved the same zero from adjacent cells, then
    // read multiplicities off small circles.
    let mut merged: Vec<Complex64> = Vec::new();
    centers.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    for c in centers {
        if merged.iter().all(|m| (m - c).norm() > 3.0 * DEFAULT_LOC_TOL) {
            merged.push(c);
        }
    }
    let mut records = Vec::new();
    for c in merged {
        let m = circle_winding(&mut eval, c, 2.0 * DEFAULT_LOC_TOL)?;
        if m >= 1 {
            records.push(ZeroRecord::unclassified(c, m as usize, target));
        }
    }
    records.sort_by(|a, b| {
        (a.location.re, a.location.im)
            .partial_cmp(&(b.location.re, b.location.im))
            .unwrap()
    });
    Ok(ZeroScan { records, total_winding, complete })
}

fn label_from(k: Complex64, im_omega_tilde: f64) -> DomainLabel {
    if k.im.abs() < BOUNDARY_TOL || im_omega_tilde.abs() < BOUNDARY_TOL {
        return DomainLabel::Boundary;
    }
    match (k.im > 0.0, im_omega_tilde > 0.0) {
        (true, true) => DomainLabel::D1,
        (true, false) => DomainLabel::D2,
        (false, true) => DomainLabel::D3,
        (false, false) => DomainLabel::D4,
    }
}

/// Domain label at k from (sign Im k, sign Im OmegaTilde), with OmegaTilde
/// continued from the anchor along a path avoiding the given zeros.
pub fn label_domain(
    pair: &PeriodicPair,
    k: Complex64,
    zeros: &[ZeroRecord],
) -> Result<DomainLabel, SpectrumError> {
    let mut tracker = BranchTracker::new(pair, ODE_TOL);
    let avoid: Vec<Complex64> = zeros.iter().map(|z| z.location).collect();
    let st = tracker.branch_at(k, &avoid, k.norm())?;
    Ok(label_from(k, st.im_omega_tilde(pair.tau())))
}

/// |log|z|| at k, which is branch independent (the two multipliers are
/// reciprocal). Used to sniff out the local Im OmegaTilde = 0 direction.
fn abs_log_abs_multiplier(
    pair: &PeriodicPair,
    k: Complex64,
) -> Result<f64, SpectrumError> {
    let z = monodromy(pair, k, ODE_TOL)?;
    let tr = z.trace();
    let g = tr * tr - 4.0;
    let s = g.sqrt();
    let m1 = 0.5 * (tr + s);
    let m2 = 0.5 * (tr - s);
    let big = if m1.norm() >= m2.norm() { m1 } else { m2 };
    Ok(big.norm().ln().abs())
}

fn cut_angle(
    pair: &PeriodicPair,
    zero: &ZeroRecord,
    strategy: CutStrategy,
    radius: f64,
) -> Result<f64, SpectrumError> {
    match strategy {
        CutStrategy::Radial => {
            if zero.location.norm() < DEFAULT_LOC_TOL {
                Ok(0.0)
            } else {
                Ok(zero.location.arg())
            }
        }
        CutStrategy::Vertical => Ok(match zero.half_plane {
            HalfPlane::Upper => -std::f64::consts::FRAC_PI_2,
            HalfPlane::Lower => std::f64::consts::FRAC_PI_2,
            HalfPlane::RealAxis => -std::f64::consts::FRAC_PI_2,
        }),
        CutStrategy::LevelCurve => {
            // The zero sits on the Im OmegaTilde = 0 set; follow the level
            // direction by minimizing |log|z|| over coarse angles.
            let mut best = (f64::INFINITY, 0.0);
            for i in 0..16 {
                let a = 2.0 * std::f64::consts::PI * i as f64 / 16.0;
                let k = zero.location + Complex64::from_polar(radius, a);
                let v = abs_log_abs_multiplier(pair, k)?;
                if v < best.0 {
                    best = (v, a);
                }
            }
            Ok(best.1)
        }
    }
}

pub const CLASSIFY_SAMPLES: usize = 48;

/// Fill adjacency and the violating flag of a zero by walking a slit circle
/// around it.
///
/// An odd zero sits on the boundary set Im OmegaTilde = 0 itself, so with a
/// generic cut the circle around it always meets both signs and the raw
/// adjacency never decides anything. The admissible deformation moves the cut
/// onto the local level ray of Im OmegaTilde = 0 through the zero; the slit
/// disk then carries a single sheet with uniform sign, and that sheet (fixed
/// by the anchored large-k continuation, not by a sign convention at the
/// zero) decides whether the zero is interior to the offending domain.
///
/// The strategy fixes only where the probe starts; all strategies deform the
/// cut onto the same level ray near the zero, so they agree on simple zeros
/// and differ only in how the cut continues globally, which a local probe
/// never sees.
pub fn classify_zero(
    pair: &PeriodicPair,
    zero: &ZeroRecord,
    strategy: CutStrategy,
) -> Result<ZeroRecord, SpectrumError> {
    let mut out = zero.clone();
    out.adjacency.clear();
    out.violating = false;
    if out.parity == Parity::Even {
        return Ok(out);
    }

    let radius = 5.0 * DEFAULT_LOC_TOL;
    let seed = cut_angle(pair, zero, strategy, radius)?;
    let n = CLASSIFY_SAMPLES;
    let pi = std::f64::consts::PI;
    let mut tracker = BranchTracker::new(pair, ODE_TOL);
    let avoid = [zero.location];
    let tau = pair.tau();
    let scale = zero.location.norm() + 1.0;

    // Pass 1: one continued loop to locate the level rays. Along the
    // continued branch Im OmegaTilde changes sign exactly where a genuine
    // level ray crosses the circle; the forced flip at the wrap (the odd
    // monodromy of the branch) is excluded by stopping short of 2 pi.
    let mut samples = Vec::with_capacity(n);
    let mut boundary_hits = 0usize;
    let mut state = None;
    for j in 0..n {
        let angle = seed + 2.0 * pi * (j as f64 + 0.5) / n as f64;
        let k = zero.location + Complex64::from_polar(radius, angle);
        let st = match state {
            None => tracker.branch_at(k, &avoid, scale)?,
            Some(prev) => tracker.step_to(&prev, k)?,
        };
        let im = st.im_omega_tilde(tau);
        if im.abs() < BOUNDARY_TOL {
            boundary_hits += 1;
        }
        samples.push((angle, im));
        state = Some(st);
    }
    let frac = boundary_hits as f64 / n as f64;
    if frac > 0.25 {
        return Err(SpectrumError::Undecidable(100.0 * frac));
    }

    // Cut along the first level ray found; with no interior sign change the
    // circle already has uniform sign and the seed angle serves as the cut.
    let mut cut = seed;
    let mut prev: Option<(f64, f64)> = None;
    for &(angle, im) in &samples {
        if im.abs() < BOUNDARY_TOL {
            continue;
        }
        if let Some((pa, ps)) = prev {
            if ps * im < 0.0 {
                cut = 0.5 * (pa + angle);
                break;
            }
        }
        prev = Some((angle, im));
    }

    // Pass 2: anchor a fresh branch opposite the cut and walk both ways up
    // to it; the labels collected on the slit circle are the adjacency of
    // the zero for the deformed cut.
    let k_ref = zero.location + Complex64::from_polar(radius, cut + pi);
    let st_ref = tracker.branch_at(k_ref, &avoid, scale)?;
    let label = label_from(k_ref, st_ref.im_omega_tilde(tau));
    if label != DomainLabel::Boundary {
        out.adjacency.insert(label);
    }
    let half = n / 2;
    let reach = pi * (1.0 - 1.0 / n as f64);
    for dir in [-1.0, 1.0] {
        let mut st = st_ref;
        for j in 1..=half {
            let angle = cut + pi + dir * reach * j as f64 / half as f64;
            let k = zero.location + Complex64::from_polar(radius, angle);
            st = tracker.step_to(&st, k)?;
            let label = label_from(k, st.im_omega_tilde(tau));
            if label != DomainLabel::Boundary {
                out.adjacency.insert(label);
            }
        }
    }
    if out.adjacency.is_empty() {
        return Err(SpectrumError::Undecidable(100.0));
    }

    // Violating iff the slit disk lies entirely in the offending domain:
    // D1 for an upper zero, D4 for a lower one, both halves for a real one.
    let only = |l: DomainLabel| out.adjacency.len() == 1 && out.adjacency.contains(&l);
    out.violating = match out.half_plane {
        HalfPlane::Upper => only(DomainLabel::D1),
        HalfPlane::Lower => only(DomainLabel::D4),
        HalfPlane::RealAxis => {
            out.adjacency.len() == 2
                && out.adjacency.contains(&DomainLabel::D1)
                && out.adjacency.contains(&DomainLabel::D4)
        }
    };
    Ok(out)
}

/// Theorem-level verdict over a window: inconsistent iff some cut strategy
/// exposes a violating odd-order zero; failures degrade to undecided, never
/// to a guess.
pub fn consistency_verdict(
    pair: &PeriodicPair,
    window: Window,
    strategies: &[CutStrategy],
) -> Verdict {
    assert!(
        window.is_conjugation_symmetric(1e-9),
        "verdict window must be symmetric under conjugation"
    );
    let strategy_names = strategies
        .iter()
        .map(|s| s.name())
        .collect::<Vec<_>>()
        .join(",");
    let scan = match find_zeros(pair, window, TargetKind::G, DEFAULT_MAX_DEPTH) {
        Ok(s) => s,
        Err(e) => {
            return Verdict {
                status: VerdictStatus::Undecided,
                witnesses: Vec::new(),
                window,
                cut_strategy: strategy_names,
                notes: format!("zero scan failed: {e}"),
            }
        }
    };
    let mut notes = String::new();
    let mut undecided = !scan.complete;
    if !scan.complete {
        notes.push_str("zero scan incomplete at max depth; ");
    }
    let mut witnesses: Vec<ZeroRecord> = Vec::new();
    for zero in scan.records.iter().filter(|z| z.parity == Parity::Odd) {
        for &strategy in strategies {
            match classify_zero(pair, zero, strategy) {
                Ok(classified) => {
                    if classified.violating
                        && !witnesses
                            .iter()
                            .any(|w| (w.location - classified.location).norm() < DEFAULT_LOC_TOL)
                    {
                        witnesses.push(classified);
                    }
                }
                Err(e) => {
                    undecided = true;
                    notes.push_str(&format!(
                        "classification at {} ({}) undecided: {e}; ",
                        zero.location,
                        strategy.name()
                    ));
                }
            }
        }
    }
    let status = if !witnesses.is_empty() {
        VerdictStatus::Inconsistent
    } else if undecided {
        VerdictStatus::Undecided
    } else {
        VerdictStatus::Consistent
    };
    Verdict { status, witnesses, window, cut_strategy: strategy_names, notes }
}

/// Q^b = B^b/A^b = -2 Z12 / (Z11 - Z22 - sqrt G) with the anchored branch.
pub fn qb_ratio(pair: &PeriodicPair, k: Complex64) -> Result<Complex64, SpectrumError> {
    let mut tracker = BranchTracker::new(pair, ODE_TOL);
    let st = tracker.branch_at(k, &[], k.norm())?;
    let z = tracker.monodromy_cached(k)?;
    qb_from(&z, st.sqrt_g, k)
}

/// Same ratio with sqrt G = sign * principal square root, for probing both
/// boundary values at real k where G > 0.
pub fn qb_ratio_signed(
    pair: &PeriodicPair,
    k: Complex64,
    sign: f64,
) -> Result<Complex64, SpectrumError> {
    let z = monodromy(pair, k, ODE_TOL)?;
    let tr = z.trace();
    let g = tr * tr - 4.0;
    qb_from(&z, sign * g.sqrt(), k)
}

fn qb_from(z: &crate::numerics::Matrix2, sqrt_g: Complex64, k: Complex64) -> Result<Complex64, SpectrumError> {
    let scale = 1.0 + z.trace().norm();
    let diff = z.m11 - z.m22;
    let mut denom = diff - sqrt_g;
    if denom.norm() < 1e-9 * scale {
        let alt = diff + sqrt_g;
        if alt.norm() < 1e-9 * scale {
            return Err(SpectrumError::DivisionNearZero(k));
        }
        denom = -4.0 * z.m12 * z.m21 / alt;
        if denom.norm() < 1e-12 * scale {
            return Err(SpectrumError::DivisionNearZero(k));
        }
    }
    Ok(-2.0 * z.m12 / denom)
}

/// Claim-level check that G is real and nonpositive on the real line for a
/// focusing pair.
pub fn focusing_realline_check(pair: &PeriodicPair, samples: &[f64]) -> Result<bool, SpectrumError> {
    assert_eq!(pair.lambda(), -1, "real-line nonpositivity is a focusing property");
    let tol = 1e-9;
    for &x in samples {
        let z = monodromy(pair, Complex64::new(x, 0.0), ODE_TOL)?;
        let tr = z.trace();
        let g = tr * tr - 4.0;
        if g.re > tol || g.im.abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}
