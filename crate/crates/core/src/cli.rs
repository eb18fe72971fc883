//! Orchestration behind the command-line front end: dispatch a RunConfig to
//! the owning module, assemble the JSON report, emit CSV plot data.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use thiserror::Error;

use crate::background::PeriodicPair;
use crate::config::{ConfigError, Mode, RunConfig};
use crate::exponential::classify_triple;
use crate::floquet::{BranchState, BranchTracker, FloquetPoint};
use crate::halfline::{
    boundary_spectra, compute_d, global_relation_residual, growth_margin_ok, initial_spectra,
    parse_curve_csv, SampledInitialDatum, SpectralSample,
};
use crate::report::{Report, ResidualRow, Timing};
use crate::soliton::soliton_global_relation_residual;
use crate::spectrum::{
    classify_zero, find_zeros, DomainLabel, Parity, TargetKind, Window, ZeroRecord,
    DEFAULT_MAX_DEPTH,
};

/// Failures split by exit code: 2 for input problems, 3 for numerical ones.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

fn push_cpx_rows(rows: &mut Vec<ResidualRow>, name: &str, k: Complex64, v: Complex64) {
    rows.push(ResidualRow {
        name: format!("{name}_re"),
        k,
        value: v.re,
    });
    rows.push(ResidualRow {
        name: format!("{name}_im"),
        k,
        value: v.im,
    });
}

/// Run the configured computation and assemble its report. Writes CSV side
/// outputs for plot-data; everything else is returned in the report.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = std::time::Instant::now();
    let mut report = Report::new(cfg.mode.as_str());
    report.inputs = cfg.echo();

    match cfg.mode {
        Mode::ClassifyExp => {
            let triple = cfg.triple()?;
            let (verdict, tag) = classify_triple(&triple).map_err(numerical)?;
            report.zeros = verdict.witnesses.clone();
            report.notes.push(format!("family = {}", tag.name.as_str()));
            for (name, value) in &tag.parameters {
                report.notes.push(format!("family_{name} = {value}"));
            }
            report.verdict = Some(verdict);
        }
        Mode::Scan => {
            let pair = cfg.pair()?;
            let window = cfg.window.expect("validated");
            let scan = find_zeros(&pair, window, TargetKind::G, DEFAULT_MAX_DEPTH)
                .map_err(numerical)?;
            let mut zeros = Vec::new();
            for rec in &scan.records {
                if rec.parity == Parity::Odd {
                    zeros.push(
                        classify_zero(&pair, rec, cfg.cut_strategies[0]).map_err(numerical)?,
                    );
                } else {
                    zeros.push(rec.clone());
                }
            }
            report.zeros = zeros;
            report.verdict = Some(crate::spectrum::consistency_verdict(
                &pair,
                window,
                &cfg.cut_strategies,
            ));
        }
        Mode::SolitonCheck => {
            let p = cfg.soliton()?;
            let root = p.omega.sqrt();
            let ks: Vec<Complex64> = if cfg.k_points.is_empty() {
                let mut v = Vec::new();
                for &r in &[0.4, 0.9, 1.7, 2.6] {
                    for &ang in &[
                        std::f64::consts::PI / 8.0,
                        std::f64::consts::PI / 4.0,
                        3.0 * std::f64::consts::PI / 8.0,
                    ] {
                        v.push(Complex64::from_polar(r * root, ang));
                    }
                }
                v
            } else {
                cfg.k_points.clone()
            };
            let pair = p.pair();
            let tau = p.tau();
            let mut tracker = BranchTracker::new(&pair, cfg.tol);
            let i = Complex64::new(0.0, 1.0);
            for &k in &ks {
                let gr = soliton_global_relation_residual(&p, k).map_err(numerical)?;
                report.residuals.push(ResidualRow {
                    name: "global_relation".into(),
                    k,
                    value: gr,
                });
                let st = tracker.branch_at(k, &[], k.norm()).map_err(numerical)?;
                let expected = 2.0 * i * (2.0 * k * k * tau).sin();
                report.residuals.push(ResidualRow {
                    name: "monodromy_sqrt_g".into(),
                    k,
                    value: (st.sqrt_g - expected).norm() / (1.0 + expected.norm()),
                });
                report.residuals.push(ResidualRow {
                    name: "floquet_exponent".into(),
                    k,
                    value: (st.omega_tilde(tau) - 2.0 * k * k).norm(),
                });
            }
            report
                .notes
                .push(format!("profile_l1 = {}", p.profile_l1()));
            report.notes.push(format!(
                "branch_points = {} {} {} {}",
                p.k1.im, p.k2.im, -p.k2.im, -p.k1.im
            ));
        }
        Mode::Monodromy => {
            let pair = cfg.pair()?;
            for &k in &cfg.k_points {
                let pt = FloquetPoint::compute(&pair, k, cfg.tol, true, &[])
                    .map_err(numerical)?;
                let rows = &mut report.residuals;
                push_cpx_rows(rows, "z11", k, pt.monodromy.m11);
                push_cpx_rows(rows, "z12", k, pt.monodromy.m12);
                push_cpx_rows(rows, "z21", k, pt.monodromy.m21);
                push_cpx_rows(rows, "z22", k, pt.monodromy.m22);
                push_cpx_rows(rows, "g", k, pt.g);
                push_cpx_rows(rows, "sqrt_g", k, pt.sqrt_g);
                push_cpx_rows(rows, "omega_tilde", k, pt.omega_tilde);
                rows.push(ResidualRow {
                    name: "det_minus_one".into(),
                    k,
                    value: (pt.monodromy.det() - 1.0).norm(),
                });
            }
        }
        Mode::Spectra => {
            let pair = cfg.pair()?;
            let lambda = pair.lambda();
            let read = |path: &str| -> Result<String, CliError> {
                std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("{path}: {e}")))
            };
            let u0_text = read(cfg.u0_csv.as_ref().expect("validated"))?;
            let u0_curve = parse_curve_csv(&u0_text).map_err(|e| CliError::Input(e.to_string()))?;
            let mut grid = Vec::new();
            let mut values = Vec::new();
            let mut x = u0_curve.first();
            // Re-expose the parsed nodes through the curve interface.
            while x <= u0_curve.last() + 1e-12 {
                grid.push(x);
                values.push(u0_curve.eval(x));
                x += (u0_curve.last() - u0_curve.first()) / 400.0;
            }
            let u0 = SampledInitialDatum::new(grid, values, cfg.decay_m, cfg.decay_p)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let g0 = parse_curve_csv(&read(cfg.g0_csv.as_ref().expect("validated"))?)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let g1 = parse_curve_csv(&read(cfg.g1_csv.as_ref().expect("validated"))?)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let horizon = cfg.horizon.unwrap_or(3.0 * pair.tau()).min(g0.last());
            let mut tracker = BranchTracker::new(&pair, cfg.tol);
            let mut samples = Vec::new();
            for &k in &cfg.k_points {
                let (a, b) = initial_spectra(&u0, lambda, k, cfg.tol).map_err(numerical)?;
                let (big_a, big_b) =
                    boundary_spectra(&pair, &g0, &g1, k, horizon, cfg.tol).map_err(numerical)?;
                let (abar, bbar) =
                    boundary_spectra(&pair, &g0, &g1, k.conj(), horizon, cfg.tol)
                        .map_err(numerical)?;
                let mut sample = SpectralSample {
                    k,
                    a,
                    b,
                    big_a,
                    big_b,
                    d: compute_d(a, b, abar, bbar, lambda),
                    gr_residual: 0.0,
                    t_used: horizon,
                };
                sample.gr_residual = global_relation_residual(&sample);
                let st = tracker.branch_at(k, &[], k.norm()).map_err(numerical)?;
                if !growth_margin_ok(st.omega_tilde(pair.tau()), k) {
                    report.notes.push(format!(
                        "k = {} {}: growth margin not met, global-relation residual not meaningful",
                        k.re, k.im
                    ));
                }
                report.residuals.push(ResidualRow {
                    name: "global_relation".into(),
                    k,
                    value: sample.gr_residual,
                });
                samples.push(sample);
            }
            if let Some(dir) = &cfg.out {
                let path = Path::new(dir).join("samples.json");
                write_text(
                    &path,
                    &serde_json::to_string_pretty(&samples).expect("samples serialize"),
                )?;
                report.notes.push(format!("samples = {}", path.display()));
            }
        }
        Mode::PlotData => {
            let pair = cfg.pair()?;
            let window = cfg.window.expect("validated");
            let dir = cfg
                .out
                .clone()
                .ok_or_else(|| CliError::Input("plot-data requires out".into()))?;
            let written = emit_plotdata(&pair, window, cfg, Path::new(&dir))?;
            for p in written {
                report.notes.push(format!("wrote = {}", p.display()));
            }
        }
    }

    report.timing = Timing {
        wall_ms: start.elapsed().as_millis(),
    };
    Ok(report)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::Input(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn label_name(l: DomainLabel) -> &'static str {
    match l {
        DomainLabel::D1 => "D1",
        DomainLabel::D2 => "D2",
        DomainLabel::D3 => "D3",
        DomainLabel::D4 => "D4",
        DomainLabel::Boundary => "boundary",
    }
}

fn label_from_state(k: Complex64, im_om: f64, scale: f64) -> DomainLabel {
    let tol = 1e-9 * (1.0 + scale);
    if k.im.abs() < tol || im_om.abs() < tol {
        return DomainLabel::Boundary;
    }
    match (k.im > 0.0, im_om > 0.0) {
        (true, true) => DomainLabel::D1,
        (true, false) => DomainLabel::D2,
        (false, true) => DomainLabel::D3,
        (false, false) => DomainLabel::D4,
    }
}

/// Domain labels over a regular grid, walked serpentine-fashion so each
/// point continues the branch from its neighbor.
fn domain_grid(
    pair: &PeriodicPair,
    window: Window,
    n: usize,
    tol: f64,
) -> Result<Vec<(Complex64, DomainLabel)>, CliError> {
    let mut tracker = BranchTracker::new(pair, tol);
    let scale = window.corner_radius();
    let mut out = Vec::with_capacity(n * n);
    // Upper and lower half-planes walked separately from matching anchors.
    for upper in [true, false] {
        let mut state: Option<BranchState> = None;
        for row in 0..n {
            let im = window.im_min + (window.im_max - window.im_min) * row as f64 / (n - 1) as f64;
            if (im > 0.0) != upper || im == 0.0 && !upper {
                continue;
            }
            let cols: Vec<usize> = if row % 2 == 0 {
                (0..n).collect()
            } else {
                (0..n).rev().collect()
            };
            for col in cols {
                let re =
                    window.re_min + (window.re_max - window.re_min) * col as f64 / (n - 1) as f64;
                let k = Complex64::new(re, im);
                let next = match &state {
                    None => tracker.branch_at(k, &[], scale),
                    Some(s) => tracker.step_to(s, k).or_else(|_| {
                        // A blocked step usually means the segment crossed a
                        // zero; restart from the anchor.
                        tracker.branch_at(k, &[], scale)
                    }),
                };
                match next {
                    Ok(st) => {
                        let im_om = st.im_omega_tilde(pair.tau());
                        out.push((k, label_from_state(k, im_om, scale)));
                        state = Some(st);
                    }
                    Err(_) => {
                        out.push((k, DomainLabel::Boundary));
                        state = None;
                    }
                }
            }
        }
    }
    // The im = 0 row (present when the grid hits it exactly) is boundary.
    for row in 0..n {
        let im = window.im_min + (window.im_max - window.im_min) * row as f64 / (n - 1) as f64;
        if im == 0.0 {
            for col in 0..n {
                let re =
                    window.re_min + (window.re_max - window.re_min) * col as f64 / (n - 1) as f64;
                out.push((Complex64::new(re, 0.0), DomainLabel::Boundary));
            }
        }
    }
    Ok(out)
}

/// Branch points on the imaginary axis paired into vertical cut segments.
fn cut_segments(zeros: &[ZeroRecord], scale: f64) -> Vec<(Complex64, Complex64)> {
    let tol = 1e-6 * (1.0 + scale);
    let mut upper: Vec<f64> = zeros
        .iter()
        .filter(|z| z.location.re.abs() < tol && z.location.im > tol)
        .map(|z| z.location.im)
        .collect();
    upper.sort_by(|a, b| a.partial_cmp(b).unwrap());
    upper.dedup_by(|a, b| (*a - *b).abs() < tol);
    let mut segs = Vec::new();
    // Pair from the outermost point inward; a leftover joins the origin.
    while upper.len() >= 2 {
        let hi = upper.pop().unwrap();
        let lo = upper.pop().unwrap();
        segs.push((Complex64::new(0.0, lo), Complex64::new(0.0, hi)));
    }
    if let Some(hi) = upper.pop() {
        segs.push((Complex64::new(0.0, 0.0), Complex64::new(0.0, hi)));
    }
    // Mirror into the lower half-plane.
    let mirrored: Vec<(Complex64, Complex64)> = segs
        .iter()
        .map(|(a, b)| (-*b, -*a))
        .collect();
    segs.extend(mirrored);
    segs
}

/// Emit domains.csv, zeros.csv, cuts.csv, contour.csv for the pair over the
/// window. Returns the written paths.
pub fn emit_plotdata(
    pair: &PeriodicPair,
    window: Window,
    cfg: &RunConfig,
    dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();

    // Zeros of G and of the off-diagonal monodromy entries (branch points).
    // An off-diagonal entry that vanishes identically (e.g. the zero pair)
    // has no isolated zeros to scan for.
    let degenerate = |pick: fn(&crate::numerics::Matrix2) -> Complex64| -> Result<bool, CliError> {
        let r = window.corner_radius() * 1.01;
        for j in 0..6 {
            let k =
                window.center() + Complex64::from_polar(r, 0.7 + j as f64) * 0.5;
            let z = crate::floquet::monodromy(pair, k, cfg.tol).map_err(numerical)?;
            if pick(&z).norm() > 1e-10 {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut all_zeros: Vec<ZeroRecord> = Vec::new();
    for kind in [TargetKind::G, TargetKind::Z12, TargetKind::Z21] {
        match kind {
            TargetKind::Z12 if degenerate(|z| z.m12)? => continue,
            TargetKind::Z21 if degenerate(|z| z.m21)? => continue,
            _ => {}
        }
        let scan = find_zeros(pair, window, kind, DEFAULT_MAX_DEPTH).map_err(numerical)?;
        all_zeros.extend(scan.records);
    }
    let mut zeros_csv =
        String::from("location_re,location_im,multiplicity,parity,kind,violating\n");
    for rec in &all_zeros {
        let classified = if rec.parity == Parity::Odd && rec.kind == TargetKind::G {
            classify_zero(pair, rec, cfg.cut_strategies[0]).map_err(numerical)?
        } else {
            rec.clone()
        };
        writeln!(
            zeros_csv,
            "{},{},{},{},{},{}",
            rec.location.re,
            rec.location.im,
            rec.multiplicity,
            match rec.parity {
                Parity::Even => "even",
                Parity::Odd => "odd",
            },
            match rec.kind {
                TargetKind::G => "G",
                TargetKind::Z12 => "Z12",
                TargetKind::Z21 => "Z21",
            },
            classified.violating
        )
        .expect("string write");
    }
    let path = dir.join("zeros.csv");
    write_text(&path, &zeros_csv)?;
    written.push(path);

    // Domain labels on the grid.
    let grid = domain_grid(pair, window, cfg.grid_n, cfg.tol)?;
    let mut domains_csv = String::from("k_re,k_im,label\n");
    for (k, label) in &grid {
        writeln!(domains_csv, "{},{},{}", k.re, k.im, label_name(*label)).expect("string write");
    }
    let path = dir.join("domains.csv");
    write_text(&path, &domains_csv)?;
    written.push(path);

    // Cuts: conjugation-symmetric vertical segments joining branch points on
    // the imaginary axis.
    let segs = cut_segments(&all_zeros, window.corner_radius());
    let mut cuts_csv = String::from("segment,k_re,k_im\n");
    for (idx, (a, b)) in segs.iter().enumerate() {
        for j in 0..=32 {
            let p = a + (b - a) * (j as f64 / 32.0);
            writeln!(cuts_csv, "{},{},{}", idx, p.re, p.im).expect("string write");
        }
    }
    let path = dir.join("cuts.csv");
    write_text(&path, &cuts_csv)?;
    written.push(path);

    // Contour: points with Im k = 0 or Im OmegaTilde = 0, located by sign
    // changes of Im OmegaTilde between adjacent grid points.
    let n = cfg.grid_n;
    let mut contour_csv = String::from("k_re,k_im\n");
    for col in 0..n {
        let re = window.re_min + (window.re_max - window.re_min) * col as f64 / (n - 1) as f64;
        writeln!(contour_csv, "{},0", re).expect("string write");
    }
    let lookup = |k: Complex64| -> Option<DomainLabel> {
        grid.iter()
            .find(|(g, _)| (g - k).norm() < 1e-9 * (1.0 + window.corner_radius()))
            .map(|(_, l)| *l)
    };
    let upper_sign = |l: DomainLabel| -> Option<bool> {
        match l {
            DomainLabel::D1 | DomainLabel::D3 => Some(true),
            DomainLabel::D2 | DomainLabel::D4 => Some(false),
            DomainLabel::Boundary => None,
        }
    };
    for col in 0..n {
        let re = window.re_min + (window.re_max - window.re_min) * col as f64 / (n - 1) as f64;
        for row in 0..n.saturating_sub(1) {
            let im_a = window.im_min + (window.im_max - window.im_min) * row as f64 / (n - 1) as f64;
            let im_b =
                window.im_min + (window.im_max - window.im_min) * (row + 1) as f64 / (n - 1) as f64;
            if im_a < 0.0 && im_b > 0.0 || im_a == 0.0 || im_b == 0.0 {
                continue;
            }
            let (la, lb) = (
                lookup(Complex64::new(re, im_a)),
                lookup(Complex64::new(re, im_b)),
            );
            if let (Some(la), Some(lb)) = (la, lb) {
                match (upper_sign(la), upper_sign(lb)) {
                    (Some(sa), Some(sb)) if sa != sb => {
                        writeln!(contour_csv, "{},{}", re, 0.5 * (im_a + im_b))
                            .expect("string write");
                    }
                    (None, _) => {
                        writeln!(contour_csv, "{},{}", re, im_a).expect("string write");
                    }
                    _ => {}
                }
            }
        }
    }
    let path = dir.join("contour.csv");
    write_text(&path, &contour_csv)?;
    written.push(path);

    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::spectrum::VerdictStatus;

    #[test]
    fn classify_exp_run() {
        let cfg = parse_config(
            "mode = classify-exp\nlambda = -1\nalpha = 1\nomega = 2\nc = 1+0i\n",
        )
        .unwrap();
        let report = run(&cfg).unwrap();
        let v = report.verdict.unwrap();
        assert_eq!(v.status, VerdictStatus::Consistent);
        assert!(report
            .notes
            .iter()
            .any(|n| n == "family = F-1.3a"), "{:?}", report.notes);
    }

    #[test]
    fn soliton_check_run() {
        let cfg = parse_config("mode = soliton-check\ngamma = 1\nomega = 2\n").unwrap();
        let report = run(&cfg).unwrap();
        assert!(!report.residuals.is_empty());
        for row in &report.residuals {
            assert!(row.value <= 1e-8, "{} at {} = {}", row.name, row.k, row.value);
        }
    }

    #[test]
    fn plotdata_zero_pair_quadrants() {
        let dir = std::env::temp_dir().join("nls-floquet-cli-test-plot");
        let _ = std::fs::remove_dir_all(&dir);
        let cfg = parse_config(&format!(
            "mode = plot-data\nlambda = 1\ntau = 1.5707963267948966\nwindow = -1.2 1.2 -1.2 1.2\ngrid_n = 9\nout = {}\n",
            dir.display()
        ))
        .unwrap();
        let report = run(&cfg).unwrap();
        assert_eq!(report.notes.len(), 4);
        let domains = std::fs::read_to_string(dir.join("domains.csv")).unwrap();
        let mut checked = 0;
        for line in domains.lines().skip(1) {
            let parts: Vec<&str> = line.split(',').collect();
            let re: f64 = parts[0].parse().unwrap();
            let im: f64 = parts[1].parse().unwrap();
            // Zero pair: OmegaTilde = 2k^2, so labels are the quadrants.
            let im_om = 4.0 * re * im;
            let expected = if im.abs() < 1e-9 || im_om.abs() < 1e-9 {
                "boundary"
            } else if im > 0.0 && im_om > 0.0 {
                "D1"
            } else if im > 0.0 {
                "D2"
            } else if im_om > 0.0 {
                "D3"
            } else {
                "D4"
            };
            assert_eq!(parts[2], expected, "at k = {re}+{im}i");
            checked += 1;
        }
        assert_eq!(checked, 81);
        // Contour for the zero pair is the union of the two axes.
        let contour = std::fs::read_to_string(dir.join("contour.csv")).unwrap();
        for line in contour.lines().skip(1) {
            let parts: Vec<&str> = line.split(',').collect();
            let re: f64 = parts[0].parse().unwrap();
            let im: f64 = parts[1].parse().unwrap();
            assert!(
                re.abs() < 0.16 || im.abs() < 1e-9,
                "contour point off the axes: {re},{im}"
            );
        }
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn error_exit_codes() {
        assert_eq!(CliError::Input("x".into()).exit_code(), 2);
        assert_eq!(CliError::Numerical("x".into()).exit_code(), 3);
    }
}
