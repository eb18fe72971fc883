//! Flat key = value run configuration: parsing, validation, defaults.

use num_complex::Complex64;
use thiserror::Error;

use crate::background::PeriodicPair;
use crate::exponential::ExponentialTriple;
use crate::soliton::{soliton_params, SolitonParams};
use crate::spectrum::{CutStrategy, Window};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    ClassifyExp,
    Scan,
    SolitonCheck,
    Monodromy,
    Spectra,
    PlotData,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::ClassifyExp => "classify-exp",
            Mode::Scan => "scan",
            Mode::SolitonCheck => "soliton-check",
            Mode::Monodromy => "monodromy",
            Mode::Spectra => "spectra",
            Mode::PlotData => "plot-data",
        }
    }

    pub fn from_str(s: &str) -> Option<Mode> {
        Some(match s {
            "classify-exp" => Mode::ClassifyExp,
            "scan" => Mode::Scan,
            "soliton-check" => Mode::SolitonCheck,
            "monodromy" => Mode::Monodromy,
            "spectra" => Mode::Spectra,
            "plot-data" => Mode::PlotData,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub lambda: Option<i32>,
    pub tau: Option<f64>,
    pub g0_modes: Vec<(i64, Complex64)>,
    pub g1_modes: Vec<(i64, Complex64)>,
    pub alpha: Option<f64>,
    pub omega: Option<f64>,
    pub c: Option<Complex64>,
    pub gamma: Option<f64>,
    pub window: Option<Window>,
    pub tol: f64,
    pub cut_strategies: Vec<CutStrategy>,
    pub out: Option<String>,
    pub k_points: Vec<Complex64>,
    pub u0_csv: Option<String>,
    pub g0_csv: Option<String>,
    pub g1_csv: Option<String>,
    pub horizon: Option<f64>,
    pub decay_m: f64,
    pub decay_p: f64,
    pub grid_n: usize,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Scan,
            lambda: None,
            tau: None,
            g0_modes: Vec::new(),
            g1_modes: Vec::new(),
            alpha: None,
            omega: None,
            c: None,
            gamma: None,
            window: None,
            tol: crate::floquet::DEFAULT_TOL,
            cut_strategies: CutStrategy::ALL.to_vec(),
            out: None,
            k_points: Vec::new(),
            u0_csv: None,
            g0_csv: None,
            g1_csv: None,
            horizon: None,
            decay_m: 1.0,
            decay_p: 12.0,
            grid_n: 21,
            jobs: 1,
        }
    }
}

/// Accepts `re`, `re im`, and `a+bi` / `a-bi` / `bi` forms.
pub fn parse_complex(raw: &str) -> Option<Complex64> {
    let raw = raw.trim();
    let parts: Vec<&str> = raw.split_whitespace().collect();
    if parts.len() == 2 {
        return Some(Complex64::new(
            parts[0].parse().ok()?,
            parts[1].parse().ok()?,
        ));
    }
    if parts.len() != 1 {
        return None;
    }
    let s = parts[0];
    if let Some(body) = s.strip_suffix('i') {
        // Split at the last +/- that is not an exponent sign or leading sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for j in (1..bytes.len()).rev() {
            let ch = bytes[j] as char;
            if (ch == '+' || ch == '-') && !matches!(bytes[j - 1] as char, 'e' | 'E') {
                split = Some(j);
                break;
            }
        }
        return match split {
            Some(j) => {
                let re: f64 = body[..j].parse().ok()?;
                let im_str = &body[j..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().ok()?
                };
                Some(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() { 1.0 } else { body.parse().ok()? };
                Some(Complex64::new(0.0, im))
            }
        };
    }
    Some(Complex64::new(s.parse().ok()?, 0.0))
}

fn err(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Parse { line, msg: msg.into() }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut mode_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, "expected key = value"))?;
        let key = key.trim();
        let value = value.trim();
        let fnum = |v: &str| -> Result<f64, ConfigError> {
            v.parse::<f64>()
                .map_err(|e| err(line_no, format!("{key}: {e}")))
        };
        match key {
            "mode" => {
                if mode_seen {
                    return Err(err(line_no, "mode given twice"));
                }
                mode_seen = true;
                cfg.mode = Mode::from_str(value)
                    .ok_or_else(|| err(line_no, format!("unknown mode {value:?}")))?;
            }
            "lambda" => {
                let l: i32 = value
                    .parse()
                    .map_err(|e| err(line_no, format!("lambda: {e}")))?;
                if l != 1 && l != -1 {
                    return Err(err(line_no, "lambda must be 1 or -1"));
                }
                cfg.lambda = Some(l);
            }
            "tau" => cfg.tau = Some(fnum(value)?),
            "alpha" => cfg.alpha = Some(fnum(value)?),
            "omega" => cfg.omega = Some(fnum(value)?),
            "gamma" => cfg.gamma = Some(fnum(value)?),
            "c" => {
                cfg.c = Some(
                    parse_complex(value)
                        .ok_or_else(|| err(line_no, format!("bad complex value {value:?}")))?,
                )
            }
            "mode_g0" | "mode_g1" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(err(line_no, format!("{key} needs: n re im")));
                }
                let n: i64 = parts[0]
                    .parse()
                    .map_err(|e| err(line_no, format!("{key} index: {e}")))?;
                let coeff = Complex64::new(fnum(parts[1])?, fnum(parts[2])?);
                if key == "mode_g0" {
                    cfg.g0_modes.push((n, coeff));
                } else {
                    cfg.g1_modes.push((n, coeff));
                }
            }
            "window" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 4 {
                    return Err(err(line_no, "window needs: re_min re_max im_min im_max"));
                }
                cfg.window = Some(Window::new(
                    fnum(parts[0])?,
                    fnum(parts[1])?,
                    fnum(parts[2])?,
                    fnum(parts[3])?,
                ));
            }
            "tol" => {
                let t = fnum(value)?;
                if !(t > 0.0) {
                    return Err(err(line_no, "tol must be positive"));
                }
                cfg.tol = t;
            }
            "cut_strategies" => {
                let mut out = Vec::new();
                for name in value.split(',') {
                    let s: CutStrategy = name
                        .trim()
                        .parse()
                        .map_err(|_| err(line_no, format!("unknown cut strategy {name:?}")))?;
                    out.push(s);
                }
                if out.is_empty() {
                    return Err(err(line_no, "cut_strategies must not be empty"));
                }
                cfg.cut_strategies = out;
            }
            "out" => cfg.out = Some(value.to_string()),
            "k" => {
                cfg.k_points.push(
                    parse_complex(value)
                        .ok_or_else(|| err(line_no, format!("bad complex value {value:?}")))?,
                )
            }
            "u0_csv" => cfg.u0_csv = Some(value.to_string()),
            "g0_csv" => cfg.g0_csv = Some(value.to_string()),
            "g1_csv" => cfg.g1_csv = Some(value.to_string()),
            "horizon" => cfg.horizon = Some(fnum(value)?),
            "decay_m" => cfg.decay_m = fnum(value)?,
            "decay_p" => cfg.decay_p = fnum(value)?,
            "grid_n" => {
                cfg.grid_n = value
                    .parse()
                    .map_err(|e| err(line_no, format!("grid_n: {e}")))?;
                if cfg.grid_n < 3 {
                    return Err(err(line_no, "grid_n must be at least 3"));
                }
            }
            "jobs" => {
                cfg.jobs = value
                    .parse()
                    .map_err(|e| err(line_no, format!("jobs: {e}")))?;
                if cfg.jobs == 0 {
                    return Err(err(line_no, "jobs must be at least 1"));
                }
            }
            other => return Err(err(line_no, format!("unknown key {other:?}"))),
        }
    }
    if !mode_seen {
        return Err(ConfigError::Validation("mode is required".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    fn require_triple(&self) -> Result<(), ConfigError> {
        for (name, missing) in [
            ("lambda", self.lambda.is_none()),
            ("alpha", self.alpha.is_none()),
            ("omega", self.omega.is_none()),
            ("c", self.c.is_none()),
        ] {
            if missing {
                return Err(ConfigError::Validation(format!(
                    "{} requires {name}",
                    self.mode.as_str()
                )));
            }
        }
        Ok(())
    }

    fn has_pair_spec(&self) -> bool {
        (self.lambda.is_some() && self.tau.is_some())
            || (self.lambda.is_some()
                && self.alpha.is_some()
                && self.omega.is_some()
                && self.c.is_some())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self.mode {
            Mode::ClassifyExp => self.require_triple()?,
            Mode::Scan | Mode::PlotData => {
                if !self.has_pair_spec() {
                    return Err(ConfigError::Validation(
                        "scan/plot-data need a pair spec: lambda + tau (+ modes) or lambda + alpha + omega + c".into(),
                    ));
                }
                let w = self.window.ok_or_else(|| {
                    ConfigError::Validation("scan/plot-data require a window".into())
                })?;
                if !w.is_conjugation_symmetric(1e-9) {
                    return Err(ConfigError::Validation(
                        "scan window must be symmetric under complex conjugation".into(),
                    ));
                }
            }
            Mode::SolitonCheck => {
                let omega = self.omega.ok_or_else(|| {
                    ConfigError::Validation("soliton-check requires omega".into())
                })?;
                if !(omega > 0.0) {
                    return Err(ConfigError::Validation(
                        "soliton-check requires omega > 0".into(),
                    ));
                }
                if self.gamma.is_none() {
                    return Err(ConfigError::Validation(
                        "soliton-check requires gamma".into(),
                    ));
                }
            }
            Mode::Monodromy => {
                if !self.has_pair_spec() {
                    return Err(ConfigError::Validation(
                        "monodromy needs a pair spec".into(),
                    ));
                }
                if self.k_points.is_empty() {
                    return Err(ConfigError::Validation(
                        "monodromy requires at least one k".into(),
                    ));
                }
            }
            Mode::Spectra => {
                if !self.has_pair_spec() {
                    return Err(ConfigError::Validation("spectra needs a pair spec".into()));
                }
                if self.k_points.is_empty() {
                    return Err(ConfigError::Validation(
                        "spectra requires at least one k".into(),
                    ));
                }
                for (name, missing) in [
                    ("u0_csv", self.u0_csv.is_none()),
                    ("g0_csv", self.g0_csv.is_none()),
                    ("g1_csv", self.g1_csv.is_none()),
                ] {
                    if missing {
                        return Err(ConfigError::Validation(format!(
                            "spectra requires {name}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The background pair described by this config.
    pub fn pair(&self) -> Result<PeriodicPair, ConfigError> {
        if let (Some(lambda), Some(tau)) = (self.lambda, self.tau) {
            return PeriodicPair::new(lambda, tau, self.g0_modes.clone(), self.g1_modes.clone())
                .map_err(|e| ConfigError::Validation(e.to_string()));
        }
        let triple = self.triple()?;
        Ok(triple.pair())
    }

    pub fn triple(&self) -> Result<ExponentialTriple, ConfigError> {
        self.require_triple()?;
        ExponentialTriple::new(
            self.lambda.unwrap(),
            self.alpha.unwrap(),
            self.omega.unwrap(),
            self.c.unwrap(),
        )
        .map_err(|e| ConfigError::Validation(e.to_string()))
    }

    pub fn soliton(&self) -> Result<SolitonParams, ConfigError> {
        soliton_params(
            self.gamma
                .ok_or_else(|| ConfigError::Validation("gamma is required".into()))?,
            self.omega
                .ok_or_else(|| ConfigError::Validation("omega is required".into()))?,
        )
        .map_err(|e| ConfigError::Validation(e.to_string()))
    }

    /// Normalized key = value lines echoing every effective setting.
    pub fn echo(&self) -> Vec<String> {
        let mut out = vec![format!("mode = {}", self.mode.as_str())];
        let push_f = |name: &str, v: Option<f64>, out: &mut Vec<String>| {
            if let Some(v) = v {
                out.push(format!("{name} = {v}"));
            }
        };
        if let Some(l) = self.lambda {
            out.push(format!("lambda = {l}"));
        }
        push_f("tau", self.tau, &mut out);
        push_f("alpha", self.alpha, &mut out);
        push_f("omega", self.omega, &mut out);
        push_f("gamma", self.gamma, &mut out);
        if let Some(c) = self.c {
            out.push(format!("c = {} {}", c.re, c.im));
        }
        for &(n, v) in &self.g0_modes {
            out.push(format!("mode_g0 = {n} {} {}", v.re, v.im));
        }
        for &(n, v) in &self.g1_modes {
            out.push(format!("mode_g1 = {n} {} {}", v.re, v.im));
        }
        if let Some(w) = self.window {
            out.push(format!(
                "window = {} {} {} {}",
                w.re_min, w.re_max, w.im_min, w.im_max
            ));
        }
        out.push(format!("tol = {:e}", self.tol));
        out.push(format!(
            "cut_strategies = {}",
            self.cut_strategies
                .iter()
                .map(|s| s.name())
                .collect::<Vec<_>>()
                .join(",")
        ));
        for &k in &self.k_points {
            out.push(format!("k = {} {}", k.re, k.im));
        }
        for (name, v) in [
            ("out", &self.out),
            ("u0_csv", &self.u0_csv),
            ("g0_csv", &self.g0_csv),
            ("g1_csv", &self.g1_csv),
        ] {
            if let Some(v) = v {
                out.push(format!("{name} = {v}"));
            }
        }
        push_f("horizon", self.horizon, &mut out);
        out.push(format!("decay_m = {}", self.decay_m));
        out.push(format!("decay_p = {}", self.decay_p));
        out.push(format!("grid_n = {}", self.grid_n));
        out.push(format!("jobs = {}", self.jobs));
        out
    }
}
