//! Argument-principle winding numbers along closed contours.

use super::NumericsError;
use num_complex::Complex64;

/// A closed contour in the complex plane.
#[derive(Debug, Clone)]
pub enum Contour {
    Circle { center: Complex64, radius: f64 },
    /// Closed polyline; the last vertex connects back to the first.
    Polyline(Vec<Complex64>),
}

impl Contour {
    pub fn rectangle(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Contour {
        Contour::Polyline(vec![
            Complex64::new(re_min, im_min),
            Complex64::new(re_max, im_min),
            Complex64::new(re_max, im_max),
            Complex64::new(re_min, im_max),
        ])
    }

    /// Point at parameter s in [0, 1), counterclockwise.
    pub fn point(&self, s: f64) -> Complex64 {
        match self {
            Contour::Circle { center, radius } => {
                let angle = 2.0 * std::f64::consts::PI * s;
                center + Complex64::from_polar(*radius, angle)
            }
            Contour::Polyline(v) => {
                let n = v.len();
                let t = s * n as f64;
                let i = (t.floor() as usize).min(n - 1);
                let frac = t - i as f64;
                let a = v[i];
                let b = v[(i + 1) % n];
                a + (b - a) * frac
            }
        }
    }
}

/// Integer winding of arg f along the contour, by accumulated phase
/// increments with adaptive bisection until every increment is below pi/2.
///
/// Non-finite values of f are reported as NonFinite; values below
/// 1e-12 * (max |f| on the contour) trigger ZeroOnContour.
pub fn winding_number<F>(
    mut f: F,
    contour: &Contour,
    n_samples: usize,
) -> Result<i32, NumericsError>
where
    F: FnMut(Complex64) -> Complex64,
{
    let n = n_samples.max(64);
    let mut params: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
    params.push(1.0);
    let mut values: Vec<Complex64> = Vec::with_capacity(params.len());
    for &s in &params {
        let v = f(contour.point(s));
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(NumericsError::NonFinite { at: s });
        }
        values.push(v);
    }

    // Refine until every increment satisfies |arg(f_{i+1}/f_i)| < pi/2 and
    // |f| changes by less than a factor 2. The phase criterion alone aliases:
    // an interval straddling the closest approach to an off-contour zero can
    // sweep nearly 2 pi while its endpoint args agree, so the modulus
    // criterion plus a gradation rule (no interval more than twice its
    // neighbors) forces resolution down to the zero's distance scale there.
    let mut splits = 0usize;
    let max_splits = 60 * n;
    let mut i = 0usize;
    while i + 1 < params.len() {
        let len = params[i + 1] - params[i];
        if len < 1e-12 {
            i += 1;
            continue;
        }
        let dphi = (values[i + 1] / values[i]).arg().abs();
        let dmod = (values[i + 1].norm() / values[i].norm()).ln().abs();
        let neighbor = params
            .get(i + 2)
            .map(|p| p - params[i + 1])
            .into_iter()
            .chain(i.checked_sub(1).map(|j| params[i] - params[j]))
            .fold(f64::INFINITY, f64::min);
        if dphi < std::f64::consts::FRAC_PI_2 && dmod < std::f64::consts::LN_2 && len <= 2.0 * neighbor
        {
            i += 1;
            continue;
        }
        if splits >= max_splits {
            return Err(NumericsError::PhaseJump);
        }
        let mid = 0.5 * (params[i] + params[i + 1]);
        let v = f(contour.point(mid));
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(NumericsError::NonFinite { at: mid });
        }
        params.insert(i + 1, mid);
        values.insert(i + 1, v);
        splits += 1;
        // Splitting shortens this interval, which can retrigger the
        // gradation rule one interval back.
        i = i.saturating_sub(1);
    }

    // Zero-on-contour test against a local scale: |f| can span many decades
    // along one contour (the discriminant grows like e^{|Im k^2|}), so a
    // globally relative floor would flag legitimate small values far from
    // the maximum. Compare the minimum with |f| within 5% of arc instead.
    let (min_idx, min) = values
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.norm()))
        .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
    let local_scale = params
        .iter()
        .enumerate()
        .filter(|(_, &p)| {
            let d = (p - params[min_idx]).abs();
            d.min(1.0 - d) <= 0.05
        })
        .map(|(i, _)| values[i].norm())
        .fold(0.0, f64::max);
    let floor = 1e-12 * local_scale;
    if min <= floor {
        return Err(NumericsError::ZeroOnContour { min, floor });
    }

    let mut phase = 0.0;
    for w in values.windows(2) {
        phase += (w[1] / w[0]).arg();
    }
    let winding = phase / (2.0 * std::f64::consts::PI);
    let rounded = winding.round();
    if (winding - rounded).abs() > 0.25 {
        return Err(NumericsError::PhaseJump);
    }
    Ok(rounded as i32)
}
