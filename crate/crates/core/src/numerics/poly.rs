//! Complex polynomials and root finding with multiplicity clustering.

use super::NumericsError;
use num_complex::Complex64;

/// Polynomial with coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Polynomial { coeffs }
    }

    /// Strip trailing (near-)zero coefficients so the leading one is honest.
    pub fn normalized(mut self) -> Result<Self, NumericsError> {
        while self.coeffs.len() > 1 && self.coeffs.last().map_or(false, |c| c.norm() == 0.0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.last().map_or(0.0, |c| c.norm());
        if lead < 1e-300 {
            return Err(NumericsError::DegenerateLeadingCoefficient(lead));
        }
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::new(vec![Complex64::new(0.0, 0.0)]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * n as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    /// Monic polynomial with the given roots (with multiplicity).
    pub fn from_roots(roots: &[(Complex64, usize)]) -> Polynomial {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for (r, m) in roots {
            for _ in 0..*m {
                let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                for (i, c) in coeffs.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * r;
                }
                coeffs = next;
            }
        }
        Polynomial::new(coeffs)
    }
}

/// All roots of `p` with multiplicities, by Aberth–Ehrlich simultaneous
/// iteration followed by a Newton polish. Roots closer than
/// `cluster_tol * (1 + |root|)` are merged and their multiplicities summed.
pub fn poly_roots(
    p: &Polynomial,
    cluster_tol: f64,
) -> Result<Vec<(Complex64, usize)>, NumericsError> {
    let p = p.clone().normalized()?;
    let n = p.degree();
    assert!(n >= 1, "poly_roots requires degree >= 1");

    // Factor out exact roots at the origin first; they are common (e.g. pure
    // quartics) and slow down the simultaneous iteration.
    let lead = p.coeffs[n];
    let zeros_at_origin = p.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = Polynomial::new(p.coeffs[zeros_at_origin..].to_vec());
    let m = reduced.degree();

    let mut roots: Vec<Complex64> = Vec::with_capacity(n);
    if m >= 1 {
        // Cauchy bound on root magnitudes.
        let bound = 1.0
            + reduced
                .coeffs
                .iter()
                .take(m)
                .map(|c| (c / lead).norm())
                .fold(0.0, f64::max);
        let dp = reduced.derivative();
        let mut z: Vec<Complex64> = (0..m)
            .map(|i| {
                let angle = 2.0 * std::f64::consts::PI * i as f64 / m as f64 + 0.4;
                Complex64::from_polar(0.5 * bound, angle)
            })
            .collect();

        let scale = reduced.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut converged = false;
        for _ in 0..400 {
            let mut max_step = 0.0f64;
            for i in 0..m {
                let pv = reduced.eval(z[i]);
                let dv = dp.eval(z[i]);
                let ratio = if dv.norm() > 1e-300 {
                    pv / dv
                } else {
                    // Perturb off a critical point.
                    let bump = 1e-6 * (1.0 + z[i].norm());
                    z[i] += Complex64::new(bump, 1e-6);
                    continue;
                };
                let mut sum = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    if j != i {
                        let d = z[i] - z[j];
                        if d.norm() > 1e-300 {
                            sum += 1.0 / d;
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - ratio * sum;
                let step = if denom.norm() > 1e-300 { ratio / denom } else { ratio };
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
            if max_step < 1e-14 {
                converged = true;
                break;
            }
        }
        if !converged {
            // Multiple roots converge only linearly; accept if residuals are
            // small at the cluster scale.
            let worst = z
                .iter()
                .map(|&zi| reduced.eval(zi).norm())
                .fold(0.0, f64::max);
            if worst > 1e-8 * scale.max(1.0) {
                return Err(NumericsError::RootsNotConverged);
            }
        }

        // One Newton polish per root (helps simple roots; harmless on clusters).
        for zi in z.iter_mut() {
            let dv = dp.eval(*zi);
            if dv.norm() > 1e-10 * scale {
                let step = reduced.eval(*zi) / dv;
                if step.norm() < cluster_tol * (1.0 + zi.norm()) {
                    *zi -= step;
                }
            }
        }
        roots.extend(z);
    }
    roots.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(zeros_at_origin));

    let mut clusters = cluster_merge(roots, cluster_tol);
    // A root of multiplicity m is a simple root of p^{(m-1)}, so a Newton
    // polish there recovers full accuracy that the cluster mean lacks.
    for (center, mult) in clusters.iter_mut() {
        if *mult < 2 || (*center).norm() == 0.0 {
            continue;
        }
        let mut d = p.clone();
        for _ in 0..*mult - 1 {
            d = d.derivative();
        }
        let dd = d.derivative();
        let mut c = *center;
        for _ in 0..4 {
            let dv = dd.eval(c);
            if dv.norm() < 1e-300 {
                break;
            }
            let step = d.eval(c) / dv;
            if step.norm() > cluster_tol * (1.0 + c.norm()) {
                break;
            }
            c -= step;
        }
        *center = c;
    }
    Ok(clusters)
}

fn cluster_merge(mut roots: Vec<Complex64>, cluster_tol: f64) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    roots.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for r in roots {
        match out
            .iter_mut()
            .find(|(c, _)| (*c - r).norm() <= cluster_tol * (1.0 + r.norm()))
        {
            Some((c, mult)) => {
                // Multiplicity-weighted running mean keeps the cluster center stable.
                *c = (*c * *mult as f64 + r) / (*mult as f64 + 1.0);
                *mult += 1;
            }
            None => out.push((r, 1)),
        }
    }
    out.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}
