//! End-to-end acceptance suite. Each test prints a single
//! "criterion N: PASS/FAIL" line describing what was verified.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

use nls_floquet::background::PeriodicPair;
use nls_floquet::exponential::{
    classify_triple, closed_form_monodromy, ExponentialTriple, FamilyName,
};
use nls_floquet::floquet::{monodromy, BranchTracker, DEFAULT_TOL};
use nls_floquet::halfline::{boundary_spectra_full, SampledCurve};
use nls_floquet::soliton::{soliton_global_relation_residual, soliton_params};
use nls_floquet::spectrum::{
    find_zeros, focusing_realline_check, qb_ratio_signed, Parity, TargetKind, VerdictStatus,
    Window, DEFAULT_MAX_DEPTH,
};

fn cpx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Print the verdict line, then fail the test on Err.
fn report(n: usize, outcome: Result<String, String>) {
    match outcome {
        Ok(msg) => println!("criterion {n}: PASS - {msg}"),
        Err(msg) => {
            println!("criterion {n}: FAIL - {msg}");
            panic!("criterion {n} failed: {msg}");
        }
    }
}

/// Random k in an annulus, rejected near the soliton poles and cuts.
fn random_soliton_k(rng: &mut ChaCha8Rng, k1_abs: f64) -> Complex64 {
    loop {
        let r = rng.gen_range(0.2..3.0_f64);
        let theta = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let k = r * cpx(theta.cos(), theta.sin());
        let near_cut = k.re.abs() < 0.05 && k.im.abs() < k1_abs + 0.1;
        let near_pole = (k - cpx(0.0, k1_abs)).norm() < 0.1 || (k + cpx(0.0, k1_abs)).norm() < 0.1;
        if !near_cut && !near_pole {
            return k;
        }
    }
}

#[test]
fn criterion_1_soliton_global_relation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0_f64;
    let outcome = (|| {
        for &(gamma, omega) in &[(0.0, 4.0), (1.0, 2.0), (-1.0, 1.0)] {
            let p = soliton_params(gamma, omega).map_err(|e| e.to_string())?;
            let k1_abs = p.k1.norm();
            for _ in 0..20 {
                let k = random_soliton_k(&mut rng, k1_abs);
                let r = soliton_global_relation_residual(&p, k).map_err(|e| e.to_string())?;
                worst = worst.max(r);
                if r > 1e-10 {
                    return Err(format!(
                        "|bA - aB| = {r:.3e} at k = {k} for (gamma, omega) = ({gamma}, {omega})"
                    ));
                }
            }
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 1.0 {
            return Err(format!("runtime {elapsed:?} >= 1 s"));
        }
        Ok(format!(
            "3 soliton cases x 20 random k: max |bA - aB| = {worst:.2e} <= 1e-10 in {elapsed:?}"
        ))
    })();
    report(1, outcome);
}

#[test]
fn criterion_2_monodromy_cross_validation() {
    let start = Instant::now();
    let triples = [
        ExponentialTriple::new(-1, 1.0, 2.0, cpx(1.0, 0.0)).unwrap(),
        ExponentialTriple::new(-1, 0.7, -5.0, cpx(0.4, 0.3)).unwrap(),
        ExponentialTriple::new(1, 1.0, -4.0, cpx(0.0, 2.0_f64.sqrt())).unwrap(),
        ExponentialTriple::new(1, 1.3, 3.0, cpx(-0.8, 0.6)).unwrap(),
    ];
    let outcome = (|| {
        let mut worst = 0.0_f64;
        for triple in &triples {
            let pair = triple.pair();
            // 5 x 5 grid over [-1.2, 1.2]^2, jittered off the axes.
            for i in 0..5 {
                for j in 0..5 {
                    let k = cpx(
                        -1.2 + 0.6 * i as f64 + 0.013,
                        -1.2 + 0.6 * j as f64 + 0.017,
                    );
                    let numeric = monodromy(&pair, k, DEFAULT_TOL).map_err(|e| e.to_string())?;
                    let exact = closed_form_monodromy(triple, k).monodromy;
                    // Entries grow like e^{|Im Omega tau|}; compare relative
                    // to the matrix scale.
                    let scale = 1.0
                        + [exact.m11, exact.m12, exact.m21, exact.m22]
                            .iter()
                            .map(|e| e.norm())
                            .fold(0.0, f64::max);
                    for (n, e) in [
                        (numeric.m11, exact.m11),
                        (numeric.m12, exact.m12),
                        (numeric.m21, exact.m21),
                        (numeric.m22, exact.m22),
                    ] {
                        let r = (n - e).norm() / scale;
                        worst = worst.max(r);
                        if r > 1e-8 {
                            return Err(format!(
                                "entry mismatch {r:.3e} at k = {k} for alpha = {}, omega = {}",
                                triple.alpha, triple.omega
                            ));
                        }
                    }
                }
            }
        }
        // Soliton discriminant: anchored sqrt G against 2i sin(2 k^2 tau).
        let p = soliton_params(0.7, 3.0).map_err(|e| e.to_string())?;
        let pair = p.pair();
        let tau = p.tau();
        let mut tracker = BranchTracker::new(&pair, DEFAULT_TOL);
        let mut worst_g = 0.0_f64;
        let i = cpx(0.0, 1.0);
        for &r in &[0.5, 0.9, 1.4, 2.0, 2.6] {
            for &sgn in &[1.0, -1.0] {
                let theta = sgn * std::f64::consts::FRAC_PI_8;
                let k = r * cpx(theta.cos(), theta.sin());
                let st = tracker
                    .branch_at(k, &[], k.norm())
                    .map_err(|e| e.to_string())?;
                let expect = 2.0 * i * (2.0 * k * k * tau).sin();
                let res = (st.sqrt_g - expect).norm() / (1.0 + expect.norm());
                worst_g = worst_g.max(res);
                if res > 1e-8 {
                    return Err(format!("sqrt G mismatch {res:.3e} at k = {k}"));
                }
            }
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs() >= 30 {
            return Err(format!("runtime {elapsed:?} >= 30 s"));
        }
        Ok(format!(
            "4 triples x 25 grid points entrywise {worst:.2e}, soliton sqrt G {worst_g:.2e}, all <= 1e-8 in {elapsed:?}"
        ))
    })();
    report(2, outcome);
}

#[test]
fn criterion_3_zero_census() {
    let start = Instant::now();
    let outcome = (|| {
        // Zero pair at omega = 4: tau = pi/2, G = -4 sin^2(2k^2 tau) with
        // double zeros at k^2 = n and an order-4 zero at the origin. The
        // window covers n = 0, 1, 2 on both axes.
        let pair = PeriodicPair::zero(1, std::f64::consts::FRAC_PI_2).unwrap();
        let window = Window::square(1.5);
        let scan =
            find_zeros(&pair, window, TargetKind::G, DEFAULT_MAX_DEPTH).map_err(|e| e.to_string())?;
        if !scan.complete {
            return Err("scan hit max subdivision depth".into());
        }
        let mut expected: Vec<(Complex64, usize)> = vec![(cpx(0.0, 0.0), 4)];
        for n in [1.0_f64, 2.0] {
            let r = n.sqrt();
            expected.extend([
                (cpx(r, 0.0), 2),
                (cpx(-r, 0.0), 2),
                (cpx(0.0, r), 2),
                (cpx(0.0, -r), 2),
            ]);
        }
        if scan.records.len() != expected.len() {
            return Err(format!(
                "found {} zeros, expected {}: {:?}",
                scan.records.len(),
                expected.len(),
                scan.records.iter().map(|r| r.location).collect::<Vec<_>>()
            ));
        }
        for (loc, mult) in &expected {
            let hit = scan
                .records
                .iter()
                .find(|r| (r.location - loc).norm() < 1e-2)
                .ok_or_else(|| format!("missing zero near {loc}"))?;
            if hit.multiplicity != *mult {
                return Err(format!(
                    "multiplicity {} at {loc}, expected {mult}",
                    hit.multiplicity
                ));
            }
        }
        let mult_sum: usize = scan.records.iter().map(|r| r.multiplicity).sum();
        if mult_sum as i32 != scan.total_winding {
            return Err(format!(
                "multiplicity sum {mult_sum} != total winding {}",
                scan.total_winding
            ));
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs() >= 60 {
            return Err(format!("runtime {elapsed:?} >= 60 s"));
        }
        Ok(format!(
            "9 zeros with the exact census, multiplicity sum {mult_sum} = total winding in {elapsed:?}"
        ))
    })();
    report(3, outcome);
}

#[test]
fn criterion_4_focusing_families() {
    let outcome = (|| {
        // 25-point sweep of the c = +-alpha sqrt(omega - alpha^2) branch.
        for i in 0..5 {
            let alpha = 0.6 + 0.25 * i as f64;
            for j in 0..5 {
                let omega = alpha * alpha * (1.0 + 0.7 * j as f64) + 0.1;
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let c = sign * alpha * (omega - alpha * alpha).sqrt();
                let t = ExponentialTriple::new(-1, alpha, omega, cpx(c, 0.0))
                    .map_err(|e| e.to_string())?;
                let (verdict, tag) = classify_triple(&t).map_err(|e| e.to_string())?;
                if verdict.status != VerdictStatus::Consistent || tag.name != FamilyName::F13a {
                    return Err(format!(
                        "sweep point (alpha, omega) = ({alpha}, {omega}): status {:?}, tag {}; {}",
                        verdict.status,
                        tag.name.as_str(),
                        verdict.notes
                    ));
                }
            }
        }
        // 10 points on the c = i alpha sqrt(|omega| + 2 alpha^2) branch.
        for j in 0..10 {
            let alpha = 0.5 + 0.1 * (j % 3) as f64;
            let omega = -6.0 * alpha * alpha - 0.4 * (j as f64 + 1.0);
            let c = alpha * (omega.abs() + 2.0 * alpha * alpha).sqrt();
            let t = ExponentialTriple::new(-1, alpha, omega, cpx(0.0, c))
                .map_err(|e| e.to_string())?;
            let (verdict, tag) = classify_triple(&t).map_err(|e| e.to_string())?;
            if verdict.status != VerdictStatus::Consistent || tag.name != FamilyName::F13b {
                return Err(format!(
                    "second-branch point (alpha, omega) = ({alpha}, {omega}): status {:?}, tag {}; {}",
                    verdict.status,
                    tag.name.as_str(),
                    verdict.notes
                ));
            }
        }
        // 10 gap points: omega in (-6 alpha^2, alpha^2), c off both branches.
        // |omega| stays >= 0.6: the period is 2 pi / |omega| and near-zero
        // omega pushes the monodromy entries past f64 range at any radius
        // where the large-k branch anchoring is valid.
        let gap_omegas = [-5.5_f64, -4.8, -4.1, -3.4, -2.7, -2.0, -1.4, -0.9, -0.6, 0.6];
        for &omega in &gap_omegas {
            let alpha = 1.0;
            let t = ExponentialTriple::new(-1, alpha, omega, cpx(0.3, 0.1))
                .map_err(|e| e.to_string())?;
            let (verdict, tag) = classify_triple(&t).map_err(|e| e.to_string())?;
            if verdict.status != VerdictStatus::Inconsistent || tag.name != FamilyName::None {
                return Err(format!(
                    "gap point omega = {omega}: status {:?}, tag {}; {}",
                    verdict.status,
                    tag.name.as_str(),
                    verdict.notes
                ));
            }
            if !verdict
                .witnesses
                .iter()
                .any(|w| w.parity == Parity::Odd && w.violating)
            {
                return Err(format!("gap point omega = {omega}: no odd-parity witness"));
            }
        }
        Ok("25 first-branch points and 10 second-branch points consistent, 10 gap points inconsistent with odd witnesses".into())
    })();
    report(4, outcome);
}

/// (alpha, Re c) of the two K-parametrized defocusing families.
fn d25_triple(k: f64, omega: f64, c2: f64) -> ExponentialTriple {
    let alpha = -(4.0 * k * k * k + omega * k) / c2;
    let re_sq =
        (alpha * alpha + omega / 2.0).powi(2) - c2 * c2 - 2.0 * k * k * (6.0 * k * k + omega);
    ExponentialTriple::new(1, alpha, omega, cpx(re_sq.max(0.0).sqrt(), c2)).unwrap()
}

#[test]
fn criterion_5_defocusing_families() {
    let outcome = (|| {
        let mut cases: Vec<(ExponentialTriple, FamilyName)> = Vec::new();
        // Family 1: c determined by alpha and omega in [-3 alpha^2, 0).
        for &(alpha, omega) in &[(1.0_f64, -1.0_f64), (1.0, -2.0), (1.5, -3.0)] {
            let a2 = alpha * alpha;
            let re = ((omega + 3.0 * a2).powi(3) / (27.0 * a2)).sqrt();
            let im = omega.abs().powf(1.5) / (3.0 * 3.0_f64.sqrt() * alpha);
            cases.push((
                ExponentialTriple::new(1, alpha, omega, cpx(re, im)).unwrap(),
                FamilyName::D1,
            ));
        }
        // Family 2: K-parametrized, c2 > 0, omega in (-12K^2, -4K^2).
        for &(k, omega, c2) in &[(1.0, -6.0, 0.5), (1.0, -8.0, 1.0), (0.5, -2.0, 0.4)] {
            cases.push((d25_triple(k, omega, c2), FamilyName::D2));
        }
        // Family 3: c = i alpha sqrt(-2 alpha^2 - omega), omega < -3 alpha^2.
        for &(alpha, omega) in &[(1.0_f64, -4.0_f64), (1.0, -5.0), (0.8, -3.0)] {
            let c = alpha * (-2.0 * alpha * alpha - omega).sqrt();
            cases.push((
                ExponentialTriple::new(1, alpha, omega, cpx(0.0, c)).unwrap(),
                FamilyName::D3,
            ));
        }
        // Family 4: c = +- alpha sqrt(omega + alpha^2), omega + alpha^2 >= 0.
        for &(alpha, omega, sign) in &[(1.0_f64, 1.0_f64, 1.0_f64), (1.0, 3.0, -1.0), (2.0, 0.5, 1.0)] {
            let c = sign * alpha * (omega + alpha * alpha).sqrt();
            cases.push((
                ExponentialTriple::new(1, alpha, omega, cpx(c, 0.0)).unwrap(),
                FamilyName::D4,
            ));
        }
        // Family 5: K-parametrized, c2 < 0, omega in (-4K^2, -3K^2].
        for &(k, omega, c2) in &[(1.0, -3.5, -0.2), (1.0, -3.6, -0.15), (1.2, -5.0, -0.3)] {
            cases.push((d25_triple(k, omega, c2), FamilyName::D5));
        }
        for (triple, want) in &cases {
            let (verdict, tag) = classify_triple(triple).map_err(|e| e.to_string())?;
            if verdict.status != VerdictStatus::Consistent {
                return Err(format!(
                    "{} sample (alpha, omega, c) = ({}, {}, {}): status {:?}; {}",
                    want.as_str(),
                    triple.alpha,
                    triple.omega,
                    triple.c,
                    verdict.status,
                    verdict.notes
                ));
            }
            if tag.name != *want {
                return Err(format!(
                    "sample (alpha, omega, c) = ({}, {}, {}): tag {} != {}",
                    triple.alpha,
                    triple.omega,
                    triple.c,
                    tag.name.as_str(),
                    want.as_str()
                ));
            }
        }
        Ok("3 samples per defocusing family, each tagged consistent with exactly its own family".into())
    })();
    report(5, outcome);
}

/// Random periodic pair with up to `max_modes` Fourier modes per trace.
fn random_pair(rng: &mut ChaCha8Rng, lambda: i32, max_modes: usize) -> PeriodicPair {
    let tau = rng.gen_range(1.0..3.0);
    let mut modes = |n_max: usize| {
        let count = rng.gen_range(1..=n_max);
        (0..count)
            .map(|_| {
                let n = loop {
                    let n = rng.gen_range(-3..=3_i64);
                    if n != 0 {
                        break n;
                    }
                };
                (n, cpx(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)))
            })
            .collect::<Vec<_>>()
    };
    let g0 = modes(max_modes);
    let g1 = modes(max_modes);
    PeriodicPair::new(lambda, tau, g0, g1).unwrap()
}

#[test]
fn criterion_6_focusing_real_line_discriminant() {
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(606);
        let samples: Vec<f64> = (0..200).map(|j| -3.0 + 6.0 * j as f64 / 199.0).collect();
        for case in 0..10 {
            let pair = random_pair(&mut rng, -1, 3);
            let ok = focusing_realline_check(&pair, &samples).map_err(|e| e.to_string())?;
            if !ok {
                return Err(format!(
                    "pair {case}: G not real-nonpositive on the real line"
                ));
            }
        }
        Ok("10 random focusing pairs: G real and <= 1e-9 on 200 real samples each".into())
    })();
    report(6, outcome);
}

#[test]
fn criterion_7_defocusing_unimodular_ratio() {
    let outcome = (|| {
        // Defocusing triples whose real-line band Omega^2 < 0 is wide
        // enough for G to exceed 0.1 there.
        let triples = [
            ExponentialTriple::new(1, 1.0, -1.0, cpx(0.5443310539518174, 0.19245008972987526))
                .unwrap(),
            ExponentialTriple::new(1, 1.0, -4.0, cpx(0.0, 2.0_f64.sqrt())).unwrap(),
            ExponentialTriple::new(1, 1.3, -2.0, cpx(0.9, 0.4)).unwrap(),
            ExponentialTriple::new(1, 0.9, -2.5, cpx(0.4, 0.8)).unwrap(),
            ExponentialTriple::new(1, 2.0, -3.5, cpx(3.9, -0.2)).unwrap(),
        ];
        let mut worst = 0.0_f64;
        for triple in &triples {
            let pair = triple.pair();
            // Hunt along the real line for points where G > 0.1.
            let mut found = 0;
            for j in 0..240 {
                let k = cpx(0.01 + 3.0 * j as f64 / 239.0, 0.0);
                let z = monodromy(&pair, k, DEFAULT_TOL).map_err(|e| e.to_string())?;
                let tr = z.trace();
                let g = tr * tr - 4.0;
                if g.re <= 0.1 {
                    continue;
                }
                found += 1;
                for sign in [1.0, -1.0] {
                    let q = qb_ratio_signed(&pair, k, sign).map_err(|e| e.to_string())?;
                    let dev = (q.norm() - 1.0).abs();
                    worst = worst.max(dev);
                    if dev > 1e-8 {
                        return Err(format!(
                            "||Q| - 1| = {dev:.3e} at k = {k} (alpha = {}, omega = {})",
                            triple.alpha, triple.omega
                        ));
                    }
                }
                if found >= 8 {
                    break;
                }
            }
            if found == 0 {
                return Err(format!(
                    "no real k with G > 0.1 for alpha = {}, omega = {}",
                    triple.alpha, triple.omega
                ));
            }
        }
        Ok(format!(
            "5 defocusing exponentials: both boundary ratios unimodular, max ||Q| - 1| = {worst:.2e}"
        ))
    })();
    report(7, outcome);
}

/// Uniformly sampled curve for f on [0, x_max].
fn sampled_fn(
    f: impl Fn(f64) -> Complex64,
    x_max: f64,
    n: usize,
) -> SampledCurve {
    let grid: Vec<f64> = (0..=n).map(|j| x_max * j as f64 / n as f64).collect();
    let values = grid.iter().map(|&x| f(x)).collect();
    SampledCurve::new(grid, values).unwrap()
}

#[test]
fn criterion_8_volterra_decay_rate() {
    let outcome = (|| {
        // Soliton boundary traces plus a decaying perturbation of size 1e-2.
        // The series remainder |mu1(0,t,k) - E(t,k)| should then fall off
        // like (1+t)^{-5/2}.
        let p = soliton_params(0.4, 4.0).map_err(|e| e.to_string())?;
        let pair = p.pair();
        let tau = p.tau();
        let horizon = 24.0 * tau;
        let eps = 1e-2;
        let g0 = sampled_fn(
            |t| (cpx(p.alpha, 0.0) + eps * (1.0 + t).powf(-3.5)) * cpx(0.0, p.omega * t).exp(),
            horizon + 1.0,
            30000,
        );
        let g1 = sampled_fn(
            |t| cpx(p.c, 0.0) * cpx(0.0, p.omega * t).exp(),
            horizon + 1.0,
            30000,
        );
        // k values with a mild Floquet exponent (Im OmegaTilde <~ 0.4): deep
        // in the upper quadrant the E-frame conjugation is exponentially
        // ill-conditioned in f64 and the remainder drowns in cancellation
        // noise long before the fit range ends.
        let kset = [cpx(0.8, 0.04), cpx(1.0, 0.05), cpx(1.3, 0.06), cpx(0.9, 0.1)];
        let mut slopes = Vec::new();
        for &k in &kset {
            let res = boundary_spectra_full(&pair, &g0, &g1, k, horizon, DEFAULT_TOL)
                .map_err(|e| e.to_string())?;
            // Log-log fit of the remainder over a decade of 1+t, well away
            // from the horizon where the truncated integral vanishes.
            let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for (j, &t) in res.t.iter().enumerate() {
                if !(1.0..=12.0).contains(&t) {
                    continue;
                }
                let d0 = (res.psi[j][0] - res.background[j][0]).norm();
                let d1 = (res.psi[j][1] - res.background[j][1]).norm();
                let diff = d0.max(d1);
                if diff <= 0.0 {
                    continue;
                }
                let x = (1.0 + t).ln();
                let y = diff.ln();
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                n += 1.0;
            }
            if n < 10.0 {
                return Err(format!("too few fit points at k = {k}"));
            }
            let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            if (slope + 2.5).abs() > 0.3 {
                return Err(format!("slope {slope:.3} at k = {k}, outside -2.5 +- 0.3"));
            }
            slopes.push(slope);
        }
        Ok(format!(
            "remainder decay slopes {:?} within -2.5 +- 0.3 on 4 k values",
            slopes.iter().map(|s| (s * 1e3).round() / 1e3).collect::<Vec<_>>()
        ))
    })();
    report(8, outcome);
}

#[test]
fn criterion_9_conjugation_symmetries() {
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        let mut draws = 0;
        let mut worst = 0.0_f64;
        let mut attempts = 0;
        while draws < 100 {
            attempts += 1;
            if attempts > 400 {
                return Err(format!("only {draws} successful draws in 400 attempts"));
            }
            let lambda = if rng.gen_bool(0.5) { -1 } else { 1 };
            let pair = random_pair(&mut rng, lambda, 2);
            let r = rng.gen_range(0.4..2.0_f64);
            let theta = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            let k = r * cpx(theta.cos(), theta.sin());
            if k.im.abs() < 0.05 || k.re.abs() < 0.05 {
                continue;
            }
            let kb = k.conj();
            let mut tracker = BranchTracker::new(&pair, DEFAULT_TOL);
            // Continuation can land on a discriminant zero; such draws are
            // skipped rather than counted.
            let (st, st_b) = match (
                tracker.branch_at(k, &[], k.norm()),
                tracker.branch_at(kb, &[], kb.norm()),
            ) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            let z = tracker.monodromy_cached(k).map_err(|e| e.to_string())?;
            let zb = tracker.monodromy_cached(kb).map_err(|e| e.to_string())?;
            let (sb, sb_b) = match (
                nls_floquet::floquet::diagonalizer(&z, st.sqrt_g),
                nls_floquet::floquet::diagonalizer(&zb, st_b.sqrt_g),
            ) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            let lf = lambda as f64;
            let g = z.trace() * z.trace() - 4.0;
            let gb = zb.trace() * zb.trace() - 4.0;
            let scale = 1.0 + z.trace().norm_sqr() + z.m12.norm() + z.m21.norm();
            let residuals = [
                (z.m11 - zb.m22.conj()).norm(),
                (z.m12 - lf * zb.m21.conj()).norm(),
                (g - gb.conj()).norm(),
                (st.sqrt_g + st_b.sqrt_g.conj()).norm(),
                (st.multiplier * st_b.multiplier.conj() - 1.0).norm(),
                (sb.m22 - sb_b.m22.conj()).norm(),
            ];
            for (idx, res) in residuals.iter().enumerate() {
                let rel = res / scale;
                worst = worst.max(rel);
                if rel > 1e-9 {
                    return Err(format!(
                        "symmetry {idx} residual {rel:.3e} at k = {k} (lambda = {lambda})"
                    ));
                }
            }
            draws += 1;
        }
        Ok(format!(
            "Z, G, sqrt G, z, A^b conjugation symmetries hold on 100 draws, worst residual {worst:.2e}"
        ))
    })();
    report(9, outcome);
}

#[test]
fn criterion_10_scope_statement() {
    report(
        10,
        Ok("out of scope by design: long-time PDE evolution and Riemann-Hilbert \
            admissibility (the sufficiency direction); covered instead: closed-form \
            oracle equivalence, zero-census consistency verdicts, family \
            reproduction, and the invariant suites of criteria 1-9"
            .into()),
    );
}
