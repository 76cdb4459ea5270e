//! Acceptance suite: one test per criterion, each printing a
//! `criterion N (<name>): PASS/FAIL` line with its figures of merit.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use kfburst::cauchy;
use kfburst::green;
use kfburst::init::InitialDensity;
use kfburst::params::{ModelParams, SeriesConfig};
use kfburst::pde;
use kfburst::quad::{integrate, QuadConfig};
use kfburst::validate;

fn report(n: u32, name: &str, pass: bool, detail: &str, started: Instant) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {n} ({name}): {status} [{detail}] in {:.2}s",
        started.elapsed().as_secs_f64()
    );
}

fn params(beta: f64, alpha: f64, k: f64) -> ModelParams {
    ModelParams::new(beta, alpha * beta, k).unwrap()
}

/// 1. Atom mass plus the integrated regular part is 1 to 1e-8 for
///    α ∈ {0.5, 1, 2, 3.7}, k ∈ {0.2, 1}, t ∈ {0.1, 1, 5}.
#[test]
fn c1_normalization() {
    let started = Instant::now();
    let cfg = SeriesConfig::deep();
    let qcfg = QuadConfig {
        abs_tol: 1e-11,
        rel_tol: 1e-10,
        max_intervals: 4096,
    };
    let mut worst: f64 = 0.0;
    for &alpha in &[0.5, 1.0, 2.0, 3.7] {
        for &k in &[0.2, 1.0] {
            let p = params(1.0, alpha, k);
            for &t in &[0.1, 1.0, 5.0] {
                let atom = green::singular_amplitude(&p, t).unwrap();
                let upper = (alpha + 40.0) / k;
                let q = integrate(
                    |x| green::green_regular(&p, t, x, 0.0, &cfg).unwrap(),
                    0.0,
                    upper,
                    &[0.5 / k, 2.0 / k, 10.0 / k],
                    &qcfg,
                )
                .unwrap();
                worst = worst.max((atom + q.value - 1.0).abs());
            }
        }
    }
    let pass = worst <= 1e-8;
    report(1, "normalization", pass, &format!("max defect {worst:.2e}"), started);
    assert!(pass, "normalization defect {worst:.2e} > 1e-8");
    assert!(started.elapsed().as_secs_f64() < 10.0, "criterion 1 too slow");
}

/// 2. Series and finite sum agree to 1e-12 relative on a 100-point grid for
///    α ∈ {1, 2, 3, 5}; the α = 2 finite sum reproduces the printed
///    two-burst kernel term by term; the α = 1 kernel carries the factor k
///    that unit mass forces.
#[test]
fn c2_closed_form_cross_check() {
    let started = Instant::now();
    let cfg = SeriesConfig::deep();
    let mut worst: f64 = 0.0;
    for &n in &[1u32, 2, 3, 5] {
        let p = params(1.0, n as f64, 0.2);
        for it in 0..10 {
            let t = 0.1 + 0.55 * it as f64;
            for ix in 0..10 {
                let xbar = 50.0 * ix as f64 / 9.0;
                let s = green::green_regular_series(&p, t, xbar, 0.0, &cfg).unwrap();
                let c = green::green_regular_closed(&p, t, xbar, 0.0).unwrap();
                worst = worst.max((s - c).abs() / (1.0 + c.abs()));
            }
        }
    }
    let grid_pass = worst <= 1e-12;

    // term-by-term identity of the α = 2 polynomial coefficients
    let p2 = params(1.0, 2.0, 0.2);
    let mut coeff_pass = true;
    for &t in &[0.2, 1.0, 3.0] {
        let r = green::regular_poly_coeffs(&p2, t).unwrap();
        let e = (-t).exp();
        let r0 = 2.0 * 0.2 * e * (1.0 - e);
        let r1 = 0.04 * (1.0 - e) * (1.0 - e);
        coeff_pass &= (r[0] - r0).abs() <= 1e-14 * r0.abs();
        coeff_pass &= (r[1] - r1).abs() <= 1e-14 * r1.abs();
    }

    // α = 1: the one-burst kernel must integrate (with its atom) to 1,
    // which forces the prefactor k; the k-free variant misses unit mass
    // by (1-e^{-t})(1/k - 1).
    let p1 = params(1.0, 1.0, 0.2);
    let t = 1.0_f64;
    let e = (-t).exp();
    let with_k = integrate(
        |x| green::green_regular_closed(&p1, t, x, 0.0).unwrap(),
        0.0,
        300.0,
        &[5.0, 25.0, 100.0],
        &QuadConfig::default(),
    )
    .unwrap()
    .value;
    let mass_pass = (with_k + e - 1.0).abs() <= 1e-8;
    let without_k = (1.0 - e) * 1.0; // ∫(1-e^{-t})e^{-kx̄}dx̄ = (1-e^{-t})/k, printed form
    let printed_defect = (without_k / 0.2 + e - 1.0).abs();
    let printed_fails = printed_defect > 1e-3;

    let pass = grid_pass && coeff_pass && mass_pass && printed_fails;
    report(
        2,
        "closed-form cross-check",
        pass,
        &format!(
            "grid {worst:.2e}, kernel coefficients {coeff_pass}, unit mass {mass_pass}, \
             k-free variant off by {printed_defect:.2e}"
        ),
        started,
    );
    assert!(pass);
}

/// 3. Laplace inversion matches the series to 1e-6 relative over
///    x̄ ∈ [0.1/k, 20/k] for α ∈ {1, 1.5, 2}, with 1e-8 node-doubling
///    self-consistency, on both k scales.
#[test]
fn c3_laplace_oracle() {
    let started = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for &k in &[0.2, 1.0] {
        for c in validate::laplace_suite(&[1.0, 1.5, 2.0], k).unwrap() {
            pass &= c.passed;
            detail.push_str(&format!("{}={:.1e} ", c.name, c.metric));
        }
    }
    report(3, "laplace oracle", pass, detail.trim(), started);
    assert!(pass);
    assert!(started.elapsed().as_secs_f64() < 30.0, "criterion 3 too slow");
}

/// 4. One million exact paths from a point start: no-burst fraction within
///    4σ of e^{-λt}, KS distance to the analytic CDF ≤ 2e-3, sample mean
///    within 3 standard errors of the moment formula.
#[test]
fn c4_monte_carlo() {
    let started = Instant::now();
    let p = params(1.0, 2.0, 0.2);
    let opts = validate::SuiteOptions {
        mc_paths: 1_000_000,
        seed: 20_240_601,
    };
    let checks = validate::mc_suite(&p, &opts).unwrap();
    let pass = checks.iter().all(|c| c.passed);
    let detail = checks
        .iter()
        .map(|c| format!("{}={:.2e}", c.name, c.metric))
        .collect::<Vec<_>>()
        .join(", ");
    report(4, "monte carlo", pass, &detail, started);
    assert!(pass, "{detail}");
    assert!(started.elapsed().as_secs_f64() < 60.0, "criterion 4 too slow");
}

/// 5. Upwind solver refinement study (512/1024/2048 cells) at t = 2 for
///    α ∈ {1, 2}: L1 errors decreasing with observed order in [0.7, 1.3];
///    and the 2048-cell run at t = 10 is within L1 5e-3 of the stationary
///    density.
#[test]
fn c5_pde_oracle() {
    let started = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for &alpha in &[1.0, 2.0] {
        let p = params(1.0, alpha, 0.2);
        for c in validate::pde_suite(&p).unwrap() {
            pass &= c.passed;
            detail.push_str(&format!("a{alpha} {}={:.2} ", c.name, c.metric));
        }

        // long-run comparison against the stationary gamma density
        let x_max = validate::comparison_x_max(&p);
        let grid = pde::GridConfig::uniform_with_cfl(x_max, 2048, 10.0, 0.9, &p).unwrap();
        let phi = InitialDensity::gamma_like(1.0, 1.0).unwrap();
        let field = pde::project_density(&phi, &grid);
        let run = pde::solve_pde(&p, &field, &grid).unwrap();
        let stat: Vec<f64> = grid
            .centers()
            .iter()
            .map(|&x| green::stationary_density(&p, x))
            .collect();
        let l1 = pde::l1_distance(&run.state.values, &stat, &grid);
        pass &= l1 <= 5e-3;
        detail.push_str(&format!("a{alpha} stationary L1={l1:.2e} "));
    }
    report(5, "pde oracle", pass, detail.trim(), started);
    assert!(pass, "{detail}");
    assert!(started.elapsed().as_secs_f64() < 120.0, "criterion 5 too slow");
}

/// 6. Density dynamics of the two reference regimes (k = 0.2, β = 1,
///    φ = x e^{-x}, x-grid 2048 points on [0, 40], t-scan step 0.1):
///    for α = 1 the argmax is non-increasing over t ∈ {0, 1, 2, 10} and
///    reaches the origin; for α = 2 some scanned t shows two local maxima
///    and the t = 10 argmax sits within one grid cell of (α-1)/k = 5.
#[test]
fn c6_reference_figure_dynamics() {
    let started = Instant::now();
    let phi = InitialDensity::gamma_like(1.0, 1.0).unwrap();
    let grid: Vec<f64> = (0..2048).map(|i| 40.0 * i as f64 / 2047.0).collect();
    let cell = grid[1] - grid[0];

    let profile = |p: &ModelParams, t: f64| -> Vec<f64> {
        grid.iter()
            .map(|&x| cauchy::closed_form_solution(p, &phi, t, x).unwrap())
            .collect()
    };
    let argmax = |v: &[f64]| -> usize {
        v.iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap()
    };
    // strict interior maxima with a small prominence floor against
    // truncation-level wiggles
    let count_maxima = |v: &[f64]| -> usize {
        let floor = 1e-7 * v.iter().cloned().fold(0.0f64, f64::max);
        let mut count = 0;
        for i in 1..v.len() - 1 {
            if v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > floor {
                count += 1;
            }
        }
        count
    };

    // α = 1: maximum drifts monotonically to the origin
    let p1 = params(1.0, 1.0, 0.2);
    let mut locs = Vec::new();
    for &t in &[0.0, 1.0, 2.0, 10.0] {
        locs.push(argmax(&profile(&p1, t)));
    }
    let monotone = locs.windows(2).all(|w| w[1] <= w[0]);
    let reaches_origin = locs[3] <= 1; // within one cell of x = 0
    let pass1 = monotone && reaches_origin;

    // α = 2: a two-maximum window exists and the late argmax is the
    // stationary mode
    let p2 = params(1.0, 2.0, 0.2);
    let mut two_max_t = None;
    let mut t = 0.1;
    while t <= 10.0 + 1e-9 {
        if count_maxima(&profile(&p2, t)) >= 2 {
            two_max_t = Some(t);
            break;
        }
        t += 0.1;
    }
    let late = profile(&p2, 10.0);
    let mode_cell = (argmax(&late) as f64 * cell - 5.0).abs() <= cell + 1e-12;
    let pass2 = two_max_t.is_some() && mode_cell;

    let pass = pass1 && pass2;
    report(
        6,
        "reference figure dynamics",
        pass,
        &format!(
            "argmax path {:?} cells, two maxima first at t={:?}, late argmax {:.3}",
            locs,
            two_max_t,
            argmax(&late) as f64 * cell
        ),
        started,
    );
    assert!(pass);
}

/// 7. The transformed second-order operator applied to Y built from the
///    analytic solution (atom included) decays ≈ 4× per joint 2× refinement
///    of (h, dt), the central-difference order check.
#[test]
fn c7_hyperbolic_residual() {
    let started = Instant::now();
    let p = params(1.0, 2.0, 0.2);

    // exact Y(t, x) for the kernel started at y = 0: the atom contributes
    // A(t) e^{-kx} and the polynomial kernel integrates in closed form
    let y_field = |t: f64, x: f64| -> f64 {
        let atom = green::singular_amplitude(&p, t).unwrap();
        let r = green::regular_poly_coeffs(&p, t).unwrap();
        let mut poly = 0.0;
        for (j, &rj) in r.iter().enumerate() {
            poly += rj * x.powi(j as i32 + 1) / (j as f64 + 1.0);
        }
        (-p.k() * x).exp() * (atom + poly)
    };

    let mut norms = Vec::new();
    for level in 0..3 {
        let n = 128 << level;
        let dt = 0.08 / (1 << level) as f64;
        let grid =
            pde::GridConfig::new(20.0, n, pde::Spacing::Uniform, 1e-4, 1.0, &p).unwrap();
        let states: Vec<pde::FieldState> = (0..3)
            .map(|l| {
                let t = 1.0 + (l as f64 - 1.0) * dt;
                let j: Vec<f64> = grid.centers().iter().map(|&x| y_field(t, x)).collect();
                pde::FieldState {
                    t,
                    values: vec![0.0; n],
                    j_values: j,
                    mass_error: 0.0,
                }
            })
            .collect();
        norms.push(pde::hyperbolic_residual(&states, &p, &grid).unwrap());
    }
    let r01 = norms[0] / norms[1];
    let r12 = norms[1] / norms[2];
    let pass = (2.8..=5.7).contains(&r01) && (2.8..=5.7).contains(&r12);
    report(
        7,
        "hyperbolic residual",
        pass,
        &format!("norms {norms:?}, ratios {r01:.2} {r12:.2}"),
        started,
    );
    assert!(pass);
}

/// 8. A step discontinuity at x₀ = 2 travels to 2e^{-βt} (exactly on the
///    analytic path, within smearing width on the PDE path) and its
///    amplitude decreases strictly in t.
#[test]
fn c8_discontinuity_transport() {
    let started = Instant::now();
    let p = params(1.0, 2.0, 0.2);
    let phi = InitialDensity::uniform(0.0, 2.0).unwrap();
    let cfg = SeriesConfig::default();
    let eps = 1e-7;

    let mut pass = true;
    let mut amps = Vec::new();
    for &t in &[0.5_f64, 1.0, 2.0] {
        let sol = cauchy::solve(&p, &phi, t, &[0.0, 1.0], &cfg).unwrap();
        let xd = sol.discontinuities[0];
        pass &= (xd - 2.0 * (-t).exp()).abs() <= 1e-13;
        let hi = cauchy::density_at(&p, &phi, t, xd - eps, &cfg).unwrap();
        let lo = cauchy::density_at(&p, &phi, t, xd + eps, &cfg).unwrap();
        amps.push(hi - lo);
    }
    pass &= amps[0] > amps[1] && amps[1] > amps[2];
    // the jump inherits the transported-term factor e^{(1-α)βt}
    for (amp, &t) in amps.iter().zip(&[0.5_f64, 1.0, 2.0]) {
        pass &= (amp - 0.5 * (-t).exp()).abs() <= 1e-4;
    }

    // PDE path: steepest descent within smearing distance of the front
    let grid = pde::GridConfig::uniform_with_cfl(90.0, 2048, 1.0, 0.9, &p).unwrap();
    let field = pde::project_density(&phi, &grid);
    let run = pde::solve_pde(&p, &field, &grid).unwrap();
    let xd = 2.0 * (-1.0f64).exp();
    let centers = grid.centers();
    let h = centers[1] - centers[0];
    let mut steepest = (0usize, 0.0f64);
    for (i, pair) in run.state.values.windows(2).enumerate() {
        if centers[i] < xd - 1.0 || centers[i] > xd + 1.0 {
            continue;
        }
        let drop = pair[0] - pair[1];
        if drop > steepest.1 {
            steepest = (i, drop);
        }
    }
    // first-order smearing width ~ sqrt(ν t) with ν = βxh/2
    let width = (xd * h / 2.0 * 1.0).sqrt().max(4.0 * h);
    let pde_loc = centers[steepest.0];
    pass &= (pde_loc - xd).abs() <= 3.0 * width;

    report(
        8,
        "discontinuity transport",
        pass,
        &format!(
            "amplitudes {amps:?}, pde front at {pde_loc:.3} vs {xd:.3} (width {width:.3})"
        ),
        started,
    );
    assert!(pass);
}
