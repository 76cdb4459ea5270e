//! Cauchy problem: P(t,x) = ∫ G(t,x,y) φ(y) dy.
//!
//! The Green's-function atom turns an absolutely continuous start φ into the
//! transported term e^{(1-α)βt} φ(x e^{βt}) of the regular field (change of
//! variables inside the delta integral) and keeps atomic starts as explicit
//! atoms of mass e^{-αβt}. The regular kernel contributes a convolution over
//! y ∈ [0, x e^{βt}], evaluated by adaptive quadrature with subdivision
//! forced at the breakpoints of φ and a geometric ladder when the interval
//! dwarfs the support of φ.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::green;
use crate::init::InitialDensity;
use crate::params::{ModelParams, SeriesConfig};
use crate::quad::{geometric_ladder, integrate, QuadConfig};

/// Density snapshot at one time: regular values on a grid plus explicit
/// atoms and the tracked positions of transported jump discontinuities.
#[derive(Debug, Clone, Serialize)]
pub struct DensitySolution {
    pub t: f64,
    pub grid: Vec<f64>,
    pub regular_values: Vec<f64>,
    /// (location, mass) pairs; a Dirac start keeps its full transported atom.
    pub atoms: Vec<(f64, f64)>,
    /// Locations x_d(0) e^{-βt} of jumps inherited from the initial data.
    pub discontinuities: Vec<f64>,
    /// Atom masses plus the quadrature mass of the regular part.
    pub total_mass: f64,
    /// Error estimate attached to `total_mass`.
    pub mass_tolerance: f64,
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time must be >= 0, got {t}")));
    }
    Ok(())
}

/// The atom-driven part of the regular field: e^{(1-α)βt} φ(x e^{βt}),
/// evaluated through ln φ so that e^{βt}-stretched arguments cannot
/// overflow into NaN.
fn transported_term(params: &ModelParams, phi: &InitialDensity, t: f64, x: f64) -> f64 {
    let beta_t = params.beta() * t;
    let arg = x * beta_t.exp();
    let ln = (1.0 - params.alpha()) * beta_t + phi.log_density(arg);
    if ln == f64::NEG_INFINITY {
        0.0
    } else {
        ln.exp()
    }
}

/// Upper quadrature bound for the convolution in y: the causal limit
/// x e^{βt} clipped to where φ still carries mass.
fn convolution_upper(phi: &InitialDensity, x: f64, growth: f64) -> f64 {
    let causal = x * growth; // may be +inf for extreme βt
    let (scale, support_end) = phi.support_hint();
    let phi_cap = match support_end {
        // smooth tails fall at least exponentially on the scale of φ, so
        // the mass beyond a hundred scale lengths is far below roundoff
        Some(end) => end,
        None => 100.0 * scale,
    };
    causal.min(phi_cap)
}

/// Regular part of the solved density at a single point.
pub fn density_at(
    params: &ModelParams,
    phi: &InitialDensity,
    t: f64,
    x: f64,
    cfg: &SeriesConfig,
) -> Result<f64> {
    check_time(t)?;
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("x must be finite, got {x}")));
    }
    if x < 0.0 {
        return Ok(0.0);
    }

    let mut value = transported_term(params, phi, t, x);

    // an atomic start convolves directly with the regular kernel
    if let Some((y0, mass)) = phi.atom() {
        value += mass * green::green_regular(params, t, x, y0, cfg)?;
        return Ok(value);
    }

    let growth = (params.beta() * t).exp();
    let y_up = convolution_upper(phi, x, growth);
    if y_up <= 0.0 {
        return Ok(value);
    }

    let mut forced: Vec<f64> = phi.breakpoints();
    let (scale, support_end) = phi.support_hint();
    if support_end.is_none() && y_up / scale > 8.0 {
        forced.extend(geometric_ladder(scale, y_up));
    }

    let integrand = |y: f64| {
        let g = green::green_regular(params, t, x, y, cfg).unwrap_or(f64::NAN);
        g * phi.density(y)
    };
    let q = integrate(integrand, 0.0, y_up, &forced, &QuadConfig::default())?;
    Ok(value + q.value)
}

/// Regular density on a whole grid (parallel over points, deterministic).
pub fn density_profile(
    params: &ModelParams,
    phi: &InitialDensity,
    t: f64,
    grid: &[f64],
    cfg: &SeriesConfig,
) -> Result<Vec<f64>> {
    grid.par_iter()
        .map(|&x| density_at(params, phi, t, x, cfg))
        .collect()
}

/// Domain over which the solved density carries all but ~1e-16 of its mass.
fn mass_domain(params: &ModelParams, phi: &InitialDensity, t: f64) -> f64 {
    let decay = params.decay_factor(t);
    let stationary_span = (params.alpha() + 40.0) / params.k();
    let (scale, support_end) = phi.support_hint();
    let initial_span = support_end.unwrap_or(50.0 * scale + 45.0) * decay;
    stationary_span + initial_span
}

/// Solves the Cauchy problem on `grid` and audits the total mass.
pub fn solve(
    params: &ModelParams,
    phi: &InitialDensity,
    t: f64,
    grid: &[f64],
    cfg: &SeriesConfig,
) -> Result<DensitySolution> {
    check_time(t)?;
    if grid.is_empty() {
        return Err(Error::InvalidInput("grid must not be empty".into()));
    }
    if grid[0] < 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "grid must be ascending and nonnegative".into(),
        ));
    }

    let regular_values = density_profile(params, phi, t, grid, cfg)?;

    let decay = params.decay_factor(t);
    let atoms: Vec<(f64, f64)> = match phi.atom() {
        Some((y0, mass)) => vec![(y0 * decay, mass * singular_mass(params, t))],
        None => Vec::new(),
    };
    let discontinuities: Vec<f64> = phi.jump_points().iter().map(|(x0, _)| x0 * decay).collect();

    // mass audit over the full support, independent of the display grid
    let upper = mass_domain(params, phi, t);
    let mut forced: Vec<f64> = discontinuities.clone();
    forced.extend(atoms.iter().map(|a| a.0));
    let (scale, _) = phi.support_hint();
    forced.push(scale * decay); // transported front near the origin
    forced.push(params.alpha() / params.k());
    forced.extend(geometric_ladder(
        (scale * decay).min(upper / 4.0).max(1e-6),
        upper,
    ));
    let mass_cfg = QuadConfig {
        abs_tol: 1e-9,
        rel_tol: 1e-8,
        max_intervals: 1024,
    };
    let q = integrate(
        |x| density_at(params, phi, t, x, cfg).unwrap_or(f64::NAN),
        0.0,
        upper,
        &forced,
        &mass_cfg,
    )?;
    let atom_mass: f64 = atoms.iter().map(|a| a.1).sum();

    Ok(DensitySolution {
        t,
        grid: grid.to_vec(),
        regular_values,
        atoms,
        discontinuities,
        total_mass: atom_mass + q.value,
        mass_tolerance: q.abs_err + 10.0 * cfg.rel_tol,
    })
}

fn singular_mass(params: &ModelParams, t: f64) -> f64 {
    (-params.lambda() * t).exp()
}

/// First moment m₁(t) = (m₁(0) − α/k) e^{-βt} + α/k, obtained by taking the
/// first moment of the master equation; the relaxation target α/k is the
/// stationary gamma mean.
pub fn mean(params: &ModelParams, phi: &InitialDensity, t: f64) -> f64 {
    let target = params.alpha() / params.k();
    (phi.mean() - target) * params.decay_factor(t) + target
}

/// P(X ≤ x) at time t: atom masses up to x plus the integrated regular
/// density. A Dirac start uses the analytic Green CDF; other starts
/// integrate the solved density.
pub fn cdf(
    params: &ModelParams,
    phi: &InitialDensity,
    t: f64,
    x: f64,
    cfg: &SeriesConfig,
) -> Result<f64> {
    check_time(t)?;
    if x < 0.0 {
        return Ok(0.0);
    }
    if let Some((y0, _)) = phi.atom() {
        return green::green_cdf(params, t, x, y0, cfg);
    }

    let decay = params.decay_factor(t);
    let mut forced: Vec<f64> = phi
        .jump_points()
        .iter()
        .map(|(x0, _)| x0 * decay)
        .filter(|&d| d < x)
        .collect();
    let (scale, _) = phi.support_hint();
    forced.push(scale * decay);
    forced.extend(geometric_ladder((scale * decay).max(x * 1e-6), x));
    let q = integrate(
        |z| density_at(params, phi, t, z, cfg).unwrap_or(f64::NAN),
        0.0,
        x,
        &forced,
        &QuadConfig::default(),
    )?;
    Ok(q.value)
}

/// Exact solution for integer α = n and a gamma-type start A x^a e^{-bx}
/// with integer a: every convolution integral reduces to finite
/// polynomial × exponential antiderivatives.
///
/// The kernel polynomial R(x̄) of the finite-sum Green's function gives
///
/// ```text
/// P(t,x) = e^{(1-n)βt} φ(x e^{βt})
///        + A e^{(a+1)βt} e^{-kx} Σ_j r_j Σ_m C(j,m) x^{j-m} (-1)^m I_{a+m}(x; μ)
/// ```
///
/// with μ = b e^{βt} − k and I_p(x; μ) = ∫₀ˣ v^p e^{-μv} dv. The resonant
/// μ → 0 region (b e^{βt} crossing k) switches to a power series in μx,
/// which at μ = 0 is the exact polynomial branch.
pub fn closed_form_solution(
    params: &ModelParams,
    phi: &InitialDensity,
    t: f64,
    x: f64,
) -> Result<f64> {
    check_time(t)?;
    params.integer_alpha().ok_or_else(|| {
        Error::InvalidInput(format!(
            "closed form requires integer alpha, got {}",
            params.alpha()
        ))
    })?;
    let (amp, power, rate) = match phi {
        InitialDensity::GammaLike { amp, power, rate } => (*amp, *power, *rate),
        _ => {
            return Err(Error::InvalidInput(
                "closed form requires a gamma-type initial density".into(),
            ))
        }
    };
    if (power - power.round()).abs() > 1e-12 || power < 0.0 {
        return Err(Error::InvalidInput(format!(
            "closed form requires integer power, got {power}"
        )));
    }
    let a = power.round() as u32;
    if x < 0.0 {
        return Ok(0.0);
    }

    let beta_t = params.beta() * t;
    if (a as f64 + 1.0) * beta_t > 600.0 {
        return Err(Error::Unsupported(
            "closed form growth factor overflows at this time; use the quadrature path".into(),
        ));
    }
    let transported = transported_term(params, phi, t, x);
    if t == 0.0 || x == 0.0 {
        return Ok(transported);
    }

    let k = params.k();
    let growth = beta_t.exp();
    let mu = rate * growth - k;
    let r = green::regular_poly_coeffs(params, t)?;

    // I_p(x; μ) for p = a .. a + n - 1
    let p_max = a as usize + r.len() - 1;
    let ivals = exp_moments(p_max, x, mu);

    let mut conv = 0.0;
    for (j, &rj) in r.iter().enumerate() {
        if rj == 0.0 {
            continue;
        }
        let mut binom = 1.0;
        let mut inner = 0.0;
        for m in 0..=j {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            inner += sign * binom * x.powi((j - m) as i32) * ivals[a as usize + m];
            binom *= (j - m) as f64 / (m as f64 + 1.0);
        }
        conv += rj * inner;
    }
    let prefactor = amp * ((a as f64 + 1.0) * beta_t - k * x).exp();
    Ok(transported + prefactor * conv)
}

/// I_p(x; μ) = ∫₀ˣ v^p e^{-μv} dv for p = 0..=p_max.
///
/// |μx| ≤ 1/2 uses the series x^{p+1} Σ_m (-μx)^m / (m!(p+m+1)) (exact
/// polynomial branch at μ = 0); otherwise the integration-by-parts
/// recurrence I_p = (p I_{p-1} − x^p e^{-μx})/μ.
fn exp_moments(p_max: usize, x: f64, mu: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(p_max + 1);
    if (mu * x).abs() <= 0.5 {
        for p in 0..=p_max {
            // Σ_m (-μx)^m / (m! (p+m+1)), geometric-factorial decay
            let mut pow = 1.0;
            let mut sum = 1.0 / (p as f64 + 1.0);
            let mut m = 1.0;
            loop {
                pow *= -mu * x / m;
                let c = pow / (m + p as f64 + 1.0);
                sum += c;
                if c.abs() < 1e-18 * sum.abs() || m > 60.0 {
                    break;
                }
                m += 1.0;
            }
            out.push(sum * x.powi(p as i32 + 1));
        }
    } else {
        let emx = (-mu * x).exp();
        let mut prev = (1.0 - emx) / mu;
        out.push(prev);
        let mut xp = 1.0;
        for p in 1..=p_max {
            xp *= x;
            let cur = (p as f64 * prev - xp * emx) / mu;
            out.push(cur);
            prev = cur;
        }
    }
    out
}
