//! Green's function of the jump-decay master equation.
//!
//! With initial condition δ(x−y) the density at time t splits into a
//! singular atom of mass e^{-αβt} sitting at the decayed start point
//! y·e^{-βt}, plus an absolutely continuous part supported on
//! x̄ = x − y·e^{-βt} ≥ 0:
//!
//! ```text
//! G(t,x,y) = e^{-αβt} δ(x̄)
//!          + e^{-k x̄} Σ_{i≥1} C(α,i) (e^{-βt}-1)^i
//!                      Σ_{s=1}^i C(i,s) (-1)^s k^s x̄^{s-1}/(s-1)!
//! ```
//!
//! The inner alternating sum equals −k·L¹_{i-1}(k x̄) (generalized Laguerre),
//! so the regular part is accumulated here through the stable three-term
//! Laguerre recurrence at O(1) work per outer term instead of the O(i)
//! explicit inner sum, which cancels catastrophically for large i. For
//! integer α = n the outer sum terminates exactly at i = n and a separate
//! closed-form path evaluates the finite polynomial directly; the two routes
//! agree to roundoff and are tested against each other.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{ModelParams, SeriesConfig};
use crate::special::{ln_gamma, KahanSum};

/// Generalized binomial coefficient C(α, i) = α(α−1)…(α−i+1)/i!.
///
/// Total for every real α; equals the usual binomial for integer α and is
/// exactly zero once i exceeds a nonnegative integer α.
pub fn generalized_binomial(alpha: f64, i: u32) -> f64 {
    let mut c = 1.0;
    for j in 0..i {
        c *= (alpha - j as f64) / (j as f64 + 1.0);
    }
    c
}

/// Erlang(s, k) density k^s x^{s-1} e^{-kx}/(s−1)!, the s-fold convolution
/// of the exponential jump kernel. Rejects x < 0: callers clamp to the
/// causal region first.
pub fn erlang_density(s: u32, k: f64, x: f64) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidInput("erlang_density requires s >= 1".into()));
    }
    if !(k > 0.0) {
        return Err(Error::InvalidInput(format!("erlang_density requires k > 0, got {k}")));
    }
    if x < 0.0 {
        return Err(Error::InvalidInput(format!(
            "erlang_density requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(if s == 1 { k } else { 0.0 });
    }
    let ln = (s as f64) * k.ln() + ((s - 1) as f64) * x.ln() - k * x - ln_gamma(s as f64);
    Ok(ln.exp())
}

/// Mass e^{-αβt} of the singular atom: the probability that no burst has
/// occurred by time t. Equals 1 at t = 0 and decays strictly.
pub fn singular_amplitude(params: &ModelParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time must be >= 0, got {t}")));
    }
    Ok((-params.lambda() * t).exp())
}

/// Position y·e^{-βt} of the atom transported from the start point y.
pub fn atom_location(params: &ModelParams, t: f64, y: f64) -> f64 {
    y * params.decay_factor(t)
}

/// Regular part plus atom data at one point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GreenValue {
    pub regular: f64,
    pub atom_amplitude: f64,
    pub atom_location: f64,
    pub xbar: f64,
}

fn check_green_args(t: f64, x: f64, y: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time must be >= 0, got {t}")));
    }
    if !x.is_finite() || !y.is_finite() || y < 0.0 {
        return Err(Error::InvalidInput(format!(
            "positions must be finite with y >= 0, got x={x}, y={y}"
        )));
    }
    Ok(())
}

/// Regular component of the Green's function evaluated by the convergent
/// series. Returns 0 for x̄ < 0 (jumps only push mass above the decayed
/// start point) and at t = 0 (all outer factors vanish).
pub fn green_regular_series(
    params: &ModelParams,
    t: f64,
    x: f64,
    y: f64,
    cfg: &SeriesConfig,
) -> Result<f64> {
    check_green_args(t, x, y)?;
    let xbar = x - y * params.decay_factor(t);
    series_profile(params, t, xbar, cfg)
}

/// Series evaluation on the shifted coordinate x̄ directly.
pub(crate) fn series_profile(
    params: &ModelParams,
    t: f64,
    xbar: f64,
    cfg: &SeriesConfig,
) -> Result<f64> {
    if xbar < 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let alpha = params.alpha();
    let k = params.k();
    let u = k * xbar;
    if u > 745.0 {
        // e^{-u} underflows and |S| grows at most like e^{u/2}
        return Ok(0.0);
    }

    // q = e^{-βt} - 1 ∈ (-1, 0]; exp_m1 keeps 1+q = e^{-βt} exact
    let q = (-params.beta() * t).exp_m1();
    if q == 0.0 {
        return Ok(0.0);
    }
    let decay = 1.0 + q; // e^{-βt}, bounds the tail ratio away from 1
    let tail_mult = q.abs() / decay;
    let envelope = (0.5 * u).exp(); // |L¹_n(u)| <= (n+1) e^{u/2}

    let mut sum = KahanSum::new(cfg.compensated_summation);
    let mut coeff = alpha * q; // C(α,i) q^i, starting at i = 1
    let mut lag_prev = 1.0; // L¹_0(u)
    let mut lag = 2.0 - u; // L¹_1(u)
    let mut hits = 0u32;

    for i in 1..=cfg.max_terms {
        let term = coeff * lag_prev; // uses L¹_{i-1}
        sum.add(term);

        if coeff == 0.0 {
            // integer α: the binomial recurrence terminated the sum exactly
            return Ok(-k * (-u).exp() * sum.value());
        }

        let bound = coeff.abs() * (i as f64) * envelope;
        let target = cfg.rel_tol * sum.value().abs();
        if i >= 3 && i as f64 > alpha + 2.0 {
            // remaining tail <= bound * |q|/e^{-βt} once i > α
            if bound * tail_mult <= target {
                hits += 1;
                if hits >= 3 {
                    return Ok(-k * (-u).exp() * sum.value());
                }
            } else {
                hits = 0;
            }
        }

        // advance C(α,i) q^i and the Laguerre pair
        coeff *= (alpha - i as f64) / (i as f64 + 1.0) * q;
        let n = i as f64; // lag = L¹_i, lag_prev = L¹_{i-1}
        let lag_next = ((2.0 * n + 2.0 - u) * lag - (n + 1.0) * lag_prev) / (n + 1.0);
        lag_prev = lag;
        lag = lag_next;
    }

    let last_bound = coeff.abs() * (cfg.max_terms as f64) * envelope * tail_mult;
    Err(Error::SeriesNonConvergence {
        max_terms: cfg.max_terms,
        last_bound,
        target: cfg.rel_tol * sum.value().abs(),
    })
}

/// Polynomial coefficients r_j of the finite-sum regular part for integer
/// α = n: G_reg(t, x̄) = e^{-k x̄} Σ_{j=0}^{n-1} r_j x̄^j.
///
/// For n = 2 these are r₀ = 2k e^{-βt}(1-e^{-βt}) and r₁ = k²(1-e^{-βt})²,
/// the textbook two-burst kernel.
pub fn regular_poly_coeffs(params: &ModelParams, t: f64) -> Result<Vec<f64>> {
    let n = params.integer_alpha().ok_or_else(|| {
        Error::InvalidInput(format!(
            "finite-sum path requires integer alpha, got {}",
            params.alpha()
        ))
    })?;
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time must be >= 0, got {t}")));
    }
    let k = params.k();
    let q = (-params.beta() * t).exp_m1();

    let mut r = vec![0.0; n as usize];
    let mut outer = 1.0; // C(n,i) q^i
    for i in 1..=n {
        outer *= (n - i + 1) as f64 / i as f64 * q;
        // inner coefficients c_s = C(i,s)(-1)^s k^s/(s-1)!
        let mut c = -(i as f64) * k; // s = 1
        r[0] += outer * c;
        for s in 1..i {
            c *= -k * (i - s) as f64 / (s as f64 * (s as f64 + 1.0));
            r[s as usize] += outer * c;
        }
    }
    Ok(r)
}

/// Regular component via the exact finite sum, available when α = n ∈ ℕ.
/// Agrees with [`green_regular_series`] to roundoff.
pub fn green_regular_closed(params: &ModelParams, t: f64, x: f64, y: f64) -> Result<f64> {
    check_green_args(t, x, y)?;
    let xbar = x - y * params.decay_factor(t);
    if xbar < 0.0 || t == 0.0 {
        // keep t=0 exact: every coefficient carries a factor q = 0
        if params.integer_alpha().is_none() {
            return Err(Error::InvalidInput(format!(
                "finite-sum path requires integer alpha, got {}",
                params.alpha()
            )));
        }
        return Ok(0.0);
    }
    let r = regular_poly_coeffs(params, t)?;
    let mut acc = 0.0;
    for &rj in r.iter().rev() {
        acc = acc * xbar + rj;
    }
    Ok(acc * (-params.k() * xbar).exp())
}

/// Regular component, dispatching to the finite sum for integer α and to
/// the series otherwise.
pub fn green_regular(params: &ModelParams, t: f64, x: f64, y: f64, cfg: &SeriesConfig) -> Result<f64> {
    if params.integer_alpha().is_some() {
        green_regular_closed(params, t, x, y)
    } else {
        green_regular_series(params, t, x, y, cfg)
    }
}

/// Full pointwise evaluation: regular value plus atom bookkeeping.
pub fn green_value(
    params: &ModelParams,
    t: f64,
    x: f64,
    y: f64,
    cfg: &SeriesConfig,
) -> Result<GreenValue> {
    check_green_args(t, x, y)?;
    let loc = atom_location(params, t, y);
    Ok(GreenValue {
        regular: green_regular(params, t, x, y, cfg)?,
        atom_amplitude: singular_amplitude(params, t)?,
        atom_location: loc,
        xbar: x - loc,
    })
}

/// Mass of the regular component on [0, x̄].
///
/// Termwise integration gives ∫₀^x̄ of each Laguerre term in closed form:
/// ∫₀^U e^{-u} L¹_{n}(u) du = 1 − e^{-U} L⁰_{n}(U), so the partial mass is
/// Σ_i C(α,i) q^i (e^{-U} L⁰_{i-1}(U) − 1) with U = k x̄. The same
/// truncation policy as the density series applies.
pub fn green_regular_cdf(params: &ModelParams, t: f64, xbar: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time must be >= 0, got {t}")));
    }
    if xbar <= 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let alpha = params.alpha();
    let q = (-params.beta() * t).exp_m1();
    if q == 0.0 {
        return Ok(0.0);
    }
    let atom = (-params.lambda() * t).exp();
    let u = params.k() * xbar;
    if u > 745.0 {
        // e^{-U}L⁰ underflows: the full regular mass 1 - e^{-αβt} remains
        return Ok(1.0 - atom);
    }

    let decay = 1.0 + q;
    let tail_mult = q.abs() / decay;
    let exp_mu = (-u).exp();

    let mut sum = KahanSum::new(cfg.compensated_summation);
    let mut coeff = alpha * q;
    let mut lag_prev = 1.0; // L⁰_0(u)
    let mut lag = 1.0 - u; // L⁰_1(u)
    let mut hits = 0u32;

    for i in 1..=cfg.max_terms {
        let term = coeff * (exp_mu * lag_prev - 1.0);
        sum.add(term);

        if coeff == 0.0 {
            return Ok(sum.value());
        }
        // |e^{-U}L⁰_{i-1}(U) - 1| <= 1 + e^{-U/2} <= 2
        let bound = 2.0 * coeff.abs();
        let target = cfg.rel_tol * sum.value().abs().max(atom * cfg.rel_tol);
        if i >= 3 && i as f64 > alpha + 2.0 {
            if bound * tail_mult <= target {
                hits += 1;
                if hits >= 3 {
                    return Ok(sum.value());
                }
            } else {
                hits = 0;
            }
        }

        coeff *= (alpha - i as f64) / (i as f64 + 1.0) * q;
        let n = i as f64; // ordinary Laguerre recurrence
        let lag_next = ((2.0 * n + 1.0 - u) * lag - n * lag_prev) / (n + 1.0);
        lag_prev = lag;
        lag = lag_next;
    }

    Err(Error::SeriesNonConvergence {
        max_terms: cfg.max_terms,
        last_bound: 2.0 * coeff.abs() * tail_mult,
        target: cfg.rel_tol * sum.value().abs(),
    })
}

/// CDF of the full Green's function at x: atom mass once x passes the atom
/// location, plus the integrated regular part. Right-continuous, reaching 1
/// as x → ∞.
pub fn green_cdf(params: &ModelParams, t: f64, x: f64, y: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_green_args(t, x, f64::max(y, 0.0))?;
    let loc = atom_location(params, t, y);
    if x < loc {
        return Ok(0.0);
    }
    let atom = singular_amplitude(params, t)?;
    Ok(atom + green_regular_cdf(params, t, x - loc, cfg)?)
}

/// Long-time limit of the regular part: the Gamma(α, k) density
/// k^α x^{α-1} e^{-kx}/Γ(α).
///
/// At x = 0 the value is k for α = 1, zero for α > 1 and +∞ for α < 1
/// (the density stays integrable; quadratures must avoid the endpoint,
/// which Gauss–Kronrod rules do by construction).
pub fn stationary_density(params: &ModelParams, x: f64) -> f64 {
    let alpha = params.alpha();
    let k = params.k();
    if x < 0.0 {
        return 0.0;
    }
    if x == 0.0 {
        return if alpha < 1.0 {
            f64::INFINITY
        } else if alpha == 1.0 {
            k
        } else {
            0.0
        };
    }
    (alpha * k.ln() + (alpha - 1.0) * x.ln() - k * x - ln_gamma(alpha)).exp()
}

/// Mode of the stationary density: (α−1)/k for α > 1, `None` when the
/// maximum sits at the origin (α ≤ 1).
pub fn stationary_mode(params: &ModelParams) -> Option<f64> {
    let alpha = params.alpha();
    if alpha > 1.0 {
        Some((alpha - 1.0) / params.k())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadConfig};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn p(beta: f64, lambda: f64, k: f64) -> ModelParams {
        ModelParams::new(beta, lambda, k).unwrap()
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(generalized_binomial(2.0, 0), 1.0);
        assert_eq!(generalized_binomial(2.0, 1), 2.0);
        assert_eq!(generalized_binomial(2.0, 3), 0.0); // integer truncation
        assert_relative_eq!(generalized_binomial(0.5, 2), -0.125, max_relative = 1e-15);
    }

    #[test]
    fn binomial_matches_factorial_form() {
        for i in 0..10u32 {
            let direct = generalized_binomial(7.0, i);
            let fact = if i <= 7 {
                let mut v = 1.0;
                for j in 0..i {
                    v *= (7 - j) as f64;
                }
                for j in 1..=i {
                    v /= j as f64;
                }
                v
            } else {
                0.0
            };
            assert_relative_eq!(direct, fact, max_relative = 1e-14);
        }
    }

    #[test]
    fn erlang_examples() {
        assert_relative_eq!(erlang_density(1, 0.2, 0.0).unwrap(), 0.2);
        assert_relative_eq!(
            erlang_density(2, 1.0, 1.0).unwrap(),
            0.367_879_441_171_442_33,
            max_relative = 1e-12
        );
        // 2^3 * 0.25 * e^{-1} / 2! = e^{-1}, fixed by direct high-precision arithmetic
        assert_relative_eq!(
            erlang_density(3, 2.0, 0.5).unwrap(),
            0.367_879_441_171_442_33,
            max_relative = 1e-12
        );
        assert!(erlang_density(2, 1.0, -0.1).is_err());
        assert!(erlang_density(0, 1.0, 0.1).is_err());
    }

    #[test]
    fn atom_amplitude_examples() {
        let pr = p(1.0, 2.0, 0.2);
        assert_eq!(singular_amplitude(&pr, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            singular_amplitude(&pr, 1.0).unwrap(),
            0.135_335_283_236_612_7,
            max_relative = 1e-14
        );
        let pr = p(1.0, 1.0, 0.2);
        assert_relative_eq!(
            singular_amplitude(&pr, 2.0f64.ln()).unwrap(),
            0.5,
            max_relative = 1e-14
        );
        assert!(singular_amplitude(&pr, -0.1).is_err());
    }

    #[test]
    fn series_vanishes_at_t0_and_negative_xbar() {
        let pr = p(1.0, 1.7, 0.4);
        let cfg = SeriesConfig::default();
        assert_eq!(green_regular_series(&pr, 0.0, 2.0, 1.0, &cfg).unwrap(), 0.0);
        // x below the decayed start point
        assert_eq!(green_regular_series(&pr, 0.5, 0.1, 1.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn series_stationary_limit_alpha1() {
        // large t with α = 1: limit is the exponential density k e^{-kx};
        // frozen reference 0.2 e^{-0.2} from a 40-digit evaluation
        let pr = p(1.0, 1.0, 0.2);
        let v = green_regular_series(&pr, 50.0, 1.0, 0.0, &SeriesConfig::default()).unwrap();
        assert_relative_eq!(v, 0.163_746_150_615_596_37, max_relative = 1e-10);
        assert_relative_eq!(v, stationary_density(&pr, 1.0), max_relative = 1e-10);
    }

    #[test]
    fn closed_form_two_burst_coefficients_match_printed_kernel() {
        // r0 = 2k e^{-βt}(1-e^{-βt}), r1 = k²(1-e^{-βt})², term by term
        let pr = p(1.0, 2.0, 0.2);
        for &t in &[0.3, 1.0, 2.5, 7.0] {
            let r = regular_poly_coeffs(&pr, t).unwrap();
            let e = (-t).exp();
            assert_eq!(r.len(), 2);
            assert_relative_eq!(r[0], 2.0 * 0.2 * e * (1.0 - e), max_relative = 1e-13);
            assert_relative_eq!(r[1], 0.04 * (1.0 - e) * (1.0 - e), max_relative = 1e-13);
        }
    }

    #[test]
    fn closed_form_frozen_values() {
        // α=1: k(1-e^{-1}) at x̄=0, with the factor k that normalization forces
        let pr = p(1.0, 1.0, 0.2);
        assert_relative_eq!(
            green_regular_closed(&pr, 1.0, 0.0, 0.0).unwrap(),
            0.126_424_111_765_711_54,
            max_relative = 1e-13
        );
        // α=2 value at t=1, x̄=1
        let pr = p(1.0, 2.0, 0.2);
        assert_relative_eq!(
            green_regular_closed(&pr, 1.0, 1.0, 0.0).unwrap(),
            0.089_242_240_924_583_75,
            max_relative = 1e-13
        );
        // α=2 value at t=2, x̄=1
        assert_relative_eq!(
            green_regular_closed(&pr, 2.0, 1.0, 0.0).unwrap(),
            0.062_807_833_143_694_14,
            max_relative = 1e-13
        );
    }

    #[test]
    fn series_equals_closed_for_integer_alpha() {
        let cfg = SeriesConfig::default();
        for &n in &[1u32, 2, 3, 5] {
            let pr = p(1.0, n as f64, 0.3);
            for &t in &[0.1, 0.7, 2.0, 9.0] {
                for &xb in &[0.0, 0.4, 2.2, 11.0] {
                    let s = green_regular_series(&pr, t, xb, 0.0, &cfg).unwrap();
                    let c = green_regular_closed(&pr, t, xb, 0.0).unwrap();
                    assert_abs_diff_eq!(s, c, epsilon = 1e-12 * (1.0 + c.abs()));
                }
            }
        }
    }

    #[test]
    fn series_nonconvergence_reports_pathological_cfg() {
        let pr = p(1.0, 1.5, 1.0);
        let tiny = SeriesConfig::new(1e-12, 4, true).unwrap();
        match green_regular_series(&pr, 2.0, 1.0, 0.0, &tiny) {
            Err(Error::SeriesNonConvergence { max_terms, .. }) => assert_eq!(max_terms, 4),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn normalization_noninteger_alpha() {
        // atom + ∫ regular = 1; quadrature is the independent route here
        let cfg = SeriesConfig::deep();
        for &(alpha, t, k) in &[(0.5, 1.0, 1.0), (3.7, 0.4, 0.2), (1.5, 2.0, 0.7)] {
            let pr = p(1.0, alpha, k);
            let atom = singular_amplitude(&pr, t).unwrap();
            let upper = (alpha + 40.0) / k;
            let q = integrate(
                |xb| series_profile(&pr, t, xb, &cfg).unwrap(),
                0.0,
                upper,
                &[1.0 / k, 10.0 / k],
                &QuadConfig::default(),
            )
            .unwrap();
            assert_abs_diff_eq!(atom + q.value, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn regular_cdf_matches_quadrature() {
        let cfg = SeriesConfig::deep();
        let qcfg = QuadConfig::default();
        for &(alpha, t, k, xb) in &[
            (1.7, 0.8, 0.7, 2.3),
            (0.5, 1.5, 1.0, 0.9),
            (2.0, 1.0, 0.2, 5.0),
            (3.0, 0.3, 1.0, 2.0),
        ] {
            let pr = p(1.0, alpha, k);
            let direct = integrate(
                |z| series_profile(&pr, t, z, &cfg).unwrap(),
                0.0,
                xb,
                &[],
                &qcfg,
            )
            .unwrap();
            let ident = green_regular_cdf(&pr, t, xb, &cfg).unwrap();
            assert_abs_diff_eq!(direct.value, ident, epsilon = 1e-9);
        }
        // frozen value from the 30-digit reference: α=1.7, t=0.8, k=0.7, x̄=2.3
        let pr = p(1.0, 1.7, 0.7);
        assert_relative_eq!(
            green_regular_cdf(&pr, 0.8, 2.3, &cfg).unwrap(),
            0.532_155_820_415_540_7,
            max_relative = 1e-10
        );
    }

    #[test]
    fn green_cdf_reaches_one() {
        let cfg = SeriesConfig::deep();
        let pr = p(1.0, 2.0, 0.2);
        let f = green_cdf(&pr, 2.0, 400.0, 1.0, &cfg).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-10);
        // below the atom the CDF is exactly zero
        let loc = atom_location(&pr, 2.0, 1.0);
        assert_eq!(green_cdf(&pr, 2.0, loc * 0.999, 1.0, &cfg).unwrap(), 0.0);
        // crossing the atom jumps by its mass
        let jump = green_cdf(&pr, 2.0, loc, 1.0, &cfg).unwrap();
        assert_abs_diff_eq!(jump, singular_amplitude(&pr, 2.0).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn green_value_bundles_atom_bookkeeping() {
        let pr = p(1.0, 2.0, 0.2);
        let cfg = SeriesConfig::default();
        let v = green_value(&pr, 1.5, 2.0, 1.0, &cfg).unwrap();
        assert_relative_eq!(v.atom_amplitude, (-3.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(v.atom_location, (-1.5f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(v.xbar, 2.0 - (-1.5f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(
            v.regular,
            green_regular_closed(&pr, 1.5, 2.0, 1.0).unwrap(),
            max_relative = 1e-14
        );
        // below the atom the regular part vanishes but the atom stays
        let below = green_value(&pr, 1.5, 0.1, 1.0, &cfg).unwrap();
        assert_eq!(below.regular, 0.0);
        assert!(below.xbar < 0.0);
    }

    #[test]
    fn stationary_examples() {
        let pr = p(1.0, 1.0, 0.2);
        assert_relative_eq!(stationary_density(&pr, 0.0), 0.2);
        assert_eq!(stationary_mode(&pr), None);

        let pr = p(1.0, 2.0, 0.2);
        assert_relative_eq!(
            stationary_density(&pr, 5.0),
            0.073_575_888_234_288_46,
            max_relative = 1e-12
        );
        assert_eq!(stationary_mode(&pr), Some(5.0));

        let pr = p(1.0, 0.5, 1.0);
        assert_eq!(stationary_mode(&pr), None);
        assert!(stationary_density(&pr, 0.0).is_infinite());
    }

    #[test]
    fn stationary_density_integrates_to_one() {
        for &(alpha, k) in &[(0.5, 1.0), (2.0, 0.2), (3.7, 1.0)] {
            let pr = p(1.0, alpha, k);
            let r = integrate(
                |x| stationary_density(&pr, x),
                0.0,
                (alpha + 40.0) / k,
                &[1.0 / k],
                &QuadConfig::default(),
            )
            .unwrap();
            assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn stationary_mode_is_local_max_by_finite_differences() {
        let pr = p(1.0, 2.0, 1.0);
        let m = stationary_mode(&pr).unwrap();
        assert_relative_eq!(m, 1.0);
        let h = 1e-4;
        let fm = stationary_density(&pr, m);
        assert!(fm > stationary_density(&pr, m - h));
        assert!(fm > stationary_density(&pr, m + h));
        // second difference negative at the mode
        let second =
            stationary_density(&pr, m + h) - 2.0 * fm + stationary_density(&pr, m - h);
        assert!(second < 0.0);
    }

    #[test]
    fn stationary_limit_of_regular_part() {
        // at βt = 25 the sup distance to the gamma density is below 1e-9
        let cfg = SeriesConfig::default();
        for &n in &[1.0, 2.0] {
            let pr = p(1.0, n, 0.2);
            let mut sup: f64 = 0.0;
            for j in 0..200 {
                let x = 40.0 * j as f64 / 199.0;
                let g = green_regular(&pr, 25.0, x, 0.0, &cfg).unwrap();
                sup = sup.max((g - stationary_density(&pr, x)).abs());
            }
            assert!(sup <= 1e-9, "sup distance {sup} at alpha = {n}");
        }
    }

    #[test]
    fn outer_terms_decay_monotonically_past_alpha() {
        // |C(α,i) q^i| decreases strictly once i > α (ratio |α-i| |q|/(i+1) < 1)
        for &(alpha, t) in &[(0.5_f64, 1.0_f64), (3.7, 0.5), (1.5, 3.0)] {
            let q = (-t).exp_m1();
            let mut prev = f64::INFINITY;
            let mut c = 1.0;
            for i in 1..60u32 {
                c *= (alpha - (i - 1) as f64) / i as f64 * q;
                if i as f64 > alpha + 1.0 {
                    assert!(c.abs() < prev, "term grew at i={i}, alpha={alpha}");
                }
                prev = c.abs();
            }
        }
    }

    #[test]
    fn positivity_up_to_truncation() {
        let cfg = SeriesConfig::deep();
        for &alpha in &[0.5, 1.3, 2.0, 3.7] {
            let pr = p(1.0, alpha, 0.7);
            for &t in &[0.2, 1.0, 3.0] {
                for j in 0..60 {
                    let xb = 25.0 * j as f64 / 59.0;
                    let g = series_profile(&pr, t, xb, &cfg).unwrap();
                    assert!(
                        g >= -10.0 * cfg.rel_tol,
                        "negative density {g} at alpha={alpha}, t={t}, xb={xb}"
                    );
                }
            }
        }
    }
}
