//! Initial densities φ for the Cauchy problem.
//!
//! Every variant is a probability density on the half-axis: construction
//! either normalizes the amplitude in closed form (gamma- and gaussian-type
//! shapes) or verifies ∫φ = 1 to 1e-8 and nonnegativity (piecewise data,
//! tables). A Dirac start is carried as an explicit atom, never gridded.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::ln_gamma;

const MASS_TOL: f64 = 1e-8;

/// One polynomial piece c₀ + c₁ x + ... on [lo, hi).
#[derive(Debug, Clone, Serialize)]
pub struct PolyPiece {
    lo: f64,
    hi: f64,
    coeffs: Vec<f64>,
}

impl PolyPiece {
    fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn derivative(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (j, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * x + j as f64 * c;
        }
        acc
    }

    /// ∫_{lo}^{x} of the piece.
    fn mass_to(&self, x: f64) -> f64 {
        let prim = |z: f64| {
            let mut acc = 0.0;
            for (j, &c) in self.coeffs.iter().enumerate().rev() {
                acc = acc * z + c / (j as f64 + 1.0);
            }
            acc * z
        };
        prim(x) - prim(self.lo)
    }

    fn moment(&self) -> f64 {
        // ∫ x p(x) dx over the piece
        let prim = |z: f64| {
            let mut acc = 0.0;
            for (j, &c) in self.coeffs.iter().enumerate().rev() {
                acc = acc * z + c / (j as f64 + 2.0);
            }
            acc * z * z
        };
        prim(self.hi) - prim(self.lo)
    }
}

/// Initial probability density for the Cauchy problem.
#[derive(Debug, Clone, Serialize)]
pub enum InitialDensity {
    /// Point mass at `location` (≥ 0).
    Dirac { location: f64 },
    /// A x^a e^{-b x} with A fixed by normalization: Gamma(a+1, b).
    GammaLike { amp: f64, power: f64, rate: f64 },
    /// A x^a e^{-b x²} with A fixed by normalization.
    GaussLike { amp: f64, power: f64, rate: f64 },
    /// Piecewise polynomial on consecutive intervals, zero outside.
    PiecewisePoly { pieces: Vec<PolyPiece> },
    /// Tabulated values with linear interpolation, zero beyond the table.
    Tabulated { xs: Vec<f64>, ys: Vec<f64> },
}

use InitialDensity::*;

impl InitialDensity {
    pub fn dirac(location: f64) -> Result<Self> {
        if !(location >= 0.0) || !location.is_finite() {
            return Err(Error::InvalidParams(format!(
                "dirac location must be finite and >= 0, got {location}"
            )));
        }
        Ok(Dirac { location })
    }

    /// x^a e^{-bx} shape; the amplitude A = b^{a+1}/Γ(a+1) is derived.
    pub fn gamma_like(power: f64, rate: f64) -> Result<Self> {
        if !(power >= 0.0 && power.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "gamma-like power must be >= 0, got {power}"
            )));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "gamma-like rate must be > 0, got {rate}"
            )));
        }
        let amp = ((power + 1.0) * rate.ln() - ln_gamma(power + 1.0)).exp();
        Ok(GammaLike { amp, power, rate })
    }

    /// x^a e^{-bx²} shape; A = 2 b^{(a+1)/2}/Γ((a+1)/2) is derived.
    pub fn gauss_like(power: f64, rate: f64) -> Result<Self> {
        if !(power >= 0.0 && power.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "gauss-like power must be >= 0, got {power}"
            )));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "gauss-like rate must be > 0, got {rate}"
            )));
        }
        let half = 0.5 * (power + 1.0);
        let amp = (2.0f64.ln() + half * rate.ln() - ln_gamma(half)).exp();
        Ok(GaussLike { amp, power, rate })
    }

    /// Polynomial pieces over `breakpoints[i] .. breakpoints[i+1]`;
    /// `coeffs[i]` holds the piece's coefficients in ascending degree.
    pub fn piecewise_poly(breakpoints: Vec<f64>, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if breakpoints.len() < 2 || coeffs.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidParams(
                "piecewise density needs n+1 breakpoints for n pieces".into(),
            ));
        }
        if breakpoints[0] < 0.0 {
            return Err(Error::InvalidParams("support must lie in x >= 0".into()));
        }
        for w in breakpoints.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParams(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
        }
        let pieces: Vec<PolyPiece> = breakpoints
            .windows(2)
            .zip(coeffs)
            .map(|(w, c)| PolyPiece {
                lo: w[0],
                hi: w[1],
                coeffs: c,
            })
            .collect();

        let mut mass = 0.0;
        for piece in &pieces {
            // nonnegativity: endpoints plus a sampling sweep of the piece
            for j in 0..=64 {
                let x = piece.lo + (piece.hi - piece.lo) * j as f64 / 64.0;
                if piece.eval(x) < -1e-12 {
                    return Err(Error::InvalidParams(format!(
                        "piecewise density negative at x = {x}"
                    )));
                }
            }
            mass += piece.mass_to(piece.hi);
        }
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidParams(format!(
                "piecewise density mass {mass} is not 1 within {MASS_TOL}"
            )));
        }
        Ok(PiecewisePoly { pieces })
    }

    /// Uniform density on [lo, hi] as a single constant piece.
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidParams("uniform needs hi > lo".into()));
        }
        Self::piecewise_poly(vec![lo, hi], vec![vec![1.0 / (hi - lo)]])
    }

    /// Piecewise-constant steps: `values[i]` on `breakpoints[i] .. breakpoints[i+1]`.
    pub fn steps(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let coeffs = values.into_iter().map(|v| vec![v]).collect();
        Self::piecewise_poly(breakpoints, coeffs)
    }

    /// Sampled density with linear interpolation between nodes.
    pub fn tabulated(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::InvalidParams(
                "table needs matching xs/ys with at least two nodes".into(),
            ));
        }
        if xs[0] < 0.0 {
            return Err(Error::InvalidParams("support must lie in x >= 0".into()));
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParams("table xs must be strictly increasing".into()));
            }
        }
        if ys.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParams("table values must be finite and >= 0".into()));
        }
        let mut mass = 0.0;
        for i in 0..xs.len() - 1 {
            mass += 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]);
        }
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidParams(format!(
                "tabulated density mass {mass} is not 1 within {MASS_TOL}"
            )));
        }
        Ok(Tabulated { xs, ys })
    }

    /// Explicit atom carried by the initial data, if any.
    pub fn atom(&self) -> Option<(f64, f64)> {
        match self {
            Dirac { location } => Some((*location, 1.0)),
            _ => None,
        }
    }

    /// Density of the absolutely continuous part. Zero everywhere for a
    /// Dirac start (its mass lives in [`InitialDensity::atom`]).
    pub fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match self {
            Dirac { .. } => 0.0,
            GammaLike { .. } | GaussLike { .. } => {
                let l = self.log_density(x);
                if l == f64::NEG_INFINITY {
                    0.0
                } else {
                    l.exp()
                }
            }
            PiecewisePoly { pieces } => {
                for p in pieces {
                    // half-open pieces; the last one includes its right edge
                    if x >= p.lo && (x < p.hi || (x == p.hi && std::ptr::eq(p, pieces.last().unwrap())))
                    {
                        return p.eval(x);
                    }
                }
                0.0
            }
            Tabulated { xs, ys } => {
                if x < xs[0] || x > *xs.last().unwrap() {
                    return 0.0;
                }
                let i = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
                    Ok(i) => return ys[i],
                    Err(i) => i - 1,
                };
                let w = (x - xs[i]) / (xs[i + 1] - xs[i]);
                ys[i] * (1.0 - w) + ys[i + 1] * w
            }
        }
    }

    /// ln φ(x); −∞ where φ vanishes. Exact even where x is far beyond the
    /// overflow scale of e^{βt}-stretched arguments, which is why the
    /// transported term of the solver evaluates φ through this.
    pub fn log_density(&self, x: f64) -> f64 {
        if x < 0.0 || x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        match self {
            GammaLike { amp, power, rate } => {
                if x == 0.0 {
                    return if *power == 0.0 { amp.ln() } else { f64::NEG_INFINITY };
                }
                amp.ln() + power * x.ln() - rate * x
            }
            GaussLike { amp, power, rate } => {
                if x == 0.0 {
                    return if *power == 0.0 { amp.ln() } else { f64::NEG_INFINITY };
                }
                amp.ln() + power * x.ln() - rate * x * x
            }
            _ => {
                let v = self.density(x);
                if v > 0.0 {
                    v.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// First moment ∫ x φ dx (the atom counts its location).
    pub fn mean(&self) -> f64 {
        match self {
            Dirac { location } => *location,
            GammaLike { power, rate, .. } => (power + 1.0) / rate,
            GaussLike { power, rate, .. } => {
                // Γ((a+2)/2)/Γ((a+1)/2)/sqrt(b)
                (ln_gamma((power + 2.0) / 2.0) - ln_gamma((power + 1.0) / 2.0)).exp()
                    / rate.sqrt()
            }
            PiecewisePoly { pieces } => pieces.iter().map(|p| p.moment()).sum(),
            Tabulated { xs, ys } => {
                let mut m = 0.0;
                for i in 0..xs.len() - 1 {
                    // exact moment of the linear interpolant on the cell
                    let (x0, x1, y0, y1) = (xs[i], xs[i + 1], ys[i], ys[i + 1]);
                    let h = x1 - x0;
                    m += h * (y0 * (2.0 * x0 + x1) + y1 * (x0 + 2.0 * x1)) / 6.0;
                }
                m
            }
        }
    }

    /// Whether φ ∈ C¹ on the closed half-axis, the regularity under which
    /// the solved density is classically smooth.
    pub fn is_c1(&self) -> bool {
        match self {
            Dirac { .. } => false,
            GammaLike { power, .. } | GaussLike { power, .. } => {
                *power == 0.0 || *power >= 1.0
            }
            PiecewisePoly { pieces } => {
                for w in pieces.windows(2) {
                    let x = w[0].hi;
                    if (w[0].eval(x) - w[1].eval(x)).abs() > 1e-12
                        || (w[0].derivative(x) - w[1].derivative(x)).abs() > 1e-12
                    {
                        return false;
                    }
                }
                // closure of the support: the density must meet zero smoothly
                let first = &pieces[0];
                let last = pieces.last().unwrap();
                (first.lo > 0.0 && first.eval(first.lo).abs() < 1e-12 || first.lo == 0.0)
                    && last.eval(last.hi).abs() < 1e-12
                    && last.derivative(last.hi).abs() < 1e-12
            }
            Tabulated { .. } => false,
        }
    }

    /// Locations where φ itself jumps, with the jump size φ(x⁺) − φ(x⁻).
    /// These propagate along characteristics and are reported on solutions.
    pub fn jump_points(&self) -> Vec<(f64, f64)> {
        match self {
            PiecewisePoly { pieces } => {
                let mut out = Vec::new();
                let first = &pieces[0];
                if first.lo > 0.0 && first.eval(first.lo).abs() > 1e-12 {
                    out.push((first.lo, first.eval(first.lo)));
                }
                for w in pieces.windows(2) {
                    let x = w[0].hi;
                    let j = w[1].eval(x) - w[0].eval(x);
                    if j.abs() > 1e-12 {
                        out.push((x, j));
                    }
                }
                let last = pieces.last().unwrap();
                let v = last.eval(last.hi);
                if v.abs() > 1e-12 {
                    out.push((last.hi, -v));
                }
                out
            }
            Tabulated { xs, ys } => {
                // interpolation is continuous inside the table, but the
                // zero extension can jump at either support edge
                let mut out = Vec::new();
                if xs[0] > 0.0 && ys[0].abs() > 1e-12 {
                    out.push((xs[0], ys[0]));
                }
                let v = *ys.last().unwrap();
                if v.abs() > 1e-12 {
                    out.push((*xs.last().unwrap(), -v));
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Interior breakpoints that quadratures should honor.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            PiecewisePoly { pieces } => {
                let mut b: Vec<f64> = pieces.iter().map(|p| p.lo).collect();
                b.push(pieces.last().unwrap().hi);
                b
            }
            Tabulated { xs, .. } => xs.clone(),
            _ => Vec::new(),
        }
    }

    /// Characteristic length of the density (used to seed quadrature
    /// ladders) and the end of compact support when there is one.
    pub fn support_hint(&self) -> (f64, Option<f64>) {
        match self {
            Dirac { location } => (location.max(1e-3), Some(*location)),
            GammaLike { power, rate, .. } => ((power + 1.0) / rate, None),
            GaussLike { power, rate, .. } => (((power + 1.0) / (2.0 * rate)).sqrt(), None),
            PiecewisePoly { pieces } => {
                let hi = pieces.last().unwrap().hi;
                (hi, Some(hi))
            }
            Tabulated { xs, .. } => {
                let hi = *xs.last().unwrap();
                (hi, Some(hi))
            }
        }
    }

    /// Draws one start point. Exact per variant: gamma and square-root-gamma
    /// transforms for the smooth shapes, segment-mass inversion for
    /// piecewise data.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Dirac { location } => *location,
            GammaLike { power, rate, .. } => {
                let g = Gamma::new(power + 1.0, 1.0 / rate).expect("validated at construction");
                g.sample(rng)
            }
            GaussLike { power, rate, .. } => {
                // x² ~ Gamma((a+1)/2, rate) when x ~ A x^a e^{-b x²}
                let g = Gamma::new(0.5 * (power + 1.0), 1.0 / rate)
                    .expect("validated at construction");
                g.sample(rng).sqrt()
            }
            PiecewisePoly { pieces } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for p in pieces {
                    let m = p.mass_to(p.hi);
                    if u <= acc + m || std::ptr::eq(p, pieces.last().unwrap()) {
                        let target = (u - acc).clamp(0.0, m);
                        return invert_monotone(|x| p.mass_to(x), p.lo, p.hi, target);
                    }
                    acc += m;
                }
                unreachable!("piece masses sum to 1");
            }
            Tabulated { xs, ys } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for i in 0..xs.len() - 1 {
                    let h = xs[i + 1] - xs[i];
                    let m = 0.5 * (ys[i] + ys[i + 1]) * h;
                    if u <= acc + m || i == xs.len() - 2 {
                        let target = (u - acc).clamp(0.0, m);
                        // linear density on the cell: quadratic CDF, solved directly
                        let (y0, y1) = (ys[i], ys[i + 1]);
                        let slope = (y1 - y0) / h;
                        let f = |z: f64| y0 * z + 0.5 * slope * z * z;
                        return xs[i] + invert_monotone(f, 0.0, h, target) ;
                    }
                    acc += m;
                }
                unreachable!("table masses sum to 1");
            }
        }
    }
}

/// Bisection for F(x) = target with F nondecreasing on [lo, hi].
fn invert_monotone<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, target: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        if f(mid) < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadConfig};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gamma_like_is_normalized() {
        for &(a, b) in &[(0.0, 1.0), (1.0, 1.0), (2.5, 0.4)] {
            let phi = InitialDensity::gamma_like(a, b).unwrap();
            let m = integrate(
                |x| phi.density(x),
                0.0,
                (a + 50.0) / b,
                &[1.0 / b],
                &QuadConfig::default(),
            )
            .unwrap();
            assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-8);
        }
        // x e^{-x} is already normalized: amplitude 1
        match InitialDensity::gamma_like(1.0, 1.0).unwrap() {
            GammaLike { amp, .. } => assert_relative_eq!(amp, 1.0, max_relative = 1e-12),
            _ => unreachable!(),
        }
    }

    #[test]
    fn gauss_like_is_normalized() {
        for &(a, b) in &[(0.0, 1.0), (1.0, 0.5), (3.0, 2.0)] {
            let phi = InitialDensity::gauss_like(a, b).unwrap();
            let m = integrate(
                |x| phi.density(x),
                0.0,
                ((a + 40.0) / b).sqrt() + 5.0,
                &[(1.0 / b).sqrt()],
                &QuadConfig::default(),
            )
            .unwrap();
            assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn means_match_quadrature() {
        let cases: Vec<InitialDensity> = vec![
            InitialDensity::gamma_like(1.0, 1.0).unwrap(),
            InitialDensity::gauss_like(2.0, 0.7).unwrap(),
            InitialDensity::uniform(0.5, 2.5).unwrap(),
            InitialDensity::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap(),
        ];
        for phi in cases {
            let m = integrate(
                |x| x * phi.density(x),
                0.0,
                80.0,
                &phi.breakpoints(),
                &QuadConfig::default(),
            )
            .unwrap();
            assert_abs_diff_eq!(phi.mean(), m.value, epsilon = 1e-7);
        }
        assert_eq!(InitialDensity::dirac(2.0).unwrap().mean(), 2.0);
    }

    #[test]
    fn rejects_bad_data() {
        assert!(InitialDensity::dirac(-1.0).is_err());
        assert!(InitialDensity::gamma_like(-0.5, 1.0).is_err());
        assert!(InitialDensity::gamma_like(1.0, 0.0).is_err());
        // mass != 1
        assert!(InitialDensity::steps(vec![0.0, 1.0], vec![0.5]).is_err());
        // negative values
        assert!(InitialDensity::piecewise_poly(vec![0.0, 2.0], vec![vec![1.0, -1.0]]).is_err());
        assert!(InitialDensity::tabulated(vec![0.0, 1.0], vec![2.0, -0.1]).is_err());
        // unsorted table
        assert!(InitialDensity::tabulated(vec![1.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn smoothness_flag() {
        assert!(InitialDensity::gamma_like(1.0, 1.0).unwrap().is_c1());
        assert!(!InitialDensity::gamma_like(0.5, 1.0).unwrap().is_c1());
        assert!(!InitialDensity::uniform(0.0, 2.0).unwrap().is_c1());
        assert!(!InitialDensity::dirac(1.0).unwrap().is_c1());
    }

    #[test]
    fn jumps_of_step_data() {
        let phi = InitialDensity::uniform(0.0, 2.0).unwrap();
        let jumps = phi.jump_points();
        assert_eq!(jumps.len(), 1);
        assert_eq!(jumps[0].0, 2.0);
        assert_relative_eq!(jumps[0].1, -0.5);
    }

    #[test]
    fn jumps_at_table_edges() {
        // trapezoid profile: nonzero at both support edges
        let phi =
            InitialDensity::tabulated(vec![1.0, 2.0, 3.0], vec![0.5, 0.5, 0.5]).unwrap();
        let jumps = phi.jump_points();
        assert_eq!(jumps.len(), 2);
        assert_eq!((jumps[0].0, jumps[0].1), (1.0, 0.5));
        assert_eq!((jumps[1].0, jumps[1].1), (3.0, -0.5));
        // a table that tapers to zero has no jumps
        let smooth =
            InitialDensity::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!(smooth.jump_points().is_empty());
    }

    #[test]
    fn log_density_handles_overflowed_arguments() {
        let phi = InitialDensity::gamma_like(1.0, 1.0).unwrap();
        assert_eq!(phi.log_density(f64::INFINITY), f64::NEG_INFINITY);
        assert_eq!(phi.log_density(1e300), -1e300 + 1e300f64.ln());
    }

    #[test]
    fn sampling_matches_mean_and_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cases: Vec<InitialDensity> = vec![
            InitialDensity::gamma_like(1.0, 1.0).unwrap(),
            InitialDensity::gauss_like(1.0, 1.0).unwrap(),
            InitialDensity::uniform(1.0, 3.0).unwrap(),
            InitialDensity::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap(),
        ];
        for phi in cases {
            let n = 40_000;
            let mut acc = 0.0;
            for _ in 0..n {
                let x = phi.sample(&mut rng);
                assert!(x >= 0.0);
                acc += x;
            }
            let mean = acc / n as f64;
            // 5 sigma on the sample mean, generous second-moment bound
            assert_abs_diff_eq!(mean, phi.mean(), epsilon = 0.05 * (1.0 + phi.mean()));
        }
    }
}
