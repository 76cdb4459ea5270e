use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used to decide whether α = λ/β is an integer, which routes
/// Green's-function evaluation to the exact finite-sum path.
pub const INTEGER_ALPHA_TOL: f64 = 1e-12;

/// The three rate constants of the jump-decay model.
///
/// `beta` is the degradation (decay) rate, `lambda` the burst frequency and
/// `k` the inverse mean burst size. The dimensionless ratio α = λ/β together
/// with `k` fixes every distribution produced by the model; in particular the
/// long-time density is Gamma(α, k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    beta: f64,
    lambda: f64,
    k: f64,
}

impl ModelParams {
    /// Builds a parameter set, rejecting non-positive or non-finite rates.
    pub fn new(beta: f64, lambda: f64, k: f64) -> Result<Self> {
        for (name, v) in [("beta", beta), ("lambda", lambda), ("k", k)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { beta, lambda, k })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Burst-frequency ratio α = λ/β (shape parameter of the stationary
    /// gamma density).
    pub fn alpha(&self) -> f64 {
        self.lambda / self.beta
    }

    /// `Some(n)` when α is an integer n ≥ 1 within [`INTEGER_ALPHA_TOL`].
    pub fn integer_alpha(&self) -> Option<u32> {
        let a = self.alpha();
        let n = a.round();
        if n >= 1.0 && (a - n).abs() <= INTEGER_ALPHA_TOL && n <= u32::MAX as f64 {
            Some(n as u32)
        } else {
            None
        }
    }

    /// Contraction factor e^{-βt} of the deterministic decay over time t.
    pub fn decay_factor(&self, t: f64) -> f64 {
        (-self.beta * t).exp()
    }
}

/// Truncation control for the regular-part series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    /// Relative tolerance: summation stops once the outer-term bound drops
    /// below `rel_tol` times the running sum magnitude.
    pub rel_tol: f64,
    /// Hard cap on the number of outer terms.
    pub max_terms: usize,
    /// Kahan-compensated accumulation of the outer sum.
    pub compensated_summation: bool,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 512,
            compensated_summation: true,
        }
    }
}

impl SeriesConfig {
    pub fn new(rel_tol: f64, max_terms: usize, compensated_summation: bool) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidParams(format!(
                "rel_tol must lie in (0, 1), got {rel_tol}"
            )));
        }
        if max_terms == 0 {
            return Err(Error::InvalidParams("max_terms must be >= 1".into()));
        }
        Ok(Self {
            rel_tol,
            max_terms,
            compensated_summation,
        })
    }

    /// Configuration with a term budget large enough for βt up to ~10 at
    /// non-integer α, where the outer ratio |e^{-βt}-1| approaches one and
    /// thousands of terms are needed. Integer α never needs it: the sum is
    /// finite.
    pub fn deep() -> Self {
        Self {
            max_terms: 100_000,
            ..Self::default()
        }
    }
}
