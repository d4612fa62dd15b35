//! Measurement-theoretic bounds on cloning noise.
//!
//! A joint measurement of `x` and `p` on one copy carries variance at least 1
//! per quadrature (variance product ≥ 1); with `N` copies the best achievable
//! isotropic variance is `1/N`. Cloning before measuring cannot beat measuring
//! directly, so an N→M cloner must add at least `1/N − 1/M` of noise.
//!
//! [`sampling`] checks the same chain with seeded Monte Carlo simulations of
//! the measured outcomes.

pub mod sampling;

use serde::{Deserialize, Serialize};

pub use sampling::{simulate_heterodyne_estimate, simulate_joint_measurement, VarianceReport};

use crate::cloner::{CopyCount, Rational};
use crate::error::{Error, Result};
use crate::quadrature::VACUUM_VARIANCE;

/// Default number of points in the `g_x/g_p` sweep.
pub const WEIGHT_GRID_POINTS: usize = 61;
/// The sweep covers `10^−DECADES ..= 10^DECADES`.
pub const WEIGHT_GRID_DECADES: f64 = 3.0;

/// Positive weights `(g_x, g_p)` of the weighted-variance measurement bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementWeights {
    pub g_x: f64,
    pub g_p: f64,
}

impl MeasurementWeights {
    pub fn new(g_x: f64, g_p: f64) -> Result<Self> {
        if !(g_x > 0.0 && g_p > 0.0 && g_x.is_finite() && g_p.is_finite()) {
            return Err(Error::Domain(format!(
                "measurement weights must be positive and finite, got ({g_x}, {g_p})"
            )));
        }
        Ok(Self { g_x, g_p })
    }

    pub fn ratio(&self) -> f64 {
        self.g_x / self.g_p
    }
}

/// `var_x · var_p − 1`; non-negative when the joint-measurement bound holds.
pub fn arthurs_kelly_margin(var_x: f64, var_p: f64) -> Result<f64> {
    check_variance("var_x", var_x)?;
    check_variance("var_p", var_p)?;
    Ok(var_x * var_p - 1.0)
}

/// Right-hand side of the weighted-variance bound for one copy:
/// `g_x δx² + g_p δp² + √(g_x g_p)`.
pub fn holevo_rhs(w: MeasurementWeights, dx2: f64, dp2: f64) -> Result<f64> {
    // re-validate in case the struct was built by hand
    let w = MeasurementWeights::new(w.g_x, w.g_p)?;
    for (name, v) in [("dx2", dx2), ("dp2", dp2)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(w.g_x * dx2 + w.g_p * dp2 + (w.g_x * w.g_p).sqrt())
}

/// The same bound when `n_copies` identical systems are measured.
pub fn holevo_rhs_copies(w: MeasurementWeights, dx2: f64, dp2: f64, n_copies: u32) -> Result<f64> {
    if n_copies == 0 {
        return Err(Error::Domain("number of copies must be positive".into()));
    }
    Ok(holevo_rhs(w, dx2, dp2)? / f64::from(n_copies))
}

/// Left-hand side `g_x σx² + g_p σp²` for measured variances.
pub fn holevo_lhs(w: MeasurementWeights, var_x: f64, var_p: f64) -> f64 {
    w.g_x * var_x + w.g_p * var_p
}

/// Lower bound on a common variance `σx² = σp² = s` implied by the weighted
/// bound on a coherent state: `rhs / (g_x + g_p)`. Peaks at 1 when `g_x = g_p`.
pub fn symmetric_variance_bound(w: MeasurementWeights) -> Result<f64> {
    Ok(holevo_rhs(w, VACUUM_VARIANCE, VACUUM_VARIANCE)? / (w.g_x + w.g_p))
}

/// Log-spaced `g_x/g_p` ratios with `g_p = 1`. The middle point of an odd grid is exactly 1.
pub fn weight_grid(points: usize, decades: f64) -> Result<Vec<MeasurementWeights>> {
    if points < 2 || !(decades.is_finite() && decades > 0.0) {
        return Err(Error::Domain(format!(
            "weight grid needs >= 2 points over a positive range, got {points} over {decades}"
        )));
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            let exponent = -decades + 2.0 * decades * i as f64 / last;
            MeasurementWeights::new(10f64.powf(exponent), 1.0)
        })
        .collect()
}

pub fn default_weight_grid() -> Vec<MeasurementWeights> {
    weight_grid(WEIGHT_GRID_POINTS, WEIGHT_GRID_DECADES).expect("default grid is valid")
}

/// Minimal isotropic variance of a joint `x`,`p` estimate from `n_copies` copies: `1/N`.
pub fn optimal_measurement_variance_exact(n_copies: u32) -> Result<Rational> {
    if n_copies == 0 {
        return Err(Error::Domain("number of copies must be positive".into()));
    }
    Ok(Rational::new(1, i128::from(n_copies)))
}

pub fn optimal_measurement_variance(n_copies: u32) -> Result<f64> {
    Ok(crate::cloner::to_f64(optimal_measurement_variance_exact(
        n_copies,
    )?))
}

/// Noise an N→M cloner must add so that cloning then measuring does not beat
/// measuring the N originals: `1/N − 1/M` (zero contribution from `M = ∞`).
pub fn cloning_lower_bound_exact(n: u32, m: CopyCount) -> Result<Rational> {
    let direct = optimal_measurement_variance_exact(n)?;
    let after_cloning = match m {
        CopyCount::Finite(m) if m < n => {
            return Err(Error::Domain(format!("cannot clone {n} copies into {m}")))
        }
        CopyCount::Finite(m) => optimal_measurement_variance_exact(m)?,
        CopyCount::Unbounded => Rational::new(0, 1),
    };
    Ok(direct - after_cloning)
}

pub fn cloning_lower_bound(n: u32, m: impl Into<CopyCount>) -> Result<f64> {
    Ok(crate::cloner::to_f64(cloning_lower_bound_exact(
        n,
        m.into(),
    )?))
}

/// `(δx² + σ²)(δp² + σ²) − 1` for a 1→2 cloner whose two outputs are measured
/// in `x` and `p` respectively. Negative margins certify an impossible cloner.
pub fn chain_bound_1to2(dx2: f64, dp2: f64, noise_var: f64) -> Result<f64> {
    check_variance("dx2", dx2)?;
    check_variance("dp2", dp2)?;
    check_variance("noise_var", noise_var)?;
    if dx2 * dp2 < 0.25 * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "intrinsic variances ({dx2}, {dp2}) violate the uncertainty principle"
        )));
    }
    Ok((dx2 + noise_var) * (dp2 + noise_var) - 1.0)
}

/// One point of a weight sweep evaluated against measured variances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolevoPoint {
    pub weights: MeasurementWeights,
    pub rhs: f64,
    pub lhs: f64,
    /// Standard error of `lhs`, propagated from the variance estimates.
    pub lhs_stderr: f64,
    pub symmetric_bound: f64,
}

impl HolevoPoint {
    /// Whether `lhs ≥ rhs` allowing `sigmas` standard errors of sampling noise.
    pub fn satisfied(&self, sigmas: f64) -> bool {
        self.lhs >= self.rhs - sigmas * self.lhs_stderr
    }
}

/// Evaluates the weighted bound for a coherent state across `grid`, using the
/// variances measured in `report`.
pub fn holevo_sweep(
    grid: &[MeasurementWeights],
    report: &VarianceReport,
) -> Result<Vec<HolevoPoint>> {
    grid.iter()
        .map(|&w| {
            let rhs = holevo_rhs(w, VACUUM_VARIANCE, VACUUM_VARIANCE)?;
            Ok(HolevoPoint {
                weights: w,
                rhs,
                lhs: holevo_lhs(w, report.var_x_hat, report.var_p_hat),
                lhs_stderr: (w.g_x * report.stderr_x).hypot(w.g_p * report.stderr_p),
                symmetric_bound: rhs / (w.g_x + w.g_p),
            })
        })
        .collect()
}

fn check_variance(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be finite and non-negative, got {v}"
        )))
    }
}
