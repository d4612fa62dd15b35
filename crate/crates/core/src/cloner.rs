//! Closed-form engine for N→M symmetric Gaussian cloners.
//!
//! The optimal cloner adds isotropic displacement noise of variance
//! `(M − N)/(MN)` to each quadrature, giving the fidelity `MN/(MN + M − N)`
//! on every coherent state. Both are computed in exact rational arithmetic
//! whenever the copy counts are known, and converted to `f64` at the edge.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{add_noise, CenterState, GaussianMixtureState, NoiseCovariance};

/// Exact rational number used by the closed-form layer.
pub type Rational = Ratio<i128>;

/// Relative tolerance used to decide whether a noise covariance matches a squeezing frame.
const FRAME_MATCH_RTOL: f64 = 1e-12;

/// Number of clones produced by a cloner. `Unbounded` is the M→∞ measurement limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CopyCount {
    Finite(u32),
    Unbounded,
}

impl CopyCount {
    pub fn finite(self) -> Option<u32> {
        match self {
            CopyCount::Finite(m) => Some(m),
            CopyCount::Unbounded => None,
        }
    }

    fn at_least(self, n: u32) -> bool {
        match self {
            CopyCount::Finite(m) => m >= n,
            CopyCount::Unbounded => true,
        }
    }
}

impl From<u32> for CopyCount {
    fn from(m: u32) -> Self {
        CopyCount::Finite(m)
    }
}

impl fmt::Display for CopyCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopyCount::Finite(m) => write!(f, "{m}"),
            CopyCount::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for CopyCount {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(CopyCount::Unbounded);
        }
        s.parse::<u32>()
            .map(CopyCount::Finite)
            .map_err(|_| format!("expected a positive integer or \"inf\", got {s:?}"))
    }
}

/// A cloning fidelity in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Fidelity(f64);

impl Fidelity {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::Domain(format!(
                "fidelity must lie in [0, 1], got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Fidelity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Exact form of a cloner's noise: an isotropic variance in the frame of
/// squeezing `squeezing`, i.e. `var_x = variance·e^{2r}`, `var_p = variance·e^{−2r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactNoise {
    pub variance: Rational,
    pub squeezing: f64,
}

/// An N→M symmetric Gaussian cloner, described by the displacement noise it
/// adds to every single-clone marginal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClonerSpec {
    pub n_in: u32,
    pub m_out: CopyCount,
    pub noise: NoiseCovariance,
    /// Present for cloners built from the closed forms; kept through cascades.
    pub exact: Option<ExactNoise>,
}

impl ClonerSpec {
    /// A cloner with arbitrary (possibly sub-optimal) noise.
    pub fn new(n_in: u32, m_out: impl Into<CopyCount>, noise: NoiseCovariance) -> Result<Self> {
        let m_out = m_out.into();
        check_counts(n_in, m_out)?;
        Ok(Self {
            n_in,
            m_out,
            noise,
            exact: None,
        })
    }

    /// The optimal cloner for coherent states.
    pub fn opt(n_in: u32, m_out: impl Into<CopyCount>) -> Result<Self> {
        let m_out = m_out.into();
        let variance = optimal_variance_exact(n_in, m_out)?;
        let v = to_f64(variance);
        Ok(Self {
            n_in,
            m_out,
            noise: NoiseCovariance { var_x: v, var_p: v },
            exact: Some(ExactNoise {
                variance,
                squeezing: 0.0,
            }),
        })
    }

    /// The N→N identity map.
    pub fn identity(n: u32) -> Result<Self> {
        Self::opt(n, n)
    }

    /// Whether the (isotropic) noise is at or above the optimal bound.
    pub fn respects_bound(&self) -> Result<bool> {
        let bound = to_f64(optimal_variance_exact(self.n_in, self.m_out)?);
        let r = self.exact.map_or(0.0, |e| e.squeezing);
        let (vx, vp) = unsqueeze_noise(self.noise, r);
        Ok(vx.min(vp) >= bound * (1.0 - FRAME_MATCH_RTOL))
    }

    /// `var_x · var_p` in exact arithmetic, when the noise has an exact form.
    pub fn noise_product_exact(&self) -> Option<Rational> {
        self.exact.map(|e| e.variance * e.variance)
    }
}

impl fmt::Display for ClonerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}->{} (var_x={}, var_p={})",
            self.n_in, self.m_out, self.noise.var_x, self.noise.var_p
        )
    }
}

fn check_counts(n: u32, m: CopyCount) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("input count must be positive".into()));
    }
    if !m.at_least(n) {
        return Err(Error::InvalidCloner {
            n,
            m: m.to_string(),
        });
    }
    Ok(())
}

pub fn to_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `(M − N)/(MN)`, or `1/N` in the measurement limit.
pub fn optimal_variance_exact(n: u32, m: CopyCount) -> Result<Rational> {
    check_counts(n, m)?;
    let n = i128::from(n);
    Ok(match m {
        CopyCount::Finite(m) => {
            let m = i128::from(m);
            Rational::new(m - n, m * n)
        }
        CopyCount::Unbounded => Rational::new(1, n),
    })
}

/// `MN/(MN + M − N)`, or `N/(N + 1)` in the measurement limit.
pub fn optimal_fidelity_exact(n: u32, m: CopyCount) -> Result<Rational> {
    check_counts(n, m)?;
    let n = i128::from(n);
    Ok(match m {
        CopyCount::Finite(m) => {
            let m = i128::from(m);
            Rational::new(m * n, m * n + m - n)
        }
        CopyCount::Unbounded => Rational::new(n, n + 1),
    })
}

/// `1/(1 + σ²)`.
pub fn fidelity_from_variance_exact(variance: Rational) -> Result<Rational> {
    if variance < Rational::zero() {
        return Err(Error::Domain("variance must be non-negative".into()));
    }
    Ok(Rational::from_integer(1) / (Rational::from_integer(1) + variance))
}

pub fn optimal_noise_variance(n: u32, m: impl Into<CopyCount>) -> Result<NoiseCovariance> {
    let v = to_f64(optimal_variance_exact(n, m.into())?);
    Ok(NoiseCovariance { var_x: v, var_p: v })
}

pub fn optimal_fidelity(n: u32, m: impl Into<CopyCount>) -> Result<Fidelity> {
    Fidelity::new(to_f64(optimal_fidelity_exact(n, m.into())?))
}

/// Fidelity of a coherent state against itself smeared by isotropic noise.
pub fn fidelity_from_variance(noise: NoiseCovariance) -> Result<Fidelity> {
    if !noise.is_isotropic() {
        return Err(Error::Contract(format!(
            "fidelity_from_variance needs isotropic noise, got ({}, {}); use the squeezed path",
            noise.var_x, noise.var_p
        )));
    }
    Fidelity::new(1.0 / (1.0 + noise.var_x))
}

/// Chains an N→M cloner with an M→L cloner. The displacement noises convolve.
pub fn cascade(c1: &ClonerSpec, c2: &ClonerSpec) -> Result<ClonerSpec> {
    let composition_error = || Error::Composition {
        first: c1.to_string(),
        second: c2.to_string(),
        produced: c1.m_out.to_string(),
        expected: c2.n_in,
    };
    match c1.m_out {
        CopyCount::Finite(m) if m == c2.n_in => {}
        _ => return Err(composition_error()),
    }
    let exact = match (c1.exact, c2.exact) {
        (Some(a), Some(b)) if a.squeezing == b.squeezing => Some(ExactNoise {
            variance: a.variance + b.variance,
            squeezing: a.squeezing,
        }),
        _ => None,
    };
    Ok(ClonerSpec {
        n_in: c1.n_in,
        m_out: c2.m_out,
        noise: add_noise(c1.noise, c2.noise),
        exact,
    })
}

/// Optimal cloner for the family of squeezed states with parameter `r`:
/// the isotropic optimal noise, stretched by `e^{±2r}` along `x`/`p`.
pub fn squeezed_variant(n: u32, m: impl Into<CopyCount>, r: f64) -> Result<ClonerSpec> {
    if !r.is_finite() {
        return Err(Error::Domain(format!("squeezing must be finite, got {r}")));
    }
    let m = m.into();
    let variance = optimal_variance_exact(n, m)?;
    let v = to_f64(variance);
    let s = (2.0 * r).exp();
    Ok(ClonerSpec {
        n_in: n,
        m_out: m,
        noise: NoiseCovariance {
            var_x: v * s,
            var_p: v / s,
        },
        exact: Some(ExactNoise {
            variance,
            squeezing: r,
        }),
    })
}

/// Noise expressed in the frame where a squeezed state of parameter `r` looks coherent.
fn unsqueeze_noise(noise: NoiseCovariance, r: f64) -> (f64, f64) {
    let s = (2.0 * r).exp();
    (noise.var_x / s, noise.var_p * s)
}

fn matched_variance(noise: NoiseCovariance, r: f64) -> Option<f64> {
    let (vx, vp) = unsqueeze_noise(noise, r);
    let scale = vx.abs().max(vp.abs());
    if (vx - vp).abs() <= FRAME_MATCH_RTOL * scale {
        Some(0.5 * (vx + vp))
    } else {
        None
    }
}

/// The state of any one of the M clones: the input smeared by the cloner noise.
pub fn clone_reduced_output(
    cloner: &ClonerSpec,
    input: impl Into<CenterState>,
) -> Result<GaussianMixtureState> {
    let center = input.into();
    let r = center.squeezing();
    if matched_variance(cloner.noise, r).is_none() {
        return Err(Error::Contract(format!(
            "cloner noise ({}, {}) is not matched to an input with squeezing {r}",
            cloner.noise.var_x, cloner.noise.var_p
        )));
    }
    Ok(GaussianMixtureState::new(center, cloner.noise))
}

/// `⟨ψ|ρ₁|ψ⟩` for a mixture whose noise is matched to its center, in closed form.
pub fn mixture_fidelity(mix: &GaussianMixtureState) -> Result<Fidelity> {
    let r = mix.center.squeezing();
    let v = matched_variance(mix.noise, r).ok_or_else(|| {
        Error::Contract(format!(
            "mixture noise ({}, {}) is not matched to a center with squeezing {r}",
            mix.noise.var_x, mix.noise.var_p
        ))
    })?;
    Fidelity::new(1.0 / (1.0 + v))
}
