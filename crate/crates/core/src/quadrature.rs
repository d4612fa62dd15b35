//! Phase-space conventions and state descriptors.
//!
//! Units are fixed once for the whole crate:
//!
//! * ħ = 1, `x̂ = (â + â†)/√2`, `p̂ = (â − â†)/(i√2)`;
//! * the vacuum has quadrature variance 1/2 in both `x` and `p`;
//! * a complex amplitude `β = (x + i p)/√2` labels the phase-space point `(x, p)`,
//!   and `D(β)` displaces by `x` in position and `p` in momentum.
//!
//! Everything here is an analytic description. Matrices and samples live in
//! [`crate::fock`] and [`crate::estimation`].

use std::f64::consts::SQRT_2;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadrature variance of the vacuum (and of every coherent state).
pub const VACUUM_VARIANCE: f64 = 0.5;

/// A complex phase-space amplitude `β = (x + i p)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexAmplitude {
    pub re: f64,
    pub im: f64,
}

impl ComplexAmplitude {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// Amplitude of the phase-space point `(x, p)`.
    pub fn from_quadratures(x: f64, p: f64) -> Self {
        Self::new(x / SQRT_2, p / SQRT_2)
    }

    /// Position coordinate, `√2·Re β`.
    pub fn x(self) -> f64 {
        SQRT_2 * self.re
    }

    /// Momentum coordinate, `√2·Im β`.
    pub fn p(self) -> f64 {
        SQRT_2 * self.im
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for ComplexAmplitude {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl From<ComplexAmplitude> for Complex64 {
    fn from(a: ComplexAmplitude) -> Self {
        a.to_complex()
    }
}

impl Add for ComplexAmplitude {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexAmplitude {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for ComplexAmplitude {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl fmt::Display for ComplexAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// The coherent state `|α⟩`. Its intrinsic variances are always 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CoherentState {
    pub alpha: ComplexAmplitude,
}

impl CoherentState {
    pub const VACUUM: Self = Self {
        alpha: ComplexAmplitude::ZERO,
    };

    pub const fn new(alpha: ComplexAmplitude) -> Self {
        Self { alpha }
    }

    pub fn intrinsic_variances(&self) -> (f64, f64) {
        (VACUUM_VARIANCE, VACUUM_VARIANCE)
    }
}

/// A quadrature-squeezed minimum-uncertainty state `D(α) S(r) |0⟩`.
///
/// Positive `r` stretches `x` and squeezes `p`: `δx² = e^{2r}/2`, `δp² = e^{−2r}/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SqueezedState {
    pub alpha: ComplexAmplitude,
    pub r: f64,
}

impl SqueezedState {
    pub const fn new(alpha: ComplexAmplitude, r: f64) -> Self {
        Self { alpha, r }
    }

    pub fn intrinsic_variances(&self) -> (f64, f64) {
        let s = (2.0 * self.r).exp();
        (VACUUM_VARIANCE * s, VACUUM_VARIANCE / s)
    }

    /// The same center without squeezing.
    pub fn unsqueezed(&self) -> CoherentState {
        CoherentState::new(self.alpha)
    }
}

/// The center of a Gaussian mixture: either a coherent or a squeezed state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CenterState {
    Coherent(CoherentState),
    Squeezed(SqueezedState),
}

impl CenterState {
    pub fn alpha(&self) -> ComplexAmplitude {
        match self {
            CenterState::Coherent(c) => c.alpha,
            CenterState::Squeezed(s) => s.alpha,
        }
    }

    /// Squeezing parameter, zero for a coherent center.
    pub fn squeezing(&self) -> f64 {
        match self {
            CenterState::Coherent(_) => 0.0,
            CenterState::Squeezed(s) => s.r,
        }
    }

    pub fn intrinsic_variances(&self) -> (f64, f64) {
        match self {
            CenterState::Coherent(c) => c.intrinsic_variances(),
            CenterState::Squeezed(s) => s.intrinsic_variances(),
        }
    }

    fn with_alpha(self, alpha: ComplexAmplitude) -> Self {
        match self {
            CenterState::Coherent(_) => CenterState::Coherent(CoherentState::new(alpha)),
            CenterState::Squeezed(s) => CenterState::Squeezed(SqueezedState::new(alpha, s.r)),
        }
    }
}

impl From<CoherentState> for CenterState {
    fn from(c: CoherentState) -> Self {
        CenterState::Coherent(c)
    }
}

impl From<SqueezedState> for CenterState {
    fn from(s: SqueezedState) -> Self {
        CenterState::Squeezed(s)
    }
}

/// Diagonal covariance of a Gaussian displacement distribution, in `x`/`p` units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseCovariance {
    pub var_x: f64,
    pub var_p: f64,
}

impl NoiseCovariance {
    pub const ZERO: Self = Self {
        var_x: 0.0,
        var_p: 0.0,
    };

    pub fn new(var_x: f64, var_p: f64) -> Result<Self> {
        for (name, v) in [("var_x", var_x), ("var_p", var_p)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(Self { var_x, var_p })
    }

    pub fn isotropic(var: f64) -> Result<Self> {
        Self::new(var, var)
    }

    pub fn is_isotropic(&self) -> bool {
        self.var_x == self.var_p
    }

    pub fn is_zero(&self) -> bool {
        self.var_x == 0.0 && self.var_p == 0.0
    }

    pub fn max_variance(&self) -> f64 {
        self.var_x.max(self.var_p)
    }
}

/// The single-clone output: a center state smeared by Gaussian-distributed displacements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMixtureState {
    pub center: CenterState,
    pub noise: NoiseCovariance,
}

impl GaussianMixtureState {
    pub fn new(center: impl Into<CenterState>, noise: NoiseCovariance) -> Self {
        Self {
            center: center.into(),
            noise,
        }
    }

    pub fn pure(center: impl Into<CenterState>) -> Self {
        Self::new(center, NoiseCovariance::ZERO)
    }

    pub fn is_pure(&self) -> bool {
        self.noise.is_zero()
    }

    /// Second moments of the mixture: intrinsic plus noise, per quadrature.
    pub fn total_variances(&self) -> (f64, f64) {
        let (dx2, dp2) = self.center.intrinsic_variances();
        (dx2 + self.noise.var_x, dp2 + self.noise.var_p)
    }

    /// Displacing a mixture moves its center; the noise is displacement-invariant.
    pub fn displaced(&self, beta: ComplexAmplitude) -> Self {
        Self {
            center: self.center.with_alpha(self.center.alpha() + beta),
            noise: self.noise,
        }
    }
}

/// `D(β)|α⟩⟨α|D†(β) = |α+β⟩⟨α+β|`; the global phase drops out of the projector.
pub fn displace(state: CoherentState, beta: ComplexAmplitude) -> CoherentState {
    CoherentState::new(state.alpha + beta)
}

/// `|⟨a|b⟩|² = exp(−|a − b|²)` for coherent states.
pub fn overlap_sq(a: ComplexAmplitude, b: ComplexAmplitude) -> f64 {
    (-(a - b).norm_sqr()).exp()
}

/// Convolution of two independent Gaussian displacement distributions.
pub fn add_noise(n1: NoiseCovariance, n2: NoiseCovariance) -> NoiseCovariance {
    NoiseCovariance {
        var_x: n1.var_x + n2.var_x,
        var_p: n1.var_p + n2.var_p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn amp(re: f64, im: f64) -> ComplexAmplitude {
        ComplexAmplitude::new(re, im)
    }

    #[test]
    fn displace_examples() {
        assert_eq!(
            displace(CoherentState::VACUUM, amp(1.0, 0.0)).alpha,
            amp(1.0, 0.0)
        );
        let s = CoherentState::new(amp(2.0, -1.0));
        assert_eq!(displace(s, ComplexAmplitude::ZERO), s);
        assert_eq!(
            displace(CoherentState::new(amp(1.0, 0.0)), amp(0.0, 1.0)).alpha,
            amp(1.0, 1.0)
        );
    }

    #[test]
    fn overlap_examples() {
        let a = amp(0.3, -1.7);
        assert_eq!(overlap_sq(a, a), 1.0);
        assert_abs_diff_eq!(
            overlap_sq(ComplexAmplitude::ZERO, amp(1.0, 0.0)),
            0.367879441171442,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            overlap_sq(ComplexAmplitude::ZERO, amp(1.0, 1.0)),
            0.135335283236613,
            epsilon = 1e-14
        );
    }

    #[test]
    fn noise_examples() {
        let half = NoiseCovariance::isotropic(0.5).unwrap();
        let quarter = NoiseCovariance::isotropic(0.25).unwrap();
        assert_eq!(
            add_noise(half, quarter),
            NoiseCovariance::isotropic(0.75).unwrap()
        );
        assert_eq!(add_noise(NoiseCovariance::ZERO, half), half);
        assert!(NoiseCovariance::new(-0.1, 0.0).is_err());
        assert!(NoiseCovariance::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn quadrature_coordinates() {
        let a = ComplexAmplitude::from_quadratures(1.0, -2.0);
        assert_abs_diff_eq!(a.x(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.p(), -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(amp(1.0, 1.0).x(), SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn squeezed_zero_is_coherent() {
        let s = SqueezedState::new(amp(1.0, 2.0), 0.0);
        assert_eq!(
            s.intrinsic_variances(),
            s.unsqueezed().intrinsic_variances()
        );
    }

    #[test]
    fn mixture_displacement_moves_center_only() {
        let noise = NoiseCovariance::new(0.3, 0.7).unwrap();
        let m = GaussianMixtureState::new(SqueezedState::new(amp(1.0, 0.0), 0.4), noise);
        let d = m.displaced(amp(-1.0, 2.0));
        assert_eq!(d.noise, noise);
        assert_eq!(d.center.alpha(), amp(0.0, 2.0));
        assert_eq!(d.center.squeezing(), 0.4);
        assert_eq!(d.total_variances(), m.total_variances());
    }

    fn finite_amp() -> impl Strategy<Value = ComplexAmplitude> {
        (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(re, im)| amp(re, im))
    }

    fn noise() -> impl Strategy<Value = NoiseCovariance> {
        (0.0..4.0f64, 0.0..4.0f64).prop_map(|(x, p)| NoiseCovariance::new(x, p).unwrap())
    }

    proptest! {
        #[test]
        fn overlap_symmetric_and_bounded(a in finite_amp(), b in finite_amp()) {
            let o = overlap_sq(a, b);
            prop_assert_eq!(o, overlap_sq(b, a));
            prop_assert!((0.0..=1.0).contains(&o));
        }

        #[test]
        fn overlap_decreases_with_distance(a in finite_amp(), d in 0.01..3.0f64, extra in 0.01..3.0f64) {
            let near = overlap_sq(a, a + amp(d, 0.0));
            let far = overlap_sq(a, a + amp(d + extra, 0.0));
            prop_assert!(far < near);
            prop_assert!(near < 1.0);
        }

        #[test]
        fn displacements_compose(a in finite_amp(), b in finite_amp(), c in finite_amp()) {
            let s = CoherentState::new(a);
            let two_steps = displace(displace(s, b), c).alpha;
            let one_step = displace(s, b + c).alpha;
            prop_assert!((two_steps - one_step).norm() < 1e-12);
        }

        #[test]
        fn noise_addition_is_a_commutative_monoid(a in noise(), b in noise(), c in noise()) {
            prop_assert_eq!(add_noise(a, b), add_noise(b, a));
            let l = add_noise(add_noise(a, b), c);
            let r = add_noise(a, add_noise(b, c));
            prop_assert!((l.var_x - r.var_x).abs() < 1e-14 && (l.var_p - r.var_p).abs() < 1e-14);
            prop_assert_eq!(add_noise(a, NoiseCovariance::ZERO), a);
        }

        #[test]
        fn squeezed_states_have_minimum_uncertainty(r in -3.0..3.0f64) {
            let (dx2, dp2) = SqueezedState::new(ComplexAmplitude::ZERO, r).intrinsic_variances();
            prop_assert!((dx2 * dp2 - 0.25).abs() < 1e-15);
        }
    }
}
