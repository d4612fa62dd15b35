//! Verification suites that cross-check the closed forms against the bound
//! chain, the Fock oracle and Monte Carlo simulations.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cloner::{
    cascade, optimal_fidelity_exact, optimal_variance_exact, squeezed_variant, to_f64, ClonerSpec,
    CopyCount, Rational,
};
use crate::error::Result;
use crate::estimation::{
    cloning_lower_bound_exact, default_weight_grid, holevo_sweep, simulate_heterodyne_estimate,
    simulate_joint_measurement, symmetric_variance_bound,
};
use crate::fock::{
    cascade_density_check, center_fock_vector, default_cutoff, default_cutoff_for,
    fidelity_against, mixture_density_matrix, quadrature_moments, QuadratureGrid, DEFAULT_NODES,
    DEFAULT_TRUNCATION_TOLERANCE,
};
use crate::quadrature::{
    add_noise, CoherentState, ComplexAmplitude, GaussianMixtureState, NoiseCovariance,
    SqueezedState,
};

/// One named comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self {
            checks: Vec::new(),
            overall: true,
        }
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        expected: f64,
        observed: f64,
        tolerance: f64,
        pass: bool,
    ) {
        self.overall &= pass;
        self.checks.push(Check {
            name: name.into(),
            expected,
            observed,
            tolerance,
            pass,
        });
    }

    /// `|observed − expected| ≤ tolerance`.
    pub fn push_close(
        &mut self,
        name: impl Into<String>,
        expected: f64,
        observed: f64,
        tolerance: f64,
    ) {
        let pass = (observed - expected).abs() <= tolerance;
        self.push(name, expected, observed, tolerance, pass);
    }

    /// `observed ≤ tolerance` for a non-negative error measure.
    pub fn push_below(&mut self, name: impl Into<String>, observed: f64, tolerance: f64) {
        self.push(name, 0.0, observed, tolerance, observed <= tolerance);
    }

    /// An exact check summarized as a count of mismatches.
    pub fn push_mismatches(&mut self, name: impl Into<String>, mismatches: usize) {
        self.push(name, 0.0, mismatches as f64, 0.0, mismatches == 0);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(c.name, c.expected, c.observed, c.tolerance, c.pass);
        }
    }
}

/// Scenarios compared between the Fock oracle and the closed forms.
pub const ORACLE_SCENARIOS: [(u32, u32); 5] = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 5)];

pub fn oracle_centers() -> [ComplexAmplitude; 4] {
    [
        ComplexAmplitude::ZERO,
        ComplexAmplitude::new(1.0, 0.0),
        ComplexAmplitude::new(1.0, 1.0),
        ComplexAmplitude::new(2.0, -1.0),
    ]
}

/// Noise pairs whose cascade is compared with the single summed-noise mixture.
pub fn cascade_pairs() -> [(NoiseCovariance, NoiseCovariance); 3] {
    let iso = |v| NoiseCovariance { var_x: v, var_p: v };
    [
        (iso(0.5), iso(0.25)),
        (iso(0.5), NoiseCovariance::ZERO),
        (iso(0.5), iso(0.5)),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockConfig {
    pub nodes: usize,
    /// Fixed cutoff; `None` applies the default cutoff rule per scenario.
    pub cutoff: Option<usize>,
    pub fidelity_tolerance: f64,
    pub cascade_tolerance: f64,
    pub squeezed_tolerance: f64,
    pub squeezing: f64,
    pub truncation_tolerance: f64,
}

impl Default for FockConfig {
    fn default() -> Self {
        Self {
            nodes: DEFAULT_NODES,
            cutoff: None,
            fidelity_tolerance: 1e-5,
            cascade_tolerance: 1e-6,
            squeezed_tolerance: 1e-4,
            squeezing: 0.5,
            truncation_tolerance: DEFAULT_TRUNCATION_TOLERANCE,
        }
    }
}

impl FockConfig {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.fidelity_tolerance = tolerance;
        self.cascade_tolerance = tolerance;
        self.squeezed_tolerance = tolerance;
        self
    }
}

/// Oracle fidelity of the optimal N→M clone of `|α⟩`.
pub fn oracle_fidelity(
    n: u32,
    m: CopyCount,
    alpha: ComplexAmplitude,
    config: &FockConfig,
) -> Result<f64> {
    let cloner = ClonerSpec::opt(n, m)?;
    let mix = GaussianMixtureState::new(CoherentState::new(alpha), cloner.noise);
    oracle_mixture_fidelity(&mix, config)
}

/// `⟨ψ|ρ|ψ⟩` for a mixture against its own center, computed in the Fock basis.
pub fn oracle_mixture_fidelity(mix: &GaussianMixtureState, config: &FockConfig) -> Result<f64> {
    let grid = QuadratureGrid::new(config.nodes)?;
    let cutoff = config.cutoff.unwrap_or_else(|| default_cutoff_for(mix));
    let rho = mixture_density_matrix(mix, cutoff, &grid, config.truncation_tolerance)?;
    let psi = center_fock_vector(mix.center, cutoff, config.truncation_tolerance)?;
    fidelity_against(&psi, &rho)
}

pub fn verify_fock(config: &FockConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    let grid = QuadratureGrid::new(config.nodes)?;

    for (n, m) in ORACLE_SCENARIOS {
        let expected = to_f64(optimal_fidelity_exact(n, CopyCount::Finite(m))?);
        let mut seen = Vec::new();
        for alpha in oracle_centers() {
            let f = oracle_fidelity(n, CopyCount::Finite(m), alpha, config)?;
            report.push_close(
                format!("fock fidelity {n}->{m} at {alpha}"),
                expected,
                f,
                config.fidelity_tolerance,
            );
            seen.push(f);
        }
        let spread = seen.iter().cloned().fold(f64::MIN, f64::max)
            - seen.iter().cloned().fold(f64::MAX, f64::min);
        report.push_below(
            format!("fock center spread {n}->{m}"),
            spread,
            config.fidelity_tolerance,
        );
    }

    let center = CoherentState::VACUUM;
    for (n1, n2) in cascade_pairs() {
        let total = add_noise(n1, n2);
        let cutoff = config
            .cutoff
            .unwrap_or_else(|| default_cutoff(center.alpha.norm(), total.max_variance()));
        let diff =
            cascade_density_check(center, n1, n2, cutoff, &grid, config.truncation_tolerance)?;
        report.push_below(
            format!(
                "cascade ({}) then ({}) vs ({})",
                n1.var_x, n2.var_x, total.var_x
            ),
            diff,
            config.cascade_tolerance,
        );
    }

    // operator-level moments of the 1→2 clone of the vacuum
    let mix = GaussianMixtureState::new(center, ClonerSpec::opt(1, 2)?.noise);
    let cutoff = config.cutoff.unwrap_or_else(|| default_cutoff_for(&mix));
    let moments = quadrature_moments(&mixture_density_matrix(
        &mix,
        cutoff,
        &grid,
        config.truncation_tolerance,
    )?);
    report.push_close(
        "fock var_x of 1->2 clone",
        1.0,
        moments.var_x,
        config.cascade_tolerance,
    );
    report.push_close(
        "fock var_p of 1->2 clone",
        1.0,
        moments.var_p,
        config.cascade_tolerance,
    );

    let r = config.squeezing;
    let sq = squeezed_variant(1, 2, r)?;
    let product_exact = sq.noise_product_exact().unwrap_or_else(Rational::zero);
    report.push(
        format!("squeezed noise product r={r} (exact)"),
        0.25,
        to_f64(product_exact),
        0.0,
        product_exact == Rational::new(1, 4),
    );
    let mix = GaussianMixtureState::new(SqueezedState::new(ComplexAmplitude::ZERO, r), sq.noise);
    let f = oracle_mixture_fidelity(&mix, config)?;
    report.push_close(
        format!("squeezed fock fidelity 1->2 r={r}"),
        2.0 / 3.0,
        f,
        config.squeezed_tolerance,
    );

    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsConfig {
    pub n_max: u32,
    pub cascade_max: u32,
    pub k_max: u32,
    pub holevo_tolerance: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            n_max: 64,
            cascade_max: 32,
            k_max: 16,
            holevo_tolerance: 1e-12,
        }
    }
}

pub fn verify_bounds(config: &BoundsConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    let q = Rational::new;
    let fin = CopyCount::Finite;
    let inf = CopyCount::Unbounded;

    let stated = [
        (
            "variance 1->2 = 1/2",
            optimal_variance_exact(1, fin(2))?,
            q(1, 2),
        ),
        (
            "fidelity 1->2 = 2/3",
            optimal_fidelity_exact(1, fin(2))?,
            q(2, 3),
        ),
        (
            "fidelity 1->inf = 1/2",
            optimal_fidelity_exact(1, inf)?,
            q(1, 2),
        ),
    ];
    for (name, got, want) in stated {
        report.push(name, to_f64(want), to_f64(got), 0.0, got == want);
    }

    let mut mismatches = 0;
    for n in 1..=config.n_max {
        let n_i = i128::from(n);
        let cases = [
            (optimal_variance_exact(n, fin(n))?, q(0, 1)),
            (optimal_fidelity_exact(n, fin(n))?, q(1, 1)),
            (optimal_variance_exact(n, inf)?, q(1, n_i)),
            (optimal_fidelity_exact(n, inf)?, q(n_i, n_i + 1)),
        ];
        mismatches += cases.iter().filter(|(a, b)| a != b).count();
    }
    report.push_mismatches(
        format!("closed forms at M=N and M=inf for N<={}", config.n_max),
        mismatches,
    );

    let mut mismatches = 0;
    for n in 1..=config.n_max {
        for m in (n..=config.n_max).map(fin).chain([inf]) {
            if cloning_lower_bound_exact(n, m)? != optimal_variance_exact(n, m)? {
                mismatches += 1;
            }
        }
    }
    report.push_mismatches(
        format!(
            "bound chain equals optimal variance for N<=M<={}",
            config.n_max
        ),
        mismatches,
    );

    let mut mismatches = 0;
    for n in 1..=config.cascade_max {
        for m in n..=config.cascade_max {
            let first = ClonerSpec::opt(n, m)?;
            for l in m..=config.cascade_max {
                let composed = cascade(&first, &ClonerSpec::opt(m, l)?)?;
                let exact = composed.exact.map(|e| e.variance);
                if exact != Some(optimal_variance_exact(n, fin(l))?) {
                    mismatches += 1;
                }
            }
        }
    }
    report.push_mismatches(
        format!(
            "optimal cascade closure for N<=M<=L<={}",
            config.cascade_max
        ),
        mismatches,
    );

    let mut violations = 0;
    for (n, m) in [(1, 2), (1, 3), (2, 3)] {
        for k in 1..config.k_max {
            let v = |k: u32| optimal_variance_exact(k * n, fin(k * m));
            let f = |k: u32| optimal_fidelity_exact(k * n, fin(k * m));
            if !(v(k + 1)? < v(k)? && f(k + 1)? > f(k)?) {
                violations += 1;
            }
        }
    }
    report.push_mismatches(format!("monotone in k for k<={}", config.k_max), violations);

    let grid = default_weight_grid();
    let bounds: Vec<f64> = grid
        .iter()
        .map(|&w| symmetric_variance_bound(w))
        .collect::<Result<_>>()?;
    let (argmax, max) =
        bounds.iter().enumerate().fold(
            (0, f64::MIN),
            |acc, (i, &b)| if b > acc.1 { (i, b) } else { acc },
        );
    report.push_close(
        "symmetric variance bound peak value",
        1.0,
        max,
        config.holevo_tolerance,
    );
    report.push_close(
        "symmetric variance bound peak ratio g_x/g_p",
        1.0,
        grid[argmax].ratio(),
        config.holevo_tolerance,
    );

    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub samples: usize,
    pub seeds: Vec<u64>,
    /// Allowed deviation in units of the reported standard error.
    pub sigmas: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seeds: vec![42, 7, 1001],
            sigmas: 5.0,
        }
    }
}

pub fn verify_mc(config: &McConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    let k = config.sigmas;

    for &seed in &config.seeds {
        let r = simulate_joint_measurement(0.5, CoherentState::VACUUM, config.samples, seed)?;
        report.push_close(
            format!("joint measurement var_x seed={seed}"),
            1.0,
            r.var_x_hat,
            k * r.stderr_x,
        );
        report.push_close(
            format!("joint measurement var_p seed={seed}"),
            1.0,
            r.var_p_hat,
            k * r.stderr_p,
        );
        report.push_close(
            format!("joint measurement product seed={seed}"),
            1.0,
            r.product(),
            k * r.product_stderr(),
        );
    }

    let seed = config.seeds.first().copied().unwrap_or(42);
    let alpha = ComplexAmplitude::new(1.0, -0.5);
    for n in [1u32, 2, 4, 8] {
        let r = simulate_heterodyne_estimate(alpha, n, config.samples, seed)?;
        let expected = 1.0 / f64::from(n);
        report.push_close(
            format!("heterodyne var_x N={n}"),
            expected,
            r.var_x_hat,
            k * r.stderr_x,
        );
        report.push_close(
            format!("heterodyne var_p N={n}"),
            expected,
            r.var_p_hat,
            k * r.stderr_p,
        );
    }

    let r = simulate_heterodyne_estimate(ComplexAmplitude::ZERO, 1, config.samples, seed)?;
    let sweep = holevo_sweep(&default_weight_grid(), &r)?;
    let violations = sweep.iter().filter(|p| !p.satisfied(k)).count();
    report.push_mismatches(
        "weighted bound holds for simulated measurement on weight grid",
        violations,
    );
    let mid = &sweep[sweep.len() / 2];
    report.push_close(
        "weighted bound saturated at g_x=g_p",
        mid.rhs,
        mid.lhs,
        k * mid.lhs_stderr,
    );

    Ok(report)
}
