//! Truncated Fock-space oracle.
//!
//! Builds the single-clone density operator
//! `ρ₁ = ∫ d²β w(β) |α+β⟩⟨α+β|` numerically, with `w` the Gaussian displacement
//! density, using a tensor Gauss–Hermite rule. Fidelities, quadrature moments
//! and the additivity of cascaded noise are then read off the matrix, giving an
//! independent check on the closed forms in [`crate::cloner`].
//!
//! A basis with cutoff `n_max` spans `|0⟩ ..= |n_max⟩` (dimension `n_max + 1`).

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::hermite::GaussHermite;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{
    add_noise, CenterState, CoherentState, ComplexAmplitude, GaussianMixtureState, NoiseCovariance,
    SqueezedState,
};

/// Default Gauss–Hermite nodes per phase-space axis.
pub const DEFAULT_NODES: usize = 41;
/// Default tolerated norm (or trace) deficit caused by truncation.
pub const DEFAULT_TRUNCATION_TOLERANCE: f64 = 1e-8;
pub const MIN_CUTOFF: usize = 32;
pub const MAX_CUTOFF: usize = 256;
/// Largest |r| accepted by [`squeeze_fock_matrix`].
pub const MAX_SQUEEZING: f64 = 1.5;
/// Grid nodes whose normalized weight falls below this are dropped.
const WEIGHT_FLOOR: f64 = 1e-24;
const BATCH: usize = 512;
const HERMITICITY_TOL: f64 = 1e-12;

/// A state vector in a truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: DVector<Complex64>,
}

impl FockVector {
    pub fn from_amplitudes(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Domain(
                "a Fock vector needs at least one amplitude".into(),
            ));
        }
        Ok(Self { amplitudes })
    }

    /// The number state `|n⟩` in a basis with the given cutoff.
    pub fn number_state(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::Dimension {
                left: n,
                right: cutoff,
            });
        }
        let mut v = DVector::zeros(cutoff + 1);
        v[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨n⟩ = Σ n |c_n|²`.
    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    pub fn projector(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix { matrix: m }
    }
}

/// A density operator in a truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

/// Numerical health of a [`DensityMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Physicality {
    pub hermiticity_error: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn is_physical(&self, truncation_tolerance: f64) -> bool {
        self.hermiticity_error <= HERMITICITY_TOL
            && self.trace >= 1.0 - truncation_tolerance
            && self.trace <= 1.0 + 1e-12
            && self.min_eigenvalue >= -1e-10
    }
}

impl DensityMatrix {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Dimension {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn cutoff(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|c| c.re).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let diff = &self.matrix - self.matrix.adjoint();
        diff.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn physicality(&self) -> Physicality {
        Physicality {
            hermiticity_error: self.hermiticity_error(),
            trace: self.trace(),
            min_eigenvalue: self.min_eigenvalue(),
        }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        check_dims(self.cutoff(), other.cutoff())?;
        Ok((&self.matrix - &other.matrix)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max))
    }

    fn check_trace(self, tolerance: f64) -> Result<Self> {
        let deficit = 1.0 - self.trace();
        if deficit > tolerance {
            return Err(Error::Truncation {
                cutoff: self.cutoff(),
                deficit,
                tolerance,
            });
        }
        Ok(self)
    }
}

/// Tensor Gauss–Hermite rule over the two phase-space axes.
///
/// Nodes `t` and weights are those of `∫ e^{−t²} f(t) dt`, with weights
/// normalized to sum to one. A displacement with variance `v` along an axis
/// uses the amplitude offset `√v · t`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(nodes_per_axis: usize) -> Result<Self> {
        if nodes_per_axis < 2 {
            return Err(Error::Domain(format!(
                "quadrature grid needs at least 2 nodes per axis, got {nodes_per_axis}"
            )));
        }
        let deg = NonZeroUsize::new(nodes_per_axis).expect("checked above");
        let rule = GaussHermite::new(deg);
        let norm = PI.sqrt();
        let (nodes, weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(t, w)| (t, w / norm))
            .unzip();
        Ok(Self { nodes, weights })
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.nodes.len()
    }

    /// Displacement amplitudes and probabilities for a Gaussian with the given
    /// covariance, row-major over `(x node, p node)`. Negligible nodes are skipped.
    fn displacements(&self, noise: NoiseCovariance) -> Vec<(ComplexAmplitude, f64)> {
        let (sx, sp) = (noise.var_x.sqrt(), noise.var_p.sqrt());
        let mut out = Vec::with_capacity(self.nodes.len() * self.nodes.len());
        for (&tx, &wx) in self.nodes.iter().zip(&self.weights) {
            for (&tp, &wp) in self.nodes.iter().zip(&self.weights) {
                let w = wx * wp;
                if w >= WEIGHT_FLOOR {
                    out.push((ComplexAmplitude::new(sx * tx, sp * tp), w));
                }
            }
        }
        out
    }
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self::new(DEFAULT_NODES).expect("default grid is valid")
    }
}

/// `n_max = ⌈(|α| + 5√v + 3)²⌉`, clamped to `[32, 256]`.
pub fn default_cutoff(alpha_abs: f64, max_variance: f64) -> usize {
    let reach = alpha_abs + 5.0 * max_variance.max(0.0).sqrt() + 3.0;
    let n = (reach * reach).ceil();
    if n.is_finite() {
        (n as usize).clamp(MIN_CUTOFF, MAX_CUTOFF)
    } else {
        MAX_CUTOFF
    }
}

/// Default cutoff for the numerical form of a mixture.
pub fn default_cutoff_for(mix: &GaussianMixtureState) -> usize {
    let (dx2, dp2) = mix.center.intrinsic_variances();
    let excess = dx2.max(dp2) - 0.5;
    default_cutoff(mix.center.alpha().norm(), mix.noise.max_variance() + excess)
}

fn coherent_amplitudes(alpha: ComplexAmplitude, dim: usize) -> DVector<Complex64> {
    let a = alpha.to_complex();
    let mut v = DVector::zeros(dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            c = c * a / (n as f64).sqrt();
        }
        v[n] = c;
    }
    v
}

/// `|α⟩ = e^{−|α|²/2} Σ αⁿ/√n! |n⟩`, truncated at `cutoff`.
pub fn coherent_fock_vector(
    alpha: ComplexAmplitude,
    cutoff: usize,
    tolerance: f64,
) -> Result<FockVector> {
    if cutoff < 1 {
        return Err(Error::Domain("cutoff must be at least 1".into()));
    }
    if !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "amplitude must be finite, got {alpha}"
        )));
    }
    let v = FockVector {
        amplitudes: coherent_amplitudes(alpha, cutoff + 1),
    };
    check_norm(v, tolerance)
}

fn check_norm(v: FockVector, tolerance: f64) -> Result<FockVector> {
    let deficit = 1.0 - v.norm_sqr();
    if deficit > tolerance {
        return Err(Error::Truncation {
            cutoff: v.cutoff(),
            deficit,
            tolerance,
        });
    }
    Ok(v)
}

/// `exp[(r/2)(â†² − â²)]` in a basis with the given cutoff.
///
/// Positive `r` stretches `x`: the squeezed vacuum has `var_x = e^{2r}/2`.
/// The generator is truncated before exponentiating, so the result is exactly
/// orthogonal but only accurate on states supported well below the cutoff.
pub fn squeeze_fock_matrix(r: f64, cutoff: usize) -> Result<DMatrix<Complex64>> {
    Ok(squeeze_real(r, cutoff)?.map(|x| Complex64::new(x, 0.0)))
}

fn squeeze_real(r: f64, cutoff: usize) -> Result<DMatrix<f64>> {
    if !r.is_finite() || r.abs() > MAX_SQUEEZING {
        return Err(Error::Domain(format!(
            "squeezing must satisfy |r| <= {MAX_SQUEEZING}, got {r}"
        )));
    }
    if cutoff < 2 {
        return Err(Error::Domain("cutoff must be at least 2".into()));
    }
    let dim = cutoff + 1;
    if r == 0.0 {
        return Ok(DMatrix::identity(dim, dim));
    }
    // ⟨n+2|â†²|n⟩ = √((n+1)(n+2)); â² is its transpose
    let mut generator = DMatrix::zeros(dim, dim);
    for n in 0..dim - 2 {
        let e = 0.5 * r * (((n + 1) * (n + 2)) as f64).sqrt();
        generator[(n + 2, n)] = e;
        generator[(n, n + 2)] = -e;
    }
    let s = generator.exp();

    // the squeezed vacuum must stay clear of the top third of the basis
    let lower = (2 * dim) / 3;
    let tail: f64 = s.column(0).iter().skip(lower).map(|c| c * c).sum();
    if tail > DEFAULT_TRUNCATION_TOLERANCE {
        return Err(Error::Truncation {
            cutoff,
            deficit: tail,
            tolerance: DEFAULT_TRUNCATION_TOLERANCE,
        });
    }
    Ok(s)
}

/// Working basis used to build squeezed states before truncating to `cutoff`.
fn working_cutoff(cutoff: usize) -> usize {
    2 * cutoff + 1
}

/// Amplitude in the unsqueezed frame: `S(r)† D(α) S(r) = D(u)`.
fn unsqueeze_amplitude(alpha: ComplexAmplitude, r: f64) -> ComplexAmplitude {
    ComplexAmplitude::new(alpha.re * (-r).exp(), alpha.im * r.exp())
}

fn unsqueeze_noise(noise: NoiseCovariance, r: f64) -> NoiseCovariance {
    let s = (2.0 * r).exp();
    NoiseCovariance {
        var_x: noise.var_x / s,
        var_p: noise.var_p * s,
    }
}

/// `D(α) S(r) |0⟩`, built as `S(r) |u⟩` with `u` the unsqueezed amplitude.
pub fn squeezed_fock_vector(
    state: SqueezedState,
    cutoff: usize,
    tolerance: f64,
) -> Result<FockVector> {
    if !state.alpha.is_finite() {
        return Err(Error::Domain(format!(
            "amplitude must be finite, got {}",
            state.alpha
        )));
    }
    let wide = working_cutoff(cutoff);
    let s = squeeze_real(state.r, wide)?;
    let u = coherent_amplitudes(unsqueeze_amplitude(state.alpha, state.r), wide + 1);
    let full = s.map(|x| Complex64::new(x, 0.0)) * u;
    let v = FockVector {
        amplitudes: full.rows(0, cutoff + 1).into_owned(),
    };
    check_norm(v, tolerance)
}

/// Fock vector of a mixture center.
pub fn center_fock_vector(
    center: CenterState,
    cutoff: usize,
    tolerance: f64,
) -> Result<FockVector> {
    match center {
        CenterState::Coherent(c) => coherent_fock_vector(c.alpha, cutoff, tolerance),
        CenterState::Squeezed(s) => squeezed_fock_vector(s, cutoff, tolerance),
    }
}

/// `Σ_k w_k |γ_k⟩⟨γ_k|` over weighted coherent amplitudes, accumulated batch by
/// batch in a fixed order with real matrix products.
fn coherent_projector_sum<I>(points: I, dim: usize) -> DMatrix<Complex64>
where
    I: IntoIterator<Item = (ComplexAmplitude, f64)>,
{
    // with V = A + iB (columns √w·|γ⟩): VV† = (AAᵀ + BBᵀ) + i(BAᵀ − ABᵀ)
    let mut re = DMatrix::<f64>::zeros(dim, dim);
    let mut cross = DMatrix::<f64>::zeros(dim, dim);
    let mut stacked = DMatrix::<f64>::zeros(dim, 2 * BATCH);
    let mut filled = 0;

    let flush =
        |stacked: &DMatrix<f64>, filled: usize, re: &mut DMatrix<f64>, cross: &mut DMatrix<f64>| {
            if filled == 0 {
                return;
            }
            let a = stacked.columns(0, filled);
            let b = stacked.columns(BATCH, filled);
            re.gemm(1.0, &a, &a.transpose(), 1.0);
            re.gemm(1.0, &b, &b.transpose(), 1.0);
            cross.gemm(1.0, &b, &a.transpose(), 1.0);
        };

    for (gamma, w) in points {
        let v = coherent_amplitudes(gamma, dim);
        let sw = w.sqrt();
        for n in 0..dim {
            stacked[(n, filled)] = sw * v[n].re;
            stacked[(n, BATCH + filled)] = sw * v[n].im;
        }
        filled += 1;
        if filled == BATCH {
            flush(&stacked, filled, &mut re, &mut cross);
            filled = 0;
        }
    }
    flush(&stacked, filled, &mut re, &mut cross);

    DMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(
            0.5 * (re[(i, j)] + re[(j, i)]),
            cross[(i, j)] - cross[(j, i)],
        )
    })
}

fn coherent_mixture(
    alpha: ComplexAmplitude,
    noise: NoiseCovariance,
    dim: usize,
    grid: &QuadratureGrid,
) -> DMatrix<Complex64> {
    if noise.is_zero() {
        let v = coherent_amplitudes(alpha, dim);
        return &v * v.adjoint();
    }
    let points = grid
        .displacements(noise)
        .into_iter()
        .map(|(beta, w)| (alpha + beta, w));
    coherent_projector_sum(points, dim)
}

/// Numerical density matrix of a Gaussian mixture.
///
/// Coherent centers are integrated directly, with the grid stretched per axis
/// by the noise standard deviations. Squeezed centers are built in the frame
/// where the center is coherent and conjugated by [`squeeze_fock_matrix`].
pub fn mixture_density_matrix(
    mix: &GaussianMixtureState,
    cutoff: usize,
    grid: &QuadratureGrid,
    tolerance: f64,
) -> Result<DensityMatrix> {
    if cutoff < 1 {
        return Err(Error::Domain("cutoff must be at least 1".into()));
    }
    if mix.is_pure() {
        let v = center_fock_vector(mix.center, cutoff, tolerance)?;
        return Ok(v.projector());
    }
    let alpha = mix.center.alpha();
    if !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "amplitude must be finite, got {alpha}"
        )));
    }
    let matrix = match mix.center {
        CenterState::Coherent(_) => coherent_mixture(alpha, mix.noise, cutoff + 1, grid),
        CenterState::Squeezed(s) => {
            let wide = working_cutoff(cutoff);
            let squeeze = squeeze_real(s.r, wide)?;
            let inner = coherent_mixture(
                unsqueeze_amplitude(alpha, s.r),
                unsqueeze_noise(mix.noise, s.r),
                wide + 1,
                grid,
            );
            let rows = squeeze.rows(0, cutoff + 1).map(|x| Complex64::new(x, 0.0));
            let m = &rows * inner * rows.transpose();
            // restore exact hermiticity lost in the triple product
            (&m + m.adjoint()).map(|c| 0.5 * c)
        }
    };
    DensityMatrix { matrix }.check_trace(tolerance)
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity_against(state: &FockVector, rho: &DensityMatrix) -> Result<f64> {
    check_dims(state.cutoff(), rho.cutoff())?;
    let v = state.amplitudes();
    let f = (v.adjoint() * &rho.matrix * v)[(0, 0)];
    if f.im.abs() >= 1e-12 {
        return Err(Error::Contract(format!(
            "fidelity has imaginary part {:e}; density matrix is not Hermitian",
            f.im
        )));
    }
    Ok(f.re)
}

/// Builds the output of two cloners applied in sequence (the outer integral
/// over `n2`-displacements of `n1`-mixtures) and a single mixture with the
/// summed noise, and returns their largest entrywise difference.
pub fn cascade_density_check(
    center: CoherentState,
    n1: NoiseCovariance,
    n2: NoiseCovariance,
    cutoff: usize,
    grid: &QuadratureGrid,
    tolerance: f64,
) -> Result<f64> {
    let single = mixture_density_matrix(
        &GaussianMixtureState::new(center, add_noise(n1, n2)),
        cutoff,
        grid,
        tolerance,
    )?;
    let sequential = if n1.is_zero() || n2.is_zero() {
        let only = if n1.is_zero() { n2 } else { n1 };
        mixture_density_matrix(
            &GaussianMixtureState::new(center, only),
            cutoff,
            grid,
            tolerance,
        )?
    } else {
        let inner = grid.displacements(n1);
        let outer = grid.displacements(n2);
        let points = outer.iter().flat_map(|&(gamma, wo)| {
            inner.iter().filter_map(move |&(beta, wi)| {
                let w = wo * wi;
                (w >= WEIGHT_FLOOR).then_some((center.alpha + gamma + beta, w))
            })
        });
        DensityMatrix {
            matrix: coherent_projector_sum(points, cutoff + 1),
        }
        .check_trace(tolerance)?
    };
    sequential.max_abs_diff(&single)
}

/// Means and variances of `x̂` and `p̂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

/// Quadrature moments from the ladder-operator expectations `⟨â⟩`, `⟨â²⟩`, `⟨â†â⟩`,
/// normalized by the trace.
pub fn quadrature_moments(rho: &DensityMatrix) -> QuadratureMoments {
    let m = &rho.matrix;
    let dim = m.nrows();
    let trace = rho.trace();
    // Tr(ρ â) = Σ √n ρ[n, n−1],  Tr(ρ â²) = Σ √(n(n−1)) ρ[n, n−2]
    let mut a = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut number = 0.0;
    for n in 0..dim {
        let nf = n as f64;
        number += nf * m[(n, n)].re;
        if n >= 1 {
            a += m[(n, n - 1)] * nf.sqrt();
        }
        if n >= 2 {
            a2 += m[(n, n - 2)] * (nf * (nf - 1.0)).sqrt();
        }
    }
    let (a, a2, number) = (a / trace, a2 / trace, number / trace);
    let mean_x = std::f64::consts::SQRT_2 * a.re;
    let mean_p = std::f64::consts::SQRT_2 * a.im;
    // ⟨x̂²⟩ = Re⟨â²⟩ + ⟨â†â⟩ + 1/2,  ⟨p̂²⟩ = −Re⟨â²⟩ + ⟨â†â⟩ + 1/2
    let x2 = a2.re + number + 0.5;
    let p2 = -a2.re + number + 0.5;
    QuadratureMoments {
        mean_x,
        mean_p,
        var_x: x2 - mean_x * mean_x,
        var_p: p2 - mean_p * mean_p,
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::Dimension { left, right });
    }
    Ok(())
}
