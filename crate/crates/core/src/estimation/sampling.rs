//! Seeded Monte Carlo models of quadrature measurements.
//!
//! Outcomes are drawn from Gaussians with the right means and variances; no
//! POVM is simulated. Samples are produced in fixed-size chunks, each with its
//! own ChaCha stream derived from `(seed, chunk index)`, so a report depends
//! only on `(scenario, seed, samples)` and never on the number of workers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{CoherentState, ComplexAmplitude, VACUUM_VARIANCE};

const CHUNK: usize = 1 << 16;

/// Outcome variance of the optimal single-copy joint measurement, per quadrature.
pub const JOINT_MEASUREMENT_VARIANCE: f64 = 1.0;

/// Sample statistics of simulated `x` and `p` outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub mean_x: f64,
    pub mean_p: f64,
    /// Unbiased sample variance of the `x` outcomes.
    pub var_x_hat: f64,
    pub var_p_hat: f64,
    /// Standard error of `var_x_hat` (from the sample fourth moment).
    pub stderr_x: f64,
    pub stderr_p: f64,
    pub stderr_mean_x: f64,
    pub stderr_mean_p: f64,
    pub samples: usize,
    pub seed: u64,
}

impl VarianceReport {
    pub fn product(&self) -> f64 {
        self.var_x_hat * self.var_p_hat
    }

    /// Standard error of [`Self::product`] for independent `x` and `p` estimates.
    pub fn product_stderr(&self) -> f64 {
        (self.var_p_hat * self.stderr_x).hypot(self.var_x_hat * self.stderr_p)
    }

    fn from_samples(xs: &[f64], ps: &[f64], seed: u64) -> Self {
        let x = Moments::of(xs);
        let p = Moments::of(ps);
        Self {
            mean_x: x.mean,
            mean_p: p.mean,
            var_x_hat: x.variance,
            var_p_hat: p.variance,
            stderr_x: x.variance_stderr,
            stderr_p: p.variance_stderr,
            stderr_mean_x: x.mean_stderr,
            stderr_mean_p: p.mean_stderr,
            samples: xs.len(),
            seed,
        }
    }
}

struct Moments {
    mean: f64,
    variance: f64,
    variance_stderr: f64,
    mean_stderr: f64,
}

impl Moments {
    fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let (m2, m4) = values.iter().fold((0.0, 0.0), |(m2, m4), &v| {
            let d2 = (v - mean) * (v - mean);
            (m2 + d2, m4 + d2 * d2)
        });
        let variance = m2 / (n - 1.0);
        let (m2, m4) = (m2 / n, m4 / n);
        Self {
            mean,
            variance,
            variance_stderr: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
            mean_stderr: (variance / n).sqrt(),
        }
    }
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng, mean: f64, variance: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    mean + variance.sqrt() * z
}

/// Draws `samples` outcome pairs with `draw`, chunk by chunk, in a fixed order.
fn sample_pairs<F>(samples: usize, seed: u64, draw: F) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(&mut ChaCha8Rng) -> (f64, f64) + Sync,
{
    let chunks: Vec<(Vec<f64>, Vec<f64>)> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(samples - c * CHUNK);
            let mut rng = chunk_rng(seed, c);
            (0..len).map(|_| draw(&mut rng)).unzip()
        })
        .collect();
    let mut xs = Vec::with_capacity(samples);
    let mut ps = Vec::with_capacity(samples);
    for (cx, cp) in chunks {
        xs.extend(cx);
        ps.extend(cp);
    }
    (xs, ps)
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    Ok(())
}

/// Measures `x` on one clone and `p` on another clone of a coherent state.
///
/// Each clone is the input displaced by an isotropic Gaussian of variance
/// `noise_var`; the two clones' displacements are drawn independently. The
/// expected outcome variance is `1/2 + noise_var` in each quadrature.
pub fn simulate_joint_measurement(
    noise_var: f64,
    center: CoherentState,
    samples: usize,
    seed: u64,
) -> Result<VarianceReport> {
    if !(noise_var.is_finite() && noise_var >= 0.0) {
        return Err(Error::Domain(format!(
            "noise variance must be non-negative, got {noise_var}"
        )));
    }
    check_samples(samples)?;
    let (x0, p0) = (center.alpha.x(), center.alpha.p());
    let (xs, ps) = sample_pairs(samples, seed, |rng| {
        let bx = gaussian(rng, 0.0, noise_var);
        let x = gaussian(rng, x0 + bx, VACUUM_VARIANCE);
        let bp = gaussian(rng, 0.0, noise_var);
        let p = gaussian(rng, p0 + bp, VACUUM_VARIANCE);
        (x, p)
    });
    Ok(VarianceReport::from_samples(&xs, &ps, seed))
}

/// Estimates `(x, p)` of `|α⟩` from `n_copies` copies, each measured with the
/// optimal single-copy joint measurement (outcome variance 1 per quadrature);
/// the estimate is the average. Its variance should be `1/n_copies`.
pub fn simulate_heterodyne_estimate(
    alpha: ComplexAmplitude,
    n_copies: u32,
    samples: usize,
    seed: u64,
) -> Result<VarianceReport> {
    if n_copies == 0 {
        return Err(Error::Domain("number of copies must be positive".into()));
    }
    check_samples(samples)?;
    let (x0, p0) = (alpha.x(), alpha.p());
    let n = f64::from(n_copies);
    let (xs, ps) = sample_pairs(samples, seed, |rng| {
        let (mut sx, mut sp) = (0.0, 0.0);
        for _ in 0..n_copies {
            sx += gaussian(rng, x0, JOINT_MEASUREMENT_VARIANCE);
            sp += gaussian(rng, p0, JOINT_MEASUREMENT_VARIANCE);
        }
        (sx / n, sp / n)
    });
    Ok(VarianceReport::from_samples(&xs, &ps, seed))
}
