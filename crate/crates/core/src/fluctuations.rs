//! Longitudinal dispersion fluctuations.
//!
//! The phase-matching frequency offset `Δω(z)` is a stationary
//! Ornstein–Uhlenbeck process with standard deviation `σ_Δω` and correlation
//! length `L_c`, sampled with the exact discrete update
//!
//! ```text
//! Δω_{k+1} = Δω_k·e^{-Δz/L_c} + σ_Δω·√(1 - e^{-2Δz/L_c})·ξ_k,   Δω_0 ~ N(0, σ_Δω²)
//! ```
//!
//! and mapped to a phase mismatch `Δβ₀(z) = Δβ₁·Δω(z)`.
//!
//! Random numbers come from ChaCha8 seeded with the 64-bit model seed, with
//! standard normals drawn by `rand_distr`'s ziggurat sampler.

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of the generator, recorded in output metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha) + ziggurat StandardNormal (rand_distr)";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationModel {
    /// Stationary standard deviation of Δω, rad/s.
    pub sigma_dw: f64,
    /// Correlation length, m.
    pub corr_length: f64,
    pub seed: u64,
    /// Slope converting a frequency offset into phase mismatch, s/m.
    pub delta_beta1: f64,
}

impl FluctuationModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_dw >= 0.0) || !self.sigma_dw.is_finite() {
            return Err(Error::param("sigma_dw", "must be finite and non-negative"));
        }
        if !(self.corr_length > 0.0) || !self.corr_length.is_finite() {
            return Err(Error::param("corr_length", "must be finite and positive"));
        }
        if !self.delta_beta1.is_finite() {
            return Err(Error::param("delta_beta1", "must be finite"));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// A sampled `Δβ₀(z)` realization on a uniform grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MismatchPath {
    step: f64,
    values: Vec<f64>,
    // trapezoid integral of values from 0 to each sample
    cumulative: Vec<f64>,
}

/// Uniform grid `0, step, 2·step, …, length` with `step = dz/2`, so solver
/// half-step and full-step positions are all samples.
pub fn half_step_grid(length: f64, steps: usize) -> Vec<f64> {
    let m = 2 * steps;
    (0..=m).map(|k| length * k as f64 / m as f64).collect()
}

fn check_uniform(z: &[f64]) -> Result<f64> {
    if z.len() < 2 || z[0] != 0.0 {
        return Err(Error::NonUniformGrid);
    }
    let step = (z[z.len() - 1] - z[0]) / (z.len() - 1) as f64;
    if !(step > 0.0) {
        return Err(Error::NonUniformGrid);
    }
    for (k, &zk) in z.iter().enumerate() {
        if (zk - step * k as f64).abs() > 1e-9 * step.max(zk.abs()) {
            return Err(Error::NonUniformGrid);
        }
    }
    Ok(step)
}

/// Sample one realization of the mismatch path on `z_grid`.
pub fn sample_path(model: &FluctuationModel, z_grid: &[f64]) -> Result<MismatchPath> {
    model.validate()?;
    let step = check_uniform(z_grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let decay = (-step / model.corr_length).exp();
    let kick = model.sigma_dw * (1.0 - decay * decay).sqrt();
    let first: f64 = StandardNormal.sample(&mut rng);
    let mut dw = model.sigma_dw * first;
    let mut values = Vec::with_capacity(z_grid.len());
    values.push(model.delta_beta1 * dw);
    for _ in 1..z_grid.len() {
        let xi: f64 = StandardNormal.sample(&mut rng);
        dw = dw * decay + kick * xi;
        values.push(model.delta_beta1 * dw);
    }
    MismatchPath::from_samples(step, values)
}

impl MismatchPath {
    pub fn from_samples(step: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !(step > 0.0) {
            return Err(Error::NonUniformGrid);
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("mismatch path value {bad}")));
        }
        let mut path = MismatchPath {
            step,
            values,
            cumulative: Vec::new(),
        };
        path.rebuild_cumulative();
        Ok(path)
    }

    pub fn zeros(length: f64, samples: usize) -> Result<Self> {
        Self::from_samples(length / (samples - 1) as f64, vec![0.0; samples])
    }

    fn rebuild_cumulative(&mut self) {
        let mut acc = 0.0;
        self.cumulative = std::iter::once(0.0)
            .chain(self.values.windows(2).map(|w| {
                acc += 0.5 * (w[0] + w[1]) * self.step;
                acc
            }))
            .collect();
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn z_samples(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|k| k as f64 * self.step)
            .collect()
    }

    pub fn z_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    fn locate(&self, z: f64) -> Result<(usize, f64)> {
        let max = self.z_max();
        let tol = 1e-12 * max;
        if !(z >= -tol && z <= max + tol) {
            return Err(Error::OutOfRange { z, max });
        }
        let x = (z / self.step).clamp(0.0, (self.values.len() - 1) as f64);
        let k = (x.floor() as usize).min(self.values.len() - 2);
        Ok((k, x - k as f64))
    }

    /// `Δβ₀(z)`, rad/m: exact on samples, linear in between.
    pub fn mismatch_at(&self, z: f64) -> Result<f64> {
        let (k, frac) = self.locate(z)?;
        if frac == 0.0 {
            return Ok(self.values[k]);
        }
        if frac == 1.0 {
            return Ok(self.values[k + 1]);
        }
        Ok(self.values[k] * (1.0 - frac) + self.values[k + 1] * frac)
    }

    /// `∫_0^z Δβ₀` of the piecewise-linear interpolant.
    pub fn integral_to(&self, z: f64) -> Result<f64> {
        let (k, frac) = self.locate(z)?;
        let h = frac * self.step;
        let v0 = self.values[k];
        let vz = v0 + (self.values[k + 1] - v0) * frac;
        Ok(self.cumulative[k] + 0.5 * (v0 + vz) * h)
    }

    /// `∫_a^b Δβ₀` of the piecewise-linear interpolant.
    pub fn integral_between(&self, a: f64, b: f64) -> Result<f64> {
        Ok(self.integral_to(b)? - self.integral_to(a)?)
    }

    /// Two-column CSV `z_m,delta_beta0_rad_per_m`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "z_m,delta_beta0_rad_per_m")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", k as f64 * self.step, v)?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        crate::io::write_atomic(path, &buf)
    }
}
