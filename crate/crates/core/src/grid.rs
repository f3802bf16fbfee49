//! Square time/frequency grids for the two-photon plane and the transforms
//! between them.
//!
//! Fourier convention: `f(ω) = ∫ dt f(t) exp(iωt)`, so the forward
//! (time → frequency) transform uses the `+i` kernel. On the grid this is
//!
//! ```text
//! Ã(ω_m) = dt · Σ_k A(t_k) exp(i ω_m t_k)
//! A(t_k) = dω/(2π) · Σ_m Ã(ω_m) exp(-i ω_m t_k)
//! ```
//!
//! with `t_k = t_center + (k - n/2)·dt` and `ω_m = (m - n/2)·dω`. Both axes
//! are stored in ascending order, so frequency index `n/2` is zero detuning.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{Array2, Axis, Zip};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform discretization shared by the signal and idler axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid2D {
    n: usize,
    dt: f64,
    t_center: f64,
}

impl Grid2D {
    pub fn new(n: usize, time_span: f64, t_center: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::GridSize(n));
        }
        if !(time_span > 0.0) || !time_span.is_finite() {
            return Err(Error::param(
                "time_span",
                format!("must be positive, got {time_span}"),
            ));
        }
        if !t_center.is_finite() {
            return Err(Error::param("t_center", "must be finite"));
        }
        Ok(Grid2D {
            n,
            dt: time_span / n as f64,
            t_center,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Angular-frequency step `2π/(n·dt)`.
    pub fn dw(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dt)
    }

    pub fn time_span(&self) -> f64 {
        self.n as f64 * self.dt
    }

    pub fn t_center(&self) -> f64 {
        self.t_center
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t_center + (k as f64 - (self.n / 2) as f64) * self.dt
    }

    pub fn omega(&self, m: usize) -> f64 {
        (m as f64 - (self.n / 2) as f64) * self.dw()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.time(k)).collect()
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.omega(m)).collect()
    }

    /// Largest representable detuning, `π/dt`.
    pub fn omega_max(&self) -> f64 {
        PI / self.dt
    }

    /// Sample coordinates along one axis in the given domain.
    pub fn axis(&self, domain: Domain) -> Vec<f64> {
        match domain {
            Domain::Time => self.times(),
            Domain::Frequency => self.omegas(),
        }
    }

    /// Area element of one pixel, including the `(2π)⁻²` of the inverse
    /// transform in the frequency domain, so that `Σ|A|²·measure` is a
    /// probability in either domain.
    pub fn measure(&self, domain: Domain) -> f64 {
        match domain {
            Domain::Time => self.dt * self.dt,
            Domain::Frequency => {
                let d = self.dw() / (2.0 * PI);
                d * d
            }
        }
    }
}

/// Minimum time window for a field of duration `pulse_duration` that walks
/// off by `walk_off` over the waveguide. Smaller windows are not rejected;
/// [`JointAmplitude::edge_energy_fraction`] is the actual containment check.
pub fn recommended_span(pulse_duration: f64, walk_off: f64) -> f64 {
    walk_off.abs() + 16.0 * pulse_duration
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Domain {
    Time,
    Frequency,
}

/// Joint temporal or spectral amplitude of a photon pair.
///
/// Row index is the signal coordinate, column index the idler coordinate.
/// Time-domain values carry units of s⁻¹ so `∬|A|² dt_s dt_i` is the pair
/// probability.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAmplitude {
    grid: Grid2D,
    domain: Domain,
    values: Array2<Complex64>,
}

impl JointAmplitude {
    pub fn new(grid: Grid2D, domain: Domain, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != (grid.n, grid.n) {
            return Err(Error::param(
                "values",
                format!(
                    "shape {:?} does not match grid size {}",
                    values.dim(),
                    grid.n
                ),
            ));
        }
        Ok(JointAmplitude {
            grid,
            domain,
            values,
        })
    }

    pub fn zeros(grid: Grid2D, domain: Domain) -> Self {
        JointAmplitude {
            grid,
            domain,
            values: Array2::zeros((grid.n, grid.n)),
        }
    }

    /// Sample `f(x_s, x_i)` on the grid, where `x` is time or angular
    /// frequency depending on `domain`.
    pub fn from_fn(grid: Grid2D, domain: Domain, f: impl Fn(f64, f64) -> Complex64 + Sync) -> Self {
        let axis = grid.axis(domain);
        let mut values = Array2::zeros((grid.n, grid.n));
        values
            .axis_iter_mut(Axis(0))
            .into_par_iter()
            .enumerate()
            .for_each(|(r, mut row)| {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = f(axis[r], axis[c]);
                }
            });
        JointAmplitude {
            grid,
            domain,
            values,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<Complex64> {
        self.values
    }

    /// Plain Frobenius norm squared of the sample matrix.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `∬|A|²` with the grid measure of the current domain.
    pub fn probability(&self) -> f64 {
        self.norm_sqr() * self.grid.measure(self.domain)
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn to_frequency(&self) -> Result<Self> {
        SpectralTransform::new(self.grid).forward(self.clone())
    }

    pub fn to_time(&self) -> Result<Self> {
        SpectralTransform::new(self.grid).inverse(self.clone())
    }

    /// Fraction of `|A|²` (time domain) lying in the outer 5% of the window
    /// along either axis.
    pub fn edge_energy_fraction(&self) -> Result<f64> {
        let time = match self.domain {
            Domain::Time => self.clone(),
            Domain::Frequency => self.to_time()?,
        };
        let n = self.grid.n;
        let band = ((n as f64) * 0.05).ceil() as usize;
        let is_edge = |k: usize| k < band || k >= n - band;
        let total = time.norm_sqr();
        if total == 0.0 {
            return Ok(0.0);
        }
        let mut edge = 0.0;
        for ((r, c), v) in time.values.indexed_iter() {
            if is_edge(r) || is_edge(c) {
                edge += v.norm_sqr();
            }
        }
        Ok(edge / total)
    }

    pub(crate) fn expect_domain(&self, expected: Domain) -> Result<()> {
        if self.domain != expected {
            return Err(Error::WrongDomain {
                expected,
                found: self.domain,
            });
        }
        Ok(())
    }
}

/// Planned 1D transforms for one grid, applied along both axes.
#[derive(Clone)]
pub struct SpectralTransform {
    grid: Grid2D,
    plus_kernel: Arc<dyn Fft<f64>>,
    minus_kernel: Arc<dyn Fft<f64>>,
    // (-1)^k, undoing the centred index offset
    alternate: Vec<f64>,
    // dt·exp(iω_m t_0)
    to_freq_post: Vec<Complex64>,
    // exp(-iω_m t_0)
    to_time_pre: Vec<Complex64>,
}

impl SpectralTransform {
    pub fn new(grid: Grid2D) -> Self {
        let n = grid.n;
        let mut planner = FftPlanner::new();
        let t0 = grid.time(0);
        SpectralTransform {
            grid,
            plus_kernel: planner.plan_fft_inverse(n),
            minus_kernel: planner.plan_fft_forward(n),
            alternate: (0..n)
                .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
                .collect(),
            to_freq_post: (0..n)
                .map(|m| Complex64::from_polar(grid.dt, grid.omega(m) * t0))
                .collect(),
            to_time_pre: (0..n)
                .map(|m| Complex64::from_polar(1.0, -grid.omega(m) * t0))
                .collect(),
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// Time → frequency.
    pub fn forward(&self, mut a: JointAmplitude) -> Result<JointAmplitude> {
        a.expect_domain(Domain::Time)?;
        self.check_grid(&a)?;
        self.forward_in_place(&mut a.values);
        a.domain = Domain::Frequency;
        Ok(a)
    }

    /// Frequency → time.
    pub fn inverse(&self, mut a: JointAmplitude) -> Result<JointAmplitude> {
        a.expect_domain(Domain::Frequency)?;
        self.check_grid(&a)?;
        self.inverse_in_place(&mut a.values);
        a.domain = Domain::Time;
        Ok(a)
    }

    fn check_grid(&self, a: &JointAmplitude) -> Result<()> {
        if a.grid != self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub(crate) fn forward_in_place(&self, values: &mut Array2<Complex64>) {
        self.rows_to_frequency(values);
        let mut t = values.t().as_standard_layout().into_owned();
        self.rows_to_frequency(&mut t);
        values.assign(&t.t());
    }

    pub(crate) fn inverse_in_place(&self, values: &mut Array2<Complex64>) {
        self.rows_to_time(values);
        let mut t = values.t().as_standard_layout().into_owned();
        self.rows_to_time(&mut t);
        values.assign(&t.t());
    }

    fn rows_to_frequency(&self, values: &mut Array2<Complex64>) {
        values
            .axis_iter_mut(Axis(0))
            .into_par_iter()
            .for_each(|mut row| {
                let row = row.as_slice_mut().expect("standard layout");
                for (v, s) in row.iter_mut().zip(&self.alternate) {
                    *v *= *s;
                }
                self.plus_kernel.process(row);
                for (v, p) in row.iter_mut().zip(&self.to_freq_post) {
                    *v *= *p;
                }
            });
    }

    fn rows_to_time(&self, values: &mut Array2<Complex64>) {
        let scale = 1.0 / (self.grid.n as f64 * self.grid.dt);
        values
            .axis_iter_mut(Axis(0))
            .into_par_iter()
            .for_each(|mut row| {
                let row = row.as_slice_mut().expect("standard layout");
                for (v, p) in row.iter_mut().zip(&self.to_time_pre) {
                    *v *= *p;
                }
                self.minus_kernel.process(row);
                for (v, s) in row.iter_mut().zip(&self.alternate) {
                    *v *= *s * scale;
                }
            });
    }
}

/// Multiply `values[r, c]` by `row[r] · col[c]`.
pub(crate) fn apply_outer(values: &mut Array2<Complex64>, row: &[Complex64], col: &[Complex64]) {
    Zip::from(values.rows_mut())
        .and(row)
        .par_for_each(|mut line, &rf| {
            for (v, &cf) in line.iter_mut().zip(col) {
                *v *= rf * cf;
            }
        });
}

impl std::fmt::Debug for SpectralTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralTransform")
            .field("grid", &self.grid)
            .finish()
    }
}
