//! Split-step integration of the joint-amplitude evolution equation
//!
//! ```text
//! ∂_z A = (𝒩 + ℒ) A + 𝒮
//! ```
//!
//! where `𝒮` is the spontaneous-scattering source on the diagonal
//! `t_s = t_i`, `ℒ` holds phase mismatch, walk-off and GVD, and `𝒩` is the
//! pump-induced phase modulation. `𝒮` and `ℒ` act in the frequency domain,
//! `𝒩` in the time domain. The source is only ever applied as its spectrum
//!
//! ```text
//! 𝒮̃(ω_s, ω_i) = iγ ∫ dt A_p(z,t) A_q(z,t) exp(i(ω_s + ω_i)t)
//! ```
//!
//! evaluated on the exact sum frequency, so the temporal delta function is
//! never sampled.
//!
//! The symmetric ordering starts with half a scattering step and half a
//! linear step, repeats `[𝒩 full, ℒ half, 𝒮 full, ℒ half]`, and closes
//! with `[𝒩 full, ℒ half, 𝒮 half]`. Every step uses the endpoint trapezoid
//! rule, giving `O(Δz³)` local and `O(Δz²)` global error.

use std::sync::Arc;

use ndarray::{Axis, Zip};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluctuations::MismatchPath;
use crate::grid::{
    apply_outer, recommended_span, Domain, Grid2D, JointAmplitude, SpectralTransform,
};
use crate::pump::PumpPair;

/// Pair probabilities above this break the `⟨vac|ψ⟩ ≈ 1` approximation.
pub const PERTURBATIVE_LIMIT: f64 = 0.3;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dispersion and nonlinearity of the waveguide, seen by the signal and idler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveguideSpec {
    /// m
    pub length: f64,
    /// s/m
    pub beta1_s: f64,
    pub beta1_i: f64,
    /// s²/m
    pub beta2_s: f64,
    pub beta2_i: f64,
    /// Four-wave-mixing nonlinearity, 1/(W·m).
    pub gamma: f64,
    /// Phase-modulation nonlinearities, 1/(W·m).
    pub gamma_sp: f64,
    pub gamma_sq: f64,
    pub gamma_ip: f64,
    pub gamma_iq: f64,
    /// Identical modes and copolarized fields: all γ's must agree.
    pub copolarized: bool,
    /// z-independent part of Δβ₀, rad/m.
    #[serde(default)]
    pub static_mismatch: f64,
    #[serde(skip)]
    pub fluctuation: Option<MismatchPath>,
}

impl WaveguideSpec {
    /// Copolarized fields in identical modes with a common GVD.
    pub fn copolarized(length: f64, beta1_s: f64, beta1_i: f64, beta2: f64, gamma: f64) -> Self {
        WaveguideSpec {
            length,
            beta1_s,
            beta1_i,
            beta2_s: beta2,
            beta2_i: beta2,
            gamma,
            gamma_sp: gamma,
            gamma_sq: gamma,
            gamma_ip: gamma,
            gamma_iq: gamma,
            copolarized: true,
            static_mismatch: 0.0,
            fluctuation: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) || !self.length.is_finite() {
            return Err(Error::param("length", "must be finite and positive"));
        }
        let all = [
            self.beta1_s,
            self.beta1_i,
            self.beta2_s,
            self.beta2_i,
            self.gamma,
            self.gamma_sp,
            self.gamma_sq,
            self.gamma_ip,
            self.gamma_iq,
            self.static_mismatch,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("waveguide", "all parameters must be finite"));
        }
        if self.copolarized {
            let g = self.gamma;
            let npm = [self.gamma_sp, self.gamma_sq, self.gamma_ip, self.gamma_iq];
            // zeroed phase-modulation terms are how NPM is switched off
            if !(npm.iter().all(|&x| x == g) || npm.iter().all(|&x| x == 0.0)) {
                return Err(Error::param(
                    "gamma",
                    "copolarized waveguide needs identical nonlinearities",
                ));
            }
        }
        if let Some(path) = &self.fluctuation {
            if (path.z_max() - self.length).abs() > 1e-9 * self.length {
                return Err(Error::param(
                    "fluctuation",
                    format!(
                        "path covers {} m but the waveguide is {} m",
                        path.z_max(),
                        self.length
                    ),
                ));
            }
        }
        Ok(())
    }

    /// `Δβ₀(z)`: static part plus the fluctuation path, if any.
    pub fn delta_beta0(&self, z: f64) -> Result<f64> {
        let dynamic = match &self.fluctuation {
            Some(p) => p.mismatch_at(z)?,
            None => 0.0,
        };
        Ok(self.static_mismatch + dynamic)
    }

    /// `∫_a^b Δβ₀ dz`.
    pub fn mismatch_integral(&self, a: f64, b: f64) -> Result<f64> {
        let dynamic = match &self.fluctuation {
            Some(p) => p.integral_between(a, b)?,
            None => 0.0,
        };
        Ok(self.static_mismatch * (b - a) + dynamic)
    }

    /// Copy with every disabled effect removed from the parameters.
    pub fn with_effects(&self, effects: &Effects) -> WaveguideSpec {
        let mut wg = self.clone();
        if !effects.walk_off {
            wg.beta1_s = 0.0;
            wg.beta1_i = 0.0;
        }
        if !effects.gvd {
            wg.beta2_s = 0.0;
            wg.beta2_i = 0.0;
        }
        if !effects.npm {
            wg.gamma_sp = 0.0;
            wg.gamma_sq = 0.0;
            wg.gamma_ip = 0.0;
            wg.gamma_iq = 0.0;
        }
        if !effects.fluctuations {
            wg.fluctuation = None;
        }
        wg
    }

    fn has_npm(&self) -> bool {
        [self.gamma_sp, self.gamma_sq, self.gamma_ip, self.gamma_iq]
            .iter()
            .any(|&g| g != 0.0)
    }
}

/// Which terms of the evolution equation are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effects {
    pub scattering: bool,
    pub walk_off: bool,
    pub gvd: bool,
    pub npm: bool,
    pub fluctuations: bool,
}

impl Default for Effects {
    fn default() -> Self {
        Effects::none()
    }
}

impl Effects {
    /// Pair generation and walk-off only: no parasitic effects.
    pub fn none() -> Self {
        Effects {
            scattering: true,
            walk_off: true,
            gvd: false,
            npm: false,
            fluctuations: false,
        }
    }

    /// Parse a comma list of `df`, `npm`, `gvd` (or `none`) on top of
    /// [`Effects::none`].
    pub fn parse_list(list: &str) -> Result<Self> {
        let mut e = Effects::none();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.to_ascii_lowercase().as_str() {
                "df" | "fluctuations" => e.fluctuations = true,
                "npm" => e.npm = true,
                "gvd" | "hod" => e.gvd = true,
                "none" => {}
                other => {
                    return Err(Error::Config(format!(
                        "unknown effect `{other}` (expected df, npm, gvd or none)"
                    )))
                }
            }
        }
        Ok(e)
    }

    /// Short label such as `none`, `npm` or `df+gvd`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.fluctuations {
            parts.push("df");
        }
        if self.npm {
            parts.push("npm");
        }
        if self.gvd {
            parts.push("gvd");
        }
        if parts.is_empty() {
            "none".to_string()
        } else {
            parts.join("+")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StepOrdering {
    /// Symmetric ordering with trapezoidal source.
    #[default]
    Symmetric,
    /// `[𝒮 full, ℒ full, 𝒩 full]` per step; first-order reference.
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Requested step, m. The step actually used divides the length evenly.
    pub dz: f64,
    pub effects: Effects,
    /// Edge-energy fraction above which a result is flagged.
    pub edge_energy_threshold: f64,
    #[serde(default)]
    pub ordering: StepOrdering,
}

impl SolverConfig {
    pub fn new(dz: f64, effects: Effects) -> Self {
        SolverConfig {
            dz,
            effects,
            edge_energy_threshold: 1e-6,
            ordering: StepOrdering::Symmetric,
        }
    }

    /// Step count `round(L/dz)` (at least 2) and the matching step.
    pub fn steps(&self, length: f64) -> Result<(usize, f64)> {
        if !(self.dz > 0.0) || !self.dz.is_finite() {
            return Err(Error::param("dz", "must be finite and positive"));
        }
        let n = ((length / self.dz).round() as usize).max(2);
        Ok((n, length / n as f64))
    }
}

/// Metadata attached to every propagated amplitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagationMeta {
    pub dz: f64,
    pub steps: usize,
    pub effects: Effects,
    pub ordering: StepOrdering,
    pub edge_energy: f64,
    pub edge_flagged: bool,
    pub pair_probability: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Propagation {
    /// Frequency-domain joint amplitude at z = L.
    pub amplitude: JointAmplitude,
    pub meta: PropagationMeta,
}

/// Sum-frequency spectrum of the pump product on a 2n-point time grid at
/// half the field's sample spacing, covering every `ω_s + ω_i` of the grid.
struct SourceSpectrum {
    grid: Grid2D,
    fft: Arc<dyn Fft<f64>>,
    fine_times: Vec<f64>,
    alternate: Vec<f64>,
    post: Vec<Complex64>,
}

impl SourceSpectrum {
    fn new(grid: Grid2D) -> Self {
        let n = grid.n();
        let m = 2 * n;
        let t0 = grid.time(0);
        let half = grid.dt() / 2.0;
        let fft = FftPlanner::new().plan_fft_inverse(m);
        SourceSpectrum {
            grid,
            fft,
            fine_times: (0..m).map(|j| t0 + j as f64 * half).collect(),
            alternate: (0..m)
                .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 })
                .collect(),
            // Ω_k = (k - n)·dω
            post: (0..m)
                .map(|k| Complex64::from_polar(half, (k as f64 - n as f64) * grid.dw() * t0))
                .collect(),
        }
    }

    /// `iγ·FT[A_p A_q](Ω_k)` for `Ω_k = (k - n)·dω`, `k ∈ 0..2n`.
    fn evaluate(&self, pumps: &PumpPair, gamma: f64, z: f64) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = self
            .fine_times
            .iter()
            .zip(&self.alternate)
            .map(|(&t, &s)| pumps.product(z, t) * s)
            .collect();
        self.fft.process(&mut buf);
        for (v, p) in buf.iter_mut().zip(&self.post) {
            *v *= *p * I * gamma;
        }
        buf
    }

    /// Add `weight·𝒮̃` to a frequency-domain matrix; entry `[a, b]` has
    /// sum frequency index `a + b`.
    fn accumulate(
        &self,
        values: &mut ndarray::Array2<Complex64>,
        source: &[Complex64],
        weight: f64,
    ) {
        values
            .axis_iter_mut(Axis(0))
            .into_par_iter()
            .enumerate()
            .for_each(|(a, mut row)| {
                for (b, v) in row.iter_mut().enumerate() {
                    *v += source[a + b] * weight;
                }
            });
        debug_assert_eq!(source.len(), 2 * self.grid.n());
    }
}

/// Frequency-domain spontaneous-scattering field `𝒮̃(z; ω_s, ω_i)`.
pub fn scattering_term(
    pumps: &PumpPair,
    wg: &WaveguideSpec,
    z: f64,
    grid: &Grid2D,
) -> JointAmplitude {
    let source = SourceSpectrum::new(*grid);
    let spectrum = source.evaluate(pumps, wg.gamma, z);
    let mut out = JointAmplitude::zeros(*grid, Domain::Frequency);
    source.accumulate(out.values_mut(), &spectrum, 1.0);
    out
}

/// One scattering step: `Ã += 𝒮̃(z)·dz_eff`.
pub fn scattering_step(
    mut a: JointAmplitude,
    pumps: &PumpPair,
    wg: &WaveguideSpec,
    z: f64,
    dz_eff: f64,
) -> Result<JointAmplitude> {
    a.expect_domain(Domain::Frequency)?;
    let source = SourceSpectrum::new(*a.grid());
    let spectrum = source.evaluate(pumps, wg.gamma, z);
    source.accumulate(a.values_mut(), &spectrum, dz_eff);
    Ok(a)
}

/// Linear propagation from `z0` to `z1`, trapezoidal in Δβ₀.
pub fn linear_step(
    mut a: JointAmplitude,
    wg: &WaveguideSpec,
    z0: f64,
    z1: f64,
) -> Result<JointAmplitude> {
    a.expect_domain(Domain::Frequency)?;
    let ops = LinearFactors::new(a.grid(), wg, z1 - z0);
    let mean = 0.5 * (wg.delta_beta0(z0)? + wg.delta_beta0(z1)?);
    ops.apply(a.values_mut(), mean);
    Ok(a)
}

/// Phase modulation from `z0` to `z1`, trapezoidal in the pump intensities.
pub fn nonlinear_step(
    mut a: JointAmplitude,
    pumps: &PumpPair,
    wg: &WaveguideSpec,
    z0: f64,
    z1: f64,
) -> Result<JointAmplitude> {
    a.expect_domain(Domain::Time)?;
    let times = a.grid().times();
    let (row, col) = npm_factors(&times, pumps, wg, z0, z1);
    apply_outer(a.values_mut(), &row, &col);
    Ok(a)
}

/// Separable `exp(i[β₁ω + β₂ω²/2]·h)` factors for a fixed step length `h`.
struct LinearFactors {
    h: f64,
    signal: Vec<Complex64>,
    idler: Vec<Complex64>,
}

impl LinearFactors {
    fn new(grid: &Grid2D, wg: &WaveguideSpec, h: f64) -> Self {
        let omegas = grid.omegas();
        let factor = |b1: f64, b2: f64| -> Vec<Complex64> {
            omegas
                .iter()
                .map(|&w| Complex64::from_polar(1.0, (b1 * w + 0.5 * b2 * w * w) * h))
                .collect()
        };
        LinearFactors {
            h,
            signal: factor(wg.beta1_s, wg.beta2_s),
            idler: factor(wg.beta1_i, wg.beta2_i),
        }
    }

    fn apply(&self, values: &mut ndarray::Array2<Complex64>, mean_mismatch: f64) {
        let global = Complex64::from_polar(1.0, mean_mismatch * self.h);
        Zip::from(values.rows_mut())
            .and(&self.signal)
            .par_for_each(|mut line, &rs| {
                let rf = rs * global;
                for (v, &cf) in line.iter_mut().zip(&self.idler) {
                    *v *= rf * cf;
                }
            });
    }
}

/// Per-axis phase factors of the trapezoidal phase-modulation step.
fn npm_factors(
    times: &[f64],
    pumps: &PumpPair,
    wg: &WaveguideSpec,
    z0: f64,
    z1: f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let h = z1 - z0;
    let axis = |gp: f64, gq: f64| -> Vec<Complex64> {
        times
            .iter()
            .map(|&t| {
                let (p0, q0) = pumps.npm_intensities(z0, t);
                let (p1, q1) = pumps.npm_intensities(z1, t);
                let theta0 = 2.0 * (gp * p0 + gq * q0);
                let theta1 = 2.0 * (gp * p1 + gq * q1);
                Complex64::from_polar(1.0, 0.5 * (theta0 + theta1) * h)
            })
            .collect()
    };
    (
        axis(wg.gamma_sp, wg.gamma_sq),
        axis(wg.gamma_ip, wg.gamma_iq),
    )
}

/// Reusable integrator for one waveguide, pump pair, grid and configuration.
pub struct Stepper {
    wg: WaveguideSpec,
    pumps: PumpPair,
    grid: Grid2D,
    config: SolverConfig,
    steps: usize,
    dz: f64,
    transform: SpectralTransform,
    source: SourceSpectrum,
    half: LinearFactors,
    full: LinearFactors,
    times: Vec<f64>,
}

impl Stepper {
    pub fn new(
        wg: &WaveguideSpec,
        pumps: &PumpPair,
        config: &SolverConfig,
        grid: &Grid2D,
    ) -> Result<Self> {
        wg.validate()?;
        pumps.validate()?;
        let wg = wg.with_effects(&config.effects);
        let (steps, dz) = config.steps(wg.length)?;
        Ok(Stepper {
            half: LinearFactors::new(grid, &wg, dz / 2.0),
            full: LinearFactors::new(grid, &wg, dz),
            transform: SpectralTransform::new(*grid),
            source: SourceSpectrum::new(*grid),
            times: grid.times(),
            wg,
            pumps: *pumps,
            grid: *grid,
            config: *config,
            steps,
            dz,
        })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    /// Effective waveguide after disabled effects were stripped.
    pub fn waveguide(&self) -> &WaveguideSpec {
        &self.wg
    }

    pub fn set_pumps(&mut self, pumps: PumpPair) {
        self.pumps = pumps;
    }

    fn scatter(&self, values: &mut ndarray::Array2<Complex64>, z: f64, weight: f64) {
        if !self.config.effects.scattering {
            return;
        }
        let s = self.source.evaluate(&self.pumps, self.wg.gamma, z);
        self.source.accumulate(values, &s, weight);
    }

    fn linear(
        &self,
        ops: &LinearFactors,
        values: &mut ndarray::Array2<Complex64>,
        z0: f64,
    ) -> Result<()> {
        let z1 = (z0 + ops.h).min(self.wg.length);
        let mean = 0.5 * (self.wg.delta_beta0(z0)? + self.wg.delta_beta0(z1)?);
        ops.apply(values, mean);
        Ok(())
    }

    fn nonlinear(&self, values: &mut ndarray::Array2<Complex64>, z0: f64, z1: f64) {
        if !self.wg.has_npm() {
            return;
        }
        self.transform.inverse_in_place(values);
        let (row, col) = npm_factors(&self.times, &self.pumps, &self.wg, z0, z1);
        apply_outer(values, &row, &col);
        self.transform.forward_in_place(values);
    }

    /// Integrate from vacuum at z = 0 to z = L.
    pub fn run(&self) -> Result<Propagation> {
        let mut a = JointAmplitude::zeros(self.grid, Domain::Frequency);
        let l = self.wg.length;
        let dz = self.dz;
        let h = dz / 2.0;
        let n = self.steps;
        {
            let v = a.values_mut();
            match self.config.ordering {
                StepOrdering::Symmetric => {
                    self.scatter(v, 0.0, h);
                    self.linear(&self.half, v, 0.0)?;
                    for k in 0..n - 1 {
                        let z = k as f64 * dz;
                        self.nonlinear(v, z, z + dz);
                        self.linear(&self.half, v, z + h)?;
                        self.scatter(v, z + dz, dz);
                        self.linear(&self.half, v, z + dz)?;
                    }
                    let z = (n - 1) as f64 * dz;
                    self.nonlinear(v, z, l);
                    self.linear(&self.half, v, l - h)?;
                    self.scatter(v, l, h);
                }
                StepOrdering::Sequential => {
                    for k in 0..n {
                        let z = k as f64 * dz;
                        self.scatter(v, z, dz);
                        self.linear(&self.full, v, z)?;
                        self.nonlinear(v, z, (z + dz).min(l));
                    }
                }
            }
        }
        if !a.is_finite() {
            return Err(Error::NonFinite("propagated amplitude".into()));
        }
        self.finish(a)
    }

    fn finish(&self, a: JointAmplitude) -> Result<Propagation> {
        let edge_energy = {
            let mut t = a.values().clone();
            self.transform.inverse_in_place(&mut t);
            JointAmplitude::new(self.grid, Domain::Time, t)?.edge_energy_fraction()?
        };
        let pair_probability = a.probability();
        let mut warnings = Vec::new();
        let edge_flagged = edge_energy > self.config.edge_energy_threshold;
        if edge_flagged {
            warnings.push(format!(
                "{:.3e} of |A|² lies in the outer 5% of the time window (threshold {:.1e})",
                edge_energy, self.config.edge_energy_threshold
            ));
        }
        if pair_probability > PERTURBATIVE_LIMIT {
            warnings.push(format!(
                "pair probability {pair_probability:.3} exceeds {PERTURBATIVE_LIMIT}; perturbative approximation is doubtful"
            ));
        }
        let span_needed = recommended_span(self.pumps.duration(), self.walk_off_spread());
        if self.grid.time_span() < span_needed {
            warnings.push(format!(
                "time window {:.3e} s is below the recommended {:.3e} s",
                self.grid.time_span(),
                span_needed
            ));
        }
        for w in &warnings {
            log::warn!("{w}");
        }
        Ok(Propagation {
            amplitude: a,
            meta: PropagationMeta {
                dz: self.dz,
                steps: self.steps,
                effects: self.config.effects,
                ordering: self.config.ordering,
                edge_energy,
                edge_flagged,
                pair_probability,
                warnings,
            },
        })
    }

    /// Largest relative walk-off among the four fields over the length.
    fn walk_off_spread(&self) -> f64 {
        let b = [
            self.wg.beta1_s,
            self.wg.beta1_i,
            self.pumps.p().beta1,
            self.pumps.q().beta1,
        ];
        let hi = b.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = b.iter().cloned().fold(f64::INFINITY, f64::min);
        (hi - lo) * self.wg.length
    }
}

/// Propagate from vacuum to the waveguide end.
pub fn propagate(
    wg: &WaveguideSpec,
    pumps: &PumpPair,
    config: &SolverConfig,
    grid: &Grid2D,
) -> Result<Propagation> {
    Stepper::new(wg, pumps, config, grid)?.run()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    /// Factor applied to every pump peak power.
    pub scale: f64,
    pub pair_probability: f64,
    pub iterations: usize,
}

/// Relative tolerance on the calibrated pair probability.
pub const CALIBRATION_TOLERANCE: f64 = 1e-4;

/// Find the power scale `s` with `measure(s) = target_r`.
///
/// Each update assumes `R ∝ s²`, which is exact without phase modulation
/// and close with it; steps that leave the current bracket fall back to
/// bisection. At most 30 evaluations after the probe.
pub fn calibrate_with(
    mut measure: impl FnMut(f64) -> Result<f64>,
    target_r: f64,
) -> Result<Calibration> {
    if !(target_r > 0.0 && target_r < 1.0) {
        return Err(Error::param(
            "target_r",
            format!("must lie in (0, 1), got {target_r}"),
        ));
    }
    let mut s = 1.0;
    let mut r = measure(s)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Calibration(format!(
            "probe run produced pair probability {r}; target {target_r} cannot be bracketed"
        )));
    }
    let mut lo = 0.0f64;
    let mut hi: Option<f64> = None;
    for it in 1..=30 {
        let s_next = s * (target_r / r).sqrt();
        if r < target_r {
            lo = lo.max(s);
        } else {
            hi = Some(hi.map_or(s, |h: f64| h.min(s)));
        }
        s = match hi {
            Some(h) if !(s_next > lo && s_next < h) => 0.5 * (lo + h),
            _ => s_next,
        };
        r = measure(s)?;
        if !r.is_finite() {
            return Err(Error::NonFinite(
                "pair probability during calibration".into(),
            ));
        }
        if (r / target_r - 1.0).abs() <= CALIBRATION_TOLERANCE {
            return Ok(Calibration {
                scale: s,
                pair_probability: r,
                iterations: it,
            });
        }
    }
    Err(Error::Calibration(format!(
        "no convergence after 30 iterations (last R = {r}, target {target_r})"
    )))
}

/// Scale the pump powers so the propagated pair probability equals `target_r`.
pub fn calibrate_gain(
    wg: &WaveguideSpec,
    pumps: &PumpPair,
    config: &SolverConfig,
    grid: &Grid2D,
    target_r: f64,
) -> Result<Calibration> {
    if !(target_r > 0.0 && target_r < 1.0) {
        return Err(Error::param(
            "target_r",
            format!("must lie in (0, 1), got {target_r}"),
        ));
    }
    let mut stepper = Stepper::new(wg, pumps, config, grid)?;
    calibrate_with(
        |s| {
            stepper.set_pumps(pumps.scaled(s));
            Ok(stepper.run()?.meta.pair_probability)
        },
        target_r,
    )
}

#[cfg(test)]
fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}
