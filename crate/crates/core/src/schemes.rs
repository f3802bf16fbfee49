//! Benchmark source designs.
//!
//! Both presets work in the frame moving with the (first) pump, so
//! `β₁p = 0`. Common parameters: `T_p = 1/σ = 1 ps`, `Δβ₁ = 10 ps/m` between
//! non-copropagating fields, `β₂ = 50×10⁻²⁶ s²/m` for every field when GVD is
//! switched on, all nonlinearities equal, perfect phase matching at band
//! centre, and pump powers calibrated to a pair probability `R = 0.2`.
//!
//! * **Asymmetric**, 10 m: one degenerate pump, signal group-velocity
//!   matched to it (`β₁s = 0`), idler walking off (`β₁i = Δβ₁`).
//! * **Collision**, 1 m: two pumps with slownesses `0` and `Δβ₁`, timed to
//!   overlap at the midpoint, each photon matched to one pump
//!   (`β₁s = β₁p`, `β₁i = β₁q`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{schmidt_report, SchmidtReport};
use crate::analytic::{hod_jsa, no_gvd_jta};
use crate::error::{Error, Result};
use crate::fluctuations::{half_step_grid, sample_path, FluctuationModel};
use crate::grid::{Grid2D, JointAmplitude};
use crate::propagator::{
    calibrate_with, Calibration, Effects, PropagationMeta, SolverConfig, StepOrdering, Stepper,
    WaveguideSpec,
};
use crate::pump::{PumpField, PumpPair};

pub const SIGMA: f64 = 1e12;
pub const DELTA_BETA1: f64 = 1e-11;
pub const BETA2: f64 = 50e-26;
pub const GAMMA: f64 = 1e-3;
pub const TARGET_R: f64 = 0.2;
pub const CORR_LENGTH: f64 = 0.1;
/// Default fluctuation strength as a fraction of σ.
pub const SIGMA_DW_RATIO: f64 = 0.5;
/// Default sample spacing, 0.3125 ps, which keeps the frequency window at
/// `|ω| < 10¹³ rad/s`.
pub const DEFAULT_DT: f64 = 0.3125e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    Asymmetric,
    Collision,
    Custom,
}

impl FromStr for SchemeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "asymmetric" => Ok(SchemeName::Asymmetric),
            "collision" => Ok(SchemeName::Collision),
            "custom" => Ok(SchemeName::Custom),
            other => Err(Error::Config(format!(
                "unknown scheme `{other}` (expected asymmetric or collision)"
            ))),
        }
    }
}

impl fmt::Display for SchemeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeName::Asymmetric => "asymmetric",
            SchemeName::Collision => "collision",
            SchemeName::Custom => "custom",
        })
    }
}

/// Optional replacements for preset parameters, all SI.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeOverrides {
    pub sigma: Option<f64>,
    pub delta_beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub gamma: Option<f64>,
    pub target_r: Option<f64>,
    pub sigma_dw: Option<f64>,
    pub corr_length: Option<f64>,
    pub static_mismatch: Option<f64>,
    pub grid_n: Option<usize>,
    pub time_span: Option<f64>,
    pub t_center: Option<f64>,
    pub dz: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridHint {
    pub n: usize,
    pub time_span: f64,
    pub t_center: f64,
}

impl GridHint {
    pub fn build(&self) -> Result<Grid2D> {
        Grid2D::new(self.n, self.time_span, self.t_center)
    }
}

/// A fully resolved simulation setup.
///
/// `wg` and `pumps` hold every dispersion parameter; `effects` decides
/// which of them act. Pump GVD follows the `gvd` toggle like the photons'.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub name: SchemeName,
    pub wg: WaveguideSpec,
    pub pumps: PumpPair,
    pub fluctuations: FluctuationModel,
    pub grid: GridHint,
    pub dz: f64,
    pub target_r: f64,
    pub effects: Effects,
    #[serde(default = "default_edge_threshold")]
    pub edge_energy_threshold: f64,
    #[serde(default)]
    pub ordering: StepOrdering,
    /// Resize the grid to the active effects; cleared by explicit grid settings.
    #[serde(default)]
    pub auto_grid: bool,
}

fn default_edge_threshold() -> f64 {
    1e-6
}

/// How a scheme is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    SplitStep,
    /// Closed-form solution; collision coordinates without GVD, the sinc
    /// solution with GVD (degenerate pump only).
    Analytic,
}

/// Outcome of one calibrated evaluation.
#[derive(Debug, Clone)]
pub struct SchemeRun {
    /// Frequency-domain joint amplitude.
    pub amplitude: JointAmplitude,
    pub report: SchmidtReport,
    pub calibration: Calibration,
    pub seed: u64,
    pub method: Method,
    /// Present for split-step runs.
    pub propagation: Option<PropagationMeta>,
}

fn pick(v: Option<f64>, default: f64) -> f64 {
    v.unwrap_or(default)
}

fn check_length(length: f64) -> Result<()> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::param("length", "must be finite and positive"));
    }
    Ok(())
}

/// Power-of-two grid at the default spacing covering `width` seconds.
fn grid_for(width: f64, o: &SchemeOverrides, t_center: f64) -> GridHint {
    let t_center = o.t_center.unwrap_or(t_center);
    let n = o.grid_n.unwrap_or_else(|| {
        ((width / DEFAULT_DT).ceil() as usize)
            .next_power_of_two()
            .max(64)
    });
    GridHint {
        n,
        time_span: o.time_span.unwrap_or(n as f64 * DEFAULT_DT),
        t_center,
    }
}

fn auto_grid(o: &SchemeOverrides) -> bool {
    o.grid_n.is_none() && o.time_span.is_none() && o.t_center.is_none()
}

fn fluctuation_model(o: &SchemeOverrides, sigma: f64, db1: f64) -> FluctuationModel {
    FluctuationModel {
        sigma_dw: pick(o.sigma_dw, SIGMA_DW_RATIO * sigma),
        corr_length: pick(o.corr_length, CORR_LENGTH),
        seed: 0,
        delta_beta1: db1,
    }
}

/// Degenerate pump with the signal matched to it and the idler walking off.
///
/// The initial pump power follows from the collision-coordinate solution,
/// `R ≈ (γP)²·L·√(π/2)/(Δβ₁σ)`, so the calibration starts close.
pub fn asymmetric_scheme(length: f64, o: &SchemeOverrides) -> Result<SchemeSpec> {
    check_length(length)?;
    let sigma = pick(o.sigma, SIGMA);
    let db1 = pick(o.delta_beta1, DELTA_BETA1);
    let gamma = pick(o.gamma, GAMMA);
    let target_r = pick(o.target_r, TARGET_R);
    let gp = (target_r * db1.abs() * sigma / (length * (std::f64::consts::PI / 2.0).sqrt())).sqrt();
    let b2 = pick(o.beta2, BETA2);
    let pump = PumpField::new(gp / gamma, sigma, 0.0, b2, 0.0)?;
    let mut wg = WaveguideSpec::copolarized(length, 0.0, db1, b2, gamma);
    wg.static_mismatch = pick(o.static_mismatch, 0.0);
    let spec = SchemeSpec {
        name: SchemeName::Asymmetric,
        wg,
        pumps: PumpPair::degenerate(pump),
        fluctuations: fluctuation_model(o, sigma, db1),
        grid: grid_for(db1.abs() * length + 60.0 / sigma, o, db1 * length / 2.0),
        dz: pick(o.dz, 0.01),
        target_r,
        effects: Effects::none(),
        edge_energy_threshold: default_edge_threshold(),
        ordering: StepOrdering::Symmetric,
        auto_grid: auto_grid(o),
    };
    spec.validate()?;
    Ok(spec)
}

/// Two pumps crossing at the midpoint, each photon matched to one of them.
///
/// Initial power from `R ≈ π(γP)²/(Δβ₁σ)²`, the complete-collision limit.
pub fn collision_scheme(length: f64, o: &SchemeOverrides) -> Result<SchemeSpec> {
    check_length(length)?;
    let sigma = pick(o.sigma, SIGMA);
    let db1 = pick(o.delta_beta1, DELTA_BETA1);
    let gamma = pick(o.gamma, GAMMA);
    let target_r = pick(o.target_r, TARGET_R);
    let gp = db1.abs() * sigma * (target_r / std::f64::consts::PI).sqrt();
    let b2 = pick(o.beta2, BETA2);
    let p = PumpField::new(gp / gamma, sigma, 0.0, b2, 0.0)?;
    let q = PumpField::new(gp / gamma, sigma, db1, b2, -db1 * length / 2.0)?;
    collision_from_pumps(length, p, q, o, gamma, target_r)
}

/// Collision geometry for arbitrary pump slownesses: photons inherit the
/// pump slownesses and the launch times are set to meet at `L/2`.
pub fn collision_from_pumps(
    length: f64,
    p: PumpField,
    q: PumpField,
    o: &SchemeOverrides,
    gamma: f64,
    target_r: f64,
) -> Result<SchemeSpec> {
    check_length(length)?;
    let db1 = q.beta1 - p.beta1;
    if db1 == 0.0 {
        return Err(Error::DegenerateWalkOff);
    }
    let mut p = p;
    let mut q = q;
    // centres meet at z = L/2 and t = 0 in the p frame
    p.t_launch = -p.beta1 * length / 2.0;
    q.t_launch = -q.beta1 * length / 2.0;
    let mut wg = WaveguideSpec::copolarized(length, p.beta1, q.beta1, p.beta2, gamma);
    wg.static_mismatch = pick(o.static_mismatch, 0.0);
    let lo = p.beta1.min(q.beta1) * length;
    let hi = p.beta1.max(q.beta1) * length;
    let spec = SchemeSpec {
        name: SchemeName::Collision,
        wg,
        pumps: PumpPair::dual(p, q),
        fluctuations: fluctuation_model(o, p.sigma, db1),
        grid: grid_for(hi - lo + 30.0 / p.sigma, o, 0.25 * (lo + hi)),
        dz: pick(o.dz, 0.005),
        target_r,
        effects: Effects::none(),
        edge_energy_threshold: default_edge_threshold(),
        ordering: StepOrdering::Symmetric,
        auto_grid: auto_grid(o),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn build_scheme(name: SchemeName, length: f64, o: &SchemeOverrides) -> Result<SchemeSpec> {
    match name {
        SchemeName::Asymmetric => asymmetric_scheme(length, o),
        SchemeName::Collision => collision_scheme(length, o),
        SchemeName::Custom => Err(Error::Config(
            "custom setups need an explicit physics block".into(),
        )),
    }
}

impl SchemeSpec {
    pub fn validate(&self) -> Result<()> {
        self.wg.validate()?;
        self.pumps.validate()?;
        self.fluctuations.validate()?;
        self.grid.build()?;
        if !(self.dz > 0.0) || !self.dz.is_finite() {
            return Err(Error::param("dz", "must be finite and positive"));
        }
        if !(self.target_r > 0.0 && self.target_r < 1.0) {
            return Err(Error::param("target_r", "must lie in (0, 1)"));
        }
        if !(self.edge_energy_threshold > 0.0) {
            return Err(Error::param("edge_energy_threshold", "must be positive"));
        }
        Ok(())
    }

    pub fn with_effects(mut self, effects: Effects) -> Self {
        self.effects = effects;
        self.refresh_grid();
        self
    }

    /// Same setup at another length, preserving the scheme's geometry.
    pub fn with_length(&self, length: f64) -> Result<Self> {
        check_length(length)?;
        let mut s = self.clone();
        s.wg.length = length;
        match self.name {
            SchemeName::Collision => {
                let (p, q) = (*self.pumps.p(), *self.pumps.q());
                let rebuilt = collision_from_pumps(
                    length,
                    p,
                    q,
                    &SchemeOverrides::default(),
                    self.wg.gamma,
                    self.target_r,
                )?;
                s.pumps = rebuilt.pumps;
            }
            // keeps the first calibration guess close: R ∝ P²L
            SchemeName::Asymmetric => s.pumps = self.pumps.scaled((self.wg.length / length).sqrt()),
            SchemeName::Custom => {}
        }
        s.refresh_grid();
        Ok(s)
    }

    fn refresh_grid(&mut self) {
        if !self.auto_grid {
            return;
        }
        let l = self.wg.length;
        let sigma = self.pumps.p().sigma;
        let (width, centre) = match self.name {
            SchemeName::Asymmetric => {
                let db = self.wg.beta1_i - self.wg.beta1_s;
                let mut width = db.abs() * l + 60.0 / sigma;
                if self.effects.gvd {
                    // the walking-off idler spreads by about |β₂|·ω_max·L
                    width += self.wg.beta2_i.abs() * std::f64::consts::PI / DEFAULT_DT * l;
                }
                (width, self.wg.beta1_s * l + db * l / 2.0)
            }
            SchemeName::Collision => {
                let lo = self.wg.beta1_s.min(self.wg.beta1_i) * l;
                let hi = self.wg.beta1_s.max(self.wg.beta1_i) * l;
                (hi - lo + 30.0 / sigma, 0.25 * (lo + hi))
            }
            SchemeName::Custom => return,
        };
        self.grid = grid_for(width, &SchemeOverrides::default(), centre);
    }

    pub fn grid(&self) -> Result<Grid2D> {
        self.grid.build()
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            dz: self.dz,
            effects: self.effects,
            edge_energy_threshold: self.edge_energy_threshold,
            ordering: self.ordering,
        }
    }

    /// Pumps with their GVD kept or removed per the `gvd` toggle.
    pub fn active_pumps(&self) -> PumpPair {
        let gvd = self.effects.gvd;
        let set = |f: &PumpField| PumpField {
            beta2: if gvd { f.beta2 } else { 0.0 },
            ..*f
        };
        match self.pumps {
            PumpPair::Degenerate { pump } => PumpPair::degenerate(set(&pump)),
            PumpPair::Dual { p, q } => PumpPair::dual(set(&p), set(&q)),
        }
    }

    /// Waveguide with the fluctuation path for `seed` attached when DF is on.
    /// The path is sampled at half-step spacing of the solver grid.
    pub fn waveguide(&self, seed: u64) -> Result<WaveguideSpec> {
        let (steps, _) = self.solver().steps(self.wg.length)?;
        self.waveguide_sampled(seed, steps)
    }

    /// As [`SchemeSpec::waveguide`] with the path sampled for `steps` solver
    /// steps. A path sampled for `2^k·n` steps also serves every `n`-step run.
    pub fn waveguide_sampled(&self, seed: u64, steps: usize) -> Result<WaveguideSpec> {
        let mut wg = self.wg.clone();
        if self.effects.fluctuations {
            let z = half_step_grid(wg.length, steps);
            wg.fluctuation = Some(sample_path(&self.fluctuations.with_seed(seed), &z)?);
        }
        Ok(wg.with_effects(&self.effects))
    }

    pub fn run(&self, method: Method, seed: u64) -> Result<SchemeRun> {
        match method {
            Method::SplitStep => self.run_split_step(seed),
            Method::Analytic => self.run_analytic(seed),
        }
    }

    fn run_split_step(&self, seed: u64) -> Result<SchemeRun> {
        let wg = self.waveguide(seed)?;
        let pumps = self.active_pumps();
        let grid = self.grid()?;
        let mut stepper = Stepper::new(&wg, &pumps, &self.solver(), &grid)?;
        let mut last = None;
        let calibration = calibrate_with(
            |s| {
                stepper.set_pumps(pumps.scaled(s));
                let out = stepper.run()?;
                let r = out.meta.pair_probability;
                last = Some(out);
                Ok(r)
            },
            self.target_r,
        )?;
        let out = last.expect("calibration evaluates at least once");
        Ok(SchemeRun {
            report: schmidt_report(&out.amplitude)?,
            amplitude: out.amplitude,
            calibration,
            seed,
            method: Method::SplitStep,
            propagation: Some(out.meta),
        })
    }

    fn run_analytic(&self, seed: u64) -> Result<SchemeRun> {
        let wg = self.waveguide(seed)?;
        let pumps = self.active_pumps();
        let grid = self.grid()?;
        let evaluate = |s: f64| -> Result<JointAmplitude> {
            let scaled = pumps.scaled(s);
            if self.effects.gvd {
                if !scaled.is_degenerate() || self.effects.npm || self.effects.fluctuations {
                    return Err(Error::Config(
                        "the GVD closed form needs a degenerate pump and no other effects".into(),
                    ));
                }
                Ok(hod_jsa(&grid, &wg, scaled.p(), false))
            } else {
                no_gvd_jta(&grid, &wg, &scaled)?.to_frequency()
            }
        };
        let mut last = None;
        let calibration = calibrate_with(
            |s| {
                let a = evaluate(s)?;
                let r = a.probability();
                last = Some(a);
                Ok(r)
            },
            self.target_r,
        )?;
        let amplitude = last.expect("calibration evaluates at least once");
        Ok(SchemeRun {
            report: schmidt_report(&amplitude)?,
            amplitude,
            calibration,
            seed,
            method: Method::Analytic,
            propagation: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn asymmetric_defaults() {
        let s = asymmetric_scheme(10.0, &SchemeOverrides::default()).unwrap();
        assert_eq!(s.wg.length, 10.0);
        assert_eq!(s.pumps.p().sigma, 1e12);
        assert_eq!(s.wg.beta1_i - s.wg.beta1_s, 1e-11);
        assert_eq!(s.target_r, 0.2);
        assert!(s.pumps.is_degenerate());
        assert_eq!(s.wg.beta1_s, s.pumps.p().beta1);
        // walk-off over the length in pulse durations
        assert_relative_eq!(
            (s.wg.beta1_i - s.wg.beta1_s) * s.wg.length / s.pumps.p().duration(),
            100.0,
            max_relative = 1e-12
        );
        assert_eq!(s.grid.n, 512);
        assert_relative_eq!(s.fluctuations.sigma_dw, 0.5e12);
        assert_eq!(s.fluctuations.corr_length, 0.1);
    }

    #[test]
    fn overriding_length_changes_nothing_else() {
        let a = asymmetric_scheme(10.0, &SchemeOverrides::default()).unwrap();
        let b = asymmetric_scheme(5.0, &SchemeOverrides::default()).unwrap();
        assert_eq!(b.wg.length, 5.0);
        assert_eq!(a.wg.beta1_i, b.wg.beta1_i);
        assert_eq!(a.wg.gamma, b.wg.gamma);
        assert_eq!(a.pumps.p().sigma, b.pumps.p().sigma);
        assert_eq!(a.target_r, b.target_r);
    }

    #[test]
    fn collision_pumps_cross_at_midpoint() {
        let s = collision_scheme(1.0, &SchemeOverrides::default()).unwrap();
        let (p, q) = (s.pumps.p(), s.pumps.q());
        let centre = |f: &PumpField, z: f64| f.t_launch + f.beta1 * z;
        assert!((centre(p, 0.5) - centre(q, 0.5)).abs() < 1e-24);
        assert_relative_eq!(centre(p, 0.0) - centre(q, 0.0), 5e-12, max_relative = 1e-12);
        assert_eq!(s.wg.beta1_s, p.beta1);
        assert_eq!(s.wg.beta1_i, q.beta1);
        assert_eq!(s.grid.n, 128);
        let short = collision_scheme(0.3, &SchemeOverrides::default()).unwrap();
        assert!(short.validate().is_ok());
        let moved = s.with_length(0.6).unwrap();
        assert!((centre(moved.pumps.p(), 0.3) - centre(moved.pumps.q(), 0.3)).abs() < 1e-24);
    }

    #[test]
    fn equal_slowness_is_not_a_collision() {
        let p = PumpField::new(1.0, 1e12, 2e-12, 0.0, 0.0).unwrap();
        let r = collision_from_pumps(1.0, p, p, &SchemeOverrides::default(), 1e-3, 0.2);
        assert!(matches!(r, Err(Error::DegenerateWalkOff)));
    }

    #[test]
    fn gvd_toggle_reaches_pumps() {
        let s = asymmetric_scheme(1.0, &SchemeOverrides::default()).unwrap();
        assert_eq!(s.active_pumps().p().beta2, 0.0);
        let g = s.with_effects(Effects::parse_list("gvd").unwrap());
        assert_eq!(g.active_pumps().p().beta2, BETA2);
        assert_eq!(g.waveguide(0).unwrap().beta2_i, BETA2);
    }

    #[test]
    fn scheme_names_parse() {
        assert_eq!(
            "Collision".parse::<SchemeName>().unwrap(),
            SchemeName::Collision
        );
        assert!("sideways".parse::<SchemeName>().is_err());
        assert_eq!(SchemeName::Asymmetric.to_string(), "asymmetric");
    }

    fn small(o: SchemeOverrides) -> SchemeOverrides {
        SchemeOverrides {
            grid_n: Some(128),
            ..o
        }
    }

    #[test]
    fn no_effect_purity_rises_with_length() {
        let mut last = 0.0;
        for l in [1.0, 2.0, 4.0] {
            let o = small(SchemeOverrides {
                time_span: Some(128.0 * 0.5e-12),
                ..Default::default()
            });
            let s = asymmetric_scheme(l, &o).unwrap();
            let p = s.run(Method::Analytic, 0).unwrap().report.purity;
            assert!(p > last, "L = {l}: {p} after {last}");
            last = p;
        }
    }

    // A common slowness shift moves everything by c·L in time; shifting the
    // window by the same whole number of samples reproduces the field.
    #[test]
    fn frame_shift_leaves_purity_unchanged() {
        let s = collision_scheme(1.0, &small(SchemeOverrides::default())).unwrap();
        let shift = 8.0 * s.grid().unwrap().dt();
        let c = shift / s.wg.length;
        let mut moved = s.clone();
        moved.wg.beta1_s += c;
        moved.wg.beta1_i += c;
        moved.pumps = match s.pumps {
            PumpPair::Dual { p, q } => PumpPair::dual(
                PumpField {
                    beta1: p.beta1 + c,
                    ..p
                },
                PumpField {
                    beta1: q.beta1 + c,
                    ..q
                },
            ),
            other => other,
        };
        moved.grid.t_center += shift;
        let a = s.run(Method::Analytic, 0).unwrap().report.purity;
        let b = moved.run(Method::Analytic, 0).unwrap().report.purity;
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn calibrated_runs_hit_target() {
        let s = collision_scheme(
            1.0,
            &SchemeOverrides {
                dz: Some(0.02),
                ..Default::default()
            },
        )
        .unwrap();
        let run = s.run(Method::SplitStep, 0).unwrap();
        assert!((run.report.pair_probability / 0.2 - 1.0).abs() < 1e-3);
        let meta = run.propagation.unwrap();
        assert_eq!(meta.steps, 50);
        assert!(!meta.edge_flagged, "edge energy {}", meta.edge_energy);
        assert!(
            run.calibration.scale > 0.5 && run.calibration.scale < 2.0,
            "{}",
            run.calibration.scale
        );
    }

    #[test]
    fn fluctuation_paths_follow_the_seed() {
        let s = asymmetric_scheme(1.0, &SchemeOverrides::default())
            .unwrap()
            .with_effects(Effects::parse_list("df").unwrap());
        let a = s.waveguide(3).unwrap();
        let b = s.waveguide(3).unwrap();
        let c = s.waveguide(4).unwrap();
        assert_eq!(a.fluctuation, b.fluctuation);
        assert_ne!(a.fluctuation, c.fluctuation);
        assert!(s
            .with_effects(Effects::none())
            .waveguide(3)
            .unwrap()
            .fluctuation
            .is_none());
    }
}
