//! TOML run configuration.
//!
//! Every block is optional. A preset (`scheme = "asymmetric"` or
//! `"collision"`) fills in all parameters, which `[physics]`,
//! `[fluctuations]`, `[grid]` and `[solver]` may override;
//! `scheme = "custom"` takes the waveguide and pumps from `[custom]`.
//! Dimensioned values accept unit suffixes (`"1 ps"`, `"10 cm"`,
//! `"500 ps^2/km"`); bare numbers are SI.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::units::{Dim, Quantity};
use crate::error::{Error, Result};
use crate::fluctuations::FluctuationModel;
use crate::propagator::{Effects, StepOrdering, WaveguideSpec};
use crate::pump::{PumpField, PumpPair};
use crate::schemes::{build_scheme, GridHint, Method, SchemeName, SchemeOverrides, SchemeSpec};
use crate::validation::Regime;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scheme: Option<String>,
    pub length: Option<Quantity>,
    /// Comma list of `df`, `npm`, `gvd`.
    pub effects: Option<String>,
    pub method: Option<Method>,
    pub seed: Option<u64>,
    pub target_r: Option<f64>,
    #[serde(default)]
    pub physics: PhysicsBlock,
    #[serde(default)]
    pub fluctuations: FluctuationBlock,
    #[serde(default)]
    pub grid: GridBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub output: OutputBlock,
    #[serde(default)]
    pub sweep: SweepBlock,
    #[serde(default)]
    pub ensemble: EnsembleBlock,
    #[serde(default)]
    pub validate: ValidateBlock,
    pub custom: Option<CustomBlock>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsBlock {
    pub pulse_duration: Option<Quantity>,
    pub delta_beta1: Option<Quantity>,
    pub beta2: Option<Quantity>,
    pub gamma: Option<Quantity>,
    pub static_mismatch: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluctuationBlock {
    pub sigma_dw: Option<Quantity>,
    pub corr_length: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub n: Option<usize>,
    pub span: Option<Quantity>,
    pub center: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub dz: Option<Quantity>,
    pub edge_energy_threshold: Option<f64>,
    pub ordering: Option<StepOrdering>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: Option<PathBuf>,
    /// Write the full joint spectral amplitude grid (default true).
    pub jsa_csv: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub lengths: Option<Vec<Quantity>>,
    /// Effect sets, one curve each, e.g. `["none", "npm", "df"]`.
    pub effects: Option<Vec<String>>,
    /// Realizations averaged per DF point (default 1).
    pub paths: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleBlock {
    pub paths: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateBlock {
    pub regime: Option<String>,
    /// Number of step sizes in the convergence table.
    pub levels: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomBlock {
    pub waveguide: CustomWaveguide,
    /// One entry for a degenerate pump, two for a dual pump.
    pub pumps: Vec<CustomPump>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomWaveguide {
    pub beta1_s: Quantity,
    pub beta1_i: Quantity,
    pub beta2_s: Option<Quantity>,
    pub beta2_i: Option<Quantity>,
    pub gamma: Quantity,
    pub gamma_sp: Option<Quantity>,
    pub gamma_sq: Option<Quantity>,
    pub gamma_ip: Option<Quantity>,
    pub gamma_iq: Option<Quantity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomPump {
    pub power: Quantity,
    pub pulse_duration: Quantity,
    pub beta1: Option<Quantity>,
    pub beta2: Option<Quantity>,
    pub t_launch: Option<Quantity>,
}

/// Command-line settings that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct CliOverrides {
    pub scheme: Option<String>,
    pub seed: Option<u64>,
    pub dz: Option<f64>,
    pub grid_n: Option<usize>,
    pub effects: Option<String>,
    pub lengths: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub method: Option<Method>,
    pub length: Option<f64>,
    pub paths: Option<usize>,
    pub regime: Option<String>,
}

/// Everything a command needs, in SI units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub spec: SchemeSpec,
    pub method: Method,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub jsa_csv: bool,
    pub sweep_lengths: Vec<f64>,
    pub sweep_effects: Vec<Effects>,
    pub sweep_paths: usize,
    pub ensemble_paths: usize,
    pub regime: Option<Regime>,
    pub levels: usize,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Fold command-line settings into the file settings.
    pub fn apply(&mut self, o: &CliOverrides) {
        if let Some(s) = &o.scheme {
            self.scheme = Some(s.clone());
        }
        if let Some(s) = o.seed {
            self.seed = Some(s);
        }
        if let Some(dz) = o.dz {
            self.solver.dz = Some(Quantity::Number(dz));
        }
        if let Some(n) = o.grid_n {
            self.grid.n = Some(n);
        }
        if let Some(e) = &o.effects {
            self.effects = Some(e.clone());
        }
        if let Some(ls) = &o.lengths {
            self.sweep.lengths = Some(ls.iter().map(|&l| Quantity::Number(l)).collect());
        }
        if let Some(d) = &o.out {
            self.output.dir = Some(d.clone());
        }
        if let Some(m) = o.method {
            self.method = Some(m);
        }
        if let Some(l) = o.length {
            self.length = Some(Quantity::Number(l));
        }
        if let Some(n) = o.paths {
            self.ensemble.paths = Some(n);
            self.sweep.paths = Some(n);
        }
        if let Some(r) = &o.regime {
            self.validate.regime = Some(r.clone());
        }
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let name: SchemeName = self.scheme.as_deref().unwrap_or("asymmetric").parse()?;
        let effects = Effects::parse_list(self.effects.as_deref().unwrap_or(""))?;
        let opt = |q: &Option<Quantity>, dim: Dim, key: &str| -> Result<Option<f64>> {
            q.as_ref().map(|q| q.si(dim, key)).transpose()
        };
        let duration = opt(
            &self.physics.pulse_duration,
            Dim::Time,
            "physics.pulse_duration",
        )?;
        if let Some(d) = duration {
            if !(d > 0.0) {
                return Err(Error::Config(
                    "`physics.pulse_duration` must be positive".into(),
                ));
            }
        }
        let mut grid_n = self.grid.n;
        if let Some(n) = grid_n {
            if n < 8 || !n.is_power_of_two() {
                return Err(Error::Config(format!(
                    "`grid.n` = {n} must be a power of two and at least 8"
                )));
            }
        } else if self.grid.span.is_some() {
            grid_n = Some(512);
        }
        let overrides = SchemeOverrides {
            sigma: duration.map(|d| 1.0 / d),
            delta_beta1: opt(
                &self.physics.delta_beta1,
                Dim::Slowness,
                "physics.delta_beta1",
            )?,
            beta2: opt(&self.physics.beta2, Dim::Gvd, "physics.beta2")?,
            gamma: opt(&self.physics.gamma, Dim::Nonlinearity, "physics.gamma")?,
            target_r: self.target_r,
            sigma_dw: opt(
                &self.fluctuations.sigma_dw,
                Dim::AngularFrequency,
                "fluctuations.sigma_dw",
            )?,
            corr_length: opt(
                &self.fluctuations.corr_length,
                Dim::Length,
                "fluctuations.corr_length",
            )?,
            static_mismatch: opt(
                &self.physics.static_mismatch,
                Dim::Wavenumber,
                "physics.static_mismatch",
            )?,
            grid_n,
            time_span: opt(&self.grid.span, Dim::Time, "grid.span")?,
            t_center: opt(&self.grid.center, Dim::Time, "grid.center")?,
            dz: opt(&self.solver.dz, Dim::Length, "solver.dz")?,
        };
        let length = opt(&self.length, Dim::Length, "length")?;
        let mut spec = match name {
            SchemeName::Custom => self.custom_spec(length, &overrides)?,
            _ => {
                if self.custom.is_some() {
                    return Err(Error::Config(
                        "a [custom] block needs scheme = \"custom\"".into(),
                    ));
                }
                let default_length = if name == SchemeName::Asymmetric {
                    10.0
                } else {
                    1.0
                };
                build_scheme(name, length.unwrap_or(default_length), &overrides)?
            }
        };
        if let Some(t) = self.solver.edge_energy_threshold {
            spec.edge_energy_threshold = t;
        }
        if let Some(o) = self.solver.ordering {
            spec.ordering = o;
        }
        let spec = spec.with_effects(effects);
        spec.validate().map_err(|e| Error::Config(e.to_string()))?;

        let sweep_lengths = match &self.sweep.lengths {
            Some(ls) => ls
                .iter()
                .enumerate()
                .map(|(i, q)| q.si(Dim::Length, &format!("sweep.lengths[{i}]")))
                .collect::<Result<Vec<f64>>>()?,
            None => Vec::new(),
        };
        let sweep_effects = match &self.sweep.effects {
            Some(list) => list
                .iter()
                .map(|e| Effects::parse_list(e))
                .collect::<Result<Vec<_>>>()?,
            None => vec![effects],
        };
        let regime = self
            .validate
            .regime
            .as_deref()
            .map(str::parse)
            .transpose()?;
        let levels = self.validate.levels.unwrap_or(4);
        if levels < 3 {
            return Err(Error::Config("`validate.levels` must be at least 3".into()));
        }
        Ok(Resolved {
            spec,
            method: self.method.unwrap_or_default(),
            seed: self.seed.unwrap_or(0),
            out_dir: self
                .output
                .dir
                .clone()
                .unwrap_or_else(|| PathBuf::from("out")),
            jsa_csv: self.output.jsa_csv.unwrap_or(true),
            sweep_lengths,
            sweep_effects,
            sweep_paths: self.sweep.paths.unwrap_or(1),
            ensemble_paths: self.ensemble.paths.unwrap_or(100),
            regime,
            levels,
        })
    }

    fn custom_spec(&self, length: Option<f64>, o: &SchemeOverrides) -> Result<SchemeSpec> {
        let c = self
            .custom
            .as_ref()
            .ok_or_else(|| Error::Config("scheme = \"custom\" needs a [custom] block".into()))?;
        let length =
            length.ok_or_else(|| Error::Config("scheme = \"custom\" needs `length`".into()))?;
        let (n, span) = match (o.grid_n, o.time_span) {
            (Some(n), Some(span)) => (n, span),
            _ => {
                return Err(Error::Config(
                    "scheme = \"custom\" needs grid.n and grid.span".into(),
                ))
            }
        };
        let w = &c.waveguide;
        let q = |v: &Quantity, dim: Dim, key: &str| v.si(dim, &format!("custom.{key}"));
        let qo = |v: &Option<Quantity>, dim: Dim, key: &str, default: f64| -> Result<f64> {
            v.as_ref()
                .map_or(Ok(default), |v| v.si(dim, &format!("custom.{key}")))
        };
        let gamma = q(&w.gamma, Dim::Nonlinearity, "waveguide.gamma")?;
        let mut wg = WaveguideSpec {
            length,
            beta1_s: q(&w.beta1_s, Dim::Slowness, "waveguide.beta1_s")?,
            beta1_i: q(&w.beta1_i, Dim::Slowness, "waveguide.beta1_i")?,
            beta2_s: qo(&w.beta2_s, Dim::Gvd, "waveguide.beta2_s", 0.0)?,
            beta2_i: qo(&w.beta2_i, Dim::Gvd, "waveguide.beta2_i", 0.0)?,
            gamma,
            gamma_sp: qo(&w.gamma_sp, Dim::Nonlinearity, "waveguide.gamma_sp", gamma)?,
            gamma_sq: qo(&w.gamma_sq, Dim::Nonlinearity, "waveguide.gamma_sq", gamma)?,
            gamma_ip: qo(&w.gamma_ip, Dim::Nonlinearity, "waveguide.gamma_ip", gamma)?,
            gamma_iq: qo(&w.gamma_iq, Dim::Nonlinearity, "waveguide.gamma_iq", gamma)?,
            copolarized: false,
            static_mismatch: o.static_mismatch.unwrap_or(0.0),
            fluctuation: None,
        };
        wg.copolarized = [wg.gamma_sp, wg.gamma_sq, wg.gamma_ip, wg.gamma_iq]
            .iter()
            .all(|&g| g == gamma);
        let pump = |i: usize, p: &CustomPump| -> Result<PumpField> {
            let key = |k: &str| format!("pumps[{i}].{k}");
            let duration = p
                .pulse_duration
                .si(Dim::Time, &format!("custom.{}", key("pulse_duration")))?;
            if !(duration > 0.0) {
                return Err(Error::Config(format!(
                    "`custom.{}` must be positive",
                    key("pulse_duration")
                )));
            }
            PumpField::new(
                p.power
                    .si(Dim::Power, &format!("custom.{}", key("power")))?,
                1.0 / duration,
                qo(&p.beta1, Dim::Slowness, &key("beta1"), 0.0)?,
                qo(&p.beta2, Dim::Gvd, &key("beta2"), 0.0)?,
                qo(&p.t_launch, Dim::Time, &key("t_launch"), 0.0)?,
            )
        };
        let pumps = match c.pumps.as_slice() {
            [a] => PumpPair::degenerate(pump(0, a)?),
            [a, b] => PumpPair::dual(pump(0, a)?, pump(1, b)?),
            _ => {
                return Err(Error::Config(
                    "[custom] needs one or two [[custom.pumps]] entries".into(),
                ))
            }
        };
        let sigma = pumps.p().sigma;
        let db1 = (wg.beta1_i - wg.beta1_s).abs();
        Ok(SchemeSpec {
            name: SchemeName::Custom,
            wg,
            pumps,
            fluctuations: FluctuationModel {
                sigma_dw: o.sigma_dw.unwrap_or(0.5 * sigma),
                corr_length: o.corr_length.unwrap_or(0.1),
                seed: 0,
                delta_beta1: db1,
            },
            grid: GridHint {
                n,
                time_span: span,
                t_center: o.t_center.unwrap_or(0.0),
            },
            dz: o.dz.unwrap_or(length / 200.0),
            target_r: o.target_r.unwrap_or(0.2),
            effects: Effects::none(),
            edge_energy_threshold: 1e-6,
            ordering: StepOrdering::Symmetric,
            auto_grid: false,
        })
    }
}
