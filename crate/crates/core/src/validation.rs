//! Split-step results checked against closed-form solutions and against
//! themselves under step refinement.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{fidelity, purity};
use crate::analytic::{hod_jsa, no_gvd_jta};
use crate::error::{Error, Result};
use crate::grid::JointAmplitude;
use crate::propagator::{SolverConfig, Stepper};
use crate::schemes::{Method, SchemeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Collision-coordinate solution; GVD must be off.
    NoGvd,
    /// Sinc solution; degenerate pump with GVD only.
    Hod,
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "no_gvd" => Ok(Regime::NoGvd),
            "hod" | "gvd" => Ok(Regime::Hod),
            other => Err(Error::Config(format!(
                "unknown validation regime `{other}` (expected no_gvd or hod)"
            ))),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::NoGvd => "no_gvd",
            Regime::Hod => "hod",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub dz: f64,
    pub steps: usize,
    /// Relative Frobenius distance to the extrapolated field.
    pub error: f64,
    /// Error of the previous (coarser) row divided by this one.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub regime: Regime,
    pub fidelity: f64,
    /// For the sinc regime: fidelity after restoring the propagation phase.
    pub fidelity_phased: Option<f64>,
    pub purity_split_step: f64,
    pub purity_analytic: f64,
    pub purity_delta: f64,
    pub power_scale: f64,
    pub convergence: Vec<ConvergenceRow>,
}

fn check_regime(spec: &SchemeSpec, regime: Regime) -> Result<()> {
    let e = spec.effects;
    match regime {
        Regime::NoGvd if e.gvd => Err(Error::Config(
            "the no_gvd regime cannot run with gvd enabled".into(),
        )),
        Regime::Hod if !spec.pumps.is_degenerate() => Err(Error::Config(
            "the hod regime needs a degenerate pump".into(),
        )),
        Regime::Hod if e.npm || e.fluctuations || !e.gvd => Err(Error::Config(
            "the hod regime needs gvd on and npm, df off".into(),
        )),
        _ => Ok(()),
    }
}

/// Fields at each step size with the pump scale fixed, compared against
/// the Richardson extrapolation `(4A_{h/2} - A_h)/3` of the two finest.
///
/// Step counts should divide each other (halvings of a step that divides
/// the length) so the shared fluctuation path is sampled at every solver
/// point. Rows cover every step but the finest; the finest pair sets the
/// reference, so its own error ratio would be 4 by construction.
pub fn convergence_table(
    spec: &SchemeSpec,
    seed: u64,
    scale: f64,
    dzs: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    if dzs.len() < 3 {
        return Err(Error::param("dzs", "need at least three step sizes"));
    }
    let pumps = spec.active_pumps().scaled(scale);
    let grid = spec.grid()?;
    let finest = dzs.iter().cloned().fold(f64::INFINITY, f64::min);
    let (fine_steps, _) = SolverConfig {
        dz: finest,
        ..spec.solver()
    }
    .steps(spec.wg.length)?;
    // one fluctuation path, sampled finely enough for every level
    let wg = spec.waveguide_sampled(seed, fine_steps)?;
    let mut fields = Vec::with_capacity(dzs.len());
    let mut steps = Vec::with_capacity(dzs.len());
    for &dz in dzs {
        let cfg = SolverConfig {
            dz,
            ..spec.solver()
        };
        let st = Stepper::new(&wg, &pumps, &cfg, &grid)?;
        steps.push(st.steps());
        fields.push(st.run()?.amplitude.into_values());
    }
    let k = fields.len();
    let reference: Array2<Complex64> =
        (&fields[k - 1] * Complex64::new(4.0, 0.0) - &fields[k - 2]) / 3.0;
    let ref_norm = frobenius(&reference);
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(k - 1);
    for i in 0..k - 1 {
        let error = frobenius(&(&fields[i] - &reference)) / ref_norm;
        let ratio = rows.last().map(|r| r.error / error);
        rows.push(ConvergenceRow {
            dz: dzs[i],
            steps: steps[i],
            error,
            ratio,
        });
    }
    Ok(rows)
}

fn frobenius(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Step sizes `dz, dz/2, …` for `levels` levels.
pub fn halvings(dz: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| dz / f64::powi(2.0, k as i32)).collect()
}

/// Calibrated split-step run against the closed form at the same pump
/// power, plus a convergence table over `levels` halvings of the setup's dz.
pub fn validate(
    spec: &SchemeSpec,
    regime: Regime,
    seed: u64,
    levels: usize,
) -> Result<ValidationReport> {
    check_regime(spec, regime)?;
    let run = spec.run(Method::SplitStep, seed)?;
    let scale = run.calibration.scale;
    let pumps = spec.active_pumps().scaled(scale);
    let wg = spec.waveguide(seed)?;
    let grid = spec.grid()?;
    let (analytic, phased): (JointAmplitude, Option<JointAmplitude>) = match regime {
        Regime::NoGvd => (no_gvd_jta(&grid, &wg, &pumps)?.to_frequency()?, None),
        Regime::Hod => (
            hod_jsa(&grid, &wg, pumps.p(), false),
            Some(hod_jsa(&grid, &wg, pumps.p(), true)),
        ),
    };
    let purity_analytic = purity(&analytic)?;
    let convergence = convergence_table(spec, seed, scale, &halvings(spec.dz, levels))?;
    Ok(ValidationReport {
        regime,
        fidelity: fidelity(&run.amplitude, &analytic)?,
        fidelity_phased: phased
            .as_ref()
            .map(|p| fidelity(&run.amplitude, p))
            .transpose()?,
        purity_split_step: run.report.purity,
        purity_analytic,
        purity_delta: run.report.purity - purity_analytic,
        power_scale: scale,
        convergence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::Effects;
    use crate::schemes::{asymmetric_scheme, collision_scheme, SchemeOverrides};

    #[test]
    fn regimes_parse() {
        assert_eq!("no-gvd".parse::<Regime>().unwrap(), Regime::NoGvd);
        assert_eq!("HOD".parse::<Regime>().unwrap(), Regime::Hod);
        assert!("both".parse::<Regime>().is_err());
    }

    #[test]
    fn incompatible_regimes_are_rejected() {
        let coll = collision_scheme(1.0, &SchemeOverrides::default()).unwrap();
        let gvd = Effects::parse_list("gvd").unwrap();
        assert!(matches!(
            validate(&coll.clone().with_effects(gvd), Regime::Hod, 0, 3),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            validate(&coll.with_effects(gvd), Regime::NoGvd, 0, 3),
            Err(Error::Config(_))
        ));
        let asym = asymmetric_scheme(1.0, &SchemeOverrides::default()).unwrap();
        assert!(matches!(
            validate(&asym, Regime::Hod, 0, 3),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn collision_no_gvd_agrees() {
        let spec = collision_scheme(
            1.0,
            &SchemeOverrides {
                dz: Some(0.02),
                ..Default::default()
            },
        )
        .unwrap()
        .with_effects(Effects::parse_list("npm").unwrap());
        let r = validate(&spec, Regime::NoGvd, 0, 4).unwrap();
        assert!(r.fidelity > 0.999, "{}", r.fidelity);
        assert_eq!(r.convergence.len(), 3);
        assert!(r.convergence[0].ratio.is_none());
        for row in &r.convergence[1..] {
            let q = row.ratio.unwrap();
            assert!((3.0..=5.0).contains(&q), "ratio {q}");
        }
    }

    #[test]
    fn halving_sequence() {
        assert_eq!(halvings(0.04, 3), vec![0.04, 0.02, 0.01]);
    }
}
