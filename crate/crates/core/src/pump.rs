//! Classical Gaussian pump envelopes.
//!
//! Pumps are undepleted and propagate linearly. A pump launched as
//! `√P·exp(-σ²t²/2)` obeys the same dispersion operator as the quantum
//! fields, `∂_z A = -β₁∂_t A - (i/2)β₂∂_t² A`, which in the frequency domain
//! is multiplication by `exp(i(β₁ω + β₂ω²/2)z)`. The closed forms below follow
//! from that.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A transform-limited Gaussian pump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpField {
    /// Peak power, W.
    pub peak_power: f64,
    /// Spectral width σ, rad/s; the duration is `1/σ`.
    pub sigma: f64,
    /// Group slowness, s/m.
    pub beta1: f64,
    /// Group-velocity dispersion, s²/m.
    pub beta2: f64,
    /// Arrival time of the pulse centre at z = 0, s.
    pub t_launch: f64,
}

impl PumpField {
    pub fn new(peak_power: f64, sigma: f64, beta1: f64, beta2: f64, t_launch: f64) -> Result<Self> {
        let p = PumpField {
            peak_power,
            sigma,
            beta1,
            beta2,
            t_launch,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.peak_power >= 0.0) || !self.peak_power.is_finite() {
            return Err(Error::param(
                "peak_power",
                "must be finite and non-negative",
            ));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::param("sigma", "must be finite and positive"));
        }
        if !self.beta1.is_finite() || !self.beta2.is_finite() || !self.t_launch.is_finite() {
            return Err(Error::param(
                "pump",
                "dispersion and launch time must be finite",
            ));
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        1.0 / self.sigma
    }

    /// Complex envelope in √W at position `z` and time `t`.
    pub fn envelope(&self, z: f64, t: f64) -> Complex64 {
        let tau = t - self.t_launch - self.beta1 * z;
        let s2 = self.sigma * self.sigma;
        if self.beta2 == 0.0 {
            return Complex64::new(self.peak_power.sqrt() * (-s2 * tau * tau / 2.0).exp(), 0.0);
        }
        let q = Complex64::new(1.0, -self.beta2 * s2 * z);
        self.peak_power.sqrt() / q.sqrt() * (-(s2 * tau * tau) / (2.0 * q)).exp()
    }

    /// `|envelope|²`, W. Cheaper than the complex envelope.
    pub fn intensity(&self, z: f64, t: f64) -> f64 {
        let tau = t - self.t_launch - self.beta1 * z;
        let s2 = self.sigma * self.sigma;
        if self.beta2 == 0.0 {
            return self.peak_power * (-s2 * tau * tau).exp();
        }
        // |q|² = 1 + x², Re(1/q) = 1/(1 + x²)
        let x = self.beta2 * s2 * z;
        let w = 1.0 + x * x;
        self.peak_power / w.sqrt() * (-s2 * tau * tau / w).exp()
    }

    /// Spectral amplitude under the `∫dt f(t) e^{iωt}` convention:
    /// `√(2πP)/σ · exp(-ω²/2σ²) · exp(iω(t_launch + β₁z)) · exp(iβ₂ω²z/2)`.
    pub fn spectrum(&self, z: f64, omega: f64) -> Complex64 {
        let mag = (2.0 * PI * self.peak_power).sqrt() / self.sigma
            * (-omega * omega / (2.0 * self.sigma * self.sigma)).exp();
        let phase = omega * (self.t_launch + self.beta1 * z) + 0.5 * self.beta2 * omega * omega * z;
        Complex64::from_polar(mag, phase)
    }

    /// `∫|A|² dt = P·√π/σ`, J. Independent of z.
    pub fn energy(&self) -> f64 {
        self.peak_power * PI.sqrt() / self.sigma
    }

    pub fn with_power(mut self, peak_power: f64) -> Self {
        self.peak_power = peak_power;
        self
    }
}

/// The pump configuration driving the scattering term.
///
/// A degenerate pump supplies both photons of each scattered pair: the
/// source is `iγA_p²` and its intensity enters the phase of each photon
/// once (`2γ|A_p|²`), matching single-pump four-wave mixing. Dual pumps use
/// all four cross-phase terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PumpPair {
    Degenerate { pump: PumpField },
    Dual { p: PumpField, q: PumpField },
}

impl PumpPair {
    pub fn degenerate(pump: PumpField) -> Self {
        PumpPair::Degenerate { pump }
    }

    pub fn dual(p: PumpField, q: PumpField) -> Self {
        PumpPair::Dual { p, q }
    }

    pub fn p(&self) -> &PumpField {
        match self {
            PumpPair::Degenerate { pump } => pump,
            PumpPair::Dual { p, .. } => p,
        }
    }

    pub fn q(&self) -> &PumpField {
        match self {
            PumpPair::Degenerate { pump } => pump,
            PumpPair::Dual { q, .. } => q,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, PumpPair::Degenerate { .. })
    }

    pub fn validate(&self) -> Result<()> {
        self.p().validate()?;
        self.q().validate()
    }

    /// `A_p(z,t)·A_q(z,t)`.
    pub fn product(&self, z: f64, t: f64) -> Complex64 {
        match self {
            PumpPair::Degenerate { pump } => {
                let a = pump.envelope(z, t);
                a * a
            }
            PumpPair::Dual { p, q } => p.envelope(z, t) * q.envelope(z, t),
        }
    }

    /// Intensities `(|A_p|², |A_q|²)` entering the phase modulation. The
    /// second entry is zero for a degenerate pump.
    pub fn npm_intensities(&self, z: f64, t: f64) -> (f64, f64) {
        match self {
            PumpPair::Degenerate { pump } => (pump.intensity(z, t), 0.0),
            PumpPair::Dual { p, q } => (p.intensity(z, t), q.intensity(z, t)),
        }
    }

    /// Scale every peak power by `s`, which scales `√(P_p·P_q)` by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        match *self {
            PumpPair::Degenerate { pump } => PumpPair::Degenerate {
                pump: pump.with_power(pump.peak_power * s),
            },
            PumpPair::Dual { p, q } => PumpPair::Dual {
                p: p.with_power(p.peak_power * s),
                q: q.with_power(q.peak_power * s),
            },
        }
    }

    pub fn has_dispersion(&self) -> bool {
        self.p().beta2 != 0.0 || self.q().beta2 != 0.0
    }

    /// Shortest pump duration, s.
    pub fn duration(&self) -> f64 {
        self.p().duration().min(self.q().duration())
    }
}
