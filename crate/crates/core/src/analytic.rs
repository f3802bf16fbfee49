//! Closed-form reference solutions.
//!
//! Without GVD in any field the evolution equation is first order and
//! hyperbolic. Along characteristics the pair found at `(t_s, t_i)` on exit
//! was created at the collision point
//!
//! ```text
//! z_c = L - (t_s - t_i)/(β₁s - β₁i),   t_c = (β₁s·t_i - β₁i·t_s)/(β₁s - β₁i)
//! ```
//!
//! and the amplitude is
//!
//! ```text
//! A(t_s, t_i) = iγ/|β₁s - β₁i| · A_p(z_c,t_c)·A_q(z_c,t_c) · exp(iθ_NPM) · exp(i∫_{z_c}^L Δβ₀ dz)
//! ```
//!
//! inside `0 < z_c < L`, zero outside and half on the edges. `θ_NPM` is the
//! real phase picked up from both pumps on the way from `z_c` to the exit.
//!
//! With GVD but no phase modulation, a degenerate Gaussian pump gives the
//! approximate sinc solution of [`hod_solution`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Domain, Grid2D, JointAmplitude};
use crate::propagator::WaveguideSpec;
use crate::pump::{PumpField, PumpPair};
use crate::quadrature::integrate;

/// Relative tolerance of the phase-modulation quadrature.
pub const NPM_REL_TOL: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Creation point and time of the pair detected at `(t_s, t_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionCoords {
    pub z_c: f64,
    pub t_c: f64,
}

pub fn collision_coordinates(t_s: f64, t_i: f64, wg: &WaveguideSpec) -> Result<CollisionCoords> {
    let d = wg.beta1_s - wg.beta1_i;
    if d == 0.0 {
        return Err(Error::DegenerateWalkOff);
    }
    Ok(CollisionCoords {
        z_c: wg.length - (t_s - t_i) / d,
        t_c: (wg.beta1_s * t_i - wg.beta1_i * t_s) / d,
    })
}

// Heaviside window, one half on the edges so sampled fields do not depend
// on rounding in z_c
fn window(z_c: f64, length: f64) -> f64 {
    let tol = 1e-9 * length;
    if z_c < -tol || z_c > length + tol {
        0.0
    } else if z_c.abs() <= tol || (length - z_c).abs() <= tol {
        0.5
    } else {
        1.0
    }
}

/// `θ_NPM(t_s, t_i)`: twice the integrated pump intensities seen by each
/// photon between its creation point and the exit.
pub fn npm_phase(t_s: f64, t_i: f64, wg: &WaveguideSpec, pumps: &PumpPair) -> Result<f64> {
    let c = collision_coordinates(t_s, t_i, wg)?;
    if window(c.z_c, wg.length) == 0.0 {
        return Ok(0.0);
    }
    let z_c = c.z_c.clamp(0.0, wg.length);
    if [wg.gamma_sp, wg.gamma_sq, wg.gamma_ip, wg.gamma_iq]
        .iter()
        .all(|&g| g == 0.0)
    {
        return Ok(0.0);
    }
    let l = wg.length;
    let integrand = |z: f64| {
        let ts = t_s - wg.beta1_s * (l - z);
        let ti = t_i - wg.beta1_i * (l - z);
        let (ps, qs) = pumps.npm_intensities(z, ts);
        let (pi, qi) = pumps.npm_intensities(z, ti);
        2.0 * (wg.gamma_sp * ps + wg.gamma_sq * qs + wg.gamma_ip * pi + wg.gamma_iq * qi)
    };
    // peaks where a photon's trajectory crosses a pump centre
    let mut breaks = Vec::with_capacity(4);
    for (t, b1) in [(t_s, wg.beta1_s), (t_i, wg.beta1_i)] {
        for pump in [pumps.p(), pumps.q()] {
            let rel = pump.beta1 - b1;
            if rel != 0.0 {
                breaks.push((t - b1 * l - pump.t_launch) / rel);
            }
        }
    }
    Ok(integrate(integrand, z_c, l, &breaks, NPM_REL_TOL, 1e-300))
}

/// Collision-coordinate solution at one time pair. Pumps must be free of
/// GVD; the fluctuation path, if any, lives in `wg`.
pub fn no_gvd_solution(
    t_s: f64,
    t_i: f64,
    wg: &WaveguideSpec,
    pumps: &PumpPair,
) -> Result<Complex64> {
    let c = collision_coordinates(t_s, t_i, wg)?;
    if pumps.has_dispersion() {
        return Err(Error::param(
            "pumps",
            "the collision-coordinate solution needs pumps without GVD",
        ));
    }
    let w = window(c.z_c, wg.length);
    if w == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let z_c = c.z_c.clamp(0.0, wg.length);
    let source = pumps.product(z_c, c.t_c) * w;
    if source.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let theta = npm_phase(t_s, t_i, wg, pumps)? + wg.mismatch_integral(z_c, wg.length)?;
    let prefactor = wg.gamma / (wg.beta1_s - wg.beta1_i).abs();
    Ok(I * prefactor * source * Complex64::from_polar(1.0, theta))
}

/// [`no_gvd_solution`] sampled on a time-domain grid.
pub fn no_gvd_jta(grid: &Grid2D, wg: &WaveguideSpec, pumps: &PumpPair) -> Result<JointAmplitude> {
    wg.validate()?;
    collision_coordinates(0.0, 0.0, wg)?;
    if pumps.has_dispersion() {
        return Err(Error::param(
            "pumps",
            "the collision-coordinate solution needs pumps without GVD",
        ));
    }
    // errors are ruled out above except path range, which validate covers
    let a = JointAmplitude::from_fn(*grid, Domain::Time, |ts, ti| {
        no_gvd_solution(ts, ti, wg, pumps).unwrap_or(Complex64::new(f64::NAN, 0.0))
    });
    if !a.is_finite() {
        return Err(Error::NonFinite("collision-coordinate solution".into()));
    }
    Ok(a)
}

/// Approximate joint spectral amplitude for a degenerate Gaussian pump with
/// GVD and no phase modulation:
///
/// ```text
/// A = i√π·γLP/σ · exp(-(ω_s+ω_i)²/4σ²) · sinc([¼β₂p(ω_s+ω_i)² - κ + β₂pσ²/2]·L/2)
/// κ = β₁s·ω_s + ½β₂s·ω_s² + β₁i·ω_i + ½β₂i·ω_i²
/// ```
///
/// with `β₁` measured relative to the pump. The formula carries no overall
/// spectral phase; see [`hod_solution_phased`] for the propagated phase.
pub fn hod_solution(omega_s: f64, omega_i: f64, wg: &WaveguideSpec, pump: &PumpField) -> Complex64 {
    let (amp, x) = hod_parts(omega_s, omega_i, wg, pump);
    amp * sinc(x * wg.length / 2.0)
}

/// [`hod_solution`] times `exp(i(φ + κ)L/2)`, the phase the first-order
/// integral actually carries on exit, with `φ = ¼β₂p(ω_s+ω_i)² + β₂pσ²/2`.
pub fn hod_solution_phased(
    omega_s: f64,
    omega_i: f64,
    wg: &WaveguideSpec,
    pump: &PumpField,
) -> Complex64 {
    let (amp, x) = hod_parts(omega_s, omega_i, wg, pump);
    let phase = (x + 2.0 * kappa(omega_s, omega_i, wg, pump)) * wg.length / 2.0;
    amp * sinc(x * wg.length / 2.0) * Complex64::from_polar(1.0, phase)
}

fn kappa(ws: f64, wi: f64, wg: &WaveguideSpec, pump: &PumpField) -> f64 {
    (wg.beta1_s - pump.beta1) * ws
        + 0.5 * wg.beta2_s * ws * ws
        + (wg.beta1_i - pump.beta1) * wi
        + 0.5 * wg.beta2_i * wi * wi
}

// (prefactor with the Gaussian, sinc argument per unit length before the L/2)
fn hod_parts(ws: f64, wi: f64, wg: &WaveguideSpec, pump: &PumpField) -> (Complex64, f64) {
    let s = pump.sigma;
    let big = ws + wi;
    let phi = 0.25 * pump.beta2 * big * big + 0.5 * pump.beta2 * s * s;
    let amp = I * std::f64::consts::PI.sqrt() * wg.gamma * wg.length * pump.peak_power / s
        * (-big * big / (4.0 * s * s)).exp();
    (amp, phi - kappa(ws, wi, wg, pump))
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// [`hod_solution`] (or its phased form) on a frequency-domain grid.
pub fn hod_jsa(
    grid: &Grid2D,
    wg: &WaveguideSpec,
    pump: &PumpField,
    phased: bool,
) -> JointAmplitude {
    JointAmplitude::from_fn(*grid, Domain::Frequency, |ws, wi| {
        if phased {
            hod_solution_phased(ws, wi, wg, pump)
        } else {
            hod_solution(ws, wi, wg, pump)
        }
    })
}
