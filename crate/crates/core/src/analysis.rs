//! Schmidt decomposition, heralded purity and field comparisons.
//!
//! On a uniform grid the quadrature weights are a common factor of every
//! singular value, so the Schmidt weights `λ_k = s_k²/Σs_j²` come straight
//! from the SVD of the raw amplitude matrix. A non-uniform grid would need
//! the matrix scaled by `√w_j` on each axis first.

use faer::Mat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Domain, JointAmplitude};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtReport {
    /// Descending, summing to one.
    pub schmidt_weights: Vec<f64>,
    /// Heralded purity `Σλ_k²`.
    pub purity: f64,
    /// `K = 1/P`.
    pub schmidt_number: f64,
    pub pair_probability: f64,
    pub domain: Domain,
}

pub fn schmidt_report(a: &JointAmplitude) -> Result<SchmidtReport> {
    let norm = a.norm_sqr();
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    if !norm.is_finite() {
        return Err(Error::NonFinite(
            "amplitude passed to the Schmidt decomposition".into(),
        ));
    }
    let v = a.values();
    // rescale so tiny physical amplitudes stay well inside the SVD's range
    let scale = norm.sqrt().recip();
    let m = Mat::from_fn(v.nrows(), v.ncols(), |i, j| v[[i, j]] * scale);
    let singular = m.singular_values().map_err(|_| Error::Svd)?;
    let mut weights: Vec<f64> = singular.iter().map(|s| s * s).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    weights.sort_by(|x, y| y.total_cmp(x));
    let purity: f64 = weights.iter().map(|w| w * w).sum();
    Ok(SchmidtReport {
        schmidt_weights: weights,
        purity,
        schmidt_number: 1.0 / purity,
        pair_probability: a.probability(),
        domain: a.domain(),
    })
}

pub fn purity(a: &JointAmplitude) -> Result<f64> {
    Ok(schmidt_report(a)?.purity)
}

/// Signal and idler densities: `Σ|A|²` along the other axis times the
/// one-axis measure. Each sums (times its own measure) to the pair
/// probability.
pub fn marginals(a: &JointAmplitude) -> (Vec<f64>, Vec<f64>) {
    let d = a.grid().measure(a.domain()).sqrt();
    let v = a.values();
    let signal = v
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.norm_sqr()).sum::<f64>() * d)
        .collect();
    let idler = v
        .columns()
        .into_iter()
        .map(|c| c.iter().map(|x| x.norm_sqr()).sum::<f64>() * d)
        .collect();
    (signal, idler)
}

/// `|⟨a,b⟩|²/(‖a‖²‖b‖²)`: one for fields equal up to a complex factor.
pub fn fidelity(a: &JointAmplitude, b: &JointAmplitude) -> Result<f64> {
    if a.grid() != b.grid() || a.domain() != b.domain() {
        return Err(Error::GridMismatch);
    }
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroField);
    }
    let overlap: num_complex::Complex64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok((overlap.norm_sqr() / (na * nb)).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn grid() -> Grid2D {
        Grid2D::new(64, 20.0, 0.0).unwrap()
    }

    fn gauss(x: f64, c: f64, w: f64) -> f64 {
        (-(x - c).powi(2) / (2.0 * w * w)).exp()
    }

    #[test]
    fn separable_is_pure() {
        let a = JointAmplitude::from_fn(grid(), Domain::Time, |x, y| {
            Complex64::new(gauss(x, 1.0, 1.5), 0.0)
                * Complex64::from_polar(gauss(y, -2.0, 0.7), 0.3 * y)
        });
        let r = schmidt_report(&a).unwrap();
        assert!((r.purity - 1.0).abs() < 1e-10);
        assert_relative_eq!(r.schmidt_number * r.purity, 1.0, max_relative = 1e-14);
        assert!((r.schmidt_weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn two_equal_modes_give_one_half() {
        // orthogonal Hermite–Gaussian pair on each axis
        let a = JointAmplitude::from_fn(grid(), Domain::Time, |x, y| {
            let (g0x, g0y) = (gauss(x, 0.0, 1.0), gauss(y, 0.0, 1.0));
            Complex64::new(g0x * g0y + 2.0 * (x * g0x) * (y * g0y), 0.0)
        });
        let r = schmidt_report(&a).unwrap();
        assert!((r.purity - 0.5).abs() < 1e-10, "{}", r.purity);
        assert!(r.schmidt_weights.windows(2).all(|w| w[0] >= w[1]));
    }

    // exp(-(x² + y²)/2τ² - ρxy/τ²): in u = (x±y)/√2 the widths are (1±ρ)/2τ²,
    // and a product of Gaussians with exponents α, β has P = 2√(αβ)/(α+β) = √(1-ρ²).
    #[test]
    fn correlated_gaussian_matches_closed_form() {
        for rho in [0.3, 0.6, 0.9] {
            let a = JointAmplitude::from_fn(grid(), Domain::Time, |x, y| {
                Complex64::new((-(x * x + y * y) / 2.0 - rho * x * y).exp(), 0.0)
            });
            let p = purity(&a).unwrap();
            assert!(
                (p - (1.0 - rho * rho).sqrt()).abs() < 1e-8,
                "rho {rho}: {p}"
            );
        }
    }

    #[test]
    fn zero_field_is_an_error() {
        let a = JointAmplitude::zeros(grid(), Domain::Time);
        assert!(matches!(schmidt_report(&a), Err(Error::ZeroField)));
        assert!(matches!(fidelity(&a, &a), Err(Error::ZeroField)));
        let (s, i) = marginals(&a);
        assert!(s.iter().chain(&i).all(|&v| v == 0.0));
    }

    fn random_field(seed: u64) -> JointAmplitude {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = 32;
        let g = Grid2D::new(n, 4e-12, 0.0).unwrap();
        let v = ndarray::Array2::from_shape_fn((n, n), |_| {
            Complex64::new(rng.random::<f64>(), rng.random::<f64>() - 0.5)
        });
        JointAmplitude::new(g, Domain::Time, v).unwrap()
    }

    #[test]
    fn marginals_integrate_to_probability() {
        let a = random_field(4);
        let d = a.grid().dt();
        let (s, i) = marginals(&a);
        let r = a.probability();
        assert!((s.iter().sum::<f64>() * d / r - 1.0).abs() < 1e-10);
        assert!((i.iter().sum::<f64>() * d / r - 1.0).abs() < 1e-10);
        let f = a.to_frequency().unwrap();
        let dw = f.grid().dw() / (2.0 * std::f64::consts::PI);
        let (s, _) = marginals(&f);
        assert!((s.iter().sum::<f64>() * dw / r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fidelity_basics() {
        let a = random_field(5);
        assert_relative_eq!(fidelity(&a, &a).unwrap(), 1.0, max_relative = 1e-14);
        let scaled = JointAmplitude::new(
            *a.grid(),
            Domain::Time,
            a.values() * Complex64::new(-0.3, 2.0),
        )
        .unwrap();
        assert_relative_eq!(fidelity(&a, &scaled).unwrap(), 1.0, max_relative = 1e-13);
        let g = grid();
        let x = JointAmplitude::from_fn(g, Domain::Time, |x, y| {
            Complex64::new(gauss(x, 0.0, 1.0) * gauss(y, 0.0, 1.0), 0.0)
        });
        let y = JointAmplitude::from_fn(g, Domain::Time, |x, y| {
            Complex64::new(x * gauss(x, 0.0, 1.0) * gauss(y, 0.0, 1.0), 0.0)
        });
        assert!(fidelity(&x, &y).unwrap() < 1e-20);
        assert!(matches!(fidelity(&a, &x), Err(Error::GridMismatch)));
        assert!(matches!(
            fidelity(&x, &x.to_frequency().unwrap()),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn purity_converges_under_refinement() {
        let f = |x: f64, y: f64| Complex64::new((-(x * x + y * y) / 2.0 - 0.5 * x * y).exp(), 0.0);
        let coarse = purity(&JointAmplitude::from_fn(
            Grid2D::new(64, 20.0, 0.0).unwrap(),
            Domain::Time,
            f,
        ))
        .unwrap();
        let fine = purity(&JointAmplitude::from_fn(
            Grid2D::new(128, 20.0, 0.0).unwrap(),
            Domain::Time,
            f,
        ))
        .unwrap();
        assert!((coarse - fine).abs() < 1e-4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn purity_invariances(seed in 0u64..10_000, re in -3.0f64..3.0, im in -3.0f64..3.0) {
            prop_assume!(re.abs() + im.abs() > 1e-3);
            let a = random_field(seed);
            let p = purity(&a).unwrap();
            prop_assert!((1.0 / 32.0 - 1e-12..=1.0 + 1e-12).contains(&p));
            let scaled = JointAmplitude::new(*a.grid(), Domain::Time, a.values() * Complex64::new(re, im)).unwrap();
            prop_assert!((purity(&scaled).unwrap() - p).abs() < 1e-10);
            let t = JointAmplitude::new(*a.grid(), Domain::Time, a.values().t().to_owned()).unwrap();
            prop_assert!((purity(&t).unwrap() - p).abs() < 1e-10);
            prop_assert!((purity(&a.to_frequency().unwrap()).unwrap() - p).abs() < 1e-8);
        }
    }
}
