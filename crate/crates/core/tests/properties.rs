//! End-to-end properties of the propagator and the closed forms.

use biphoton::analysis::{fidelity, purity};
use biphoton::analytic::no_gvd_jta;
use biphoton::propagator::{propagate, Effects, SolverConfig, StepOrdering};
use biphoton::pump::PumpPair;
use biphoton::schemes::{collision_scheme, Method, SchemeOverrides, SchemeSpec};

fn collision(list: &str, o: SchemeOverrides) -> SchemeSpec {
    collision_scheme(1.0, &o)
        .unwrap()
        .with_effects(Effects::parse_list(list).unwrap())
}

fn frobenius_distance(a: &biphoton::JointAmplitude, b: &biphoton::JointAmplitude) -> f64 {
    let d: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    let n: f64 = b.values().iter().map(|y| y.norm_sqr()).sum();
    (d / n).sqrt()
}

#[test]
fn delaying_pumps_and_window_together_leaves_magnitude_unchanged() {
    let spec = collision("npm,gvd", SchemeOverrides::default());
    let wg = spec.waveguide(0).unwrap();
    let cfg = spec.solver();
    let grid = spec.grid().unwrap();
    let tau = 3.7e-12;
    let shift = |pumps: &PumpPair| match *pumps {
        PumpPair::Dual { mut p, mut q } => {
            p.t_launch += tau;
            q.t_launch += tau;
            PumpPair::dual(p, q)
        }
        PumpPair::Degenerate { .. } => unreachable!(),
    };
    let base = propagate(&wg, &spec.active_pumps(), &cfg, &grid)
        .unwrap()
        .amplitude;
    let moved_grid =
        biphoton::Grid2D::new(grid.n(), grid.time_span(), grid.t_center() + tau).unwrap();
    let moved = propagate(&wg, &shift(&spec.active_pumps()), &cfg, &moved_grid)
        .unwrap()
        .amplitude;
    let peak = base.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (x, y) in base.values().iter().zip(moved.values()) {
        assert!((x.norm() - y.norm()).abs() <= 1e-9 * peak);
    }
}

#[test]
fn split_step_matches_closed_form_without_gvd() {
    let o = SchemeOverrides {
        grid_n: Some(512),
        time_span: Some(160e-12),
        ..Default::default()
    };
    let spec = collision("none", o);
    let run = spec.run(Method::SplitStep, 0).unwrap();
    let exact = no_gvd_jta(
        &spec.grid().unwrap(),
        &spec.waveguide(0).unwrap(),
        &spec.active_pumps().scaled(run.calibration.scale),
    )
    .unwrap()
    .to_frequency()
    .unwrap();
    assert!(fidelity(&run.amplitude, &exact).unwrap() >= 0.999);
    assert!((run.report.purity - purity(&exact).unwrap()).abs() <= 0.002);
}

#[test]
fn symmetric_ordering_beats_sequential_and_both_converge() {
    let spec = collision("npm,gvd", SchemeOverrides::default());
    let wg = spec.waveguide(0).unwrap();
    let pumps = spec.active_pumps();
    let grid = spec.grid().unwrap();
    let field = |dz: f64, ordering: StepOrdering| {
        let cfg = SolverConfig {
            ordering,
            ..SolverConfig::new(dz, spec.effects)
        };
        propagate(&wg, &pumps, &cfg, &grid).unwrap().amplitude
    };
    let reference = field(0.5e-3, StepOrdering::Symmetric);
    let err = |dz, o| frobenius_distance(&field(dz, o), &reference);
    let (sym, seq) = (
        err(0.02, StepOrdering::Symmetric),
        err(0.02, StepOrdering::Sequential),
    );
    assert!(sym < seq, "symmetric {sym:e}, sequential {seq:e}");
    let seq_fine = err(0.0025, StepOrdering::Sequential);
    assert!(seq_fine < seq / 4.0, "sequential {seq:e} -> {seq_fine:e}");
    assert!(err(0.0025, StepOrdering::Symmetric) < 1e-3);
}

#[test]
fn collision_purity_rises_with_length_without_effects() {
    let ps: Vec<f64> = [0.2, 0.4, 0.6, 0.8, 1.0]
        .iter()
        .map(|&l| {
            collision_scheme(l, &SchemeOverrides::default())
                .unwrap()
                .run(Method::Analytic, 0)
                .unwrap()
                .report
                .purity
        })
        .collect();
    for w in ps.windows(2) {
        assert!(w[1] >= w[0] - 1e-9, "{ps:?}");
    }
    assert!(ps[4] > 0.99, "{ps:?}");
}

#[test]
fn same_seed_same_field() {
    let spec = collision("df,npm", SchemeOverrides::default());
    let a = spec.run(Method::SplitStep, 5).unwrap();
    let b = spec.run(Method::SplitStep, 5).unwrap();
    assert_eq!(a.amplitude.values(), b.amplitude.values());
    let c = spec.run(Method::SplitStep, 6).unwrap();
    assert_ne!(a.amplitude.values(), c.amplitude.values());
}
