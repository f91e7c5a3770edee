use std::f64::consts::PI;

use eisenhart_core::dynamics::{
    cyclic_momentum_drift, drift_report, geodesic_flow, metric_geodesic_flow, newton_flow, project, reparametrize,
    Parameter,
};
use eisenhart_core::lifts::build_lift_for;
use eisenhart_core::{IntegratorConfig, LiftKind, PhaseState, PotentialSpec};
use proptest::prelude::*;

fn reference() -> IntegratorConfig {
    IntegratorConfig::dp45(1e-12, 1e-12)
}

#[test]
fn rk4_is_fourth_order_on_the_oscillator() {
    let osc = PotentialSpec::oscillator(1.0);
    let err = |h: f64| {
        let traj = newton_flow(&osc, 1.0, 0.0, (0.0, 2.0), &IntegratorConfig::rk4(h)).unwrap();
        (traj.last().q[0] - 2f64.cos()).abs()
    };
    let ratio = err(0.04) / err(0.02);
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn newton_examples() {
    let free = newton_flow(&PotentialSpec::linear(0.0, 0.0), 0.0, 1.0, (0.0, 5.0), &reference()).unwrap();
    assert!((free.last().q[0] - 5.0).abs() < 1e-12);
    let osc = newton_flow(&PotentialSpec::oscillator(1.0), 1.0, 0.0, (0.0, PI), &reference()).unwrap();
    assert!((osc.last().q[0] + 1.0).abs() < 1e-8);
    let erm = newton_flow(&PotentialSpec::ermakov(0.5).unwrap(), 1.0, 0.0, (0.0, 1.0), &reference()).unwrap();
    assert!((erm.last().q[0] - 2f64.sqrt()).abs() < 1e-8);
}

#[test]
fn ermakov_collapse_truncates_with_exit_flag() {
    // Attractive inverse-square potential: x(t)² = 1 − 2t + (1 − 2·0.1)t², hitting zero before t = 2.
    let pot = PotentialSpec::ermakov(-0.1).unwrap();
    let traj = newton_flow(&pot, 1.0, -1.0, (0.0, 5.0), &reference()).unwrap();
    assert!(traj.meta().exited_domain);
    assert!(traj.last().t < 2.0);
    assert!(traj.samples().iter().all(|s| s.q[0] > 0.0));
}

#[test]
fn step_budget_exhaustion_is_an_error() {
    let cfg = IntegratorConfig::rk4(0.01).with_max_steps(10);
    assert!(newton_flow(&PotentialSpec::oscillator(1.0), 1.0, 0.0, (0.0, 1.0), &cfg).is_err());
}

#[test]
fn lifted_flows_reproduce_closed_forms() {
    let osc = PotentialSpec::oscillator(1.0);
    let sys = build_lift_for(LiftKind::Lorentzian12, &osc, 1.0, 1.0, 0.0).unwrap();
    let s0 = sys.recovered_state(1.0, 0.0, &[], 0.0).unwrap();
    let traj = geodesic_flow(&sys, &s0, (0.0, PI), &reference()).unwrap();
    assert!((traj.last().q[0] + 1.0).abs() < 1e-6);

    let erm = PotentialSpec::ermakov(0.5).unwrap();
    let sys = build_lift_for(LiftKind::Riemannian11, &erm, 2.0, 1.0, 0.0).unwrap();
    let s0 = sys.recovered_state(1.0, 0.0, &[], 0.0).unwrap();
    let traj = geodesic_flow(&sys, &s0, (0.0, 1.0), &reference()).unwrap();
    assert!((traj.last().q[0] - 2f64.sqrt()).abs() < 1e-6);
}

#[test]
fn zero_momenta_give_a_constant_trajectory() {
    let sys = build_lift_for(LiftKind::Mixed13, &PotentialSpec::ermakov_oscillator(1.0, 0.5).unwrap(), 1.0, 1.0, 0.0)
        .unwrap();
    let s0 = PhaseState::new(vec![1.2, 0.3, -0.4, 0.5], vec![0.0; 4], 0.0).unwrap();
    let traj = metric_geodesic_flow(sys.metric(), &s0, (0.0, 3.0), &IntegratorConfig::rk4(0.1)).unwrap();
    for s in traj.samples() {
        assert_eq!(s.q, s0.q);
        assert_eq!(s.p, s0.p);
    }
    let proj = project(&traj, &["x"]).unwrap();
    assert!(proj.samples().iter().all(|s| s.q == vec![1.2]));
}

#[test]
fn projection_keeps_samples_and_is_idempotent() {
    let sys = build_lift_for(LiftKind::Lorentzian12, &PotentialSpec::oscillator(1.0), 1.0, 1.0, 0.2).unwrap();
    let s0 = sys.recovered_state(1.0, 0.2, &[], 0.0).unwrap();
    let traj = geodesic_flow(&sys, &s0, (0.0, 2.0), &IntegratorConfig::rk4(0.01)).unwrap();
    let once = project(&traj, &["x"]).unwrap();
    assert_eq!(once.len(), traj.len());
    assert_eq!(once.labels(), ["x"]);
    assert_eq!(project(&once, &["x"]).unwrap(), once);
    assert!(project(&traj, &["w"]).is_err());
}

#[test]
fn reparametrization_examples() {
    let traj = newton_flow(&PotentialSpec::oscillator(1.0), 1.0, 0.0, (0.0, 2.0), &IntegratorConfig::rk4(0.05)).unwrap();
    let same = reparametrize(&traj, |_| Ok(1.0)).unwrap();
    assert_eq!(same.parameter(), Parameter::Tau);
    assert_eq!(same.times(), traj.times());
    let doubled = reparametrize(&traj, |_| Ok(2.0)).unwrap();
    for (tau, t) in doubled.times().iter().zip(traj.times()) {
        assert_eq!(*tau, 2.0 * t);
    }
    for (a, b) in doubled.samples().iter().zip(traj.samples()) {
        assert_eq!(a.p[0], b.p[0] / 2.0);
    }
    assert!(reparametrize(&traj, |s| Ok(s.q[0])).is_err());
}

#[test]
fn drift_examples() {
    let free = newton_flow(&PotentialSpec::linear(0.0, 0.0), 0.0, 1.0, (0.0, 5.0), &IntegratorConfig::rk4(0.1)).unwrap();
    assert!(drift_report(&free, &PotentialSpec::linear(0.0, 0.0)).unwrap() < 1e-12);
    let osc = PotentialSpec::oscillator(1.0);
    let traj = newton_flow(&osc, 1.0, 0.0, (0.0, 100.0), &IntegratorConfig::dp45(1e-10, 1e-10)).unwrap();
    assert!(drift_report(&traj, &osc).unwrap() < 1e-8);
    let rest = newton_flow(&osc, 0.0, 0.0, (0.0, 3.0), &IntegratorConfig::rk4(0.1)).unwrap();
    assert_eq!(drift_report(&rest, &osc).unwrap(), 0.0);
}

#[test]
fn cyclic_momenta_are_conserved_on_every_lift() {
    let cases = [
        (LiftKind::Riemannian11, PotentialSpec::ermakov(0.5).unwrap(), 2.0, 1.0, 0.4),
        (LiftKind::Lorentzian12, PotentialSpec::oscillator(1.0), 1.0, 1.0, 0.0),
        (LiftKind::Mixed13, PotentialSpec::ermakov_oscillator(1.0, 0.5).unwrap(), 1.0, 1.0, 0.3),
        (LiftKind::ConformalMixed13, PotentialSpec::morse(1.0, 1.0, 1.0).unwrap(), -1.0, 0.0, 0.0),
    ];
    for (kind, pot, alpha, x0, v0) in cases {
        let sys = build_lift_for(kind, &pot, alpha, x0, v0).unwrap();
        let s0 = sys.recovered_state(x0, v0, &[], 0.0).unwrap();
        let traj = geodesic_flow(&sys, &s0, (0.0, 10.0), &IntegratorConfig::rk4(0.01)).unwrap();
        assert!(cyclic_momentum_drift(&traj, sys.metric()) < 1e-10, "{kind}");
        assert!(traj.meta().max_energy_drift.unwrap() < 1e-8, "{kind}");
    }
}

#[test]
fn csv_export_is_deterministic() {
    let run = || {
        let sys = build_lift_for(LiftKind::Lorentzian12, &PotentialSpec::oscillator(1.0), 1.0, 1.0, 0.0).unwrap();
        let s0 = sys.recovered_state(1.0, 0.0, &[], 0.0).unwrap();
        geodesic_flow(&sys, &s0, (0.0, 5.0), &reference().uniform(201)).unwrap().to_csv()
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    assert!(a.starts_with("t,x,u,v,p_x,p_u,p_v\n"));
    assert_eq!(a.lines().count(), 202);
}

#[test]
fn uniform_sampling_lands_on_the_grid() {
    let traj =
        newton_flow(&PotentialSpec::oscillator(1.0), 1.0, 0.0, (0.0, 4.0), &reference().uniform(41)).unwrap();
    assert_eq!(traj.len(), 41);
    for (k, t) in traj.times().iter().enumerate() {
        assert!((t - 0.1 * k as f64).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn extended_initial_data_do_not_move_x(
        case in 0usize..4,
        extended in proptest::collection::vec(-5.0f64..5.0, 3),
    ) {
        let (kind, pot, alpha, x0, v0) = [
            (LiftKind::Riemannian11, PotentialSpec::ermakov(0.5).unwrap(), 2.0, 1.0, 0.0),
            (LiftKind::Lorentzian12, PotentialSpec::oscillator(1.0), 1.0, 1.0, 0.0),
            (LiftKind::Mixed13, PotentialSpec::ermakov_oscillator(1.0, 0.5).unwrap(), 1.0, 1.0, 0.3),
            (LiftKind::ConformalMixed13, PotentialSpec::morse(1.0, 1.0, 1.0).unwrap(), -1.0, 0.0, 0.0),
        ][case].clone();
        let sys = build_lift_for(kind, &pot, alpha, x0, v0).unwrap();
        let cfg = IntegratorConfig::rk4(0.02);
        let base = geodesic_flow(&sys, &sys.recovered_state(x0, v0, &[], 0.0).unwrap(), (0.0, 4.0), &cfg).unwrap();
        let extra = &extended[..kind.dim() - 1];
        let moved = geodesic_flow(&sys, &sys.recovered_state(x0, v0, extra, 0.0).unwrap(), (0.0, 4.0), &cfg).unwrap();
        let (a, b) = (base.coordinate("x").unwrap(), moved.coordinate("x").unwrap());
        prop_assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p - q).abs() < 1e-12);
        }
    }
}
