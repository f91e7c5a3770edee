//! Linearizing coordinate maps, null-geodesic straightening, the conformal invariance of
//! null geodesics and end-to-end roundtrips.

mod conformal;
mod maps;
mod roundtrip;

pub use conformal::{conformal_geodesic_compare, ConformalComparison, NULL_TOLERANCE, PATH_SAMPLES};
pub use maps::{
    ermakov_map, null_straightening, oscillator_map, CoordinateMap, ErmakovMap, NullStraightening, OscillatorMap,
    STRAIGHTENING_TOLERANCE,
};
pub use roundtrip::{roundtrip, RoundtripReport, ROUNDTRIP_SAMPLES};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::dynamics::{cyclic_momentum_drift, drift_report, metric_geodesic_flow, reparametrize, IntegratorConfig, PhaseState};
use crate::error::{Error, Result};
use crate::geometry::MetricChart;
use crate::lifts::riemannian_metric;
use crate::numerics::{interpolate_cubic, second_differences};
use crate::potentials::Profile;

/// Metric of the new chart, `Jᵀ g(old) J`.
pub fn pullback<C, M>(map: &C, metric: &M, new: &[f64]) -> Result<DMatrix<f64>>
where
    C: CoordinateMap + ?Sized,
    M: MetricChart + ?Sized,
{
    let j = map.jacobian(new)?;
    let g = metric.components(&map.inverse(new)?)?;
    Ok(j.transpose() * g * j)
}

#[derive(Clone, Debug, Serialize)]
pub struct StraighteningReport {
    /// `max |d²X/dτ²|` by second differences on the uniform `τ` grid.
    pub max_x_residual: f64,
    /// `max |d²z/dτ²|` on the same grid.
    pub max_z_residual: f64,
    pub tau_end: f64,
    pub grid_points: usize,
    /// Largest `|H|` along the geodesic (the exact value is zero).
    pub energy_drift: f64,
    /// Largest relative drift of `p_z`.
    pub momentum_drift: f64,
}

/// Integrates the null geodesic of `dx² − dz²/V` (the `α = −1` Riemannian lift) from
/// `x0` with `p_z = 1`, reparametrizes by `dτ = V dt`, straightens `x` into `X(x)` and
/// measures the second differences of `X(τ)` and `z(τ)`, which vanish for straight lines.
pub fn straightening_check(
    potential: &Profile,
    x0: f64,
    t_end: f64,
    step: f64,
    grid_points: usize,
) -> Result<StraighteningReport> {
    if grid_points < 4 {
        return Err(Error::Argument("straightening check needs at least 4 grid points".into()));
    }
    let metric = riemannian_metric(potential, -1.0)?;
    let v0 = potential.value(x0)?;
    if !(v0 > 0.0) {
        return Err(Error::Domain(format!("straightening needs V > 0, V({x0}) = {v0}")));
    }
    let state = PhaseState::new(vec![x0, 0.0], vec![v0.sqrt(), 1.0], 0.0)?;
    let traj = metric_geodesic_flow(&metric, &state, (0.0, t_end), &IntegratorConfig::rk4(step))?;
    if traj.meta().exited_domain {
        return Err(Error::Domain("null geodesic left the domain".into()));
    }
    let reparam = reparametrize(&traj, |s| potential.value(s.q[0]))?;
    let taus = reparam.times();
    let (xs, zs) = (reparam.coordinate("x")?, reparam.coordinate("z")?);
    let (t0, t1) = (taus[0], *taus.last().expect("non-empty"));
    let h = (t1 - t0) / (grid_points - 1) as f64;
    let straight = NullStraightening::new(potential, x0)?;
    let mut big_x = Vec::with_capacity(grid_points);
    let mut big_z = Vec::with_capacity(grid_points);
    for k in 0..grid_points {
        let tau = if k + 1 == grid_points { t1 } else { t0 + h * k as f64 };
        big_x.push(straight.straighten(interpolate_cubic(&taus, &xs, tau)?)?);
        big_z.push(interpolate_cubic(&taus, &zs, tau)?);
    }
    let max = |v: Vec<f64>| v.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    Ok(StraighteningReport {
        max_x_residual: max(second_differences(&big_x, h)),
        max_z_residual: max(second_differences(&big_z, h)),
        tau_end: t1,
        grid_points,
        energy_drift: drift_report(&traj, &metric)?,
        momentum_drift: cyclic_momentum_drift(&traj, &metric),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifts::{build_lift, LiftKind};
    use crate::PotentialSpec;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn ermakov_map_examples() {
        let m = ermakov_map(1.0, 1.0).unwrap();
        assert_eq!(m.inverse(&[1.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        let p = m.inverse(&[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(p[0], 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], FRAC_PI_4, epsilon = 1e-15);
        assert!(matches!(m.inverse(&[0.0, 1.0]), Err(Error::Domain(_))));
        assert!(matches!(ermakov_map(-1.0, 1.0), Err(Error::Argument(_))));
    }

    #[test]
    fn ermakov_map_transports_energy() {
        let sys = build_lift(LiftKind::Riemannian11, &PotentialSpec::ermakov(0.5).unwrap(), 2.0, 0.0).unwrap();
        let m = ermakov_map(2.0, 0.5).unwrap();
        let new = [1.0, 1.0];
        let q = m.inverse(&new).unwrap();
        assert_abs_diff_eq!(q[0], 2f64.sqrt(), epsilon = 1e-15);
        let p = m.momentum_to_old(&new, &[0.3, -0.2]).unwrap();
        let s = PhaseState::new(q, p, 0.0).unwrap();
        assert_abs_diff_eq!(crate::lifts::lifted_hamiltonian(&sys, &s).unwrap(), 0.065, epsilon = 1e-12);
    }

    #[test]
    fn oscillator_map_examples() {
        let m = oscillator_map(1.0).unwrap();
        let p = m.inverse(&[2.5, 0.0, 0.0]).unwrap();
        assert_eq!((p[0], p[2]), (2.5, 0.0));
        let p = m.inverse(&[2.0, 0.4, 0.6]).unwrap();
        assert_abs_diff_eq!(p[0], 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(p[2], FRAC_PI_4, epsilon = 1e-15);
        assert!(matches!(oscillator_map(0.0), Err(Error::Argument(_))));
        assert!(matches!(m.forward(&[1.0, 0.0, PI]), Err(Error::Domain(_))));
    }

    #[test]
    fn straightening_examples() {
        let free = null_straightening(&Profile::constant(1.0), 0.5).unwrap();
        assert_abs_diff_eq!(free.straighten(3.0).unwrap(), 2.5, epsilon = 1e-12);
        let exp = null_straightening(&Profile::exp(1.0, 1.0), 0.0).unwrap();
        for x in [-2.0, 0.7, 3.0] {
            assert_abs_diff_eq!(exp.straighten(x).unwrap(), 2.0 * ((0.5 * x).exp() - 1.0), epsilon = 1e-9);
            let back = exp.unstraighten(exp.straighten(x).unwrap()).unwrap();
            assert_abs_diff_eq!(back, x, epsilon = 1e-10);
        }
        let erm = null_straightening(&Profile::power(1.0, -2), 1.0).unwrap();
        assert_abs_diff_eq!(erm.straighten(4.0).unwrap(), 4f64.ln(), epsilon = 1e-9);
        assert_abs_diff_eq!(erm.unstraighten(-3.0).unwrap(), (-3f64).exp(), epsilon = 1e-10);
        let neg = Profile::constant(-1.0);
        assert!(matches!(null_straightening(&neg, 0.0), Err(Error::Domain(_))));
    }
}
