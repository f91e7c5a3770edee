use serde::Serialize;

use super::maps::{CoordinateMap, ErmakovMap, OscillatorMap};
use crate::dynamics::{geodesic_flow, newton_flow, IntegratorConfig, Trajectory};
use crate::error::{Error, Result};
use crate::lifts::{build_lift_for, LiftKind};
use crate::potentials::{Family, PotentialSpec};

/// Samples compared along each roundtrip.
pub const ROUNDTRIP_SAMPLES: usize = 1001;

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub family: Family,
    pub lift_kind: LiftKind,
    pub map_used: String,
    /// `max_t |x_linearized(t) − x_newton(t)|` over the compared samples.
    pub max_deviation: f64,
    pub samples: usize,
    /// Set when either path left its domain before the end of the interval.
    pub partial: bool,
    pub t_end: f64,
}

fn reference_config() -> IntegratorConfig {
    IntegratorConfig::dp45(1e-12, 1e-12).uniform(ROUNDTRIP_SAMPLES)
}

/// Linearizes the motion in `potential` from `(x0, v0)`, maps it back to `x(t)` and compares
/// with a high-accuracy integration of Newton's equation.
///
/// Ermakov and oscillator potentials use their explicit maps (straight lines in the flat or
/// conformally flat chart); Ermakov-oscillator and Morse/exponential potentials use the
/// projection of the lifted geodesic.
pub fn roundtrip(potential: &PotentialSpec, x0: f64, v0: f64, t_span: (f64, f64)) -> Result<RoundtripReport> {
    let family = potential.family();
    let kind = LiftKind::designated(family)
        .ok_or_else(|| Error::Argument(format!("no linearizing lift for the {family} family")))?;
    let oracle = newton_flow(potential, x0, v0, t_span, &reference_config())?;
    let times = oracle.times();
    let reference = oracle.coordinate("x")?;
    let (map_used, path, partial) = match family {
        Family::Ermakov => {
            let (x, partial) = ermakov_line(potential, x0, v0, &times)?;
            ("ermakov".to_string(), x, partial)
        }
        Family::Oscillator => ("oscillator".to_string(), oscillator_lines(potential, x0, v0, &times)?, false),
        _ => {
            let (x, partial) = lifted_projection(kind, potential, x0, v0, t_span)?;
            ("lifted_geodesic".to_string(), x, partial)
        }
    };
    let n = path.len().min(reference.len());
    let max_deviation = path.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(RoundtripReport {
        family,
        lift_kind: kind,
        map_used,
        max_deviation,
        samples: n,
        partial: partial || oracle.meta().exited_domain || n < ROUNDTRIP_SAMPLES,
        t_end: times[n.saturating_sub(1)],
    })
}

/// Straight line in the Euclidean chart of the Riemannian Ermakov lift (`α = 2`, `p_z = 1`).
fn ermakov_line(potential: &PotentialSpec, x0: f64, v0: f64, times: &[f64]) -> Result<(Vec<f64>, bool)> {
    let alpha = 2.0;
    let lift = build_lift_for(LiftKind::Riemannian11, potential, alpha, x0, v0)?;
    let shift = potential.param("x0");
    let map = ErmakovMap::new(alpha, potential.param("V0"))?;
    let start = [x0 - shift, 0.0];
    let p_old = [v0, lift.recovery().fixed_momenta["p_z"]];
    let velocity = map.momentum_to_new(&start, &p_old)?;
    let mut xs = Vec::with_capacity(times.len());
    for &t in times {
        let dt = t - times[0];
        let point = [start[0] + dt * velocity[0], start[1] + dt * velocity[1]];
        match map.inverse(&point) {
            Ok(old) => xs.push(old[0] + shift),
            Err(Error::Domain(_)) => return Ok((xs, true)),
            Err(e) => return Err(e),
        }
    }
    Ok((xs, false))
}

/// Null straight lines in the conformally flat chart of the Lorentzian oscillator lift.
/// The chart covers `|√ω v| < π/2`, so the motion is followed in windows of length
/// `π/(3√ω)`, re-centring the chart on the current state at the start of each window.
fn oscillator_lines(potential: &PotentialSpec, x0: f64, v0: f64, times: &[f64]) -> Result<Vec<f64>> {
    let omega = potential.param("omega");
    let shift = potential.param("x0");
    let map = OscillatorMap::new(omega)?;
    let root = omega.sqrt();
    let centred = PotentialSpec::oscillator(omega);
    let lift = build_lift_for(LiftKind::Lorentzian12, &centred, 1.0, x0 - shift, v0)?;
    let p_v = lift.recovery().fixed_momenta["p_v"];
    let window = 2.0 * map.time_limit() / 3.0;
    let t_last = *times.last().expect("non-empty");
    let (mut t_w, mut x_w, mut v_w) = (times[0], x0 - shift, v0);
    let mut xs = Vec::with_capacity(times.len());
    let mut idx = 0;
    while idx < times.len() {
        let t_next = (t_w + window).min(t_last);
        let start = [x_w, 0.0, 0.0];
        let u_dot = 2.0 * centred.profile().value(x_w)? + p_v;
        let dir = map.velocity_to_new(&start, &[v_w, u_dot, 1.0])?;
        let slope = dir[1] + dir[2];
        // Along the line, `arctan(Z̄)/√ω = v = t − t_w` fixes the affine parameter.
        let at = |t: f64| -> Vec<f64> {
            let s = (root * (t - t_w)).tan() / slope;
            (0..3).map(|k| start[k] + s * dir[k]).collect()
        };
        while idx < times.len() && (times[idx] <= t_next || t_next >= t_last) {
            xs.push(map.inverse(&at(times[idx]))?[0] + shift);
            idx += 1;
        }
        let end = at(t_next);
        let old = map.inverse(&end)?;
        let velocity = map.jacobian(&end)? * nalgebra::DVector::from_column_slice(&dir);
        x_w = old[0];
        v_w = velocity[0] / velocity[2];
        t_w = t_next;
    }
    Ok(xs)
}

fn lifted_projection(
    kind: LiftKind,
    potential: &PotentialSpec,
    x0: f64,
    v0: f64,
    t_span: (f64, f64),
) -> Result<(Vec<f64>, bool)> {
    let h = 0.5 * v0 * v0 + potential.profile().value(x0)?;
    let alpha = match kind {
        LiftKind::Mixed13 if potential.param("V0") < 0.0 => -1.0,
        LiftKind::ConformalMixed13 if h > 0.0 => -1.0,
        _ => 1.0,
    };
    let lift = build_lift_for(kind, potential, alpha, x0, v0)?;
    let state = lift.recovered_state(x0, v0, &[], t_span.0)?;
    let traj: Trajectory = geodesic_flow(&lift, &state, t_span, &reference_config())?;
    Ok((traj.coordinate("x")?, traj.meta().exited_domain))
}
