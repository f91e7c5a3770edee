//! Newtonian and lifted geodesic flows, reparametrization and conservation monitoring.

mod ode;
mod trajectory;

pub use ode::{IntegratorConfig, Method, Sampling};
pub use trajectory::{Parameter, PhaseState, Trajectory, TrajectoryMeta};

use ode::{solve, Rhs, Solution};

use crate::error::{Error, Result};
use crate::geometry::{LineMetric, MetricChart};
use crate::lifts::{metric_hamiltonian, LiftedSystem};
use crate::potentials::PotentialSpec;

/// Scalar energy function on phase space.
pub trait Hamiltonian {
    fn hamiltonian(&self, state: &PhaseState) -> Result<f64>;
}

/// `½p² + V(x)` on `(x, p_x)`.
impl Hamiltonian for PotentialSpec {
    fn hamiltonian(&self, state: &PhaseState) -> Result<f64> {
        if state.dim() != 1 {
            return Err(Error::Argument(format!("expected a one-dimensional state, got {}", state.dim())));
        }
        Ok(0.5 * state.p[0] * state.p[0] + self.profile().value(state.q[0])?)
    }
}

impl Hamiltonian for LineMetric {
    fn hamiltonian(&self, state: &PhaseState) -> Result<f64> {
        metric_hamiltonian(self, state)
    }
}

struct Newton<'a> {
    potential: &'a PotentialSpec,
}

impl Rhs for Newton<'_> {
    fn eval(&mut self, _t: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
        out[0] = y[1];
        out[1] = -self.potential.profile().derivative(y[0], 1)?;
        Ok(())
    }

    fn admits(&self, y: &[f64]) -> bool {
        self.potential.admits(y[0])
    }
}

/// Geodesic flow `q̇ = g^{-1}p`, `ṗ_k = −½ p·∂_k g^{-1}·p`. Coordinates along which the
/// metric is constant are integrated as displacements from zero.
struct Geodesic<'a, M: MetricChart + ?Sized> {
    metric: &'a M,
    varying: Vec<usize>,
    offsets: Vec<f64>,
    point: Vec<f64>,
}

impl<'a, M: MetricChart + ?Sized> Geodesic<'a, M> {
    fn new(metric: &'a M, q0: &[f64]) -> Self {
        let n = metric.dim();
        let varying: Vec<usize> = (0..n).filter(|&a| metric.varies_along(a)).collect();
        let offsets = (0..n).map(|a| if varying.contains(&a) { 0.0 } else { q0[a] }).collect();
        Geodesic { metric, varying, offsets, point: vec![0.0; n] }
    }

    fn absolute(&mut self, q: &[f64]) {
        for (i, (v, o)) in q.iter().zip(&self.offsets).enumerate() {
            self.point[i] = v + o;
        }
    }

    fn force(&self, p: &[f64]) -> Result<Vec<f64>> {
        let n = p.len();
        let mut f = vec![0.0; n];
        for &k in &self.varying {
            let d = self.metric.inverse_partial(&self.point, k)?;
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += d[(i, j)] * p[i] * p[j];
                }
            }
            f[k] = -0.5 * s;
        }
        Ok(f)
    }
}

impl<M: MetricChart + ?Sized> Rhs for Geodesic<'_, M> {
    fn eval(&mut self, _t: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
        let n = y.len() / 2;
        self.absolute(&y[..n]);
        let p = &y[n..];
        let ginv = self.metric.inverse(&self.point)?;
        for i in 0..n {
            out[i] = (0..n).map(|j| ginv[(i, j)] * p[j]).sum();
        }
        let f = self.force(p)?;
        out[n..].copy_from_slice(&f);
        Ok(())
    }

    fn admits(&self, y: &[f64]) -> bool {
        let n = y.len() / 2;
        let q: Vec<f64> = y[..n].iter().zip(&self.offsets).map(|(v, o)| v + o).collect();
        self.metric.admits(&q)
    }
}

fn assemble(
    labels: Vec<String>,
    sol: Solution,
    n: usize,
    offsets: &[f64],
    method: Method,
    uniform: bool,
) -> Result<Trajectory> {
    let samples = sol
        .ts
        .iter()
        .zip(&sol.ys)
        .map(|(&t, y)| {
            let q = y[..n].iter().zip(offsets).map(|(v, o)| v + o).collect();
            PhaseState { q, p: y[n..].to_vec(), t }
        })
        .collect();
    let meta = TrajectoryMeta {
        method: Some(method),
        steps: sol.steps,
        rejected_steps: sol.rejected,
        max_energy_drift: None,
        exited_domain: sol.exited,
        uniform,
    };
    Trajectory::new(labels, Parameter::T, samples, meta)
}

fn check_span(t_span: (f64, f64)) -> Result<()> {
    if !(t_span.0.is_finite() && t_span.1.is_finite() && t_span.1 > t_span.0) {
        return Err(Error::Argument(format!("time span must satisfy t0 < t1, got {t_span:?}")));
    }
    Ok(())
}

/// Solves `ẍ = −V′(x)` from `(x0, v0)`. Leaving the potential's domain truncates the
/// trajectory and sets `meta.exited_domain`.
pub fn newton_flow(
    potential: &PotentialSpec,
    x0: f64,
    v0: f64,
    t_span: (f64, f64),
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    check_span(t_span)?;
    if !potential.admits(x0) {
        return Err(Error::Domain(format!("x0 = {x0} outside the potential's domain")));
    }
    let sol = solve(&mut Newton { potential }, &[x0, v0], t_span.0, t_span.1, config)?;
    let uniform = matches!(config.sampling, Sampling::Uniform { .. });
    let mut traj = assemble(vec!["x".into()], sol, 1, &[0.0], config.method, uniform)?;
    traj.meta_mut().max_energy_drift = Some(drift_report(&traj, potential)?);
    Ok(traj)
}

/// Geodesic (Hamiltonian) flow of `½ g^{ij} p_i p_j` for any metric chart.
pub fn metric_geodesic_flow<M: MetricChart + ?Sized>(
    metric: &M,
    state0: &PhaseState,
    t_span: (f64, f64),
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    check_span(t_span)?;
    let n = metric.dim();
    if state0.dim() != n {
        return Err(Error::Argument(format!("state has dimension {}, metric {n}", state0.dim())));
    }
    if !metric.admits(&state0.q) {
        return Err(Error::Domain(format!("initial point {:?} outside the metric's domain", state0.q)));
    }
    let mut rhs = Geodesic::new(metric, &state0.q);
    check_force(&mut rhs, metric, state0)?;
    let mut y0: Vec<f64> = state0.q.iter().zip(&rhs.offsets).map(|(q, o)| q - o).collect();
    y0.extend_from_slice(&state0.p);
    let offsets = rhs.offsets.clone();
    let sol = solve(&mut rhs, &y0, t_span.0, t_span.1, config)?;
    let uniform = matches!(config.sampling, Sampling::Uniform { .. });
    assemble(metric.labels(), sol, n, &offsets, config.method, uniform)
}

/// Compares the analytic `−∂H/∂q` with a central difference of the Hamiltonian at the
/// initial state; a mismatch means the metric's derivative data are inconsistent.
fn check_force<M: MetricChart + ?Sized>(rhs: &mut Geodesic<'_, M>, metric: &M, state: &PhaseState) -> Result<()> {
    rhs.absolute(&state.q.iter().zip(&rhs.offsets).map(|(q, o)| q - o).collect::<Vec<_>>());
    let analytic = rhs.force(&state.p)?;
    for &k in &rhs.varying {
        let h = 1e-6 * state.q[k].abs().max(1.0);
        let shifted = |d: f64| -> Result<Option<f64>> {
            let mut s = state.clone();
            s.q[k] += d;
            if !metric.admits(&s.q) {
                return Ok(None);
            }
            metric_hamiltonian(metric, &s).map(Some)
        };
        if let (Some(hp), Some(hm)) = (shifted(h)?, shifted(-h)?) {
            let fd = -(hp - hm) / (2.0 * h);
            let scale = 1.0 + analytic[k].abs().max(fd.abs());
            if (fd - analytic[k]).abs() > 1e-4 * scale {
                return Err(Error::Numeric(format!(
                    "metric derivative inconsistent along axis {k}: analytic {} vs difference {fd}",
                    analytic[k]
                )));
            }
        }
    }
    Ok(())
}

struct Clocked<'a, M: MetricChart + ?Sized, F> {
    inner: Geodesic<'a, M>,
    factor: F,
}

impl<M: MetricChart + ?Sized, F: Fn(&[f64]) -> Result<f64>> Rhs for Clocked<'_, M, F> {
    fn eval(&mut self, t: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
        let m = y.len() - 1;
        self.inner.eval(t, &y[..m], &mut out[..m])?;
        out[m] = (self.factor)(&self.inner.point)?;
        if out[m] > 0.0 {
            Ok(())
        } else {
            Err(Error::Reparametrization(format!("N² = {} at {:?}", out[m], self.inner.point)))
        }
    }

    fn admits(&self, y: &[f64]) -> bool {
        self.inner.admits(&y[..y.len() - 1])
    }
}

/// Geodesic flow together with `τ(t) = t₀ + ∫ N²(q) dt`, integrated as an extra state
/// component so `τ` carries the integrator's accuracy. Returns the trajectory in `t` and
/// the `τ` value at every sample.
pub fn metric_geodesic_flow_with_clock<M, F>(
    metric: &M,
    state0: &PhaseState,
    t_span: (f64, f64),
    config: &IntegratorConfig,
    factor: F,
) -> Result<(Trajectory, Vec<f64>)>
where
    M: MetricChart + ?Sized,
    F: Fn(&[f64]) -> Result<f64>,
{
    check_span(t_span)?;
    let n = metric.dim();
    if state0.dim() != n {
        return Err(Error::Argument(format!("state has dimension {}, metric {n}", state0.dim())));
    }
    if !metric.admits(&state0.q) {
        return Err(Error::Domain(format!("initial point {:?} outside the metric's domain", state0.q)));
    }
    let mut rhs = Clocked { inner: Geodesic::new(metric, &state0.q), factor };
    check_force(&mut rhs.inner, metric, state0)?;
    let offsets = rhs.inner.offsets.clone();
    let mut y0: Vec<f64> = state0.q.iter().zip(&offsets).map(|(q, o)| q - o).collect();
    y0.extend_from_slice(&state0.p);
    y0.push(t_span.0);
    let mut sol = solve(&mut rhs, &y0, t_span.0, t_span.1, config)?;
    let taus = sol.ys.iter_mut().map(|y| y.pop().expect("clock component")).collect();
    let uniform = matches!(config.sampling, Sampling::Uniform { .. });
    Ok((assemble(metric.labels(), sol, n, &offsets, config.method, uniform)?, taus))
}

/// Geodesic flow of a lifted system; records the lifted-energy drift.
pub fn geodesic_flow(
    system: &LiftedSystem,
    state0: &PhaseState,
    t_span: (f64, f64),
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let mut traj = metric_geodesic_flow(system.metric(), state0, t_span, config)?;
    traj.meta_mut().max_energy_drift = Some(drift_report(&traj, system)?);
    Ok(traj)
}

/// Restricts a trajectory to the given coordinates and their momenta.
pub fn project(traj: &Trajectory, labels: &[&str]) -> Result<Trajectory> {
    if labels.is_empty() {
        return Err(Error::Argument("projection needs at least one label".into()));
    }
    let idx: Vec<usize> = labels.iter().map(|l| traj.index_of(l)).collect::<Result<_>>()?;
    let samples = traj
        .samples()
        .iter()
        .map(|s| PhaseState {
            q: idx.iter().map(|&i| s.q[i]).collect(),
            p: idx.iter().map(|&i| s.p[i]).collect(),
            t: s.t,
        })
        .collect();
    Trajectory::new(labels.iter().map(|l| l.to_string()).collect(), traj.parameter(), samples, traj.meta().clone())
}

/// Resamples a trajectory in `τ` with `dτ = N² dt`, integrated by the trapezoid rule from
/// `τ = t₀`. Momenta become `p / N²`.
pub fn reparametrize<F>(traj: &Trajectory, factor: F) -> Result<Trajectory>
where
    F: Fn(&PhaseState) -> Result<f64>,
{
    let weights: Vec<f64> = traj
        .samples()
        .iter()
        .map(|s| {
            let w = factor(s)?;
            if w > 0.0 && w.is_finite() {
                Ok(w)
            } else {
                Err(Error::Reparametrization(format!("N² = {w} at t = {}", s.t)))
            }
        })
        .collect::<Result<_>>()?;
    let samples = traj.samples();
    let mut tau = samples[0].t;
    let mut out = Vec::with_capacity(samples.len());
    for (k, s) in samples.iter().enumerate() {
        if k > 0 {
            tau += 0.5 * (weights[k] + weights[k - 1]) * (s.t - samples[k - 1].t);
        }
        out.push(PhaseState { q: s.q.clone(), p: s.p.iter().map(|p| p / weights[k]).collect(), t: tau });
    }
    let (labels, _, meta) = traj.clone().into_parts();
    Trajectory::new(labels, Parameter::Tau, out, meta)
}

/// `max |H(s) − H(s₀)| / max(1, |H(s₀)|)` over the samples.
pub fn drift_report<H: Hamiltonian + ?Sized>(traj: &Trajectory, system: &H) -> Result<f64> {
    let h0 = system.hamiltonian(traj.first())?;
    let mut worst: f64 = 0.0;
    for s in traj.samples() {
        worst = worst.max((system.hamiltonian(s)? - h0).abs());
    }
    Ok(worst / h0.abs().max(1.0))
}

/// Largest relative change `|p_i − p_i(0)| / max(1, |p_i(0)|)` of the momenta conjugate to
/// coordinates the metric does not depend on.
pub fn cyclic_momentum_drift<M: MetricChart + ?Sized>(traj: &Trajectory, metric: &M) -> f64 {
    let p0 = &traj.first().p;
    let mut worst: f64 = 0.0;
    for axis in (0..metric.dim()).filter(|&a| !metric.varies_along(a)) {
        for s in traj.samples() {
            worst = worst.max((s.p[axis] - p0[axis]).abs() / p0[axis].abs().max(1.0));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifts::{build_lift, LiftKind};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn tight() -> IntegratorConfig {
        IntegratorConfig::dp45(1e-12, 1e-12)
    }

    #[test]
    fn newton_examples() {
        let t = newton_flow(&PotentialSpec::oscillator(1.0), 1.0, 0.0, (0.0, PI), &tight()).unwrap();
        assert_abs_diff_eq!(t.last().q[0], -1.0, epsilon = 1e-8);
        let t = newton_flow(&PotentialSpec::ermakov(0.5).unwrap(), 1.0, 0.0, (0.0, 1.0), &tight()).unwrap();
        assert_abs_diff_eq!(t.last().q[0], 2f64.sqrt(), epsilon = 1e-8);
        let t = newton_flow(&PotentialSpec::linear(0.0, 0.0), 0.0, 1.0, (0.0, 5.0), &IntegratorConfig::rk4(0.1)).unwrap();
        assert_abs_diff_eq!(t.last().q[0], 5.0, epsilon = 1e-12);
        assert!(t.meta().max_energy_drift.unwrap() < 1e-12);
    }

    #[test]
    fn geodesic_examples() {
        let sys = build_lift(LiftKind::Riemannian11, &PotentialSpec::ermakov(1.0).unwrap(), 2.0, 0.5).unwrap();
        let s0 = sys.recovered_state(1.0, 0.0, &[], 0.0).unwrap();
        let t = geodesic_flow(&sys, &s0, (0.0, 1.0), &tight()).unwrap();
        assert_abs_diff_eq!(t.last().q[0], 3f64.sqrt(), epsilon = 1e-6);
        let sys = build_lift(LiftKind::Riemannian11, &PotentialSpec::ermakov(0.5).unwrap(), 2.0, 0.5).unwrap();
        let t = geodesic_flow(&sys, &s0, (0.0, 1.0), &tight()).unwrap();
        assert_abs_diff_eq!(t.last().q[0], 2f64.sqrt(), epsilon = 1e-6);

        let sys = build_lift(LiftKind::Lorentzian12, &PotentialSpec::oscillator(1.0), 1.0, 0.5).unwrap();
        let s0 = sys.recovered_state(1.0, 0.0, &[], 0.0).unwrap();
        let t = geodesic_flow(&sys, &s0, (0.0, PI), &tight()).unwrap();
        assert_abs_diff_eq!(t.last().q[0], -1.0, epsilon = 1e-6);

        let s0 = PhaseState::new(vec![0.7, 0.2, -0.1], vec![0.0; 3], 0.0).unwrap();
        let t = geodesic_flow(&sys, &s0, (0.0, 3.0), &IntegratorConfig::rk4(0.1)).unwrap();
        assert!(t.samples().iter().all(|s| s.q == s0.q && s.p == s0.p));
    }

    #[test]
    fn projection_and_reparametrization() {
        let sys = build_lift(LiftKind::Lorentzian12, &PotentialSpec::oscillator(1.0), 1.0, 0.5).unwrap();
        let s0 = sys.recovered_state(1.0, 0.0, &[], 0.0).unwrap();
        let t = geodesic_flow(&sys, &s0, (0.0, 2.0), &IntegratorConfig::rk4(0.01)).unwrap();
        let p = project(&t, &["x"]).unwrap();
        assert_eq!(p.len(), t.len());
        assert_eq!(project(&p, &["x"]).unwrap(), p);
        assert!(matches!(project(&t, &["w"]), Err(Error::Argument(_))));

        let same = reparametrize(&t, |_| Ok(1.0)).unwrap();
        assert_eq!(same.times(), t.times());
        let double = reparametrize(&t, |_| Ok(2.0)).unwrap();
        for (a, b) in double.times().iter().zip(t.times()) {
            assert_abs_diff_eq!(*a, 2.0 * b, epsilon = 1e-14);
        }
        assert!(matches!(reparametrize(&t, |_| Ok(-1.0)), Err(Error::Reparametrization(_))));
    }

    #[test]
    fn domain_exit_truncates() {
        let t = newton_flow(&PotentialSpec::ermakov(-0.5).unwrap(), 1.0, 0.0, (0.0, 5.0), &tight()).unwrap();
        assert!(t.meta().exited_domain);
        assert!(t.last().t < 5.0);
        let t = newton_flow(&PotentialSpec::ermakov(-0.5).unwrap(), 1.0, 0.0, (0.0, 5.0), &IntegratorConfig::rk4(1e-3)).unwrap();
        assert!(t.meta().exited_domain);
    }
}
