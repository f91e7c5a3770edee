use serde::Serialize;

use crate::dynamics::{
    cyclic_momentum_drift, drift_report, metric_geodesic_flow, metric_geodesic_flow_with_clock, IntegratorConfig,
    PhaseState,
};
use crate::error::{Error, Result};
use crate::geometry::LineMetric;
use crate::lifts::metric_hamiltonian;
use crate::numerics::hausdorff;
use crate::potentials::Profile;

/// Largest `|H|` treated as a null state.
pub const NULL_TOLERANCE: f64 = 1e-10;

/// Samples per path when comparing geodesics as point sets.
pub const PATH_SAMPLES: usize = 4001;

#[derive(Clone, Debug, Serialize)]
pub struct ConformalComparison {
    /// Hausdorff distance between the two paths in the metric's coordinates.
    pub path_distance: f64,
    pub null: bool,
    pub hamiltonian: f64,
    /// Parameter length of the rescaled geodesic, `τ_end = ∫ N² dt`.
    pub tau_end: f64,
    /// Largest relative Hamiltonian drift over both flows.
    pub energy_drift: f64,
    /// Largest relative drift of the cyclic momenta over both flows.
    pub momentum_drift: f64,
}

/// Integrates the geodesics of `g` and `N² g` from the same initial point and covector and
/// compares the traced paths as point sets. The rescaled flow runs for the parameter length
/// `τ_end = ∫ N² dt` accumulated along the `g` geodesic.
pub fn conformal_geodesic_compare(
    metric: &LineMetric,
    factor: &Profile,
    state0: &PhaseState,
    t_span: (f64, f64),
    config: &IntegratorConfig,
) -> Result<ConformalComparison> {
    let axis = metric.axis();
    let n2 = |q: &[f64]| factor.value(q[axis]);
    if !(n2(&state0.q)? > 0.0) {
        return Err(Error::Argument("conformal factor must be positive at the initial point".into()));
    }
    let hamiltonian = metric_hamiltonian(metric, state0)?;
    let cfg = config.uniform(PATH_SAMPLES);
    let (original, taus) = metric_geodesic_flow_with_clock(metric, state0, t_span, &cfg, n2)?;
    let tau_end = *taus.last().expect("non-empty");
    let rescaled_metric = metric.conformally_rescaled(factor);
    let start = PhaseState::new(state0.q.clone(), state0.p.clone(), t_span.0)?;
    let rescaled = metric_geodesic_flow(&rescaled_metric, &start, (t_span.0, tau_end), &cfg)?;
    if original.meta().exited_domain || rescaled.meta().exited_domain {
        return Err(Error::Domain("geodesic left the domain during the comparison".into()));
    }
    let a: Vec<Vec<f64>> = original.samples().iter().map(|s| s.q.clone()).collect();
    let b: Vec<Vec<f64>> = rescaled.samples().iter().map(|s| s.q.clone()).collect();
    Ok(ConformalComparison {
        path_distance: hausdorff(&a, &b)?,
        null: hamiltonian.abs() < NULL_TOLERANCE,
        hamiltonian,
        tau_end,
        energy_drift: drift_report(&original, metric)?.max(drift_report(&rescaled, &rescaled_metric)?),
        momentum_drift: cyclic_momentum_drift(&original, metric).max(cyclic_momentum_drift(&rescaled, &rescaled_metric)),
    })
}
