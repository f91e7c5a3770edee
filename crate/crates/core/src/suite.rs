//! Acceptance battery: each criterion runs its checks and reports named measurements
//! against fixed thresholds.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::dynamics::{
    cyclic_momentum_drift, drift_report, geodesic_flow, newton_flow, IntegratorConfig, PhaseState, Trajectory,
};
use crate::error::Result;
use crate::geometry::{assess_flatness, ricci_scalar, MetricChart};
use crate::lifts::{
    build_lift, build_lift_for, flatness_residual, flatness_residual_scale, lift_metric, riemannian_metric,
    AuxFunctions, LiftKind, LiftedSystem,
};
use crate::linearize::{conformal_geodesic_compare, straightening_check};
use crate::potentials::{PotentialSpec, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Below,
    Above,
}

#[derive(Clone, Debug, Serialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
    pub threshold: f64,
    pub comparison: Comparison,
}

impl Measurement {
    pub fn below(label: impl Into<String>, value: f64, threshold: f64) -> Self {
        Measurement { label: label.into(), value, threshold, comparison: Comparison::Below }
    }

    pub fn above(label: impl Into<String>, value: f64, threshold: f64) -> Self {
        Measurement { label: label.into(), value, threshold, comparison: Comparison::Above }
    }

    pub fn passed(&self) -> bool {
        match self.comparison {
            Comparison::Below => self.value < self.threshold,
            Comparison::Above => self.value > self.threshold,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub measurements: Vec<Measurement>,
    pub elapsed_seconds: f64,
    pub runtime_limit_seconds: Option<f64>,
    pub error: Option<String>,
}

impl CriterionOutcome {
    pub fn failures(&self) -> Vec<&Measurement> {
        self.measurements.iter().filter(|m| !m.passed()).collect()
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] criterion {}: {} ({:.3} s", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.elapsed_seconds)?;
        if let Some(limit) = self.runtime_limit_seconds {
            write!(f, ", limit {limit} s")?;
        }
        write!(f, ")")?;
        if let Some(e) = &self.error {
            write!(f, " error: {e}")?;
        }
        for m in self.failures() {
            let op = if m.comparison == Comparison::Below { "<" } else { ">" };
            write!(f, "; {} = {:.3e} not {op} {:.1e}", m.label, m.value, m.threshold)?;
        }
        Ok(())
    }
}

fn run(
    id: u8,
    name: &'static str,
    limit: Option<f64>,
    body: impl FnOnce(&mut Vec<Measurement>) -> Result<()>,
) -> CriterionOutcome {
    let start = Instant::now();
    let mut measurements = Vec::new();
    let error = body(&mut measurements).err().map(|e| e.to_string());
    let elapsed = start.elapsed().as_secs_f64();
    if let Some(l) = limit {
        measurements.push(Measurement::below("runtime_seconds", elapsed, l));
    }
    let passed = error.is_none() && measurements.iter().all(Measurement::passed);
    CriterionOutcome { id, name, passed, measurements, elapsed_seconds: elapsed, runtime_limit_seconds: limit, error }
}

fn grid(dim: usize, xs: &[f64]) -> Vec<Vec<f64>> {
    xs.iter()
        .map(|&x| {
            let mut p: Vec<f64> = (1..dim).map(|k| 0.25 * k as f64).collect();
            p.insert(0, x);
            p
        })
        .collect()
}

fn reference() -> IntegratorConfig {
    IntegratorConfig::dp45(1e-12, 1e-12)
}

/// Flat Riemannian lift of the Ermakov potential and the closed-form 2-D scalar.
pub fn criterion_1() -> CriterionOutcome {
    run(1, "flat Ermakov lift and 2-D scalar curvature", Some(1.0), |m| {
        for v0 in [0.5, 1.0, 3.0] {
            let sys = build_lift(LiftKind::Riemannian11, &PotentialSpec::ermakov(v0)?, 2.0, 0.0)?;
            let xs = sys.domain().sample(0.3, 5.0, 100);
            let (mut worst, mut scale) = (0.0_f64, 0.0_f64);
            for &x in &xs {
                worst = worst.max(ricci_scalar(sys.metric(), &[x, 0.0])?.abs());
                let [v, d1, d2, _] = sys.aux().get("V")?.jet(x)?.0;
                scale = scale.max((d2 / v).abs() + 1.5 * (d1 / v).powi(2));
            }
            m.push(Measurement::below(format!("max |R| / scale, V0 = {v0}"), worst / scale, 1e-8));
        }
        let linear = riemannian_metric(&Profile::power(1.0, 1), 1.0)?;
        let mut worst = 0.0_f64;
        for x in Profile::power(1.0, 1).domain().sample(0.3, 5.0, 100) {
            let exact = -1.5 / (x * x);
            worst = worst.max(((ricci_scalar(&linear, &[x, 0.0])? - exact) / exact).abs());
        }
        m.push(Measurement::below("relative error of R for V = x", worst, 1e-6));
        m.push(Measurement::below("|R(1) + 1.5| for V = x", (ricci_scalar(&linear, &[1.0, 0.0])? + 1.5).abs(), 1e-6));
        Ok(())
    })
}

fn max_relative_residual(kind: LiftKind, aux: &AuxFunctions, xs: &[f64]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &x in xs {
        let r = flatness_residual(kind, aux, x)?;
        let s = flatness_residual_scale(kind, aux, x)?;
        for (r, s) in r.iter().zip(&s) {
            worst = worst.max(r.abs() / s.max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

/// Conformal obstruction relative to `1 + max ‖Riemann‖` on the grid.
fn conformal_ratio<M: MetricChart + ?Sized>(metric: &M, xs: &[f64]) -> Result<f64> {
    let report = assess_flatness(metric, &grid(metric.dim(), xs))?;
    Ok(report.max_conformal.unwrap_or(0.0) / (1.0 + report.max_riemann))
}

/// Cotton-York tensor of the pp-wave lift: zero for quadratic profiles, not for `x⁴`.
pub fn criterion_2() -> CriterionOutcome {
    run(2, "conformally flat pp-wave (Cotton-York)", Some(2.0), |m| {
        let xs = crate::potentials::Interval::REAL_LINE.sample(-3.0, 3.0, 60);
        let quadratic = AuxFunctions::single(Profile::power(0.65, 2).plus(&Profile::constant(0.4)));
        let quartic = AuxFunctions::single(Profile::power(1.0, 4));
        let kind = LiftKind::Lorentzian12;
        m.push(Measurement::below(
            "Cotton-York / scale, V = ½ωx² + ω0",
            conformal_ratio(&lift_metric(kind, &quadratic, 1.0)?, &xs)?,
            1e-6,
        ));
        m.push(Measurement::above("Cotton-York / scale, V = x⁴", conformal_ratio(&lift_metric(kind, &quartic, 1.0)?, &xs)?, 1e-3));
        m.push(Measurement::below("relative V‴ residual, quadratic", max_relative_residual(kind, &quadratic, &xs)?, 1e-9));
        m.push(Measurement::above("relative V‴ residual, x⁴", max_relative_residual(kind, &quartic, &xs)?, 1e-3));
        Ok(())
    })
}

/// Weyl tensor of the four-dimensional lifts with their selected potentials and perturbations.
pub fn criterion_3() -> CriterionOutcome {
    run(3, "conformally flat 4-D lifts (Weyl)", Some(5.0), |m| {
        let cubic = Profile::power(0.05, 3);
        let mixed = build_lift(LiftKind::Mixed13, &PotentialSpec::ermakov_oscillator(1.0, 0.5)?, 1.0, 1.0)?;
        let xs = mixed.domain().sample(0.5, 3.0, 50);
        m.push(Measurement::below("Weyl / scale, Ermakov-oscillator", conformal_ratio(mixed.metric(), &xs)?, 1e-6));
        let aux = mixed.aux();
        let perturbed = AuxFunctions::mixed(aux.get("F1")?.clone(), aux.get("F2")?.plus(&cubic));
        let metric = lift_metric(LiftKind::Mixed13, &perturbed, 1.0)?;
        m.push(Measurement::above("Weyl / scale, perturbed F2", conformal_ratio(&metric, &xs)?, 1e-3));

        let morse = build_lift(LiftKind::ConformalMixed13, &PotentialSpec::morse(1.0, 1.0, 1.0)?, -1.0, 2.0)?;
        let xs = morse.domain().sample(-2.0, 2.0, 50);
        m.push(Measurement::below("Weyl / scale, Morse", conformal_ratio(morse.metric(), &xs)?, 1e-6));
        let aux = morse.aux();
        let perturbed = AuxFunctions::conformal(aux.get("V1")?.plus(&cubic), aux.get("V2")?.clone());
        let metric = lift_metric(LiftKind::ConformalMixed13, &perturbed, -1.0)?;
        m.push(Measurement::above("Weyl / scale, perturbed V1", conformal_ratio(&metric, &xs)?, 1e-3));
        Ok(())
    })
}

/// One lifted run with its Newton reference, shared by the equivalence and conservation checks.
pub struct EquivalenceRun {
    pub system: LiftedSystem,
    pub lifted: Trajectory,
    pub newton: Trajectory,
}

/// `(kind, potential, α, x0, v0)`.
pub type EquivalenceCase = (LiftKind, PotentialSpec, f64, f64, f64);

/// Initial data of the lift-equivalence runs.
pub fn equivalence_cases() -> Result<Vec<EquivalenceCase>> {
    Ok(vec![
        (LiftKind::Riemannian11, PotentialSpec::ermakov(0.5)?, 2.0, 1.0, 0.0),
        (LiftKind::Lorentzian12, PotentialSpec::oscillator(1.0), 1.0, 1.0, 0.0),
        (LiftKind::Mixed13, PotentialSpec::ermakov_oscillator(1.0, 0.5)?, 1.0, 1.0, 0.3),
        (LiftKind::ConformalMixed13, PotentialSpec::morse(1.0, 1.0, 1.0)?, -1.0, 0.0, 0.0),
    ])
}

const EQUIVALENCE_SPAN: (f64, f64) = (0.0, 10.0);
const EQUIVALENCE_SAMPLES: usize = 1001;

pub fn equivalence_runs(extended: Option<&[f64]>) -> Result<Vec<EquivalenceRun>> {
    let cfg = reference().uniform(EQUIVALENCE_SAMPLES);
    equivalence_cases()?
        .into_iter()
        .map(|(kind, pot, alpha, x0, v0)| {
            let system = build_lift_for(kind, &pot, alpha, x0, v0)?;
            let extra: Vec<f64> = extended.map(|e| e[..kind.dim() - 1].to_vec()).unwrap_or_default();
            let state = system.recovered_state(x0, v0, &extra, EQUIVALENCE_SPAN.0)?;
            let lifted = geodesic_flow(&system, &state, EQUIVALENCE_SPAN, &cfg)?;
            let newton = newton_flow(&pot, x0, v0, EQUIVALENCE_SPAN, &cfg)?;
            Ok(EquivalenceRun { system, lifted, newton })
        })
        .collect()
}

fn max_x_gap(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    let (xa, xb) = (a.coordinate("x")?, b.coordinate("x")?);
    Ok(xa.iter().zip(&xb).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max))
}

/// Projected lifted geodesics reproduce Newtonian motion.
pub fn criterion_4() -> CriterionOutcome {
    run(4, "lift-Newton equivalence", Some(10.0), |m| {
        for r in equivalence_runs(None)? {
            let n = r.lifted.len().min(r.newton.len());
            m.push(Measurement::below(format!("max |Δx|, {}", r.system.kind()), max_x_gap(&r.lifted, &r.newton)?, 1e-6));
            if n < EQUIVALENCE_SAMPLES && !(r.lifted.meta().exited_domain || r.newton.meta().exited_domain) {
                m.push(Measurement::below(format!("missing samples, {}", r.system.kind()), (EQUIVALENCE_SAMPLES - n) as f64, 1.0));
            }
        }
        Ok(())
    })
}

fn closed_form_runs() -> Result<Vec<(&'static str, PotentialSpec, Trajectory, f64)>> {
    let osc = PotentialSpec::oscillator(1.0);
    let erm = PotentialSpec::ermakov(0.5)?;
    Ok(vec![
        ("oscillator x(π) = −1", osc.clone(), newton_flow(&osc, 1.0, 0.0, (0.0, PI), &reference())?, -1.0),
        ("Ermakov x(1) = √2", erm.clone(), newton_flow(&erm, 1.0, 0.0, (0.0, 1.0), &reference())?, 2f64.sqrt()),
    ])
}

/// Newtonian endpoints against closed-form solutions.
pub fn criterion_5() -> CriterionOutcome {
    run(5, "closed-form endpoints", None, |m| {
        for (label, _, traj, exact) in closed_form_runs()? {
            m.push(Measurement::below(format!("endpoint error, {label}"), (traj.last().q[0] - exact).abs(), 1e-8));
        }
        Ok(())
    })
}

/// Profiles for the straightening check: `eˣ`, `1 + x²`, `cosh x`.
pub fn straightening_profiles() -> Vec<(&'static str, Profile)> {
    vec![
        ("exp x", Profile::exp(1.0, 1.0)),
        ("1 + x²", Profile::constant(1.0).plus(&Profile::power(1.0, 2))),
        ("cosh x", Profile::exp(0.5, 1.0).plus(&Profile::exp(0.5, -1.0))),
    ]
}

pub const STRAIGHTENING_STEP: f64 = 5e-4;

/// Null geodesics of the 2-D lift become straight lines in `(X, z)` against `τ`.
pub fn criterion_6() -> CriterionOutcome {
    run(6, "null-geodesic straightening", Some(3.0), |m| {
        for (label, v) in straightening_profiles() {
            let r = straightening_check(&v, 0.0, 1.0, STRAIGHTENING_STEP, 101)?;
            m.push(Measurement::below(format!("max |X″|, V = {label}"), r.max_x_residual, 1e-6));
            m.push(Measurement::below(format!("max |z″|, V = {label}"), r.max_z_residual, 1e-6));
        }
        Ok(())
    })
}

/// Initial states on the oscillator pp-wave: null (`p_v = −½`) and `H = 1` (`p_v = ½`).
pub fn conformal_cases() -> Result<(LiftedSystem, PhaseState, PhaseState, Profile)> {
    let sys = build_lift(LiftKind::Lorentzian12, &PotentialSpec::oscillator(1.0), 1.0, 0.5)?;
    let null = PhaseState::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, -0.5], 0.0)?;
    let massive = PhaseState::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.5], 0.0)?;
    Ok((sys, null, massive, Profile::constant(1.0).plus(&Profile::power(0.2, 2))))
}

pub const CONFORMAL_SPAN: (f64, f64) = (0.0, 5.0);

/// Conformal rescaling preserves null geodesic paths and moves non-null ones.
pub fn criterion_7() -> CriterionOutcome {
    run(7, "conformal invariance of null geodesics", None, |m| {
        let (sys, null, massive, factor) = conformal_cases()?;
        let c = conformal_geodesic_compare(sys.metric(), &factor, &null, CONFORMAL_SPAN, &reference())?;
        m.push(Measurement::below("|H| of null data", c.hamiltonian.abs(), 1e-10));
        m.push(Measurement::below("path distance, null", c.path_distance, 1e-6));
        let c = conformal_geodesic_compare(sys.metric(), &factor, &massive, CONFORMAL_SPAN, &reference())?;
        m.push(Measurement::above("path distance, H = 1", c.path_distance, 1e-2));
        Ok(())
    })
}

/// Conserved quantities on the runs of criteria 4-7 and independence from extended data.
pub fn criterion_8() -> CriterionOutcome {
    run(8, "conservation and extended-coordinate independence", None, |m| {
        let base = equivalence_runs(None)?;
        for r in &base {
            let kind = r.system.kind();
            m.push(Measurement::below(format!("cyclic momentum drift, {kind}"), cyclic_momentum_drift(&r.lifted, r.system.metric()), 1e-10));
            m.push(Measurement::below(format!("lifted energy drift, {kind}"), drift_report(&r.lifted, &r.system)?, 1e-8));
            m.push(Measurement::below(format!("Newton energy drift, {kind}"), drift_report(&r.newton, r.system.potential())?, 1e-8));
        }
        for (label, pot, traj, _) in closed_form_runs()? {
            m.push(Measurement::below(format!("energy drift, {label}"), drift_report(&traj, &pot)?, 1e-8));
        }
        for (label, v) in straightening_profiles() {
            let r = straightening_check(&v, 0.0, 1.0, STRAIGHTENING_STEP, 101)?;
            m.push(Measurement::below(format!("p_z drift, V = {label}"), r.momentum_drift, 1e-10));
            m.push(Measurement::below(format!("|H| drift, V = {label}"), r.energy_drift, 1e-8));
        }
        let (sys, null, massive, factor) = conformal_cases()?;
        for (label, s) in [("null", null), ("H = 1", massive)] {
            let c = conformal_geodesic_compare(sys.metric(), &factor, &s, CONFORMAL_SPAN, &reference())?;
            m.push(Measurement::below(format!("cyclic momentum drift, conformal {label}"), c.momentum_drift, 1e-10));
            m.push(Measurement::below(format!("energy drift, conformal {label}"), c.energy_drift, 1e-8));
        }
        let shifted = equivalence_runs(Some(&[0.7, -1.3, 2.1]))?;
        for (a, b) in base.iter().zip(&shifted) {
            m.push(Measurement::below(
                format!("Δx from extended initial data, {}", a.system.kind()),
                max_x_gap(&a.lifted, &b.lifted)?,
                1e-12,
            ));
        }
        Ok(())
    })
}

pub type CriterionFn = fn() -> CriterionOutcome;

pub const CRITERIA: [CriterionFn; 8] =
    [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8];

/// Runs every criterion in order.
pub fn run_suite() -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| c()).collect()
}
