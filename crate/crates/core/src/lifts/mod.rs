//! The four Eisenhart lifts of a one-dimensional potential.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{Hamiltonian, PhaseState};
use crate::error::{Error, Result};
use crate::geometry::{LineMetric, MetricChart};
use crate::potentials::{Family, Interval, Jet, PotentialSpec, Profile, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftKind {
    /// `H = ½p_x² + (α/2)V p_z²` on `(x, z)`.
    #[serde(alias = "riemannian", alias = "r11")]
    Riemannian11,
    /// `H = ½p_x² + V p_u² + p_u p_v` on `(x, u, v)`.
    #[serde(alias = "lorentzian", alias = "l12")]
    Lorentzian12,
    /// `H = ½p_x² + (α/2)F1 p_z² + F2 p_u² + p_u p_v` on `(x, z, u, v)`.
    #[serde(alias = "mixed", alias = "m13")]
    Mixed13,
    /// `H = ½p_x² + (α/2)F1 p_z² + V1 p_u² + V2 p_u p_v` on `(x, z, u, v)` with `F1 = 1`.
    #[serde(alias = "conformal_mixed", alias = "cm13")]
    ConformalMixed13,
}

impl LiftKind {
    pub const ALL: [LiftKind; 4] =
        [LiftKind::Riemannian11, LiftKind::Lorentzian12, LiftKind::Mixed13, LiftKind::ConformalMixed13];

    pub fn coords(self) -> &'static [&'static str] {
        match self {
            LiftKind::Riemannian11 => &["x", "z"],
            LiftKind::Lorentzian12 => &["x", "u", "v"],
            LiftKind::Mixed13 | LiftKind::ConformalMixed13 => &["x", "z", "u", "v"],
        }
    }

    pub fn dim(self) -> usize {
        self.coords().len()
    }

    /// Names of the auxiliary functions entering the metric.
    pub fn aux_names(self) -> &'static [&'static str] {
        match self {
            LiftKind::Riemannian11 | LiftKind::Lorentzian12 => &["V"],
            LiftKind::Mixed13 => &["F1", "F2"],
            LiftKind::ConformalMixed13 => &["V1", "V2"],
        }
    }

    /// Lift used to linearize a potential family.
    pub fn designated(family: Family) -> Option<LiftKind> {
        match family {
            Family::Ermakov => Some(LiftKind::Riemannian11),
            Family::Oscillator => Some(LiftKind::Lorentzian12),
            Family::ErmakovOscillator => Some(LiftKind::Mixed13),
            Family::Morse | Family::Exponential => Some(LiftKind::ConformalMixed13),
            Family::Linear | Family::Custom => None,
        }
    }
}

impl fmt::Display for LiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiftKind::Riemannian11 => "riemannian11",
            LiftKind::Lorentzian12 => "lorentzian12",
            LiftKind::Mixed13 => "mixed13",
            LiftKind::ConformalMixed13 => "conformal_mixed13",
        })
    }
}

impl FromStr for LiftKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase().replace('-', "_")))
            .map_err(|_| Error::Argument(format!("unknown lift kind '{s}'")))
    }
}

/// Named auxiliary functions of the base coordinate (`V`, `F1`/`F2` or `V1`/`V2`).
#[derive(Clone, Debug)]
pub struct AuxFunctions {
    entries: Vec<(String, Profile)>,
}

impl AuxFunctions {
    pub fn single(v: Profile) -> Self {
        AuxFunctions { entries: vec![("V".into(), v)] }
    }

    pub fn mixed(f1: Profile, f2: Profile) -> Self {
        AuxFunctions { entries: vec![("F1".into(), f1), ("F2".into(), f2)] }
    }

    pub fn conformal(v1: Profile, v2: Profile) -> Self {
        AuxFunctions { entries: vec![("V1".into(), v1), ("V2".into(), v2)] }
    }

    pub fn get(&self, name: &str) -> Result<&Profile> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| Error::Argument(format!("auxiliary function '{name}' not supplied")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    fn domain(&self) -> Interval {
        self.entries.iter().fold(Interval::REAL_LINE, |d, (_, p)| d.intersect(&p.domain()))
    }

    fn jet(&self, name: &str, x: f64) -> Result<Jet> {
        self.get(name)?.jet(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryConstraint {
    pub fixed_momenta: BTreeMap<String, f64>,
    pub hamiltonian_level: f64,
    pub original_energy: f64,
    pub null: bool,
}

/// An Eisenhart-lifted system. Immutable once built.
#[derive(Clone, Debug)]
pub struct LiftedSystem {
    kind: LiftKind,
    alpha: f64,
    potential: PotentialSpec,
    aux: AuxFunctions,
    metric: LineMetric,
    domain: Interval,
    recovery: RecoveryConstraint,
}

impl LiftedSystem {
    pub fn kind(&self) -> LiftKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    pub fn aux(&self) -> &AuxFunctions {
        &self.aux
    }

    pub fn metric(&self) -> &LineMetric {
        &self.metric
    }

    pub fn coords(&self) -> Vec<String> {
        self.kind.coords().iter().map(|s| s.to_string()).collect()
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn recovery(&self) -> &RecoveryConstraint {
        &self.recovery
    }

    /// Lifted phase-space point over `(x, p_x)`: extended coordinates from `extra_q`
    /// (zero when empty) and the recovery-constrained momenta.
    pub fn recovered_state(&self, x: f64, p_x: f64, extra_q: &[f64], t: f64) -> Result<PhaseState> {
        let n = self.dim();
        if !extra_q.is_empty() && extra_q.len() != n - 1 {
            return Err(Error::Argument(format!("expected {} extended coordinates, got {}", n - 1, extra_q.len())));
        }
        let mut q = vec![x];
        q.extend(if extra_q.is_empty() { vec![0.0; n - 1] } else { extra_q.to_vec() });
        let mut p = vec![p_x];
        for label in &self.kind.coords()[1..] {
            p.push(self.recovery.fixed_momenta[&format!("p_{label}")]);
        }
        PhaseState::new(q, p, t)
    }

    /// Potential felt by the `x` coordinate under the recovery constraints, up to the
    /// constant absorbed into the energy level.
    pub fn recovered_potential(&self, x: f64) -> Result<f64> {
        let m = &self.recovery.fixed_momenta;
        let a = self.alpha;
        Ok(match self.kind {
            LiftKind::Riemannian11 => 0.5 * a * self.aux.get("V")?.value(x)? * m["p_z"].powi(2),
            LiftKind::Lorentzian12 => self.aux.get("V")?.value(x)? * m["p_u"].powi(2),
            LiftKind::Mixed13 => {
                0.5 * a * self.aux.get("F1")?.value(x)? * m["p_z"].powi(2)
                    + self.aux.get("F2")?.value(x)? * m["p_u"].powi(2)
            }
            LiftKind::ConformalMixed13 => {
                self.aux.get("V1")?.value(x)? * m["p_u"].powi(2) + self.aux.get("V2")?.value(x)? * m["p_u"] * m["p_v"]
            }
        })
    }

    pub fn flatness_residual(&self, x: f64) -> Result<Vec<f64>> {
        flatness_residual(self.kind, &self.aux, x)
    }
}

fn nonzero_guard(f: &Profile, scale: f64, positive: bool) -> impl Fn(f64) -> bool + Send + Sync + 'static {
    let f = f.clone();
    move |x| {
        f.value(x).is_ok_and(|v| {
            let s = scale * v;
            s.is_finite() && if positive { s > 0.0 } else { s != 0.0 }
        })
    }
}

/// Metric of a lift built directly from auxiliary functions, with no compatibility checks
/// beyond non-degeneracy. The `u, v` block is the inverse of the Hamiltonian's
/// `(p_u, p_v)` quadratic form, so the wave profile sits in `g_vv`.
pub fn lift_metric(kind: LiftKind, aux: &AuxFunctions, alpha: f64) -> Result<LineMetric> {
    lift_metric_on(kind, aux, alpha, Interval::REAL_LINE)
}

fn lift_metric_on(kind: LiftKind, aux: &AuxFunctions, alpha: f64, domain: Interval) -> Result<LineMetric> {
    for name in kind.aux_names() {
        aux.get(name)?;
    }
    if !alpha.is_finite() || (alpha == 0.0 && kind != LiftKind::Lorentzian12) {
        return Err(Error::Argument(format!("coupling α must be finite and non-zero, got {alpha}")));
    }
    let domain = domain.intersect(&aux.domain());
    let in_domain = move |x: f64| domain.contains(x);
    let jet = |name: &str| {
        let p = aux.get(name).expect("checked above").clone();
        move |x: f64| p.jet(x)
    };
    let b = LineMetric::builder(kind.coords().iter().copied(), 0).constant(0, 0, 1.0).inverse_constant(0, 0, 1.0);
    let metric = match kind {
        LiftKind::Riemannian11 => {
            let v = jet("V");
            let v2 = jet("V");
            let ok = nonzero_guard(aux.get("V")?, alpha, false);
            b.component(1, 1, move |x| Ok(v(x)?.scale(alpha).recip()))
                .inverse_component(1, 1, move |x| Ok(v2(x)?.scale(alpha)))
                .guard(move |x| in_domain(x) && ok(x))
                .build()
        }
        LiftKind::Lorentzian12 => {
            let (v, v2) = (jet("V"), jet("V"));
            b.constant(1, 2, 1.0)
                .component(2, 2, move |x| Ok(v(x)?.scale(-2.0)))
                .inverse_component(1, 1, move |x| Ok(v2(x)?.scale(2.0)))
                .inverse_constant(1, 2, 1.0)
                .guard(in_domain)
                .build()
        }
        LiftKind::Mixed13 => {
            let (f1, f1b, f2, f2b) = (jet("F1"), jet("F1"), jet("F2"), jet("F2"));
            let ok = nonzero_guard(aux.get("F1")?, alpha, false);
            b.component(1, 1, move |x| Ok(f1(x)?.scale(alpha).recip()))
                .constant(2, 3, 1.0)
                .component(3, 3, move |x| Ok(f2(x)?.scale(-2.0)))
                .inverse_component(1, 1, move |x| Ok(f1b(x)?.scale(alpha)))
                .inverse_component(2, 2, move |x| Ok(f2b(x)?.scale(2.0)))
                .inverse_constant(2, 3, 1.0)
                .guard(move |x| in_domain(x) && ok(x))
                .build()
        }
        LiftKind::ConformalMixed13 => {
            let (v1, v1b, v2, v2b, v2c) = (jet("V1"), jet("V1"), jet("V2"), jet("V2"), jet("V2"));
            let ok = nonzero_guard(aux.get("V2")?, 1.0, false);
            b.constant(1, 1, 1.0 / alpha)
                .component(2, 3, move |x| Ok(v2(x)?.recip()))
                .component(3, 3, move |x| {
                    let w = v2b(x)?;
                    Ok((v1(x)? / (w * w)).scale(-2.0))
                })
                .inverse_constant(1, 1, alpha)
                .inverse_component(2, 2, move |x| Ok(v1b(x)?.scale(2.0)))
                .inverse_component(2, 3, v2c)
                .guard(move |x| in_domain(x) && ok(x))
                .build()
        }
    };
    Ok(metric)
}

/// Two-dimensional metric `dx² + dz²/(αV)`. Unlike [`build_lift`] it accepts any sign of `αV`.
pub fn riemannian_metric(v: &Profile, alpha: f64) -> Result<LineMetric> {
    lift_metric(LiftKind::Riemannian11, &AuxFunctions::single(v.clone()), alpha)
}

/// Window used to check sign conditions on unbounded domains.
const CHECK_WINDOW: f64 = 100.0;
const CHECK_POINTS: usize = 2001;

fn check_sign(f: &Profile, scale: f64, domain: &Interval, what: &str) -> Result<()> {
    for x in domain.sample(-CHECK_WINDOW, CHECK_WINDOW, CHECK_POINTS) {
        let v = scale * f.value(x)?;
        if !(v > 0.0) {
            return Err(Error::Construction(format!("{what} = {v} ≤ 0 at x = {x}")));
        }
    }
    Ok(())
}

/// Builds a lift over the potential's natural domain.
pub fn build_lift(kind: LiftKind, potential: &PotentialSpec, alpha: f64, original_energy: f64) -> Result<LiftedSystem> {
    build_lift_on(kind, potential, alpha, original_energy, potential.domain())
}

/// Builds a lift restricted to `domain`. Sign conditions are checked on a sample grid of
/// `domain ∩ [−100, 100]` and enforced point-wise by the metric's domain guard.
pub fn build_lift_on(
    kind: LiftKind,
    potential: &PotentialSpec,
    alpha: f64,
    original_energy: f64,
    domain: Interval,
) -> Result<LiftedSystem> {
    if !original_energy.is_finite() {
        return Err(Error::Argument("original energy must be finite".into()));
    }
    let domain = domain.intersect(&potential.domain());
    let v = potential.profile().clone();
    let h = original_energy;
    let mut momenta = BTreeMap::new();
    let (aux, level, null) = match kind {
        LiftKind::Riemannian11 => {
            if !(alpha > 0.0) {
                return Err(Error::Construction(format!("α(p_z)² = 2 needs α > 0, got {alpha}")));
            }
            check_sign(&v, alpha, &domain, "αV")?;
            momenta.insert("p_z".into(), (2.0 / alpha).sqrt());
            (AuxFunctions::single(v), h, false)
        }
        LiftKind::Lorentzian12 => {
            momenta.insert("p_u".into(), 1.0);
            momenta.insert("p_v".into(), -h);
            (AuxFunctions::single(v), 0.0, true)
        }
        LiftKind::Mixed13 => {
            let (omega, v0, x0) = match potential.family() {
                Family::ErmakovOscillator | Family::Ermakov | Family::Oscillator => {
                    (potential.param("omega"), potential.param("V0"), potential.param("x0"))
                }
                f => return Err(Error::Argument(format!("mixed13 lift needs an Ermakov/oscillator potential, got {f}"))),
            };
            if alpha == 0.0 || !alpha.is_finite() || v0 / alpha < 0.0 {
                return Err(Error::Construction(format!("p_z² = 2V0/α needs αV0 ≥ 0 (α = {alpha}, V0 = {v0})")));
            }
            let f1 = Profile::from_terms(vec![Term::Power { coef: 1.0, shift: x0, exponent: -2 }]);
            let f2 = Profile::from_terms(vec![
                Term::Power { coef: 0.5 * omega, shift: x0, exponent: 2 },
                Term::Power { coef: potential.param("omega0"), shift: 0.0, exponent: 0 },
            ]);
            momenta.insert("p_z".into(), (2.0 * v0 / alpha).sqrt());
            momenta.insert("p_u".into(), 1.0);
            momenta.insert("p_v".into(), -h);
            (AuxFunctions::mixed(f1, f2), 0.0, true)
        }
        LiftKind::ConformalMixed13 => {
            let lambda = match potential.family() {
                Family::Morse | Family::Exponential => potential.param("lambda"),
                f => return Err(Error::Argument(format!("conformal_mixed13 lift needs a Morse/exponential potential, got {f}"))),
            };
            if alpha == 0.0 || !alpha.is_finite() || h / alpha > 0.0 {
                return Err(Error::Construction(format!("½αp_z² = −h needs αh ≤ 0 (α = {alpha}, h = {h})")));
            }
            let kappa = match potential.param("V2") {
                c if c != 0.0 => c,
                _ => 1.0,
            };
            let v2 = Profile::exp(kappa, lambda);
            momenta.insert("p_z".into(), (-2.0 * h / alpha).sqrt());
            momenta.insert("p_u".into(), 1.0);
            momenta.insert("p_v".into(), 0.0);
            (AuxFunctions::conformal(v, v2), 0.0, true)
        }
    };
    let metric = lift_metric_on(kind, &aux, alpha, domain)?;
    Ok(LiftedSystem {
        kind,
        alpha,
        potential: potential.clone(),
        aux,
        metric,
        domain,
        recovery: RecoveryConstraint { fixed_momenta: momenta, hamiltonian_level: level, original_energy: h, null },
    })
}

/// Builds a lift whose recovery constraint matches the energy of the initial data `(x0, v0)`.
pub fn build_lift_for(kind: LiftKind, potential: &PotentialSpec, alpha: f64, x0: f64, v0: f64) -> Result<LiftedSystem> {
    let h = 0.5 * v0 * v0 + potential.profile().value(x0)?;
    build_lift(kind, potential, alpha, h)
}

/// `½ g^{ij}(q) p_i p_j`.
pub fn lifted_hamiltonian(system: &LiftedSystem, state: &PhaseState) -> Result<f64> {
    metric_hamiltonian(&system.metric, state)
}

pub(crate) fn metric_hamiltonian<M: MetricChart + ?Sized>(metric: &M, state: &PhaseState) -> Result<f64> {
    let n = metric.dim();
    if state.q.len() != n || state.p.len() != n {
        return Err(Error::Argument(format!(
            "state has {} coordinates and {} momenta, system has dimension {n}",
            state.q.len(),
            state.p.len()
        )));
    }
    let ginv = metric.inverse(&state.q)?;
    let mut h = 0.0;
    for i in 0..n {
        for j in 0..n {
            h += ginv[(i, j)] * state.p[i] * state.p[j];
        }
    }
    Ok(0.5 * h)
}

impl Hamiltonian for LiftedSystem {
    fn hamiltonian(&self, state: &PhaseState) -> Result<f64> {
        lifted_hamiltonian(self, state)
    }
}

fn residual_parts(kind: LiftKind, aux: &AuxFunctions, x: f64) -> Result<Vec<Vec<f64>>> {
    let d = |name: &str| -> Result<[f64; 4]> { Ok(aux.jet(name, x)?.0) };
    Ok(match kind {
        LiftKind::Riemannian11 => {
            let [v, v1, v2, _] = d("V")?;
            vec![vec![2.0 * v2 * v, -3.0 * v1 * v1]]
        }
        LiftKind::Lorentzian12 => {
            let [_, _, _, v3] = d("V")?;
            vec![vec![v3]]
        }
        LiftKind::Mixed13 => {
            let [f, f1, f2, _] = d("F1")?;
            let [_, g1, g2, _] = d("F2")?;
            vec![vec![2.0 * f2 * f, -3.0 * f1 * f1], vec![2.0 * g2 * f, g1 * f1]]
        }
        LiftKind::ConformalMixed13 => {
            let [a, a1, a2, _] = d("V1")?;
            let [b, b1, b2, _] = d("V2")?;
            vec![vec![3.0 * b * a2 * b, -9.0 * b * a1 * b1, 6.0 * a * b1 * b1], vec![b2 * b, -b1 * b1]]
        }
    })
}

/// Left-hand sides of the flatness conditions of each lift at `x`:
/// `[2V″V − 3V′²]`, `[V‴]`, `[2F1″F1 − 3F1′², 2F2″F1 + F2′F1′]`,
/// `[3V2(V1″V2 − 3V1′V2′) + 6V1V2′², V2″V2 − V2′²]`.
pub fn flatness_residual(kind: LiftKind, aux: &AuxFunctions, x: f64) -> Result<Vec<f64>> {
    Ok(residual_parts(kind, aux, x)?.iter().map(|p| p.iter().sum()).collect())
}

/// Magnitude of each residual's individual terms, for relative comparisons.
/// The single-term third-derivative condition is scaled by `1 + |V|`.
pub fn flatness_residual_scale(kind: LiftKind, aux: &AuxFunctions, x: f64) -> Result<Vec<f64>> {
    if kind == LiftKind::Lorentzian12 {
        return Ok(vec![1.0 + aux.get("V")?.value(x)?.abs()]);
    }
    Ok(residual_parts(kind, aux, x)?.iter().map(|p| p.iter().map(|v| v.abs()).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn riemannian_ermakov_example() {
        let sys = build_lift(LiftKind::Riemannian11, &PotentialSpec::ermakov(1.0).unwrap(), 2.0, 0.5).unwrap();
        assert_eq!(sys.recovery().fixed_momenta["p_z"], 1.0);
        let g = sys.metric().components(&[1.5, 0.0]).unwrap();
        assert_abs_diff_eq!(g[(1, 1)], 1.5f64.powi(2) / 2.0, epsilon = 1e-15);
        assert_eq!(g[(0, 0)], 1.0);
        let s = PhaseState::new(vec![1.0, 0.0], vec![0.0, 1.0], 0.0).unwrap();
        assert_abs_diff_eq!(lifted_hamiltonian(&sys, &s).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn lorentzian_oscillator_example() {
        let sys = build_lift(LiftKind::Lorentzian12, &PotentialSpec::oscillator(1.0), 1.0, 0.5).unwrap();
        let r = sys.recovery();
        assert_eq!((r.fixed_momenta["p_u"], r.fixed_momenta["p_v"], r.hamiltonian_level), (1.0, -0.5, 0.0));
        assert!(r.null);
        let g = sys.metric().components(&[2.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(g[(2, 2)], -4.0, epsilon = 1e-15);
        let s = PhaseState::new(vec![2.0, 0.0, 0.0], vec![1.0, 1.0, 0.0], 0.0).unwrap();
        assert_abs_diff_eq!(lifted_hamiltonian(&sys, &s).unwrap(), 2.5, epsilon = 1e-15);
    }

    #[test]
    fn conformal_mixed_morse_example() {
        let morse = PotentialSpec::morse(1.0, 1.0, 1.0).unwrap();
        let sys = build_lift(LiftKind::ConformalMixed13, &morse, -1.0, 2.0).unwrap();
        assert_abs_diff_eq!(sys.recovery().fixed_momenta["p_z"], 2.0, epsilon = 1e-15);
        assert_eq!(sys.recovery().hamiltonian_level, 0.0);
        assert!(matches!(
            build_lift(LiftKind::ConformalMixed13, &morse, 1.0, 2.0),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn zero_momenta_give_zero_energy() {
        let pot = PotentialSpec::ermakov_oscillator(1.0, 0.5).unwrap();
        for kind in LiftKind::ALL {
            let pot = if kind == LiftKind::ConformalMixed13 { PotentialSpec::morse(1.0, -2.0, 1.0).unwrap() } else { pot.clone() };
            let sys = build_lift(kind, &pot, 1.0, -0.5).unwrap();
            let mut q = vec![0.0; kind.dim()];
            q[0] = 1.3;
            let s = PhaseState::new(q, vec![0.0; kind.dim()], 0.0).unwrap();
            assert_eq!(lifted_hamiltonian(&sys, &s).unwrap(), 0.0);
        }
    }

    #[test]
    fn errors() {
        let osc = PotentialSpec::oscillator(1.0);
        assert!(matches!(build_lift(LiftKind::Riemannian11, &osc, -1.0, 1.0), Err(Error::Construction(_))));
        let lin = PotentialSpec::linear(1.0, 0.0);
        assert!(matches!(build_lift(LiftKind::Riemannian11, &lin, 1.0, 1.0), Err(Error::Construction(_))));
        assert!(matches!(build_lift(LiftKind::Mixed13, &lin, 1.0, 1.0), Err(Error::Argument(_))));
        assert!(matches!(build_lift(LiftKind::ConformalMixed13, &osc, 1.0, 1.0), Err(Error::Argument(_))));
        let sys = build_lift(LiftKind::Lorentzian12, &osc, 1.0, 1.0).unwrap();
        let bad = PhaseState::new(vec![1.0, 0.0], vec![0.0, 0.0], 0.0).unwrap();
        assert!(matches!(lifted_hamiltonian(&sys, &bad), Err(Error::Argument(_))));
        assert_eq!("Lorentzian12".parse::<LiftKind>().unwrap(), LiftKind::Lorentzian12);
        assert!("sideways".parse::<LiftKind>().is_err());
    }

    #[test]
    fn residual_examples() {
        let ermakov = AuxFunctions::single(Profile::power(3.0, -2));
        assert_abs_diff_eq!(flatness_residual(LiftKind::Riemannian11, &ermakov, 1.7).unwrap()[0], 0.0, epsilon = 1e-12);
        let osc = AuxFunctions::single(Profile::power(0.5, 2).plus(&Profile::constant(0.3)));
        assert_eq!(flatness_residual(LiftKind::Lorentzian12, &osc, 0.4).unwrap(), vec![0.0]);
        let cm = AuxFunctions::conformal(Profile::exp(1.0, 1.0).plus(&Profile::exp(1.0, 2.0)), Profile::exp(1.0, 1.0));
        for r in flatness_residual(LiftKind::ConformalMixed13, &cm, 0.3).unwrap() {
            assert_abs_diff_eq!(r, 0.0, epsilon = 1e-12);
        }
        let bad = AuxFunctions::single(Profile::power(1.0, 4));
        assert!(flatness_residual(LiftKind::Lorentzian12, &bad, 1.0).unwrap()[0].abs() > 1.0);
    }

    #[test]
    fn recovered_potential_matches() {
        let cases = [
            (LiftKind::Riemannian11, PotentialSpec::ermakov(0.7).unwrap(), 2.0),
            (LiftKind::Lorentzian12, PotentialSpec::oscillator(2.0), 1.0),
            (LiftKind::Mixed13, PotentialSpec::ermakov_oscillator(1.5, 0.5).unwrap(), 3.0),
            (LiftKind::ConformalMixed13, PotentialSpec::morse(1.0, -0.5, 0.8).unwrap(), -1.0),
        ];
        for (kind, pot, alpha) in cases {
            let sys = build_lift(kind, &pot, alpha, 0.25).unwrap();
            for x in [0.4, 1.0, 2.2] {
                let v = pot.profile().value(x).unwrap();
                assert_abs_diff_eq!(sys.recovered_potential(x).unwrap(), v, epsilon = 1e-12 * (1.0 + v.abs()));
            }
        }
    }
}
