use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::ode::Method;
use crate::error::{Error, Result};

/// Point in phase space at evolution parameter `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub t: f64,
}

impl PhaseState {
    pub fn new(q: Vec<f64>, p: Vec<f64>, t: f64) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::Argument(format!("{} coordinates but {} momenta", q.len(), p.len())));
        }
        if !q.iter().chain(&p).all(|v| v.is_finite()) || !t.is_finite() {
            return Err(Error::Argument("phase state entries must be finite".into()));
        }
        Ok(PhaseState { q, p, t })
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    T,
    Tau,
}

impl Parameter {
    pub fn label(self) -> &'static str {
        match self {
            Parameter::T => "t",
            Parameter::Tau => "tau",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    pub method: Option<Method>,
    pub steps: usize,
    pub rejected_steps: usize,
    pub max_energy_drift: Option<f64>,
    pub exited_domain: bool,
    pub uniform: bool,
}

/// Ordered samples of a flow.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    labels: Vec<String>,
    parameter: Parameter,
    samples: Vec<PhaseState>,
    meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(labels: Vec<String>, parameter: Parameter, samples: Vec<PhaseState>, meta: TrajectoryMeta) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Argument("trajectory needs at least one sample".into()));
        }
        if samples.iter().any(|s| s.dim() != labels.len()) {
            return Err(Error::Argument("sample dimension does not match labels".into()));
        }
        if samples.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Argument("trajectory parameter must be strictly increasing".into()));
        }
        Ok(Trajectory { labels, parameter, samples, meta })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn parameter(&self) -> Parameter {
        self.parameter
    }

    pub fn samples(&self) -> &[PhaseState] {
        &self.samples
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }

    pub(crate) fn meta_mut(&mut self) -> &mut TrajectoryMeta {
        &mut self.meta
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &PhaseState {
        &self.samples[0]
    }

    pub fn last(&self) -> &PhaseState {
        self.samples.last().expect("non-empty trajectory")
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Argument(format!("unknown coordinate '{label}' (have {:?})", self.labels)))
    }

    pub fn coordinate(&self, label: &str) -> Result<Vec<f64>> {
        let i = self.index_of(label)?;
        Ok(self.samples.iter().map(|s| s.q[i]).collect())
    }

    pub fn momentum(&self, label: &str) -> Result<Vec<f64>> {
        let i = self.index_of(label)?;
        Ok(self.samples.iter().map(|s| s.p[i]).collect())
    }

    pub(crate) fn into_parts(self) -> (Vec<String>, Vec<PhaseState>, TrajectoryMeta) {
        (self.labels, self.samples, self.meta)
    }

    /// CSV with columns `t, q…, p…`; numbers carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(self.parameter.label());
        for l in &self.labels {
            let _ = write!(out, ",{l}");
        }
        for l in &self.labels {
            let _ = write!(out, ",p_{l}");
        }
        out.push('\n');
        for s in &self.samples {
            let _ = write!(out, "{:.16e}", s.t);
            for v in s.q.iter().chain(&s.p) {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trajectory serializes")
    }
}
