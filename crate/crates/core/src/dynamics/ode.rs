//! Explicit Runge-Kutta integrators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Classical fourth-order Runge-Kutta with a fixed step.
    #[serde(alias = "rk4")]
    Rk4Fixed,
    /// Dormand-Prince 5(4) with adaptive step control.
    #[serde(alias = "dp45")]
    Dp45Adaptive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Sampling {
    /// One sample per accepted step.
    Steps,
    /// `points` samples evenly spaced over the interval; steps are clipped to land on them.
    Uniform { points: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for RK4; initial step hint for DP45 (0 selects one automatically).
    #[serde(default)]
    pub step: f64,
    #[serde(default = "default_tol")]
    pub abs_tol: f64,
    #[serde(default = "default_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default = "default_sampling")]
    pub sampling: Sampling,
}

fn default_tol() -> f64 {
    1e-10
}

fn default_max_steps() -> usize {
    5_000_000
}

fn default_sampling() -> Sampling {
    Sampling::Steps
}

impl IntegratorConfig {
    pub fn rk4(step: f64) -> Self {
        IntegratorConfig {
            method: Method::Rk4Fixed,
            step,
            abs_tol: default_tol(),
            rel_tol: default_tol(),
            max_steps: default_max_steps(),
            sampling: Sampling::Steps,
        }
    }

    pub fn dp45(abs_tol: f64, rel_tol: f64) -> Self {
        IntegratorConfig { method: Method::Dp45Adaptive, step: 0.0, abs_tol, rel_tol, ..Self::rk4(0.0) }
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn uniform(self, points: usize) -> Self {
        self.with_sampling(Sampling::Uniform { points })
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            Method::Rk4Fixed if !(self.step > 0.0 && self.step.is_finite()) => {
                return Err(Error::Argument(format!("RK4 step must be positive, got {}", self.step)))
            }
            Method::Dp45Adaptive if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) => {
                return Err(Error::Argument("DP45 tolerances must be positive".into()))
            }
            Method::Dp45Adaptive if !(self.step >= 0.0 && self.step.is_finite()) => {
                return Err(Error::Argument("DP45 initial step must be non-negative".into()))
            }
            _ => {}
        }
        if self.max_steps == 0 {
            return Err(Error::Argument("max_steps must be positive".into()));
        }
        if let Sampling::Uniform { points } = self.sampling {
            if points < 2 {
                return Err(Error::Argument("uniform sampling needs at least 2 points".into()));
            }
        }
        Ok(())
    }
}

pub(crate) struct Solution {
    pub ts: Vec<f64>,
    pub ys: Vec<Vec<f64>>,
    pub steps: usize,
    pub rejected: usize,
    pub exited: bool,
}

/// Right-hand side `dy/dt = f(t, y)` written into the output slice.
pub(crate) trait Rhs {
    fn eval(&mut self, t: f64, y: &[f64], out: &mut [f64]) -> Result<()>;
    fn admits(&self, y: &[f64]) -> bool;
}

/// `Ok(false)` when the stage left the domain or produced non-finite values.
fn stage<R: Rhs + ?Sized>(rhs: &mut R, t: f64, y: &[f64], out: &mut [f64]) -> Result<bool> {
    if !y.iter().all(|v| v.is_finite()) || !rhs.admits(y) {
        return Ok(false);
    }
    match rhs.eval(t, y, out) {
        Ok(()) => Ok(out.iter().all(|v| v.is_finite())),
        Err(Error::Domain(_)) | Err(Error::Singular(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

fn axpy(y: &[f64], h: f64, terms: &[(f64, &[f64])], out: &mut [f64]) {
    for i in 0..y.len() {
        let mut s = 0.0;
        for (c, k) in terms {
            s += c * k[i];
        }
        out[i] = y[i] + h * s;
    }
}

fn snap(t: f64, target: f64) -> f64 {
    if (target - t).abs() <= 1e-12 * target.abs().max(1.0) {
        target
    } else {
        t
    }
}

struct Recorder {
    targets: Option<Vec<f64>>,
    next: usize,
    ts: Vec<f64>,
    ys: Vec<Vec<f64>>,
}

impl Recorder {
    fn new(sampling: Sampling, t0: f64, t1: f64) -> Self {
        let targets = match sampling {
            Sampling::Steps => None,
            Sampling::Uniform { points } => Some(
                (0..points)
                    .map(|k| if k + 1 == points { t1 } else { t0 + (t1 - t0) * k as f64 / (points - 1) as f64 })
                    .collect(),
            ),
        };
        Recorder { targets, next: 1, ts: Vec::new(), ys: Vec::new() }
    }

    fn limit(&self, t1: f64) -> f64 {
        self.targets.as_ref().map_or(t1, |ts| ts[self.next.min(ts.len() - 1)])
    }

    fn push(&mut self, t: f64, y: &[f64]) {
        match &self.targets {
            None => {
                self.ts.push(t);
                self.ys.push(y.to_vec());
            }
            Some(ts) => {
                if self.ts.is_empty() || (self.next < ts.len() && t == ts[self.next]) {
                    if !self.ts.is_empty() {
                        self.next += 1;
                    }
                    self.ts.push(t);
                    self.ys.push(y.to_vec());
                }
            }
        }
    }
}

pub(crate) fn solve<R: Rhs + ?Sized>(rhs: &mut R, y0: &[f64], t0: f64, t1: f64, cfg: &IntegratorConfig) -> Result<Solution> {
    cfg.validate()?;
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::Argument(format!("time span must satisfy t0 < t1, got [{t0}, {t1}]")));
    }
    let mut k1 = vec![0.0; y0.len()];
    if !stage(rhs, t0, y0, &mut k1)? {
        return Err(Error::Domain(format!("initial state {y0:?} outside the domain")));
    }
    match cfg.method {
        Method::Rk4Fixed => rk4(rhs, y0, t0, t1, cfg),
        Method::Dp45Adaptive => dp45(rhs, y0, k1, t0, t1, cfg),
    }
}

fn rk4<R: Rhs + ?Sized>(rhs: &mut R, y0: &[f64], t0: f64, t1: f64, cfg: &IntegratorConfig) -> Result<Solution> {
    let n = y0.len();
    let mut rec = Recorder::new(cfg.sampling, t0, t1);
    let (mut t, mut y) = (t0, y0.to_vec());
    rec.push(t, &y);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let (mut steps, mut exited) = (0, false);
    while t < t1 {
        let target = rec.limit(t1);
        let h = cfg.step.min(target - t);
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::Integration(format!("step budget of {} exhausted at t = {t}", cfg.max_steps)));
        }
        let ok = stage(rhs, t, &y, &mut k1)?
            && {
                axpy(&y, 0.5 * h, &[(1.0, &k1)], &mut tmp);
                stage(rhs, t + 0.5 * h, &tmp, &mut k2)?
            }
            && {
                axpy(&y, 0.5 * h, &[(1.0, &k2)], &mut tmp);
                stage(rhs, t + 0.5 * h, &tmp, &mut k3)?
            }
            && {
                axpy(&y, h, &[(1.0, &k3)], &mut tmp);
                stage(rhs, t + h, &tmp, &mut k4)?
            };
        if ok {
            axpy(&y, h / 6.0, &[(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)], &mut tmp);
        }
        if !ok || !tmp.iter().all(|v| v.is_finite()) || !rhs.admits(&tmp) {
            exited = true;
            break;
        }
        t = snap(t + h, target);
        std::mem::swap(&mut y, &mut tmp);
        rec.push(t, &y);
    }
    Ok(Solution { ts: rec.ts, ys: rec.ys, steps, rejected: 0, exited })
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn error_norm(e: &[f64], y: &[f64], y_new: &[f64], cfg: &IntegratorConfig) -> f64 {
    let n = e.len() as f64;
    (e.iter()
        .zip(y.iter().zip(y_new))
        .map(|(ei, (a, b))| (ei / (cfg.abs_tol + cfg.rel_tol * a.abs().max(b.abs()))).powi(2))
        .sum::<f64>()
        / n)
        .sqrt()
}

fn initial_step<R: Rhs + ?Sized>(rhs: &mut R, y0: &[f64], f0: &[f64], t0: f64, cfg: &IntegratorConfig) -> Result<f64> {
    let scale = |v: &[f64]| -> f64 {
        (v.iter().zip(y0).map(|(a, y)| (a / (cfg.abs_tol + cfg.rel_tol * y.abs())).powi(2)).sum::<f64>()
            / v.len() as f64)
            .sqrt()
    };
    let (d0, d1) = (scale(y0), scale(f0));
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let mut y1 = vec![0.0; y0.len()];
    axpy(y0, h0, &[(1.0, f0)], &mut y1);
    let mut f1 = vec![0.0; y0.len()];
    if !stage(rhs, t0 + h0, &y1, &mut f1)? {
        return Ok(h0 * 1e-3);
    }
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = scale(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    Ok((100.0 * h0).min(h1))
}

fn dp45<R: Rhs + ?Sized>(
    rhs: &mut R,
    y0: &[f64],
    mut k1: Vec<f64>,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<Solution> {
    let n = y0.len();
    let mut rec = Recorder::new(cfg.sampling, t0, t1);
    let (mut t, mut y) = (t0, y0.to_vec());
    rec.push(t, &y);
    let mut h = if cfg.step > 0.0 { cfg.step } else { initial_step(rhs, y0, &k1, t0, cfg)? };
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 6];
    let (mut tmp, mut y_new, mut err) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let (mut steps, mut rejected, mut exited) = (0, 0, false);
    let mut facmax = 5.0;
    while t < t1 {
        let target = rec.limit(t1);
        let hmin = 1e-13 * t.abs().max(1.0);
        let clipped = h >= target - t;
        let step = if clipped { target - t } else { h };
        if step < hmin && !clipped {
            exited = true;
            break;
        }
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::Integration(format!("step budget of {} exhausted at t = {t}", cfg.max_steps)));
        }
        let ok = 'stages: {
            let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
            for (s, row) in rows.iter().enumerate() {
                let mut terms: Vec<(f64, &[f64])> = vec![(row[0], &k1)];
                for (j, c) in row.iter().enumerate().skip(1) {
                    terms.push((*c, &k[j]));
                }
                axpy(&y, step, &terms, &mut tmp);
                if !stage(rhs, t + C[s + 1] * step, &tmp, &mut k[s + 1])? {
                    break 'stages false;
                }
            }
            axpy(&y, step, &[(B[0], &k1), (B[2], &k[2]), (B[3], &k[3]), (B[4], &k[4]), (B[5], &k[5])], &mut y_new);
            let mut k7 = vec![0.0; n];
            if !stage(rhs, t + step, &y_new, &mut k7)? {
                break 'stages false;
            }
            for i in 0..n {
                err[i] = step
                    * (E[0] * k1[i] + E[2] * k[2][i] + E[3] * k[3][i] + E[4] * k[4][i] + E[5] * k[5][i] + E[6] * k7[i]);
            }
            k[0] = k7;
            true
        };
        if !ok {
            if step < hmin {
                exited = true;
                break;
            }
            rejected += 1;
            h = 0.5 * step;
            facmax = 1.0;
            continue;
        }
        let e = error_norm(&err, &y, &y_new, cfg);
        if e <= 1.0 {
            t = if clipped { target } else { snap(t + step, target) };
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k[0]);
            rec.push(t, &y);
            let fac = if e == 0.0 { facmax } else { (0.9 * e.powf(-0.2)).clamp(0.2, facmax) };
            h = if clipped { h.max(step) } else { step * fac };
            facmax = 5.0;
        } else {
            rejected += 1;
            h = step * (0.9 * e.powf(-0.2)).max(0.2);
            facmax = 1.0;
        }
    }
    Ok(Solution { ts: rec.ts, ys: rec.ys, steps, rejected, exited })
}
