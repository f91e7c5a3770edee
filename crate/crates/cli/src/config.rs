use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use eisenhart_core::{IntegratorConfig, LiftKind, PotentialSpec};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Curvature,
    Flatness,
    Lift,
    Integrate,
    Roundtrip,
    Suite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConditions {
    pub x0: f64,
    pub v0: f64,
    /// Initial values of the extended lift coordinates; zero when omitted.
    #[serde(default)]
    pub extended: Vec<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub potential: Option<PotentialSpec>,
    pub lift: Option<LiftKind>,
    pub alpha: Option<f64>,
    /// Newtonian energy level of the lift; computed from `initial` when absent.
    pub energy: Option<f64>,
    pub grid: Option<GridSpec>,
    pub initial: Option<InitialConditions>,
    pub t_span: Option<(f64, f64)>,
    pub integrator: Option<IntegratorConfig>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn validate(&self, command: Command) -> Result<()> {
        if let Some(c) = self.command {
            if c != command {
                bail!("config is for the {c:?} command but {command:?} was requested");
            }
        }
        if let Some(g) = &self.grid {
            if g.n_points < 2 {
                bail!("grid.n_points must be at least 2, got {}", g.n_points);
            }
            if !(g.x_min < g.x_max) {
                bail!("grid.x_min ({}) must be below grid.x_max ({})", g.x_min, g.x_max);
            }
        }
        if let Some((a, b)) = self.t_span {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                bail!("t_span must be an increasing pair of finite times, got [{a}, {b}]");
            }
        }
        if let Some(alpha) = self.alpha {
            if alpha == 0.0 || !alpha.is_finite() {
                bail!("alpha must be finite and nonzero, got {alpha}");
            }
        }
        if let Some(i) = &self.integrator {
            i.validate()?;
        }
        match command {
            Command::Curvature | Command::Flatness => {
                self.potential()?;
                self.grid()?;
            }
            Command::Lift => {
                self.potential()?;
            }
            Command::Integrate => {
                self.potential()?;
                self.initial()?;
                self.t_span()?;
            }
            Command::Roundtrip => {
                self.potential()?;
                self.initial()?;
                self.t_span()?;
            }
            Command::Suite => {}
        }
        Ok(())
    }

    pub fn potential(&self) -> Result<&PotentialSpec> {
        self.potential.as_ref().context("config is missing \"potential\"")
    }

    pub fn grid(&self) -> Result<GridSpec> {
        self.grid.context("config is missing \"grid\"")
    }

    pub fn initial(&self) -> Result<&InitialConditions> {
        self.initial.as_ref().context("config is missing \"initial\"")
    }

    pub fn t_span(&self) -> Result<(f64, f64)> {
        self.t_span.context("config is missing \"t_span\"")
    }

    /// The configured lift, or the linearizing lift of the potential's family.
    pub fn lift_kind(&self) -> Result<LiftKind> {
        match self.lift {
            Some(k) => Ok(k),
            None => {
                let family = self.potential()?.family();
                LiftKind::designated(family).with_context(|| format!("no lift given and none is designated for {family}"))
            }
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(1.0)
    }

    pub fn integrator(&self) -> IntegratorConfig {
        self.integrator.unwrap_or_else(|| IntegratorConfig::dp45(1e-10, 1e-10))
    }
}
