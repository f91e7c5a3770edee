//! Potential families with exact derivatives up to third order.
//!
//! Every built-in family is a finite sum of power and exponential terms
//! (see [`Term`]), so values and derivatives are exact. Custom potentials
//! either supply their own derivatives or fall back to finite differences.

mod finite_difference;
mod jet;
mod profile;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use finite_difference::{default_step, fd_derivative};
pub use jet::Jet;
pub use profile::{CustomProfile, Interval, JetFn, Profile, Term, ValueFn};

/// Potential family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Constant force `F = a + b x`.
    Linear,
    /// `ω/2 (x − x0)² + ω0`.
    Oscillator,
    /// `V0 / (x − x0)²`.
    Ermakov,
    /// `ω/2 (x − x0)² + V0 / (x − x0)²`.
    #[serde(alias = "ermakov-oscillator", alias = "ermakovoscillator")]
    ErmakovOscillator,
    /// `V1 e^{λx} + V2 e^{2λx}`.
    Morse,
    /// `V1 e^{λx}`.
    Exponential,
    Custom,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Linear => "linear",
            Family::Oscillator => "oscillator",
            Family::Ermakov => "ermakov",
            Family::ErmakovOscillator => "ermakov_oscillator",
            Family::Morse => "morse",
            Family::Exponential => "exponential",
            Family::Custom => "custom",
        };
        f.write_str(s)
    }
}

impl Family {
    fn allowed_params(self) -> &'static [&'static str] {
        match self {
            Family::Linear => &["a", "b"],
            Family::Oscillator => &["omega", "omega0", "x0"],
            Family::Ermakov => &["V0", "x0"],
            Family::ErmakovOscillator => &["omega", "V0", "x0"],
            Family::Morse => &["V1", "V2", "lambda"],
            Family::Exponential => &["V1", "lambda"],
            Family::Custom => &[],
        }
    }
}

fn canonical_param(name: &str) -> &str {
    match name {
        "ω" | "w" => "omega",
        "ω0" | "ω₀" | "w0" => "omega0",
        "λ" | "l" => "lambda",
        "V1⁰" | "V10" | "V1_0" => "V1",
        "V2⁰" | "V20" | "V2_0" => "V2",
        "v0" => "V0",
        other => other,
    }
}

/// A potential `V(x)` from one of the families, with its parameters.
#[derive(Clone, Debug)]
pub struct PotentialSpec {
    family: Family,
    params: BTreeMap<String, f64>,
    profile: Profile,
}

impl PotentialSpec {
    /// Builds a built-in family from named parameters. Missing optional
    /// parameters (shifts, offsets) default to zero.
    pub fn new(family: Family, params: BTreeMap<String, f64>) -> Result<Self> {
        if family == Family::Custom {
            return Err(Error::Argument("custom potentials are built from terms or closures".into()));
        }
        let mut canon = BTreeMap::new();
        for (k, v) in params {
            let key = canonical_param(&k).to_string();
            if !family.allowed_params().contains(&key.as_str()) {
                return Err(Error::Argument(format!("parameter {k:?} is not used by the {family} family")));
            }
            if !v.is_finite() {
                return Err(Error::Argument(format!("parameter {k:?} must be finite")));
            }
            canon.insert(key, v);
        }
        let get = |name: &str| canon.get(name).copied().unwrap_or(0.0);
        let require = |name: &str| {
            canon
                .get(name)
                .copied()
                .ok_or_else(|| Error::Argument(format!("{family} potential requires parameter {name}")))
        };
        let nonzero = |name: &str, v: f64| {
            if v == 0.0 {
                Err(Error::Argument(format!("{family} potential requires {name} != 0")))
            } else {
                Ok(v)
            }
        };
        let power = |coef: f64, shift: f64, exponent: i32| Term::Power { coef, shift, exponent };
        let terms = match family {
            Family::Linear => vec![power(-get("a"), 0.0, 1), power(-0.5 * get("b"), 0.0, 2)],
            Family::Oscillator => {
                let omega = require("omega")?;
                vec![power(0.5 * omega, get("x0"), 2), power(get("omega0"), 0.0, 0)]
            }
            Family::Ermakov => {
                let v0 = nonzero("V0", require("V0")?)?;
                vec![power(v0, get("x0"), -2)]
            }
            Family::ErmakovOscillator => {
                let omega = require("omega")?;
                let v0 = nonzero("V0", require("V0")?)?;
                let x0 = get("x0");
                vec![power(0.5 * omega, x0, 2), power(v0, x0, -2)]
            }
            Family::Morse => {
                let lambda = nonzero("lambda", require("lambda")?)?;
                vec![
                    Term::Exp { coef: get("V1"), rate: lambda },
                    Term::Exp { coef: get("V2"), rate: 2.0 * lambda },
                ]
            }
            Family::Exponential => {
                let lambda = nonzero("lambda", require("lambda")?)?;
                vec![Term::Exp { coef: require("V1")?, rate: lambda }]
            }
            Family::Custom => unreachable!(),
        };
        Ok(PotentialSpec { family, params: canon, profile: Profile::from_terms(terms) })
    }

    fn with(family: Family, params: &[(&str, f64)]) -> Result<Self> {
        Self::new(family, params.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    /// `V = −a x − b x²/2`, i.e. force `a + b x`.
    pub fn linear(a: f64, b: f64) -> Self {
        Self::with(Family::Linear, &[("a", a), ("b", b)]).expect("linear potential")
    }

    pub fn oscillator(omega: f64) -> Self {
        Self::with(Family::Oscillator, &[("omega", omega)]).expect("oscillator potential")
    }

    pub fn ermakov(v0: f64) -> Result<Self> {
        Self::with(Family::Ermakov, &[("V0", v0)])
    }

    pub fn ermakov_oscillator(omega: f64, v0: f64) -> Result<Self> {
        Self::with(Family::ErmakovOscillator, &[("omega", omega), ("V0", v0)])
    }

    pub fn morse(v1: f64, v2: f64, lambda: f64) -> Result<Self> {
        Self::with(Family::Morse, &[("V1", v1), ("V2", v2), ("lambda", lambda)])
    }

    pub fn exponential(v1: f64, lambda: f64) -> Result<Self> {
        Self::with(Family::Exponential, &[("V1", v1), ("lambda", lambda)])
    }

    /// Custom potential given by closed-form terms or a user closure.
    pub fn custom(profile: Profile) -> Self {
        PotentialSpec { family: Family::Custom, params: BTreeMap::new(), profile }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Parameter value, with zero for unset optional parameters.
    pub fn param(&self, name: &str) -> f64 {
        self.params.get(canonical_param(name)).copied().unwrap_or(0.0)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn domain(&self) -> Interval {
        self.profile.domain()
    }

    pub fn admits(&self, x: f64) -> bool {
        self.profile.admits(x)
    }
}

/// `dᵏV/dxᵏ` at `x` for `order` in `0..=3`.
pub fn eval_potential(spec: &PotentialSpec, x: f64, order: usize) -> Result<f64> {
    spec.profile.derivative(x, order)
}

/// Newtonian force `F(x) = −V'(x)`.
pub fn force(spec: &PotentialSpec, x: f64) -> Result<f64> {
    Ok(-eval_potential(spec, x, 1)?)
}

/// JSON form: `{"family": "ermakov", "params": {"V0": 1.0}}`, or for custom
/// potentials `{"family": "custom", "terms": [{"kind": "power", "coef": 1, "exponent": 4}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct PotentialConfig {
    family: Family,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<Term>>,
}

impl TryFrom<PotentialConfig> for PotentialSpec {
    type Error = Error;

    fn try_from(cfg: PotentialConfig) -> Result<Self> {
        match cfg.family {
            Family::Custom => {
                let terms = cfg
                    .terms
                    .filter(|t| !t.is_empty())
                    .ok_or_else(|| Error::Argument("custom potential requires a non-empty \"terms\" list".into()))?;
                Ok(PotentialSpec::custom(Profile::from_terms(terms)))
            }
            family => {
                if cfg.terms.is_some() {
                    return Err(Error::Argument(format!("\"terms\" is only valid for custom potentials, not {family}")));
                }
                PotentialSpec::new(family, cfg.params)
            }
        }
    }
}

impl Serialize for PotentialSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PotentialConfig {
            family: self.family,
            params: self.params.clone(),
            terms: (self.family == Family::Custom)
                .then(|| self.profile.terms().map(<[Term]>::to_vec))
                .flatten(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PotentialSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let cfg = PotentialConfig::deserialize(d)?;
        PotentialSpec::try_from(cfg).map_err(serde::de::Error::custom)
    }
}
