//! Scalar functions of the base coordinate with exact derivatives.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::finite_difference::{default_step, fd_derivative};
use super::jet::Jet;
use crate::error::{Error, Result};

/// Open interval `(lower, upper)`; `None` means unbounded on that side.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Interval {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lower: None, upper: None };

    pub fn new(lower: Option<f64>, upper: Option<f64>) -> Self {
        Interval { lower, upper }
    }

    pub fn above(lower: f64) -> Self {
        Interval { lower: Some(lower), upper: None }
    }

    pub fn bounded(lower: f64, upper: f64) -> Self {
        Interval { lower: Some(lower), upper: Some(upper) }
    }

    pub fn contains(&self, x: f64) -> bool {
        x.is_finite()
            && self.lower.is_none_or(|l| x > l)
            && self.upper.is_none_or(|u| x < u)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lower = match (self.lower, other.lower) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let upper = match (self.upper, other.upper) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Interval { lower, upper }
    }

    /// `n` evenly spaced points strictly inside `self ∩ [a, b]`.
    pub fn sample(&self, a: f64, b: f64, n: usize) -> Vec<f64> {
        let lo = self.lower.map_or(a, |l| l.max(a));
        let hi = self.upper.map_or(b, |u| u.min(b));
        if n == 0 || lo >= hi {
            return Vec::new();
        }
        let pad = 1e-9 * (hi - lo);
        let (lo, hi) = (lo + pad, hi - pad);
        if n == 1 {
            return vec![0.5 * (lo + hi)];
        }
        let dx = (hi - lo) / (n - 1) as f64;
        (0..n).map(|i| lo + dx * i as f64).collect()
    }
}

/// One closed-form summand.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Term {
    /// `coef · (x − shift)^exponent`. Negative exponents restrict the domain to `x > shift`.
    Power {
        coef: f64,
        #[serde(default)]
        shift: f64,
        exponent: i32,
    },
    /// `coef · e^{rate·x}`.
    Exp { coef: f64, rate: f64 },
}

impl Term {
    fn domain(&self) -> Interval {
        match *self {
            Term::Power { shift, exponent, .. } if exponent < 0 => Interval::above(shift),
            _ => Interval::REAL_LINE,
        }
    }

    fn jet(&self, x: f64) -> Jet {
        match *self {
            Term::Power { coef, shift, exponent } => {
                let y = x - shift;
                let mut out = [0.0; 4];
                let mut falling = coef;
                for (k, slot) in out.iter_mut().enumerate() {
                    let power = exponent - k as i32;
                    *slot = if falling == 0.0 { 0.0 } else { falling * y.powi(power) };
                    falling *= power as f64;
                }
                Jet(out)
            }
            Term::Exp { coef, rate } => {
                let e = coef * (rate * x).exp();
                Jet([e, rate * e, rate * rate * e, rate * rate * rate * e])
            }
        }
    }
}

pub type ValueFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type JetFn = Arc<dyn Fn(f64) -> [f64; 4] + Send + Sync>;

/// User-supplied function. Without `jet`, derivatives come from central
/// finite differences with the default steps (reduced accuracy).
#[derive(Clone)]
pub struct CustomProfile {
    pub name: String,
    pub value: ValueFn,
    pub jet: Option<JetFn>,
    pub domain: Interval,
}

#[derive(Clone)]
enum Repr {
    Terms(Vec<Term>),
    Custom(CustomProfile),
}

/// A scalar function of `x` that can report its value and first three
/// derivatives: potentials, auxiliary lift functions, conformal factors.
#[derive(Clone)]
pub struct Profile {
    repr: Repr,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Terms(t) => f.debug_tuple("Profile").field(t).finish(),
            Repr::Custom(c) => write!(f, "Profile(custom {:?})", c.name),
        }
    }
}

impl Profile {
    pub fn from_terms(terms: Vec<Term>) -> Self {
        Profile { repr: Repr::Terms(terms) }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms(vec![Term::Power { coef: c, shift: 0.0, exponent: 0 }])
    }

    /// `coef · x^exponent`.
    pub fn power(coef: f64, exponent: i32) -> Self {
        Self::from_terms(vec![Term::Power { coef, shift: 0.0, exponent }])
    }

    pub fn exp(coef: f64, rate: f64) -> Self {
        Self::from_terms(vec![Term::Exp { coef, rate }])
    }

    pub fn custom(profile: CustomProfile) -> Self {
        Profile { repr: Repr::Custom(profile) }
    }

    /// Closed-form terms, if this profile has them.
    pub fn terms(&self) -> Option<&[Term]> {
        match &self.repr {
            Repr::Terms(t) => Some(t),
            Repr::Custom(_) => None,
        }
    }

    /// Sum of two profiles. Custom profiles are combined through closures.
    pub fn plus(&self, other: &Profile) -> Profile {
        match (&self.repr, &other.repr) {
            (Repr::Terms(a), Repr::Terms(b)) => {
                Profile::from_terms(a.iter().chain(b.iter()).copied().collect())
            }
            _ => {
                let (a, b) = (self.clone(), other.clone());
                let (a2, b2) = (self.clone(), other.clone());
                Profile::custom(CustomProfile {
                    name: "sum".into(),
                    value: Arc::new(move |x| a.value(x).unwrap_or(f64::NAN) + b.value(x).unwrap_or(f64::NAN)),
                    jet: Some(Arc::new(move |x| match (a2.jet(x), b2.jet(x)) {
                        (Ok(p), Ok(q)) => (p + q).0,
                        _ => [f64::NAN; 4],
                    })),
                    domain: self.domain().intersect(&other.domain()),
                })
            }
        }
    }

    pub fn domain(&self) -> Interval {
        match &self.repr {
            Repr::Terms(terms) => terms
                .iter()
                .fold(Interval::REAL_LINE, |acc, t| acc.intersect(&t.domain())),
            Repr::Custom(c) => c.domain,
        }
    }

    pub fn admits(&self, x: f64) -> bool {
        self.domain().contains(x)
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.admits(x) {
            Ok(())
        } else {
            Err(Error::Domain(format!("x = {x} is outside {:?}", self.domain())))
        }
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.repr {
            Repr::Terms(terms) => terms.iter().map(|t| t.jet(x).value()).sum(),
            Repr::Custom(c) => (c.value)(x),
        })
    }

    pub fn jet(&self, x: f64) -> Result<Jet> {
        self.check(x)?;
        let jet = match &self.repr {
            Repr::Terms(terms) => terms.iter().fold(Jet::ZERO, |acc, t| acc + t.jet(x)),
            Repr::Custom(c) => match &c.jet {
                Some(j) => Jet(j(x)),
                None => {
                    let f = |s: f64| {
                        if c.domain.contains(s) {
                            Ok((c.value)(s))
                        } else {
                            Err(Error::Domain(format!("stencil point {s} outside {:?}", c.domain)))
                        }
                    };
                    let mut out = [(c.value)(x), 0.0, 0.0, 0.0];
                    for k in 1..=3 {
                        out[k] = fd_derivative(f, x, k, default_step(k, x))?;
                    }
                    Jet(out)
                }
            },
        };
        if jet.is_finite() {
            Ok(jet)
        } else {
            Err(Error::Numeric(format!("non-finite derivatives at x = {x}")))
        }
    }

    /// `k`-th derivative at `x`, `k <= 3`.
    pub fn derivative(&self, x: f64, order: usize) -> Result<f64> {
        if order > 3 {
            return Err(Error::Argument(format!("derivative order {order} not in 0..=3")));
        }
        if order == 0 {
            return self.value(x);
        }
        Ok(self.jet(x)?.derivative(order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_power_restricts_domain() {
        let p = Profile::from_terms(vec![Term::Power { coef: 1.0, shift: 0.5, exponent: -2 }]);
        assert!(p.admits(0.6));
        assert!(!p.admits(0.5));
        assert!(matches!(p.value(0.2), Err(Error::Domain(_))));
    }

    #[test]
    fn interval_sample_stays_inside() {
        let pts = Interval::above(0.0).sample(-1.0, 2.0, 5);
        assert_eq!(pts.len(), 5);
        assert!(pts.iter().all(|&x| x > 0.0 && x < 2.0));
    }

    #[test]
    fn custom_without_jet_uses_finite_differences() {
        let p = Profile::custom(CustomProfile {
            name: "sin".into(),
            value: Arc::new(f64::sin),
            jet: None,
            domain: Interval::REAL_LINE,
        });
        let j = p.jet(0.3).unwrap();
        assert!((j.derivative(1) - 0.3f64.cos()).abs() < 1e-8);
        assert!((j.derivative(2) + 0.3f64.sin()).abs() < 1e-6);
        assert!((j.derivative(3) + 0.3f64.cos()).abs() < 1e-5);
    }
}
