//! Truncated Taylor jets of scalar functions of one variable.
//!
//! A [`Jet`] carries a value and its first three derivatives at a point.
//! Arithmetic follows the Leibniz and Faà di Bruno rules, so metric
//! components assembled from potentials keep exact derivatives up to the
//! order the curvature code needs.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value and derivatives `[f, f', f'', f''']` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Jet(pub [f64; 4]);

impl Jet {
    pub const ZERO: Jet = Jet([0.0; 4]);

    pub fn constant(c: f64) -> Self {
        Jet([c, 0.0, 0.0, 0.0])
    }

    /// The identity function evaluated at `x`.
    pub fn variable(x: f64) -> Self {
        Jet([x, 1.0, 0.0, 0.0])
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// `k`-th derivative, `k <= 3`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.0[k]
    }

    pub fn scale(self, c: f64) -> Self {
        Jet(self.0.map(|v| v * c))
    }

    /// Jet of `1/f`. The caller guarantees `f != 0`.
    pub fn recip(self) -> Self {
        let [a, b, c, d] = self.0;
        let ia = 1.0 / a;
        let ia2 = ia * ia;
        let ia3 = ia2 * ia;
        Jet([
            ia,
            -b * ia2,
            2.0 * b * b * ia3 - c * ia2,
            -6.0 * b * b * b * ia3 * ia + 6.0 * b * c * ia3 - d * ia2,
        ])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let [f0, f1, f2, f3] = self.0;
        let [g0, g1, g2, g3] = o.0;
        Jet([
            f0 * g0,
            f1 * g0 + f0 * g1,
            f2 * g0 + 2.0 * f1 * g1 + f0 * g2,
            f3 * g0 + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f0 * g3,
        ])
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}
