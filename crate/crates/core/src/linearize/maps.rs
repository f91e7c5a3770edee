use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::{integrate, solve_bracketed};
use crate::potentials::Profile;

/// Point transformation between an original chart (`old`) and a linearizing chart (`new`).
/// Momenta transform with the Jacobian transpose, `p_new = Jᵀ p_old`, `J = ∂old/∂new`.
pub trait CoordinateMap: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    /// Whether `new` lies in the domain of [`CoordinateMap::inverse`].
    fn admits(&self, new: &[f64]) -> bool;

    /// Original coordinates to linearizing coordinates.
    fn forward(&self, old: &[f64]) -> Result<Vec<f64>>;

    /// Linearizing coordinates to original coordinates.
    fn inverse(&self, new: &[f64]) -> Result<Vec<f64>>;

    /// `J_ij = ∂old_i/∂new_j` at `new`.
    fn jacobian(&self, new: &[f64]) -> Result<DMatrix<f64>>;

    fn momentum_to_new(&self, new: &[f64], p_old: &[f64]) -> Result<Vec<f64>> {
        let j = self.jacobian(new)?;
        Ok((j.transpose() * DVector::from_column_slice(p_old)).iter().copied().collect())
    }

    fn momentum_to_old(&self, new: &[f64], p_new: &[f64]) -> Result<Vec<f64>> {
        let jt = self.jacobian(new)?.transpose();
        let sol = jt.lu().solve(&DVector::from_column_slice(p_new)).ok_or_else(|| Error::Singular(format!("{new:?}")))?;
        Ok(sol.iter().copied().collect())
    }

    /// Velocity in the new chart from a velocity in the old chart, `v_new = J⁻¹ v_old`.
    fn velocity_to_new(&self, new: &[f64], v_old: &[f64]) -> Result<Vec<f64>> {
        let j = self.jacobian(new)?;
        let sol = j.lu().solve(&DVector::from_column_slice(v_old)).ok_or_else(|| Error::Singular(format!("{new:?}")))?;
        Ok(sol.iter().copied().collect())
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected: expected.to_string(), found })
    }
}

/// Polar flattening of `dx² + x² dz²/(αV0)`: `x = √(X²+Y²)`, `z = √(αV0)·arctan(Y/X)` on `X > 0`.
#[derive(Clone, Debug)]
pub struct ErmakovMap {
    scale: f64,
}

impl ErmakovMap {
    pub fn new(alpha: f64, v0: f64) -> Result<Self> {
        let s = alpha * v0;
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Argument(format!("ermakov map needs αV0 > 0, got {s}")));
        }
        Ok(ErmakovMap { scale: s.sqrt() })
    }
}

pub fn ermakov_map(alpha: f64, v0: f64) -> Result<ErmakovMap> {
    ErmakovMap::new(alpha, v0)
}

impl CoordinateMap for ErmakovMap {
    fn name(&self) -> &str {
        "ermakov"
    }

    fn dim(&self) -> usize {
        2
    }

    fn admits(&self, new: &[f64]) -> bool {
        new.len() == 2 && new[0] > 0.0 && new[1].is_finite()
    }

    fn forward(&self, old: &[f64]) -> Result<Vec<f64>> {
        check_dim(2, old.len())?;
        let theta = old[1] / self.scale;
        if !(old[0] > 0.0) || !(theta.abs() < FRAC_PI_2) {
            return Err(Error::Domain(format!("(x, z) = {old:?} outside the chart x > 0, |z| < π√(αV0)/2")));
        }
        Ok(vec![old[0] * theta.cos(), old[0] * theta.sin()])
    }

    fn inverse(&self, new: &[f64]) -> Result<Vec<f64>> {
        check_dim(2, new.len())?;
        if !self.admits(new) {
            return Err(Error::Domain(format!("(X, Y) = {new:?} needs X > 0")));
        }
        Ok(vec![new[0].hypot(new[1]), self.scale * (new[1] / new[0]).atan()])
    }

    fn jacobian(&self, new: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(2, new.len())?;
        if !self.admits(new) {
            return Err(Error::Domain(format!("(X, Y) = {new:?} needs X > 0")));
        }
        let (x, y) = (new[0], new[1]);
        let r2 = x * x + y * y;
        let r = r2.sqrt();
        Ok(DMatrix::from_row_slice(2, 2, &[x / r, y / r, -self.scale * y / r2, self.scale * x / r2]))
    }
}

/// Conformal flattening of the oscillator pp-wave `dx² + 2du dv − ωx² dv²`.
/// With `Z̄ = Y + Z` and `s = 1 + Z̄²`:
/// `x = X/√s`, `v = arctan(Z̄)/√ω`, `u = √ω(Y − Z) + ½√ω X² Z̄/s`,
/// and the pulled-back metric is `(dX² + 2dY² − 2dZ²)/s`.
#[derive(Clone, Debug)]
pub struct OscillatorMap {
    root: f64,
}

impl OscillatorMap {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Argument(format!("oscillator map needs ω > 0, got {omega}")));
        }
        Ok(OscillatorMap { root: omega.sqrt() })
    }

    /// Largest `|v|` inside the chart.
    pub fn time_limit(&self) -> f64 {
        FRAC_PI_2 / self.root
    }
}

pub fn oscillator_map(omega: f64) -> Result<OscillatorMap> {
    OscillatorMap::new(omega)
}

impl CoordinateMap for OscillatorMap {
    fn name(&self) -> &str {
        "oscillator"
    }

    fn dim(&self) -> usize {
        3
    }

    fn admits(&self, new: &[f64]) -> bool {
        new.len() == 3 && new.iter().all(|v| v.is_finite())
    }

    fn forward(&self, old: &[f64]) -> Result<Vec<f64>> {
        check_dim(3, old.len())?;
        let theta = self.root * old[2];
        if !(theta.abs() < FRAC_PI_2) || !old.iter().all(|v| v.is_finite()) {
            return Err(Error::Domain(format!("(x, u, v) = {old:?} needs |√ω v| < π/2")));
        }
        let zbar = theta.tan();
        let big_x = old[0] / theta.cos();
        let s = 1.0 + zbar * zbar;
        let w = (old[1] - 0.5 * self.root * big_x * big_x * zbar / s) / self.root;
        Ok(vec![big_x, 0.5 * (zbar + w), 0.5 * (zbar - w)])
    }

    fn inverse(&self, new: &[f64]) -> Result<Vec<f64>> {
        check_dim(3, new.len())?;
        if !self.admits(new) {
            return Err(Error::Domain(format!("{new:?} is not finite")));
        }
        let (x, y, z) = (new[0], new[1], new[2]);
        let zbar = y + z;
        let s = 1.0 + zbar * zbar;
        Ok(vec![x / s.sqrt(), self.root * (y - z) + 0.5 * self.root * x * x * zbar / s, zbar.atan() / self.root])
    }

    fn jacobian(&self, new: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(3, new.len())?;
        let (x, zbar) = (new[0], new[1] + new[2]);
        let s = 1.0 + zbar * zbar;
        let w = self.root;
        let dx = -x * zbar * s.powf(-1.5);
        let du = 0.5 * w * x * x * (1.0 - zbar * zbar) / (s * s);
        let dv = 1.0 / (w * s);
        Ok(DMatrix::from_row_slice(3, 3, &[s.powf(-0.5), dx, dx, w * x * zbar / s, w + du, -w + du, 0.0, dv, dv]))
    }
}

/// Straightening coordinate for null geodesics of `dx² + dz²/(αV)`:
/// `X(x) = ∫_{x_ref}^{x} √V(s) ds`, inverted by bracketed Newton iteration.
#[derive(Clone, Debug)]
pub struct NullStraightening {
    potential: Profile,
    x_ref: f64,
    tol: f64,
}

/// Absolute quadrature tolerance for the straightening integral.
pub const STRAIGHTENING_TOLERANCE: f64 = 1e-10;

impl NullStraightening {
    pub fn new(potential: &Profile, x_ref: f64) -> Result<Self> {
        let map = NullStraightening { potential: potential.clone(), x_ref, tol: STRAIGHTENING_TOLERANCE };
        map.root_v(x_ref)?;
        Ok(map)
    }

    pub fn x_ref(&self) -> f64 {
        self.x_ref
    }

    fn root_v(&self, x: f64) -> Result<f64> {
        let v = self.potential.value(x)?;
        if v > 0.0 {
            Ok(v.sqrt())
        } else {
            Err(Error::Domain(format!("straightening needs V > 0, V({x}) = {v}")))
        }
    }

    pub fn straighten(&self, x: f64) -> Result<f64> {
        integrate(|s| self.root_v(s), self.x_ref, x, self.tol)
    }

    pub fn unstraighten(&self, target: f64) -> Result<f64> {
        if target == 0.0 {
            return Ok(self.x_ref);
        }
        let domain = self.potential.domain();
        let f = |x: f64| Ok(self.straighten(x)? - target);
        let df = |x: f64| self.root_v(x);
        let dir = target.signum();
        let bound = if dir > 0.0 { domain.upper } else { domain.lower };
        let (mut near, mut step) = (self.x_ref, self.x_ref.abs().max(1.0) * 0.5);
        for _ in 0..200 {
            let mut far = near + dir * step;
            if let Some(b) = bound {
                if dir * (far - b) >= 0.0 {
                    far = 0.5 * (near + b);
                }
            }
            if !self.potential.admits(far) {
                return Err(Error::Domain(format!("X = {target} not reached inside the domain")));
            }
            if dir * f(far)? >= 0.0 {
                let (lo, hi) = if dir > 0.0 { (near, far) } else { (far, near) };
                return solve_bracketed(f, df, lo, hi, 1e-15);
            }
            near = far;
            step *= 2.0;
        }
        Err(Error::Numeric(format!("could not bracket X = {target}")))
    }
}

pub fn null_straightening(potential: &Profile, x_ref: f64) -> Result<NullStraightening> {
    NullStraightening::new(potential, x_ref)
}

impl CoordinateMap for NullStraightening {
    fn name(&self) -> &str {
        "null_straightening"
    }

    fn dim(&self) -> usize {
        1
    }

    fn admits(&self, new: &[f64]) -> bool {
        new.len() == 1 && new[0].is_finite()
    }

    fn forward(&self, old: &[f64]) -> Result<Vec<f64>> {
        check_dim(1, old.len())?;
        Ok(vec![self.straighten(old[0])?])
    }

    fn inverse(&self, new: &[f64]) -> Result<Vec<f64>> {
        check_dim(1, new.len())?;
        Ok(vec![self.unstraighten(new[0])?])
    }

    /// `dx/dX = 1/√V(x)`.
    fn jacobian(&self, new: &[f64]) -> Result<DMatrix<f64>> {
        let x = self.inverse(new)?[0];
        Ok(DMatrix::from_element(1, 1, 1.0 / self.root_v(x)?))
    }
}
