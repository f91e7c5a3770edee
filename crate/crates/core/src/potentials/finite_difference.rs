//! Central finite differences, used to cross-check analytic derivatives.

use crate::error::{Error, Result};

// Stencils of width 2k+1 for the k-th derivative; offsets run -k..=k.
const FIRST: [f64; 3] = [-0.5, 0.0, 0.5];
const SECOND: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
const THIRD: [f64; 7] = [1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0];

/// Default step for a derivative of `order` at `x`: 1e-5, 1e-4, 1e-3 scaled by `max(1, |x|)`.
pub fn default_step(order: usize, x: f64) -> f64 {
    let base = match order {
        1 => 1e-5,
        2 => 1e-4,
        _ => 1e-3,
    };
    base * x.abs().max(1.0)
}

/// Central-difference estimate of the `order`-th derivative of `f` at `x`.
///
/// `f` reports domain violations through its `Result`; a stencil point outside
/// the domain surfaces as that error.
pub fn fd_derivative<F>(f: F, x: f64, order: usize, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Argument(format!("step must be positive, got {h}")));
    }
    let weights: &[f64] = match order {
        1 => &FIRST,
        2 => &SECOND,
        3 => &THIRD,
        _ => return Err(Error::Argument(format!("finite-difference order {order} not in 1..=3"))),
    };
    let half = (weights.len() / 2) as i32;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let offset = i as i32 - half;
        acc += w * f(x + offset as f64 * h)?;
    }
    Ok(acc / h.powi(order as i32))
}
