//! Quadrature, root finding, interpolation and polyline distances.

use rayon::prelude::*;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn kronrod<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let d = h * XGK[i];
        let s = f(c - d)? + f(c + d)?;
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

/// Adaptive Gauss-Kronrod 7/15 quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Argument("integration limits must be finite".into()));
    }
    let (first, err) = kronrod(&f, a, b)?;
    let mut pieces = vec![(a, b, first, err)];
    let mut total_err = err;
    let mut iterations = 0;
    while total_err > tol {
        iterations += 1;
        if iterations > 2000 {
            return Err(Error::Numeric(format!("quadrature did not converge on [{a}, {b}]")));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _, e) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (l, le) = kronrod(&f, lo, mid)?;
        let (r, re) = kronrod(&f, mid, hi)?;
        total_err += le + re - e;
        pieces.push((lo, mid, l, le));
        pieces.push((mid, hi, r, re));
    }
    let value: f64 = pieces.iter().map(|p| p.2).sum();
    if !value.is_finite() {
        return Err(Error::Numeric("non-finite quadrature result".into()));
    }
    Ok(value)
}

/// Solves `f(x) = 0` on a bracket `[lo, hi]` by Newton steps that fall back to bisection
/// whenever they would leave the bracket.
pub fn solve_bracketed<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let (mut flo, fhi) = (f(lo)?, f(hi)?);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Numeric(format!("root not bracketed by [{lo}, {hi}]")));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let d = df(x)?;
        let newton = x - fx / d;
        let next = if d != 0.0 && newton > lo.min(hi) && newton < lo.max(hi) { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= tol * x.abs().max(1.0) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Numeric("root finder did not converge".into()))
}

/// Local cubic Lagrange interpolation of samples `(xs, ys)` (strictly increasing `xs`) at `x`.
pub fn interpolate_cubic(xs: &[f64], ys: &[f64], x: f64) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 4 {
        return Err(Error::Argument("cubic interpolation needs at least 4 matching samples".into()));
    }
    if x < xs[0] || x > xs[xs.len() - 1] {
        return Err(Error::Domain(format!("{x} outside sample range")));
    }
    let k = xs.partition_point(|&v| v <= x).clamp(2, xs.len() - 2);
    let s = k - 2;
    let mut total = 0.0;
    for i in s..s + 4 {
        let mut w = 1.0;
        for j in s..s + 4 {
            if i != j {
                w *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        total += w * ys[i];
    }
    Ok(total)
}

/// Second differences `(y[i+1] − 2y[i] + y[i−1]) / h²` on a uniform grid of spacing `h`.
pub fn second_differences(ys: &[f64], h: f64) -> Vec<f64> {
    ys.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]) / (h * h)).collect()
}

fn point_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let ap: Vec<f64> = a.iter().zip(p).map(|(x, y)| y - x).collect();
    let len2: f64 = ab.iter().map(|v| v * v).sum();
    let t = if len2 > 0.0 { (ab.iter().zip(&ap).map(|(u, v)| u * v).sum::<f64>() / len2).clamp(0.0, 1.0) } else { 0.0 };
    ap.iter().zip(&ab).map(|(u, v)| (u - t * v).powi(2)).sum::<f64>().sqrt()
}

/// Axis along which the polyline's vertices strictly increase, if any.
fn monotone_axis(b: &[Vec<f64>]) -> Option<usize> {
    (0..b[0].len()).find(|&k| b.windows(2).all(|w| w[1][k] > w[0][k]))
}

fn directed(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    if b.len() == 1 {
        return a.iter().map(|p| point_segment(p, &b[0], &b[0])).fold(0.0, f64::max);
    }
    let axis = monotone_axis(b);
    a.par_iter()
        .map(|p| match axis {
            // Segments are ordered along `k`, so the gap in that coordinate bounds the
            // distance from below and the scan can stop once it exceeds the best match.
            Some(k) => {
                let start = b.partition_point(|v| v[k] < p[k]).clamp(1, b.len() - 1) - 1;
                let mut best = point_segment(p, &b[start], &b[start + 1]);
                for s in start + 1..b.len() - 1 {
                    if b[s][k] - p[k] > best {
                        break;
                    }
                    best = best.min(point_segment(p, &b[s], &b[s + 1]));
                }
                for s in (0..start).rev() {
                    if p[k] - b[s + 1][k] > best {
                        break;
                    }
                    best = best.min(point_segment(p, &b[s], &b[s + 1]));
                }
                best
            }
            None => b.windows(2).map(|s| point_segment(p, &s[0], &s[1])).fold(f64::INFINITY, f64::min),
        })
        .reduce(|| 0.0, f64::max)
}

/// Symmetric Hausdorff distance between two polylines given by their vertices.
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("empty polyline".into()));
    }
    if a.iter().chain(b).any(|p| p.len() != a[0].len()) {
        return Err(Error::Argument("polyline vertices differ in dimension".into()));
    }
    Ok(directed(a, b).max(directed(b, a)))
}
