use rayon::prelude::*;
use serde::Serialize;

use super::chart::MetricChart;
use super::curvature::CurvatureBundle;
use crate::error::{Error, Result};

/// Relative threshold for declaring a curvature quantity zero.
pub const RELATIVE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flatness {
    Flat,
    ConformallyFlat,
    NotConformallyFlat,
}

impl std::fmt::Display for Flatness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Flatness::Flat => "flat",
            Flatness::ConformallyFlat => "conformally_flat",
            Flatness::NotConformallyFlat => "not_conformally_flat",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCurvature {
    pub point: Vec<f64>,
    pub riemann_norm: f64,
    pub ricci_scalar: f64,
    pub conformal_norm: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessReport {
    pub dim: usize,
    pub points: Vec<PointCurvature>,
    pub max_riemann: f64,
    pub max_abs_scalar: f64,
    pub max_conformal: Option<f64>,
    pub tolerance: f64,
    pub verdict: Flatness,
}

impl FlatnessReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Evaluates curvature on every grid point and classifies the metric.
///
/// A quantity counts as zero when its largest Frobenius norm on the grid is below
/// `RELATIVE_TOLERANCE · (1 + max ‖Riemann‖)`. Two-dimensional metrics are always
/// conformally flat; in dimension 3 the Cotton-York tensor decides, above it the Weyl tensor.
pub fn assess_flatness<M: MetricChart + ?Sized>(metric: &M, grid: &[Vec<f64>]) -> Result<FlatnessReport> {
    let n = metric.dim();
    if n < 2 {
        return Err(Error::Dimension { expected: ">= 2".into(), found: n });
    }
    if grid.is_empty() {
        return Err(Error::Argument("empty evaluation grid".into()));
    }
    let points: Vec<PointCurvature> = grid
        .par_iter()
        .map(|p| {
            let b = CurvatureBundle::compute(metric, p)?;
            Ok(PointCurvature {
                point: p.clone(),
                riemann_norm: b.riemann.norm(),
                ricci_scalar: b.scalar,
                conformal_norm: b.conformal_norm(),
            })
        })
        .collect::<Result<_>>()?;
    let max_riemann = points.iter().fold(0.0_f64, |m, p| m.max(p.riemann_norm));
    let max_abs_scalar = points.iter().fold(0.0_f64, |m, p| m.max(p.ricci_scalar.abs()));
    let max_conformal = if n >= 3 {
        Some(points.iter().fold(0.0_f64, |m, p| m.max(p.conformal_norm.unwrap_or(0.0))))
    } else {
        None
    };
    let tolerance = RELATIVE_TOLERANCE * (1.0 + max_riemann);
    let verdict = if n == 2 {
        if max_abs_scalar < tolerance { Flatness::Flat } else { Flatness::ConformallyFlat }
    } else if max_riemann < tolerance {
        Flatness::Flat
    } else if max_conformal.unwrap_or(0.0) < tolerance {
        Flatness::ConformallyFlat
    } else {
        Flatness::NotConformallyFlat
    };
    Ok(FlatnessReport { dim: n, points, max_riemann, max_abs_scalar, max_conformal, tolerance, verdict })
}

pub fn classify_flatness<M: MetricChart + ?Sized>(metric: &M, grid: &[Vec<f64>]) -> Result<Flatness> {
    Ok(assess_flatness(metric, grid)?.verdict)
}
