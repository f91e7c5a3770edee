use std::fmt::Write;

use eisenhart_core::lifts::{flatness_residual_scale, LiftedSystem};
use eisenhart_core::suite::CriterionOutcome;
use eisenhart_core::{FlatnessReport, Result as CoreResult};
use serde::Serialize;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn curvature_csv(report: &FlatnessReport) -> String {
    let mut out = String::from("x,riemann_norm,ricci_scalar,conformal_norm\n");
    for p in &report.points {
        let _ = writeln!(out, "{},{},{},{}", num(p.point[0]), num(p.riemann_norm), num(p.ricci_scalar), opt(p.conformal_norm));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct ResidualRow {
    pub x: f64,
    pub residuals: Vec<f64>,
    pub scales: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct FlatnessSummary<'a> {
    pub lift: String,
    pub verdict: String,
    pub tolerance: f64,
    pub max_riemann: f64,
    pub max_conformal: Option<f64>,
    pub max_relative_residual: f64,
    pub residuals: Vec<ResidualRow>,
    #[serde(skip)]
    pub curvature: &'a FlatnessReport,
}

pub fn residual_table(system: &LiftedSystem, xs: &[f64]) -> CoreResult<Vec<ResidualRow>> {
    xs.iter()
        .map(|&x| {
            Ok(ResidualRow {
                x,
                residuals: system.flatness_residual(x)?,
                scales: flatness_residual_scale(system.kind(), system.aux(), x)?,
            })
        })
        .collect()
}

pub fn max_relative(rows: &[ResidualRow]) -> f64 {
    rows.iter()
        .flat_map(|r| r.residuals.iter().zip(&r.scales).map(|(a, s)| a.abs() / s.max(f64::MIN_POSITIVE)))
        .fold(0.0, f64::max)
}

pub fn flatness_csv(summary: &FlatnessSummary) -> String {
    let width = summary.residuals.first().map_or(0, |r| r.residuals.len());
    let mut out = format!("# verdict = {}\nx", summary.verdict);
    for k in 0..width {
        let _ = write!(out, ",residual_{k},scale_{k}");
    }
    out.push_str(",riemann_norm,conformal_norm\n");
    for (row, p) in summary.residuals.iter().zip(&summary.curvature.points) {
        out.push_str(&num(row.x));
        for (r, s) in row.residuals.iter().zip(&row.scales) {
            let _ = write!(out, ",{},{}", num(*r), num(*s));
        }
        let _ = writeln!(out, ",{},{}", num(p.riemann_norm), opt(p.conformal_norm));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct AuxRow {
    pub x: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct LiftSummary<'a> {
    pub lift: String,
    pub alpha: f64,
    pub coordinates: Vec<String>,
    pub potential: &'a eisenhart_core::PotentialSpec,
    pub recovery: &'a eisenhart_core::lifts::RecoveryConstraint,
    pub aux_functions: Vec<String>,
    pub table: Vec<AuxRow>,
}

pub fn lift_csv(summary: &LiftSummary) -> String {
    let mut out = String::from("x");
    for name in &summary.aux_functions {
        let _ = write!(out, ",{name}");
    }
    out.push('\n');
    for row in &summary.table {
        out.push_str(&num(row.x));
        for v in &row.values {
            let _ = write!(out, ",{}", num(*v));
        }
        out.push('\n');
    }
    out
}

pub fn suite_csv(outcomes: &[CriterionOutcome]) -> String {
    let mut out = String::from("criterion,label,value,threshold,comparison,passed\n");
    for c in outcomes {
        for m in &c.measurements {
            let _ = writeln!(
                out,
                "{},\"{}\",{},{},{:?},{}",
                c.id,
                m.label.replace('"', "'"),
                num(m.value),
                num(m.threshold),
                m.comparison,
                m.passed()
            );
        }
    }
    out
}
