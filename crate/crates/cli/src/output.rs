//! CSV and JSON artifact writers.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a file
//! produced from the same configuration and seed is byte-identical across
//! runs.

use std::path::Path;

use gnls_core::asymptotics::{LimitClassification, LimitKind, SweepRecord};
use gnls_core::graph::{VertexFunction, WeightedGraph};
use gnls_core::potential::TruncationReport;
use gnls_core::solver::Solution;

use crate::run::RunError;

pub fn fmt(x: f64) -> String {
    format!("{x}")
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>, RunError> {
    Ok(csv::Writer::from_path(path).map_err(csv_io)?)
}

fn csv_io(e: csv::Error) -> RunError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => RunError::Io(io),
        other => RunError::Config(format!("csv error: {other:?}")),
    }
}

/// Columns: vertex_id, mu, h, u, v_rescaled.
pub fn write_solution_csv(
    path: &Path,
    g: &WeightedGraph,
    h: Option<&VertexFunction>,
    solution: &Solution,
    m: f64,
) -> Result<(), RunError> {
    let mut w = writer(path)?;
    w.write_record(["vertex_id", "mu", "h", "u", "v_rescaled"])
        .map_err(csv_io)?;
    let sqrt_m = m.sqrt();
    for i in 0..g.len() {
        w.write_record([
            g.id(i).to_string(),
            fmt(g.measure(i)),
            fmt(h.map_or(1.0, |h| h[i])),
            fmt(solution.u[i]),
            fmt(solution.u[i] / sqrt_m),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: m, lambda_m, lambda_rescaled, J, residual, converged, then one
/// rescaled-solution column per vertex.
pub fn write_sweep_csv(
    path: &Path,
    g: &WeightedGraph,
    records: &[SweepRecord],
) -> Result<(), RunError> {
    let mut w = writer(path)?;
    let mut header = vec![
        "m".to_string(),
        "lambda_m".to_string(),
        "lambda_rescaled".to_string(),
        "J".to_string(),
        "residual".to_string(),
        "converged".to_string(),
    ];
    header.extend((0..g.len()).map(|i| format!("v_{}", g.id(i))));
    w.write_record(&header).map_err(csv_io)?;
    for r in records {
        let mut row = vec![
            fmt(r.m),
            fmt(r.lambda),
            fmt(r.rescaled_multiplier),
            fmt(r.solution.energy),
            fmt(r.solution.residual),
            r.solution.converged.to_string(),
        ];
        row.extend(r.rescaled.values().iter().map(|&x| fmt(x)));
        w.write_record(&row).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: radius, vertices, converged, lambda, energy, mass, residual,
/// center_delta (blank on the first row).
pub fn write_truncation_csv(path: &Path, report: &TruncationReport) -> Result<(), RunError> {
    let mut w = writer(path)?;
    w.write_record([
        "radius",
        "vertices",
        "converged",
        "lambda",
        "energy",
        "mass",
        "residual",
        "center_delta",
    ])
    .map_err(csv_io)?;
    for (k, sol) in report.solutions.iter().enumerate() {
        let delta = if k == 0 {
            String::new()
        } else {
            fmt(report.center_deltas[k - 1])
        };
        w.write_record([
            report.radii[k].to_string(),
            sol.u.len().to_string(),
            sol.converged.to_string(),
            fmt(sol.lambda),
            fmt(sol.energy),
            fmt(sol.mass),
            fmt(sol.residual),
            delta,
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: index, lambda, then one eigenfunction column per vertex.
pub fn write_eigen_csv(
    path: &Path,
    g: &WeightedGraph,
    pairs: &[(f64, VertexFunction)],
) -> Result<(), RunError> {
    let mut w = writer(path)?;
    let mut header = vec!["index".to_string(), "lambda".to_string()];
    header.extend((0..g.len()).map(|i| format!("v_{}", g.id(i))));
    w.write_record(&header).map_err(csv_io)?;
    for (k, (lambda, v)) in pairs.iter().enumerate() {
        let mut row = vec![k.to_string(), fmt(*lambda)];
        row.extend(v.values().iter().map(|&x| fmt(x)));
        w.write_record(&row).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn classification_json(
    g: &WeightedGraph,
    class: &LimitClassification,
) -> serde_json::Value {
    let kind = match class.kind {
        LimitKind::Constant => "constant",
        LimitKind::Eigenfunction => "eigenfunction",
        LimitKind::Zero => "zero",
        LimitKind::SupportIndicator => "support-indicator",
    };
    serde_json::json!({
        "kind": kind,
        "limit_multiplier": class.limit_multiplier,
        "residual": class.residual,
        "support": class.support.as_ref().map(|s| {
            s.iter().map(|&i| g.id(i).to_string()).collect::<Vec<_>>()
        }),
        "support_deviation": class.support_deviation,
        "limit_fn": (0..g.len())
            .map(|i| serde_json::json!([g.id(i), class.limit_fn[i]]))
            .collect::<Vec<_>>(),
    })
}
