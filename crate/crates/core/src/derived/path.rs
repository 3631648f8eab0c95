use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::GasSpec;

/// Polygonal path in the `(U, V)` plane of a gas sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    /// `(U J, V m³)`, extensive.
    pub vertices: Vec<(f64, f64)>,
    pub steps_per_segment: usize,
}

impl PathSpec {
    pub fn validate(&self) -> Result<()> {
        if self.vertices.len() < 2 {
            return Err(Error::Domain("a path needs at least two vertices".into()));
        }
        if self.steps_per_segment == 0 {
            return Err(Error::Domain("steps_per_segment must be positive".into()));
        }
        if let Some(&(u, v)) = self.vertices.iter().find(|&&(u, v)| !(u > 0.0 && v > 0.0)) {
            return Err(Error::Domain(format!(
                "path leaves U > 0, V > 0 at ({u}, {v})"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopReport {
    /// J/K
    pub total: f64,
    pub steps: usize,
    pub max_segment: f64,
    /// `Σ |ΔS_segment|`, the scale for closed-loop checks.
    pub abs_sum: f64,
    pub segments: Vec<f64>,
}

/// Trapezoidal `∫ (dU + P dV) / T` with `P = (γ-1)U/V` and `T = U/(n·Cv)`.
pub fn path_delta_s(spec: &GasSpec, amount: f64, path: &PathSpec) -> Result<LoopReport> {
    spec.validate()?;
    path.validate()?;
    if !(amount > 0.0) {
        return Err(Error::Domain(format!(
            "amount must be positive, got {amount}"
        )));
    }
    let k = path.steps_per_segment;
    let ncv = amount * spec.cv;
    let segments: Vec<f64> = path
        .vertices
        .windows(2)
        .map(|w| {
            let ((u0, v0), (u1, v1)) = (w[0], w[1]);
            let (du, dv) = (u1 - u0, v1 - v0);
            // integrand per unit path parameter
            let f = |t: f64| {
                let u = u0 + t * du;
                let v = v0 + t * dv;
                let p = spec.pressure(u, v);
                let temp = u / ncv;
                (du + p * dv) / temp
            };
            let h = 1.0 / k as f64;
            let inner: f64 = (1..k).map(|i| f(i as f64 * h)).sum();
            h * (0.5 * (f(0.0) + f(1.0)) + inner)
        })
        .collect();
    Ok(LoopReport {
        total: segments.iter().sum(),
        steps: k * segments.len(),
        max_segment: segments.iter().map(|s| s.abs()).fold(0.0, f64::max),
        abs_sum: segments.iter().map(|s| s.abs()).sum(),
        segments,
    })
}

/// CSV `segment,from_U_J,from_V_m3,to_U_J,to_V_m3,delta_S_J_per_K`, then a
/// `total` row.
pub fn write_loop_csv<W: Write>(path: &PathSpec, report: &LoopReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "segment",
        "from_U_J",
        "from_V_m3",
        "to_U_J",
        "to_V_m3",
        "delta_S_J_per_K",
    ])?;
    for (i, (seg, s)) in path.vertices.windows(2).zip(&report.segments).enumerate() {
        w.write_record([
            i.to_string(),
            seg[0].0.to_string(),
            seg[0].1.to_string(),
            seg[1].0.to_string(),
            seg[1].1.to_string(),
            s.to_string(),
        ])?;
    }
    let (first, last) = (path.vertices[0], path.vertices[path.vertices.len() - 1]);
    w.write_record([
        "total".to_string(),
        first.0.to_string(),
        first.1.to_string(),
        last.0.to_string(),
        last.1.to_string(),
        report.total.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}
