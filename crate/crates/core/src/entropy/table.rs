use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::meter::EntropyMeter;
use crate::error::{Error, Result};
use crate::state::{CompoundState, SimpleState};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeterMetadata {
    pub oracle: String,
    pub x0: CompoundState,
    pub x1: CompoundState,
    pub lambda_tol: f64,
    pub bracket_limit: f64,
}

impl MeterMetadata {
    pub fn of(meter: &EntropyMeter) -> Self {
        Self {
            oracle: meter.oracle().name().to_string(),
            x0: meter.x0().clone(),
            x1: meter.x1().clone(),
            lambda_tol: meter.lambda_tol(),
            bracket_limit: meter.bracket_limit(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub state_id: String,
    pub state: SimpleState,
    pub entropy_units: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyTable {
    pub meter: MeterMetadata,
    pub rows: Vec<TableRow>,
}

impl EntropyTable {
    /// Evaluates the meter on every state, in order.
    pub fn build(
        meter: &EntropyMeter,
        states: Vec<(String, SimpleState)>,
        parallel: bool,
    ) -> Result<Self> {
        let eval = |(id, s): (String, SimpleState)| -> Result<TableRow> {
            let entropy_units = meter.entropy(&s.clone().into())?;
            Ok(TableRow {
                state_id: id,
                state: s,
                entropy_units,
            })
        };
        let rows = if parallel {
            states
                .into_par_iter()
                .map(eval)
                .collect::<Result<Vec<_>>>()?
        } else {
            states.into_iter().map(eval).collect::<Result<Vec<_>>>()?
        };
        Ok(Self {
            meter: MeterMetadata::of(meter),
            rows,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.entropy_units).collect()
    }

    /// Metadata as `# key: value` lines, then CSV
    /// `state_id,amount,<coordinate names>,entropy_units`.
    pub fn write_csv<W: Write>(&self, coordinate_names: &[String], mut out: W) -> Result<()> {
        let m = &self.meter;
        writeln!(out, "# oracle: {}", m.oracle)?;
        writeln!(out, "# x0: {}", serde_json::to_string(&m.x0)?)?;
        writeln!(out, "# x1: {}", serde_json::to_string(&m.x1)?)?;
        writeln!(out, "# lambda_tol: {:e}", m.lambda_tol)?;
        writeln!(out, "# bracket_limit: {}", m.bracket_limit)?;
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["state_id".to_string(), "amount".to_string()];
        header.extend(coordinate_names.iter().cloned());
        header.push("entropy_units".into());
        w.write_record(&header)?;
        for r in &self.rows {
            if r.state.coords.len() != coordinate_names.len() {
                return Err(Error::Domain(format!(
                    "row {} has {} coordinates, header has {}",
                    r.state_id,
                    r.state.coords.len(),
                    coordinate_names.len()
                )));
            }
            let mut rec = vec![r.state_id.clone(), r.state.amount.to_string()];
            rec.extend(r.state.coords.iter().map(f64::to_string));
            rec.push(r.entropy_units.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Least-squares map `meter ≈ slope · analytic + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineFitReport {
    pub slope: f64,
    pub offset: f64,
    pub max_abs_residual: f64,
    pub rows: usize,
}

impl AffineFitReport {
    /// Converts a meter-unit value back to analytic units.
    pub fn to_analytic(&self, meter_value: f64) -> f64 {
        (meter_value - self.offset) / self.slope
    }
}

pub fn affine_fit(analytic: &[f64], meter: &[f64]) -> Result<AffineFitReport> {
    if analytic.len() != meter.len() {
        return Err(Error::DegenerateFit("length mismatch".into()));
    }
    let n = analytic.len();
    if n < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 rows, got {n}"
        )));
    }
    let ma = analytic.iter().sum::<f64>() / n as f64;
    let mm = meter.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (a, m) in analytic.iter().zip(meter) {
        sxx += (a - ma) * (a - ma);
        sxy += (a - ma) * (m - mm);
    }
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("all analytic values are equal".into()));
    }
    let slope = sxy / sxx;
    let offset = mm - slope * ma;
    let max_abs_residual = analytic
        .iter()
        .zip(meter)
        .map(|(a, m)| (m - (slope * a + offset)).abs())
        .fold(0.0, f64::max);
    Ok(AffineFitReport {
        slope,
        offset,
        max_abs_residual,
        rows: n,
    })
}

/// Fits the table's meter values against an analytic entropy.
pub fn affine_match<F>(table: &EntropyTable, analytic: F) -> Result<AffineFitReport>
where
    F: Fn(&SimpleState) -> Result<f64>,
{
    let a = table
        .rows
        .iter()
        .map(|r| analytic(&r.state))
        .collect::<Result<Vec<_>>>()?;
    affine_fit(&a, &table.values())
}
