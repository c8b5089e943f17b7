//! Certified counts on growing disks and the fit `N ≈ c·r²`.

use std::time::Instant;

use nodal_core::census::{certified_count, GridSpec};
use nodal_core::wave::WaveEnsemble;
use nodal_core::Vec2;
use serde::{Deserialize, Serialize};

use crate::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub r: f64,
    pub plain: usize,
    pub certified: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRun {
    pub eps: f64,
    pub step: f64,
    pub rows: Vec<ScalingRow>,
    /// Least squares `c` of `certified ≈ c·r²`.
    pub fitted_c: f64,
    /// `‖certified − c·r²‖ / ‖certified‖`, zero when every count is zero.
    pub relative_residual: f64,
    pub diagnostic: Option<String>,
}

/// Least squares fit of `y ≈ c·x²` through the origin and its relative
/// residual.
pub fn fit_through_origin(points: &[(f64, f64)]) -> (f64, f64) {
    let sxx: f64 = points.iter().map(|&(r, _)| r.powi(4)).sum();
    let sxy: f64 = points.iter().map(|&(r, y)| r * r * y).sum();
    let c = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let res: f64 = points
        .iter()
        .map(|&(r, y)| (y - c * r * r).powi(2))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = points.iter().map(|&(_, y)| y * y).sum::<f64>().sqrt();
    (c, if norm > 0.0 { res / norm } else { 0.0 })
}

/// Counts on `B(0, r)` for every radius at a common step and margin. With
/// `timing` off the `seconds` column is written as 0, which makes the CSV
/// reproducible byte for byte.
pub fn run_scaling(
    ensemble: &WaveEnsemble,
    radii: &[f64],
    eps: f64,
    step: f64,
    timing: bool,
) -> Result<ScalingRun> {
    if radii.is_empty() {
        return Err(LabError::Invalid("no radii given".into()));
    }
    if radii
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(LabError::Invalid(
            "radii must be strictly increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let start = Instant::now();
        let census = certified_count(ensemble, &GridSpec::new(Vec2::ZERO, r, step)?, eps)?;
        rows.push(ScalingRow {
            r,
            plain: census.plain_count,
            certified: census.certified_count,
            seconds: if timing {
                start.elapsed().as_secs_f64()
            } else {
                0.0
            },
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|row| (row.r, row.certified as f64))
        .collect();
    let (fitted_c, relative_residual) = fit_through_origin(&points);
    let diagnostic = (eps >= ensemble.sup_bound()).then(|| {
        format!(
            "margin {eps} is at least the sup bound {}; nothing can be certified",
            ensemble.sup_bound()
        )
    });
    Ok(ScalingRun {
        eps,
        step,
        rows,
        fitted_c,
        relative_residual,
        diagnostic,
    })
}

impl ScalingRun {
    /// `count(r_{i+1}) / count(r_i)` for consecutive radii, `None` where
    /// the smaller count is zero.
    pub fn ratios(&self) -> Vec<Option<f64>> {
        self.rows
            .windows(2)
            .map(|w| (w[0].certified > 0).then(|| w[1].certified as f64 / w[0].certified as f64))
            .collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        rows_to_csv(&self.rows)
    }
}

pub fn rows_to_csv(rows: &[ScalingRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| LabError::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ScalingRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["r", "plain", "certified", "seconds"] {
        return Err(LabError::Invalid(format!(
            "unexpected CSV header {header:?}"
        )));
    }
    Ok(r.deserialize()
        .collect::<std::result::Result<Vec<ScalingRow>, _>>()?)
}
