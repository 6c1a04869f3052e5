//! Series statistics.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::time::Month;

/// Product-moment correlation coefficient of two equal-length series.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SeriesLengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::invalid_parameter("series", "need at least 2 points"));
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(cov / (var_x.sqrt() * var_y.sqrt()))
}

/// Load a monthly series CSV `month,value` with months as `YYYY-MM`.
/// Lines starting with `#` are skipped.
pub fn load_series_csv(path: impl AsRef<Path>) -> Result<BTreeMap<Month, f64>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path.as_ref())?;
    let mut series = BTreeMap::new();
    for row in reader.deserialize::<(String, f64)>() {
        let (month, value) = row?;
        series.insert(month.parse::<Month>()?, value);
    }
    Ok(series)
}

/// Align two monthly series on their common months, in month order.
pub fn join_monthly(a: &BTreeMap<Month, f64>, b: &BTreeMap<Month, f64>) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (month, x) in a {
        if let Some(y) = b.get(month) {
            xs.push(*x);
            ys.push(*y);
        }
    }
    (xs, ys)
}
