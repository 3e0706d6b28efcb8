//! Count series over grids of `N`, log-log exponent fits, and their CSV and
//! SVG forms.

mod svg;

pub use svg::render_svg;

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{enumerate_points, Curve, CurveError, Mode};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("bad grid '{spec}': {reason}")]
    Grid { spec: String, reason: String },
    #[error("at N = {n}: {source}")]
    Enumeration { n: u64, source: CurveError },
    #[error("cannot fit: {0}")]
    Fit(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub n: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountSeries {
    pub curve: Curve,
    pub mode: Mode,
    pub samples: Vec<Sample>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// `a:b:factor` (geometric, `a, a f, a f^2, .. <= b`) or a comma list.
pub fn parse_grid(spec: &str) -> Result<Vec<u64>, ExperimentError> {
    let bad = |reason: &str| ExperimentError::Grid { spec: spec.to_string(), reason: reason.to_string() };
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad(&format!("'{}' is not a positive integer", s.trim())));
    let grid: Vec<u64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [a, b, f] = parts[..] else {
            return Err(bad("expected a:b:factor"));
        };
        let (a, b, f) = (num(a)?, num(b)?, num(f)?);
        if a == 0 || f < 2 || b < a {
            return Err(bad("need 1 <= a <= b and factor >= 2"));
        }
        std::iter::successors(Some(a), |&x| x.checked_mul(f)).take_while(|&x| x <= b).collect()
    } else {
        spec.split(',').map(num).collect::<Result<_, _>>()?
    };
    if grid.is_empty() || grid[0] == 0 {
        return Err(bad("values must be at least 1"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("values must be strictly increasing"));
    }
    Ok(grid)
}

/// Exact target-set sizes for each `N` of the grid, computed in parallel.
pub fn run_series(c: &Curve, mode: Mode, grid: &[u64]) -> Result<CountSeries, ExperimentError> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::Grid { spec: format!("{grid:?}"), reason: "must be nonempty and increasing".into() });
    }
    let samples = grid
        .par_iter()
        .map(|&n| {
            let count = enumerate_points(c, n, mode).map_err(|source| ExperimentError::Enumeration { n, source })?.len();
            Ok(Sample { n, count: count as u64 })
        })
        .collect::<Result<_, ExperimentError>>()?;
    Ok(CountSeries { curve: c.clone(), mode, samples })
}

impl CountSeries {
    pub fn fit(&self) -> Result<FitResult, ExperimentError> {
        fit_exponent(&self.samples)
    }
}

/// Least squares line through `(ln N, ln count)`. Needs at least three samples
/// with distinct `N` and positive counts. Constant counts fit exactly with slope
/// zero and `r_squared = 1`.
pub fn fit_exponent(samples: &[Sample]) -> Result<FitResult, ExperimentError> {
    if samples.len() < 3 {
        return Err(ExperimentError::Fit(format!("need at least 3 samples, got {}", samples.len())));
    }
    if let Some(s) = samples.iter().find(|s| s.count == 0) {
        return Err(ExperimentError::Fit(format!("count is zero at N = {}", s.n)));
    }
    let xs: Vec<f64> = samples.iter().map(|s| (s.n as f64).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| (s.count as f64).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ExperimentError::Fit("all N are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(FitResult { slope, intercept, r_squared })
}

pub fn write_csv<W: Write>(samples: &[Sample], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(s)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<Sample>, ExperimentError> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
