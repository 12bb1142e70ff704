//! Stereo error metrics and error–uncertainty correlation.
//!
//! All reductions run over jointly valid pixels in row-major order.

use std::io::Write;

use crate::error::{Error, Result};
use crate::maps::{decode, DisparityMap, EvidentialMap};

/// Outlier thresholds reported by default, in pixels.
pub const DEFAULT_THRESHOLDS: [f64; 2] = [1.0, 3.0];

/// Mean absolute disparity error.
pub fn epe(pred: &DisparityMap, gt: &DisparityMap) -> Result<f64> {
    let (sum, n) = pred
        .joint_valid(gt)?
        .fold((0.0, 0usize), |(s, n), (p, g)| (s + (p - g).abs(), n + 1));
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(sum / n as f64)
}

/// Fraction of pixels whose absolute error strictly exceeds `threshold`.
pub fn outlier_rate(pred: &DisparityMap, gt: &DisparityMap, threshold: f64) -> Result<f64> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::BadConfig(format!("outlier threshold must be positive, got {threshold}")));
    }
    let (bad, n) = pred
        .joint_valid(gt)?
        .fold((0usize, 0usize), |(b, n), (p, g)| (b + ((p - g).abs() > threshold) as usize, n + 1));
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(bad as f64 / n as f64)
}

/// Sample Pearson correlation over jointly valid pixels.
pub fn pearson(x: &DisparityMap, y: &DisparityMap) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = x.joint_valid(y)?.unzip();
    pearson_slices(&xs, &ys)
}

/// Two-pass Pearson correlation of paired samples.
pub fn pearson_slices(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::shape((xs.len(), 1), (ys.len(), 1)));
    }
    match xs.len() {
        0 => return Err(Error::EmptyMask),
        1 => return Err(Error::DegenerateInput("correlation needs at least two pixels")),
        _ => {}
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateInput("constant field"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Evaluation of one prediction against ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub epe: f64,
    /// `(threshold px, rate)` pairs.
    pub outlier_rates: Vec<(f64, f64)>,
    /// Fraction of errors above 3 px.
    pub err_3px: f64,
    /// `None` when the correlation is undefined (constant field) or was not
    /// computed.
    pub pearson_aleatoric: Option<f64>,
    pub pearson_epistemic: Option<f64>,
    pub valid_pixel_count: usize,
}

impl MetricsReport {
    /// Writes the `metric,value` CSV. Undefined correlations are empty cells.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["metric", "value"])?;
        w.write_record(["epe", &self.epe.to_string()])?;
        for (t, rate) in &self.outlier_rates {
            w.write_record([format!("d1_{t}px"), rate.to_string()])?;
        }
        w.write_record(["err_3px", &self.err_3px.to_string()])?;
        let cell = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        w.write_record(["pearson_al", &cell(self.pearson_aleatoric)])?;
        w.write_record(["pearson_ep", &cell(self.pearson_epistemic)])?;
        w.write_record(["n_valid", &self.valid_pixel_count.to_string()])?;
        w.flush()?;
        Ok(())
    }
}

/// EPE and outlier rates of a plain disparity prediction.
pub fn evaluate(pred: &DisparityMap, gt: &DisparityMap, thresholds: &[f64]) -> Result<MetricsReport> {
    let epe = epe(pred, gt)?;
    let outlier_rates = thresholds
        .iter()
        .map(|&t| Ok((t, outlier_rate(pred, gt, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MetricsReport {
        epe,
        outlier_rates,
        err_3px: outlier_rate(pred, gt, 3.0)?,
        pearson_aleatoric: None,
        pearson_epistemic: None,
        valid_pixel_count: pred.joint_valid(gt)?.count(),
    })
}

/// Decodes `map`, scores its disparity against `gt` and correlates the
/// per-pixel absolute error with each uncertainty.
pub fn analyze(map: &EvidentialMap, gt: &DisparityMap) -> Result<MetricsReport> {
    analyze_with_thresholds(map, gt, &DEFAULT_THRESHOLDS)
}

pub fn analyze_with_thresholds(
    map: &EvidentialMap,
    gt: &DisparityMap,
    thresholds: &[f64],
) -> Result<MetricsReport> {
    if map.dims() != gt.dims() {
        return Err(Error::shape(map.dims(), gt.dims()));
    }
    let decoded = decode(map);
    let mut report = evaluate(&decoded.disparity, gt, thresholds)?;
    let (w, h) = map.dims();
    let error = DisparityMap::from_fn(w, h, |x, y| match (decoded.disparity.get(x, y), gt.get(x, y)) {
        (Some(d), Some(g)) => (d - g).abs(),
        _ => f64::NAN,
    });
    report.pearson_aleatoric = defined(pearson(&error, &decoded.aleatoric))?;
    report.pearson_epistemic = defined(pearson(&error, &decoded.epistemic))?;
    Ok(report)
}

fn defined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegenerateInput(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
