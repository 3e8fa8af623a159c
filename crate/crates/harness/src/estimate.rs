//! Empirical operator constants: sup over a family and the trend of per-bucket maxima.

use serde::{Deserialize, Serialize};

use radon_core::stats::log_log_slope;

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BucketMax {
    pub size: usize,
    #[serde(with = "crate::jsonnum")]
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantEstimate {
    pub sup: f64,
    pub bucket_maxima: Vec<BucketMax>,
    pub slope: f64,
    pub stderr: f64,
}

/// Sup of `(bucket, ratio)` samples and the least-squares slope of log(bucket max) vs log(bucket).
pub fn estimate_constant(samples: &[(usize, f64)]) -> Result<ConstantEstimate, HarnessError> {
    let mut maxima: Vec<BucketMax> = Vec::new();
    for &(size, v) in samples {
        if !v.is_finite() {
            return Err(HarnessError::Argument(format!("non-finite ratio {v} in bucket {size}")));
        }
        match maxima.iter_mut().find(|b| b.size == size) {
            Some(b) => b.max = b.max.max(v),
            None => maxima.push(BucketMax { size, max: v }),
        }
    }
    maxima.sort_by_key(|b| b.size);
    if maxima.len() < 2 {
        return Err(HarnessError::Argument("a trend needs at least two buckets".into()));
    }
    if maxima.iter().any(|b| !(b.max > 0.0)) {
        return Err(HarnessError::Argument("bucket maxima must be positive".into()));
    }
    let x: Vec<f64> = maxima.iter().map(|b| b.size as f64).collect();
    let y: Vec<f64> = maxima.iter().map(|b| b.max).collect();
    let fit = log_log_slope(&x, &y)?;
    let sup = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ConstantEstimate { sup, bucket_maxima: maxima, slope: fit.slope, stderr: fit.stderr })
}
