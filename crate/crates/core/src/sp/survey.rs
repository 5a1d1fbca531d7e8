use rayon::prelude::*;
use serde::Serialize;

use super::path::SymplecticPath;
use super::rotation::tau_with;
use super::{SpConfig, SpError};

pub const HISTOGRAM_BINS: usize = 10;

/// Empirical defects `|τ(ab) - τ(a) - τ(b)|` over a sample of pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyStats {
    pub count: usize,
    pub k_max: usize,
    pub max: f64,
    pub mean: f64,
    /// Equal-width bins over `[0, max]`.
    pub histogram: Vec<usize>,
    pub bin_width: f64,
    /// Defects in input order.
    pub defects: Vec<f64>,
}

fn defect(a: &SymplecticPath, b: &SymplecticPath, k_max: usize, config: &SpConfig) -> Result<f64, SpError> {
    let ab = a.pointwise_product(b)?;
    let t_ab = tau_with(&ab, k_max, config)?.value;
    let t_a = tau_with(a, k_max, config)?.value;
    let t_b = tau_with(b, k_max, config)?.value;
    Ok((t_ab - t_a - t_b).abs())
}

pub fn defect_survey(
    pairs: &[(SymplecticPath, SymplecticPath)],
    k_max: usize,
) -> Result<SurveyStats, SpError> {
    defect_survey_with(pairs, k_max, &SpConfig::default())
}

/// Pairs are processed in parallel on the current rayon pool; results keep
/// input order, so the output does not depend on the thread count.
pub fn defect_survey_with(
    pairs: &[(SymplecticPath, SymplecticPath)],
    k_max: usize,
    config: &SpConfig,
) -> Result<SurveyStats, SpError> {
    if pairs.is_empty() {
        return Err(SpError::EmptySurvey);
    }
    if k_max == 0 {
        return Err(SpError::ZeroIterations);
    }
    let defects = pairs
        .par_iter()
        .map(|(a, b)| defect(a, b, k_max, config))
        .collect::<Result<Vec<_>, _>>()?;
    let count = defects.len();
    let max = defects.iter().copied().fold(0.0, f64::max);
    let mean = defects.iter().sum::<f64>() / count as f64;
    let bin_width = max / HISTOGRAM_BINS as f64;
    let mut histogram = vec![0; HISTOGRAM_BINS];
    for &d in &defects {
        let bin = if bin_width > 0.0 {
            ((d / bin_width) as usize).min(HISTOGRAM_BINS - 1)
        } else {
            0
        };
        histogram[bin] += 1;
    }
    Ok(SurveyStats {
        count,
        k_max,
        max,
        mean,
        histogram,
        bin_width,
        defects,
    })
}
