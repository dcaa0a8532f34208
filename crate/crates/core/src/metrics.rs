//! Prediction scoring: RMS error, signed relative difference, and
//! threshold-based correct/wrong classification.
//!
//! The relative difference keeps its sign: negative means the model
//! over-predicted, positive means it under-predicted. Only classification
//! takes the magnitude. All arithmetic is double precision; rounding happens
//! at display time only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Classification outcome of one prediction. `Unclassified` means no
/// threshold has been applied yet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Correct,
    Wrong,
    Unclassified,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Correct => "Correct",
            Verdict::Wrong => "Wrong",
            Verdict::Unclassified => "Unclassified",
        };
        f.write_str(s)
    }
}

/// One (actual, predicted) overhead pair with its signed relative difference
/// in percent and, once a threshold is applied, a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionPair {
    pub actual: f64,
    pub predicted: f64,
    pub signed_diff_pct: f64,
    pub verdict: Verdict,
}

impl PredictionPair {
    /// Builds a pair, computing the signed difference. Fails when `actual`
    /// is zero.
    pub fn new(actual: f64, predicted: f64) -> Result<Self> {
        Ok(PredictionPair {
            actual,
            predicted,
            signed_diff_pct: absolute_difference(actual, predicted)?,
            verdict: Verdict::Unclassified,
        })
    }

    /// Builds a pair carrying an externally supplied signed difference, for
    /// replaying previously reported rows verbatim.
    pub fn with_signed_diff(actual: f64, predicted: f64, signed_diff_pct: f64) -> Self {
        PredictionPair {
            actual,
            predicted,
            signed_diff_pct,
            verdict: Verdict::Unclassified,
        }
    }

    /// Returns the pair with the verdict for `threshold_pct` applied.
    pub fn classified(mut self, threshold_pct: f64) -> Self {
        self.verdict = classify(&self, threshold_pct);
        self
    }
}

/// Aggregate scores over a prediction sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub n: usize,
    pub rms: f64,
    pub mean_abs_diff_pct: f64,
    pub correct_count: usize,
    pub accuracy: f64,
    pub threshold_pct: f64,
}

/// Per-pair rows plus the aggregate summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub pairs: Vec<PredictionPair>,
    pub summary: EvaluationSummary,
}

/// Root mean square error `sqrt(sum((actual - predicted)^2) / n)`.
pub fn rms(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sum_sq: f64 = actual
        .iter()
        .zip(predicted)
        .map(|(a, p)| (a - p) * (a - p))
        .sum();
    Ok((sum_sq / actual.len() as f64).sqrt())
}

/// Signed relative difference in percent:
/// `(actual - predicted) / actual * 100`.
///
/// Negative values mean over-prediction, positive values under-prediction.
pub fn absolute_difference(actual: f64, predicted: f64) -> Result<f64> {
    if actual == 0.0 {
        return Err(Error::ZeroActual);
    }
    Ok((actual - predicted) / actual * 100.0)
}

/// Correct iff the magnitude of the signed difference is at or under the
/// threshold ("equal or under" is inclusive).
pub fn classify(pair: &PredictionPair, threshold_pct: f64) -> Verdict {
    if pair.signed_diff_pct.abs() <= threshold_pct {
        Verdict::Correct
    } else {
        Verdict::Wrong
    }
}

/// Training-style correctness: the prediction must land within
/// `tolerance * output_range` of the target (inclusive).
pub fn tolerance_correct(predicted: f64, target: f64, tolerance: f64, output_range: f64) -> bool {
    (predicted - target).abs() <= tolerance * output_range
}

/// Scores a full prediction sample against `threshold_pct`: per-pair signed
/// differences and verdicts, RMS, mean absolute difference, and accuracy.
pub fn evaluate(actual: &[f64], predicted: &[f64], threshold_pct: f64) -> Result<Evaluation> {
    let rms = rms(actual, predicted)?;
    let pairs: Vec<PredictionPair> = actual
        .iter()
        .zip(predicted)
        .map(|(&a, &p)| PredictionPair::new(a, p).map(|pair| pair.classified(threshold_pct)))
        .collect::<Result<_>>()?;
    Ok(summarize(pairs, rms, threshold_pct))
}

/// Aggregates already-built pairs (their stored signed differences are
/// classified as-is).
pub fn evaluate_pairs(pairs: Vec<PredictionPair>, threshold_pct: f64) -> Result<Evaluation> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let actual: Vec<f64> = pairs.iter().map(|p| p.actual).collect();
    let predicted: Vec<f64> = pairs.iter().map(|p| p.predicted).collect();
    let rms = rms(&actual, &predicted)?;
    let pairs = pairs
        .into_iter()
        .map(|p| p.classified(threshold_pct))
        .collect();
    Ok(summarize(pairs, rms, threshold_pct))
}

fn summarize(pairs: Vec<PredictionPair>, rms: f64, threshold_pct: f64) -> Evaluation {
    let n = pairs.len();
    let mean_abs_diff_pct =
        pairs.iter().map(|p| p.signed_diff_pct.abs()).sum::<f64>() / n as f64;
    let correct_count = pairs.iter().filter(|p| p.verdict == Verdict::Correct).count();
    Evaluation {
        summary: EvaluationSummary {
            n,
            rms,
            mean_abs_diff_pct,
            correct_count,
            accuracy: correct_count as f64 / n as f64,
            threshold_pct,
        },
        pairs,
    }
}

/// Formats a signed difference the way evaluation tables print it:
/// magnitude to six decimals with an explicit `(+)`/`(-)` sign marker.
pub fn format_signed_diff(signed_diff_pct: f64) -> String {
    let sign = if signed_diff_pct < 0.0 { "(-)" } else { "(+)" };
    format!("{sign} {:.6}", signed_diff_pct.abs())
}
