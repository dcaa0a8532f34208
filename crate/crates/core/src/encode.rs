//! Numeric encoding of project records.
//!
//! Each categorical factor occupies a single input node as `index/(k-1)`
//! (ordinal, not one-of-k, so the input layer stays at ten nodes). Continuous
//! factors are min-maxed onto `[0,1]` using the observed dataset range; the
//! schema's declared range is used only for validation. The overhead target
//! is min-maxed onto `[0.1, 0.9]` to keep the sigmoid output node away from
//! saturation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::ProjectRecord;
use crate::schema::{FactorKind, FactorSchema};

/// Lower edge of the normalized target codomain.
pub const TARGET_LO: f64 = 0.1;
/// Upper edge of the normalized target codomain.
pub const TARGET_HI: f64 = 0.9;

/// Inclusive `[lo, hi]` source interval of one min-max map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    fn span(&self) -> f64 {
        self.hi - self.lo
    }
}

/// The min-max parameters frozen at encode time. Required to encode new
/// records and to map network outputs back to percentages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    /// Per-factor source interval, in schema order. Categorical factors use
    /// `[0, max(k-1, 1)]` over the level index.
    pub features: Vec<Bounds>,
    /// Observed overhead range, mapped onto `[TARGET_LO, TARGET_HI]`.
    pub target: Bounds,
}

/// A denormalized prediction. `extrapolated` flags network outputs that fell
/// outside the nominal `[0.1, 0.9]` codomain and were mapped linearly anyway.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetPct {
    pub pct: f64,
    pub extrapolated: bool,
}

impl NormalizationParams {
    pub fn validate(&self) -> Result<()> {
        for (i, b) in self.features.iter().enumerate() {
            if !(b.lo.is_finite() && b.hi.is_finite() && b.lo < b.hi) {
                return Err(Error::InvalidDataset(format!(
                    "normalization bounds for feature {i} require lo < hi, got [{}, {}]",
                    b.lo, b.hi
                )));
            }
        }
        if !(self.target.lo.is_finite() && self.target.hi.is_finite() && self.target.lo < self.target.hi) {
            return Err(Error::InvalidDataset(format!(
                "target bounds require lo < hi, got [{}, {}]",
                self.target.lo, self.target.hi
            )));
        }
        Ok(())
    }

    /// Maps an overhead percentage onto the normalized `[0.1, 0.9]` scale.
    pub fn normalize_target(&self, pct: f64) -> f64 {
        TARGET_LO + (TARGET_HI - TARGET_LO) * (pct - self.target.lo) / self.target.span()
    }

    /// Exact inverse of [`Self::normalize_target`]. Values outside
    /// `[0.1, 0.9]` are extrapolated linearly and flagged.
    pub fn denormalize_target(&self, y: f64) -> TargetPct {
        let pct = self.target.lo + (y - TARGET_LO) * self.target.span() / (TARGET_HI - TARGET_LO);
        TargetPct {
            pct,
            extrapolated: !(TARGET_LO..=TARGET_HI).contains(&y),
        }
    }

    /// Encodes one record's factor values into the network input vector.
    pub fn encode_record(&self, record: &ProjectRecord, schema: &FactorSchema) -> Result<Vec<f64>> {
        record.validate(schema)?;
        let mut input = Vec::with_capacity(schema.factors.len());
        for ((spec, value), bounds) in schema.factors.iter().zip(&record.values).zip(&self.features)
        {
            let raw = value.raw(&spec.kind)?;
            input.push((raw - bounds.lo) / bounds.span());
        }
        Ok(input)
    }
}

/// A fully-encoded dataset: inputs in `[0,1]`, targets in `[0.1, 0.9]`, the
/// normalization parameters that produced them, and the source record ids.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDataset {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub norm: NormalizationParams,
    pub source_ids: Vec<String>,
}

/// An (inputs, targets) subset handed to training and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl Samples {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

impl EncodedDataset {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Extracts the rows for `ids`, in the order given.
    pub fn subset(&self, ids: &[String]) -> Result<Samples> {
        let mut inputs = Vec::with_capacity(ids.len());
        let mut targets = Vec::with_capacity(ids.len());
        for id in ids {
            let idx = self
                .source_ids
                .iter()
                .position(|s| s == id)
                .ok_or_else(|| Error::InvalidDataset(format!("unknown record id {id:?}")))?;
            inputs.push(self.inputs[idx].clone());
            targets.push(self.targets[idx]);
        }
        Ok(Samples { inputs, targets })
    }
}

fn feature_bounds(records: &[ProjectRecord], schema: &FactorSchema) -> Result<Vec<Bounds>> {
    let mut bounds = Vec::with_capacity(schema.factors.len());
    for (i, spec) in schema.factors.iter().enumerate() {
        match &spec.kind {
            FactorKind::Categorical { levels } => {
                // A single-level factor maps its only index to 0.0.
                let hi = ((levels.len() - 1) as f64).max(1.0);
                bounds.push(Bounds { lo: 0.0, hi });
            }
            FactorKind::Continuous { .. } => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for record in records {
                    let v = record.values[i].raw(&spec.kind)?;
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                if lo >= hi {
                    return Err(Error::ZeroRange {
                        factor: spec.name.clone(),
                    });
                }
                bounds.push(Bounds { lo, hi });
            }
        }
    }
    Ok(bounds)
}

/// Encodes validated records into an [`EncodedDataset`].
///
/// Fails when the record list is empty, when any record does not conform to
/// the schema, or when a continuous factor (or the target) has zero observed
/// range.
pub fn encode(records: &[ProjectRecord], schema: &FactorSchema) -> Result<EncodedDataset> {
    if records.is_empty() {
        return Err(Error::InvalidDataset("cannot encode an empty record list".into()));
    }
    for record in records {
        record.validate(schema)?;
    }

    let features = feature_bounds(records, schema)?;
    let target_lo = records.iter().map(|r| r.overhead_pct).fold(f64::INFINITY, f64::min);
    let target_hi = records.iter().map(|r| r.overhead_pct).fold(f64::NEG_INFINITY, f64::max);
    if target_lo >= target_hi {
        return Err(Error::ZeroRange {
            factor: "overhead_pct".into(),
        });
    }

    let norm = NormalizationParams {
        features,
        target: Bounds {
            lo: target_lo,
            hi: target_hi,
        },
    };
    norm.validate()?;

    let mut inputs = Vec::with_capacity(records.len());
    let mut targets = Vec::with_capacity(records.len());
    let mut source_ids = Vec::with_capacity(records.len());
    for record in records {
        inputs.push(norm.encode_record(record, schema)?);
        targets.push(norm.normalize_target(record.overhead_pct));
        source_ids.push(record.id.clone());
    }

    Ok(EncodedDataset {
        inputs,
        targets,
        norm,
        source_ids,
    })
}
