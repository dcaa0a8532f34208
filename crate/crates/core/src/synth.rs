//! Seeded synthetic project datasets with a known ground truth.
//!
//! Factor values are drawn uniformly over the schema domains; the overhead
//! target is a clamped linear form over schema-range-encoded factors plus
//! sparse pairwise interactions and optional gaussian noise. The ground
//! truth stays hand-checkable, and noiseless generation satisfies
//! `overhead_pct == oracle_overhead` exactly.

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::encode::Bounds;
use crate::error::{Error, Result};
use crate::record::{FactorValue, ProjectRecord};
use crate::schema::{FactorKind, FactorSchema};

/// One pairwise interaction term: `coefficient * x[i] * x[j]` over
/// schema-encoded factor values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interaction {
    pub i: usize,
    pub j: usize,
    pub coefficient: f64,
}

/// The generating function for synthetic overhead percentages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthSpec {
    pub base_pct: f64,
    /// One weight per factor, applied to the schema-range encoding in [0,1].
    pub weights: Vec<f64>,
    pub interactions: Vec<Interaction>,
    /// Standard deviation of additive gaussian noise, in percent points.
    pub noise_sd: f64,
    /// Generated overheads are clamped into this range.
    pub clamp: Bounds,
}

impl Default for GroundTruthSpec {
    fn default() -> Self {
        GroundTruthSpec {
            base_pct: 8.0,
            weights: vec![0.5, 1.2, 0.8, 0.6, 0.4, 0.25, 0.25, 0.3, 0.45, 0.25],
            interactions: vec![
                Interaction { i: 1, j: 2, coefficient: 0.6 },
                Interaction { i: 3, j: 8, coefficient: -0.5 },
            ],
            noise_sd: 0.0,
            clamp: Bounds { lo: 5.0, hi: 15.0 },
        }
    }
}

impl GroundTruthSpec {
    pub fn validate(&self, schema: &FactorSchema) -> Result<()> {
        if self.weights.len() != schema.factors.len() {
            return Err(Error::InvalidDataset(format!(
                "ground truth declares {} weights for {} factors",
                self.weights.len(),
                schema.factors.len()
            )));
        }
        if !(self.clamp.lo < self.clamp.hi && self.clamp.lo > 0.0 && self.clamp.hi < 100.0) {
            return Err(Error::InvalidDataset(format!(
                "clamp range must satisfy 0 < lo < hi < 100, got [{}, {}]",
                self.clamp.lo, self.clamp.hi
            )));
        }
        if !(self.noise_sd.is_finite() && self.noise_sd >= 0.0) {
            return Err(Error::InvalidDataset(format!(
                "noise_sd must be non-negative, got {}",
                self.noise_sd
            )));
        }
        for t in &self.interactions {
            if t.i >= schema.factors.len() || t.j >= schema.factors.len() {
                return Err(Error::InvalidDataset(format!(
                    "interaction ({}, {}) is out of factor range",
                    t.i, t.j
                )));
            }
        }
        Ok(())
    }
}

/// Generated records plus the ground truth and seed that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub records: Vec<ProjectRecord>,
    pub spec: GroundTruthSpec,
    pub seed: u64,
}

/// Encodes a record over the *schema-declared* domains (level index over
/// `k-1`, min-max over the declared range). This is the ground truth's own
/// coordinate system; the training pipeline instead normalizes over observed
/// data.
pub fn schema_unit_encoding(record: &ProjectRecord, schema: &FactorSchema) -> Result<Vec<f64>> {
    record.validate(schema)?;
    schema_unit_encoding_unchecked(record, schema)
}

fn ground_truth_value(encoded: &[f64], spec: &GroundTruthSpec) -> f64 {
    let linear: f64 = spec.weights.iter().zip(encoded).map(|(w, x)| w * x).sum();
    let interactions: f64 = spec
        .interactions
        .iter()
        .map(|t| t.coefficient * encoded[t.i] * encoded[t.j])
        .sum();
    (spec.base_pct + linear + interactions).clamp(spec.clamp.lo, spec.clamp.hi)
}

/// The noiseless ground-truth overhead for one record.
pub fn oracle_overhead(
    record: &ProjectRecord,
    spec: &GroundTruthSpec,
    schema: &FactorSchema,
) -> Result<f64> {
    spec.validate(schema)?;
    let encoded = schema_unit_encoding(record, schema)?;
    Ok(ground_truth_value(&encoded, spec))
}

/// Generates `n` synthetic projects. Deterministic per `(n, seed, spec,
/// schema)`; with `noise_sd == 0` every stored overhead equals the oracle
/// value exactly.
pub fn generate(
    n: usize,
    seed: u64,
    spec: &GroundTruthSpec,
    schema: &FactorSchema,
) -> Result<SyntheticDataset> {
    if n == 0 {
        return Err(Error::InvalidDataset("cannot generate an empty dataset".into()));
    }
    spec.validate(schema)?;
    schema.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = if spec.noise_sd > 0.0 {
        Some(Normal::new(0.0, spec.noise_sd).expect("validated noise_sd"))
    } else {
        None
    };

    let mut records = Vec::with_capacity(n);
    for idx in 0..n {
        let mut values = Vec::with_capacity(schema.factors.len());
        for factor in &schema.factors {
            match &factor.kind {
                FactorKind::Categorical { levels } => {
                    let level = rng.gen_range(0..levels.len());
                    values.push(FactorValue::Categorical(levels[level].clone()));
                }
                FactorKind::Continuous { min, max, .. } => {
                    let dist = Uniform::new_inclusive(*min, *max);
                    values.push(FactorValue::Continuous(dist.sample(&mut rng)));
                }
            }
        }
        let record = ProjectRecord {
            id: format!("s{:03}", idx + 1),
            values,
            overhead_pct: 0.0,
        };
        let encoded = schema_unit_encoding_unchecked(&record, schema)?;
        let mut overhead = ground_truth_value(&encoded, spec);
        if let Some(noise) = &noise {
            overhead =
                (overhead + noise.sample(&mut rng)).clamp(spec.clamp.lo, spec.clamp.hi);
        }
        records.push(ProjectRecord { overhead_pct: overhead, ..record });
    }

    Ok(SyntheticDataset {
        records,
        spec: spec.clone(),
        seed,
    })
}

// Encoding used mid-generation, before the overhead field is filled in
// (ProjectRecord::validate would reject the placeholder overhead).
fn schema_unit_encoding_unchecked(
    record: &ProjectRecord,
    schema: &FactorSchema,
) -> Result<Vec<f64>> {
    schema
        .factors
        .iter()
        .zip(&record.values)
        .map(|(spec, value)| {
            let raw = value.raw(&spec.kind)?;
            Ok(match &spec.kind {
                FactorKind::Categorical { levels } => {
                    let span = ((levels.len() - 1) as f64).max(1.0);
                    raw / span
                }
                FactorKind::Continuous { min, max, .. } => (raw - min) / (max - min),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::default_schema;
    use approx::assert_abs_diff_eq;

    #[test]
    fn generates_valid_records_inside_clamp_range() {
        let schema = default_schema();
        let spec = GroundTruthSpec::default();
        let ds = generate(52, 7, &spec, &schema).unwrap();
        assert_eq!(ds.records.len(), 52);
        for record in &ds.records {
            record.validate(&schema).unwrap();
            assert!(
                (spec.clamp.lo..=spec.clamp.hi).contains(&record.overhead_pct),
                "overhead {} escaped clamp",
                record.overhead_pct
            );
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let schema = default_schema();
        let spec = GroundTruthSpec::default();
        let a = generate(52, 9, &spec, &schema).unwrap();
        let b = generate(52, 9, &spec, &schema).unwrap();
        assert_eq!(a, b);
        let c = generate(52, 10, &spec, &schema).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_record_generation() {
        let schema = default_schema();
        let ds = generate(1, 0, &GroundTruthSpec::default(), &schema).unwrap();
        assert_eq!(ds.records.len(), 1);
        assert_eq!(ds.records[0].id, "s001");
    }

    #[test]
    fn noiseless_records_match_the_oracle_exactly() {
        let schema = default_schema();
        let spec = GroundTruthSpec::default();
        let ds = generate(20, 3, &spec, &schema).unwrap();
        for record in &ds.records {
            let oracle = oracle_overhead(record, &spec, &schema).unwrap();
            assert_abs_diff_eq!(record.overhead_pct, oracle, epsilon = 1e-12);
        }
    }

    #[test]
    fn all_minimum_factors_give_base_pct() {
        let schema = default_schema();
        let spec = GroundTruthSpec::default();
        // First level / declared minimum for every factor encodes to zero,
        // so only the base remains (8.0 is inside the clamp range).
        let record = ProjectRecord {
            id: "zero".into(),
            values: schema
                .factors
                .iter()
                .map(|f| match &f.kind {
                    FactorKind::Categorical { levels } => {
                        FactorValue::Categorical(levels[0].clone())
                    }
                    FactorKind::Continuous { min, .. } => FactorValue::Continuous(*min),
                })
                .collect(),
            overhead_pct: 8.0,
        };
        let oracle = oracle_overhead(&record, &spec, &schema).unwrap();
        assert_abs_diff_eq!(oracle, spec.base_pct, epsilon = 1e-12);
    }

    #[test]
    fn single_weight_linear_form_by_hand() {
        let schema = default_schema();
        let mut weights = vec![0.0; 10];
        weights[1] = 2.0; // Project Size, declared range [1, 1000]
        let spec = GroundTruthSpec {
            weights,
            interactions: vec![],
            ..GroundTruthSpec::default()
        };

        let mut values: Vec<FactorValue> = schema
            .factors
            .iter()
            .map(|f| match &f.kind {
                FactorKind::Categorical { levels } => FactorValue::Categorical(levels[0].clone()),
                FactorKind::Continuous { min, .. } => FactorValue::Continuous(*min),
            })
            .collect();
        values[1] = FactorValue::Continuous(500.5); // encodes to 0.5 exactly
        let record = ProjectRecord { id: "h".into(), values, overhead_pct: 9.0 };

        let oracle = oracle_overhead(&record, &spec, &schema).unwrap();
        assert_abs_diff_eq!(oracle, 8.0 + 2.0 * 0.5, epsilon = 1e-12);
    }

    #[test]
    fn zero_count_is_rejected() {
        let schema = default_schema();
        assert!(generate(0, 0, &GroundTruthSpec::default(), &schema).is_err());
    }

    #[test]
    fn spec_validation_catches_bad_shapes() {
        let schema = default_schema();
        let mut spec = GroundTruthSpec::default();
        spec.weights.pop();
        assert!(spec.validate(&schema).is_err());

        let mut spec = GroundTruthSpec::default();
        spec.interactions.push(Interaction { i: 0, j: 10, coefficient: 1.0 });
        assert!(spec.validate(&schema).is_err());

        let spec = GroundTruthSpec {
            clamp: Bounds { lo: 15.0, hi: 5.0 },
            ..GroundTruthSpec::default()
        };
        assert!(spec.validate(&schema).is_err());
    }
}
