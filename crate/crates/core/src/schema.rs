//! Project-factor schema: the ten input factors, their kinds, and validation.
//!
//! A schema is an ordered list of exactly ten factors. Each factor is either
//! categorical (an ordered, duplicate-free list of labels) or continuous
//! (a `[min, max]` range with a unit). The shipped default schema lives in
//! `data/default_schema.json` and is embedded into the library.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};

/// Number of input factors every schema must declare.
pub const FACTOR_COUNT: usize = 10;

const DEFAULT_SCHEMA_JSON: &str = include_str!("../data/default_schema.json");

/// How one factor is valued and encoded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorKind {
    /// Ordered labels; encoded as `index / (levels - 1)`.
    Categorical { levels: Vec<String> },
    /// Real value in `[min, max]`; encoded by dataset-observed min-max.
    Continuous { min: f64, max: f64, unit: String },
}

/// One named input factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: FactorKind,
}

/// Ordered declaration of the ten project factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSchema {
    pub factors: Vec<FactorSpec>,
}

impl FactorSchema {
    /// Validates the schema invariants: exactly ten factors, unique names,
    /// non-empty duplicate-free level lists, and `min < max` for ranges.
    pub fn validate(&self) -> Result<()> {
        if self.factors.len() != FACTOR_COUNT {
            return Err(Error::InvalidSchema(format!(
                "factor count must be {FACTOR_COUNT}, got {}",
                self.factors.len()
            )));
        }
        for (i, spec) in self.factors.iter().enumerate() {
            if spec.name.trim().is_empty() {
                return Err(Error::InvalidSchema(format!("factor {} has an empty name", i + 1)));
            }
            if self.factors[..i].iter().any(|other| other.name == spec.name) {
                return Err(Error::InvalidSchema(format!("duplicate factor name {:?}", spec.name)));
            }
            match &spec.kind {
                FactorKind::Categorical { levels } => {
                    if levels.is_empty() {
                        return Err(Error::InvalidSchema(format!(
                            "factor {:?} has no levels",
                            spec.name
                        )));
                    }
                    for (j, level) in levels.iter().enumerate() {
                        if levels[..j].contains(level) {
                            return Err(Error::InvalidSchema(format!(
                                "factor {:?} has duplicate level {:?}",
                                spec.name, level
                            )));
                        }
                    }
                }
                FactorKind::Continuous { min, max, .. } => {
                    if !(min.is_finite() && max.is_finite() && min < max) {
                        return Err(Error::InvalidSchema(format!(
                            "factor {:?} requires finite min < max, got [{min}, {max}]",
                            spec.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn factor_names(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn factor(&self, index: usize) -> &FactorSpec {
        &self.factors[index]
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let schema: FactorSchema = serde_json::from_str(json)?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Loads and validates a schema from a JSON file.
pub fn load_schema(path: impl AsRef<Path>) -> Result<FactorSchema> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    FactorSchema::from_json(&text)
}

/// The shipped ten-factor default schema.
///
/// Factor order and names are fixed; the categorical level lists are this
/// crate's documented choices (the factor list itself does not prescribe
/// them).
pub fn default_schema() -> FactorSchema {
    FactorSchema::from_json(DEFAULT_SCHEMA_JSON).expect("embedded default schema is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_schema_has_ten_factors_in_order() {
        let schema = default_schema();
        assert_eq!(schema.factors.len(), 10);
        assert_eq!(schema.factors[0].name, "Construction Firm Category");
        assert_eq!(schema.factors[1].name, "Project Size");
        assert_eq!(schema.factors[9].name, "Project need for Extra-man Power");
    }

    #[test]
    fn nine_factors_rejected() {
        let mut schema = default_schema();
        schema.factors.pop();
        let err = schema.validate().unwrap_err();
        assert!(err.to_string().contains("factor count must be 10"), "{err}");
    }

    #[test]
    fn degenerate_continuous_range_rejected() {
        let mut schema = default_schema();
        schema.factors[1].kind = FactorKind::Continuous {
            min: 5.0,
            max: 5.0,
            unit: "million EGP".into(),
        };
        assert!(schema.validate().is_err());
    }

    #[test]
    fn duplicate_levels_rejected() {
        let mut schema = default_schema();
        schema.factors[0].kind = FactorKind::Categorical {
            levels: vec!["A".into(), "A".into()],
        };
        assert!(schema.validate().is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut schema = default_schema();
        let name = schema.factors[0].name.clone();
        schema.factors[1].name = name;
        assert!(schema.validate().is_err());
    }

    #[test]
    fn json_round_trip_preserves_schema() {
        let schema = default_schema();
        let json = schema.to_json_pretty().unwrap();
        let back = FactorSchema::from_json(&json).unwrap();
        assert_eq!(schema, back);
    }

    #[test]
    fn load_schema_missing_file_is_io_error() {
        let err = load_schema("/nonexistent/schema.json").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
