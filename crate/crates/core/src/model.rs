//! Trained-model files and the prediction path.
//!
//! A model file is a single JSON document carrying the topology, row-major
//! weight matrices, biases, normalization parameters, the factor schema the
//! model was trained against, seeds, and the training summary. JSON floats
//! use the shortest round-trip representation, so a loaded model reproduces
//! predictions bit-for-bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::encode::{NormalizationParams, TargetPct};
use crate::error::{Error, Result};
use crate::net::{Network, NetworkTopology};
use crate::record::ProjectRecord;
use crate::schema::FactorSchema;
use crate::train::TrainingSummary;

/// Seeds that produced the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSeeds {
    pub init: u64,
    pub shuffle: u64,
}

/// One serialized layer: `rows x cols` row-major weights plus biases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedLayer {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

/// A trained model ready to be written to or read from disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub id: String,
    pub topology: NetworkTopology,
    pub layers: Vec<SavedLayer>,
    pub norm: NormalizationParams,
    pub schema: FactorSchema,
    pub seeds: ModelSeeds,
    pub training: TrainingSummary,
    /// Classification threshold this model carries by default: its own
    /// validation-phase mean absolute difference in percent.
    pub default_threshold_pct: f64,
}

impl SavedModel {
    pub fn from_network(
        network: &Network,
        norm: NormalizationParams,
        schema: FactorSchema,
        shuffle_seed: u64,
        training: TrainingSummary,
        default_threshold_pct: f64,
    ) -> Self {
        let layers = network
            .layers()
            .iter()
            .map(|l| SavedLayer {
                rows: l.out_dim(),
                cols: l.in_dim(),
                weights: l.weights.clone(),
                biases: l.biases.clone(),
            })
            .collect();
        SavedModel {
            id: format!("mlp-{}-seed{}", network.topology().label(), network.init_seed()),
            topology: network.topology().clone(),
            layers,
            norm,
            schema,
            seeds: ModelSeeds {
                init: network.init_seed(),
                shuffle: shuffle_seed,
            },
            training,
            default_threshold_pct,
        }
    }

    /// Reconstructs the network (shape-checked against the topology).
    pub fn to_network(&self) -> Result<Network> {
        self.schema.validate()?;
        self.norm.validate()?;
        if self.norm.features.len() != self.schema.factors.len() {
            return Err(Error::InvalidModel(format!(
                "normalization covers {} features, schema declares {}",
                self.norm.features.len(),
                self.schema.factors.len()
            )));
        }
        let params = self
            .layers
            .iter()
            .map(|l| (l.weights.clone(), l.biases.clone()))
            .collect();
        Network::from_parts(self.topology.clone(), params, self.seeds.init)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let model: SavedModel = serde_json::from_str(json)?;
        model.to_network()?; // shape check on load
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Predicts the overhead percentage for a record using the embedded
    /// schema and normalization parameters.
    pub fn predict_record(&self, record: &ProjectRecord) -> Result<TargetPct> {
        let network = self.to_network()?;
        predict(&network, record, &self.schema, &self.norm)
    }
}

/// Encode, forward, denormalize: the full prediction path for one record.
pub fn predict(
    network: &Network,
    record: &ProjectRecord,
    schema: &FactorSchema,
    norm: &NormalizationParams,
) -> Result<TargetPct> {
    let input = norm.encode_record(record, schema)?;
    let output = network.output_scalar(&input)?;
    Ok(norm.denormalize_target(output))
}
