//! Parametric estimation of construction site overhead cost percentages with
//! small feedforward networks.
//!
//! The crate covers the full workflow:
//!
//! 1. [`schema`] / [`record`] — declare the ten project factors and ingest
//!    project records from CSV with per-row validation.
//! 2. [`encode`] / [`split`] — map records onto `[0,1]` input vectors, min-max
//!    the overhead target onto `[0.1, 0.9]`, and draw seeded
//!    test/train/validation partitions.
//! 3. [`net`] / [`train`] — from-scratch multilayer perceptrons (sigmoid or
//!    tanh hidden layers, sigmoid output) trained by online backpropagation
//!    with validation-plateau stopping and learning-rate halving.
//! 4. [`sweep`] — the fixed 58-trial architecture sweep, parallel across
//!    trials when the `parallel` feature is enabled (default), and
//!    minimum-RMS model selection.
//! 5. [`metrics`] / [`report`] — RMS, signed relative difference in percent,
//!    correct/wrong classification against a threshold, and report rendering.
//! 6. [`synth`] — seeded synthetic project generators with a known ground
//!    truth, used as a desk-scale oracle for the whole pipeline.
//! 7. [`model`] — JSON model files that reproduce predictions bit-for-bit.
//!
//! Everything is deterministic: all randomness flows from explicit seeds
//! through ChaCha8, and sweep results do not depend on worker scheduling.

pub mod encode;
pub mod error;
pub mod metrics;
pub mod model;
pub mod net;
pub mod record;
pub mod report;
pub mod schema;
pub mod split;
pub mod sweep;
pub mod synth;
pub mod train;

pub use encode::{encode, EncodedDataset, NormalizationParams, Samples};
pub use error::{Error, Result};
pub use metrics::{
    absolute_difference, classify, evaluate, rms, tolerance_correct, Evaluation,
    EvaluationSummary, PredictionPair, Verdict,
};
pub use model::SavedModel;
pub use net::{Network, NetworkTopology, TransferFunction};
pub use record::{FactorValue, ProjectRecord};
pub use schema::{default_schema, FactorKind, FactorSchema, FactorSpec};
pub use split::{random_split, DatasetSplit};
pub use sweep::{select_best, SweepGroup, SweepPlan, TrialMetrics, TrialOutcome, TrialResult};
pub use synth::{GroundTruthSpec, SyntheticDataset};
pub use train::{train, StopReason, TrainingConfig, TrainingReport, TrainingSummary};
