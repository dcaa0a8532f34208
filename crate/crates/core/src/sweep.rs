//! The fixed 58-trial architecture sweep and minimum-RMS model selection.
//!
//! The plan enumerates four groups: one hidden layer with sigmoid (trials
//! 1-14) or tangent (15-28) over node counts {3..15, 20}, and two hidden
//! layers with sigmoid (29-43) or tangent (44-58) over fifteen node pairs.
//! Trials are independent jobs seeded as `base_seed + trial_no`; with the
//! `parallel` feature they run on the rayon pool and results never depend on
//! execution order.

use serde::{Deserialize, Serialize};

use crate::encode::EncodedDataset;
use crate::error::{Error, Result};
use crate::metrics::absolute_difference;
use crate::net::{Network, NetworkTopology, TransferFunction};
use crate::split::DatasetSplit;
use crate::train::{train, TrainingConfig, TrainingSummary};

/// Hidden node counts for the single-hidden-layer groups.
pub const ONE_LAYER_NODES: [usize; 14] = [3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 20];

/// Hidden node pairs for the two-hidden-layer groups.
pub const TWO_LAYER_NODES: [(usize, usize); 15] = [
    (2, 1),
    (2, 2),
    (3, 1),
    (3, 2),
    (3, 3),
    (4, 1),
    (4, 2),
    (4, 3),
    (4, 4),
    (5, 3),
    (5, 4),
    (5, 5),
    (6, 4),
    (6, 5),
    (6, 6),
];

/// Input and output widths shared by every trial.
pub const SWEEP_INPUT_NODES: usize = 10;
pub const SWEEP_OUTPUT_NODES: usize = 1;

/// The four sweep groups, in plan order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepGroup {
    OneLayerSigmoid,
    OneLayerTangent,
    TwoLayerSigmoid,
    TwoLayerTangent,
}

impl SweepGroup {
    pub fn label(self) -> &'static str {
        match self {
            SweepGroup::OneLayerSigmoid => "A",
            SweepGroup::OneLayerTangent => "B",
            SweepGroup::TwoLayerSigmoid => "C",
            SweepGroup::TwoLayerTangent => "D",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SweepGroup::OneLayerSigmoid => "one hidden layer, sigmoid transfer",
            SweepGroup::OneLayerTangent => "one hidden layer, tangent transfer",
            SweepGroup::TwoLayerSigmoid => "two hidden layers, sigmoid transfer",
            SweepGroup::TwoLayerTangent => "two hidden layers, tangent transfer",
        }
    }

    pub fn from_label(label: &str) -> Result<Self> {
        match label {
            "A" => Ok(SweepGroup::OneLayerSigmoid),
            "B" => Ok(SweepGroup::OneLayerTangent),
            "C" => Ok(SweepGroup::TwoLayerSigmoid),
            "D" => Ok(SweepGroup::TwoLayerTangent),
            other => Err(Error::InvalidDataset(format!("unknown sweep group {other:?}"))),
        }
    }
}

/// One planned trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedTrial {
    pub trial_no: u32,
    pub group: SweepGroup,
    pub topology: NetworkTopology,
}

/// The ordered list of all 58 trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub trials: Vec<PlannedTrial>,
}

impl SweepPlan {
    /// Builds the fixed 58-trial reference plan.
    pub fn reference() -> SweepPlan {
        let mut trials = Vec::with_capacity(58);
        let mut trial_no = 1u32;

        let one_layer_groups = [
            (SweepGroup::OneLayerSigmoid, TransferFunction::Sigmoid),
            (SweepGroup::OneLayerTangent, TransferFunction::Tangent),
        ];
        for (group, transfer) in one_layer_groups {
            for nodes in ONE_LAYER_NODES {
                trials.push(PlannedTrial {
                    trial_no,
                    group,
                    topology: NetworkTopology::uniform(
                        SWEEP_INPUT_NODES,
                        &[nodes],
                        transfer,
                        SWEEP_OUTPUT_NODES,
                    )
                    .expect("plan topologies are valid"),
                });
                trial_no += 1;
            }
        }

        let two_layer_groups = [
            (SweepGroup::TwoLayerSigmoid, TransferFunction::Sigmoid),
            (SweepGroup::TwoLayerTangent, TransferFunction::Tangent),
        ];
        for (group, transfer) in two_layer_groups {
            for (first, second) in TWO_LAYER_NODES {
                trials.push(PlannedTrial {
                    trial_no,
                    group,
                    topology: NetworkTopology::uniform(
                        SWEEP_INPUT_NODES,
                        &[first, second],
                        transfer,
                        SWEEP_OUTPUT_NODES,
                    )
                    .expect("plan topologies are valid"),
                });
                trial_no += 1;
            }
        }

        SweepPlan { trials }
    }

    pub fn len(&self) -> usize {
        self.trials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    pub fn trial(&self, trial_no: u32) -> Option<&PlannedTrial> {
        self.trials.iter().find(|t| t.trial_no == trial_no)
    }
}

/// Scores of one completed trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialMetrics {
    /// Validation RMS on the normalized `[0.1, 0.9]` scale.
    pub validation_rms_norm: f64,
    /// Validation RMS on the raw percent scale.
    pub validation_rms_pct: f64,
    /// Mean magnitude of the signed relative difference (percent) over the
    /// validation partition.
    pub mean_abs_diff_pct: f64,
    /// Training summary; absent when the row was reconstructed from a
    /// rendered report.
    pub training: Option<TrainingSummary>,
}

/// Completed scores or a divergence marker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrialOutcome {
    Completed(TrialMetrics),
    Diverged { epoch: usize },
}

/// One sweep trial's topology and outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial_no: u32,
    pub group: SweepGroup,
    pub topology: NetworkTopology,
    pub outcome: TrialOutcome,
}

impl TrialResult {
    pub fn metrics(&self) -> Option<&TrialMetrics> {
        match &self.outcome {
            TrialOutcome::Completed(m) => Some(m),
            TrialOutcome::Diverged { .. } => None,
        }
    }
}

/// A trained trial network plus its result row, as produced by
/// [`run_sweep_trained`].
#[derive(Debug, Clone)]
pub struct TrainedTrial {
    pub result: TrialResult,
    pub network: Option<Network>,
}

fn run_trial(
    planned: &PlannedTrial,
    dataset: &EncodedDataset,
    split: &DatasetSplit,
    config: &TrainingConfig,
    base_seed: u64,
) -> Result<TrainedTrial> {
    let train_set = dataset.subset(&split.train_ids)?;
    let validation_set = dataset.subset(&split.validation_ids)?;

    let init_seed = base_seed.wrapping_add(u64::from(planned.trial_no));
    let network = Network::init(planned.topology.clone(), init_seed)?;

    let (network, report) = match train(network, &train_set, &validation_set, config) {
        Ok(result) => result,
        Err(Error::TrainingDiverged { epoch }) => {
            return Ok(TrainedTrial {
                result: TrialResult {
                    trial_no: planned.trial_no,
                    group: planned.group,
                    topology: planned.topology.clone(),
                    outcome: TrialOutcome::Diverged { epoch },
                },
                network: None,
            })
        }
        Err(other) => return Err(other),
    };

    // Score the returned (best-validation) network on the validation
    // partition, on both the normalized and the percent scale.
    let mut acts = network.activations();
    let mut actual_pct = Vec::with_capacity(validation_set.len());
    let mut predicted_pct = Vec::with_capacity(validation_set.len());
    let mut sum_sq_norm = 0.0;
    let mut sum_abs_diff = 0.0;
    for (input, target) in validation_set.inputs.iter().zip(&validation_set.targets) {
        let out = network.forward_into(input, &mut acts)[0];
        let err = out - target;
        sum_sq_norm += err * err;
        let a = dataset.norm.denormalize_target(*target).pct;
        let p = dataset.norm.denormalize_target(out).pct;
        sum_abs_diff += absolute_difference(a, p)?.abs();
        actual_pct.push(a);
        predicted_pct.push(p);
    }
    let n = validation_set.len() as f64;
    let validation_rms_norm = (sum_sq_norm / n).sqrt();
    let validation_rms_pct = crate::metrics::rms(&actual_pct, &predicted_pct)?;

    Ok(TrainedTrial {
        result: TrialResult {
            trial_no: planned.trial_no,
            group: planned.group,
            topology: planned.topology.clone(),
            outcome: TrialOutcome::Completed(TrialMetrics {
                validation_rms_norm,
                validation_rms_pct,
                mean_abs_diff_pct: sum_abs_diff / n,
                training: Some(report.summary()),
            }),
        },
        network: Some(network),
    })
}

fn check_sweep_inputs(
    dataset: &EncodedDataset,
    split: &DatasetSplit,
    config: &TrainingConfig,
) -> Result<()> {
    config.validate()?;
    if split.train_ids.is_empty() || split.validation_ids.is_empty() {
        return Err(Error::InvalidDataset("split has an empty partition".into()));
    }
    // Resolve ids once up front so missing ids fail fast, not mid-sweep.
    dataset.subset(&split.train_ids)?;
    dataset.subset(&split.validation_ids)?;
    Ok(())
}

/// Runs every trial of the reference plan sequentially, keeping the trained
/// networks. Results are in trial order; a diverging trial is recorded, not
/// fatal.
pub fn run_sweep_trained_sequential(
    dataset: &EncodedDataset,
    split: &DatasetSplit,
    config: &TrainingConfig,
    base_seed: u64,
) -> Result<Vec<TrainedTrial>> {
    check_sweep_inputs(dataset, split, config)?;
    SweepPlan::reference()
        .trials
        .iter()
        .map(|planned| run_trial(planned, dataset, split, config, base_seed))
        .collect()
}

/// Parallel variant of [`run_sweep_trained_sequential`]. Trials are
/// independent and collected in trial order, so the outcome is identical to
/// the sequential run.
#[cfg(feature = "parallel")]
pub fn run_sweep_trained_parallel(
    dataset: &EncodedDataset,
    split: &DatasetSplit,
    config: &TrainingConfig,
    base_seed: u64,
) -> Result<Vec<TrainedTrial>> {
    use rayon::prelude::*;
    check_sweep_inputs(dataset, split, config)?;
    SweepPlan::reference()
        .trials
        .par_iter()
        .map(|planned| run_trial(planned, dataset, split, config, base_seed))
        .collect()
}

/// Runs the full sweep with the default execution strategy (parallel when
/// the `parallel` feature is enabled).
pub fn run_sweep_trained(
    dataset: &EncodedDataset,
    split: &DatasetSplit,
    config: &TrainingConfig,
    base_seed: u64,
) -> Result<Vec<TrainedTrial>> {
    #[cfg(feature = "parallel")]
    {
        run_sweep_trained_parallel(dataset, split, config, base_seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_sweep_trained_sequential(dataset, split, config, base_seed)
    }
}

/// Runs the full sweep and returns just the result rows.
pub fn run_sweep(
    dataset: &EncodedDataset,
    split: &DatasetSplit,
    config: &TrainingConfig,
    base_seed: u64,
) -> Result<Vec<TrialResult>> {
    Ok(run_sweep_trained(dataset, split, config, base_seed)?
        .into_iter()
        .map(|t| t.result)
        .collect())
}

/// Sequential variant of [`run_sweep`].
pub fn run_sweep_sequential(
    dataset: &EncodedDataset,
    split: &DatasetSplit,
    config: &TrainingConfig,
    base_seed: u64,
) -> Result<Vec<TrialResult>> {
    Ok(run_sweep_trained_sequential(dataset, split, config, base_seed)?
        .into_iter()
        .map(|t| t.result)
        .collect())
}

/// Picks the completed trial with the minimum percent-scale validation RMS;
/// ties go to the lowest trial number. (Both RMS scales differ by a constant
/// factor within one sweep, so either ordering selects the same trial.)
pub fn select_best(results: &[TrialResult]) -> Result<&TrialResult> {
    results
        .iter()
        .filter_map(|r| r.metrics().map(|m| (r, m.validation_rms_pct)))
        .min_by(|(ra, rms_a), (rb, rms_b)| {
            rms_a
                .partial_cmp(rms_b)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(ra.trial_no.cmp(&rb.trial_no))
        })
        .map(|(r, _)| r)
        .ok_or(Error::AllTrialsDiverged)
}
