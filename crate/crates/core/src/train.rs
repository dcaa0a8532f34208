//! Backpropagation training with validation-plateau stopping.
//!
//! Updates are per-pattern (online) by default, with the training order
//! reshuffled every epoch from `shuffle_seed`; a full-batch mode is available
//! behind [`UpdateMode`]. Validation RMS is evaluated after every epoch:
//! the learning rate halves after `patience_epochs / 2` epochs without an
//! improvement of at least `plateau_epsilon`, training stops after
//! `patience_epochs` without one, and the weights returned are the snapshot
//! with the best validation RMS seen, not the last.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encode::{Samples, TARGET_HI, TARGET_LO};
use crate::error::{Error, Result};
use crate::metrics::tolerance_correct;
use crate::net::{Activations, Gradients, Network};

/// When weight updates are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateMode {
    /// One gradient step per training pattern (classic online
    /// backpropagation).
    Online,
    /// One step per epoch from the mean gradient over all patterns.
    Batch,
}

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub initial_learning_rate: f64,
    /// Multiplier applied to the learning rate on a validation plateau.
    pub lr_decay: f64,
    pub momentum: f64,
    pub max_epochs: usize,
    /// Epochs without improvement before stopping. Half of this triggers a
    /// learning-rate decay.
    pub patience_epochs: usize,
    /// Minimum validation-RMS improvement that counts as progress.
    pub plateau_epsilon: f64,
    /// Fraction of the output range within which a training output counts as
    /// correct.
    pub training_tolerance: f64,
    pub update_mode: UpdateMode,
    pub shuffle_seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            initial_learning_rate: 0.25,
            lr_decay: 0.5,
            momentum: 0.0,
            max_epochs: 20_000,
            patience_epochs: 200,
            plateau_epsilon: 1e-5,
            training_tolerance: 0.1,
            update_mode: UpdateMode::Online,
            shuffle_seed: 0,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        let ok_rate = |v: f64| v.is_finite() && v > 0.0 && v <= 1.0;
        if !ok_rate(self.initial_learning_rate) {
            return Err(Error::InvalidConfig(format!(
                "initial_learning_rate must be in (0,1], got {}",
                self.initial_learning_rate
            )));
        }
        if !ok_rate(self.lr_decay) {
            return Err(Error::InvalidConfig(format!(
                "lr_decay must be in (0,1], got {}",
                self.lr_decay
            )));
        }
        if !(self.momentum.is_finite() && (0.0..1.0).contains(&self.momentum)) {
            return Err(Error::InvalidConfig(format!(
                "momentum must be in [0,1), got {}",
                self.momentum
            )));
        }
        if self.max_epochs == 0 || self.patience_epochs == 0 {
            return Err(Error::InvalidConfig("epoch counts must be at least 1".into()));
        }
        if !(self.plateau_epsilon.is_finite() && self.plateau_epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "plateau_epsilon must be positive, got {}",
                self.plateau_epsilon
            )));
        }
        if !(self.training_tolerance.is_finite()
            && self.training_tolerance > 0.0
            && self.training_tolerance < 1.0)
        {
            return Err(Error::InvalidConfig(format!(
                "training_tolerance must be in (0,1), got {}",
                self.training_tolerance
            )));
        }
        Ok(())
    }
}

/// Why training stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Plateau,
    MaxEpochs,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StopReason::Plateau => f.write_str("plateau"),
            StopReason::MaxEpochs => f.write_str("max_epochs"),
        }
    }
}

/// Full outcome of a training run, including per-epoch RMS traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingReport {
    pub epochs_run: usize,
    pub final_train_rms: f64,
    pub final_validation_rms: f64,
    pub best_validation_rms: f64,
    /// 1-based epoch whose weights were returned.
    pub best_epoch: usize,
    pub train_rms_trace: Vec<f64>,
    pub validation_rms_trace: Vec<f64>,
    /// Fraction of training facts whose best-network output is within
    /// `training_tolerance` of the output range.
    pub fraction_correct: f64,
    pub stop_reason: StopReason,
}

/// Trace-free summary stored in sweep results and model files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingSummary {
    pub epochs_run: usize,
    pub final_train_rms: f64,
    pub final_validation_rms: f64,
    pub best_validation_rms: f64,
    pub best_epoch: usize,
    pub fraction_correct: f64,
    pub stop_reason: StopReason,
}

impl TrainingReport {
    pub fn summary(&self) -> TrainingSummary {
        TrainingSummary {
            epochs_run: self.epochs_run,
            final_train_rms: self.final_train_rms,
            final_validation_rms: self.final_validation_rms,
            best_validation_rms: self.best_validation_rms,
            best_epoch: self.best_epoch,
            fraction_correct: self.fraction_correct,
            stop_reason: self.stop_reason,
        }
    }
}

/// RMS of a network's outputs against single-value targets.
pub fn network_rms(network: &Network, samples: &Samples, acts: &mut Activations) -> f64 {
    let mut sum_sq = 0.0;
    for (input, target) in samples.inputs.iter().zip(&samples.targets) {
        let out = network.forward_into(input, acts)[0];
        let err = out - target;
        sum_sq += err * err;
    }
    (sum_sq / samples.len() as f64).sqrt()
}

fn check_samples(network: &Network, samples: &Samples, role: &str) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidDataset(format!("{role} set is empty")));
    }
    for input in &samples.inputs {
        if input.len() != network.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: network.input_dim(),
                actual: input.len(),
            });
        }
    }
    Ok(())
}

struct Velocity {
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

fn apply_update(network: &mut Network, grads: &Gradients, velocity: &mut Velocity, lr: f64, momentum: f64) {
    for (idx, layer) in network.layers_mut().iter_mut().enumerate() {
        for (i, w) in layer.weights.iter_mut().enumerate() {
            let v = momentum * velocity.weights[idx][i] - lr * grads.d_weights[idx][i];
            velocity.weights[idx][i] = v;
            *w += v;
        }
        for (j, b) in layer.biases.iter_mut().enumerate() {
            let v = momentum * velocity.biases[idx][j] - lr * grads.d_biases[idx][j];
            velocity.biases[idx][j] = v;
            *b += v;
        }
    }
}

/// Trains `network` by gradient descent on the squared error, returning the
/// best-validation snapshot and the report. Single-output networks only
/// (targets are scalars).
pub fn train(
    network: Network,
    train_set: &Samples,
    validation_set: &Samples,
    config: &TrainingConfig,
) -> Result<(Network, TrainingReport)> {
    config.validate()?;
    if network.output_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            actual: network.output_dim(),
        });
    }
    check_samples(&network, train_set, "training")?;
    check_samples(&network, validation_set, "validation")?;

    let mut net = network;
    let mut acts = net.activations();
    let mut grads = net.gradients();
    let mut batch_accum = net.gradients();
    let mut velocity = Velocity {
        weights: net.layers().iter().map(|l| vec![0.0; l.weights.len()]).collect(),
        biases: net.layers().iter().map(|l| vec![0.0; l.biases.len()]).collect(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.shuffle_seed);
    let mut order: Vec<usize> = (0..train_set.len()).collect();

    let mut lr = config.initial_learning_rate;
    let decay_after = config.patience_epochs / 2;

    let mut best_net = net.clone();
    let mut best_validation_rms = f64::INFINITY;
    let mut best_epoch = 0;

    let mut plateau_best = f64::INFINITY;
    let mut stale_epochs = 0usize;

    let mut train_rms_trace = Vec::new();
    let mut validation_rms_trace = Vec::new();
    let mut stop_reason = StopReason::MaxEpochs;

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        match config.update_mode {
            UpdateMode::Online => {
                for &i in &order {
                    net.gradient_into(
                        &train_set.inputs[i],
                        std::slice::from_ref(&train_set.targets[i]),
                        &mut acts,
                        &mut grads,
                    );
                    apply_update(&mut net, &grads, &mut velocity, lr, config.momentum);
                }
            }
            UpdateMode::Batch => {
                batch_accum.fill(0.0);
                for &i in &order {
                    net.gradient_into(
                        &train_set.inputs[i],
                        std::slice::from_ref(&train_set.targets[i]),
                        &mut acts,
                        &mut grads,
                    );
                    for (acc, g) in batch_accum.d_weights.iter_mut().zip(&grads.d_weights) {
                        for (a, g) in acc.iter_mut().zip(g) {
                            *a += g;
                        }
                    }
                    for (acc, g) in batch_accum.d_biases.iter_mut().zip(&grads.d_biases) {
                        for (a, g) in acc.iter_mut().zip(g) {
                            *a += g;
                        }
                    }
                }
                let scale = 1.0 / train_set.len() as f64;
                for acc in batch_accum.d_weights.iter_mut().chain(batch_accum.d_biases.iter_mut()) {
                    for a in acc.iter_mut() {
                        *a *= scale;
                    }
                }
                apply_update(&mut net, &batch_accum, &mut velocity, lr, config.momentum);
            }
        }

        let train_rms = network_rms(&net, train_set, &mut acts);
        let validation_rms = network_rms(&net, validation_set, &mut acts);
        if !train_rms.is_finite() || !validation_rms.is_finite() {
            return Err(Error::TrainingDiverged { epoch });
        }
        train_rms_trace.push(train_rms);
        validation_rms_trace.push(validation_rms);

        if validation_rms < best_validation_rms {
            best_validation_rms = validation_rms;
            best_net = net.clone();
            best_epoch = epoch;
        }

        if validation_rms < plateau_best - config.plateau_epsilon {
            plateau_best = validation_rms;
            stale_epochs = 0;
        } else {
            stale_epochs += 1;
            if decay_after > 0 && stale_epochs == decay_after {
                lr *= config.lr_decay;
            }
            if stale_epochs >= config.patience_epochs {
                stop_reason = StopReason::Plateau;
                break;
            }
        }
    }

    let epochs_run = train_rms_trace.len();
    let output_range = TARGET_HI - TARGET_LO;
    let correct = train_set
        .inputs
        .iter()
        .zip(&train_set.targets)
        .filter(|(input, target)| {
            let out = best_net.forward_into(input, &mut acts)[0];
            tolerance_correct(out, **target, config.training_tolerance, output_range)
        })
        .count();

    let report = TrainingReport {
        epochs_run,
        final_train_rms: *train_rms_trace.last().unwrap(),
        final_validation_rms: *validation_rms_trace.last().unwrap(),
        best_validation_rms,
        best_epoch,
        train_rms_trace,
        validation_rms_trace,
        fraction_correct: correct as f64 / train_set.len() as f64,
        stop_reason,
    };
    Ok((best_net, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{NetworkTopology, TransferFunction};

    fn single_fact_samples(copies: usize) -> Samples {
        let input = vec![0.2, 0.9, 0.4, 0.6, 0.1, 0.8, 0.3, 0.7, 0.5, 0.0];
        Samples {
            inputs: vec![input; copies],
            targets: vec![0.7; copies],
        }
    }

    fn small_net(seed: u64) -> Network {
        let topo = NetworkTopology::uniform(10, &[5], TransferFunction::Sigmoid, 1).unwrap();
        Network::init(topo, seed).unwrap()
    }

    #[test]
    fn memorizes_a_single_repeated_fact() {
        let samples = single_fact_samples(4);
        let config = TrainingConfig {
            initial_learning_rate: 0.5,
            max_epochs: 5000,
            patience_epochs: 400,
            plateau_epsilon: 1e-9,
            ..TrainingConfig::default()
        };
        let (net, report) = train(small_net(3), &samples, &samples, &config).unwrap();
        assert!(report.final_train_rms < 1e-3, "rms {}", report.final_train_rms);
        let mut acts = net.activations();
        assert!(network_rms(&net, &samples, &mut acts) < 1e-3);
        assert_eq!(report.fraction_correct, 1.0);
    }

    #[test]
    fn identical_seeds_give_identical_reports() {
        let train_set = Samples {
            inputs: (0..12)
                .map(|i| (0..10).map(|j| ((i * 10 + j) as f64 * 0.37).sin().abs()).collect())
                .collect(),
            targets: (0..12).map(|i| 0.1 + 0.06 * i as f64).collect(),
        };
        let validation = Samples {
            inputs: train_set.inputs[..4].to_vec(),
            targets: train_set.targets[..4].to_vec(),
        };
        let config = TrainingConfig {
            max_epochs: 300,
            ..TrainingConfig::default()
        };
        let (net_a, report_a) = train(small_net(9), &train_set, &validation, &config).unwrap();
        let (net_b, report_b) = train(small_net(9), &train_set, &validation, &config).unwrap();
        assert_eq!(report_a, report_b);
        assert_eq!(net_a, net_b);
    }

    #[test]
    fn returned_network_has_the_best_recorded_validation_rms() {
        let train_set = single_fact_samples(6);
        let validation = single_fact_samples(2);
        let config = TrainingConfig {
            max_epochs: 400,
            ..TrainingConfig::default()
        };
        let (net, report) = train(small_net(1), &train_set, &validation, &config).unwrap();
        let mut acts = net.activations();
        let returned_rms = network_rms(&net, &validation, &mut acts);
        let min_trace = report
            .validation_rms_trace
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert!(returned_rms <= min_trace + 1e-15, "{returned_rms} vs {min_trace}");
        assert_eq!(report.best_validation_rms, min_trace);
        assert_eq!(report.train_rms_trace.len(), report.epochs_run);
        assert_eq!(report.validation_rms_trace.len(), report.epochs_run);
    }

    #[test]
    fn non_finite_weights_surface_as_divergence() {
        let mut net = small_net(2);
        net.layers_mut()[0].weights[0] = f64::NAN;
        let samples = single_fact_samples(2);
        let err = train(net, &samples, &samples, &TrainingConfig::default()).unwrap_err();
        assert!(matches!(err, Error::TrainingDiverged { epoch: 1 }), "{err}");
    }

    #[test]
    fn empty_sets_are_rejected() {
        let empty = Samples { inputs: vec![], targets: vec![] };
        let err = train(small_net(0), &empty, &empty, &TrainingConfig::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidDataset(_)));
    }

    #[test]
    fn config_validation_catches_bad_rates() {
        let bad = TrainingConfig { initial_learning_rate: 0.0, ..TrainingConfig::default() };
        assert!(bad.validate().is_err());
        let bad = TrainingConfig { momentum: 1.0, ..TrainingConfig::default() };
        assert!(bad.validate().is_err());
        let bad = TrainingConfig { training_tolerance: 1.0, ..TrainingConfig::default() };
        assert!(bad.validate().is_err());
        assert!(TrainingConfig::default().validate().is_ok());
    }

    #[test]
    fn batch_mode_also_trains() {
        let samples = single_fact_samples(4);
        let config = TrainingConfig {
            update_mode: UpdateMode::Batch,
            initial_learning_rate: 0.9,
            max_epochs: 8000,
            patience_epochs: 600,
            plateau_epsilon: 1e-9,
            ..TrainingConfig::default()
        };
        let (_, report) = train(small_net(4), &samples, &samples, &config).unwrap();
        assert!(report.final_train_rms < 1e-2, "rms {}", report.final_train_rms);
    }
}
