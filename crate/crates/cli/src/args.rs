//! Command-line arguments, the JSON config file that mirrors them, and the
//! merge rule: explicit flags win over config-file values, which win over
//! defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use overheadnn::train::UpdateMode;
use overheadnn::{GroundTruthSpec, TrainingConfig};

#[derive(Debug, Parser)]
#[command(
    name = "overheadnn",
    version,
    about = "Site-overhead cost estimation with small feedforward networks",
    long_about = "Validates and encodes project records, trains feedforward networks by \
backpropagation, runs the fixed 58-trial architecture sweep, selects the minimum-RMS model, \
and scores predictions as correct/wrong against a relative-difference threshold.\n\n\
All flags can also be supplied through --config (a JSON object with the same names in \
snake_case); explicit flags win over the file."
)]
pub struct Cli {
    /// JSON config file mirroring the global flags.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub globals: GlobalFlags,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GlobalFlags {
    /// Factor schema JSON (defaults to the built-in ten-factor schema).
    #[arg(long, global = true, value_name = "PATH")]
    pub schema: Option<PathBuf>,

    /// Project CSV file.
    #[arg(long, global = true, value_name = "PATH")]
    pub data: Option<PathBuf>,

    /// Output directory for generated files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Trained model JSON file.
    #[arg(long, global = true, value_name = "PATH")]
    pub model: Option<PathBuf>,

    /// Seed for the test/train/validation split.
    #[arg(long = "seed-split", global = true, value_name = "N")]
    pub seed_split: Option<u64>,

    /// Base training seed (per-trial init seeds and the shuffle order derive
    /// from it).
    #[arg(long = "seed-train", global = true, value_name = "N")]
    pub seed_train: Option<u64>,

    /// Classification threshold in percent (defaults to the model's own
    /// validation mean absolute difference).
    #[arg(long, global = true, value_name = "PCT")]
    pub threshold: Option<f64>,

    /// Output format for printed reports.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    #[command(flatten)]
    pub training: TrainingFlags,
}

#[derive(Debug, Args, Default)]
pub struct TrainingFlags {
    /// Initial learning rate.
    #[arg(long = "learning-rate", global = true, value_name = "RATE")]
    pub learning_rate: Option<f64>,

    /// Learning-rate multiplier applied on a validation plateau.
    #[arg(long = "lr-decay", global = true, value_name = "FACTOR")]
    pub lr_decay: Option<f64>,

    /// Classical momentum coefficient.
    #[arg(long, global = true, value_name = "COEFF")]
    pub momentum: Option<f64>,

    /// Hard epoch limit.
    #[arg(long = "max-epochs", global = true, value_name = "N")]
    pub max_epochs: Option<usize>,

    /// Epochs without validation improvement before stopping.
    #[arg(long, global = true, value_name = "N")]
    pub patience: Option<usize>,

    /// Minimum validation-RMS improvement that counts as progress.
    #[arg(long = "plateau-epsilon", global = true, value_name = "EPS")]
    pub plateau_epsilon: Option<f64>,

    /// Training tolerance as a fraction of the output range.
    #[arg(long, global = true, value_name = "FRAC")]
    pub tolerance: Option<f64>,

    /// Use one update per epoch from the mean gradient instead of
    /// per-pattern updates.
    #[arg(long = "batch-updates", global = true)]
    pub batch_updates: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Txt,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a project CSV against the schema, reporting every bad row.
    Validate,

    /// Generate a synthetic project CSV plus its ground_truth.json sidecar.
    Synth {
        /// Number of projects to generate.
        #[arg(long)]
        n: usize,
        /// Generator seed.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Gaussian noise (percent points) added to the ground truth.
        #[arg(long = "noise-sd", default_value_t = 0.0)]
        noise_sd: f64,
    },

    /// Run the 58-trial architecture sweep and write reports plus the best
    /// model.
    Sweep,

    /// Train a single topology such as 10-13-1:sigmoid.
    Train {
        /// Topology string: I-H1[-H2]-O[:sigmoid|tangent].
        #[arg(long)]
        topology: String,
    },

    /// Score a model on labeled projects, or replay an actual/predicted
    /// pairs CSV.
    Evaluate {
        /// CSV with header `actual,predicted`, one pair per row (replaces
        /// --model/--data).
        #[arg(long, value_name = "PATH")]
        pairs: Option<PathBuf>,
    },

    /// Predict overhead percentages for records from --data or --value
    /// pairs.
    Predict {
        /// One factor assignment `Factor Name=value`; give all ten to
        /// describe a single record.
        #[arg(long = "value", value_name = "NAME=VALUE")]
        values: Vec<String>,
    },
}

/// Config-file counterpart of the global flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schema: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub seed_split: Option<u64>,
    pub seed_train: Option<u64>,
    pub threshold: Option<f64>,
    pub format: Option<OutputFormat>,
    pub training: Option<FileTrainingConfig>,
    pub ground_truth: Option<GroundTruthSpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileTrainingConfig {
    pub initial_learning_rate: Option<f64>,
    pub lr_decay: Option<f64>,
    pub momentum: Option<f64>,
    pub max_epochs: Option<usize>,
    pub patience_epochs: Option<usize>,
    pub plateau_epsilon: Option<f64>,
    pub training_tolerance: Option<f64>,
    pub batch_updates: Option<bool>,
}

/// Fully resolved settings for one invocation.
#[derive(Debug)]
pub struct RunConfig {
    pub schema: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub out: PathBuf,
    pub model: Option<PathBuf>,
    pub seed_split: u64,
    pub seed_train: u64,
    pub threshold: Option<f64>,
    pub format: OutputFormat,
    pub training: TrainingConfig,
    pub ground_truth: GroundTruthSpec,
}

impl RunConfig {
    /// Applies the precedence rule flag > file > default.
    pub fn resolve(globals: GlobalFlags, file: FileConfig) -> RunConfig {
        let mut training = TrainingConfig::default();
        if let Some(ft) = &file.training {
            if let Some(v) = ft.initial_learning_rate {
                training.initial_learning_rate = v;
            }
            if let Some(v) = ft.lr_decay {
                training.lr_decay = v;
            }
            if let Some(v) = ft.momentum {
                training.momentum = v;
            }
            if let Some(v) = ft.max_epochs {
                training.max_epochs = v;
            }
            if let Some(v) = ft.patience_epochs {
                training.patience_epochs = v;
            }
            if let Some(v) = ft.plateau_epsilon {
                training.plateau_epsilon = v;
            }
            if let Some(v) = ft.training_tolerance {
                training.training_tolerance = v;
            }
            if ft.batch_updates == Some(true) {
                training.update_mode = UpdateMode::Batch;
            }
        }
        let tf = &globals.training;
        if let Some(v) = tf.learning_rate {
            training.initial_learning_rate = v;
        }
        if let Some(v) = tf.lr_decay {
            training.lr_decay = v;
        }
        if let Some(v) = tf.momentum {
            training.momentum = v;
        }
        if let Some(v) = tf.max_epochs {
            training.max_epochs = v;
        }
        if let Some(v) = tf.patience {
            training.patience_epochs = v;
        }
        if let Some(v) = tf.plateau_epsilon {
            training.plateau_epsilon = v;
        }
        if let Some(v) = tf.tolerance {
            training.training_tolerance = v;
        }
        if tf.batch_updates {
            training.update_mode = UpdateMode::Batch;
        }

        let seed_train = globals.seed_train.or(file.seed_train).unwrap_or(42);
        training.shuffle_seed = seed_train;

        RunConfig {
            schema: globals.schema.or(file.schema),
            data: globals.data.or(file.data),
            out: globals.out.or(file.out).unwrap_or_else(|| PathBuf::from(".")),
            model: globals.model.or(file.model),
            seed_split: globals.seed_split.or(file.seed_split).unwrap_or(7),
            seed_train,
            threshold: globals.threshold.or(file.threshold),
            format: globals.format.or(file.format).unwrap_or(OutputFormat::Txt),
            training,
            ground_truth: file.ground_truth.unwrap_or_default(),
        }
    }
}

/// Loads the config file when given.
pub fn load_file_config(path: Option<&Path>) -> Result<FileConfig, String> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_values() {
        let file: FileConfig = serde_json::from_str(
            r#"{"seed_split": 1, "seed_train": 2, "out": "from-file",
                "training": {"max_epochs": 11, "initial_learning_rate": 0.5}}"#,
        )
        .unwrap();
        let globals = GlobalFlags {
            seed_split: Some(9),
            training: TrainingFlags {
                max_epochs: Some(99),
                ..TrainingFlags::default()
            },
            ..GlobalFlags::default()
        };
        let cfg = RunConfig::resolve(globals, file);
        assert_eq!(cfg.seed_split, 9); // flag wins
        assert_eq!(cfg.seed_train, 2); // file fills the gap
        assert_eq!(cfg.out, PathBuf::from("from-file"));
        assert_eq!(cfg.training.max_epochs, 99);
        assert_eq!(cfg.training.initial_learning_rate, 0.5);
        assert_eq!(cfg.training.shuffle_seed, 2);
    }

    #[test]
    fn defaults_apply_without_flags_or_file() {
        let cfg = RunConfig::resolve(GlobalFlags::default(), FileConfig::default());
        assert_eq!(cfg.seed_split, 7);
        assert_eq!(cfg.seed_train, 42);
        assert_eq!(cfg.format, OutputFormat::Txt);
        assert_eq!(cfg.training.max_epochs, 20_000);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let parsed: Result<FileConfig, _> = serde_json::from_str(r#"{"sneed": 1}"#);
        assert!(parsed.is_err());
    }
}
