//! The six subcommands: validate, synth, sweep, train, evaluate, predict.
//!
//! Exit-code contract: 0 success, 1 domain failure (bad rows, diverged
//! sweep, failed validation), 2 i/o or usage failure.

use std::path::{Path, PathBuf};

use overheadnn::encode::encode;
use overheadnn::metrics::{evaluate, evaluate_pairs, PredictionPair};
use overheadnn::model::{predict, SavedModel};
use overheadnn::net::{Network, NetworkTopology};
use overheadnn::record::{load_projects, save_projects, scan_projects, FactorValue, ProjectRecord};
use overheadnn::report::{
    best_model_line, render_evaluation_csv, render_evaluation_text, render_sweep_csv,
    render_sweep_text,
};
use overheadnn::schema::{default_schema, load_schema, FactorKind, FactorSchema};
use overheadnn::split::random_split;
use overheadnn::sweep::{run_sweep_trained, select_best, TrialResult};
use overheadnn::synth::generate;
use overheadnn::train::train;
use overheadnn::{Error as CoreError, Evaluation};

use crate::args::{OutputFormat, RunConfig};

/// Process outcome: exit code 1 is a domain failure, 2 an i/o or usage
/// failure.
#[derive(Debug)]
pub enum CmdError {
    Domain(String),
    Io(String),
    Usage(String),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Domain(_) => 1,
            CmdError::Io(_) | CmdError::Usage(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Domain(m) | CmdError::Io(m) | CmdError::Usage(m) => m,
        }
    }
}

impl From<CoreError> for CmdError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::Io { .. } => CmdError::Io(err.to_string()),
            other => CmdError::Domain(other.to_string()),
        }
    }
}

type CmdResult = Result<(), CmdError>;

fn load_schema_or_default(config: &RunConfig) -> Result<FactorSchema, CmdError> {
    match &config.schema {
        Some(path) => Ok(load_schema(path)?),
        None => Ok(default_schema()),
    }
}

fn require_data(config: &RunConfig) -> Result<&PathBuf, CmdError> {
    config
        .data
        .as_ref()
        .ok_or_else(|| CmdError::Usage("--data is required for this command".into()))
}

fn require_model(config: &RunConfig) -> Result<SavedModel, CmdError> {
    let path = config
        .model
        .as_ref()
        .ok_or_else(|| CmdError::Usage("--model is required for this command".into()))?;
    Ok(SavedModel::load(path)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CmdError> {
    std::fs::write(path, contents)
        .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn cmd_validate(config: &RunConfig) -> CmdResult {
    let schema = load_schema_or_default(config)?;
    let data = require_data(config)?;
    let (records, diagnostics) = scan_projects(data, &schema)?;
    if diagnostics.is_empty() {
        println!("{} records OK", records.len());
        Ok(())
    } else {
        for diag in &diagnostics {
            println!("{diag}");
        }
        Err(CmdError::Domain(format!(
            "{} invalid row(s), {} valid",
            diagnostics.len(),
            records.len()
        )))
    }
}

pub fn cmd_synth(config: &RunConfig, n: usize, seed: u64, noise_sd: f64) -> CmdResult {
    if n == 0 {
        return Err(CmdError::Usage("--n must be at least 1".into()));
    }
    let schema = load_schema_or_default(config)?;
    let spec = overheadnn::GroundTruthSpec {
        noise_sd,
        ..config.ground_truth.clone()
    };
    let dataset = generate(n, seed, &spec, &schema)?;

    let csv_path = config.out.join("projects.csv");
    save_projects(&csv_path, &dataset.records, &schema)?;

    let sidecar = serde_json::json!({
        "seed": dataset.seed,
        "n": dataset.records.len(),
        "spec": dataset.spec,
    });
    let sidecar_path = config.out.join("ground_truth.json");
    write_file(&sidecar_path, &format!("{:#}\n", sidecar))?;

    println!("wrote {} records to {}", dataset.records.len(), csv_path.display());
    println!("wrote {}", sidecar_path.display());
    Ok(())
}

fn split_and_encode(
    config: &RunConfig,
) -> Result<
    (
        FactorSchema,
        Vec<ProjectRecord>,
        overheadnn::EncodedDataset,
        overheadnn::DatasetSplit,
    ),
    CmdError,
> {
    let schema = load_schema_or_default(config)?;
    let data = require_data(config)?;
    let records = load_projects(data, &schema)?;
    if records.is_empty() {
        return Err(CmdError::Domain("no records in data file".into()));
    }
    let dataset = encode(&records, &schema)?;
    let split = random_split(&dataset.source_ids, config.seed_split)?;
    Ok((schema, records, dataset, split))
}

pub fn cmd_sweep(config: &RunConfig) -> CmdResult {
    let (schema, _records, dataset, split) = split_and_encode(config)?;

    let trained = run_sweep_trained(&dataset, &split, &config.training, config.seed_train)?;
    let results: Vec<TrialResult> = trained.iter().map(|t| t.result.clone()).collect();

    write_file(&config.out.join("sweep_report.csv"), &render_sweep_csv(&results))?;
    write_file(&config.out.join("sweep_report.txt"), &render_sweep_text(&results))?;

    let best = match select_best(&results) {
        Ok(best) => best,
        Err(err) => {
            // Reports are already on disk; an all-diverged sweep is a domain
            // failure.
            return Err(CmdError::Domain(err.to_string()));
        }
    };
    let metrics = best.metrics().expect("selected trial is completed");
    let network = trained[(best.trial_no - 1) as usize]
        .network
        .as_ref()
        .expect("selected trial has a network");

    let model = SavedModel::from_network(
        network,
        dataset.norm.clone(),
        schema,
        config.training.shuffle_seed,
        metrics.training.expect("fresh trials carry a summary"),
        metrics.mean_abs_diff_pct,
    );
    let model_path = config.out.join("best_model.json");
    model.save(&model_path)?;

    let pointer = serde_json::json!({
        "trial_no": best.trial_no,
        "group": best.group,
        "topology": best.topology,
        "rms_pct": metrics.validation_rms_pct,
        "rms_norm": metrics.validation_rms_norm,
        "mean_abs_diff_pct": metrics.mean_abs_diff_pct,
        "model_file": "best_model.json",
        "seed_split": config.seed_split,
        "seed_train": config.seed_train,
    });
    write_file(&config.out.join("best_trial.json"), &format!("{:#}\n", pointer))?;

    println!("{}", best_model_line(best));
    println!("wrote sweep_report.csv, sweep_report.txt, best_model.json, best_trial.json in {}", config.out.display());
    Ok(())
}

pub fn cmd_train(config: &RunConfig, topology: &str) -> CmdResult {
    let topology = NetworkTopology::parse(topology)?;
    let (schema, _records, dataset, split) = split_and_encode(config)?;

    let train_set = dataset.subset(&split.train_ids)?;
    let validation_set = dataset.subset(&split.validation_ids)?;
    let network = Network::init(topology, config.seed_train)?;
    let (network, report) = train(network, &train_set, &validation_set, &config.training)?;

    // Validation-phase mean absolute difference becomes the model's default
    // classification threshold.
    let mut acts = network.activations();
    let mut actual = Vec::new();
    let mut predicted = Vec::new();
    for (x, t) in validation_set.inputs.iter().zip(&validation_set.targets) {
        let y = network.forward_into(x, &mut acts)[0];
        actual.push(dataset.norm.denormalize_target(*t).pct);
        predicted.push(dataset.norm.denormalize_target(y).pct);
    }
    let eval = evaluate(&actual, &predicted, f64::INFINITY)?;

    let model = SavedModel::from_network(
        &network,
        dataset.norm.clone(),
        schema,
        config.training.shuffle_seed,
        report.summary(),
        eval.summary.mean_abs_diff_pct,
    );
    let model_path = config.out.join("model.json");
    model.save(&model_path)?;

    let report_path = config.out.join("training_report.json");
    write_file(
        &report_path,
        &serde_json::to_string_pretty(&report).map_err(CoreError::from)?,
    )?;

    println!(
        "trained {} epochs={} best_validation_rms={:.6} stop={} threshold={:.6}",
        model.topology.label(),
        report.epochs_run,
        report.best_validation_rms,
        report.stop_reason,
        model.default_threshold_pct,
    );
    println!("wrote {} and {}", model_path.display(), report_path.display());
    Ok(())
}

fn print_evaluation(config: &RunConfig, eval: &Evaluation, labels: &[String]) -> CmdResult {
    match config.format {
        OutputFormat::Txt => print!("{}", render_evaluation_text(eval, labels)),
        OutputFormat::Csv => print!("{}", render_evaluation_csv(eval, labels)),
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(eval).map_err(CoreError::from)?)
        }
    }
    // --out also persists the CSV and JSON forms.
    if config.out != Path::new(".") {
        write_file(&config.out.join("evaluation.csv"), &render_evaluation_csv(eval, labels))?;
        write_file(
            &config.out.join("evaluation.json"),
            &serde_json::to_string_pretty(eval).map_err(CoreError::from)?,
        )?;
    }
    Ok(())
}

fn read_pairs_csv(path: &Path) -> Result<Vec<PredictionPair>, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("actual,predicted") => {}
        other => {
            return Err(CmdError::Domain(format!(
                "pairs file must start with `actual,predicted`, got {other:?}"
            )))
        }
    }
    let mut pairs = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (a, p) = line.split_once(',').ok_or_else(|| {
            CmdError::Domain(format!("pairs line {}: expected `actual,predicted`", i + 2))
        })?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CmdError::Domain(format!("pairs line {}: bad number {s:?}", i + 2)))
        };
        pairs.push(PredictionPair::new(parse(a)?, parse(p)?)?);
    }
    Ok(pairs)
}

pub fn cmd_evaluate(config: &RunConfig, pairs_file: Option<&Path>) -> CmdResult {
    if let Some(path) = pairs_file {
        let threshold = config.threshold.ok_or_else(|| {
            CmdError::Usage("--threshold is required when evaluating a pairs file".into())
        })?;
        let pairs = read_pairs_csv(path)?;
        if pairs.is_empty() {
            return Err(CmdError::Domain("no records".into()));
        }
        let labels: Vec<String> = (1..=pairs.len()).map(|i| i.to_string()).collect();
        let eval = evaluate_pairs(pairs, threshold)?;
        print_evaluation(config, &eval, &labels)?;
    } else {
        let model = require_model(config)?;
        let data = require_data(config)?;
        let records = load_projects(data, &model.schema)?;
        if records.is_empty() {
            return Err(CmdError::Domain("no records".into()));
        }
        let network = model.to_network()?;
        let mut actual = Vec::with_capacity(records.len());
        let mut predicted = Vec::with_capacity(records.len());
        let mut labels = Vec::with_capacity(records.len());
        for record in &records {
            let out = predict(&network, record, &model.schema, &model.norm)?;
            actual.push(record.overhead_pct);
            predicted.push(out.pct);
            labels.push(record.id.clone());
        }
        let threshold = config.threshold.unwrap_or(model.default_threshold_pct);
        let eval = evaluate(&actual, &predicted, threshold)?;
        print_evaluation(config, &eval, &labels)?;
    }
    Ok(())
}

fn record_from_value_args(
    values: &[String],
    schema: &FactorSchema,
) -> Result<ProjectRecord, CmdError> {
    let mut assigned: Vec<Option<FactorValue>> = vec![None; schema.factors.len()];
    for raw in values {
        let (name, value) = raw.split_once('=').ok_or_else(|| {
            CmdError::Usage(format!("--value {raw:?} is not of the form `Factor Name=value`"))
        })?;
        let idx = schema
            .factors
            .iter()
            .position(|f| f.name == name.trim())
            .ok_or_else(|| CmdError::Domain(format!("unknown factor {:?}", name.trim())))?;
        let parsed = match &schema.factors[idx].kind {
            FactorKind::Categorical { .. } => FactorValue::Categorical(value.trim().to_string()),
            FactorKind::Continuous { .. } => FactorValue::Continuous(
                value.trim().parse().map_err(|_| {
                    CmdError::Domain(format!(
                        "factor {:?}: not a number: {value:?}",
                        schema.factors[idx].name
                    ))
                })?,
            ),
        };
        assigned[idx] = Some(parsed);
    }
    let mut record_values = Vec::with_capacity(schema.factors.len());
    for (spec, value) in schema.factors.iter().zip(assigned) {
        match value {
            Some(v) => record_values.push(v),
            None => {
                return Err(CmdError::Usage(format!("missing --value for factor {:?}", spec.name)))
            }
        }
    }
    Ok(ProjectRecord {
        id: "record".into(),
        values: record_values,
        // Placeholder target; prediction never reads it.
        overhead_pct: 50.0,
    })
}

pub fn cmd_predict(config: &RunConfig, values: &[String]) -> CmdResult {
    let model = require_model(config)?;
    let network = model.to_network()?;
    let threshold = config.threshold.unwrap_or(model.default_threshold_pct);
    println!("model {} threshold ±{:.6}%", model.id, threshold);

    let records: Vec<ProjectRecord> = if !values.is_empty() {
        vec![record_from_value_args(values, &model.schema)?]
    } else if let Some(data) = &config.data {
        load_projects(data, &model.schema)?
    } else {
        return Err(CmdError::Usage("predict needs --data or --value arguments".into()));
    };
    if records.is_empty() {
        return Err(CmdError::Domain("no records".into()));
    }

    for record in &records {
        let out = predict(&network, record, &model.schema, &model.norm)?;
        let marker = if out.extrapolated { " (extrapolated)" } else { "" };
        println!("{} {:.2}{marker}", record.id, out.pct);
    }
    Ok(())
}
