//! Rendering of sweep and evaluation reports.
//!
//! Sweep reports come in CSV and aligned-text form, grouped A-D in plan
//! order with both RMS scales; float columns print to six decimals.
//! Evaluation reports list one prediction pair per row with the signed
//! difference carrying an explicit `(+)`/`(-)` marker in text form.

use crate::error::{Error, Result};
use crate::metrics::{format_signed_diff, Evaluation};
use crate::net::NetworkTopology;
use crate::sweep::{SweepGroup, TrialMetrics, TrialOutcome, TrialResult};

const SWEEP_CSV_HEADER: &str =
    "trial,group,input_nodes,output_nodes,hidden_layers,nodes_layer_1,nodes_layer_2,transfer,status,abs_diff_pct,rms_pct,rms_norm,epochs,stop_reason";

fn hidden_node_counts(topology: &NetworkTopology) -> (usize, usize) {
    let first = topology.hidden[0].nodes;
    let second = topology.hidden.get(1).map_or(0, |h| h.nodes);
    (first, second)
}

fn transfer_name(topology: &NetworkTopology) -> &'static str {
    topology.hidden[0].transfer.name()
}

/// Renders sweep results as CSV, one row per trial in result order.
pub fn render_sweep_csv(results: &[TrialResult]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in results {
        let (n1, n2) = hidden_node_counts(&r.topology);
        let head = format!(
            "{},{},{},{},{},{},{},{}",
            r.trial_no,
            r.group.label(),
            r.topology.input_nodes,
            r.topology.output_nodes,
            r.topology.hidden.len(),
            n1,
            n2,
            transfer_name(&r.topology),
        );
        match &r.outcome {
            TrialOutcome::Completed(m) => {
                let (epochs, stop) = match &m.training {
                    Some(t) => (t.epochs_run.to_string(), t.stop_reason.to_string()),
                    None => (String::new(), String::new()),
                };
                out.push_str(&format!(
                    "{head},ok,{:.6},{:.6},{:.6},{epochs},{stop}\n",
                    m.mean_abs_diff_pct, m.validation_rms_pct, m.validation_rms_norm
                ));
            }
            TrialOutcome::Diverged { epoch } => {
                out.push_str(&format!("{head},diverged,,,,{epoch},diverged\n"));
            }
        }
    }
    out
}

/// Parses a sweep CSV back into result rows (training summaries are not
/// part of the report and come back as `None`).
pub fn parse_sweep_csv(text: &str) -> Result<Vec<TrialResult>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == SWEEP_CSV_HEADER => {}
        other => {
            return Err(Error::InvalidDataset(format!(
                "unexpected sweep csv header: {other:?}"
            )))
        }
    }

    let mut results = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 14 {
            return Err(Error::InvalidDataset(format!(
                "sweep csv line {}: expected 14 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse_usize = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidDataset(format!("bad {what}: {s:?}")))
        };
        let parse_f64 = |s: &str, what: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidDataset(format!("bad {what}: {s:?}")))
        };

        let trial_no = parse_usize(fields[0], "trial")? as u32;
        let group = SweepGroup::from_label(fields[1])?;
        let input_nodes = parse_usize(fields[2], "input_nodes")?;
        let output_nodes = parse_usize(fields[3], "output_nodes")?;
        let layer_count = parse_usize(fields[4], "hidden_layers")?;
        let n1 = parse_usize(fields[5], "nodes_layer_1")?;
        let n2 = parse_usize(fields[6], "nodes_layer_2")?;
        let transfer = crate::net::TransferFunction::parse(fields[7])?;
        let hidden: Vec<usize> = if layer_count == 2 { vec![n1, n2] } else { vec![n1] };
        let topology = NetworkTopology::uniform(input_nodes, &hidden, transfer, output_nodes)?;

        let outcome = match fields[8] {
            "ok" => TrialOutcome::Completed(TrialMetrics {
                mean_abs_diff_pct: parse_f64(fields[9], "abs_diff_pct")?,
                validation_rms_pct: parse_f64(fields[10], "rms_pct")?,
                validation_rms_norm: parse_f64(fields[11], "rms_norm")?,
                training: None,
            }),
            "diverged" => TrialOutcome::Diverged {
                epoch: parse_usize(fields[12], "epochs")?,
            },
            other => {
                return Err(Error::InvalidDataset(format!("unknown trial status {other:?}")))
            }
        };

        results.push(TrialResult {
            trial_no,
            group,
            topology,
            outcome,
        });
    }
    Ok(results)
}

/// Renders sweep results as four aligned-text sections, one per group.
pub fn render_sweep_text(results: &[TrialResult]) -> String {
    let mut out = String::new();
    let groups = [
        SweepGroup::OneLayerSigmoid,
        SweepGroup::OneLayerTangent,
        SweepGroup::TwoLayerSigmoid,
        SweepGroup::TwoLayerTangent,
    ];
    for (gi, group) in groups.iter().enumerate() {
        let rows: Vec<&TrialResult> = results.iter().filter(|r| r.group == *group).collect();
        if rows.is_empty() {
            continue;
        }
        if gi > 0 {
            out.push('\n');
        }
        out.push_str(&format!("Group {}: {}\n", group.label(), group.description()));
        out.push_str(&format!(
            "{:>5} {:>6} {:>7} {:>7} {:>8} {:>8} {:>9} {:>14} {:>12} {:>12}\n",
            "trial",
            "inputs",
            "outputs",
            "layers",
            "nodes_1",
            "nodes_2",
            "transfer",
            "abs_diff_pct",
            "rms_pct",
            "rms_norm"
        ));
        for r in rows {
            let (n1, n2) = hidden_node_counts(&r.topology);
            match &r.outcome {
                TrialOutcome::Completed(m) => {
                    out.push_str(&format!(
                        "{:>5} {:>6} {:>7} {:>7} {:>8} {:>8} {:>9} {:>14.6} {:>12.6} {:>12.6}\n",
                        r.trial_no,
                        r.topology.input_nodes,
                        r.topology.output_nodes,
                        r.topology.hidden.len(),
                        n1,
                        n2,
                        transfer_name(&r.topology),
                        m.mean_abs_diff_pct,
                        m.validation_rms_pct,
                        m.validation_rms_norm,
                    ));
                }
                TrialOutcome::Diverged { epoch } => {
                    out.push_str(&format!(
                        "{:>5} {:>6} {:>7} {:>7} {:>8} {:>8} {:>9} {:>14} {:>12} {:>12}\n",
                        r.trial_no,
                        r.topology.input_nodes,
                        r.topology.output_nodes,
                        r.topology.hidden.len(),
                        n1,
                        n2,
                        transfer_name(&r.topology),
                        format!("diverged@{epoch}"),
                        "diverged",
                        "diverged",
                    ));
                }
            }
        }
    }
    out
}

/// One-line description of the selected model, field for field: trial,
/// input nodes, hidden layer count, nodes per hidden layer, learning rule,
/// transfer function, output nodes, RMS, then the mean absolute difference.
pub fn best_model_line(result: &TrialResult) -> String {
    let nodes: Vec<String> = result.topology.hidden.iter().map(|h| h.nodes.to_string()).collect();
    let mut line = format!(
        "model={} input_nodes={} hidden_layers={} nodes_per_hidden_layer={} learning_rule=back-propagation transfer={} output_nodes={}",
        result.trial_no,
        result.topology.input_nodes,
        result.topology.hidden.len(),
        nodes.join("/"),
        transfer_name(&result.topology),
        result.topology.output_nodes,
    );
    match &result.outcome {
        TrialOutcome::Completed(m) => {
            line.push_str(&format!(
                " rms={:.6} abs_diff_pct={:.6}",
                m.validation_rms_pct, m.mean_abs_diff_pct
            ));
        }
        TrialOutcome::Diverged { epoch } => {
            line.push_str(&format!(" rms=diverged@{epoch}"));
        }
    }
    line
}

/// Renders an evaluation as CSV, one pair per row.
pub fn render_evaluation_csv(eval: &Evaluation, labels: &[String]) -> String {
    let mut out = String::from("project,actual_pct,predicted_pct,abs_diff_pct,verdict\n");
    for (pair, label) in eval.pairs.iter().zip(labels) {
        out.push_str(&format!(
            "{label},{:.6},{:.6},{:.6},{}\n",
            pair.actual, pair.predicted, pair.signed_diff_pct, pair.verdict
        ));
    }
    out
}

/// Renders an evaluation as an aligned table with a summary line.
pub fn render_evaluation_text(eval: &Evaluation, labels: &[String]) -> String {
    let mut out = format!(
        "{:>10} {:>12} {:>13} {:>16} {:>10}\n",
        "project", "actual_pct", "predicted_pct", "abs_diff_pct", "verdict"
    );
    for (pair, label) in eval.pairs.iter().zip(labels) {
        out.push_str(&format!(
            "{:>10} {:>12.6} {:>13.6} {:>16} {:>10}\n",
            label,
            pair.actual,
            pair.predicted,
            format_signed_diff(pair.signed_diff_pct),
            pair.verdict
        ));
    }
    let s = &eval.summary;
    out.push_str(&format!(
        "n={} rms={:.6} mean_abs_diff_pct={:.6} correct={}/{} accuracy={:.1}% threshold={:.6}\n",
        s.n,
        s.rms,
        s.mean_abs_diff_pct,
        s.correct_count,
        s.n,
        s.accuracy * 100.0,
        s.threshold_pct
    ));
    out
}
