//! Report rendering: aligned plain-text tables, CSV, and JSON with the full
//! run configuration. Reals are rendered with the shortest round-trip
//! decimal form in every format, so the same cell parses to the identical
//! value from the text, CSV and JSON renderings.

use crate::error::Result;
use crate::evaluation::{CellOutcome, ComparisonReport, EvaluationReport, SweepTable};
use crate::fuzzy::TNorm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" | "structured" => Ok(ReportFormat::Json),
            other => Err(format!(
                "unknown format '{other}' (expected text, csv or json)"
            )),
        }
    }
}

fn pad(s: &str, width: usize) -> String {
    format!("{s:<width$}")
}

fn tnorm_title(t: TNorm) -> &'static str {
    match t {
        TNorm::Product => "Product",
        TNorm::Minimum => "Minimum",
    }
}

fn cell_strings(outcome: &CellOutcome) -> (String, String) {
    match outcome {
        CellOutcome::Metrics(m) => (m.mmre.to_string(), m.pred25.to_string()),
        CellOutcome::Failed { error } => {
            (format!("failed: {error}"), format!("failed: {error}"))
        }
    }
}

fn csv_from_rows(rows: Vec<Vec<String>>) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for row in rows {
        wtr.write_record(&row).expect("in-memory CSV write");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
}

pub fn render_sweep(table: &SweepTable, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(table).expect("report serializes") + "\n"),
        ReportFormat::Csv => {
            let mut header = vec!["beta".to_string()];
            for &t in &table.tnorms {
                header.push(format!("mmre_{t}"));
                header.push(format!("pred25_{t}"));
            }
            let mut rows = vec![header];
            for row in &table.rows {
                let mut out = vec![row.beta.to_string()];
                for cell in &row.cells {
                    let (mmre, pred25) = cell_strings(cell);
                    out.push(mmre);
                    out.push(pred25);
                }
                rows.push(out);
            }
            Ok(csv_from_rows(rows))
        }
        ReportFormat::Text => {
            const W: usize = 24;
            let mut out = String::new();
            out.push_str(&format!(
                "Fuzzy ID3 sweep: {} train / {} test ({} on {}), fraction={}, seed={}, split fingerprint={}\n",
                table.train_size,
                table.test_size,
                "evaluated",
                if table.on_train { "training set" } else { "test set" },
                table.train_fraction,
                table.seed,
                table.split_fingerprint,
            ));
            for &t in &table.tnorms {
                out.push_str(&format!(
                    "{}: T-norm = {}\n",
                    crate::evaluation::model_label(t),
                    tnorm_title(t)
                ));
            }
            out.push('\n');

            out.push_str(&pad("Significant level (β)", W));
            for &t in &table.tnorms {
                out.push_str(&pad(&format!("T-norm = {}", tnorm_title(t)), 2 * W));
            }
            out.push('\n');
            out.push_str(&pad("", W));
            for _ in &table.tnorms {
                out.push_str(&pad("MMRE", W));
                out.push_str(&pad("Pred(25)", W));
            }
            out.push('\n');
            for row in &table.rows {
                out.push_str(&pad(&row.beta.to_string(), W));
                for cell in &row.cells {
                    let (mmre, pred25) = cell_strings(cell);
                    out.push_str(&pad(&mmre, W));
                    out.push_str(&pad(&pred25, W));
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}

pub fn render_comparison(report: &ComparisonReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            Ok(serde_json::to_string_pretty(report).expect("report serializes") + "\n")
        }
        ReportFormat::Csv => {
            let mut rows = vec![vec![
                "model".to_string(),
                "tnorm".to_string(),
                "mmre".to_string(),
                "pred25".to_string(),
                "improvement_vs_crisp".to_string(),
            ]];
            for row in &report.rows {
                let (mmre, pred25) = cell_strings(&row.outcome);
                rows.push(vec![
                    row.label.clone(),
                    row.tnorm.map(|t| t.to_string()).unwrap_or_default(),
                    mmre,
                    pred25,
                    row.improvement_vs_crisp
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                ]);
            }
            Ok(csv_from_rows(rows))
        }
        ReportFormat::Text => {
            const W: usize = 24;
            let mut out = String::new();
            out.push_str(&format!(
                "Model comparison at β={}, fraction={}, seed={}, split fingerprint={}\n",
                report.beta, report.train_fraction, report.seed, report.split_fingerprint
            ));
            for row in &report.rows {
                if let Some(t) = row.tnorm {
                    out.push_str(&format!("{}: T-norm = {}\n", row.label, tnorm_title(t)));
                }
            }
            out.push('\n');
            out.push_str(&pad("Performance Criteria", W));
            for row in &report.rows {
                out.push_str(&pad(&row.label, W));
            }
            out.push('\n');

            let metric_row = |name: &str,
                              value: fn(&crate::evaluation::CellMetrics) -> f64,
                              best: Option<usize>|
             -> String {
                let mut line = pad(name, W);
                for (i, row) in report.rows.iter().enumerate() {
                    let cell = match row.outcome.metrics() {
                        Some(m) => {
                            let mark = if best == Some(i) { " *" } else { "" };
                            format!("{}{}", value(m), mark)
                        }
                        None => {
                            let (failure, _) = cell_strings(&row.outcome);
                            failure
                        }
                    };
                    line.push_str(&pad(&cell, W));
                }
                line.push('\n');
                line
            };
            out.push_str(&metric_row("MMRE", |m| m.mmre, report.best_mmre_row));
            out.push_str(&metric_row("Pred(25)", |m| m.pred25, report.best_pred25_row));
            out.push_str("(* best value in the row)\n\n");

            for row in &report.rows {
                if let Some(improvement) = row.improvement_vs_crisp {
                    out.push_str(&format!(
                        "MMRE improvement of {} over Crisp ID3: {}%\n",
                        row.label, improvement
                    ));
                }
            }
            Ok(out)
        }
    }
}

pub fn render_evaluation(report: &EvaluationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            Ok(serde_json::to_string_pretty(report).expect("report serializes") + "\n")
        }
        ReportFormat::Csv => {
            let mut rows = vec![vec![
                "record_index".to_string(),
                "actual_effort".to_string(),
                "estimated_effort".to_string(),
                "mre".to_string(),
            ]];
            for p in &report.per_project {
                rows.push(vec![
                    p.record_index.to_string(),
                    p.actual_effort.to_string(),
                    p.estimated_effort.to_string(),
                    p.mre.to_string(),
                ]);
            }
            Ok(csv_from_rows(rows))
        }
        ReportFormat::Text => {
            const W: usize = 24;
            let mut out = String::new();
            out.push_str(&format!(
                "Evaluation: tnorm={}, β={}, split: {}\n\n",
                report.context.tnorm, report.context.beta, report.context.split
            ));
            for head in ["record", "actual", "estimated", "MRE"] {
                out.push_str(&pad(head, W));
            }
            out.push('\n');
            for p in &report.per_project {
                out.push_str(&pad(&p.record_index.to_string(), W));
                out.push_str(&pad(&p.actual_effort.to_string(), W));
                out.push_str(&pad(&p.estimated_effort.to_string(), W));
                out.push_str(&pad(&p.mre.to_string(), W));
                out.push('\n');
            }
            out.push('\n');
            out.push_str(&format!(
                "MMRE: {} ({}acceptable, target ≤ 25)\n",
                report.mmre,
                if report.mmre_acceptable { "" } else { "not " }
            ));
            out.push_str(&format!(
                "Pred(25): {} ({}acceptable, target ≥ 75)\n",
                report.pred25,
                if report.pred25_acceptable { "" } else { "not " }
            ));
            Ok(out)
        }
    }
}
