//! Accuracy metrics (MRE, MMRE, Pred), holdout validation, the β × t-norm
//! sweep and the crisp-vs-fuzzy model comparison.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::data::{build_partitions, efforts, DatasetSchema, ProjectRecord};
use crate::error::{Error, Result};
use crate::fuzzy::{fuzzify_output, TNorm};
use crate::induction::{grow_crisp_tree, grow_fuzzy_tree, InductionConfig};
use crate::inference::predict;
use crate::tree::FuzzyTree;

/// MMRE at or below this is conventionally acceptable.
pub const MMRE_ACCEPTABLE_MAX: f64 = 25.0;
/// Pred(25) at or above this is conventionally acceptable.
pub const PRED25_ACCEPTABLE_MIN: f64 = 75.0;

/// Magnitude of relative error: `|actual - estimated| / actual`.
pub fn mre(actual: f64, estimated: f64) -> Result<f64> {
    if actual.is_nan() || actual <= 0.0 {
        return Err(Error::NonPositiveActual(actual));
    }
    Ok((actual - estimated).abs() / actual)
}

/// Mean MRE over `(actual, estimated)` pairs, as a percentage.
pub fn mmre(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyPairs);
    }
    let mut sum = 0.0;
    for &(actual, estimated) in pairs {
        sum += mre(actual, estimated)?;
    }
    Ok(sum / pairs.len() as f64 * 100.0)
}

/// Percentage of pairs whose MRE is less than or equal to `p` percent
/// (inclusive boundary).
pub fn pred(pairs: &[(f64, f64)], p: f64) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyPairs);
    }
    let threshold = p / 100.0;
    let mut hits = 0usize;
    for &(actual, estimated) in pairs {
        if mre(actual, estimated)? <= threshold {
            hits += 1;
        }
    }
    Ok(100.0 * hits as f64 / pairs.len() as f64)
}

/// How much lower a model's MMRE is than the crisp baseline, as a
/// percentage of the baseline. Zero when the baseline is already exact.
pub fn mmre_improvement(crisp_mmre: f64, model_mmre: f64) -> f64 {
    if crisp_mmre == 0.0 {
        0.0
    } else {
        100.0 * (crisp_mmre - model_mmre) / crisp_mmre
    }
}

/// One evaluated project.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectEvaluation {
    pub record_index: usize,
    pub actual_effort: f64,
    pub estimated_effort: f64,
    pub mre: f64,
}

/// Configuration echo attached to reports so runs can be reproduced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportContext {
    pub tnorm: TNorm,
    pub beta: f64,
    pub split: String,
    pub seed: Option<u64>,
}

/// Per-project errors plus the two aggregate criteria for one
/// configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub per_project: Vec<ProjectEvaluation>,
    /// Mean MRE in percent.
    pub mmre: f64,
    /// Percentage of projects with MRE <= 25%.
    pub pred25: f64,
    /// `mmre <= 25`.
    pub mmre_acceptable: bool,
    /// `pred25 >= 75`.
    pub pred25_acceptable: bool,
    pub context: ReportContext,
}

/// Runs a model over records and aggregates MMRE and Pred(25).
pub fn evaluate_model(
    tree: &FuzzyTree,
    records: &[ProjectRecord],
    split: impl Into<String>,
    seed: Option<u64>,
) -> Result<EvaluationReport> {
    if records.is_empty() {
        return Err(Error::EmptyPairs);
    }
    let mut per_project = Vec::with_capacity(records.len());
    let mut pairs = Vec::with_capacity(records.len());
    for record in records {
        let estimated = predict(tree, &record.attributes)?;
        let actual = record.actual_effort;
        per_project.push(ProjectEvaluation {
            record_index: record.index,
            actual_effort: actual,
            estimated_effort: estimated,
            mre: mre(actual, estimated)?,
        });
        pairs.push((actual, estimated));
    }
    let mmre = mmre(&pairs)?;
    let pred25 = pred(&pairs, 25.0)?;
    Ok(EvaluationReport {
        per_project,
        mmre,
        pred25,
        mmre_acceptable: mmre <= MMRE_ACCEPTABLE_MAX,
        pred25_acceptable: pred25 >= PRED25_ACCEPTABLE_MIN,
        context: ReportContext {
            tnorm: tree.tnorm,
            beta: tree.beta,
            split: split.into(),
            seed,
        },
    })
}

/// A deterministic train/test split of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<ProjectRecord>,
    pub test: Vec<ProjectRecord>,
    pub train_fraction: f64,
    pub seed: u64,
    /// Hash of the index assignment; identical splits share it.
    pub fingerprint: String,
}

impl Split {
    pub fn descriptor(&self) -> String {
        format!(
            "train={}/test={} fraction={} seed={} fingerprint={}",
            self.train.len(),
            self.test.len(),
            self.train_fraction,
            self.seed,
            self.fingerprint
        )
    }
}

/// Splits records into disjoint, exhaustive train and test parts via a
/// ChaCha8-seeded Fisher-Yates permutation followed by a prefix split of
/// `round(n * train_fraction)` records. Deterministic for a fixed record
/// order, fraction and seed.
pub fn holdout_split(records: &[ProjectRecord], train_fraction: f64, seed: u64) -> Result<Split> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidTrainFraction(train_fraction));
    }
    let n = records.len();
    let train_len = (n as f64 * train_fraction).round() as usize;
    if n < 2 || train_len == 0 || train_len >= n {
        return Err(Error::DegenerateSplit {
            n,
            fraction: train_fraction,
        });
    }

    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let (train_idx, test_idx) = indices.split_at(train_len);

    let mut hasher = Sha256::new();
    hasher.update(format!("seed={seed};fraction={train_fraction};n={n};train="));
    for i in train_idx {
        hasher.update(format!("{i},"));
    }
    hasher.update("test=");
    for i in test_idx {
        hasher.update(format!("{i},"));
    }
    let fingerprint = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect::<String>()[..16]
        .to_string();

    let take = |idx: &[usize]| idx.iter().map(|&i| records[i].clone()).collect();
    Ok(Split {
        train: take(train_idx),
        test: take(test_idx),
        train_fraction,
        seed,
        fingerprint,
    })
}

/// Metrics of one successful sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMetrics {
    pub mmre: f64,
    pub pred25: f64,
    pub mmre_acceptable: bool,
    pub pred25_acceptable: bool,
}

/// A sweep cell either carries metrics or the reason it failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CellOutcome {
    Metrics(CellMetrics),
    Failed { error: String },
}

impl CellOutcome {
    pub fn metrics(&self) -> Option<&CellMetrics> {
        match self {
            CellOutcome::Metrics(m) => Some(m),
            CellOutcome::Failed { .. } => None,
        }
    }

    fn from_report(report: &EvaluationReport) -> Self {
        CellOutcome::Metrics(CellMetrics {
            mmre: report.mmre,
            pred25: report.pred25,
            mmre_acceptable: report.mmre_acceptable,
            pred25_acceptable: report.pred25_acceptable,
        })
    }
}

/// One sweep row: a significance level and one cell per t-norm, in column
/// order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub beta: f64,
    pub cells: Vec<CellOutcome>,
}

/// Sweep results over the β grid, product column first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    /// Column t-norms, canonical order: Product (Model 1), then Minimum
    /// (Model 2).
    pub tnorms: Vec<TNorm>,
    pub rows: Vec<SweepRow>,
    pub train_size: usize,
    pub test_size: usize,
    pub train_fraction: f64,
    pub seed: u64,
    pub split_fingerprint: String,
    /// True when cells were evaluated on the training part instead.
    pub on_train: bool,
}

/// Model label used in reports: Model 1 is the product conjunction, Model 2
/// the minimum.
pub fn model_label(tnorm: TNorm) -> &'static str {
    match tnorm {
        TNorm::Product => "Model 1",
        TNorm::Minimum => "Model 2",
    }
}

/// The default β grid: 0.1 through 0.9.
pub fn default_beta_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

fn canonical_tnorms(tnorms: &[TNorm]) -> Vec<TNorm> {
    let mut out = Vec::new();
    for t in [TNorm::Product, TNorm::Minimum] {
        if tnorms.contains(&t) {
            out.push(t);
        }
    }
    out
}

fn evaluate_cell(
    split: &Split,
    schema: &DatasetSchema,
    cfg: &InductionConfig,
    crisp: bool,
    on_train: bool,
) -> Result<EvaluationReport> {
    let partitions = build_partitions(&split.train, schema, cfg.default_num_sets)?;
    let output = fuzzify_output(&efforts(&split.train), cfg.num_output_classes)?;
    let tree = if crisp {
        grow_crisp_tree(&split.train, &partitions, &output, cfg)?
    } else {
        grow_fuzzy_tree(&split.train, &partitions, &output, cfg)?
    };
    let eval_records = if on_train { &split.train } else { &split.test };
    evaluate_model(&tree, eval_records, split.descriptor(), Some(split.seed))
}

/// Grows and evaluates one model per (β, t-norm) combination on a shared
/// split. Rows come back in ascending β order with the product column
/// first; a cell that fails records its reason and the sweep continues.
pub fn run_sweep(
    split: &Split,
    schema: &DatasetSchema,
    grid: &[f64],
    tnorms: &[TNorm],
    cfg: &InductionConfig,
    on_train: bool,
) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(Error::Schema("sweep grid is empty".into()));
    }
    for &beta in grid {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidBeta(beta));
        }
    }
    let tnorms = canonical_tnorms(tnorms);
    if tnorms.is_empty() {
        return Err(Error::Schema("sweep needs at least one t-norm".into()));
    }

    let mut betas: Vec<f64> = grid.to_vec();
    betas.sort_by(|a, b| a.partial_cmp(b).expect("finite betas"));
    betas.dedup();

    let mut rows = Vec::with_capacity(betas.len());
    for &beta in &betas {
        let mut cells = Vec::with_capacity(tnorms.len());
        for &tnorm in &tnorms {
            let cell_cfg = InductionConfig {
                tnorm,
                beta,
                ..cfg.clone()
            };
            let cell = match evaluate_cell(split, schema, &cell_cfg, false, on_train) {
                Ok(report) => CellOutcome::from_report(&report),
                Err(e) => CellOutcome::Failed {
                    error: e.to_string(),
                },
            };
            cells.push(cell);
        }
        rows.push(SweepRow { beta, cells });
    }

    Ok(SweepTable {
        tnorms,
        rows,
        train_size: split.train.len(),
        test_size: split.test.len(),
        train_fraction: split.train_fraction,
        seed: split.seed,
        split_fingerprint: split.fingerprint.clone(),
        on_train,
    })
}

/// One comparison row: the crisp baseline or a fuzzy model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelRow {
    pub label: String,
    pub tnorm: Option<TNorm>,
    pub outcome: CellOutcome,
    /// MMRE improvement over the crisp baseline, percent; absent for the
    /// baseline itself or when either side failed.
    pub improvement_vs_crisp: Option<f64>,
}

/// Crisp ID3 against both fuzzy models on one split.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub rows: Vec<ModelRow>,
    /// Index of the row with the lowest MMRE, if any row succeeded.
    pub best_mmre_row: Option<usize>,
    /// Index of the row with the highest Pred(25).
    pub best_pred25_row: Option<usize>,
    pub beta: f64,
    pub train_fraction: f64,
    pub seed: u64,
    pub split_fingerprint: String,
}

/// Grows the crisp baseline plus the two fuzzy models at the configured β
/// and evaluates all three on the shared test part.
pub fn compare_models(
    split: &Split,
    schema: &DatasetSchema,
    cfg: &InductionConfig,
) -> Result<ComparisonReport> {
    let runs: [(&str, Option<TNorm>, bool); 3] = [
        ("Crisp ID3", None, true),
        (model_label(TNorm::Product), Some(TNorm::Product), false),
        (model_label(TNorm::Minimum), Some(TNorm::Minimum), false),
    ];

    let mut rows: Vec<ModelRow> = runs
        .iter()
        .map(|&(label, tnorm, crisp)| {
            let cell_cfg = InductionConfig {
                tnorm: tnorm.unwrap_or(cfg.tnorm),
                ..cfg.clone()
            };
            let outcome = match evaluate_cell(split, schema, &cell_cfg, crisp, false) {
                Ok(report) => CellOutcome::from_report(&report),
                Err(e) => CellOutcome::Failed {
                    error: e.to_string(),
                },
            };
            ModelRow {
                label: label.to_string(),
                tnorm,
                outcome,
                improvement_vs_crisp: None,
            }
        })
        .collect();

    let crisp_mmre = rows[0].outcome.metrics().map(|m| m.mmre);
    if let Some(crisp_mmre) = crisp_mmre {
        for row in rows.iter_mut().skip(1) {
            row.improvement_vs_crisp = row
                .outcome
                .metrics()
                .map(|m| mmre_improvement(crisp_mmre, m.mmre));
        }
    }

    let best_by = |pick: fn(&CellMetrics) -> f64, lower_is_better: bool| -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in rows.iter().enumerate() {
            if let Some(m) = row.outcome.metrics() {
                let v = pick(m);
                let better = best.is_none_or(|(_, b)| {
                    if lower_is_better {
                        v < b
                    } else {
                        v > b
                    }
                });
                if better {
                    best = Some((i, v));
                }
            }
        }
        best.map(|(i, _)| i)
    };
    let best_mmre_row = best_by(|m| m.mmre, true);
    let best_pred25_row = best_by(|m| m.pred25, false);

    Ok(ComparisonReport {
        rows,
        best_mmre_row,
        best_pred25_row,
        beta: cfg.beta,
        train_fraction: split.train_fraction,
        seed: split.seed,
        split_fingerprint: split.fingerprint.clone(),
    })
}
