//! Fuzzy ID3 decision trees for software development effort estimation.
//!
//! The pipeline: load or generate a project dataset ([`data`]), partition
//! each cost driver and the effort target into strong fuzzy partitions
//! ([`fuzzy`]), grow a fuzzy (or crisp baseline) ID3 tree with
//! membership-weighted entropy and information gain ([`induction`]),
//! predict new projects by firing leaves and averaging their
//! representatives ([`inference`]), and measure accuracy with MMRE and
//! Pred(25), including the β × t-norm sweep and the crisp-vs-fuzzy
//! comparison ([`evaluation`], [`report`]).

pub mod data;
pub mod error;
pub mod evaluation;
pub mod fuzzy;
pub mod induction;
pub mod inference;
pub mod report;
pub mod tree;

pub use data::{
    builtin_schemas, generate_synthetic, load_csv, write_csv, DatasetSchema, EffortModel,
    ProjectRecord,
};
pub use error::{Error, ErrorKind, Result};
pub use evaluation::{
    compare_models, holdout_split, mmre, mmre_improvement, mre, pred, run_sweep, ComparisonReport,
    EvaluationReport, Split, SweepTable,
};
pub use fuzzy::{fuzzify_output, FuzzyPartition, MembershipFunction, TNorm};
pub use induction::{
    class_proportions, fuzzy_entropy, grow_crisp_tree, grow_fuzzy_tree, information_gain,
    InductionConfig, NodeStatistics, WeightedExample,
};
pub use inference::{fire, predict, predict_csv, FiringAssignment};
pub use report::{render_comparison, render_evaluation, render_sweep, ReportFormat};
pub use tree::{FuzzyTree, PathStep, TreeNode};
