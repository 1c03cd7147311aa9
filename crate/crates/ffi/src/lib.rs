//! C ABI for the fuzzy-id3 toolkit, for binding from other languages.
//!
//! Conventions: handles are opaque pointers freed with the matching
//! `fid3_*_free`, every fallible call returns [`Fid3Status`], and the
//! message of the most recent failure on the current thread is available
//! through [`fid3_last_error_message`]. Prediction inputs are passed in the
//! model's variable order (see [`fid3_model_variable_name`]).
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fuzzy_id3::data::{
    build_partitions, efforts, generate_synthetic, load_csv, write_csv, DatasetSchema,
    EffortModel, ProjectRecord,
};
use fuzzy_id3::evaluation::evaluate_model;
use fuzzy_id3::fuzzy::{fuzzify_output, TNorm};
use fuzzy_id3::induction::{grow_crisp_tree, grow_fuzzy_tree, InductionConfig};
use fuzzy_id3::inference::{predict, predict_csv};
use fuzzy_id3::tree::FuzzyTree;
use fuzzy_id3::{Error, ErrorKind};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fid3Status {
    Ok = 0,
    /// Invalid configuration or parameter value.
    ConfigError = 1,
    /// Invalid or unusable input data.
    DataError = 2,
    /// I/O or serialization failure.
    InternalError = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// The library panicked; state may be inconsistent.
    Panic = 6,
}

/// Conjunction operator selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fid3TNorm {
    Minimum = 0,
    Product = 1,
}

impl From<Fid3TNorm> for TNorm {
    fn from(t: Fid3TNorm) -> TNorm {
        match t {
            Fid3TNorm::Minimum => TNorm::Minimum,
            Fid3TNorm::Product => TNorm::Product,
        }
    }
}

/// Induction parameters; get defaults from [`fid3_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct Fid3Config {
    pub tnorm: Fid3TNorm,
    /// Significance level β in [0, 1].
    pub beta: f64,
    /// Nodes lighter than this become leaves.
    pub min_node_weight: f64,
    /// Output effort classes (2..=7).
    pub num_output_classes: usize,
    /// Fuzzy sets per variable unless overridden by the schema (2..=7).
    pub default_num_sets: usize,
    /// Grow the crisp ID3 baseline instead of the fuzzy tree.
    pub crisp: bool,
}

/// Aggregate accuracy of a model on a dataset.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct Fid3Accuracy {
    /// Mean magnitude of relative error, percent.
    pub mmre: f64,
    /// Share of projects with MRE <= 25%, percent.
    pub pred25: f64,
    /// mmre <= 25.
    pub mmre_acceptable: bool,
    /// pred25 >= 75.
    pub pred25_acceptable: bool,
}

/// Opaque dataset handle: validated records plus their schema.
pub struct Fid3Dataset {
    schema: DatasetSchema,
    records: Vec<ProjectRecord>,
}

/// Opaque trained-model handle.
pub struct Fid3Model {
    tree: FuzzyTree,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: String, status: Fid3Status) -> Fid3Status {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
    status
}

fn status_of(e: &Error) -> Fid3Status {
    match e.kind() {
        ErrorKind::Config => Fid3Status::ConfigError,
        ErrorKind::Data => Fid3Status::DataError,
        ErrorKind::Internal => Fid3Status::InternalError,
    }
}

fn fail(e: Error) -> Fid3Status {
    let status = status_of(&e);
    set_error(e.to_string(), status)
}

/// Runs a body that may touch foreign pointers, translating panics into a
/// status instead of unwinding across the boundary.
fn guarded(body: impl FnOnce() -> Fid3Status) -> Fid3Status {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("panic: {message}"), Fid3Status::Panic)
        }
    }
}

unsafe fn cstr<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Fid3Status> {
    if ptr.is_null() {
        return Err(set_error(
            format!("{what} must not be null"),
            Fid3Status::NullArgument,
        ));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(
            format!("{what} is not valid UTF-8"),
            Fid3Status::InvalidUtf8,
        )
    })
}

fn require<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Fid3Status> {
    unsafe { ptr.as_ref() }.ok_or_else(|| {
        set_error(
            format!("{what} must not be null"),
            Fid3Status::NullArgument,
        )
    })
}

fn require_out<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Fid3Status> {
    unsafe { ptr.as_mut() }.ok_or_else(|| {
        set_error(
            format!("{what} must not be null"),
            Fid3Status::NullArgument,
        )
    })
}

/// Copies a Rust string into a caller buffer (NUL-terminated, truncating)
/// and returns the full length in bytes excluding the terminator.
fn copy_string(s: &str, buf: *mut c_char, len: usize) -> usize {
    if !buf.is_null() && len > 0 {
        let bytes = s.as_bytes();
        let n = bytes.len().min(len - 1);
        unsafe {
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
    }
    s.len()
}

/// Message of the most recent failure on this thread. Returns the message
/// length in bytes; pass a null buffer to query the required size.
#[no_mangle]
pub unsafe extern "C" fn fid3_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| copy_string(&slot.borrow(), buf, len))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fid3_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default induction configuration: product t-norm, β = 0.1, 5 output
/// classes, 7 fuzzy sets per variable.
#[no_mangle]
pub extern "C" fn fid3_config_default() -> Fid3Config {
    let cfg = InductionConfig::default();
    Fid3Config {
        tnorm: Fid3TNorm::Product,
        beta: cfg.beta,
        min_node_weight: cfg.min_node_weight,
        num_output_classes: cfg.num_output_classes,
        default_num_sets: cfg.default_num_sets,
        crisp: false,
    }
}

fn induction_config(cfg: &Fid3Config) -> InductionConfig {
    InductionConfig {
        tnorm: cfg.tnorm.into(),
        beta: cfg.beta,
        min_node_weight: cfg.min_node_weight,
        num_output_classes: cfg.num_output_classes,
        default_num_sets: cfg.default_num_sets,
    }
}

/// Generates a reproducible synthetic dataset for a built-in schema name or
/// a schema JSON path. The handle must be freed with [`fid3_dataset_free`].
#[no_mangle]
pub unsafe extern "C" fn fid3_dataset_generate(
    schema: *const c_char,
    count: usize,
    seed: u64,
    noise: f64,
    out: *mut *mut Fid3Dataset,
) -> Fid3Status {
    guarded(|| {
        let out = match require_out(out, "out") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let schema_arg = match cstr(schema, "schema") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let schema = match DatasetSchema::resolve(schema_arg) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        let model = EffortModel {
            noise,
            ..EffortModel::default()
        };
        match generate_synthetic(&schema, count, seed, &model) {
            Ok(records) => {
                *out = Box::into_raw(Box::new(Fid3Dataset { schema, records }));
                Fid3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Loads and validates a CSV dataset against a schema (built-in name or
/// schema JSON path).
#[no_mangle]
pub unsafe extern "C" fn fid3_dataset_load_csv(
    path: *const c_char,
    schema: *const c_char,
    out: *mut *mut Fid3Dataset,
) -> Fid3Status {
    guarded(|| {
        let out = match require_out(out, "out") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let path = match cstr(path, "path") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let schema_arg = match cstr(schema, "schema") {
            Ok(v) => v,
            Err(s) => return s,
        };
        if !std::path::Path::new(path).is_file() {
            return fail(Error::InputFileMissing(path.to_string()));
        }
        let schema = match DatasetSchema::resolve(schema_arg) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        match load_csv(path, &schema) {
            Ok(records) => {
                *out = Box::into_raw(Box::new(Fid3Dataset { schema, records }));
                Fid3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of records in the dataset; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fid3_dataset_len(dataset: *const Fid3Dataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.records.len())
}

/// Writes the dataset as CSV.
#[no_mangle]
pub unsafe extern "C" fn fid3_dataset_write_csv(
    dataset: *const Fid3Dataset,
    path: *const c_char,
) -> Fid3Status {
    guarded(|| {
        let dataset = match require(dataset, "dataset") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let path = match cstr(path, "path") {
            Ok(v) => v,
            Err(s) => return s,
        };
        match write_csv(path, &dataset.schema, &dataset.records) {
            Ok(()) => Fid3Status::Ok,
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn fid3_dataset_free(dataset: *mut Fid3Dataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// Trains a fuzzy (or crisp, per `config.crisp`) ID3 tree on the dataset.
/// The model must be freed with [`fid3_model_free`].
#[no_mangle]
pub unsafe extern "C" fn fid3_train(
    dataset: *const Fid3Dataset,
    config: *const Fid3Config,
    out: *mut *mut Fid3Model,
) -> Fid3Status {
    guarded(|| {
        let out = match require_out(out, "out") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let dataset = match require(dataset, "dataset") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let config = match require(config, "config") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let cfg = induction_config(config);
        let result = (|| {
            let partitions =
                build_partitions(&dataset.records, &dataset.schema, cfg.default_num_sets)?;
            let output = fuzzify_output(&efforts(&dataset.records), cfg.num_output_classes)?;
            if config.crisp {
                grow_crisp_tree(&dataset.records, &partitions, &output, &cfg)
            } else {
                grow_fuzzy_tree(&dataset.records, &partitions, &output, &cfg)
            }
        })();
        match result {
            Ok(tree) => {
                *out = Box::into_raw(Box::new(Fid3Model { tree }));
                Fid3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Writes the model file (JSON).
#[no_mangle]
pub unsafe extern "C" fn fid3_model_save(
    model: *const Fid3Model,
    path: *const c_char,
) -> Fid3Status {
    guarded(|| {
        let model = match require(model, "model") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let path = match cstr(path, "path") {
            Ok(v) => v,
            Err(s) => return s,
        };
        match model.tree.save(path) {
            Ok(()) => Fid3Status::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Loads a model file written by [`fid3_model_save`] or the CLI.
#[no_mangle]
pub unsafe extern "C" fn fid3_model_load(
    path: *const c_char,
    out: *mut *mut Fid3Model,
) -> Fid3Status {
    guarded(|| {
        let out = match require_out(out, "out") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let path = match cstr(path, "path") {
            Ok(v) => v,
            Err(s) => return s,
        };
        if !std::path::Path::new(path).is_file() {
            return fail(Error::InputFileMissing(path.to_string()));
        }
        match FuzzyTree::load(path) {
            Ok(tree) => {
                *out = Box::into_raw(Box::new(Fid3Model { tree }));
                Fid3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn fid3_model_free(model: *mut Fid3Model) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of input variables the model splits on.
#[no_mangle]
pub unsafe extern "C" fn fid3_model_num_variables(model: *const Fid3Model) -> usize {
    model.as_ref().map_or(0, |m| m.tree.partitions.len())
}

/// Copies the name of variable `index` into the buffer (NUL-terminated,
/// truncating) and returns its full byte length; 0 when out of range.
#[no_mangle]
pub unsafe extern "C" fn fid3_model_variable_name(
    model: *const Fid3Model,
    index: usize,
    buf: *mut c_char,
    len: usize,
) -> usize {
    let Some(model) = model.as_ref() else {
        return 0;
    };
    match model.tree.partitions.get(index) {
        Some(p) => copy_string(p.variable_name(), buf, len),
        None => 0,
    }
}

#[no_mangle]
pub unsafe extern "C" fn fid3_model_node_count(model: *const Fid3Model) -> usize {
    model.as_ref().map_or(0, |m| m.tree.node_count())
}

#[no_mangle]
pub unsafe extern "C" fn fid3_model_leaf_count(model: *const Fid3Model) -> usize {
    model.as_ref().map_or(0, |m| m.tree.leaf_count())
}

#[no_mangle]
pub unsafe extern "C" fn fid3_model_depth(model: *const Fid3Model) -> usize {
    model.as_ref().map_or(0, |m| m.tree.depth())
}

/// Predicts the effort of one project. `values` holds one value per model
/// variable, in model variable order ([`fid3_model_variable_name`]).
#[no_mangle]
pub unsafe extern "C" fn fid3_predict(
    model: *const Fid3Model,
    values: *const f64,
    len: usize,
    out_effort: *mut f64,
) -> Fid3Status {
    guarded(|| {
        let model = match require(model, "model") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let out_effort = match require_out(out_effort, "out_effort") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let expected = model.tree.partitions.len();
        if len != expected {
            return set_error(
                format!("expected {expected} values, got {len}"),
                Fid3Status::ConfigError,
            );
        }
        if values.is_null() {
            return set_error("values must not be null".into(), Fid3Status::NullArgument);
        }
        let values = std::slice::from_raw_parts(values, len);
        let x: BTreeMap<String, f64> = model
            .tree
            .partitions
            .iter()
            .map(|p| p.variable_name().to_string())
            .zip(values.iter().copied())
            .collect();
        match predict(&model.tree, &x) {
            Ok(effort) => {
                *out_effort = effort;
                Fid3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Batch prediction: reads an attribute CSV and writes it back with a
/// `predicted_effort` column appended.
#[no_mangle]
pub unsafe extern "C" fn fid3_predict_csv(
    model: *const Fid3Model,
    input_path: *const c_char,
    output_path: *const c_char,
) -> Fid3Status {
    guarded(|| {
        let model = match require(model, "model") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let input_path = match cstr(input_path, "input_path") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let output_path = match cstr(output_path, "output_path") {
            Ok(v) => v,
            Err(s) => return s,
        };
        if !std::path::Path::new(input_path).is_file() {
            return fail(Error::InputFileMissing(input_path.to_string()));
        }
        let result = (|| -> fuzzy_id3::Result<()> {
            let input = std::fs::File::open(input_path)?;
            let output = std::fs::File::create(output_path)?;
            predict_csv(&model.tree, input, output)?;
            Ok(())
        })();
        match result {
            Ok(()) => Fid3Status::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Evaluates the model on a dataset with actual efforts.
#[no_mangle]
pub unsafe extern "C" fn fid3_evaluate(
    model: *const Fid3Model,
    dataset: *const Fid3Dataset,
    out: *mut Fid3Accuracy,
) -> Fid3Status {
    guarded(|| {
        let model = match require(model, "model") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let dataset = match require(dataset, "dataset") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let out = match require_out(out, "out") {
            Ok(v) => v,
            Err(s) => return s,
        };
        match evaluate_model(&model.tree, &dataset.records, "ffi dataset", None) {
            Ok(report) => {
                *out = Fid3Accuracy {
                    mmre: report.mmre,
                    pred25: report.pred25,
                    mmre_acceptable: report.mmre_acceptable,
                    pred25_acceptable: report.pred25_acceptable,
                };
                Fid3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}
