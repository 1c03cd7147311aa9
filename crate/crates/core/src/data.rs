//! Dataset ingestion and generation: CSV loading against a schema, the two
//! built-in schemas, and a seeded synthetic-project generator.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyPartition, MAX_SETS, MIN_SETS};

/// One historical project: named cost-driver values plus the actual effort.
/// The effort unit (person-hours, person-months) is metadata, not semantics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectRecord {
    /// Position of the record in its source dataset, kept through splits so
    /// reports and errors can name the original row.
    pub index: usize,
    pub attributes: BTreeMap<String, f64>,
    pub actual_effort: f64,
}

impl ProjectRecord {
    pub fn attribute(&self, name: &str) -> Result<f64> {
        self.attributes
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingAttribute {
                record: self.index,
                attribute: name.to_string(),
            })
    }
}

/// Column layout of a dataset: ordered attribute names, the effort column,
/// and optional per-attribute fuzzy-set-count overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSchema {
    pub attributes: Vec<String>,
    #[serde(rename = "effort")]
    pub effort_column: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub set_counts: BTreeMap<String, usize>,
}

impl DatasetSchema {
    pub fn new(attributes: Vec<String>, effort_column: impl Into<String>) -> Result<Self> {
        let schema = DatasetSchema {
            attributes,
            effort_column: effort_column.into(),
            set_counts: BTreeMap::new(),
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<()> {
        if self.attributes.is_empty() {
            return Err(Error::Schema("schema has no attributes".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &self.attributes {
            if !seen.insert(name) {
                return Err(Error::Schema(format!("duplicate attribute '{name}'")));
            }
        }
        if self.attributes.contains(&self.effort_column) {
            return Err(Error::Schema(format!(
                "effort column '{}' must not be listed among the attributes",
                self.effort_column
            )));
        }
        for (name, &count) in &self.set_counts {
            if !self.attributes.contains(name) {
                return Err(Error::Schema(format!(
                    "set-count override for unknown attribute '{name}'"
                )));
            }
            if !(MIN_SETS..=MAX_SETS).contains(&count) {
                return Err(Error::InvalidSetCount(count));
            }
        }
        Ok(())
    }

    /// Loads a schema from its JSON file form.
    pub fn from_json(reader: impl Read) -> Result<Self> {
        let schema: DatasetSchema = serde_json::from_reader(reader)
            .map_err(|e| Error::Schema(format!("invalid schema file: {e}")))?;
        schema.validate()?;
        Ok(schema)
    }

    /// Resolves a `--schema` argument: a built-in name or a JSON file path.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        if let Some(schema) = builtin_schemas().remove(name_or_path) {
            return Ok(schema);
        }
        let path = Path::new(name_or_path);
        if path.exists() {
            return Self::from_json(std::fs::File::open(path)?);
        }
        Err(Error::Schema(format!(
            "'{name_or_path}' is neither a built-in schema (tukutuku, cocomo81) nor a schema file"
        )))
    }
}

/// The two dataset shapes used throughout: `tukutuku` (9 web-project
/// attributes) and `cocomo81` (13 attributes, with virtual machine
/// volatility split into VIRTMIN/VIRTMAJ).
pub fn builtin_schemas() -> BTreeMap<&'static str, DatasetSchema> {
    let tukutuku = DatasetSchema::new(
        [
            "TeamExp", "DevTeam", "TotWP", "TextPages", "TotImg", "Anim", "AV", "TotHigh",
            "TotNHigh",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        "Effort",
    )
    .expect("builtin schema is valid");

    let cocomo81 = DatasetSchema::new(
        [
            "SIZE", "DATA", "VIRTMIN", "VIRTMAJ", "TIME", "STOR", "TURN", "ACAP", "AEXP", "PCAP",
            "VEXP", "LEXP", "SCED",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        "Effort",
    )
    .expect("builtin schema is valid");

    let mut map = BTreeMap::new();
    map.insert("tukutuku", tukutuku);
    map.insert("cocomo81", cocomo81);
    map
}

/// Loads and validates a CSV dataset. Rows keep their file order; `index` is
/// the 0-based record position, errors name the 1-based data row.
pub fn load_csv_reader(reader: impl Read, schema: &DatasetSchema) -> Result<Vec<ProjectRecord>> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr
        .headers()
        .map_err(|_| Error::EmptyFile)?
        .iter()
        .map(|h| h.to_string())
        .collect::<Vec<_>>();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyFile);
    }

    let column_index = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let attr_cols: Vec<usize> = schema
        .attributes
        .iter()
        .map(|a| column_index(a))
        .collect::<Result<_>>()?;
    let effort_col = column_index(&schema.effort_column)?;

    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let data_row = i + 1;
        let parse = |col: usize, name: &str| -> Result<f64> {
            let raw = row.get(col).unwrap_or("");
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::NonNumericCell {
                    row: data_row,
                    column: name.to_string(),
                    value: raw.to_string(),
                }),
            }
        };

        let mut attributes = BTreeMap::new();
        for (col, name) in attr_cols.iter().zip(&schema.attributes) {
            attributes.insert(name.clone(), parse(*col, name)?);
        }
        let actual_effort = parse(effort_col, &schema.effort_column)?;
        if actual_effort <= 0.0 {
            return Err(Error::NonPositiveEffort {
                row: data_row,
                value: actual_effort,
            });
        }
        records.push(ProjectRecord {
            index: i,
            attributes,
            actual_effort,
        });
    }

    if records.is_empty() {
        return Err(Error::EmptyFile);
    }
    Ok(records)
}

pub fn load_csv(path: impl AsRef<Path>, schema: &DatasetSchema) -> Result<Vec<ProjectRecord>> {
    load_csv_reader(std::fs::File::open(path)?, schema)
}

/// Writes records in schema column order. Reals are rendered with the
/// shortest decimal form that parses back to the same value, so a
/// write/load round trip is exact.
pub fn write_csv_writer(
    writer: impl Write,
    schema: &DatasetSchema,
    records: &[ProjectRecord],
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = schema.attributes.iter().map(|s| s.as_str()).collect();
    header.push(&schema.effort_column);
    wtr.write_record(&header)?;
    for record in records {
        let mut row: Vec<String> = Vec::with_capacity(header.len());
        for name in &schema.attributes {
            row.push(record.attribute(name)?.to_string());
        }
        row.push(record.actual_effort.to_string());
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_csv(
    path: impl AsRef<Path>,
    schema: &DatasetSchema,
    records: &[ProjectRecord],
) -> Result<()> {
    write_csv_writer(std::fs::File::create(path)?, schema, records)
}

/// Descriptor for the synthetic effort function.
///
/// Each attribute is drawn uniformly from `range`. With `z_j` the attribute
/// value rescaled to `[0, 1]` and `w_j` the weight of the j-th schema
/// attribute (default `j + 1`), the effort of a record is
///
/// ```text
/// effort = (base + sum_j w_j * z_j) * (1 + noise * eta),   eta ~ U[-1, 1]
/// ```
///
/// which is monotone in every attribute and strictly positive whenever
/// `base > 0`, the weights are non-negative and `noise < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffortModel {
    pub base: f64,
    /// Per-attribute weights in schema order; empty means `w_j = j + 1`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<f64>,
    /// Relative noise amplitude, in `[0, 1)`.
    pub noise: f64,
    /// Uniform sampling range shared by every attribute.
    pub range: (f64, f64),
}

impl Default for EffortModel {
    fn default() -> Self {
        EffortModel {
            base: 10.0,
            weights: Vec::new(),
            noise: 0.05,
            range: (0.0, 100.0),
        }
    }
}

impl EffortModel {
    fn validate(&self, num_attributes: usize) -> Result<()> {
        let bad = |msg: String| Error::Schema(msg);
        if self.base.is_nan() || self.base <= 0.0 {
            return Err(bad(format!("effort model base must be > 0, got {}", self.base)));
        }
        if !(0.0..1.0).contains(&self.noise) {
            return Err(bad(format!(
                "effort model noise must be in [0, 1), got {}",
                self.noise
            )));
        }
        if !self.weights.is_empty() && self.weights.len() != num_attributes {
            return Err(bad(format!(
                "effort model has {} weights for {} attributes",
                self.weights.len(),
                num_attributes
            )));
        }
        if self.weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(bad("effort model weights must be >= 0".into()));
        }
        if !(self.range.0.is_finite() && self.range.1.is_finite() && self.range.0 < self.range.1) {
            return Err(bad(format!(
                "effort model range [{}, {}] is not a valid interval",
                self.range.0, self.range.1
            )));
        }
        Ok(())
    }

    fn weight(&self, j: usize) -> f64 {
        if self.weights.is_empty() {
            (j + 1) as f64
        } else {
            self.weights[j]
        }
    }

    /// The noise-free effort of an attribute row, in schema order.
    pub fn noiseless_effort(&self, values: &[f64]) -> f64 {
        let (lo, hi) = self.range;
        let mut effort = self.base;
        for (j, &x) in values.iter().enumerate() {
            effort += self.weight(j) * (x - lo) / (hi - lo);
        }
        effort
    }
}

/// Generates `n` reproducible records. The ChaCha8 stream is consumed in a
/// fixed documented order: for each record, one uniform draw per attribute
/// in schema order, then one noise draw (made even when `noise` is zero, so
/// attribute values do not depend on the noise setting).
pub fn generate_synthetic(
    schema: &DatasetSchema,
    n: usize,
    seed: u64,
    model: &EffortModel,
) -> Result<Vec<ProjectRecord>> {
    schema.validate()?;
    model.validate(schema.attributes.len())?;
    if n < 2 {
        return Err(Error::GeneratorTooSmall(n));
    }

    let (lo, hi) = model.range;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(n);
    for i in 0..n {
        let values: Vec<f64> = (0..schema.attributes.len())
            .map(|_| rng.gen_range(lo..=hi))
            .collect();
        let eta: f64 = rng.gen_range(-1.0..=1.0);
        let effort = model.noiseless_effort(&values) * (1.0 + model.noise * eta);
        let attributes = schema
            .attributes
            .iter()
            .cloned()
            .zip(values.iter().copied())
            .collect();
        records.push(ProjectRecord {
            index: i,
            attributes,
            actual_effort: effort,
        });
    }
    Ok(records)
}

/// Builds one uniform partition per non-constant attribute, in schema order,
/// sized by the schema override or `default_sets`. Constant attributes are
/// dropped with a warning: a degenerate domain cannot be partitioned.
pub fn build_partitions(
    records: &[ProjectRecord],
    schema: &DatasetSchema,
    default_sets: usize,
) -> Result<Vec<FuzzyPartition>> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut partitions = Vec::new();
    for name in &schema.attributes {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for record in records {
            let v = record.attribute(name)?;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let sets = schema.set_counts.get(name).copied().unwrap_or(default_sets);
        match FuzzyPartition::uniform(name.clone(), lo, hi, sets) {
            Ok(p) => partitions.push(p),
            Err(Error::ConstantVariable(v)) => {
                warn!("dropping constant attribute '{v}'");
            }
            Err(e) => return Err(e),
        }
    }
    Ok(partitions)
}

/// Actual efforts in record order.
pub fn efforts(records: &[ProjectRecord]) -> Vec<f64> {
    records.iter().map(|r| r.actual_effort).collect()
}
