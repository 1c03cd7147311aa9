//! Prediction: compute each leaf's firing strength for an input, then
//! defuzzify to a single effort by averaging leaf representatives weighted
//! by strength.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::tree::{FuzzyTree, TreeNode};

/// One leaf reached by an input, with the t-norm accumulation of the
/// input's memberships along the leaf's path.
#[derive(Debug, Clone, PartialEq)]
pub struct FiringAssignment {
    pub leaf_id: usize,
    pub strength: f64,
}

fn check_inputs(tree: &FuzzyTree, x: &BTreeMap<String, f64>) -> Result<()> {
    let mut missing: Option<&str> = None;
    tree.walk(|_, node| {
        if let TreeNode::Internal { variable, .. } = node {
            let name = tree.partitions[*variable].variable_name();
            if missing.is_none() && !x.contains_key(name) {
                missing = Some(name);
            }
        }
    });
    match missing {
        Some(name) => Err(Error::MissingInput(name.to_string())),
        None => Ok(()),
    }
}

fn fire_into<'t>(
    tree: &'t FuzzyTree,
    node: &'t TreeNode,
    x: &BTreeMap<String, f64>,
    strength: f64,
    out: &mut Vec<(&'t TreeNode, f64)>,
) {
    match node {
        TreeNode::Leaf { .. } => {
            if strength > 0.0 {
                out.push((node, strength));
            }
        }
        TreeNode::Internal {
            variable, children, ..
        } => {
            let partition = &tree.partitions[*variable];
            let value = x[partition.variable_name()];
            if tree.crisp {
                let l = partition.crisp_assignment(value);
                fire_into(tree, &children[l], x, strength, out);
            } else {
                for (l, child) in children.iter().enumerate() {
                    let s = tree.tnorm.combine(strength, partition.membership(l, value));
                    if s > 0.0 {
                        fire_into(tree, child, x, s, out);
                    }
                }
            }
        }
    }
}

fn fire_leaves<'t>(
    tree: &'t FuzzyTree,
    x: &BTreeMap<String, f64>,
) -> Result<Vec<(&'t TreeNode, f64)>> {
    check_inputs(tree, x)?;
    let mut out = Vec::new();
    fire_into(tree, &tree.root, x, 1.0, &mut out);
    Ok(out)
}

/// Firing strength of every leaf the input reaches; zero-strength leaves
/// are omitted. Crisp trees assign the input to its maximum-membership set
/// at each split, so exactly one leaf fires with strength 1.
pub fn fire(tree: &FuzzyTree, x: &BTreeMap<String, f64>) -> Result<Vec<FiringAssignment>> {
    Ok(fire_leaves(tree, x)?
        .into_iter()
        .map(|(leaf, strength)| match leaf {
            TreeNode::Leaf { id, .. } => FiringAssignment {
                leaf_id: *id,
                strength,
            },
            TreeNode::Internal { .. } => unreachable!("fire_into only yields leaves"),
        })
        .collect())
}

/// Strength-weighted average of leaf representative efforts. If no leaf
/// fires (possible only with pathological custom partitions) the
/// training-set mean stored in the tree is returned.
pub fn predict(tree: &FuzzyTree, x: &BTreeMap<String, f64>) -> Result<f64> {
    let fired = fire_leaves(tree, x)?;
    let mut mass = 0.0;
    let mut weighted = 0.0;
    for (leaf, strength) in fired {
        if let TreeNode::Leaf {
            representative_effort,
            ..
        } = leaf
        {
            mass += strength;
            weighted += strength * representative_effort;
        }
    }
    if mass > 0.0 {
        Ok(weighted / mass)
    } else {
        Ok(tree.fallback_effort)
    }
}

/// Batch prediction over a CSV of attributes: reads rows, appends a
/// `predicted_effort` column, passes every input column through untouched.
/// Returns the number of rows predicted.
pub fn predict_csv(tree: &FuzzyTree, input: impl Read, output: impl Write) -> Result<usize> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|_| Error::EmptyFile)?
        .iter()
        .map(|h| h.to_string())
        .collect();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyFile);
    }

    let mut columns = Vec::new();
    for p in &tree.partitions {
        let name = p.variable_name();
        let idx = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))?;
        columns.push((name.to_string(), idx));
    }

    let mut wtr = csv::Writer::from_writer(output);
    let mut out_header = headers.clone();
    out_header.push("predicted_effort".to_string());
    wtr.write_record(&out_header)?;

    let mut count = 0;
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let mut x = BTreeMap::new();
        for (name, idx) in &columns {
            let raw = row.get(*idx).unwrap_or("");
            let value = match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => v,
                _ => {
                    return Err(Error::NonNumericCell {
                        row: i + 1,
                        column: name.clone(),
                        value: raw.to_string(),
                    })
                }
            };
            x.insert(name.clone(), value);
        }
        let estimated = predict(tree, &x)?;
        let mut out_row: Vec<String> = row.iter().map(|f| f.to_string()).collect();
        out_row.push(estimated.to_string());
        wtr.write_record(&out_row)?;
        count += 1;
    }
    wtr.flush()?;
    if count == 0 {
        return Err(Error::EmptyFile);
    }
    Ok(count)
}
