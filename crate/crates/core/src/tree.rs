//! The learned tree: internal nodes split on a variable's fuzzy sets, leaves
//! carry class statistics and a representative effort. Includes the JSON
//! model-file format.
//!
//! Model files are serialized with a stable field order and full-precision
//! reals (shortest decimal form that parses back to the identical value), so
//! identical trees produce byte-identical files and a save/load round trip
//! is exact.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyPartition, TNorm};
use crate::induction::NodeStatistics;

pub const MODEL_FORMAT: &str = "fuzzy-id3-model";
pub const MODEL_VERSION: u32 = 1;

/// One split step on a root-to-leaf path: which variable, which fuzzy set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub variable: usize,
    pub set: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        variable: usize,
        stats: NodeStatistics,
        /// One child per fuzzy set of the split variable, in set order.
        children: Vec<TreeNode>,
    },
    Leaf {
        id: usize,
        stats: NodeStatistics,
        representative_effort: f64,
        path: Vec<PathStep>,
    },
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    pub fn stats(&self) -> &NodeStatistics {
        match self {
            TreeNode::Internal { stats, .. } | TreeNode::Leaf { stats, .. } => stats,
        }
    }
}

/// A grown fuzzy (or crisp) ID3 tree plus the configuration snapshot needed
/// to run and reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyTree {
    pub format: String,
    pub version: u32,
    pub tnorm: TNorm,
    pub beta: f64,
    pub min_node_weight: f64,
    /// Crisp trees assign every value to its maximum-membership set, both
    /// while growing and at inference.
    pub crisp: bool,
    pub partitions: Vec<FuzzyPartition>,
    pub output_partition: FuzzyPartition,
    /// Representative effort of each output class (the class peaks).
    pub class_representatives: Vec<f64>,
    /// Min/max actual effort seen while training.
    pub effort_range: (f64, f64),
    /// Training-set mean effort; the prediction of last resort.
    pub fallback_effort: f64,
    pub root: TreeNode,
}

impl FuzzyTree {
    pub fn variable_names(&self) -> Vec<&str> {
        self.partitions.iter().map(|p| p.variable_name()).collect()
    }

    /// Visits every node, passing the (variable, set) path from the root.
    pub fn walk<F: FnMut(&[PathStep], &TreeNode)>(&self, mut visit: F) {
        fn go<F: FnMut(&[PathStep], &TreeNode)>(
            node: &TreeNode,
            path: &mut Vec<PathStep>,
            visit: &mut F,
        ) {
            visit(path, node);
            if let TreeNode::Internal {
                variable, children, ..
            } = node
            {
                for (set, child) in children.iter().enumerate() {
                    path.push(PathStep {
                        variable: *variable,
                        set,
                    });
                    go(child, path, visit);
                    path.pop();
                }
            }
        }
        go(&self.root, &mut Vec::new(), &mut visit);
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.walk(|_, _| n += 1);
        n
    }

    pub fn leaf_count(&self) -> usize {
        let mut n = 0;
        self.walk(|_, node| {
            if node.is_leaf() {
                n += 1;
            }
        });
        n
    }

    /// Leaves whose class mass was zero (no example reached them).
    pub fn empty_leaf_count(&self) -> usize {
        let mut n = 0;
        self.walk(|_, node| {
            if node.is_leaf() && node.stats().empty {
                n += 1;
            }
        });
        n
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        let mut d = 0;
        self.walk(|path, node| {
            if node.is_leaf() {
                d = d.max(path.len());
            }
        });
        d
    }

    /// How many internal nodes split on each variable, in partition order.
    pub fn variable_usage(&self) -> Vec<(String, usize)> {
        let mut counts = vec![0usize; self.partitions.len()];
        self.walk(|_, node| {
            if let TreeNode::Internal { variable, .. } = node {
                counts[*variable] += 1;
            }
        });
        self.partitions
            .iter()
            .zip(counts)
            .map(|(p, c)| (p.variable_name().to_string(), c))
            .collect()
    }

    /// Serializes to the model-file JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let tree: FuzzyTree =
            serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        tree.validate()?;
        Ok(tree)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Structural checks applied to deserialized models.
    pub fn validate(&self) -> Result<()> {
        if self.format != MODEL_FORMAT {
            return Err(Error::Model(format!(
                "unexpected format '{}', expected '{MODEL_FORMAT}'",
                self.format
            )));
        }
        if self.version != MODEL_VERSION {
            return Err(Error::Model(format!(
                "unsupported model version {}",
                self.version
            )));
        }
        for p in &self.partitions {
            p.validate()?;
        }
        self.output_partition.validate()?;
        if self.class_representatives != self.output_partition.peaks() {
            return Err(Error::Model(
                "class representatives do not match the output partition peaks".into(),
            ));
        }
        let mut ok = true;
        self.walk(|_, node| match node {
            TreeNode::Internal {
                variable, children, ..
            } => {
                if *variable >= self.partitions.len()
                    || children.len() != self.partitions[*variable].len()
                {
                    ok = false;
                }
            }
            TreeNode::Leaf {
                representative_effort,
                ..
            } => {
                if !representative_effort.is_finite() {
                    ok = false;
                }
            }
        });
        if !ok {
            return Err(Error::Model("malformed tree structure".into()));
        }
        Ok(())
    }
}
