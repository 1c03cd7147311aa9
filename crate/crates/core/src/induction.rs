//! Fuzzy ID3 induction: membership-weighted class proportions, fuzzy
//! entropy, information gain, and the tree-growth procedure, plus the crisp
//! ID3 baseline obtained by snapping every membership to 0/1.

use log::debug;
use serde::{Deserialize, Serialize};

use crate::data::ProjectRecord;
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyPartition, TNorm};
use crate::tree::{FuzzyTree, PathStep, TreeNode, MODEL_FORMAT, MODEL_VERSION};

/// Entropy at or below this is treated as a pure node.
pub const PURITY_EPSILON: f64 = 1e-12;

/// One example as seen from a node: its membership at the node and its
/// membership in each output class.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedExample {
    pub record_index: usize,
    pub node_membership: f64,
    pub class_memberships: Vec<f64>,
}

/// Membership-weighted class proportions and fuzzy entropy of one node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeStatistics {
    /// Class proportions; uniform when the node is empty.
    pub proportions: Vec<f64>,
    /// Base-2 fuzzy entropy of `proportions`.
    pub entropy: f64,
    /// Sum of node memberships over retained examples.
    pub total_weight: f64,
    /// Examples surviving the significance filter at this node.
    pub retained: usize,
    /// True when the class mass was zero, i.e. no example effectively
    /// reached the node.
    pub empty: bool,
}

/// Parameters of one induction run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InductionConfig {
    pub tnorm: TNorm,
    /// Significance level: examples with node membership below it are
    /// removed from the node and its whole subtree.
    pub beta: f64,
    /// Nodes lighter than this become leaves.
    pub min_node_weight: f64,
    pub num_output_classes: usize,
    /// Fuzzy sets per input variable unless overridden by the schema.
    pub default_num_sets: usize,
}

impl Default for InductionConfig {
    fn default() -> Self {
        InductionConfig {
            tnorm: TNorm::Product,
            beta: 0.1,
            min_node_weight: 1e-6,
            num_output_classes: 5,
            default_num_sets: 7,
        }
    }
}

impl InductionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidBeta(self.beta));
        }
        if self.min_node_weight.is_nan() || self.min_node_weight <= 0.0 {
            return Err(Error::InvalidMinNodeWeight(self.min_node_weight));
        }
        if !(2..=7).contains(&self.num_output_classes) {
            return Err(Error::InvalidClassCount(self.num_output_classes));
        }
        if !(2..=7).contains(&self.default_num_sets) {
            return Err(Error::InvalidSetCount(self.default_num_sets));
        }
        Ok(())
    }
}

/// Membership-weighted proportion of each class among `examples`: p_k is
/// the t-norm conjunction of class and node memberships summed over
/// examples, normalized over classes. Returns the uniform vector and an
/// `empty` flag when the total class mass is zero.
pub fn class_proportions(
    examples: &[WeightedExample],
    tnorm: TNorm,
    num_classes: usize,
) -> (Vec<f64>, bool) {
    let mut numerators = vec![0.0f64; num_classes];
    for (k, numerator) in numerators.iter_mut().enumerate() {
        for ex in examples {
            *numerator += tnorm.combine(ex.class_memberships[k], ex.node_membership);
        }
    }
    let denominator: f64 = numerators.iter().sum();
    if denominator == 0.0 {
        return (vec![1.0 / num_classes as f64; num_classes], true);
    }
    (numerators.iter().map(|n| n / denominator).collect(), false)
}

/// Base-2 entropy with the `0 log 0 = 0` limit convention.
pub fn fuzzy_entropy(proportions: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in proportions {
        debug_assert!((0.0..=1.0 + 1e-9).contains(&p));
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// Full statistics of a node from its retained examples.
pub fn node_statistics(
    examples: &[WeightedExample],
    tnorm: TNorm,
    num_classes: usize,
) -> NodeStatistics {
    let (proportions, empty) = class_proportions(examples, tnorm, num_classes);
    let entropy = fuzzy_entropy(&proportions);
    let total_weight = examples.iter().map(|e| e.node_membership).sum();
    NodeStatistics {
        proportions,
        entropy,
        total_weight,
        retained: examples.len(),
        empty,
    }
}

/// Information gain of a candidate split: parent entropy minus the
/// weight-normalized child entropies. Children with zero weight contribute
/// nothing; if every child has zero weight the gain is zero.
pub fn information_gain(node: &NodeStatistics, children: &[NodeStatistics]) -> f64 {
    let total: f64 = children.iter().map(|c| c.total_weight).sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut weighted = 0.0;
    for child in children {
        if child.total_weight > 0.0 {
            weighted += child.total_weight / total * child.entropy;
        }
    }
    node.entropy - weighted
}

/// Grows a fuzzy ID3 tree.
///
/// The root holds every record with membership 1. A child's membership is
/// the t-norm of its parent's membership and the record's degree in the
/// child's fuzzy set. At every node, examples below the significance level
/// are removed from the node and its whole subtree; the node then splits on
/// the unused variable with the highest information gain (ties to the lowest
/// variable index) until a stopping rule fires: all variables used, pure
/// node, weight below `min_node_weight`, or no retained examples. Leaves
/// predict their membership-weighted mean effort; empty leaves inherit their
/// parent's.
pub fn grow_fuzzy_tree(
    records: &[ProjectRecord],
    partitions: &[FuzzyPartition],
    output_partition: &FuzzyPartition,
    cfg: &InductionConfig,
) -> Result<FuzzyTree> {
    grow(records, partitions, output_partition, cfg, false)
}

/// Grows the crisp ID3 baseline: every record is assigned to its
/// maximum-membership fuzzy set per variable and output class (ties to the
/// lower index), turning all memberships into 0/1 indicators, then the
/// identical growth procedure runs. Leaf representatives reduce to the plain
/// mean effort of the examples at the leaf.
pub fn grow_crisp_tree(
    records: &[ProjectRecord],
    partitions: &[FuzzyPartition],
    output_partition: &FuzzyPartition,
    cfg: &InductionConfig,
) -> Result<FuzzyTree> {
    grow(records, partitions, output_partition, cfg, true)
}

fn grow(
    records: &[ProjectRecord],
    partitions: &[FuzzyPartition],
    output_partition: &FuzzyPartition,
    cfg: &InductionConfig,
    crisp: bool,
) -> Result<FuzzyTree> {
    cfg.validate()?;
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if partitions.is_empty() {
        return Err(Error::Schema(
            "no partitions: dataset has no usable split variables".into(),
        ));
    }
    {
        let mut names = std::collections::BTreeSet::new();
        for p in partitions {
            p.validate()?;
            if !names.insert(p.variable_name()) {
                return Err(Error::Schema(format!(
                    "duplicate partition for variable '{}'",
                    p.variable_name()
                )));
            }
        }
    }
    output_partition.validate()?;

    // Membership tables: memberships[j][l][i] is record i's degree in set l
    // of variable j; class_memberships[i][k] its degree in output class k.
    let num_classes = output_partition.len();
    let mut memberships = Vec::with_capacity(partitions.len());
    for partition in partitions {
        let mut per_set = vec![Vec::with_capacity(records.len()); partition.len()];
        for record in records {
            let x = record.attribute(partition.variable_name())?;
            if crisp {
                let best = partition.crisp_assignment(x);
                for (l, column) in per_set.iter_mut().enumerate() {
                    column.push(if l == best { 1.0 } else { 0.0 });
                }
            } else {
                for (l, column) in per_set.iter_mut().enumerate() {
                    column.push(partition.membership(l, x));
                }
            }
        }
        memberships.push(per_set);
    }
    let class_memberships: Vec<Vec<f64>> = records
        .iter()
        .map(|record| {
            let y = record.actual_effort;
            if crisp {
                let best = output_partition.crisp_assignment(y);
                (0..num_classes)
                    .map(|k| if k == best { 1.0 } else { 0.0 })
                    .collect()
            } else {
                output_partition.memberships(y)
            }
        })
        .collect();

    let efforts: Vec<f64> = records.iter().map(|r| r.actual_effort).collect();
    let mut effort_range = (f64::INFINITY, f64::NEG_INFINITY);
    for &e in &efforts {
        effort_range.0 = effort_range.0.min(e);
        effort_range.1 = effort_range.1.max(e);
    }
    let fallback_effort = efforts.iter().sum::<f64>() / efforts.len() as f64;

    let mut grower = Grower {
        memberships: &memberships,
        class_memberships: &class_memberships,
        efforts: &efforts,
        partitions,
        cfg,
        num_classes,
        next_leaf_id: 0,
    };
    let root_examples: Vec<(usize, f64)> = (0..records.len()).map(|i| (i, 1.0)).collect();
    let mut used = vec![false; partitions.len()];
    let mut path = Vec::new();
    let root = grower.grow_node(&root_examples, &mut used, &mut path, fallback_effort);

    Ok(FuzzyTree {
        format: MODEL_FORMAT.to_string(),
        version: MODEL_VERSION,
        tnorm: cfg.tnorm,
        beta: cfg.beta,
        min_node_weight: cfg.min_node_weight,
        crisp,
        partitions: partitions.to_vec(),
        output_partition: output_partition.clone(),
        class_representatives: output_partition.peaks(),
        effort_range,
        fallback_effort,
        root,
    })
}

struct Grower<'a> {
    memberships: &'a [Vec<Vec<f64>>],
    class_memberships: &'a [Vec<f64>],
    efforts: &'a [f64],
    partitions: &'a [FuzzyPartition],
    cfg: &'a InductionConfig,
    num_classes: usize,
    next_leaf_id: usize,
}

impl Grower<'_> {
    /// Statistics over (record, membership) pairs; same arithmetic as
    /// [`class_proportions`] without materializing `WeightedExample`s.
    fn stats(&self, retained: &[(usize, f64)]) -> NodeStatistics {
        let tnorm = self.cfg.tnorm;
        let mut numerators = vec![0.0f64; self.num_classes];
        for (k, numerator) in numerators.iter_mut().enumerate() {
            for &(i, u_node) in retained {
                *numerator += tnorm.combine(self.class_memberships[i][k], u_node);
            }
        }
        let denominator: f64 = numerators.iter().sum();
        let (proportions, empty) = if denominator == 0.0 {
            (vec![1.0 / self.num_classes as f64; self.num_classes], true)
        } else {
            (numerators.iter().map(|n| n / denominator).collect(), false)
        };
        let entropy = fuzzy_entropy(&proportions);
        let total_weight = retained.iter().map(|&(_, u)| u).sum();
        NodeStatistics {
            proportions,
            entropy,
            total_weight,
            retained: retained.len(),
            empty,
        }
    }

    /// Membership-weighted mean effort of the retained examples.
    fn representative(&self, retained: &[(usize, f64)]) -> Option<f64> {
        let mut mass = 0.0;
        let mut weighted = 0.0;
        for &(i, u) in retained {
            mass += u;
            weighted += u * self.efforts[i];
        }
        (mass > 0.0).then(|| weighted / mass)
    }

    fn child_examples(
        &self,
        retained: &[(usize, f64)],
        variable: usize,
        set: usize,
    ) -> Vec<(usize, f64)> {
        let beta = self.cfg.beta;
        let degrees = &self.memberships[variable][set];
        retained
            .iter()
            .map(|&(i, u)| (i, self.cfg.tnorm.combine(u, degrees[i])))
            .filter(|&(_, u)| u >= beta)
            .collect()
    }

    fn leaf(&mut self, stats: NodeStatistics, representative: f64, path: &[PathStep]) -> TreeNode {
        let id = self.next_leaf_id;
        self.next_leaf_id += 1;
        TreeNode::Leaf {
            id,
            stats,
            representative_effort: representative,
            path: path.to_vec(),
        }
    }

    fn grow_node(
        &mut self,
        examples: &[(usize, f64)],
        used: &mut [bool],
        path: &mut Vec<PathStep>,
        parent_representative: f64,
    ) -> TreeNode {
        let beta = self.cfg.beta;
        let retained: Vec<(usize, f64)> = examples
            .iter()
            .copied()
            .filter(|&(_, u)| u >= beta)
            .collect();
        let stats = self.stats(&retained);

        let representative = match self.representative(&retained) {
            Some(r) => r,
            // zero mass: nothing effectively reaches this node
            None => return self.leaf(stats, parent_representative, path),
        };
        if stats.empty
            || stats.total_weight < self.cfg.min_node_weight
            || stats.entropy <= PURITY_EPSILON
            || used.iter().all(|&u| u)
        {
            return self.leaf(stats, representative, path);
        }

        // Split on the unused variable with the highest gain; ties break to
        // the lowest index by scanning in order with a strict comparison.
        let mut best: Option<(usize, f64)> = None;
        for (j, &in_use) in used.iter().enumerate() {
            if in_use {
                continue;
            }
            let child_stats: Vec<NodeStatistics> = (0..self.partitions[j].len())
                .map(|l| self.stats(&self.child_examples(&retained, j, l)))
                .collect();
            let gain = information_gain(&stats, &child_stats);
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((j, gain));
            }
        }
        let (variable, gain) = best.expect("at least one unused variable");
        if gain < 0.0 {
            debug!(
                "negative information gain {gain:.6} splitting on '{}' at depth {}",
                self.partitions[variable].variable_name(),
                path.len()
            );
        }

        used[variable] = true;
        let children: Vec<TreeNode> = (0..self.partitions[variable].len())
            .map(|set| {
                let child = self.child_examples(&retained, variable, set);
                path.push(PathStep { variable, set });
                let node = self.grow_node(&child, used, path, representative);
                path.pop();
                node
            })
            .collect();
        used[variable] = false;

        TreeNode::Internal {
            variable,
            stats,
            children,
        }
    }
}
