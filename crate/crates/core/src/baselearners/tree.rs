//! Least-squares regression stumps and small best-first trees.

use crate::datamodel::DesignMatrix;
use crate::error::{Error, Result};

use super::linear::check_response;

/// Minimum observations per leaf for [`fit_tree`].
pub const DEFAULT_MIN_LEAF: usize = 5;
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

/// A fitted regression tree. Observations with `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeFit {
    pub nodes: Vec<TreeNode>,
    pub n_leaves: usize,
    pub fitted: Vec<f64>,
}

impl TreeFit {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.predict_with(|j| row[j])
    }

    pub fn predict(&self, x: &DesignMatrix) -> Vec<f64> {
        (0..x.n())
            .map(|i| self.predict_with(|j| x.get(i, j)))
            .collect()
    }

    fn predict_with(&self, value: impl Fn(usize) -> f64) -> f64 {
        let mut node = 0;
        loop {
            match self.nodes[node] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if value(feature) <= threshold {
                        left
                    } else {
                        right
                    };
                }
                TreeNode::Leaf { value } => return value,
            }
        }
    }

    /// Feature of the root split.
    pub fn root_feature(&self) -> Option<usize> {
        match self.nodes.first() {
            Some(TreeNode::Split { feature, .. }) => Some(*feature),
            _ => None,
        }
    }

    pub fn sse(&self, r: &[f64]) -> f64 {
        r.iter()
            .zip(&self.fitted)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// Growth limits for [`fit_tree_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub max_leaves: usize,
    pub min_leaf: usize,
}

#[derive(Debug, Clone, Copy)]
struct Split {
    feature: usize,
    threshold: f64,
    gain: f64,
}

struct Leaf {
    node: usize,
    members: Vec<usize>,
    best: Option<Split>,
}

/// Best split of `members`: largest SSE decrease, ties to the lowest
/// feature and then the smallest threshold.
fn best_split(
    x: &DesignMatrix,
    r: &[f64],
    members: &[usize],
    in_leaf: &[bool],
    min_leaf: usize,
) -> Option<Split> {
    let m = members.len();
    if m < 2 * min_leaf.max(1) {
        return None;
    }
    let total: f64 = members.iter().map(|&i| r[i]).sum();
    let mut best: Option<Split> = None;
    let mut ordered = Vec::with_capacity(m);
    for j in 0..x.p() {
        let col = x.column(j);
        ordered.clear();
        ordered.extend(x.sort_order(j).iter().copied().filter(|&i| in_leaf[i]));
        let mut left_sum = 0.0;
        for k in 0..m - 1 {
            let i = ordered[k];
            left_sum += r[i];
            let n_left = k + 1;
            let n_right = m - n_left;
            if n_left < min_leaf || n_right < min_leaf {
                continue;
            }
            let (a, b) = (col[i], col[ordered[k + 1]]);
            if a == b {
                continue;
            }
            let mean_l = left_sum / n_left as f64;
            let mean_r = (total - left_sum) / n_right as f64;
            let gain = (n_left * n_right) as f64 / m as f64 * (mean_l - mean_r).powi(2);
            if best.is_none_or(|s| gain > s.gain) {
                best = Some(Split {
                    feature: j,
                    threshold: 0.5 * (a + b),
                    gain,
                });
            }
        }
    }
    best
}

/// Best-first growth: always split the leaf with the largest SSE decrease.
/// The first split is taken whenever one exists; later splits need a
/// decrease above `1e-12`.
pub fn fit_tree_with(x: &DesignMatrix, r: &[f64], params: TreeParams) -> Result<TreeFit> {
    check_response(x, r)?;
    if params.max_leaves < 2 {
        return Err(Error::InvalidInput(format!(
            "max_leaves must be >= 2, got {}",
            params.max_leaves
        )));
    }
    let n = x.n();
    let mut in_leaf = vec![false; n];
    let mut split_for = |members: &[usize]| {
        members.iter().for_each(|&i| in_leaf[i] = true);
        let s = best_split(x, r, members, &in_leaf, params.min_leaf);
        members.iter().for_each(|&i| in_leaf[i] = false);
        s
    };

    let root_members: Vec<usize> = (0..n).collect();
    let root_best = split_for(&root_members);
    if root_best.is_none() {
        return Err(Error::NoValidSplit);
    }
    let mut nodes = vec![TreeNode::Leaf { value: 0.0 }];
    let mut leaves = vec![Leaf {
        node: 0,
        members: root_members,
        best: root_best,
    }];

    while leaves.len() < params.max_leaves {
        let candidate = leaves
            .iter()
            .enumerate()
            .filter_map(|(k, l)| l.best.map(|s| (k, s)))
            .fold(None::<(usize, Split)>, |acc, (k, s)| match acc {
                Some((_, b)) if s.gain <= b.gain => acc,
                _ => Some((k, s)),
            });
        let Some((k, split)) = candidate else { break };
        if nodes.len() > 1 && split.gain <= MIN_GAIN {
            break;
        }
        let leaf = leaves.swap_remove(k);
        let col = x.column(split.feature);
        let (left, right): (Vec<usize>, Vec<usize>) = leaf
            .members
            .iter()
            .partition(|&&i| col[i] <= split.threshold);
        let (li, ri) = (nodes.len(), nodes.len() + 1);
        nodes[leaf.node] = TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: li,
            right: ri,
        };
        nodes.push(TreeNode::Leaf { value: 0.0 });
        nodes.push(TreeNode::Leaf { value: 0.0 });
        let lb = split_for(&left);
        let rb = split_for(&right);
        leaves.push(Leaf {
            node: li,
            members: left,
            best: lb,
        });
        leaves.push(Leaf {
            node: ri,
            members: right,
            best: rb,
        });
    }

    let mut fitted = vec![0.0; n];
    for leaf in &leaves {
        let value = leaf.members.iter().map(|&i| r[i]).sum::<f64>() / leaf.members.len() as f64;
        nodes[leaf.node] = TreeNode::Leaf { value };
        for &i in &leaf.members {
            fitted[i] = value;
        }
    }
    Ok(TreeFit {
        nodes,
        n_leaves: leaves.len(),
        fitted,
    })
}

/// Exhaustive two-leaf split search (no leaf-size constraint beyond one observation).
pub fn fit_stump(x: &DesignMatrix, r: &[f64]) -> Result<TreeFit> {
    fit_tree_with(
        x,
        r,
        TreeParams {
            max_leaves: 2,
            min_leaf: 1,
        },
    )
}

/// Best-first tree with at most `max_leaves` leaves and at least
/// [`DEFAULT_MIN_LEAF`] observations per leaf.
pub fn fit_tree(x: &DesignMatrix, r: &[f64], max_leaves: usize) -> Result<TreeFit> {
    fit_tree_with(
        x,
        r,
        TreeParams {
            max_leaves,
            min_leaf: DEFAULT_MIN_LEAF,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datamodel::{sample_uniform_design, UniformDesignSpec};

    fn uniform(n: usize, p: usize, seed: u64) -> DesignMatrix {
        sample_uniform_design(&UniformDesignSpec { n, p, seed }).unwrap()
    }

    #[test]
    fn stump_recovers_step() {
        let x = uniform(40, 3, 8);
        let r: Vec<f64> = x
            .column(1)
            .iter()
            .map(|&v| if v <= 0.5 { -1.0 } else { 2.0 })
            .collect();
        let t = fit_stump(&x, &r).unwrap();
        assert_eq!(t.n_leaves, 2);
        let TreeNode::Split {
            feature, threshold, ..
        } = t.nodes[0]
        else {
            panic!()
        };
        assert_eq!(feature, 1);
        let below = x
            .column(1)
            .iter()
            .copied()
            .filter(|&v| v <= 0.5)
            .fold(f64::MIN, f64::max);
        let above = x
            .column(1)
            .iter()
            .copied()
            .filter(|&v| v > 0.5)
            .fold(f64::MAX, f64::min);
        assert!(threshold > below && threshold < above);
        assert_eq!(t.sse(&r), 0.0);
    }

    #[test]
    fn stump_on_constant_response() {
        let x = uniform(10, 2, 1);
        let t = fit_stump(&x, &[3.5; 10]).unwrap();
        assert!(t.fitted.iter().all(|&v| v == 3.5));
        assert_eq!(t.sse(&[3.5; 10]), 0.0);
        // tie-break: first column, smallest threshold
        let TreeNode::Split {
            feature, threshold, ..
        } = t.nodes[0]
        else {
            panic!()
        };
        assert_eq!(feature, 0);
        let s = x.sort_order(0);
        assert_eq!(threshold, 0.5 * (x.column(0)[s[0]] + x.column(0)[s[1]]));
    }

    #[test]
    fn tree_stops_at_plateaus() {
        let x = uniform(60, 3, 21);
        let r: Vec<f64> = x
            .column(0)
            .iter()
            .map(|&v| (v * 4.0).floor().min(3.0) * 1.5)
            .collect();
        let t = fit_tree(&x, &r, 8).unwrap();
        assert_eq!(t.sse(&r), 0.0);
        assert_eq!(t.n_leaves, 4);
    }

    #[test]
    fn leaves_respect_min_size_and_hold_means() {
        let x = uniform(50, 4, 5);
        let r: Vec<f64> = (0..50).map(|i| ((i * 13) % 7) as f64 - 3.0).collect();
        let t = fit_tree(&x, &r, 8).unwrap();
        assert!(t.n_leaves >= 2 && t.n_leaves <= 8);
        let mut groups: std::collections::BTreeMap<u64, Vec<usize>> = Default::default();
        for (i, f) in t.fitted.iter().enumerate() {
            groups.entry(f.to_bits()).or_default().push(i);
        }
        for (bits, members) in groups {
            let mean = members.iter().map(|&i| r[i]).sum::<f64>() / members.len() as f64;
            assert!((mean - f64::from_bits(bits)).abs() < 1e-12);
            assert!(members.len() >= DEFAULT_MIN_LEAF);
        }
        for i in 0..50 {
            assert_eq!(t.predict_row(&x.row(i)), t.fitted[i]);
        }
    }

    #[test]
    fn deeper_trees_never_increase_sse() {
        let x = uniform(40, 3, 77);
        let r: Vec<f64> = (0..40).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut prev = f64::INFINITY;
        for leaves in 2..10 {
            let sse = fit_tree(&x, &r, leaves).unwrap().sse(&r);
            assert!(sse <= prev + 1e-12);
            prev = sse;
        }
        let stump = fit_stump(&x, &r).unwrap().sse(&r);
        assert!(fit_tree(&x, &r, 4).unwrap().sse(&r) <= stump + 1e-12);
    }

    #[test]
    fn unconstrained_two_leaf_tree_is_the_stump() {
        let x = uniform(30, 4, 12);
        let r: Vec<f64> = (0..30).map(|i| ((i * 5) % 9) as f64).collect();
        let stump = fit_stump(&x, &r).unwrap();
        let tree = fit_tree_with(
            &x,
            &r,
            TreeParams {
                max_leaves: 2,
                min_leaf: 1,
            },
        )
        .unwrap();
        assert_eq!(stump, tree);
    }

    #[test]
    fn no_valid_split() {
        let x = DesignMatrix::from_columns(vec![vec![1.0; 6], vec![0.0; 6]]).unwrap();
        assert_eq!(
            fit_stump(&x, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
            Err(Error::NoValidSplit)
        );
        let small = uniform(8, 2, 0);
        assert_eq!(fit_tree(&small, &[0.0; 8], 4), Err(Error::NoValidSplit));
    }
}
