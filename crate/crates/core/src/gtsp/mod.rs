//! Generalized TSP: pick one node per cluster and close the cheapest cycle.
//!
//! Instances are reduced to an asymmetric TSP with the Noon–Bean transform and
//! solved either exactly (Held–Karp, small instances only) or by local search.
//! Heuristic tours are then polished in GTSP space: node choices are re-optimized
//! per cluster order, and with few clusters every cyclic order is tried, which
//! makes the result optimal. A brute-force enumerator serves as the oracle.

mod brute;
mod held_karp;
mod heuristic;
mod noon_bean;

use thiserror::Error;

use crate::matrix::Matrix;

pub use brute::{brute_force_gtsp, BRUTE_FORCE_LIMIT};
pub use held_karp::{solve_atsp_exact, HELD_KARP_MAX_NODES};
pub use heuristic::{solve_atsp_heuristic, Effort};
pub use noon_bean::{noon_bean_transform, AtspInstance};

#[derive(Debug, Error, PartialEq)]
pub enum GtspError {
    #[error("cluster {0} is empty")]
    EmptyCluster(usize),
    #[error("node {0} appears in more than one cluster")]
    Overlap(usize),
    #[error("node {0} belongs to no cluster")]
    Uncovered(usize),
    #[error("node {0} out of range")]
    OutOfRange(usize),
    #[error("instance needs at least one cluster")]
    NoClusters,
    #[error("exact solver limited to {limit} nodes, instance has {size}")]
    TooLarge { size: usize, limit: usize },
    #[error("brute force would enumerate {0} tours")]
    EnumerationTooLarge(u128),
    #[error("tour needs at least two nodes")]
    TooSmall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMode {
    Exact,
    #[default]
    Heuristic,
}

/// Everything `solve_gtsp` needs besides the instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverOptions {
    pub mode: SolverMode,
    pub effort: Effort,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct GtspInstance {
    weight: Matrix,
    clusters: Vec<Vec<usize>>,
    cluster_of: Vec<usize>,
}

impl GtspInstance {
    pub fn new(weight: Matrix, clusters: Vec<Vec<usize>>) -> Result<Self, GtspError> {
        if clusters.is_empty() {
            return Err(GtspError::NoClusters);
        }
        let n = weight.len();
        let mut cluster_of = vec![usize::MAX; n];
        for (c, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                return Err(GtspError::EmptyCluster(c));
            }
            for &v in members {
                if v >= n {
                    return Err(GtspError::OutOfRange(v));
                }
                if cluster_of[v] != usize::MAX {
                    return Err(GtspError::Overlap(v));
                }
                cluster_of[v] = c;
            }
        }
        if let Some(v) = cluster_of.iter().position(|&c| c == usize::MAX) {
            return Err(GtspError::Uncovered(v));
        }
        Ok(Self {
            weight,
            clusters,
            cluster_of,
        })
    }

    pub fn weight(&self) -> &Matrix {
        &self.weight
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.cluster_of[v]
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn node_count(&self) -> usize {
        self.weight.len()
    }

    /// Cyclic cost of a node sequence.
    pub fn tour_cost(&self, seq: &[usize]) -> f64 {
        self.weight.cycle_cost(seq)
    }

    /// True when `seq` holds exactly one node of every cluster.
    pub fn is_valid_tour(&self, seq: &[usize]) -> bool {
        let mut seen = vec![false; self.clusters.len()];
        seq.len() == self.clusters.len()
            && seq.iter().all(|&v| {
                v < self.cluster_of.len() && !std::mem::replace(&mut seen[self.cluster_of[v]], true)
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GtspTour {
    pub node_sequence: Vec<usize>,
    pub cost: f64,
    /// True when the solver guarantees global optimality.
    pub proven_optimal: bool,
}

/// An ATSP tour as a node cycle starting anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct AtspTour {
    pub tour: Vec<usize>,
    pub cost: f64,
}

pub fn solve_gtsp(g: &GtspInstance, opts: SolverOptions) -> Result<GtspTour, GtspError> {
    if g.cluster_count() == 1 {
        let v = g.clusters[0][0];
        return Ok(GtspTour {
            node_sequence: vec![v],
            cost: 0.0,
            proven_optimal: true,
        });
    }
    let atsp = noon_bean_transform(g);
    let solved = match opts.mode {
        SolverMode::Exact => solve_atsp_exact(&atsp.weight)?,
        SolverMode::Heuristic => solve_atsp_heuristic(&atsp.weight, opts.seed, opts.effort).best,
    };
    let mut seq = atsp.contract(&solved.tour);
    assert!(
        g.is_valid_tour(&seq),
        "Noon–Bean tour does not visit clusters contiguously"
    );
    let mut proven_optimal = opts.mode == SolverMode::Exact;
    if opts.mode == SolverMode::Heuristic {
        seq = optimize_cluster_order(g, &seq);
        proven_optimal = enumerates_orders(g.cluster_count());
    }
    let cost = g.tour_cost(&seq);
    Ok(GtspTour {
        node_sequence: seq,
        cost,
        proven_optimal,
    })
}

/// Re-picks the node of every cluster for a fixed cluster order by a layered
/// shortest-cycle search rooted at the smallest cluster. Never worse than `seq`.
///
/// A backward pass first computes, for every node, the cheapest way to finish
/// the cycle at any root node. That relaxation bounds each rooted search.
pub fn optimize_cluster_nodes(g: &GtspInstance, seq: &[usize]) -> Vec<usize> {
    if seq.len() < 2 {
        return seq.to_vec();
    }
    let order: Vec<usize> = seq.iter().map(|&v| g.cluster_of(v)).collect();
    best_for_order(g, &order, g.tour_cost(seq)).unwrap_or_else(|| seq.to_vec())
}

/// Largest number of cyclic cluster orders that `optimize_cluster_order` enumerates.
pub const ORDER_ENUMERATION_LIMIT: usize = 720;

fn enumerates_orders(clusters: usize) -> bool {
    (1..clusters).product::<usize>() <= ORDER_ENUMERATION_LIMIT
}

/// Runs the per-order node search over every cyclic cluster order when there
/// are at most [`ORDER_ENUMERATION_LIMIT`] of them, else over `seq`'s order
/// only. Never worse than `seq`.
pub fn optimize_cluster_order(g: &GtspInstance, seq: &[usize]) -> Vec<usize> {
    let m = seq.len();
    if m < 3 || !enumerates_orders(m) {
        return optimize_cluster_nodes(g, seq);
    }
    let mut best = optimize_cluster_nodes(g, seq);
    let mut best_cost = g.tour_cost(&best);
    let mut rest: Vec<usize> = (1..m).collect();
    loop {
        let order: Vec<usize> = std::iter::once(0).chain(rest.iter().copied()).collect();
        if let Some(found) = best_for_order(g, &order, best_cost) {
            best_cost = g.tour_cost(&found);
            best = found;
        }
        if !brute::next_permutation(&mut rest) {
            break;
        }
    }
    best
}

/// Cheapest node choice for a cyclic cluster `order`, if it beats `incumbent_cost`.
fn best_for_order(
    g: &GtspInstance,
    order: &[usize],
    incumbent_cost: f64,
) -> Option<Vec<usize>> {
    let m = order.len();
    let w = g.weight();
    let root = (0..m)
        .min_by_key(|&k| g.clusters[order[k]].len())
        .unwrap_or(0);
    let layers: Vec<&[usize]> = (0..m)
        .map(|k| g.clusters[order[(root + k) % m]].as_slice())
        .collect();

    // to_go[k][i]: relaxed cost from layers[k][i] through the later layers back to layer 0
    let mut to_go: Vec<Vec<f64>> = vec![Vec::new(); m];
    to_go[m - 1] = layers[m - 1]
        .iter()
        .map(|&y| layers[0].iter().map(|&s| w.get(y, s)).fold(f64::INFINITY, f64::min))
        .collect();
    for k in (1..m - 1).rev() {
        let next = &to_go[k + 1];
        to_go[k] = layers[k]
            .iter()
            .map(|&x| {
                let row = w.row(x);
                layers[k + 1]
                    .iter()
                    .zip(next)
                    .map(|(&y, &h)| row[y] + h)
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
    }
    let mut roots: Vec<(f64, usize)> = layers[0]
        .iter()
        .map(|&s| {
            let row = w.row(s);
            let lb = layers[1]
                .iter()
                .zip(&to_go[1])
                .map(|(&x, &h)| row[x] + h)
                .fold(f64::INFINITY, f64::min);
            (lb, s)
        })
        .collect();
    roots.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut best_cost = incumbent_cost;
    let mut best: Option<Vec<usize>> = None;
    // back[k][i] = index into layers[k-1] of the predecessor of layers[k][i]
    let mut back: Vec<Vec<u32>> = layers.iter().map(|l| vec![0u32; l.len()]).collect();
    let mut dist: Vec<f64> = Vec::new();
    let mut next: Vec<f64> = Vec::new();
    for &(lb, s) in &roots {
        if lb >= best_cost - 1e-9 {
            break;
        }
        let row = w.row(s);
        dist.clear();
        dist.extend(layers[1].iter().map(|&x| row[x]));
        for k in 2..m {
            next.clear();
            next.resize(layers[k].len(), f64::INFINITY);
            for (pi, &u) in layers[k - 1].iter().enumerate() {
                let du = dist[pi];
                if du + to_go[k - 1][pi] >= best_cost {
                    continue;
                }
                let row = w.row(u);
                for (i, &v) in layers[k].iter().enumerate() {
                    let c = du + row[v];
                    if c < next[i] {
                        next[i] = c;
                        back[k][i] = pi as u32;
                    }
                }
            }
            std::mem::swap(&mut dist, &mut next);
        }
        let mut end = None;
        for (i, &v) in layers[m - 1].iter().enumerate() {
            let c = dist[i] + w.get(v, s);
            if c < best_cost - 1e-9 {
                best_cost = c;
                end = Some(i);
            }
        }
        if let Some(mut i) = end {
            let mut path = vec![0usize; m];
            for k in (2..m).rev() {
                path[k] = layers[k][i];
                i = back[k][i] as usize;
            }
            path[1] = layers[1][i];
            path[0] = s;
            best = Some(path);
        }
    }
    best
}
