//! Noon–Bean reduction from GTSP to ATSP.
//!
//! Each cluster becomes a zero-cost cycle. Leaving a cluster from `u` costs as
//! if leaving from its cycle successor, plus a penalty large enough that any
//! optimal tour enters and leaves every cluster exactly once.

use super::GtspInstance;
use crate::matrix::Matrix;

#[derive(Debug, Clone)]
pub struct AtspInstance {
    pub weight: Matrix,
    /// GTSP node behind each ATSP node.
    pub node_map: Vec<usize>,
    pub penalty: f64,
    /// Finite stand-in for a forbidden arc; larger than `clusters · penalty`.
    pub sentinel: f64,
    pub clusters: usize,
    succ: Vec<usize>,
}

/// Builds the transformed instance. ATSP nodes list the clusters in order, and
/// each cluster's cycle follows its listed node order.
pub fn noon_bean_transform(g: &GtspInstance) -> AtspInstance {
    let w = g.weight();
    let m = g.cluster_count();
    let node_map: Vec<usize> = g.clusters().iter().flatten().copied().collect();
    let n = node_map.len();
    let mut cluster = Vec::with_capacity(n);
    let mut succ = Vec::with_capacity(n);
    let mut base = 0;
    for (c, members) in g.clusters().iter().enumerate() {
        let k = members.len();
        for i in 0..k {
            cluster.push(c);
            succ.push(base + (i + 1) % k);
        }
        base += k;
    }

    let mut inter_sum = 0.0;
    for u in 0..n {
        for v in 0..n {
            if cluster[u] != cluster[v] {
                let x = w.get(node_map[u], node_map[v]);
                if x.is_finite() {
                    inter_sum += x;
                }
            }
        }
    }
    let penalty = 1.0 + inter_sum;
    let sentinel = 2.0 * (m as f64 + 1.0) * penalty;

    let weight = Matrix::from_fn(n, |u, v| {
        if cluster[u] == cluster[v] {
            if succ[u] == v && u != v {
                0.0
            } else {
                sentinel
            }
        } else {
            w.get(node_map[succ[u]], node_map[v]) + penalty
        }
    });
    AtspInstance {
        weight,
        node_map,
        penalty,
        sentinel,
        clusters: m,
        succ,
    }
}

impl AtspInstance {
    /// Collapses each cluster's zero-cycle run to its entry node and maps the
    /// result back to GTSP node ids.
    pub fn contract(&self, tour: &[usize]) -> Vec<usize> {
        let n = tour.len();
        if n == 0 {
            return Vec::new();
        }
        let is_zero_arc = |k: usize| {
            let (a, b) = (tour[k], tour[(k + 1) % n]);
            a != b && self.succ[a] == b && self.weight.get(a, b) == 0.0
        };
        // rotate so position 0 is a cluster entry
        let start = (0..n).find(|&k| !is_zero_arc((k + n - 1) % n)).unwrap_or(0);
        let mut out = Vec::new();
        for k in 0..n {
            let pos = (start + k) % n;
            if k == 0 || !is_zero_arc((pos + n - 1) % n) {
                out.push(self.node_map[tour[pos]]);
            }
        }
        out
    }

    /// True when the tour uses no forbidden arc.
    pub fn avoids_sentinel(&self, tour: &[usize]) -> bool {
        let n = tour.len();
        (0..n).all(|k| self.weight.get(tour[k], tour[(k + 1) % n]) < self.sentinel)
    }
}
