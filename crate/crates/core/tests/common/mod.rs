//! Shared fixtures and enumeration oracles for the integration tests.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use rand::Rng;

use dwelltour::dubins::Configuration;
use dwelltour::geom::Point;
use dwelltour::graph::{build_graph, RoadmapGraph};
use dwelltour::gtsp::GtspInstance;
use dwelltour::matrix::Matrix;
use dwelltour::mission::{parse_mission, AngularInterval, Behavior, Mission, TargetSpec, UavParams};
use dwelltour::sampling::SampledNode;
use dwelltour::visibility::DwellLoop;

pub const TABLE1: &str = include_str!("../../data/table1_pareto.json");
pub const TABLE3: &str = include_str!("../../data/table3_convergence.json");
pub const TABLE3_OPTIMUM: f64 = 848.62;

pub fn table1() -> Mission {
    parse_mission(TABLE1).unwrap()
}

pub fn table3() -> Mission {
    parse_mission(TABLE3).unwrap()
}

pub fn data_path(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Integer-weight clustered instance: w(u, v) = dwell(u) + L1(u, v) over
/// integer points. Asymmetric but metric, like the roadmap weights.
pub fn metric_gtsp(rng: &mut impl Rng, max_clusters: usize, max_size: usize) -> GtspInstance {
    let m = rng.gen_range(2..=max_clusters);
    let sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=max_size)).collect();
    let n: usize = sizes.iter().sum();
    let pts: Vec<(i64, i64)> = (0..n).map(|_| (rng.gen_range(0..100), rng.gen_range(0..100))).collect();
    let dwell: Vec<i64> = (0..n).map(|_| rng.gen_range(0..20)).collect();
    let w = Matrix::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else {
            (dwell[i] + (pts[i].0 - pts[j].0).abs() + (pts[i].1 - pts[j].1).abs()) as f64
        }
    });
    let mut clusters = Vec::with_capacity(m);
    let mut next = 0;
    for s in sizes {
        clusters.push((next..next + s).collect());
        next += s;
    }
    GtspInstance::new(w, clusters).unwrap()
}

/// Real-valued random ATSP matrix with zero diagonal.
pub fn random_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, |i, j| if i == j { 0.0 } else { rng.gen_range(1.0..100.0) })
}

/// Optimal ATSP cost by trying all (n-1)! tours that start at node 0.
pub fn enumerate_atsp(w: &Matrix) -> f64 {
    fn go(w: &Matrix, path: &mut Vec<usize>, used: &mut [bool], cost: f64, best: &mut f64) {
        let n = w.len();
        if path.len() == n {
            let total = cost + w.get(*path.last().unwrap(), path[0]);
            *best = best.min(total);
            return;
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                let c = cost + w.get(*path.last().unwrap(), v);
                path.push(v);
                go(w, path, used, c, best);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut used = vec![false; w.len()];
    used[0] = true;
    go(w, &mut vec![0], &mut used, 0.0, &mut best);
    best
}

/// Optimal GTSP cost by depth-first extension: start on cluster 0, then
/// append any node of a cluster not yet visited.
pub fn enumerate_gtsp(g: &GtspInstance) -> f64 {
    fn go(g: &GtspInstance, path: &mut Vec<usize>, seen: &mut [bool], best: &mut f64) {
        if path.len() == g.cluster_count() {
            let w = g.weight();
            let mut c = 0.0;
            for k in 0..path.len() {
                c += w.get(path[k], path[(k + 1) % path.len()]);
            }
            if path.len() == 1 {
                c = 0.0;
            }
            *best = best.min(c);
            return;
        }
        for (ci, cluster) in g.clusters().iter().enumerate().rev() {
            if seen[ci] {
                continue;
            }
            seen[ci] = true;
            for &v in cluster.iter().rev() {
                path.push(v);
                go(g, path, seen, best);
                path.pop();
            }
            seen[ci] = false;
        }
    }
    let mut best = f64::INFINITY;
    let mut seen = vec![false; g.cluster_count()];
    seen[0] = true;
    for &v in &g.clusters()[0] {
        go(g, &mut vec![v], &mut seen, &mut best);
    }
    best
}

pub fn uav(start: Configuration) -> UavParams {
    UavParams {
        turn_radius: 750.0,
        altitude: 1000.0,
        speed: 39.0,
        start,
    }
}

/// Roadmap over random configurations, `sizes[j]` nodes on target j, with
/// integer dwell times so that ties are plausible.
pub fn random_roadmap(rng: &mut impl Rng, sizes: &[usize]) -> RoadmapGraph {
    let mut nodes = Vec::new();
    for (t, &k) in sizes.iter().enumerate() {
        let (cx, cy) = (rng.gen_range(-8000.0..8000.0), rng.gen_range(-8000.0..8000.0));
        for _ in 0..k {
            let c = Configuration::new(
                cx + rng.gen_range(-1500.0..1500.0),
                cy + rng.gen_range(-1500.0..1500.0),
                rng.gen_range(0.0..TAU),
            );
            nodes.push(SampledNode {
                node_id: nodes.len(),
                config: c,
                target_index: t,
                dwell: DwellLoop::none(Point::new(c.x, c.y)),
                dwell_seconds: rng.gen_range(0..4) as f64 * 60.0,
            });
        }
    }
    let start = Configuration::new(rng.gen_range(-3000.0..3000.0), rng.gen_range(-3000.0..3000.0), rng.gen_range(0.0..TAU));
    build_graph(nodes, &uav(start))
}

/// Closed-tour optimum over one-per-target sequences whose first node starts
/// within ε; `None` when no node does.
pub fn problem2_optimum(g: &RoadmapGraph, targets: usize, epsilon: f64) -> Option<f64> {
    let per_target: Vec<Vec<usize>> = (0..targets)
        .map(|t| (0..g.len()).filter(|&v| g.nodes[v].target_index == t).collect())
        .collect();
    let mut best: Option<f64> = None;
    let mut order: Vec<usize> = (0..targets).collect();
    // every target order, every node pick
    permute(&mut order, 0, &mut |order| {
        let mut pick = vec![0usize; targets];
        loop {
            let seq: Vec<usize> = order.iter().zip(&pick).map(|(&t, &i)| per_target[t][i]).collect();
            if g.start_weights[seq[0]] <= epsilon {
                let cost = if targets == 1 {
                    g.nodes[seq[0]].dwell_seconds
                } else {
                    (0..targets).map(|k| g.weights.get(seq[k], seq[(k + 1) % targets])).sum()
                };
                best = Some(best.map_or(cost, |b: f64| b.min(cost)));
            }
            let mut k = 0;
            loop {
                if k == targets {
                    return;
                }
                pick[k] += 1;
                if pick[k] < per_target[order[k]].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
        }
    });
    best
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Small random mission with wide tolerances so that it is usually feasible.
pub fn random_mission(rng: &mut impl Rng, max_targets: usize) -> Mission {
    let m = rng.gen_range(1..=max_targets);
    let targets = (0..m)
        .map(|j| {
            let behavior = match rng.gen_range(0..3) {
                0 => Behavior::Any,
                1 => Behavior::Angle,
                _ => Behavior::Full,
            };
            let lo = rng.gen_range(0.25..0.45);
            let hi = rng.gen_range(1.1..1.35);
            TargetSpec {
                id: format!("T{}", j + 1),
                location: Point::new(rng.gen_range(-9000.0..9000.0), rng.gen_range(-9000.0..9000.0)),
                behavior,
                loops: rng.gen_range(0..3),
                azimuth_interval: (behavior == Behavior::Angle)
                    .then(|| AngularInterval::new(rng.gen_range(0.0..TAU), rng.gen_range(PI / 2.0..1.5 * PI)).unwrap()),
                tilt_interval: (lo, hi),
            }
        })
        .collect();
    Mission {
        uav: uav(Configuration::new(rng.gen_range(-2000.0..2000.0), rng.gen_range(-2000.0..2000.0), rng.gen_range(0.0..TAU))),
        targets,
    }
}
