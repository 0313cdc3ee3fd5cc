//! The ε-constrained discrete problem on the roadmap.

use serde::Serialize;

use super::{InlPolicy, PlanError};
use crate::graph::RoadmapGraph;
use crate::gtsp::{solve_gtsp, GtspInstance, GtspTour, SolverOptions};
use crate::sampling::SampledNode;

/// Node sequence v_1..v_M (one per target) with its two costs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteSolution {
    pub sequence: Vec<usize>,
    /// Flight time from the start configuration to v_1.
    pub initial_time: f64,
    /// Cyclic cost of the closed tour, dwell included.
    pub closed_time: f64,
    /// Target of v_1.
    pub first_target: usize,
    /// Whether the chosen first-stop set meets the GTSP equivalence conditions.
    pub equivalence: bool,
}

/// A candidate first target and the allowed first stops on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InlSelection {
    pub target: usize,
    pub nodes: Vec<usize>,
    pub equivalence: bool,
}

/// Nodes whose start time is at most `epsilon`.
pub fn build_inl(g: &RoadmapGraph, epsilon: f64) -> Vec<usize> {
    g.start_weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w <= epsilon)
        .map(|(i, _)| i)
        .collect()
}

/// Candidate first-stop sets under `policy`: one for `Auto` and `Target`,
/// one per target touched by `inl` for `BestOfAll`.
pub fn select_inl_star(
    inl: &[usize],
    nodes: &[SampledNode],
    targets: usize,
    policy: InlPolicy,
) -> Result<Vec<InlSelection>, PlanError> {
    if inl.is_empty() {
        return Err(PlanError::DiscreteInfeasible {
            epsilon: f64::NAN,
            nearest: f64::NAN,
        });
    }
    let mut per_target = vec![Vec::new(); targets];
    for &v in inl {
        per_target[nodes[v].target_index].push(v);
    }
    let mut totals = vec![0usize; targets];
    for n in nodes {
        totals[n.target_index] += 1;
    }
    let whole_inl = |j: usize| per_target[j].len() == inl.len();
    let whole_target = |j: usize| !per_target[j].is_empty() && per_target[j].len() == totals[j];
    let pick = |j: usize| InlSelection {
        target: j,
        nodes: per_target[j].clone(),
        equivalence: whole_inl(j) || whole_target(j),
    };

    match policy {
        InlPolicy::Target(j) if j >= targets => Err(PlanError::UnknownTarget(j)),
        InlPolicy::Target(j) if per_target[j].is_empty() => Err(PlanError::DiscreteInfeasible {
            epsilon: f64::NAN,
            nearest: f64::NAN,
        }),
        InlPolicy::Target(j) => Ok(vec![pick(j)]),
        InlPolicy::BestOfAll => Ok((0..targets)
            .filter(|&j| !per_target[j].is_empty())
            .map(pick)
            .collect()),
        InlPolicy::Auto => {
            let j = (0..targets)
                .find(|&j| whole_target(j))
                .or_else(|| (0..targets).find(|&j| whole_inl(j)))
                .unwrap_or_else(|| {
                    // largest intersection, lowest index on ties
                    (0..targets)
                        .max_by(|&a, &b| per_target[a].len().cmp(&per_target[b].len()).then(b.cmp(&a)))
                        .expect("at least one target")
                });
            Ok(vec![pick(j)])
        }
    }
}

/// Cyclic cost of a one-node-per-target sequence. A single node costs its dwell.
pub fn tour_cost(g: &RoadmapGraph, targets: usize, sequence: &[usize]) -> Result<f64, PlanError> {
    let mut seen = vec![false; targets];
    for &v in sequence {
        let t = g.nodes[v].target_index;
        if std::mem::replace(&mut seen[t], true) {
            return Err(PlanError::DuplicateTarget(t));
        }
    }
    if let Some(t) = seen.iter().position(|s| !s) {
        return Err(PlanError::MissingTarget(t));
    }
    Ok(match sequence {
        [v] => g.nodes[*v].dwell_seconds,
        _ => g.weights.cycle_cost(sequence),
    })
}

fn infeasible(g: &RoadmapGraph, epsilon: f64) -> PlanError {
    PlanError::DiscreteInfeasible {
        epsilon,
        nearest: g.start_weights.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

/// Picks the first-stop set, solves the GTSP on the induced subgraph and
/// rotates the tour so it starts on the chosen target.
pub fn solve_discrete(
    g: &RoadmapGraph,
    targets: usize,
    epsilon: f64,
    policy: InlPolicy,
    opts: SolverOptions,
) -> Result<DiscreteSolution, PlanError> {
    solve_discrete_with(g, targets, epsilon, policy, opts, None)
}

/// Unconstrained GTSP over the whole roadmap, one cluster per target.
pub(super) fn solve_unrestricted(
    g: &RoadmapGraph,
    targets: usize,
    opts: SolverOptions,
) -> Result<GtspTour, PlanError> {
    let inst = GtspInstance::new(g.weights.clone(), g.clusters(targets))?;
    Ok(solve_gtsp(&inst, opts)?)
}

/// As [`solve_discrete`]. When `unrestricted` is a proven optimum of the
/// unconstrained tour problem and already starts within ε on a candidate
/// target, it is optimal for that candidate too and is returned directly.
pub(super) fn solve_discrete_with(
    g: &RoadmapGraph,
    targets: usize,
    epsilon: f64,
    policy: InlPolicy,
    opts: SolverOptions,
    unrestricted: Option<&GtspTour>,
) -> Result<DiscreteSolution, PlanError> {
    let inl = build_inl(g, epsilon);
    let candidates = select_inl_star(&inl, &g.nodes, targets, policy).map_err(|e| match e {
        PlanError::DiscreteInfeasible { .. } => infeasible(g, epsilon),
        e => e,
    })?;
    if let Some(t) = unrestricted.filter(|t| t.proven_optimal && targets > 1) {
        // among tied rotations, start where the initial maneuver is shortest
        let hit = candidates
            .iter()
            .filter_map(|sel| {
                let k = t.node_sequence.iter().position(|&v| g.nodes[v].target_index == sel.target)?;
                sel.nodes.binary_search(&t.node_sequence[k]).is_ok().then_some((sel, k))
            })
            .min_by(|a, b| {
                let w = |k: usize| g.start_weights[t.node_sequence[k]];
                w(a.1).total_cmp(&w(b.1))
            });
        if let Some((sel, k)) = hit {
            let mut seq = t.node_sequence[k..].to_vec();
            seq.extend_from_slice(&t.node_sequence[..k]);
            return Ok(DiscreteSolution {
                initial_time: g.start_weights[seq[0]],
                closed_time: tour_cost(g, targets, &seq)?,
                sequence: seq,
                first_target: sel.target,
                equivalence: sel.equivalence,
            });
        }
    }
    let mut best: Option<DiscreteSolution> = None;
    for sel in candidates {
        let sol = solve_for_selection(g, targets, &sel, opts)?;
        let better = best.as_ref().is_none_or(|b| {
            sol.closed_time < b.closed_time
                || (sol.closed_time == b.closed_time && sol.initial_time < b.initial_time)
        });
        if better {
            best = Some(sol);
        }
    }
    Ok(best.expect("at least one candidate"))
}

fn solve_for_selection(
    g: &RoadmapGraph,
    targets: usize,
    sel: &InlSelection,
    opts: SolverOptions,
) -> Result<DiscreteSolution, PlanError> {
    let j = sel.target;
    let finish = |sequence: Vec<usize>| -> Result<DiscreteSolution, PlanError> {
        Ok(DiscreteSolution {
            initial_time: g.start_weights[sequence[0]],
            closed_time: tour_cost(g, targets, &sequence)?,
            sequence,
            first_target: j,
            equivalence: sel.equivalence,
        })
    };
    if targets == 1 {
        let v = *sel
            .nodes
            .iter()
            .min_by(|&&a, &&b| g.nodes[a].dwell_seconds.total_cmp(&g.nodes[b].dwell_seconds).then(a.cmp(&b)))
            .expect("nonempty selection");
        return finish(vec![v]);
    }

    // induced subgraph: every node except target j's nodes outside the selection
    let keep: Vec<usize> = (0..g.len())
        .filter(|&v| g.nodes[v].target_index != j || sel.nodes.binary_search(&v).is_ok())
        .collect();
    let mut clusters = vec![Vec::new(); targets];
    for (local, &v) in keep.iter().enumerate() {
        clusters[g.nodes[v].target_index].push(local);
    }
    let inst = GtspInstance::new(g.weights.select(&keep), clusters)?;
    let tour = solve_gtsp(&inst, opts)?;
    let seq: Vec<usize> = tour.node_sequence.iter().map(|&l| keep[l]).collect();
    let k = seq
        .iter()
        .position(|&v| g.nodes[v].target_index == j)
        .expect("tour covers the first target");
    let mut rotated = seq[k..].to_vec();
    rotated.extend_from_slice(&seq[..k]);
    finish(rotated)
}
