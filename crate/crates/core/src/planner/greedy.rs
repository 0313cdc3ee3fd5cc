//! Nearest-next baseline: always fly to the closest node of a target not yet
//! imaged, ignoring dwell, then close the loop.

use super::{recover_route, tour_cost, DiscreteSolution, PlanError, PlanResult, PreparedMission};
use crate::graph::RoadmapGraph;
use crate::mission::Mission;
use crate::sampling::SpacingParams;

/// Greedy node order over `targets` targets. Ties go to the lower node index.
pub fn greedy_sequence(g: &RoadmapGraph, targets: usize) -> Vec<usize> {
    let argmin = |cost: &dyn Fn(usize) -> f64, done: &[bool]| {
        (0..g.len())
            .filter(|&v| !done[g.nodes[v].target_index])
            .min_by(|&a, &b| cost(a).total_cmp(&cost(b)).then(a.cmp(&b)))
            .expect("an unvisited target has nodes")
    };
    let mut done = vec![false; targets];
    let mut seq = vec![argmin(&|v| g.start_weights[v], &done)];
    done[g.nodes[seq[0]].target_index] = true;
    while seq.len() < targets {
        let u = *seq.last().unwrap();
        let v = argmin(&|v| g.flight_seconds(u, v), &done);
        done[g.nodes[v].target_index] = true;
        seq.push(v);
    }
    seq
}

impl PreparedMission {
    pub fn greedy(&self, step: f64) -> Result<PlanResult, PlanError> {
        let seq = greedy_sequence(&self.graph, self.targets());
        let sol = DiscreteSolution {
            initial_time: self.graph.start_weights[seq[0]],
            closed_time: tour_cost(&self.graph, self.targets(), &seq)?,
            first_target: self.graph.nodes[seq[0]].target_index,
            equivalence: false,
            sequence: seq,
        };
        Ok(recover_route(&self.graph, &sol, step))
    }
}

pub fn greedy_plan(m: &Mission, sp: &SpacingParams) -> Result<PlanResult, PlanError> {
    PreparedMission::new(m, sp)?.greedy(super::DEFAULT_ROUTE_STEP)
}
