//! Turns a node sequence into sampled flight paths.

use serde::Serialize;

use super::DiscreteSolution;
use crate::dubins::{dubins_shortest_path, sample_circle, Configuration};
use crate::graph::RoadmapGraph;
use crate::sampling::SampledNode;
use crate::visibility::{Direction, LoopKind};

/// One closed-tour arc: the dwell flown at `from`, then the flight to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Leg {
    pub from: usize,
    pub to: usize,
    pub dubins_seconds: f64,
    pub dwell_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanResult {
    pub discrete: DiscreteSolution,
    /// Sequence nodes, in visiting order.
    pub stops: Vec<SampledNode>,
    pub initial_maneuver: Vec<Configuration>,
    pub closed_route: Vec<Configuration>,
    pub per_leg: Vec<Leg>,
}

impl PlanResult {
    pub fn leg_total(&self) -> f64 {
        self.per_leg.iter().map(|l| l.dubins_seconds + l.dwell_seconds).sum()
    }
}

fn append(route: &mut Vec<Configuration>, pts: Vec<Configuration>) {
    // consecutive pieces share their junction point
    let skip = usize::from(!route.is_empty());
    route.extend(pts.into_iter().skip(skip));
}

/// Initial maneuver from the start to v_1, then for every stop its dwell
/// loops followed by the Dubins leg to the next stop, closing back at v_1.
pub fn recover_route(g: &RoadmapGraph, sol: &DiscreteSolution, step: f64) -> PlanResult {
    assert!(step > 0.0, "route step must be positive");
    let seq = &sol.sequence;
    let m = seq.len();
    let first = &g.nodes[seq[0]];
    let r = g.turn_radius;
    let initial = dubins_shortest_path(&g.start, &first.config, r).sample_points(&g.start, step);

    let mut closed = Vec::new();
    let mut per_leg = Vec::with_capacity(m);
    for k in 0..m {
        let u = &g.nodes[seq[k]];
        let v = &g.nodes[seq[(k + 1) % m]];
        if u.dwell.kind != LoopKind::None {
            let left = u.dwell.direction == Direction::Ccw;
            append(&mut closed, sample_circle(&u.config, u.dwell.radius, left, u.dwell.loops, step));
        } else if closed.is_empty() {
            closed.push(u.config);
        }
        let dubins_seconds = if m == 1 {
            0.0
        } else {
            let path = dubins_shortest_path(&u.config, &v.config, r);
            append(&mut closed, path.sample_points(&u.config, step));
            g.flight_seconds(seq[k], seq[(k + 1) % m])
        };
        per_leg.push(Leg {
            from: seq[k],
            to: seq[(k + 1) % m],
            dubins_seconds,
            dwell_seconds: u.dwell_seconds,
        });
    }
    // close exactly on v_1 despite sampling round-off
    if let Some(last) = closed.last_mut() {
        *last = first.config;
    }
    PlanResult {
        discrete: sol.clone(),
        stops: seq.iter().map(|&v| g.nodes[v]).collect(),
        initial_maneuver: initial,
        closed_route: closed,
        per_leg,
    }
}
