//! Complete directed roadmap over sampled nodes plus the start configuration.
//!
//! The weight of arc `u -> v` is the dwell time at `u` plus the Dubins flight
//! time from `u` to `v`. Arcs leave the start but never enter it.

use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::dubins::{dubins_time, Configuration};
use crate::matrix::Matrix;
use crate::mission::UavParams;
use crate::sampling::SampledNode;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("node index {0} out of range for a graph of {1} nodes")]
    OutOfRange(usize, usize),
    #[error("no arc from a node to itself ({0})")]
    SelfLoop(usize),
}

/// Arc source: the start configuration or a sampled node index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Start,
    Node(usize),
}

#[derive(Debug, Clone)]
pub struct RoadmapGraph {
    pub nodes: Vec<SampledNode>,
    pub start: Configuration,
    pub turn_radius: f64,
    pub speed: f64,
    /// Dwell at the row node plus flight to the column node; the diagonal is zero and unused.
    pub weights: Matrix,
    /// Flight time from the start to each node.
    pub start_weights: Vec<f64>,
}

pub fn build_graph(nodes: Vec<SampledNode>, uav: &UavParams) -> RoadmapGraph {
    assert!(!nodes.is_empty(), "graph needs at least one node");
    let n = nodes.len();
    let (r, s) = (uav.turn_radius, uav.speed);
    let data: Vec<f64> = nodes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, u)| {
            let nodes = &nodes;
            (0..n).map(move |j| {
                if i == j {
                    0.0
                } else {
                    u.dwell_seconds + dubins_time(&u.config, &nodes[j].config, r, s)
                }
            })
        })
        .collect();
    let start_weights = nodes
        .par_iter()
        .map(|v| dubins_time(&uav.start, &v.config, r, s))
        .collect();
    RoadmapGraph {
        nodes,
        start: uav.start,
        turn_radius: r,
        speed: s,
        weights: Matrix::from_raw(n, data),
        start_weights,
    }
}

impl RoadmapGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_weight(&self, from: Source, to: usize) -> Result<f64, GraphError> {
        let n = self.len();
        if to >= n {
            return Err(GraphError::OutOfRange(to, n));
        }
        match from {
            Source::Start => Ok(self.start_weights[to]),
            Source::Node(u) if u >= n => Err(GraphError::OutOfRange(u, n)),
            Source::Node(u) if u == to => Err(GraphError::SelfLoop(u)),
            Source::Node(u) => Ok(self.weights.get(u, to)),
        }
    }

    /// Flight-only part of arc `u -> v`.
    pub fn flight_seconds(&self, u: usize, v: usize) -> f64 {
        if u == v {
            0.0
        } else {
            self.weights.get(u, v) - self.nodes[u].dwell_seconds
        }
    }

    pub fn target_count(&self) -> usize {
        self.nodes.iter().map(|n| n.target_index + 1).max().unwrap_or(0)
    }

    /// Node indices grouped by target.
    pub fn clusters(&self, targets: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); targets];
        for (i, n) in self.nodes.iter().enumerate() {
            out[n.target_index].push(i);
        }
        out
    }

    /// Weight matrix as CSV with a header row of node ids.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let ids: Vec<String> = self.nodes.iter().map(|n| n.node_id.to_string()).collect();
        writeln!(out, "node_id,{}", ids.join(","))?;
        for (i, id) in ids.iter().enumerate() {
            let row: Vec<String> = self.weights.row(i).iter().map(|w| format!("{w:.6}")).collect();
            writeln!(out, "{id},{}", row.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::visibility::{Direction, DwellLoop, LoopKind};
    use approx::assert_abs_diff_eq;

    fn node(id: usize, config: Configuration, dwell: f64) -> SampledNode {
        SampledNode {
            node_id: id,
            config,
            target_index: id,
            dwell: if dwell > 0.0 {
                DwellLoop {
                    kind: LoopKind::OrbitPivot,
                    center: Point::new(0.0, 0.0),
                    radius: 750.0,
                    direction: Direction::Ccw,
                    loops: 1,
                }
            } else {
                DwellLoop::none(config.position())
            },
            dwell_seconds: dwell,
        }
    }

    fn uav(start: Configuration) -> UavParams {
        UavParams {
            turn_radius: 750.0,
            altitude: 1000.0,
            speed: 39.0,
            start,
        }
    }

    #[test]
    fn straight_pair_weights() {
        let a = Configuration::new(0.0, 0.0, 0.0);
        let b = Configuration::new(1000.0, 0.0, 0.0);
        let g = build_graph(vec![node(0, a, 0.0), node(1, b, 0.0)], &uav(a));
        assert_abs_diff_eq!(g.weights.get(0, 1), 1000.0 / 39.0, epsilon = 1e-9);
        assert_eq!(g.edge_weight(Source::Start, 0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            g.edge_weight(Source::Start, 1).unwrap(),
            dubins_time(&a, &b, 750.0, 39.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn dwell_bounds_outgoing_weights() {
        let dwell = std::f64::consts::TAU * 750.0 / 39.0;
        let a = Configuration::new(0.0, 0.0, 0.0);
        let b = Configuration::new(1000.0, 0.0, std::f64::consts::FRAC_PI_2);
        let g = build_graph(vec![node(0, a, dwell), node(1, b, 0.0)], &uav(a));
        assert!(g.weights.get(0, 1) >= 120.830);
        assert_abs_diff_eq!(g.flight_seconds(0, 1), dubins_time(&a, &b, 750.0, 39.0), epsilon = 1e-9);
        assert!(g.weights.get(0, 1) != g.weights.get(1, 0));
    }

    #[test]
    fn edge_weight_errors() {
        let a = Configuration::new(0.0, 0.0, 0.0);
        let g = build_graph(vec![node(0, a, 0.0)], &uav(a));
        assert_eq!(g.edge_weight(Source::Node(0), 3), Err(GraphError::OutOfRange(3, 1)));
        assert_eq!(g.edge_weight(Source::Node(0), 0), Err(GraphError::SelfLoop(0)));
    }

    #[test]
    fn csv_dump_has_header() {
        let a = Configuration::new(0.0, 0.0, 0.0);
        let b = Configuration::new(1000.0, 0.0, 0.0);
        let g = build_graph(vec![node(0, a, 0.0), node(1, b, 0.0)], &uav(a));
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("node_id,0,1\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
