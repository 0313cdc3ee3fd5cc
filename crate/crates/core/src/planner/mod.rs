//! End-to-end tour planning: sample, build the roadmap, pick the first-stop
//! set, solve the GTSP and turn the node sequence back into a flyable route.

mod discrete;
mod greedy;
mod route;
mod sweep;

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::dubins::dubins_time;
use crate::graph::{build_graph, RoadmapGraph};
use crate::gtsp::{GtspError, GtspTour, SolverOptions};
use crate::mission::{validate_mission, Finding, Mission};
use crate::sampling::{sample_mission, SampleSet, SamplingError, SpacingParams};

pub use discrete::{build_inl, select_inl_star, solve_discrete, tour_cost, DiscreteSolution, InlSelection};
pub use greedy::{greedy_plan, greedy_sequence};
pub use route::{recover_route, Leg, PlanResult};
pub use sweep::{
    convergence_sweep, envelope, pareto_sweep, ConvergenceRow, ParetoPoint, RunRecord,
};

/// Default spacing of route polyline points, in meters.
pub const DEFAULT_ROUTE_STEP: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InlPolicy {
    #[default]
    Auto,
    /// Force the first stop onto this target index.
    Target(usize),
    BestOfAll,
}

impl fmt::Display for InlPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InlPolicy::Auto => f.write_str("auto"),
            InlPolicy::Target(j) => write!(f, "target:{j}"),
            InlPolicy::BestOfAll => f.write_str("best_of_all"),
        }
    }
}

impl FromStr for InlPolicy {
    type Err = String;

    /// Accepts `auto`, `best_of_all` and `target:<index>`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(InlPolicy::Auto),
            "best_of_all" => Ok(InlPolicy::BestOfAll),
            _ => s
                .strip_prefix("target:")
                .and_then(|j| j.parse().ok())
                .map(InlPolicy::Target)
                .ok_or_else(|| format!("unknown policy `{s}` (auto|target:J|best_of_all)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("mission infeasible: {}", join_findings(.0))]
    MissionInfeasible(Vec<Finding>),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("Discrete Approximation Infeasible: no sampled configuration reachable within {epsilon} s (nearest start time {nearest:.3} s)")]
    DiscreteInfeasible { epsilon: f64, nearest: f64 },
    #[error("target index {0} out of range")]
    UnknownTarget(usize),
    #[error("sequence visits target {0} more than once")]
    DuplicateTarget(usize),
    #[error("sequence misses target {0}")]
    MissingTarget(usize),
    #[error(transparent)]
    Gtsp(#[from] GtspError),
}

fn join_findings(f: &[Finding]) -> String {
    f.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A sampled mission with its roadmap, reusable across ε values.
#[derive(Debug, Clone)]
pub struct PreparedMission {
    pub mission: Mission,
    pub spacing: SpacingParams,
    pub counts: Vec<usize>,
    pub graph: RoadmapGraph,
    /// Unconstrained tours already solved on this roadmap, by solver options.
    unrestricted: Arc<Mutex<Vec<(SolverOptions, GtspTour)>>>,
}

impl PreparedMission {
    /// Validates, samples and builds the full graph.
    pub fn new(m: &Mission, sp: &SpacingParams) -> Result<Self, PlanError> {
        let samples = checked_samples(m, sp)?;
        Ok(Self::from_samples(m, sp, samples))
    }

    /// Builds the roadmap over already sampled nodes.
    pub fn from_samples(m: &Mission, sp: &SpacingParams, samples: SampleSet) -> Self {
        let graph = build_graph(samples.nodes, &m.uav);
        Self {
            mission: m.clone(),
            spacing: *sp,
            counts: samples.counts,
            graph,
            unrestricted: Arc::default(),
        }
    }

    pub fn targets(&self) -> usize {
        self.mission.targets.len()
    }

    pub fn solve(
        &self,
        epsilon: f64,
        policy: InlPolicy,
        opts: SolverOptions,
    ) -> Result<DiscreteSolution, PlanError> {
        // the shortcut is optional; exact mode may reject the full-size instance
        let tour = if build_inl(&self.graph, epsilon).is_empty() {
            None
        } else {
            self.unrestricted_tour(opts).ok()
        };
        discrete::solve_discrete_with(&self.graph, self.targets(), epsilon, policy, opts, tour.as_ref())
    }

    /// Best closed tour ignoring the start constraint, solved once per options.
    pub fn unrestricted_tour(&self, opts: SolverOptions) -> Result<GtspTour, PlanError> {
        let mut cache = self.unrestricted.lock().expect("cache lock");
        if let Some((_, t)) = cache.iter().find(|(o, _)| *o == opts) {
            return Ok(t.clone());
        }
        let t = discrete::solve_unrestricted(&self.graph, self.targets(), opts)?;
        cache.push((opts, t.clone()));
        Ok(t)
    }

    pub fn plan(
        &self,
        epsilon: f64,
        policy: InlPolicy,
        opts: SolverOptions,
        step: f64,
    ) -> Result<PlanResult, PlanError> {
        let sol = self.solve(epsilon, policy, opts)?;
        Ok(recover_route(&self.graph, &sol, step))
    }
}

/// Validates the mission, then samples it.
pub fn checked_samples(m: &Mission, sp: &SpacingParams) -> Result<SampleSet, PlanError> {
    let findings = validate_mission(m);
    if !findings.is_empty() {
        return Err(PlanError::MissionInfeasible(findings));
    }
    Ok(sample_mission(m, sp)?)
}

/// Shortest flight time from the start to any sample.
pub fn nearest_start(samples: &SampleSet, m: &Mission) -> f64 {
    samples
        .nodes
        .iter()
        .map(|n| dubins_time(&m.uav.start, &n.config, m.uav.turn_radius, m.uav.speed))
        .fold(f64::INFINITY, f64::min)
}

/// Runs the whole pipeline for one ε. Infeasible ε values are rejected from
/// start times alone, before the full roadmap is built.
pub fn plan(
    m: &Mission,
    sp: &SpacingParams,
    epsilon: f64,
    policy: InlPolicy,
    opts: SolverOptions,
) -> Result<PlanResult, PlanError> {
    plan_with_step(m, sp, epsilon, policy, opts, DEFAULT_ROUTE_STEP)
}

pub fn plan_with_step(
    m: &Mission,
    sp: &SpacingParams,
    epsilon: f64,
    policy: InlPolicy,
    opts: SolverOptions,
    step: f64,
) -> Result<PlanResult, PlanError> {
    let samples = checked_samples(m, sp)?;
    let nearest = nearest_start(&samples, m);
    if nearest > epsilon {
        return Err(PlanError::DiscreteInfeasible { epsilon, nearest });
    }
    PreparedMission::from_samples(m, sp, samples).plan(epsilon, policy, opts, step)
}
