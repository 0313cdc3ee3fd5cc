//! ε sweeps (approximate Pareto fronts) and sampling-refinement sweeps.

use rayon::prelude::*;
use serde::Serialize;

use super::{checked_samples, nearest_start, InlPolicy, PlanError, PreparedMission};
use crate::gtsp::SolverOptions;
use crate::mission::Mission;
use crate::sampling::SpacingParams;

/// Outcome of one planner run in a sweep; `None` marks an infeasible ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunRecord {
    pub epsilon: f64,
    pub initial_time: Option<f64>,
    pub closed_time: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParetoPoint {
    pub epsilon: f64,
    pub initial_time: Option<f64>,
    pub closed_time_raw: Option<f64>,
    /// Cheapest closed time among all runs whose initial time fits within ε.
    pub closed_time_envelope: Option<f64>,
}

/// Lower envelope of `runs` at `epsilon`.
pub fn envelope(runs: &[RunRecord], epsilon: f64) -> Option<f64> {
    runs.iter()
        .filter_map(|r| Some((r.initial_time?, r.closed_time?)))
        .filter(|&(init, _)| init <= epsilon)
        .map(|(_, closed)| closed)
        .min_by(f64::total_cmp)
}

/// Plans once per ε on a shared roadmap and post-processes into a
/// non-increasing front. Sampling and validation failures abort the sweep.
pub fn pareto_sweep(
    m: &Mission,
    sp: &SpacingParams,
    epsilons: &[f64],
    policy: InlPolicy,
    opts: SolverOptions,
) -> Result<Vec<ParetoPoint>, PlanError> {
    let samples = checked_samples(m, sp)?;
    let nearest = nearest_start(&samples, m);
    let runs: Vec<RunRecord> = if epsilons.iter().all(|&e| e < nearest) {
        epsilons
            .iter()
            .map(|&epsilon| RunRecord {
                epsilon,
                initial_time: None,
                closed_time: None,
            })
            .collect()
    } else {
        PreparedMission::from_samples(m, sp, samples).sweep(epsilons, policy, opts)?
    };
    Ok(runs
        .iter()
        .map(|r| ParetoPoint {
            epsilon: r.epsilon,
            initial_time: r.initial_time,
            closed_time_raw: r.closed_time,
            closed_time_envelope: envelope(&runs, r.epsilon),
        })
        .collect())
}

impl PreparedMission {
    /// One record per ε, run in parallel and returned in input order.
    pub fn sweep(
        &self,
        epsilons: &[f64],
        policy: InlPolicy,
        opts: SolverOptions,
    ) -> Result<Vec<RunRecord>, PlanError> {
        epsilons
            .par_iter()
            .map(|&epsilon| self.run_record(epsilon, policy, opts))
            .collect()
    }

    /// One sweep run; discrete infeasibility becomes an empty record.
    pub fn run_record(
        &self,
        epsilon: f64,
        policy: InlPolicy,
        opts: SolverOptions,
    ) -> Result<RunRecord, PlanError> {
        match self.solve(epsilon, policy, opts) {
            Ok(s) => Ok(RunRecord {
                epsilon,
                initial_time: Some(s.initial_time),
                closed_time: Some(s.closed_time),
            }),
            Err(PlanError::DiscreteInfeasible { .. }) => Ok(RunRecord {
                epsilon,
                initial_time: None,
                closed_time: None,
            }),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub spacing: SpacingParams,
    pub node_counts: Vec<usize>,
    pub initial_time: Option<f64>,
    pub closed_time: Option<f64>,
    pub relative_error: Option<f64>,
    /// Why the row has no result.
    pub note: Option<String>,
}

/// Plans at a fixed ε for each spacing. Per-spacing failures are recorded in
/// the row; an invalid mission aborts.
pub fn convergence_sweep(
    m: &Mission,
    epsilon: f64,
    conditions: &[SpacingParams],
    policy: InlPolicy,
    opts: SolverOptions,
    reference: Option<f64>,
) -> Result<Vec<ConvergenceRow>, PlanError> {
    conditions
        .iter()
        .map(|sp| {
            let mut row = ConvergenceRow {
                spacing: *sp,
                node_counts: Vec::new(),
                initial_time: None,
                closed_time: None,
                relative_error: None,
                note: None,
            };
            let samples = match checked_samples(m, sp) {
                Ok(s) => s,
                Err(e @ PlanError::Sampling(_)) => {
                    row.note = Some(e.to_string());
                    return Ok(row);
                }
                Err(e) => return Err(e),
            };
            row.node_counts = samples.counts.clone();
            let nearest = nearest_start(&samples, m);
            if nearest > epsilon {
                row.note = Some(PlanError::DiscreteInfeasible { epsilon, nearest }.to_string());
                return Ok(row);
            }
            match PreparedMission::from_samples(m, sp, samples).solve(epsilon, policy, opts) {
                Ok(s) => {
                    row.initial_time = Some(s.initial_time);
                    row.closed_time = Some(s.closed_time);
                    row.relative_error = reference.map(|r| (s.closed_time - r) / r);
                }
                Err(e @ PlanError::DiscreteInfeasible { .. }) => row.note = Some(e.to_string()),
                Err(e) => return Err(e),
            }
            Ok(row)
        })
        .collect()
}
