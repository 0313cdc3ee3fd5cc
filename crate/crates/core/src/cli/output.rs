//! JSON documents and CSV tables written by the commands.

use std::fmt::Write as _;

use serde::Serialize;

use super::{GreedyRow, RunSummary, SweepCurve};
use crate::dubins::Configuration;
use crate::mission::Mission;
use crate::planner::{ConvergenceRow, Leg, PlanResult};
use crate::visibility::{build_visibility_region, DwellLoop};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionDoc {
    pub target_id: String,
    pub center: [f64; 2],
    pub r_min: f64,
    pub r_max: f64,
    /// `[start, extent]`; absent for full-circle regions.
    pub azimuth: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StopDoc {
    pub node_id: usize,
    pub target_id: String,
    pub config: [f64; 3],
    #[serde(rename = "loop")]
    pub dwell: DwellLoop,
    pub dwell_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Totals {
    pub initial_time: f64,
    pub closed_time: f64,
    pub dubins_seconds: f64,
    pub dwell_seconds: f64,
}

/// Everything `plan --out` records; the route SVG is drawn from this alone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanDocument {
    pub summary: RunSummary,
    pub epsilon: f64,
    pub first_target: String,
    pub equivalence: bool,
    pub start: [f64; 3],
    pub stops: Vec<StopDoc>,
    pub legs: Vec<Leg>,
    pub totals: Totals,
    pub regions: Vec<RegionDoc>,
    pub initial_maneuver: Vec<[f64; 3]>,
    pub closed_route: Vec<[f64; 3]>,
}

fn triple(c: &Configuration) -> [f64; 3] {
    [c.x, c.y, c.heading()]
}

pub fn plan_document(m: &Mission, summary: &RunSummary, epsilon: f64, r: &PlanResult) -> PlanDocument {
    let regions = m
        .targets
        .iter()
        .map(|t| {
            let v = build_visibility_region(t, m.uav.altitude);
            RegionDoc {
                target_id: t.id.clone(),
                center: [v.center.x, v.center.y],
                r_min: v.r_min,
                r_max: v.r_max,
                azimuth: (!v.angular.is_full()).then(|| [v.angular.start(), v.angular.extent()]),
            }
        })
        .collect();
    let mut summary = summary.clone();
    if let Some(mt) = summary.metrics.as_mut() {
        mt.wall_time = None;
    }
    PlanDocument {
        summary,
        epsilon,
        first_target: m.targets[r.discrete.first_target].id.clone(),
        equivalence: r.discrete.equivalence,
        start: triple(&m.uav.start),
        stops: r
            .stops
            .iter()
            .map(|s| StopDoc {
                node_id: s.node_id,
                target_id: m.targets[s.target_index].id.clone(),
                config: triple(&s.config),
                dwell: s.dwell,
                dwell_seconds: s.dwell_seconds,
            })
            .collect(),
        legs: r.per_leg.clone(),
        totals: Totals {
            initial_time: r.discrete.initial_time,
            closed_time: r.discrete.closed_time,
            dubins_seconds: r.per_leg.iter().map(|l| l.dubins_seconds).sum(),
            dwell_seconds: r.per_leg.iter().map(|l| l.dwell_seconds).sum(),
        },
        regions,
        initial_maneuver: r.initial_maneuver.iter().map(triple).collect(),
        closed_route: r.closed_route.iter().map(triple).collect(),
    }
}

#[derive(Serialize)]
pub struct SweepDocument<'a> {
    pub summary: &'a RunSummary,
    pub curves: &'a [SweepCurve],
}

#[derive(Serialize)]
pub struct GreedyDocument<'a> {
    pub summary: &'a RunSummary,
    pub rows: &'a [GreedyRow],
}

#[derive(Serialize)]
pub struct ConvergeDocument<'a> {
    pub summary: &'a RunSummary,
    pub rows: &'a [ConvergenceRow],
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

/// One row per ε; a leading `spacing` column appears when several curves overlay.
pub fn pareto_csv(curves: &[SweepCurve]) -> String {
    let multi = curves.len() > 1;
    let mut out = String::new();
    if multi {
        out.push_str("spacing,");
    }
    out.push_str("epsilon,initial_time,closed_time_raw,closed_time_envelope\n");
    for c in curves {
        for (r, env) in c.runs.iter().zip(&c.envelope) {
            if multi {
                let _ = write!(out, "{},", c.spacing.replace(',', ";"));
            }
            let _ = writeln!(
                out,
                "{:.6},{},{},{}",
                r.epsilon,
                cell(r.initial_time),
                cell(r.closed_time),
                cell(*env)
            );
        }
    }
    out
}

pub fn greedy_csv(rows: &[GreedyRow]) -> String {
    let mut out = String::from("tau,epsilon,greedy_closed,planner_closed,gap\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{},{}",
            r.tau,
            r.epsilon,
            r.greedy_closed,
            cell(r.planner_closed),
            cell(r.gap)
        );
    }
    out
}

/// `condition` is the preset name or the spacing triple; `status` is `ok` or the reason.
pub fn converge_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("condition,closed_time,relative_error,status\n");
    for r in rows {
        let status = r.note.as_deref().unwrap_or("ok").replace(['\n', ','], " ");
        let _ = writeln!(
            out,
            "{},{},{},{}",
            super::spacing_label(&r.spacing).replace(',', ";"),
            cell(r.closed_time),
            r.relative_error.map(|e| format!("{e:.6}")).unwrap_or_default(),
            status
        );
    }
    out
}
