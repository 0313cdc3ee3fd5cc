//! Grid sampling of each target's dwell set.
//!
//! Locations form a polar grid around the target: radii from the lower radial
//! limit in steps of `delta_r` with the upper limit always appended, bearings
//! from the angular interval's start in steps of `delta_theta` (sector end
//! included), and headings from 0 in steps of `delta_alpha`. Every emitted
//! node carries the dwell loop it starts and ends.

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dubins::Configuration;
use crate::mission::{AngularInterval, Behavior, Mission, TargetSpec, UavParams};
use crate::visibility::{
    build_visibility_region, config_in_dwl, dwell_time, orbit_heading, Direction, DwellLoop,
    VisibilityRegion, RADIAL_TOL,
};

/// Grid spacings: radial (m), bearing (rad) and heading (rad).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpacingParams {
    pub delta_r: f64,
    pub delta_theta: f64,
    pub delta_alpha: f64,
}

/// The seven spacing conditions, coarsest first.
pub const SPACING_CONDITIONS: [SpacingParams; 7] = [
    SpacingParams::uniform_angle(1000.0, PI),
    SpacingParams::uniform_angle(500.0, PI),
    SpacingParams::uniform_angle(500.0, PI / 2.0),
    SpacingParams::uniform_angle(250.0, PI / 2.0),
    SpacingParams::uniform_angle(250.0, PI / 4.0),
    SpacingParams::uniform_angle(125.0, PI / 4.0),
    SpacingParams::uniform_angle(125.0, PI / 8.0),
];

#[derive(Debug, Error, PartialEq)]
pub enum SpacingError {
    #[error("unknown spacing preset `{0}` (expected condition1..condition7)")]
    UnknownPreset(String),
    #[error("spacing must be strictly positive and finite")]
    NonPositive,
    #[error("malformed spacing `{0}` (expected dr=..,dtheta=..,dalpha=..)")]
    Malformed(String),
}

impl SpacingParams {
    pub const fn uniform_angle(delta_r: f64, angle: f64) -> Self {
        Self {
            delta_r,
            delta_theta: angle,
            delta_alpha: angle,
        }
    }

    pub fn new(delta_r: f64, delta_theta: f64, delta_alpha: f64) -> Result<Self, SpacingError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(delta_r) && ok(delta_theta) && ok(delta_alpha) {
            Ok(Self {
                delta_r,
                delta_theta,
                delta_alpha,
            })
        } else {
            Err(SpacingError::NonPositive)
        }
    }

    /// Preset `conditionN`, 1-based.
    pub fn condition(n: usize) -> Option<Self> {
        (1..=7).contains(&n).then(|| SPACING_CONDITIONS[n - 1])
    }

    /// Parses `conditionN` or `dr=..,dtheta=..,dalpha=..`.
    pub fn parse(text: &str) -> Result<Self, SpacingError> {
        let text = text.trim();
        if let Some(n) = text.strip_prefix("condition") {
            return n
                .parse::<usize>()
                .ok()
                .and_then(Self::condition)
                .ok_or_else(|| SpacingError::UnknownPreset(text.to_string()));
        }
        let (mut dr, mut dt, mut da) = (None, None, None);
        for part in text.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| SpacingError::Malformed(text.to_string()))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| SpacingError::Malformed(text.to_string()))?;
            match key.trim() {
                "dr" => dr = Some(value),
                "dtheta" => dt = Some(value),
                "dalpha" => da = Some(value),
                _ => return Err(SpacingError::Malformed(text.to_string())),
            }
        }
        match (dr, dt, da) {
            (Some(dr), Some(dt), Some(da)) => Self::new(dr, dt, da),
            _ => Err(SpacingError::Malformed(text.to_string())),
        }
    }

    pub fn halved(&self) -> Self {
        Self {
            delta_r: self.delta_r / 2.0,
            delta_theta: self.delta_theta / 2.0,
            delta_alpha: self.delta_alpha / 2.0,
        }
    }
}

impl fmt::Display for SpacingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dr={},dtheta={},dalpha={}",
            self.delta_r, self.delta_theta, self.delta_alpha
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampledNode {
    pub node_id: usize,
    pub config: Configuration,
    pub target_index: usize,
    #[serde(rename = "loop")]
    pub dwell: DwellLoop,
    pub dwell_seconds: f64,
}

/// Samples from every target, with per-target counts.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub nodes: Vec<SampledNode>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SamplingError {
    #[error("sampling produced no configurations for target(s): {}", .0.join(", "))]
    EmptyTargets(Vec<String>),
}

/// `lo, lo + step, ...` below `hi`, then `hi`.
pub fn radial_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if hi < lo - RADIAL_TOL {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let r = lo + step * k as f64;
        if r >= hi - RADIAL_TOL {
            break;
        }
        out.push(r);
        k += 1;
    }
    out.push(hi.max(lo));
    out
}

/// Bearings across `interval`: from its start in steps of `step`, with the
/// sector end appended; full circles stop short of 2π.
pub fn bearing_grid(interval: &AngularInterval, step: f64) -> Vec<f64> {
    let extent = interval.extent();
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let off = step * k as f64;
        if off >= extent - 1e-12 {
            break;
        }
        out.push(interval.start() + off);
        k += 1;
    }
    if !interval.is_full() {
        out.push(interval.start() + extent);
    }
    out
}

pub fn heading_grid(step: f64) -> Vec<f64> {
    bearing_grid(&AngularInterval::FULL, step)
}

fn dedup_key(c: &Configuration) -> (i64, i64, i64) {
    let mut h = (c.heading() * 1e9).round() as i64;
    if h == (TAU * 1e9).round() as i64 {
        h = 0;
    }
    (
        (c.x * 1e7).round() as i64,
        (c.y * 1e7).round() as i64,
        h,
    )
}

/// Grid samples of one target's dwell set, in (radius, bearing, heading) order.
pub fn sample_target(
    t: &TargetSpec,
    target_index: usize,
    region: &VisibilityRegion,
    uav: &UavParams,
    sp: &SpacingParams,
) -> Vec<SampledNode> {
    let r = uav.turn_radius;
    let mut candidates: Vec<Configuration> = Vec::new();
    if t.loops > 0 && t.behavior == Behavior::Full {
        let radii = radial_grid(r.max(region.r_min), region.r_max, sp.delta_r);
        let bearings = bearing_grid(&AngularInterval::FULL, sp.delta_theta);
        for &rho in &radii {
            for &b in &bearings {
                let p = t.location.offset(b, rho);
                let mut hs = [
                    Configuration::at(p, orbit_heading(b, Direction::Ccw)),
                    Configuration::at(p, orbit_heading(b, Direction::Cw)),
                ];
                hs.sort_by(|a, b| a.heading().total_cmp(&b.heading()));
                candidates.extend(hs);
            }
        }
    } else {
        let radii = radial_grid(region.r_min, region.r_max, sp.delta_r);
        let bearings = bearing_grid(&region.angular, sp.delta_theta);
        let headings = heading_grid(sp.delta_alpha);
        for &rho in &radii {
            for &b in &bearings {
                let p = t.location.offset(b, rho);
                candidates.extend(headings.iter().map(|&h| Configuration::at(p, h)));
            }
        }
    }

    let mut seen = HashSet::new();
    candidates
        .into_iter()
        .filter(|c| seen.insert(dedup_key(c)))
        .filter_map(|c| {
            let dwell: DwellLoop = config_in_dwl(&c, t, region, r)?;
            Some(SampledNode {
                node_id: 0,
                config: c,
                target_index,
                dwell,
                dwell_seconds: dwell_time(&dwell, uav.speed),
            })
        })
        .collect()
}

/// Samples every target and assigns global node ids in target order.
pub fn sample_mission(m: &Mission, sp: &SpacingParams) -> Result<SampleSet, SamplingError> {
    let per_target: Vec<Vec<SampledNode>> = m
        .targets
        .par_iter()
        .enumerate()
        .map(|(j, t)| {
            let region = build_visibility_region(t, m.uav.altitude);
            sample_target(t, j, &region, &m.uav, sp)
        })
        .collect();
    let empty: Vec<String> = per_target
        .iter()
        .zip(&m.targets)
        .filter(|(nodes, _)| nodes.is_empty())
        .map(|(_, t)| t.id.clone())
        .collect();
    if !empty.is_empty() {
        return Err(SamplingError::EmptyTargets(empty));
    }
    let counts = per_target.iter().map(Vec::len).collect();
    let mut nodes: Vec<SampledNode> = per_target.into_iter().flatten().collect();
    for (i, n) in nodes.iter_mut().enumerate() {
        n.node_id = i;
    }
    Ok(SampleSet { nodes, counts })
}
