//! Mission model: UAV parameters, targets, and the JSON mission file.

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dubins::Configuration;
use crate::geom::{mod_2pi, Point};
use crate::visibility::{build_visibility_region, dwell_feasible};

/// Slack used by [`AngularInterval::contains`] at both ends of the interval.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MissionError {
    #[error("malformed mission document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid field `{field}`: {reason}")]
    Field { field: String, reason: String },
}

impl MissionError {
    fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Field {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavParams {
    pub turn_radius: f64,
    pub altitude: f64,
    pub speed: f64,
    pub start: Configuration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Behavior {
    Any,
    Angle,
    Full,
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Behavior::Any => "ANY",
            Behavior::Angle => "ANGLE",
            Behavior::Full => "FULL",
        })
    }
}

/// Wrap-aware interval of angles: `start` in `[0, 2π)`, extent in `(0, 2π]`.
/// The upper bound is kept as given so that bounds read from a file survive
/// a write unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularInterval {
    start: f64,
    upper: f64,
}

impl AngularInterval {
    pub const FULL: AngularInterval = AngularInterval {
        start: 0.0,
        upper: TAU,
    };

    pub fn new(start: f64, extent: f64) -> Option<Self> {
        if !(start.is_finite() && extent > 0.0 && extent <= TAU) {
            return None;
        }
        let start = mod_2pi(start);
        Some(Self {
            start,
            upper: start + extent,
        })
    }

    /// Interval between two bounds read counter-clockwise from `lower` to `upper`.
    pub fn from_bounds(lower: f64, upper: f64) -> Option<Self> {
        let iv = Self::new(lower, upper - lower)?;
        if iv.start == lower {
            Some(Self { upper, ..iv })
        } else {
            Some(iv)
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn extent(&self) -> f64 {
        self.upper - self.start
    }

    /// Upper bound without wrapping, so `start() <= upper()`.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn end(&self) -> f64 {
        mod_2pi(self.upper)
    }

    pub fn is_full(&self) -> bool {
        self.extent() >= TAU
    }

    /// Counter-clockwise offset of `angle` from `start`, pulled back to a small
    /// negative value when `angle` sits just before `start`.
    pub fn offset(&self, angle: f64) -> f64 {
        let off = mod_2pi(angle - self.start);
        if off > TAU - ANGLE_TOL {
            off - TAU
        } else {
            off
        }
    }

    pub fn contains(&self, angle: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let off = self.offset(angle);
        off >= -ANGLE_TOL && off <= self.extent() + ANGLE_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpec {
    pub id: String,
    pub location: Point,
    pub behavior: Behavior,
    pub loops: u32,
    pub azimuth_interval: Option<AngularInterval>,
    /// Acceptable camera tilt `[lower, upper]` in radians, within `(0, π/2]`.
    pub tilt_interval: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mission {
    pub uav: UavParams,
    pub targets: Vec<TargetSpec>,
}

/// A target for which no dwell maneuver fits its visibility region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub target_id: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.target_id, self.message)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MissionFile {
    uav: UavFile,
    targets: Vec<TargetFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UavFile {
    turn_radius_m: f64,
    altitude_m: f64,
    speed_mps: f64,
    start: StartFile,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StartFile {
    x_m: f64,
    y_m: f64,
    heading_rad: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetFile {
    id: String,
    x_m: f64,
    y_m: f64,
    behavior: Behavior,
    loops: i64,
    tilt_rad: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    azimuth_rad: Option<[f64; 2]>,
}

fn finite(field: &str, value: f64) -> Result<f64, MissionError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(MissionError::field(field, "must be a finite number"))
    }
}

fn positive(field: &str, value: f64) -> Result<f64, MissionError> {
    if finite(field, value)? > 0.0 {
        Ok(value)
    } else {
        Err(MissionError::field(field, "must be positive"))
    }
}

fn convert_target(i: usize, t: TargetFile) -> Result<TargetSpec, MissionError> {
    let name = |f: &str| format!("targets[{i}].{f}");
    if t.id.is_empty() {
        return Err(MissionError::field(name("id"), "must not be empty"));
    }
    let x = finite(&name("x_m"), t.x_m)?;
    let y = finite(&name("y_m"), t.y_m)?;
    let loops = u32::try_from(t.loops)
        .map_err(|_| MissionError::field(name("loops"), "must be a non-negative integer"))?;
    let [lo, hi] = t.tilt_rad;
    finite(&name("tilt_rad"), lo)?;
    finite(&name("tilt_rad"), hi)?;
    if !(lo > 0.0 && lo <= hi && hi <= FRAC_PI_2) {
        return Err(MissionError::field(
            name("tilt_rad"),
            "requires 0 < lower <= upper <= pi/2",
        ));
    }
    let azimuth_interval = match (t.behavior, t.azimuth_rad) {
        (Behavior::Angle, Some([a, b])) => {
            finite(&name("azimuth_rad"), a)?;
            finite(&name("azimuth_rad"), b)?;
            Some(AngularInterval::from_bounds(a, b).ok_or_else(|| {
                MissionError::field(
                    name("azimuth_rad"),
                    "requires lower < upper <= lower + 2pi",
                )
            })?)
        }
        (Behavior::Angle, None) => {
            return Err(MissionError::field(
                name("azimuth_rad"),
                "required when behavior is ANGLE",
            ))
        }
        (_, Some(_)) => {
            return Err(MissionError::field(
                name("azimuth_rad"),
                "only allowed when behavior is ANGLE",
            ))
        }
        (_, None) => None,
    };
    Ok(TargetSpec {
        id: t.id,
        location: Point::new(x, y),
        behavior: t.behavior,
        loops,
        azimuth_interval,
        tilt_interval: (lo, hi),
    })
}

/// Parses and validates a mission document.
pub fn parse_mission(document: &str) -> Result<Mission, MissionError> {
    let file: MissionFile = serde_json::from_str(document)?;
    let u = file.uav;
    let start = Configuration::new(
        finite("uav.start.x_m", u.start.x_m)?,
        finite("uav.start.y_m", u.start.y_m)?,
        finite("uav.start.heading_rad", u.start.heading_rad)?,
    );
    let uav = UavParams {
        turn_radius: positive("uav.turn_radius_m", u.turn_radius_m)?,
        altitude: positive("uav.altitude_m", u.altitude_m)?,
        speed: positive("uav.speed_mps", u.speed_mps)?,
        start,
    };
    if file.targets.is_empty() {
        return Err(MissionError::field("targets", "at least one target is required"));
    }
    let mut seen = HashSet::new();
    let mut targets = Vec::with_capacity(file.targets.len());
    for (i, t) in file.targets.into_iter().enumerate() {
        let spec = convert_target(i, t)?;
        if !seen.insert(spec.id.clone()) {
            return Err(MissionError::field(
                format!("targets[{i}].id"),
                format!("duplicate id `{}`", spec.id),
            ));
        }
        targets.push(spec);
    }
    Ok(Mission { uav, targets })
}

/// Serializes a mission back to the file schema.
pub fn serialize_mission(m: &Mission) -> String {
    let file = MissionFile {
        uav: UavFile {
            turn_radius_m: m.uav.turn_radius,
            altitude_m: m.uav.altitude,
            speed_mps: m.uav.speed,
            start: StartFile {
                x_m: m.uav.start.x,
                y_m: m.uav.start.y,
                heading_rad: m.uav.start.heading(),
            },
        },
        targets: m
            .targets
            .iter()
            .map(|t| TargetFile {
                id: t.id.clone(),
                x_m: t.location.x,
                y_m: t.location.y,
                behavior: t.behavior,
                loops: i64::from(t.loops),
                tilt_rad: [t.tilt_interval.0, t.tilt_interval.1],
                azimuth_rad: t
                    .azimuth_interval
                    .map(|a| [a.start(), a.upper()]),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("mission serializes")
}

/// One finding per target that admits no dwell maneuver; empty when the mission is feasible.
pub fn validate_mission(m: &Mission) -> Vec<Finding> {
    m.targets
        .iter()
        .filter_map(|t| {
            let region = build_visibility_region(t, m.uav.altitude);
            if dwell_feasible(t, &region, m.uav.turn_radius) {
                None
            } else {
                let message = if t.behavior == Behavior::Full {
                    format!(
                        "no orbit of radius >= {} m fits in VIS (r_max = {:.3} m)",
                        m.uav.turn_radius, region.r_max
                    )
                } else {
                    format!(
                        "no radius-{} m loop fits in VIS (r_min = {:.3} m, r_max = {:.3} m)",
                        m.uav.turn_radius, region.r_min, region.r_max
                    )
                };
                Some(Finding {
                    target_id: t.id.clone(),
                    message,
                })
            }
        })
        .collect()
}

impl Mission {
    pub fn target_index(&self, id: &str) -> Option<usize> {
        self.targets.iter().position(|t| t.id == id)
    }

    /// Same mission with every target's loop count replaced.
    pub fn with_uniform_loops(&self, loops: u32) -> Mission {
        let mut m = self.clone();
        for t in &mut m.targets {
            t.loops = loops;
        }
        m
    }
}
