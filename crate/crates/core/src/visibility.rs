//! Visibility regions, dwell-loop feasibility and dwell-loop membership.
//!
//! A target's visibility region is the annulus (or annular sector, for
//! `ANGLE` targets) of ground positions from which the camera tilt stays in
//! the target's tilt interval. Azimuth is the bearing of the UAV as seen from
//! the target, counter-clockwise from +x; flip [`AZIMUTH_OFFSET`] to `π` to
//! read the interval as the camera look direction instead.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use crate::dubins::Configuration;
use crate::geom::{angle_distance, Point};
use crate::mission::{AngularInterval, Behavior, TargetSpec, ANGLE_TOL};

/// Added to the target-to-UAV bearing before testing it against an azimuth interval.
pub const AZIMUTH_OFFSET: f64 = 0.0;
/// Radial slack in meters for region and circle containment.
pub const RADIAL_TOL: f64 = 1e-6;
/// Heading slack for tangency of target-centered orbits.
pub const TANGENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityRegion {
    pub center: Point,
    pub r_min: f64,
    pub r_max: f64,
    pub angular: AngularInterval,
}

impl VisibilityRegion {
    pub fn contains(&self, p: Point) -> bool {
        let d = self.center.distance(p);
        if d < self.r_min - RADIAL_TOL || d > self.r_max + RADIAL_TOL {
            return false;
        }
        if self.angular.is_full() {
            return true;
        }
        // the apex of a sector with r_min = 0 belongs to every bearing
        d <= RADIAL_TOL || self.angular.contains(self.center.bearing_to(p) + AZIMUTH_OFFSET)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LoopKind {
    None,
    OrbitTarget,
    OrbitPivot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Ccw,
    Cw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DwellLoop {
    pub kind: LoopKind,
    pub center: Point,
    pub radius: f64,
    pub direction: Direction,
    pub loops: u32,
}

impl DwellLoop {
    pub fn none(at: Point) -> Self {
        Self {
            kind: LoopKind::None,
            center: at,
            radius: 0.0,
            direction: Direction::Ccw,
            loops: 0,
        }
    }
}

pub fn build_visibility_region(t: &TargetSpec, altitude: f64) -> VisibilityRegion {
    let (lo, hi) = t.tilt_interval;
    let r_min = if hi >= FRAC_PI_2 { 0.0 } else { altitude / hi.tan() };
    let r_max = altitude / lo.tan();
    let angular = match (t.behavior, t.azimuth_interval) {
        (Behavior::Angle, Some(iv)) => iv,
        _ => AngularInterval::FULL,
    };
    VisibilityRegion {
        center: t.location,
        r_min,
        r_max,
        angular,
    }
}

/// Whether the whole circle of `radius` about `center` lies in `region`.
///
/// Points of the circle sit at distances `[|d - radius|, d + radius]` from the
/// region center. For sectors the circle must also exclude the center and its
/// bearings `bearing ± asin(radius / d)` must stay inside the angular interval.
pub fn circle_in_region(center: Point, radius: f64, region: &VisibilityRegion) -> bool {
    let d = region.center.distance(center);
    if (d - radius).abs() < region.r_min - RADIAL_TOL || d + radius > region.r_max + RADIAL_TOL {
        return false;
    }
    if region.angular.is_full() {
        return true;
    }
    if radius >= d {
        return false;
    }
    let half = (radius / d).asin();
    let bearing = region.center.bearing_to(center) + AZIMUTH_OFFSET;
    let off = region.angular.offset(bearing - half);
    off >= -ANGLE_TOL && off + 2.0 * half <= region.angular.extent() + ANGLE_TOL
}

/// Whether target `t` admits at least one dwell maneuver inside `region`.
pub fn dwell_feasible(t: &TargetSpec, region: &VisibilityRegion, turn_radius: f64) -> bool {
    let (r_min, r_max) = (region.r_min, region.r_max);
    if r_max < r_min - RADIAL_TOL {
        return false;
    }
    if t.loops == 0 {
        return true;
    }
    match t.behavior {
        Behavior::Full => turn_radius.max(r_min) <= r_max + RADIAL_TOL,
        Behavior::Any | Behavior::Angle => {
            let r = turn_radius;
            // pivot outside the circle's own disk: d in [r_min + r, r_max - r]
            let far = r_max - r;
            let outside_ok = far >= r_min + r - RADIAL_TOL;
            if region.angular.is_full() {
                // or a pivot close to the target so the circle encloses it
                let enclosing_ok = r_min < r && r_min <= (r - r_min).min(r_max - r) + RADIAL_TOL;
                outside_ok || enclosing_ok
            } else {
                outside_ok
                    && far > r
                    && 2.0 * (r / far).asin() <= region.angular.extent() + ANGLE_TOL
            }
        }
    }
}

/// Centers of the left and right turning circles tangent to `v`.
pub fn turning_centers(v: &Configuration, radius: f64) -> (Point, Point) {
    let h = v.heading();
    let (s, c) = h.sin_cos();
    (
        Point::new(v.x - radius * s, v.y + radius * c),
        Point::new(v.x + radius * s, v.y - radius * c),
    )
}

/// The dwell loop that starts and ends at `v`, if `v` belongs to the target's dwell set.
pub fn config_in_dwl(
    v: &Configuration,
    t: &TargetSpec,
    region: &VisibilityRegion,
    turn_radius: f64,
) -> Option<DwellLoop> {
    let pos = v.position();
    if t.loops == 0 {
        return region.contains(pos).then(|| DwellLoop::none(pos));
    }
    match t.behavior {
        Behavior::Full => {
            let rho = t.location.distance(pos);
            if rho < turn_radius.max(region.r_min) - RADIAL_TOL || rho > region.r_max + RADIAL_TOL {
                return None;
            }
            let bearing = t.location.bearing_to(pos);
            let direction = if angle_distance(v.heading(), bearing + FRAC_PI_2) <= TANGENT_TOL {
                Direction::Ccw
            } else if angle_distance(v.heading(), bearing - FRAC_PI_2) <= TANGENT_TOL {
                Direction::Cw
            } else {
                return None;
            };
            Some(DwellLoop {
                kind: LoopKind::OrbitTarget,
                center: t.location,
                radius: rho,
                direction,
                loops: t.loops,
            })
        }
        Behavior::Any | Behavior::Angle => {
            let (left, right) = turning_centers(v, turn_radius);
            let fits = |c: Point| region.contains(c) && circle_in_region(c, turn_radius, region);
            let (center, direction) = if fits(left) {
                (left, Direction::Ccw)
            } else if fits(right) {
                (right, Direction::Cw)
            } else {
                return None;
            };
            Some(DwellLoop {
                kind: LoopKind::OrbitPivot,
                center,
                radius: turn_radius,
                direction,
                loops: t.loops,
            })
        }
    }
}

pub fn dwell_time(dwell: &DwellLoop, speed: f64) -> f64 {
    match dwell.kind {
        LoopKind::None => 0.0,
        _ => f64::from(dwell.loops) * TAU * dwell.radius / speed,
    }
}

/// Heading of a target-centered orbit passing through bearing `bearing`.
pub fn orbit_heading(bearing: f64, direction: Direction) -> f64 {
    match direction {
        Direction::Ccw => bearing + FRAC_PI_2,
        Direction::Cw => bearing - FRAC_PI_2,
    }
}
