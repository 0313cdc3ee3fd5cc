//! Planar points and angle helpers shared by the geometric modules.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

/// A point in the ground plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    /// Bearing of `other` as seen from `self`, counter-clockwise from +x, in `[0, 2π)`.
    pub fn bearing_to(self, other: Point) -> f64 {
        mod_2pi((other.y - self.y).atan2(other.x - self.x))
    }

    /// The point at `distance` from `self` along `bearing`.
    pub fn offset(self, bearing: f64, distance: f64) -> Point {
        Point::new(
            self.x + distance * bearing.cos(),
            self.y + distance * bearing.sin(),
        )
    }
}

/// Wraps an angle into `[0, 2π)`.
#[inline]
pub fn mod_2pi(angle: f64) -> f64 {
    if (0.0..TAU).contains(&angle) {
        return angle;
    }
    let wrapped = angle - TAU * (angle / TAU).floor();
    // rounding can land exactly on TAU (or a hair below zero) for tiny negative inputs
    if (0.0..TAU).contains(&wrapped) {
        wrapped
    } else {
        0.0
    }
}

/// Smallest absolute difference between two angles, in `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = mod_2pi(a - b);
    d.min(TAU - d)
}
