//! Shortest Dubins paths between planar configurations.
//!
//! A Dubins vehicle moves forward at constant speed with a bounded turning
//! radius. Every shortest path between two configurations is one of six
//! words built from left turns (L), right turns (R) and straights (S).
//! The closed-form word solutions below follow the usual normalized
//! formulation: positions are scaled by the turning radius, the frame is
//! rotated so the goal lies on the +x axis, and each word yields its three
//! segment extents or no solution.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geom::{angle_distance, mod_2pi, Point};

/// Configurations closer than this (position and heading) are treated as identical.
const COINCIDENT_TOL: f64 = 1e-9;
/// Slack on the acos domain of the turn-turn-turn words.
const CCC_SLACK: f64 = 1e-12;
/// Turn extents within this of a full revolution are snapped to zero.
const FULL_TURN_SNAP: f64 = 1e-10;

/// Planar position plus heading. The heading is always kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub x: f64,
    pub y: f64,
    heading: f64,
}

impl Configuration {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: mod_2pi(heading),
        }
    }

    pub fn at(position: Point, heading: f64) -> Self {
        Self::new(position.x, position.y, heading)
    }

    pub fn heading(&self) -> f64 {
        self.heading
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.heading.is_finite()
    }

    /// Position distance plus wrap-aware heading distance both within `tol`.
    pub fn approx_eq(&self, other: &Configuration, tol: f64) -> bool {
        self.position().distance(other.position()) <= tol
            && angle_distance(self.heading, other.heading) <= tol
    }
}

/// Segment kind within a Dubins word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Segment {
    Left,
    Straight,
    Right,
}

/// The six Dubins words, declared in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DubinsWord {
    Lsl,
    Lsr,
    Rsl,
    Rsr,
    Rlr,
    Lrl,
}

impl DubinsWord {
    pub const ALL: [DubinsWord; 6] = [
        DubinsWord::Lsl,
        DubinsWord::Lsr,
        DubinsWord::Rsl,
        DubinsWord::Rsr,
        DubinsWord::Rlr,
        DubinsWord::Lrl,
    ];

    pub fn segments(self) -> [Segment; 3] {
        use Segment::*;
        match self {
            DubinsWord::Lsl => [Left, Straight, Left],
            DubinsWord::Lsr => [Left, Straight, Right],
            DubinsWord::Rsl => [Right, Straight, Left],
            DubinsWord::Rsr => [Right, Straight, Right],
            DubinsWord::Rlr => [Right, Left, Right],
            DubinsWord::Lrl => [Left, Right, Left],
        }
    }
}

impl fmt::Display for DubinsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DubinsWord::Lsl => "LSL",
            DubinsWord::Lsr => "LSR",
            DubinsWord::Rsl => "RSL",
            DubinsWord::Rsr => "RSR",
            DubinsWord::Rlr => "RLR",
            DubinsWord::Lrl => "LRL",
        };
        f.write_str(s)
    }
}

/// A Dubins path. Turn extents are in radians, straight extents in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DubinsPath {
    pub word: DubinsWord,
    pub segment_params: [f64; 3],
    pub turn_radius: f64,
    pub total_length: f64,
}

/// Normalized inputs shared by the word solvers.
struct Normalized {
    d: f64,
    alpha: f64,
    beta: f64,
    sa: f64,
    sb: f64,
    ca: f64,
    cb: f64,
    c_ab: f64,
}

impl Normalized {
    fn new(from: &Configuration, to: &Configuration, turn_radius: f64) -> Self {
        let dx = (to.x - from.x) / turn_radius;
        let dy = (to.y - from.y) / turn_radius;
        let d = (dx * dx + dy * dy).sqrt();
        let theta = if d > 0.0 { mod_2pi(dy.atan2(dx)) } else { 0.0 };
        let alpha = mod_2pi(from.heading - theta);
        let beta = mod_2pi(to.heading - theta);
        let (sa, ca) = alpha.sin_cos();
        let (sb, cb) = beta.sin_cos();
        Self {
            d,
            alpha,
            beta,
            sa,
            sb,
            ca,
            cb,
            c_ab: ca * cb + sa * sb,
        }
    }
}

fn snap_turn(angle: f64) -> f64 {
    if TAU - angle < FULL_TURN_SNAP {
        0.0
    } else {
        angle
    }
}

/// Normalized `(t, p, q)` for one word, or `None` if the word has no solution.
fn solve_word(word: DubinsWord, n: &Normalized) -> Option<[f64; 3]> {
    let (a, b, d) = (n.alpha, n.beta, n.d);
    let (sa, sb, ca, cb, c_ab) = (n.sa, n.sb, n.ca, n.cb, n.c_ab);
    match word {
        DubinsWord::Lsl => {
            let p_sq = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sa - sb);
            if p_sq < 0.0 {
                return None;
            }
            let tmp = (cb - ca).atan2(d + sa - sb);
            Some([mod_2pi(tmp - a), p_sq.sqrt(), mod_2pi(b - tmp)])
        }
        DubinsWord::Rsr => {
            let p_sq = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sb - sa);
            if p_sq < 0.0 {
                return None;
            }
            let tmp = (ca - cb).atan2(d - sa + sb);
            Some([mod_2pi(a - tmp), p_sq.sqrt(), mod_2pi(tmp - b)])
        }
        DubinsWord::Lsr => {
            let p_sq = -2.0 + d * d + 2.0 * c_ab + 2.0 * d * (sa + sb);
            if p_sq < 0.0 {
                return None;
            }
            let p = p_sq.sqrt();
            let tmp = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
            Some([mod_2pi(tmp - a), p, mod_2pi(tmp - b)])
        }
        DubinsWord::Rsl => {
            let p_sq = -2.0 + d * d + 2.0 * c_ab - 2.0 * d * (sa + sb);
            if p_sq < 0.0 {
                return None;
            }
            let p = p_sq.sqrt();
            let tmp = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
            Some([mod_2pi(a - tmp), p, mod_2pi(b - tmp)])
        }
        DubinsWord::Rlr => {
            let c = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sa - sb)) / 8.0;
            if c.abs() > 1.0 + CCC_SLACK {
                return None;
            }
            let phi = (ca - cb).atan2(d - sa + sb);
            let p = mod_2pi(TAU - c.clamp(-1.0, 1.0).acos());
            let t = mod_2pi(a - phi + mod_2pi(p / 2.0));
            Some([t, p, mod_2pi(a - b - t + p)])
        }
        DubinsWord::Lrl => {
            let c = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sb - sa)) / 8.0;
            if c.abs() > 1.0 + CCC_SLACK {
                return None;
            }
            let phi = (ca - cb).atan2(d + sa - sb);
            let p = mod_2pi(TAU - c.clamp(-1.0, 1.0).acos());
            let t = mod_2pi(-a - phi + p / 2.0);
            Some([t, p, mod_2pi(b - a - t + p)])
        }
    }
}

/// Advances `start` along one segment by `length` meters.
fn advance(start: &Configuration, segment: Segment, length: f64, turn_radius: f64) -> Configuration {
    let h = start.heading;
    match segment {
        Segment::Straight => Configuration::new(
            start.x + length * h.cos(),
            start.y + length * h.sin(),
            h,
        ),
        Segment::Left => {
            let phi = length / turn_radius;
            let cx = start.x - turn_radius * h.sin();
            let cy = start.y + turn_radius * h.cos();
            let nh = h + phi;
            Configuration::new(cx + turn_radius * nh.sin(), cy - turn_radius * nh.cos(), nh)
        }
        Segment::Right => {
            let phi = length / turn_radius;
            let cx = start.x + turn_radius * h.sin();
            let cy = start.y - turn_radius * h.cos();
            let nh = h - phi;
            Configuration::new(cx - turn_radius * nh.sin(), cy + turn_radius * nh.cos(), nh)
        }
    }
}

impl DubinsPath {
    /// Zero-length path used for coincident configurations.
    pub fn zero(turn_radius: f64) -> Self {
        Self {
            word: DubinsWord::Lsl,
            segment_params: [0.0; 3],
            turn_radius,
            total_length: 0.0,
        }
    }

    /// The path for a single word, if that word connects the configurations.
    pub fn with_word(
        from: &Configuration,
        to: &Configuration,
        turn_radius: f64,
        word: DubinsWord,
    ) -> Option<Self> {
        Self::from_normalized(&Normalized::new(from, to, turn_radius), turn_radius, word)
    }

    fn from_normalized(n: &Normalized, turn_radius: f64, word: DubinsWord) -> Option<Self> {
        let [t, p, q] = solve_word(word, n)?;
        let middle = match word.segments()[1] {
            Segment::Straight => p * turn_radius,
            _ => snap_turn(p),
        };
        let (t, q) = (snap_turn(t), snap_turn(q));
        let p = if word.segments()[1] == Segment::Straight { p } else { middle };
        Some(Self {
            word,
            segment_params: [t, middle, q],
            turn_radius,
            total_length: (t + p + q) * turn_radius,
        })
    }

    /// Shortest path over all six words; ties go to the earlier word.
    pub fn shortest(from: &Configuration, to: &Configuration, turn_radius: f64) -> Self {
        assert!(turn_radius > 0.0, "turn radius must be positive");
        if from.approx_eq(to, COINCIDENT_TOL) {
            return Self::zero(turn_radius);
        }
        let n = Normalized::new(from, to, turn_radius);
        let mut best: Option<DubinsPath> = None;
        for word in DubinsWord::ALL {
            if let Some(path) = Self::from_normalized(&n, turn_radius, word) {
                if best.is_none_or(|b| path.total_length < b.total_length) {
                    best = Some(path);
                }
            }
        }
        best.expect("LSL or RSR always has a solution")
    }

    /// Segment lengths in meters.
    pub fn segment_lengths(&self) -> [f64; 3] {
        let segs = self.word.segments();
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = match segs[i] {
                Segment::Straight => self.segment_params[i],
                _ => self.segment_params[i] * self.turn_radius,
            };
        }
        out
    }

    pub fn length(&self) -> f64 {
        self.total_length
    }

    /// Configuration reached after `distance` meters of arc length (clamped to the path).
    pub fn sample(&self, from: &Configuration, distance: f64) -> Configuration {
        let mut remaining = distance.clamp(0.0, self.total_length);
        let mut current = *from;
        let lengths = self.segment_lengths();
        for (seg, len) in self.word.segments().into_iter().zip(lengths) {
            if remaining <= len {
                return advance(&current, seg, remaining, self.turn_radius);
            }
            current = advance(&current, seg, len, self.turn_radius);
            remaining -= len;
        }
        current
    }

    pub fn endpoint(&self, from: &Configuration) -> Configuration {
        self.sample(from, self.total_length)
    }

    /// Evenly spaced configurations, at most `step` apart, from start to end inclusive.
    pub fn sample_points(&self, from: &Configuration, step: f64) -> Vec<Configuration> {
        assert!(step > 0.0, "sampling step must be positive");
        if self.total_length <= 0.0 {
            return vec![*from];
        }
        let intervals = ((self.total_length / step) - 1e-9).ceil().max(1.0) as usize;
        let spacing = self.total_length / intervals as f64;
        (0..=intervals)
            .map(|i| self.sample(from, spacing * i as f64))
            .collect()
    }
}

pub fn dubins_shortest_path(from: &Configuration, to: &Configuration, turn_radius: f64) -> DubinsPath {
    DubinsPath::shortest(from, to, turn_radius)
}

/// Length of the shortest path, without building it.
pub fn dubins_length(from: &Configuration, to: &Configuration, turn_radius: f64) -> f64 {
    if from.approx_eq(to, COINCIDENT_TOL) {
        return 0.0;
    }
    let n = Normalized::new(from, to, turn_radius);
    let mut best = f64::INFINITY;
    for word in DubinsWord::ALL {
        if let Some([t, p, q]) = solve_word(word, &n) {
            let p = if word.segments()[1] == Segment::Straight { p } else { snap_turn(p) };
            let len = (snap_turn(t) + p + snap_turn(q)) * turn_radius;
            if len < best {
                best = len;
            }
        }
    }
    best
}

/// Flight time along the shortest path at constant `speed`.
pub fn dubins_time(from: &Configuration, to: &Configuration, turn_radius: f64, speed: f64) -> f64 {
    assert!(speed > 0.0, "speed must be positive");
    dubins_length(from, to, turn_radius) / speed
}

pub fn sample_path_points(path: &DubinsPath, from: &Configuration, step: f64) -> Vec<Configuration> {
    path.sample_points(from, step)
}

/// Points along `loops` full circles of `radius` flown from `start` in the given direction.
pub fn sample_circle(start: &Configuration, radius: f64, left: bool, loops: u32, step: f64) -> Vec<Configuration> {
    let total = loops as f64 * TAU * radius;
    if total <= 0.0 {
        return vec![*start];
    }
    let seg = if left { Segment::Left } else { Segment::Right };
    let intervals = ((total / step) - 1e-9).ceil().max(4.0) as usize;
    let spacing = total / intervals as f64;
    (0..=intervals)
        .map(|i| advance(start, seg, spacing * i as f64, radius))
        .collect()
}
