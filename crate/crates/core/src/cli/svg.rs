//! Static SVG plots. Each one is a projection of a document the command also
//! writes, so nothing here recomputes planner quantities.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use super::output::PlanDocument;
use super::{GreedyRow, SweepCurve};
use crate::planner::ConvergenceRow;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];
const VERSION: &str = env!("CARGO_PKG_VERSION");

fn header(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <!-- dwelltour {VERSION} -->\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Linear map from data bounds to a pixel box with y pointing up.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
    top: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * self.width
    }

    fn py(&self, y: f64) -> f64 {
        self.top + (self.y1 - y) / (self.y1 - self.y0) * self.height
    }

    fn polyline(&self, pts: &[(f64, f64)], stroke: &str, extra: &str) -> String {
        let mut d = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "" } else { " " }, self.px(*x), self.py(*y));
        }
        format!("<polyline points=\"{d}\" fill=\"none\" stroke=\"{stroke}\" {extra}/>\n")
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    let span = (hi - lo).max(1e-9 * hi.abs().max(1.0));
    (lo - 0.05 * span, hi + 0.05 * span)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Regions, dwell circles, initial maneuver, closed route and the start marker.
pub fn route_svg(doc: &PlanDocument) -> String {
    let mut xs = vec![doc.start[0]];
    let mut ys = vec![doc.start[1]];
    for r in &doc.regions {
        xs.extend([r.center[0] - r.r_max, r.center[0] + r.r_max]);
        ys.extend([r.center[1] - r.r_max, r.center[1] + r.r_max]);
    }
    for p in doc.initial_maneuver.iter().chain(&doc.closed_route) {
        xs.push(p[0]);
        ys.push(p[1]);
    }
    let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| v.iter().copied().fold(init, f);
    let (x0, x1) = padded(fold(&xs, f64::min, f64::INFINITY), fold(&xs, f64::max, f64::NEG_INFINITY));
    let (y0, y1) = padded(fold(&ys, f64::min, f64::INFINITY), fold(&ys, f64::max, f64::NEG_INFINITY));
    // equal aspect: one meter is the same size on both axes
    let width = 800.0;
    let height = (width * (y1 - y0) / (x1 - x0)).clamp(200.0, 1600.0);
    let f = Frame {
        x0,
        x1,
        y0,
        y1: y0 + (x1 - x0) * height / width,
        left: 0.0,
        top: 0.0,
        width,
        height,
    };
    let scale = width / (x1 - x0);

    let mut s = header(width, height);
    for (i, r) in doc.regions.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let (start, extent) = r.azimuth.map_or((0.0, TAU), |a| (a[0], a[1]));
        let n = ((extent / TAU) * 180.0).ceil().max(8.0) as usize;
        let arc = |rad: f64| -> Vec<(f64, f64)> {
            (0..=n)
                .map(|k| {
                    let th = start + extent * k as f64 / n as f64;
                    (r.center[0] + rad * th.cos(), r.center[1] + rad * th.sin())
                })
                .collect()
        };
        let mut inner = arc(r.r_min);
        inner.reverse();
        // full annuli are two closed rings; sectors are one closed outline
        let rings = if r.azimuth.is_some() {
            let mut outline = arc(r.r_max);
            outline.extend(inner);
            vec![outline]
        } else {
            vec![arc(r.r_max), inner]
        };
        let mut d = String::new();
        for ring in &rings {
            for (k, (x, y)) in ring.iter().enumerate() {
                let _ = write!(d, "{}{:.2},{:.2} ", if k == 0 { "M" } else { "L" }, f.px(*x), f.py(*y));
            }
            d.push_str("Z ");
        }
        let _ = writeln!(
            s,
            "<path d=\"{}\" fill=\"{color}\" fill-opacity=\"0.12\" stroke=\"{color}\" stroke-width=\"1\" fill-rule=\"evenodd\"/>",
            d.trim_end()
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            f.px(r.center[0]),
            f.py(r.center[1]) - 4.0,
            escape(&r.target_id)
        );
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>",
            f.px(r.center[0]),
            f.py(r.center[1])
        );
    }
    for stop in &doc.stops {
        if stop.dwell.loops > 0 {
            let _ = writeln!(
                s,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"none\" stroke=\"#444\" stroke-dasharray=\"4 3\"/>",
                f.px(stop.dwell.center.x),
                f.py(stop.dwell.center.y),
                stop.dwell.radius * scale
            );
        }
    }
    let xy = |v: &[[f64; 3]]| v.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>();
    s.push_str(&f.polyline(&xy(&doc.initial_maneuver), "#888", "stroke-width=\"1.5\" stroke-dasharray=\"6 4\""));
    s.push_str(&f.polyline(&xy(&doc.closed_route), "#000", "stroke-width=\"1.5\""));
    for stop in &doc.stops {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#000\"/>",
            f.px(stop.config[0]),
            f.py(stop.config[1])
        );
    }
    let (sx, sy) = (f.px(doc.start[0]), f.py(doc.start[1]));
    let (c, sn) = (doc.start[2].cos(), doc.start[2].sin());
    // triangle pointing along the start heading
    let tip = (sx + 10.0 * c, sy - 10.0 * sn);
    let l = (sx - 6.0 * c - 5.0 * sn, sy + 6.0 * sn - 5.0 * c);
    let r = (sx - 6.0 * c + 5.0 * sn, sy + 6.0 * sn + 5.0 * c);
    let _ = writeln!(
        s,
        "<polygon points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\" fill=\"#e6550d\"/>",
        tip.0, tip.1, l.0, l.1, r.0, r.1
    );
    let _ = writeln!(
        s,
        "<text x=\"10\" y=\"20\" font-size=\"13\">initial {:.2} s, closed {:.2} s</text>",
        doc.totals.initial_time, doc.totals.closed_time
    );
    s.push_str("</svg>\n");
    s
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

/// Line chart with axes, tick labels and a legend.
fn chart(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let all: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.iter().copied()).collect();
    let bound = |f: fn(&(f64, f64)) -> f64| {
        all.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (xl, xh) = bound(|p| p.0);
    let (yl, yh) = bound(|p| p.1);
    let (x0, x1) = padded(xl, xh);
    let (y0, y1) = padded(yl, yh);
    let f = Frame {
        x0,
        x1,
        y0,
        y1,
        left: 80.0,
        top: 40.0,
        width: 620.0,
        height: 380.0,
    };
    let mut s = header(760.0, 480.0);
    let _ = writeln!(s, "<text x=\"380\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>", escape(title));
    let _ = writeln!(
        s,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000\"/>",
        f.left, f.top, f.width, f.height
    );
    for k in 0..=4 {
        let x = x0 + (x1 - x0) * k as f64 / 4.0;
        let y = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{x:.1}</text>",
            f.px(x),
            f.top + f.height + 16.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{y:.1}</text>",
            f.left - 6.0,
            f.py(y) + 4.0
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"470\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
        f.left + f.width / 2.0,
        escape(xlabel)
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{}</text>",
        f.top + f.height / 2.0,
        f.top + f.height / 2.0,
        escape(ylabel)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !ser.points.is_empty() {
            s.push_str(&f.polyline(&ser.points, color, "stroke-width=\"1.5\""));
            for (x, y) in &ser.points {
                let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{color}\"/>", f.px(*x), f.py(*y));
            }
        }
        let ly = f.top + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{ly:.2}\" font-size=\"11\" fill=\"{color}\" text-anchor=\"end\">{}</text>",
            f.left + f.width - 8.0,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn pareto_svg(curves: &[SweepCurve]) -> String {
    let series: Vec<Series> = curves
        .iter()
        .map(|c| Series {
            label: c.spacing.clone(),
            points: c
                .runs
                .iter()
                .zip(&c.envelope)
                .filter_map(|(r, e)| Some((r.epsilon, (*e)?)))
                .collect(),
        })
        .collect();
    chart("Approximate Pareto front", "epsilon (s)", "closed tour time (s)", &series)
}

pub fn greedy_svg(rows: &[GreedyRow]) -> String {
    let mut taus: Vec<u32> = rows.iter().map(|r| r.tau).collect();
    taus.dedup();
    let series: Vec<Series> = taus
        .iter()
        .map(|&t| Series {
            label: format!("tau = {t}"),
            points: rows
                .iter()
                .filter(|r| r.tau == t)
                .filter_map(|r| Some((r.epsilon, r.gap?)))
                .collect(),
        })
        .collect();
    chart("Greedy minus planner", "epsilon (s)", "gap (s)", &series)
}

pub fn converge_svg(rows: &[ConvergenceRow]) -> String {
    let with_ref = rows.iter().any(|r| r.relative_error.is_some());
    let points = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            let y = if with_ref { r.relative_error? * 100.0 } else { r.closed_time? };
            Some(((i + 1) as f64, y))
        })
        .collect();
    let ylabel = if with_ref { "relative error (%)" } else { "closed tour time (s)" };
    chart(
        "Sampling refinement",
        "spacing index",
        ylabel,
        &[Series {
            label: "planner".into(),
            points,
        }],
    )
}
