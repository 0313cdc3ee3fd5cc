//! Plans the two-target mission at ε = 130 s and prints the stops and legs.
//! Pass a condition number (1..7) to change the sampling; default 5.
//!
//! cargo run --release --example plan_tour -- 7

use dwelltour::gtsp::SolverOptions;
use dwelltour::mission::parse_mission;
use dwelltour::planner::{plan, InlPolicy};
use dwelltour::sampling::SpacingParams;

const MISSION: &str = include_str!("../data/table3_convergence.json");

fn main() {
    let cond: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let sp = SpacingParams::condition(cond).expect("condition 1..7");
    let m = parse_mission(MISSION).expect("bundled mission parses");

    let result = match plan(&m, &sp, 130.0, InlPolicy::BestOfAll, SolverOptions::default()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let d = &result.discrete;
    println!("condition{cond}: initial {:.2} s, closed {:.2} s", d.initial_time, d.closed_time);
    for s in &result.stops {
        println!(
            "  {} at ({:.0}, {:.0}) heading {:.3}, {:?} x{} ({:.1} s)",
            m.targets[s.target_index].id,
            s.config.x,
            s.config.y,
            s.config.heading(),
            s.dwell.kind,
            s.dwell.loops,
            s.dwell_seconds
        );
    }
    for leg in &result.per_leg {
        println!("  leg {} -> {}: dwell {:.1} s + flight {:.1} s", leg.from, leg.to, leg.dwell_seconds, leg.dubins_seconds);
    }
    println!(
        "route: {} points before the first stop, {} in the closed loop",
        result.initial_maneuver.len(),
        result.closed_route.len()
    );
}
