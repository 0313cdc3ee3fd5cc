//! Visibility regions, dwell feasibility and per-target sample counts for the
//! five-target mission, across the seven spacing conditions.
//!
//! cargo run --example visibility_and_sampling

use dwelltour::mission::{parse_mission, validate_mission};
use dwelltour::sampling::{sample_mission, SPACING_CONDITIONS};
use dwelltour::visibility::{build_visibility_region, dwell_feasible};

const MISSION: &str = include_str!("../data/table1_pareto.json");

fn main() {
    let m = parse_mission(MISSION).expect("bundled mission parses");
    let r = m.uav.turn_radius;

    println!("{:<4} {:<6} {:>5} {:>9} {:>9} {:>18}  dwell", "id", "beh", "loops", "r_min", "r_max", "azimuth");
    for t in &m.targets {
        let region = build_visibility_region(t, m.uav.altitude);
        let az = if region.angular.is_full() {
            "full".to_string()
        } else {
            format!("[{:.3}, {:.3}]", region.angular.start(), region.angular.end())
        };
        println!(
            "{:<4} {:<6} {:>5} {:>9.1} {:>9.1} {az:>18}  {}",
            t.id,
            format!("{:?}", t.behavior),
            t.loops,
            region.r_min,
            region.r_max,
            if dwell_feasible(t, &region, r) { "yes" } else { "no" }
        );
    }
    println!("validation findings: {}", validate_mission(&m).len());

    println!("\nsamples per target");
    for (i, sp) in SPACING_CONDITIONS.iter().enumerate() {
        match sample_mission(&m, sp) {
            Ok(s) => println!("condition{} ({sp}): {:?}, {} total", i + 1, s.counts, s.nodes.len()),
            Err(e) => println!("condition{} ({sp}): {e}", i + 1),
        }
    }
}
