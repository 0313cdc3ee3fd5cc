//! Closed tour time at ε = 130 s as the sampling is refined, against the
//! known optimum for the two-target mission.
//!
//! cargo run --release --example convergence

use dwelltour::gtsp::SolverOptions;
use dwelltour::mission::parse_mission;
use dwelltour::planner::{convergence_sweep, InlPolicy};
use dwelltour::sampling::SPACING_CONDITIONS;

const MISSION: &str = include_str!("../data/table3_convergence.json");
const REFERENCE: f64 = 848.62;

fn main() {
    let m = parse_mission(MISSION).expect("bundled mission parses");
    let rows = convergence_sweep(&m, 130.0, &SPACING_CONDITIONS, InlPolicy::BestOfAll, SolverOptions::default(), Some(REFERENCE))
        .expect("mission is valid");
    for (i, row) in rows.iter().enumerate() {
        match (row.closed_time, row.relative_error) {
            (Some(c), Some(e)) => println!("condition{} {:>6} nodes  {c:>8.2} s  {:+.2}%", i + 1, row.node_counts.iter().sum::<usize>(), e * 100.0),
            _ => println!("condition{}  {}", i + 1, row.note.as_deref().unwrap_or("no result")),
        }
    }
}
