//! Approximate Pareto front (initial time vs closed tour time) for the
//! five-target mission at two sampling conditions. Conditions 1-4 leave the
//! ANGLE target T2 without samples, so the coarsest usable pair is 5 and 6.
//!
//! cargo run --release --example pareto_front

use dwelltour::cli::linspace;
use dwelltour::gtsp::SolverOptions;
use dwelltour::mission::parse_mission;
use dwelltour::planner::{pareto_sweep, InlPolicy};
use dwelltour::sampling::SpacingParams;

const MISSION: &str = include_str!("../data/table1_pareto.json");

fn main() {
    let m = parse_mission(MISSION).expect("bundled mission parses");
    let eps = linspace(0.0, 400.0, 17);
    let fronts: Vec<_> = [5, 6]
        .iter()
        .map(|&c| {
            let sp = SpacingParams::condition(c).unwrap();
            (c, pareto_sweep(&m, &sp, &eps, InlPolicy::BestOfAll, SolverOptions::default()))
        })
        .collect();

    print!("{:>8}", "eps");
    for (c, _) in &fronts {
        print!("  {:>14}", format!("condition{c}"));
    }
    println!();
    for (k, e) in eps.iter().enumerate() {
        print!("{e:>8.1}");
        for (_, front) in &fronts {
            let cell = match front {
                Ok(points) => points[k].closed_time_envelope.map_or("-".into(), |v| format!("{v:.1}")),
                Err(err) => format!("({err})"),
            };
            print!("  {cell:>14}");
        }
        println!();
    }
}
