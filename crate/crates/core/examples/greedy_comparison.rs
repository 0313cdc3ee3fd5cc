//! Nearest-next baseline against the planner as the number of dwell loops grows.
//!
//! cargo run --release --example greedy_comparison

use dwelltour::gtsp::SolverOptions;
use dwelltour::mission::parse_mission;
use dwelltour::planner::{InlPolicy, PreparedMission, DEFAULT_ROUTE_STEP};
use dwelltour::sampling::SpacingParams;

const MISSION: &str = include_str!("../data/table1_pareto.json");

fn main() {
    let base = parse_mission(MISSION).expect("bundled mission parses");
    let sp = SpacingParams::condition(5).unwrap();
    println!("{:>4} {:>10} {:>10} {:>9}", "tau", "greedy", "planner", "gap");
    for tau in [0, 1, 2, 4] {
        let m = base.with_uniform_loops(tau);
        let prepared = PreparedMission::new(&m, &sp).expect("mission samples");
        let greedy = prepared.greedy(DEFAULT_ROUTE_STEP).expect("greedy tour");
        // a generous ε leaves the first stop unconstrained
        let planner = prepared
            .solve(f64::INFINITY, InlPolicy::BestOfAll, SolverOptions::default())
            .expect("planner tour");
        let (g, p) = (greedy.discrete.closed_time, planner.closed_time);
        println!("{tau:>4} {g:>10.1} {p:>10.1} {:>9.1}", g - p);
    }
}
