//! Shortest Dubins paths between a few configurations, with the word chosen,
//! segment lengths and the flight time at a fixed speed.
//!
//! cargo run --example dubins_paths

use std::f64::consts::{FRAC_PI_2, PI};

use dwelltour::dubins::{dubins_shortest_path, dubins_time, Configuration};

fn main() {
    let r = 750.0;
    let speed = 39.0;
    let start = Configuration::new(-2500.0, 500.0, 0.0);
    let goals = [
        Configuration::new(2500.0, 500.0, 0.0),
        Configuration::new(-2500.0, 500.0, PI),
        Configuration::new(-2000.0, 1500.0, FRAC_PI_2),
        Configuration::new(0.0, -3000.0, -FRAC_PI_2),
        Configuration::new(-2500.0, 500.0, 0.0),
    ];

    println!("{:>28}  {:>4}  {:>26}  {:>9}  {:>8}", "goal (x, y, heading)", "word", "segments (m)", "length", "time (s)");
    for goal in &goals {
        let path = dubins_shortest_path(&start, goal, r);
        let [a, b, c] = path.segment_lengths();
        println!(
            "{:>28}  {:>4}  {a:>8.1} {b:>8.1} {c:>8.1}  {:>9.1}  {:>8.2}",
            format!("({:.0}, {:.0}, {:.3})", goal.x, goal.y, goal.heading()),
            format!("{:?}", path.word),
            path.length(),
            dubins_time(&start, goal, r, speed),
        );
    }

    // the path is asymmetric: going back usually costs something else
    let (a, b) = (start, goals[2]);
    println!(
        "\nthere {:.2} s, back {:.2} s",
        dubins_time(&a, &b, r, speed),
        dubins_time(&b, &a, r, speed)
    );

    let path = dubins_shortest_path(&a, &b, r);
    let pts = path.sample_points(&a, 500.0);
    println!("sampled every 500 m: {} points, last = ({:.1}, {:.1})", pts.len(), pts[pts.len() - 1].x, pts[pts.len() - 1].y);
}
