mod common;

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use dwelltour::dubins::{dubins_length, dubins_shortest_path, dubins_time, Configuration};
use dwelltour::geom::Point;
use dwelltour::gtsp::{solve_atsp_heuristic, solve_gtsp, Effort, SolverMode, SolverOptions};
use dwelltour::mission::{parse_mission, serialize_mission, AngularInterval};
use dwelltour::planner::{envelope, solve_discrete, tour_cost, InlPolicy, RunRecord};
use dwelltour::sampling::{sample_mission, SpacingParams};
use dwelltour::visibility::{build_visibility_region, circle_in_region, LoopKind, VisibilityRegion};

const R: f64 = 750.0;

fn config() -> impl Strategy<Value = Configuration> {
    (-6000.0..6000.0f64, -6000.0..6000.0f64, 0.0..TAU).prop_map(|(x, y, h)| Configuration::new(x, y, h))
}

fn exact() -> SolverOptions {
    SolverOptions {
        mode: SolverMode::Exact,
        ..SolverOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn dubins_triangle_inequality(a in config(), b in config(), c in config()) {
        let (ab, bc, ac) = (dubins_length(&a, &b, R), dubins_length(&b, &c, R), dubins_length(&a, &c, R));
        prop_assert!(ac <= (ab + bc) * (1.0 + 1e-9));
    }

    #[test]
    fn dubins_at_least_euclidean(a in config(), b in config()) {
        let d = a.position().distance(b.position());
        prop_assert!(dubins_length(&a, &b, R) >= d * (1.0 - 1e-9));
    }

    #[test]
    fn dubins_path_reaches_its_goal(a in config(), b in config()) {
        let path = dubins_shortest_path(&a, &b, R);
        prop_assert!(path.endpoint(&a).approx_eq(&b, 1e-6));
        let samples = path.sample_points(&a, 100.0);
        prop_assert!(samples.last().unwrap().approx_eq(&b, 1e-6));
        prop_assert!((dubins_time(&a, &b, R, 39.0) - path.length() / 39.0).abs() < 1e-9);
    }

    #[test]
    fn interval_membership_matches_sweep(start in 0.0..TAU, extent in 0.05..TAU) {
        let iv = AngularInterval::new(start, extent).unwrap();
        // walk the interval in fine steps and mark every degree it touches
        let steps = 20_000;
        let mut hit = [false; 360];
        for k in 0..=steps {
            let a = (start + extent * k as f64 / steps as f64).rem_euclid(TAU);
            hit[(a.to_degrees().round() as usize) % 360] = true;
        }
        for deg in 0..360 {
            let th = (deg as f64).to_radians();
            let from_edge = |e: f64| {
                let d = (th - e).rem_euclid(TAU);
                d.min(TAU - d)
            };
            // skip angles near the endpoints, where rounding decides
            if from_edge(start) < 0.02 || from_edge(start + extent) < 0.02 {
                continue;
            }
            prop_assert_eq!(iv.contains(th), hit[deg], "deg {}", deg);
        }
    }

    #[test]
    fn circle_test_implies_every_point_inside(
        cx in -3000.0..3000.0f64, cy in -3000.0..3000.0f64,
        r_min in 0.0..1500.0f64, width in 100.0..3000.0f64,
        sector in proptest::option::of((0.0..TAU, 0.3..TAU)),
        d in 0.0..4000.0f64, bearing in 0.0..TAU, radius in 10.0..1500.0f64,
    ) {
        let region = VisibilityRegion {
            center: Point::new(cx, cy),
            r_min,
            r_max: r_min + width,
            angular: sector.map_or(AngularInterval::new(0.0, TAU).unwrap(), |(s, e)| AngularInterval::new(s, e).unwrap()),
        };
        let c = Point::new(cx + d * bearing.cos(), cy + d * bearing.sin());
        if circle_in_region(c, radius, &region) {
            for k in 0..720 {
                let t = k as f64 * TAU / 720.0;
                let p = Point::new(c.x + radius * t.cos(), c.y + radius * t.sin());
                prop_assert!(region.contains(p), "point {:?}", p);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mission_round_trip(seed in any::<u64>()) {
        let m = random_mission(&mut ChaCha8Rng::seed_from_u64(seed), 5);
        let text = serialize_mission(&m);
        prop_assert_eq!(parse_mission(&text).unwrap(), m);
    }

    #[test]
    fn samples_sit_in_their_regions(seed in any::<u64>()) {
        let m = random_mission(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let sp = SpacingParams::new(400.0, PI / 4.0, PI / 4.0).unwrap();
        if let Ok(s) = sample_mission(&m, &sp) {
            for n in &s.nodes {
                let t = &m.targets[n.target_index];
                let region = build_visibility_region(t, m.uav.altitude);
                prop_assert!(region.contains(n.config.position()));
                prop_assert_eq!(n.dwell.loops, t.loops);
                if n.dwell.kind != LoopKind::None {
                    prop_assert!(n.dwell.radius >= m.uav.turn_radius - 1e-9);
                    prop_assert!(circle_in_region(n.dwell.center, n.dwell.radius, &region));
                    // the configuration lies on its loop
                    let on = (n.dwell.center.distance(n.config.position()) - n.dwell.radius).abs();
                    prop_assert!(on < 1e-6);
                }
            }
        }
    }

    #[test]
    fn tour_cost_ignores_rotation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=5);
        let sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
        let g = random_roadmap(&mut rng, &sizes);
        let mut order: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let seq: Vec<usize> = order
            .iter()
            .map(|&t| {
                let nodes: Vec<usize> = (0..g.len()).filter(|&v| g.nodes[v].target_index == t).collect();
                nodes[rng.gen_range(0..nodes.len())]
            })
            .collect();
        let base = tour_cost(&g, m, &seq).unwrap();
        for k in 1..m {
            let mut rot = seq[k..].to_vec();
            rot.extend_from_slice(&seq[..k]);
            prop_assert!((tour_cost(&g, m, &rot).unwrap() - base).abs() <= 1e-9 * base.max(1.0));
        }
    }

    #[test]
    fn every_answer_is_feasible(seed in any::<u64>(), pick in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=4);
        let sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=4)).collect();
        let g = random_roadmap(&mut rng, &sizes);
        let lo = g.start_weights.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = g.start_weights.iter().copied().fold(0.0, f64::max);
        let eps = rng.gen_range(lo..=hi);
        let reachable: Vec<usize> = (0..g.len()).filter(|&v| g.start_weights[v] <= eps).collect();
        let policy = [
            InlPolicy::Auto,
            InlPolicy::BestOfAll,
            InlPolicy::Target(g.nodes[reachable[0]].target_index),
        ][pick];
        let opts = SolverOptions { effort: Effort::Fast, seed, ..SolverOptions::default() };
        let s = solve_discrete(&g, m, eps, policy, opts).unwrap();
        prop_assert_eq!(s.sequence.len(), m);
        let mut targets: Vec<usize> = s.sequence.iter().map(|&v| g.nodes[v].target_index).collect();
        prop_assert_eq!(targets[0], s.first_target);
        targets.sort_unstable();
        targets.dedup();
        prop_assert_eq!(targets.len(), m);
        prop_assert!(s.initial_time <= eps);
        prop_assert!((s.closed_time - tour_cost(&g, m, &s.sequence).unwrap()).abs() <= 1e-9 * s.closed_time.max(1.0));
    }

    #[test]
    fn best_of_all_exact_is_optimal_and_monotone_in_epsilon(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(2..=3);
        let sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
        let g = random_roadmap(&mut rng, &sizes);
        let mut sw = g.start_weights.clone();
        sw.sort_by(f64::total_cmp);
        let mut prev = f64::INFINITY;
        for &eps in &sw {
            let s = solve_discrete(&g, m, eps, InlPolicy::BestOfAll, exact()).unwrap();
            let best = problem2_optimum(&g, m, eps).unwrap();
            prop_assert!((s.closed_time - best).abs() <= 1e-9 * best.max(1.0));
            prop_assert!(s.closed_time <= prev + 1e-9);
            prev = s.closed_time;
        }
    }

    #[test]
    fn heuristic_traces_never_rise(seed in any::<u64>(), n in 3usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_matrix(&mut rng, n);
        let run = solve_atsp_heuristic(&w, seed, Effort::Default);
        let mut tour = run.best.tour.clone();
        tour.sort_unstable();
        prop_assert_eq!(tour, (0..n).collect::<Vec<_>>());
        prop_assert!((w.cycle_cost(&run.best.tour) - run.best.cost).abs() <= 1e-9 * run.best.cost);
        for trace in &run.traces {
            prop_assert!(trace.windows(2).all(|p| p[1] <= p[0]));
        }
    }

    #[test]
    fn heuristic_gtsp_tours_are_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = metric_gtsp(&mut rng, 8, 4);
        let opts = SolverOptions { effort: Effort::Fast, seed, ..SolverOptions::default() };
        let t = solve_gtsp(&g, opts).unwrap();
        prop_assert!(g.is_valid_tour(&t.node_sequence));
        prop_assert!((g.tour_cost(&t.node_sequence) - t.cost).abs() <= 1e-9 * t.cost.max(1.0));
    }

    #[test]
    fn envelope_never_rises(values in proptest::collection::vec(proptest::option::of((0.0..500.0f64, 100.0..2000.0f64)), 1..40)) {
        let runs: Vec<RunRecord> = values
            .iter()
            .enumerate()
            .map(|(k, v)| RunRecord {
                epsilon: k as f64 * 10.0,
                initial_time: v.map(|p| p.0),
                closed_time: v.map(|p| p.1),
            })
            .collect();
        let mut prev: Option<f64> = None;
        for r in &runs {
            let e = envelope(&runs, r.epsilon);
            if let Some(p) = prev {
                prop_assert!(e.is_some_and(|x| x <= p));
            }
            prev = e.or(prev);
        }
    }
}
