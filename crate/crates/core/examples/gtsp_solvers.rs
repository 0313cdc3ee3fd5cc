//! One random clustered instance through every solver: exhaustive enumeration,
//! Noon-Bean + Held-Karp, and Noon-Bean + local search.
//!
//! cargo run --release --example gtsp_solvers

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dwelltour::gtsp::{
    brute_force_gtsp, noon_bean_transform, solve_gtsp, Effort, GtspInstance, SolverMode, SolverOptions,
};
use dwelltour::matrix::Matrix;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sizes = [2, 3, 2, 2, 3];
    let n: usize = sizes.iter().sum();
    let w = Matrix::from_fn(n, |i, j| if i == j { 0.0 } else { rng.gen_range(1.0..100.0) });
    let mut clusters = Vec::new();
    let mut next = 0;
    for s in sizes {
        clusters.push((next..next + s).collect::<Vec<_>>());
        next += s;
    }
    let g = GtspInstance::new(w, clusters).unwrap();

    let atsp = noon_bean_transform(&g);
    println!("{} nodes in {} clusters; penalty {:.1}", n, g.cluster_count(), atsp.penalty);

    let brute = brute_force_gtsp(&g).unwrap();
    println!("enumeration   {:>8.3}  {:?}", brute.cost, brute.node_sequence);
    for (name, mode) in [("held-karp", SolverMode::Exact), ("local search", SolverMode::Heuristic)] {
        let opts = SolverOptions { mode, effort: Effort::Default, seed: 0 };
        let t = solve_gtsp(&g, opts).unwrap();
        println!("{name:<13} {:>8.3}  {:?}  proven {}", t.cost, t.node_sequence, t.proven_optimal);
    }
}
