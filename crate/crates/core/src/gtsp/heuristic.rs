//! Local-search ATSP heuristic.
//!
//! Nearest-neighbour construction from a seeded start node, then Or-opt
//! relocations (segments of 1 to 3 nodes, kept in orientation) and the
//! orientation-preserving 3-opt segment swap until neither improves. Candidate
//! moves come from per-node neighbour lists.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::AtspTour;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Effort {
    Fast,
    #[default]
    Default,
    Thorough,
}

impl Effort {
    pub fn restarts(self) -> usize {
        match self {
            Effort::Fast => 1,
            Effort::Default => 8,
            Effort::Thorough => 32,
        }
    }

    fn neighbours(self) -> usize {
        match self {
            Effort::Fast => 8,
            Effort::Default => 10,
            Effort::Thorough => 16,
        }
    }
}

impl FromStr for Effort {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fast" => Ok(Effort::Fast),
            "default" => Ok(Effort::Default),
            "thorough" => Ok(Effort::Thorough),
            _ => Err(format!("unknown effort `{s}` (fast|default|thorough)")),
        }
    }
}

impl fmt::Display for Effort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Effort::Fast => "fast",
            Effort::Default => "default",
            Effort::Thorough => "thorough",
        })
    }
}

#[derive(Debug, Clone)]
pub struct HeuristicRun {
    pub best: AtspTour,
    /// Per restart, the tour cost after construction and after every applied move.
    pub traces: Vec<Vec<f64>>,
}

pub fn solve_atsp_heuristic(w: &Matrix, seed: u64, effort: Effort) -> HeuristicRun {
    let n = w.len();
    assert!(n >= 2, "tour needs at least two nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<usize> = (0..effort.restarts()).map(|_| rng.gen_range(0..n)).collect();
    let nb = Neighbours::new(w, effort.neighbours().min(n - 1));
    let scale = (0..n)
        .flat_map(|i| w.row(i).iter().copied())
        .filter(|x| x.is_finite())
        .fold(0.0f64, |a, x| a.max(x.abs()));
    let tol = 1e-12 * scale.max(1.0);

    let runs: Vec<(Vec<usize>, Vec<f64>)> = starts
        .par_iter()
        .map(|&s| {
            let mut ls = LocalSearch::new(w, &nb, nearest_neighbour(w, s), tol);
            ls.run();
            (ls.tour, ls.trace)
        })
        .collect();

    let mut best: Option<AtspTour> = None;
    let mut traces = Vec::with_capacity(runs.len());
    for (tour, trace) in runs {
        let cost = w.cycle_cost(&tour);
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(AtspTour { tour, cost });
        }
        traces.push(trace);
    }
    HeuristicRun {
        best: best.expect("at least one restart"),
        traces,
    }
}

fn nearest_neighbour(w: &Matrix, start: usize) -> Vec<usize> {
    let n = w.len();
    let mut visited = vec![false; n];
    let mut tour = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    tour.push(cur);
    for _ in 1..n {
        let row = w.row(cur);
        let mut next = usize::MAX;
        let mut best = f64::INFINITY;
        for (v, &x) in row.iter().enumerate() {
            if !visited[v] && (x < best || next == usize::MAX) {
                best = x;
                next = v;
            }
        }
        visited[next] = true;
        tour.push(next);
        cur = next;
    }
    tour
}

struct Neighbours {
    out: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
}

impl Neighbours {
    fn new(w: &Matrix, k: usize) -> Self {
        let out = (0..w.len())
            .into_par_iter()
            .map(|u| nearest(w.row(u), u, k))
            .collect();
        let wt = w.transposed();
        let into = (0..w.len())
            .into_par_iter()
            .map(|v| nearest(wt.row(v), v, k))
            .collect();
        Self { out, into }
    }
}

/// The `k` cheapest entries of `row` other than `skip`, cheapest first; ties
/// keep the lower index.
fn nearest(row: &[f64], skip: usize, k: usize) -> Vec<usize> {
    let mut top: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
    for (v, &x) in row.iter().enumerate() {
        if v == skip || (top.len() == k && x >= top[k - 1].0) {
            continue;
        }
        let at = top.partition_point(|&(y, _)| y <= x);
        top.insert(at, (x, v));
        top.truncate(k);
    }
    top.into_iter().map(|(_, v)| v).collect()
}

struct LocalSearch<'a> {
    w: &'a Matrix,
    nb: &'a Neighbours,
    tour: Vec<usize>,
    pos: Vec<usize>,
    tol: f64,
    cost: f64,
    trace: Vec<f64>,
}

impl<'a> LocalSearch<'a> {
    fn new(w: &'a Matrix, nb: &'a Neighbours, tour: Vec<usize>, tol: f64) -> Self {
        let cost = w.cycle_cost(&tour);
        let mut ls = Self {
            w,
            nb,
            pos: vec![0; tour.len()],
            tour,
            tol,
            cost,
            trace: vec![cost],
        };
        ls.reindex();
        ls
    }

    fn reindex(&mut self) {
        for (i, &v) in self.tour.iter().enumerate() {
            self.pos[v] = i;
        }
    }

    fn n(&self) -> usize {
        self.tour.len()
    }

    fn succ(&self, v: usize) -> usize {
        self.tour[(self.pos[v] + 1) % self.n()]
    }

    fn pred(&self, v: usize) -> usize {
        self.tour[(self.pos[v] + self.n() - 1) % self.n()]
    }

    /// Position of `v` counted forward from `origin`.
    fn offset(&self, origin: usize, v: usize) -> usize {
        (self.pos[v] + self.n() - self.pos[origin]) % self.n()
    }

    fn run(&mut self) {
        loop {
            let a = self.segment_swap_pass();
            let b = self.or_opt_pass();
            if !a && !b {
                break;
            }
        }
    }

    fn commit(&mut self, tour: Vec<usize>) {
        debug_assert_eq!(tour.len(), self.tour.len());
        self.tour = tour;
        self.reindex();
        let cost = self.w.cycle_cost(&self.tour);
        debug_assert!(cost <= self.cost + self.tol * 8.0);
        self.cost = cost;
        self.trace.push(cost);
    }

    /// 3-opt move that cuts arcs (a,a'), (b,b'), (c,c') and reconnects as
    /// a -> b'..c -> a'..b -> c', keeping every segment's direction.
    fn segment_swap_pass(&mut self) -> bool {
        let n = self.n();
        if n < 3 {
            return false;
        }
        let (w, nb) = (self.w, self.nb);
        let mut improved = false;
        let mut i = 0;
        while i < n {
            let a = self.tour[i];
            let a1 = self.succ(a);
            let mut applied = false;
            'search: for &b1 in &nb.out[a] {
                let ob1 = self.offset(a, b1);
                if ob1 < 2 {
                    continue;
                }
                let b = self.pred(b1);
                let g1 = w.get(a, a1) + w.get(b, b1) - w.get(a, b1);
                for &c1 in &nb.out[b] {
                    let oc1 = match self.offset(a, c1) {
                        0 => n,
                        o => o,
                    };
                    if oc1 <= ob1 {
                        continue;
                    }
                    let c = self.pred(c1);
                    let gain = g1 + w.get(c, c1) - w.get(b, c1) - w.get(c, a1);
                    if gain > self.tol {
                        let p0 = self.pos[a];
                        let rot = |k: usize| self.tour[(p0 + k) % n];
                        let mut next = Vec::with_capacity(n);
                        next.push(a);
                        next.extend((ob1..oc1).map(rot));
                        next.extend((1..ob1).map(rot));
                        next.extend((oc1..n).map(rot));
                        self.commit(next);
                        applied = true;
                        break 'search;
                    }
                }
            }
            if applied {
                improved = true;
            } else {
                i += 1;
            }
        }
        improved
    }

    /// Moves a run of 1 to 3 consecutive nodes between two other neighbours.
    fn or_opt_pass(&mut self) -> bool {
        let n = self.n();
        let w = self.w;
        let mut improved = false;
        for len in 1..=3usize {
            if n < len + 3 {
                break;
            }
            let mut i = 0;
            while i < n {
                let s0 = self.tour[i];
                let sl = self.tour[(i + len - 1) % n];
                let p = self.pred(s0);
                let nx = self.succ(sl);
                let removal = w.get(p, s0) + w.get(sl, nx) - w.get(p, nx);
                let in_seg = |ls: &Self, v: usize| ls.offset(s0, v) < len;
                let mut found = None;
                let candidates = self.nb.into[s0]
                    .iter()
                    .map(|&a| (a, self.succ(a)))
                    .chain(self.nb.out[sl].iter().map(|&b| (self.pred(b), b)));
                for (a, b) in candidates {
                    if in_seg(self, a) || in_seg(self, b) {
                        continue;
                    }
                    let gain = removal + w.get(a, b) - w.get(a, s0) - w.get(sl, b);
                    if gain > self.tol {
                        found = Some(a);
                        break;
                    }
                }
                match found {
                    Some(a) => {
                        let seg: Vec<usize> = (0..len).map(|k| self.tour[(i + k) % n]).collect();
                        let mut next = Vec::with_capacity(n);
                        for k in 0..n {
                            let v = self.tour[(i + len + k) % n];
                            if k >= n - len {
                                break;
                            }
                            next.push(v);
                            if v == a {
                                next.extend_from_slice(&seg);
                            }
                        }
                        self.commit(next);
                        improved = true;
                    }
                    None => i += 1,
                }
            }
        }
        improved
    }
}
