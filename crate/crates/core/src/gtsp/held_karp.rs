//! Held–Karp dynamic program for small asymmetric TSPs.

use super::{AtspTour, GtspError};
use crate::matrix::Matrix;

pub const HELD_KARP_MAX_NODES: usize = 15;

/// Optimal cyclic tour starting at node 0. Among optimal tours the
/// lexicographically smallest is returned.
pub fn solve_atsp_exact(w: &Matrix) -> Result<AtspTour, GtspError> {
    let n = w.len();
    if n > HELD_KARP_MAX_NODES {
        return Err(GtspError::TooLarge {
            size: n,
            limit: HELD_KARP_MAX_NODES,
        });
    }
    if n < 2 {
        return Err(GtspError::TooSmall);
    }
    // Nodes 1..n are bit k-1. g[mask][j]: cheapest path from j through every
    // node of `mask` (j excluded) and back to 0.
    let k = n - 1;
    let full = (1usize << k) - 1;
    let mut g = vec![f64::INFINITY; (full + 1) * k];
    for j in 0..k {
        g[j] = w.get(j + 1, 0);
    }
    for mask in 1..=full {
        for j in 0..k {
            if mask & (1 << j) != 0 {
                continue;
            }
            let mut best = f64::INFINITY;
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let c = w.get(j + 1, i + 1) + g[(mask & !(1 << i)) * k + i];
                if c < best {
                    best = c;
                }
            }
            g[mask * k + j] = best;
        }
    }
    let total = |mask: usize, j: usize| w.get(0, j + 1) + g[(mask & !(1 << j)) * k + j];
    let cost = (0..k).map(|j| total(full, j)).fold(f64::INFINITY, f64::min);

    // walk forward choosing the smallest index that stays optimal
    let tol = 1e-9 * (1.0 + cost.abs());
    let mut tour = vec![0usize];
    let mut mask = full;
    let mut from = 0usize;
    let mut remaining = cost;
    while mask != 0 {
        let mut chosen = None;
        let mut rest = mask;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let c = w.get(from, j + 1) + g[(mask & !(1 << j)) * k + j];
            if c <= remaining + tol {
                chosen = Some((j, remaining - w.get(from, j + 1)));
                break;
            }
        }
        let (j, left) = chosen.expect("optimal continuation exists");
        tour.push(j + 1);
        mask &= !(1 << j);
        from = j + 1;
        remaining = left;
    }
    Ok(AtspTour {
        cost: w.cycle_cost(&tour),
        tour,
    })
}
