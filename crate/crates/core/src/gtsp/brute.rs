//! Exhaustive GTSP enumeration, used as the reference oracle.

use super::{GtspError, GtspInstance, GtspTour};

/// Upper bound on node choices × cluster orders.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

/// Tries every cluster order (cluster 0 first) and every node choice. Ties keep
/// the first tour found.
pub fn brute_force_gtsp(g: &GtspInstance) -> Result<GtspTour, GtspError> {
    let m = g.cluster_count();
    let choices: u128 = g.clusters().iter().map(|c| c.len() as u128).product();
    let orders: u128 = (1..m as u128).product();
    let size = choices.saturating_mul(orders.max(1));
    if size > BRUTE_FORCE_LIMIT {
        return Err(GtspError::EnumerationTooLarge(size));
    }
    if m == 1 {
        return Ok(GtspTour {
            node_sequence: vec![g.clusters()[0][0]],
            cost: 0.0,
            proven_optimal: true,
        });
    }

    let mut best: Option<GtspTour> = None;
    let mut order: Vec<usize> = (1..m).collect();
    loop {
        let mut pick = vec![0usize; m];
        loop {
            let seq: Vec<usize> = std::iter::once(0)
                .chain(order.iter().copied())
                .zip(&pick)
                .map(|(c, &i)| g.clusters()[c][i])
                .collect();
            let cost = g.tour_cost(&seq);
            if best.as_ref().is_none_or(|b| cost < b.cost) {
                best = Some(GtspTour {
                    node_sequence: seq,
                    cost,
                    proven_optimal: true,
                });
            }
            if !advance_odometer(&mut pick, |k| {
                let c = if k == 0 { 0 } else { order[k - 1] };
                g.clusters()[c].len()
            }) {
                break;
            }
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(best.expect("at least one tour"))
}

fn advance_odometer(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < radix(k) {
            return true;
        }
        digits[k] = 0;
    }
    false
}

/// Lexicographic next permutation; false after the last one.
pub(super) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}
