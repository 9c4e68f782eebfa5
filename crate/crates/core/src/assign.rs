//! Bottleneck assignment: the pairing that minimizes the largest cost.

use alloc::vec;
use alloc::vec::Vec;

/// Returns `(bottleneck, perm)` where `perm[i]` is the column paired with row
/// `i` and `bottleneck` is the smallest achievable maximum of
/// `cost[i * n + perm[i]]` over all permutations.
pub fn bottleneck_assignment(cost: &[f64], n: usize) -> (f64, Vec<usize>) {
    assert_eq!(cost.len(), n * n);
    if n == 0 {
        return (0.0, Vec::new());
    }
    let mut levels: Vec<f64> = cost.to_vec();
    levels.sort_by(|a, b| a.total_cmp(b));
    levels.dedup();
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(cost, n, levels[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let perm = perfect_matching(cost, n, levels[lo]).expect("the largest level admits every pairing");
    (levels[lo], perm)
}

/// Kuhn's augmenting paths on the graph of edges with cost <= threshold.
fn perfect_matching(cost: &[f64], n: usize, threshold: f64) -> Option<Vec<usize>> {
    let mut col_owner: Vec<Option<usize>> = vec![None; n];
    for row in 0..n {
        let mut seen = vec![false; n];
        if !augment(cost, n, threshold, row, &mut seen, &mut col_owner) {
            return None;
        }
    }
    let mut perm = vec![0; n];
    for (col, owner) in col_owner.iter().enumerate() {
        perm[owner.expect("perfect matching")] = col;
    }
    Some(perm)
}

fn augment(
    cost: &[f64],
    n: usize,
    threshold: f64,
    row: usize,
    seen: &mut [bool],
    col_owner: &mut [Option<usize>],
) -> bool {
    for col in 0..n {
        if seen[col] || cost[row * n + col] > threshold {
            continue;
        }
        seen[col] = true;
        let free = match col_owner[col] {
            None => true,
            Some(other) => augment(cost, n, threshold, other, seen, col_owner),
        };
        if free {
            col_owner[col] = Some(row);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(cost: &[f64], n: usize) -> f64 {
        fn go(cost: &[f64], n: usize, row: usize, used: &mut Vec<bool>, worst: f64, best: &mut f64) {
            if row == n {
                *best = best.min(worst);
                return;
            }
            for col in 0..n {
                if !used[col] {
                    used[col] = true;
                    go(cost, n, row + 1, used, worst.max(cost[row * n + col]), best);
                    used[col] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        go(cost, n, 0, &mut vec![false; n], 0.0, &mut best);
        best
    }

    #[test]
    fn matches_permutation_search() {
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in 1..=6 {
            for _ in 0..20 {
                let cost: Vec<f64> = (0..n * n).map(|_| next()).collect();
                let (b, perm) = bottleneck_assignment(&cost, n);
                assert_eq!(b, brute(&cost, n));
                let mut cols = perm.clone();
                cols.sort();
                assert_eq!(cols, (0..n).collect::<Vec<_>>());
                assert!(perm.iter().enumerate().all(|(i, &j)| cost[i * n + j] <= b));
            }
        }
    }
}
