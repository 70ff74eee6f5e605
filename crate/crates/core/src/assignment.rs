//! Exact assignment problems on square rational cost matrices.

use crate::rational::Rational;
use num_traits::Zero;
use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;

/// Minimum-cost perfect assignment. Returns the total cost and the column
/// assigned to every row.
pub fn min_cost_assignment(cost: &[Vec<Rational>]) -> (Rational, Vec<usize>) {
    let n = cost.len();
    if n == 0 {
        return (Rational::zero(), Vec::new());
    }
    assert!(cost.iter().all(|r| r.len() == n), "cost matrix must be square");
    // Potentials and the shortest augmenting path search, 1-based with a
    // virtual column 0.
    let mut u = vec![Rational::zero(); n + 1];
    let mut v = vec![Rational::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<Rational>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = &cost[i0 - 1][j - 1] - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().unwrap();
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    let total = assign
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (i, &j)| acc + &cost[i][j]);
    (total, assign)
}

/// Perfect matching using only entries accepted by `allowed`, if one exists.
pub fn perfect_matching(n: usize, allowed: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    let mut g = UnGraph::<(), ()>::with_capacity(2 * n, n * n);
    let nodes: Vec<_> = (0..2 * n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if allowed(i, j) {
                g.add_edge(nodes[i], nodes[n + j], ());
            }
        }
    }
    let m = maximum_matching(&g);
    if m.len() != n {
        return None;
    }
    let mut assign = vec![0; n];
    for (a, b) in m.edges() {
        let (a, b) = (a.index().min(b.index()), a.index().max(b.index()));
        assign[a] = b - n;
    }
    Some(assign)
}

/// Minimum over perfect assignments of the largest cost used.
pub fn bottleneck_assignment(cost: &[Vec<Rational>]) -> (Rational, Vec<usize>) {
    let n = cost.len();
    if n == 0 {
        return (Rational::zero(), Vec::new());
    }
    let mut values: Vec<&Rational> = cost.iter().flatten().collect();
    values.sort();
    values.dedup();
    let (mut lo, mut hi) = (0, values.len() - 1);
    let mut best = perfect_matching(n, |i, j| cost[i][j] <= *values[hi]).expect("the full bipartite graph has a perfect matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(n, |i, j| cost[i][j] <= *values[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    (values[hi].clone(), best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn matrix(raw: &[Vec<i64>]) -> Vec<Vec<Rational>> {
        raw.iter().map(|r| r.iter().map(|&x| ratio(x, 3)).collect()).collect()
    }

    #[test]
    fn small_cases() {
        let c = matrix(&[vec![4, 1, 3], vec![2, 0, 5], vec![3, 2, 2]]);
        let (v, a) = min_cost_assignment(&c);
        assert_eq!(v, int(5) / int(3));
        assert_eq!(a, vec![1, 0, 2]);
        let (b, _) = bottleneck_assignment(&c);
        assert_eq!(b, int(2) / int(3));
        assert_eq!(min_cost_assignment(&[]).0, int(0));
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(n in 1usize..6, seed in proptest::collection::vec(-20i64..40, 36)) {
            let raw: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| seed[i * 6 + j]).collect()).collect();
            let c = matrix(&raw);
            let perms = permutations(n);
            let sum = |p: &Vec<usize>| p.iter().enumerate().fold(int(0), |a, (i, &j)| a + &c[i][j]);
            let max = |p: &Vec<usize>| p.iter().enumerate().map(|(i, &j)| c[i][j].clone()).max().unwrap();
            let best = perms.iter().map(sum).min().unwrap();
            let bott = perms.iter().map(max).min().unwrap();
            let (v, a) = min_cost_assignment(&c);
            prop_assert_eq!(&v, &best);
            prop_assert_eq!(sum(&a), best);
            let (bv, ba) = bottleneck_assignment(&c);
            prop_assert_eq!(&bv, &bott);
            prop_assert_eq!(max(&ba), bott);
        }
    }
}
