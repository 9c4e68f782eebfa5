mod common;

use std::time::Instant;

use common::*;
use majorana_core::{matching_sums, Mat3, MatchingSums, Vec3, WeightedGraph};
use rand::Rng;

/// Sum over all partial matchings of solid and open dots, by number of links.
/// Open dots are vertices like any other but must be linked.
fn exhaustive(graph: &WeightedGraph, mu: usize, nu: usize) -> Vec<f64> {
    let ns = graph.n_solid();
    let no = graph.n_open();
    let total = ns + no;
    let index = [mu, nu];
    let weight = |a: usize, b: usize| -> f64 {
        match (a < ns, b < ns) {
            (true, true) => graph.solid_solid(a, b),
            (true, false) => graph.solid_open(a)[index[b - ns]],
            (false, true) => graph.solid_open(b)[index[a - ns]],
            (false, false) => {
                if mu == nu {
                    -2.0
                } else {
                    0.0
                }
            }
        }
    };
    let mut sums = vec![0.0; total / 2 + 1];
    fn walk(
        used: &mut Vec<bool>,
        start: usize,
        links: usize,
        product: f64,
        ns: usize,
        weight: &dyn Fn(usize, usize) -> f64,
        sums: &mut Vec<f64>,
    ) {
        let Some(v) = (start..used.len()).find(|&v| !used[v]) else {
            sums[links] += product;
            return;
        };
        used[v] = true;
        if v < ns {
            // leave v unlinked
            walk(used, v + 1, links, product, ns, weight, sums);
        }
        for w in (v + 1)..used.len() {
            if !used[w] {
                used[w] = true;
                walk(used, v + 1, links + 1, product * weight(v, w), ns, weight, sums);
                used[w] = false;
            }
        }
        used[v] = false;
    }
    walk(&mut vec![false; total], 0, 0, 1.0, ns, &weight, &mut sums);
    sums
}

fn random_graph(rng: &mut impl Rng, n: usize, n_open: usize) -> WeightedGraph {
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            let w = rng.gen_range(0.0..1.0);
            d[i * n + j] = w;
            d[j * n + i] = w;
        }
    }
    let open = (0..n).map(|_| Vec3::from_fn(|_, _| rng.gen_range(-1.0..1.0))).collect();
    WeightedGraph::new(d, open, n_open).unwrap()
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-12 * scale.max(1e-300)
}

#[test]
fn dp_equals_enumeration() {
    let mut rng = rng(30);
    for n in 0..=8 {
        for n_open in 0..=2 {
            for _ in 0..3 {
                let g = random_graph(&mut rng, n, n_open);
                let sums = matching_sums(&g).unwrap();
                match (&sums, n_open) {
                    (MatchingSums::Scalar(v), 0) => {
                        let e = exhaustive(&g, 0, 0);
                        let scale = e.iter().map(|x| x.abs()).fold(0.0, f64::max);
                        for (k, x) in v.iter().enumerate() {
                            assert!(close(*x, e[k], scale), "n={n} k={k}: {x} vs {}", e[k]);
                        }
                    }
                    (MatchingSums::Vector(v), 1) => {
                        for mu in 0..3 {
                            let e = exhaustive(&g, mu, 0);
                            let scale = e.iter().map(|x| x.abs()).fold(0.0, f64::max);
                            for (k, x) in v.iter().enumerate() {
                                let expected = e.get(k).copied().unwrap_or(0.0);
                                assert!(close(x[mu], expected, scale), "n={n} k={k} mu={mu}");
                            }
                        }
                    }
                    (MatchingSums::Matrix(v), 2) => {
                        for mu in 0..3 {
                            for nu in 0..3 {
                                let e = exhaustive(&g, mu, nu);
                                let scale = e.iter().map(|x| x.abs()).fold(0.0, f64::max);
                                for (k, x) in v.iter().enumerate() {
                                    let expected = e.get(k).copied().unwrap_or(0.0);
                                    assert!(close(x[(mu, nu)], expected, scale), "n={n} k={k} {mu}{nu}");
                                }
                            }
                        }
                    }
                    _ => panic!("wrong shape"),
                }
            }
        }
    }
}

fn count(two_j: u64, n: u64) -> f64 {
    let fact = |k: u64| (1..=k).map(|x| x as f64).product::<f64>();
    fact(two_j) / (fact(n) * 2f64.powi(n as i32) * fact(two_j - 2 * n))
}

#[test]
fn unit_weights_count_matchings() {
    for two_j in 0..=16usize {
        let mut d = vec![1.0; two_j * two_j];
        for i in 0..two_j {
            d[i * two_j + i] = 0.0;
        }
        let g = WeightedGraph::new(d, vec![Vec3::zeros(); two_j], 0).unwrap();
        let MatchingSums::Scalar(v) = matching_sums(&g).unwrap() else { panic!() };
        assert_eq!(v.len(), two_j / 2 + 1);
        for (n, x) in v.iter().enumerate() {
            assert_eq!(*x, count(two_j as u64, n as u64), "2j={two_j} n={n}");
        }
    }
}

#[test]
fn twenty_stars_are_fast() {
    let mut rng = rng(31);
    let g = random_graph(&mut rng, 20, 2);
    let start = Instant::now();
    let MatchingSums::Matrix(v) = matching_sums(&g).unwrap() else { panic!() };
    let elapsed = start.elapsed();
    assert_eq!(v.len(), 12);
    assert!(v.iter().all(|m| m.iter().all(|x| x.is_finite())));
    assert!(elapsed.as_secs_f64() < 10.0, "{elapsed:?}");
}

#[test]
fn open_pair_alone() {
    let g = WeightedGraph::new(vec![], vec![], 2).unwrap();
    let MatchingSums::Matrix(v) = matching_sums(&g).unwrap() else { panic!() };
    assert_eq!(v[1], Mat3::identity() * -2.0);
}
