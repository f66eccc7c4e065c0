//! Shared fixtures for unit tests.

use crate::graph::{Commodity, Graph, Instance};
use rand::Rng;

pub(crate) fn graph_from(n: usize, edges: &[(usize, usize, i64)]) -> Graph {
    let mut g = Graph::new(n).unwrap();
    for &(a, b, c) in edges {
        g.add_edge(a, b, c).unwrap();
    }
    g
}

pub(crate) fn instance(
    n: usize,
    edges: &[(usize, usize, i64)],
    (s1, t1, k1): (usize, usize, u32),
    (s2, t2, k2): (usize, usize, u32),
) -> Instance {
    Instance::new(
        graph_from(n, edges),
        Commodity { source: s1, sink: t1, splits: k1, demand: None },
        Commodity { source: s2, sink: t2, splits: k2, demand: None },
    )
    .unwrap()
}

/// Four-cycle s1=1, s2=2, t1=3, t2=4 with unit capacities.
pub(crate) fn four_cycle() -> Instance {
    instance(4, &[(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 1, 1)], (1, 3, 1), (2, 4, 1))
}

/// Two disjoint edges: s1=1-t1=2 cap 4, s2=3-t2=4 cap 6.
pub(crate) fn disjoint_edges(k1: u32, k2: u32) -> Instance {
    instance(4, &[(1, 2, 4), (3, 4, 6)], (1, 2, k1), (3, 4, k2))
}

pub(crate) fn random_terminal_pair(rng: &mut impl Rng, n: usize) -> (usize, usize) {
    let s = rng.gen_range(1..=n);
    let t = loop {
        let t = rng.gen_range(1..=n);
        if t != s {
            break t;
        }
    };
    (s, t)
}

/// Random instance with up to `n_max` vertices, twice as many edges,
/// capacities in 0..=cap_max and split counts in 0..=k_max (not both zero).
pub(crate) fn random_instance(
    rng: &mut impl Rng,
    n_max: usize,
    k_max: u32,
    cap_max: i64,
) -> Instance {
    let n = rng.gen_range(2..=n_max);
    let m = rng.gen_range(0..=2 * n);
    let mut g = Graph::new(n).unwrap();
    for _ in 0..m {
        let a = rng.gen_range(1..=n);
        let b = rng.gen_range(1..=n);
        if a != b {
            g.add_edge(a, b, rng.gen_range(0..=cap_max)).unwrap();
        }
    }
    let (s1, t1) = random_terminal_pair(rng, n);
    let (s2, t2) = random_terminal_pair(rng, n);
    let k1 = rng.gen_range(0..=k_max);
    let k2 = rng.gen_range(if k1 == 0 { 1 } else { 0 }..=k_max);
    Instance::new(
        g,
        Commodity { source: s1, sink: t1, splits: k1, demand: None },
        Commodity { source: s2, sink: t2, splits: k2, demand: None },
    )
    .unwrap()
}
