//! Minimum k-cut values for one commodity and their two-commodity extension
//! via four auxiliary-graph cases.
//!
//! A cut's value is the largest uniform item size x such that the demanded
//! number of items packs fractionally into the boundary capacities. The
//! graph-wide value is found by a parametric search over the finite candidate
//! set {u_e / j}, testing each probe with a max-flow on the floor-scaled
//! graph; the optimum is always a candidate, so the search is exact.

use crate::graph::{Cut, EdgeId, Graph, Instance, VertexId};
use crate::maxflow::max_flow_min_cut;
use crate::rational::{floor_div, ratio, Rational};
use num_traits::Zero;
use thiserror::Error;

/// A cut-packing optimum: the value, the witness cut and integer packing
/// counts on the witness boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutValue {
    pub value: Rational,
    /// Sorted member vertices of the witness cut S.
    pub members: Vec<VertexId>,
    /// Boundary edge ids of S.
    pub boundary: Vec<EdgeId>,
    /// Packing counts n(e) per boundary edge, aligned with `boundary`.
    /// All zero when `value` is 0.
    pub packing: Vec<u64>,
}

impl CutValue {
    /// The witness as a [`Cut`], with its boundary rederived from the graph.
    pub fn cut(&self, graph: &Graph) -> Cut {
        Cut::from_mask(graph, &graph.member_mask(&self.members))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutsError {
    #[error("both split counts are zero; no cut carries any demand")]
    ZeroSplits,
    #[error("split counts and capacities overflow the big-M construction")]
    InstanceTooLarge,
}

/// Demand necessarily crossing the cut: `k_i` for every commodity whose
/// terminal pair is separated (exactly one endpoint inside the member mask).
pub fn crossing_demand(inst: &Instance, mask: &[bool]) -> u64 {
    inst.commodities
        .iter()
        .filter(|c| mask[c.source] != mask[c.sink])
        .map(|c| c.splits as u64)
        .sum()
}

fn packing_counts(caps: &[i64], value: Rational, items: u64) -> Vec<u64> {
    if value.is_zero() {
        return vec![0; caps.len()];
    }
    let mut left = items;
    caps.iter()
        .map(|&u| {
            let n = (floor_div(u, value) as u64).min(left);
            left -= n;
            n
        })
        .collect()
}

/// Largest uniform item size packing `items` items into the capacity bins,
/// with maximizing counts truncated so they sum to exactly `items`.
///
/// Value 0 (with an all-zero packing) when every bin has capacity 0.
pub fn uniform_packing(caps: &[i64], items: u64) -> (Rational, Vec<u64>) {
    assert!(items >= 1, "demand-free cuts are excluded");
    let feasible = |x: Rational| {
        let mut total: u64 = 0;
        for &u in caps {
            total = total.saturating_add(floor_div(u, x) as u64);
            if total >= items {
                return true;
            }
        }
        false
    };
    let mut candidates: Vec<Rational> = Vec::new();
    for &u in caps {
        if u > 0 {
            for j in 1..=items {
                candidates.push(ratio(u, j as i64));
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    let first_infeasible = candidates.partition_point(|&x| feasible(x));
    let value = if first_infeasible == 0 { Rational::zero() } else { candidates[first_infeasible - 1] };
    let packing = packing_counts(caps, value, items);
    (value, packing)
}

/// Minimum k-cut value between `source` and `sink`: the smallest over all
/// separating cuts of the cut's uniform packing value for `items` items.
///
/// The witness is a minimum cut of the graph scaled by the smallest
/// infeasible candidate. Value 0 when the terminals are disconnected in the
/// positive-capacity subgraph.
pub fn min_k_cut(graph: &Graph, source: VertexId, sink: VertexId, items: u64) -> CutValue {
    assert!(items >= 1, "demand-free cuts are excluded");
    assert_ne!(source, sink);
    let feasible = |x: Rational| {
        let scaled = graph.floor_scaled(x);
        let (value, _) = max_flow_min_cut(&scaled, source, sink);
        value as u64 >= items
    };
    let mut candidates: Vec<Rational> = Vec::new();
    for e in graph.edges() {
        if e.capacity > 0 {
            for j in 1..=items {
                candidates.push(ratio(e.capacity, j as i64));
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    let first_infeasible = candidates.partition_point(|&x| feasible(x));
    let value = if first_infeasible == 0 { Rational::zero() } else { candidates[first_infeasible - 1] };

    // Any probe above every candidate scales all capacities to zero, so the
    // sentinel covers both the all-feasible and the empty-candidate case.
    let witness_probe = candidates
        .get(first_infeasible)
        .copied()
        .unwrap_or_else(|| Rational::from_integer(graph.max_capacity() + 1));
    let (_, mask) = max_flow_min_cut(&graph.floor_scaled(witness_probe), source, sink);
    let cut = Cut::from_mask(graph, &mask);
    let caps: Vec<i64> = cut.boundary.iter().map(|&e| graph.edges()[e].capacity).collect();
    let packing = packing_counts(&caps, value, items);
    debug_assert!(value.is_zero() || packing.iter().sum::<u64>() == items);
    CutValue { value, members: cut.members, boundary: cut.boundary, packing }
}

/// The four separation patterns a demand-carrying cut can have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxCaseKind {
    /// Separates the first terminal pair only; demand k1.
    SeparateFirst,
    /// Separates the second terminal pair only; demand k2.
    SeparateSecond,
    /// Sources on one side, sinks on the other; demand k1+k2.
    JointParallel,
    /// s1 with t2 against s2 with t1; demand k1+k2.
    JointCross,
}

impl AuxCaseKind {
    pub const ALL: [AuxCaseKind; 4] = [
        AuxCaseKind::SeparateFirst,
        AuxCaseKind::SeparateSecond,
        AuxCaseKind::JointParallel,
        AuxCaseKind::JointCross,
    ];
}

/// Auxiliary graph restricting min-cut search to one separation pattern:
/// big-M edges make every cut that breaks the pattern more expensive than
/// any genuine cut.
#[derive(Debug, Clone)]
pub struct AuxCase {
    pub kind: AuxCaseKind,
    pub graph: Graph,
    pub source: VertexId,
    pub sink: VertexId,
    /// Items to pack across the cut (the pattern's demand).
    pub items: u64,
    pub big_m: i64,
    pub big_m_edges: Vec<EdgeId>,
}

/// Builds the auxiliary graph for one case; `None` when the case carries no
/// demand (its item count is zero) and is skipped.
pub fn build_case_graph(inst: &Instance, kind: AuxCaseKind) -> Result<Option<AuxCase>, CutsError> {
    let (k1, k2) = inst.splits();
    let [c1, c2] = [&inst.commodities[0], &inst.commodities[1]];
    let items = match kind {
        AuxCaseKind::SeparateFirst => k1 as u64,
        AuxCaseKind::SeparateSecond => k2 as u64,
        AuxCaseKind::JointParallel | AuxCaseKind::JointCross => k1 as u64 + k2 as u64,
    };
    if items == 0 {
        return Ok(None);
    }
    let big_m = i128::from(k1 as u64 + k2 as u64)
        .checked_mul(i128::from(inst.graph.max_capacity()))
        .and_then(|m| m.checked_add(1))
        .filter(|&m| m <= i64::MAX as i128)
        .ok_or(CutsError::InstanceTooLarge)? as i64;

    let (source, sink, forced_pairs): (VertexId, VertexId, Vec<(VertexId, VertexId)>) = match kind {
        AuxCaseKind::SeparateFirst => (c1.source, c1.sink, vec![(c2.source, c2.sink)]),
        AuxCaseKind::SeparateSecond => (c2.source, c2.sink, vec![(c1.source, c1.sink)]),
        AuxCaseKind::JointParallel => {
            (c1.source, c1.sink, vec![(c1.source, c2.source), (c1.sink, c2.sink)])
        }
        AuxCaseKind::JointCross => {
            (c1.source, c1.sink, vec![(c1.source, c2.sink), (c2.source, c1.sink)])
        }
    };
    let mut graph = inst.graph.clone();
    let mut big_m_edges = Vec::new();
    for (a, b) in forced_pairs {
        // Coincident endpoints are on the same side of any cut already.
        if a != b {
            big_m_edges.push(graph.add_edge(a, b, big_m).expect("valid aux edge"));
        }
    }
    Ok(Some(AuxCase { kind, graph, source, sink, items, big_m, big_m_edges }))
}

/// Minimum two-commodity cut value: the smallest uniform packing value over
/// all cuts that separate at least one terminal pair, computed as the best
/// of the four auxiliary cases.
///
/// A case whose minimum exceeds the original maximum capacity can only cut
/// big-M edges, meaning no cut with that pattern exists; it is discarded.
pub fn min_two_commodity_cut(inst: &Instance) -> Result<CutValue, CutsError> {
    let (k1, k2) = inst.splits();
    if k1 == 0 && k2 == 0 {
        return Err(CutsError::ZeroSplits);
    }
    let max_capacity = Rational::from_integer(inst.graph.max_capacity());
    let mut best: Option<CutValue> = None;
    for kind in AuxCaseKind::ALL {
        let Some(case) = build_case_graph(inst, kind)? else { continue };
        let result = min_k_cut(&case.graph, case.source, case.sink, case.items);
        if result.value > max_capacity {
            continue;
        }
        if best.as_ref().is_none_or(|b| result.value < b.value) {
            // Re-anchor the witness on the original graph: the winning cut
            // never touches a big-M edge, so only edge ids change.
            let mask = inst.graph.member_mask(&result.members);
            let boundary = inst.graph.boundary(&mask);
            let caps: Vec<i64> =
                boundary.iter().map(|&e| inst.graph.edges()[e].capacity).collect();
            let demand = crossing_demand(inst, &mask);
            debug_assert_eq!(demand, case.items, "witness matches its case pattern");
            let packing = packing_counts(&caps, result.value, demand.max(1));
            debug_assert!(result.value.is_zero() || packing.iter().sum::<u64>() == demand);
            best = Some(CutValue { value: result.value, members: result.members, boundary, packing });
        }
    }
    Ok(best.expect("at least one separation pattern admits a cut"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::testutil::{disjoint_edges, four_cycle, graph_from, instance, random_instance};
    use num_traits::Zero;

    /// Oracle for the packing value: enumerate every composition of `items`
    /// over the bins and take the best bottleneck ratio.
    pub(crate) fn packing_by_enumeration(caps: &[i64], items: u64) -> Rational {
        fn recurse(caps: &[i64], counts: &mut Vec<u64>, left: u64, best: &mut Rational) {
            if counts.len() == caps.len() {
                if left != 0 {
                    return;
                }
                let mut value: Option<Rational> = None;
                for (&u, &n) in caps.iter().zip(counts.iter()) {
                    if n > 0 {
                        let bound = ratio(u, n as i64);
                        value = Some(value.map_or(bound, |v: Rational| v.min(bound)));
                    }
                }
                if let Some(v) = value {
                    *best = (*best).max(v);
                }
                return;
            }
            for n in 0..=left {
                counts.push(n);
                recurse(caps, counts, left - n, best);
                counts.pop();
            }
        }
        let mut best = Rational::zero();
        recurse(caps, &mut Vec::new(), items, &mut best);
        best
    }

    /// Oracle for the graph value: enumerate all cuts with the demanded
    /// separation and take the minimum packing value.
    pub(crate) fn min_two_commodity_cut_by_enumeration(inst: &Instance) -> Option<Rational> {
        let n = inst.graph.vertex_count();
        let mut best: Option<Rational> = None;
        for bits in 0..(1u32 << n) {
            let mask: Vec<bool> =
                std::iter::once(false).chain((0..n).map(|i| bits & (1 << i) != 0)).collect();
            let demand = crossing_demand(inst, &mask);
            if demand == 0 {
                continue;
            }
            let caps: Vec<i64> = inst
                .graph
                .boundary(&mask)
                .iter()
                .map(|&e| inst.graph.edges()[e].capacity)
                .collect();
            let (value, _) = uniform_packing(&caps, demand);
            best = Some(best.map_or(value, |b: Rational| b.min(value)));
        }
        best
    }

    fn check_cut_value_invariants(graph: &Graph, result: &CutValue, demand: u64) {
        assert_eq!(result.boundary.len(), result.packing.len());
        for (&e, &n) in result.boundary.iter().zip(&result.packing) {
            let cap = Rational::from_integer(graph.edges()[e].capacity);
            assert!(Rational::from_integer(n as i64) * result.value <= cap);
        }
        if !result.value.is_zero() {
            let total: u64 = result.packing.iter().sum();
            assert!(total >= demand, "packing covers the demand");
        }
    }

    #[test]
    fn uniform_packing_matches_enumeration_oracle() {
        assert_eq!(packing_by_enumeration(&[5], 2), ratio(5, 2));
        assert_eq!(packing_by_enumeration(&[3, 5], 2), ratio(3, 1));
        assert_eq!(packing_by_enumeration(&[3, 5], 3), ratio(5, 2));

        let (value, packing) = uniform_packing(&[5], 2);
        assert_eq!(value, ratio(5, 2));
        assert_eq!(packing, vec![2]);
        let (value, packing) = uniform_packing(&[3, 5], 2);
        assert_eq!(value, ratio(3, 1));
        assert_eq!(packing, vec![1, 1]);
        let (value, packing) = uniform_packing(&[3, 5], 3);
        assert_eq!(value, ratio(5, 2));
        assert_eq!(packing, vec![1, 2]);
    }

    #[test]
    fn uniform_packing_random_against_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xCA75);
        for _ in 0..300 {
            let bins = rng.gen_range(1..=4usize);
            let caps: Vec<i64> = (0..bins).map(|_| rng.gen_range(0..=9)).collect();
            let items = rng.gen_range(1..=5u64);
            let (value, packing) = uniform_packing(&caps, items);
            assert_eq!(value, packing_by_enumeration(&caps, items), "caps {caps:?} items {items}");
            if !value.is_zero() {
                assert_eq!(packing.iter().sum::<u64>(), items);
                for (&u, &n) in caps.iter().zip(&packing) {
                    assert!(Rational::from_integer(n as i64) * value <= Rational::from_integer(u));
                }
            }
        }
    }

    #[test]
    fn uniform_packing_zero_capacity() {
        let (value, packing) = uniform_packing(&[0, 0], 2);
        assert!(value.is_zero());
        assert_eq!(packing, vec![0, 0]);
        let (value, _) = uniform_packing(&[], 1);
        assert!(value.is_zero());
    }

    #[test]
    fn min_k_cut_parallel_edges() {
        // Only cut is {s}; packing over caps {3,5}.
        let g = graph_from(2, &[(1, 2, 3), (1, 2, 5)]);
        let result = min_k_cut(&g, 1, 2, 2);
        assert_eq!(result.value, packing_by_enumeration(&[3, 5], 2));
        assert_eq!(result.value, ratio(3, 1));
        assert_eq!(result.members, vec![1]);
        check_cut_value_invariants(&g, &result, 2);
    }

    #[test]
    fn min_k_cut_path_graph() {
        // Cuts {s} (cap 4) and {s,v} (cap 6); the first binds.
        let g = graph_from(3, &[(1, 2, 4), (2, 3, 6)]);
        let both = [packing_by_enumeration(&[4], 2), packing_by_enumeration(&[6], 2)];
        let expected = both.iter().min().copied().unwrap();
        assert_eq!(expected, ratio(2, 1));
        let result = min_k_cut(&g, 1, 3, 2);
        assert_eq!(result.value, expected);
        assert_eq!(result.members, vec![1]);
        check_cut_value_invariants(&g, &result, 2);
    }

    #[test]
    fn min_k_cut_disconnected() {
        let g = graph_from(4, &[(1, 2, 4), (3, 4, 6)]);
        for items in [1, 3] {
            let result = min_k_cut(&g, 1, 3, items);
            assert!(result.value.is_zero());
            assert_eq!(result.members, vec![1, 2]);
            assert!(result.boundary.is_empty());
        }
    }

    #[test]
    fn crossing_demand_four_cycle() {
        let inst = four_cycle();
        let g = &inst.graph;
        assert_eq!(crossing_demand(&inst, &g.member_mask(&[1])), 1);
        assert_eq!(crossing_demand(&inst, &g.member_mask(&[1, 2])), 2);
        assert_eq!(crossing_demand(&inst, &g.member_mask(&[1, 3])), 0);
        assert_eq!(crossing_demand(&inst, &g.member_mask(&[2])), 1);
        assert_eq!(crossing_demand(&inst, &g.member_mask(&[1, 4])), 2);
    }

    #[test]
    fn build_case_graph_four_cycle() {
        let inst = four_cycle();
        let case = build_case_graph(&inst, AuxCaseKind::SeparateFirst).unwrap().unwrap();
        assert_eq!(case.graph.edge_count(), 5);
        assert_eq!(case.big_m, 3); // (1+1) * 1 + 1
        let aux_edge = case.graph.edges()[case.big_m_edges[0]];
        assert_eq!((aux_edge.a, aux_edge.b, aux_edge.capacity), (2, 4, 3));
        assert_eq!((case.source, case.sink, case.items), (1, 3, 1));
    }

    #[test]
    fn build_case_graph_skips_empty_commodity() {
        let inst = instance(4, &[(1, 2, 4), (3, 4, 6)], (1, 2, 1), (3, 4, 0));
        assert!(build_case_graph(&inst, AuxCaseKind::SeparateSecond).unwrap().is_none());
        let joint = build_case_graph(&inst, AuxCaseKind::JointParallel).unwrap().unwrap();
        assert_eq!(joint.items, 1);
    }

    #[test]
    fn build_case_graph_joint_cross_edges() {
        let inst = disjoint_edges(1, 1);
        let case = build_case_graph(&inst, AuxCaseKind::JointCross).unwrap().unwrap();
        let e0 = case.graph.edges()[case.big_m_edges[0]];
        let e1 = case.graph.edges()[case.big_m_edges[1]];
        assert_eq!((e0.a, e0.b), (1, 4)); // s1 with t2
        assert_eq!((e1.a, e1.b), (3, 2)); // s2 with t1
        assert_eq!(case.items, 2);
    }

    #[test]
    fn two_commodity_cut_disjoint_edges() {
        let inst = disjoint_edges(1, 1);
        let expected = min_two_commodity_cut_by_enumeration(&inst).unwrap();
        assert_eq!(expected, ratio(4, 1));
        let result = min_two_commodity_cut(&inst).unwrap();
        assert_eq!(result.value, expected);
        check_cut_value_invariants(&inst.graph, &result, crossing_demand(&inst, &inst.graph.member_mask(&result.members)));

        let inst = disjoint_edges(2, 2);
        let expected = min_two_commodity_cut_by_enumeration(&inst).unwrap();
        assert_eq!(expected, ratio(2, 1));
        assert_eq!(min_two_commodity_cut(&inst).unwrap().value, expected);
    }

    #[test]
    fn two_commodity_cut_four_cycle() {
        let inst = four_cycle();
        let expected = min_two_commodity_cut_by_enumeration(&inst).unwrap();
        assert_eq!(expected, ratio(1, 1));
        let result = min_two_commodity_cut(&inst).unwrap();
        assert_eq!(result.value, expected);
    }

    #[test]
    fn two_commodity_cut_shared_terminals() {
        // Both commodities use the same pair, so every separating cut
        // carries the joint demand: c equals the single-commodity 2-cut.
        let inst = instance(2, &[(1, 2, 5)], (1, 2, 1), (1, 2, 1));
        let expected = min_two_commodity_cut_by_enumeration(&inst).unwrap();
        assert_eq!(expected, ratio(5, 2));
        let result = min_two_commodity_cut(&inst).unwrap();
        assert_eq!(result.value, expected);
        assert_eq!(result.packing, vec![2]);
    }

    #[test]
    fn two_commodity_cut_rejects_zero_splits() {
        let inst = instance(2, &[(1, 2, 1)], (1, 2, 0), (2, 1, 0));
        assert_eq!(min_two_commodity_cut(&inst), Err(CutsError::ZeroSplits));
    }

    #[test]
    fn two_commodity_cut_single_empty_commodity() {
        // k2 = 0 collapses to the single-commodity value for commodity 1.
        let inst = instance(3, &[(1, 2, 4), (2, 3, 6)], (1, 3, 2), (1, 3, 0));
        let result = min_two_commodity_cut(&inst).unwrap();
        assert_eq!(result.value, min_k_cut(&inst.graph, 1, 3, 2).value);
        assert_eq!(result.value, ratio(2, 1));
    }

    #[test]
    fn two_commodity_cut_random_against_enumeration() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xC07);
        for _ in 0..200 {
            let inst = random_instance(&mut rng, 8, 3, 9);
            let expected = min_two_commodity_cut_by_enumeration(&inst).unwrap();
            let result = min_two_commodity_cut(&inst).unwrap();
            assert_eq!(result.value, expected, "instance {inst:?}");
            let mask = inst.graph.member_mask(&result.members);
            let demand = crossing_demand(&inst, &mask);
            assert_ne!(demand, 0, "witness cut carries demand");
            check_cut_value_invariants(&inst.graph, &result, demand);
            // The witness itself attains the reported value.
            let caps: Vec<i64> =
                result.boundary.iter().map(|&e| inst.graph.edges()[e].capacity).collect();
            assert_eq!(uniform_packing(&caps, demand).0, result.value);
        }
    }

    #[test]
    fn monotone_in_split_counts() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x111);
        for _ in 0..60 {
            let inst = random_instance(&mut rng, 6, 2, 9);
            let value = min_two_commodity_cut(&inst).unwrap().value;
            for bump in [(1u32, 0u32), (0, 1), (1, 1)] {
                let mut bigger = inst.clone();
                bigger.commodities[0].splits += bump.0;
                bigger.commodities[1].splits += bump.1;
                assert!(min_two_commodity_cut(&bigger).unwrap().value <= value);
            }
        }
    }

    #[test]
    fn scales_linearly_with_capacities() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x222);
        for _ in 0..60 {
            let inst = random_instance(&mut rng, 6, 2, 9);
            let value = min_two_commodity_cut(&inst).unwrap().value;
            for m in [2i64, 5] {
                let mut scaled = inst.clone();
                let mut g = Graph::new(scaled.graph.vertex_count()).unwrap();
                for e in inst.graph.edges() {
                    g.add_edge(e.a, e.b, e.capacity * m).unwrap();
                }
                scaled.graph = g;
                assert_eq!(
                    min_two_commodity_cut(&scaled).unwrap().value,
                    value * Rational::from_integer(m)
                );
            }
        }
    }

    #[test]
    fn doubling_splits_at_most_halves_value() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x333);
        for _ in 0..80 {
            let inst = random_instance(&mut rng, 6, 3, 9);
            let value = min_two_commodity_cut(&inst).unwrap().value;
            let mut doubled = inst.clone();
            doubled.commodities[0].splits *= 2;
            doubled.commodities[1].splits *= 2;
            let doubled_value = min_two_commodity_cut(&doubled).unwrap().value;
            assert!(doubled_value * ratio(2, 1) >= value);
        }
    }
}
