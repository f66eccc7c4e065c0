//! Integral single-commodity maximum flow on undirected graphs, feasibility
//! transshipments via super-terminals, and flow decomposition into unit paths.
//!
//! Undirected edges become two antiparallel arcs of the full capacity that act
//! as each other's residual; opposite flow cancels, so each edge ends up with
//! a single signed net value relative to its fixed a->b orientation.

use crate::graph::{Cut, EdgeId, Graph, VertexId};
use thiserror::Error;

/// Net integral flow per edge, positive along the edge's a->b orientation.
pub type EdgeFlow = Vec<i64>;

/// Vertex supplies (positive) and demands (negative); must sum to zero.
pub type SupplyPattern = Vec<(VertexId, i64)>;

/// Certificate that a transshipment is infeasible: a vertex set whose
/// boundary capacity is smaller than the net supply that must leave it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCut {
    /// Sorted vertex ids on the super-source side.
    pub members: Vec<VertexId>,
    pub capacity: i64,
    /// Net supply inside `members` that has to cross the boundary.
    pub required: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("flow does not conserve at vertex {vertex}: net {net}, expected {expected}")]
    NotConserving { vertex: VertexId, net: i64, expected: i64 },
    #[error("flow value {found} does not match requested {requested}")]
    WrongValue { requested: i64, found: i64 },
}

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    residual: i64,
}

/// Dinic's algorithm over a residual arc list. Arc `i ^ 1` is the partner
/// of arc `i`. Deterministic: adjacency is scanned in insertion order.
struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    fn with_nodes(n: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); n], arcs: Vec::new() }
    }

    /// Both arcs get the full capacity: the undirected model.
    fn add_undirected(&mut self, a: usize, b: usize, capacity: i64) -> usize {
        self.push_pair(a, b, capacity, capacity)
    }

    fn add_directed(&mut self, a: usize, b: usize, capacity: i64) -> usize {
        self.push_pair(a, b, capacity, 0)
    }

    fn push_pair(&mut self, a: usize, b: usize, cap_ab: i64, cap_ba: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to: b, residual: cap_ab });
        self.arcs.push(Arc { to: a, residual: cap_ba });
        self.adj[a].push(id);
        self.adj[b].push(id + 1);
        id
    }

    fn bfs_levels(&self, source: usize, sink: usize) -> Option<Vec<i32>> {
        let mut level = vec![-1; self.adj.len()];
        level[source] = 0;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let arc = &self.arcs[a];
                if arc.residual > 0 && level[arc.to] == -1 {
                    level[arc.to] = level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        (level[sink] != -1).then_some(level)
    }

    fn dfs_push(
        &mut self,
        v: usize,
        sink: usize,
        limit: i64,
        level: &[i32],
        cursor: &mut [usize],
    ) -> i64 {
        if v == sink {
            return limit;
        }
        while cursor[v] < self.adj[v].len() {
            let a = self.adj[v][cursor[v]];
            let (to, residual) = (self.arcs[a].to, self.arcs[a].residual);
            if residual > 0 && level[to] == level[v] + 1 {
                let pushed = self.dfs_push(to, sink, limit.min(residual), level, cursor);
                if pushed > 0 {
                    self.arcs[a].residual -= pushed;
                    self.arcs[a ^ 1].residual += pushed;
                    return pushed;
                }
            }
            cursor[v] += 1;
        }
        0
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        let mut total = 0i64;
        while let Some(level) = self.bfs_levels(source, sink) {
            let mut cursor = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.dfs_push(source, sink, i64::MAX, &level, &mut cursor);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    /// Nodes reachable from `source` in the residual network.
    fn residual_side(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(v) = stack.pop() {
            for &a in &self.adj[v] {
                let arc = &self.arcs[a];
                if arc.residual > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

/// Builds the arc network for `graph` with one node per vertex (vertex id - 1)
/// plus `extra` trailing nodes. Returns the network and the forward arc id of
/// each edge.
fn network_for(graph: &Graph, extra: usize) -> (FlowNetwork, Vec<usize>) {
    let mut net = FlowNetwork::with_nodes(graph.vertex_count() + extra);
    let arcs = graph
        .edges()
        .iter()
        .map(|e| net.add_undirected(e.a - 1, e.b - 1, e.capacity))
        .collect();
    (net, arcs)
}

fn extract_net_flow(net: &FlowNetwork, graph: &Graph, edge_arcs: &[usize]) -> EdgeFlow {
    graph
        .edges()
        .iter()
        .zip(edge_arcs)
        .map(|(e, &a)| e.capacity - net.arcs[a].residual)
        .collect()
}

/// Exact maximum s-t flow. Disconnected terminals yield value 0.
pub fn max_flow(graph: &Graph, source: VertexId, sink: VertexId) -> (i64, EdgeFlow) {
    assert_ne!(source, sink, "source and sink must differ");
    let (mut net, edge_arcs) = network_for(graph, 0);
    let value = net.max_flow(source - 1, sink - 1);
    (value, extract_net_flow(&net, graph, &edge_arcs))
}

/// Maximum flow value together with a minimum cut (as the source-side
/// vertex mask, indexed by vertex id).
pub fn max_flow_min_cut(graph: &Graph, source: VertexId, sink: VertexId) -> (i64, Vec<bool>) {
    assert_ne!(source, sink, "source and sink must differ");
    let (mut net, _) = network_for(graph, 0);
    let value = net.max_flow(source - 1, sink - 1);
    let side = net.residual_side(source - 1);
    let mut mask = vec![false; graph.vertex_count() + 1];
    for v in 1..=graph.vertex_count() {
        mask[v] = side[v - 1];
    }
    (value, mask)
}

/// Routes the pattern's supplies to its demands, or returns a violated cut.
pub fn feasible_transshipment(
    graph: &Graph,
    pattern: &SupplyPattern,
) -> Result<EdgeFlow, InfeasibilityCut> {
    let mut net_supply = vec![0i64; graph.vertex_count() + 1];
    for &(v, amount) in pattern {
        net_supply[v] += amount;
    }
    let total: i64 = net_supply.iter().filter(|&&a| a > 0).sum();
    let balance: i64 = net_supply.iter().sum();
    assert_eq!(balance, 0, "supply pattern must sum to zero");

    let n = graph.vertex_count();
    let (mut net, edge_arcs) = network_for(graph, 2);
    let (super_source, super_sink) = (n, n + 1);
    for v in 1..=n {
        if net_supply[v] > 0 {
            net.add_directed(super_source, v - 1, net_supply[v]);
        } else if net_supply[v] < 0 {
            net.add_directed(v - 1, super_sink, -net_supply[v]);
        }
    }
    let value = net.max_flow(super_source, super_sink);
    if value == total {
        return Ok(extract_net_flow(&net, graph, &edge_arcs));
    }
    let side = net.residual_side(super_source);
    let members: Vec<VertexId> = (1..=n).filter(|&v| side[v - 1]).collect();
    let cut = Cut::from_mask(graph, &graph.member_mask(&members));
    let capacity = cut.capacity(graph);
    let required: i64 = members.iter().map(|&v| net_supply[v]).sum();
    debug_assert!(capacity < required);
    Err(InfeasibilityCut { members, capacity, required })
}

/// A simple path as parallel vertex and edge id sequences
/// (`vertices.len() == edges.len() + 1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Exactly `value` simple source-sink paths, one unit each.
    pub paths: Vec<Path>,
    pub discarded_cycles: usize,
}

/// Decomposes an integral conserving flow of the given value into unit paths,
/// silently peeling (but counting) any circulation cycles.
///
/// Path extraction repeatedly traces from the source following the
/// lowest-numbered edge that still carries flow, so output is deterministic.
pub fn decompose_paths(
    graph: &Graph,
    flow: &EdgeFlow,
    source: VertexId,
    sink: VertexId,
    value: i64,
) -> Result<Decomposition, FlowError> {
    assert_eq!(flow.len(), graph.edge_count(), "flow indexed by edge id");

    // Conservation contract check: net inflow must vanish away from the
    // terminals and the terminal imbalance must match `value`.
    let mut net = vec![0i64; graph.vertex_count() + 1];
    for (e, &f) in graph.edges().iter().zip(flow) {
        net[e.a] -= f;
        net[e.b] += f;
    }
    for v in 1..=graph.vertex_count() {
        if v != source && v != sink && net[v] != 0 {
            return Err(FlowError::NotConserving { vertex: v, net: net[v], expected: 0 });
        }
    }
    let found = -net[source];
    if net[sink] != found {
        return Err(FlowError::NotConserving { vertex: sink, net: net[sink], expected: found });
    }
    if found != value {
        return Err(FlowError::WrongValue { requested: value, found });
    }

    // Directed remaining units per edge, oriented along the flow.
    let mut remaining: Vec<i64> = flow.iter().map(|f| f.abs()).collect();
    let mut out_arcs: Vec<Vec<EdgeId>> = vec![Vec::new(); graph.vertex_count() + 1];
    for (id, (e, &f)) in graph.edges().iter().zip(flow).enumerate() {
        if f > 0 {
            out_arcs[e.a].push(id);
        } else if f < 0 {
            out_arcs[e.b].push(id);
        }
    }
    let head = |edge: EdgeId| {
        let e = graph.edges()[edge];
        if flow[edge] > 0 {
            e.b
        } else {
            e.a
        }
    };
    // out_arcs are already sorted ascending (edge ids pushed in order).
    let mut cursor = vec![0usize; graph.vertex_count() + 1];
    let next_arc = |v: VertexId, cursor: &mut [usize], remaining: &[i64]| -> Option<EdgeId> {
        while cursor[v] < out_arcs[v].len() {
            let e = out_arcs[v][cursor[v]];
            if remaining[e] > 0 {
                return Some(e);
            }
            cursor[v] += 1;
        }
        None
    };

    let mut discarded_cycles = 0usize;
    let mut paths = Vec::with_capacity(value.max(0) as usize);

    // Walk state shared by path extraction and cycle peeling. Returns the
    // walk as (vertices, edges); `position[v]` tracks v's index in the walk.
    let mut position: Vec<Option<usize>> = vec![None; graph.vertex_count() + 1];

    for _ in 0..value {
        let mut walk_vertices = vec![source];
        let mut walk_edges: Vec<EdgeId> = Vec::new();
        position[source] = Some(0);
        loop {
            let v = *walk_vertices.last().expect("walk never empty");
            if v == sink {
                break;
            }
            let e = next_arc(v, &mut cursor, &remaining)
                .expect("conserving flow always has an outgoing unit before the sink");
            let w = head(e);
            if let Some(i) = position[w] {
                // Excise the cycle w -> ... -> v -> w and drop one unit of it.
                remaining[e] -= 1;
                for &cycle_edge in &walk_edges[i..] {
                    remaining[cycle_edge] -= 1;
                }
                for dropped in walk_vertices.drain(i + 1..) {
                    position[dropped] = None;
                }
                walk_edges.truncate(i);
                discarded_cycles += 1;
            } else {
                position[w] = Some(walk_vertices.len());
                walk_vertices.push(w);
                walk_edges.push(e);
            }
        }
        for &e in &walk_edges {
            remaining[e] -= 1;
        }
        for &v in &walk_vertices {
            position[v] = None;
        }
        paths.push(Path { vertices: walk_vertices, edges: walk_edges });
    }

    // Peel whatever circulation is left.
    for start in 1..=graph.vertex_count() {
        while next_arc(start, &mut cursor, &remaining).is_some() {
            let mut walk_vertices = vec![start];
            let mut walk_edges: Vec<EdgeId> = Vec::new();
            position[start] = Some(0);
            loop {
                let v = *walk_vertices.last().expect("walk never empty");
                let Some(e) = next_arc(v, &mut cursor, &remaining) else {
                    // Start vertex exhausted after excisions.
                    debug_assert_eq!(walk_vertices.len(), 1);
                    break;
                };
                let w = head(e);
                if let Some(i) = position[w] {
                    remaining[e] -= 1;
                    for &cycle_edge in &walk_edges[i..] {
                        remaining[cycle_edge] -= 1;
                    }
                    for dropped in walk_vertices.drain(i + 1..) {
                        position[dropped] = None;
                    }
                    walk_edges.truncate(i);
                    discarded_cycles += 1;
                    if walk_vertices.len() == 1 && next_arc(start, &mut cursor, &remaining).is_none()
                    {
                        break;
                    }
                } else {
                    position[w] = Some(walk_vertices.len());
                    walk_vertices.push(w);
                    walk_edges.push(e);
                }
            }
            for &v in &walk_vertices {
                position[v] = None;
            }
        }
    }

    Ok(Decomposition { paths, discarded_cycles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    pub(crate) fn graph_from(n: usize, edges: &[(usize, usize, i64)]) -> Graph {
        let mut g = Graph::new(n).unwrap();
        for &(a, b, c) in edges {
            g.add_edge(a, b, c).unwrap();
        }
        g
    }

    /// Independent oracle: minimum cut capacity by enumerating all vertex
    /// subsets containing the source but not the sink.
    pub(crate) fn min_cut_by_enumeration(graph: &Graph, s: VertexId, t: VertexId) -> i64 {
        let n = graph.vertex_count();
        let mut best = i64::MAX;
        for bits in 0..(1u32 << n) {
            let mask: Vec<bool> =
                std::iter::once(false).chain((0..n).map(|i| bits & (1 << i) != 0)).collect();
            if !mask[s] || mask[t] {
                continue;
            }
            let cap: i64 = graph.boundary(&mask).iter().map(|&e| graph.edges()[e].capacity).sum();
            best = best.min(cap);
        }
        best
    }

    fn check_flow_valid(graph: &Graph, flow: &EdgeFlow, s: VertexId, t: VertexId, value: i64) {
        let mut net = vec![0i64; graph.vertex_count() + 1];
        for (e, &f) in graph.edges().iter().zip(flow) {
            assert!(f.abs() <= e.capacity, "capacity respected");
            net[e.a] -= f;
            net[e.b] += f;
        }
        for v in 1..=graph.vertex_count() {
            let expected = if v == s { -value } else if v == t { value } else { 0 };
            assert_eq!(net[v], expected, "conservation at {v}");
        }
    }

    #[test]
    fn single_edge() {
        let g = graph_from(2, &[(1, 2, 5)]);
        let (value, flow) = max_flow(&g, 1, 2);
        assert_eq!(value, 5);
        assert_eq!(flow, vec![5]);
    }

    #[test]
    fn triangle_matches_cut_enumeration() {
        // s=1, a=2, t=3.
        let g = graph_from(3, &[(1, 2, 2), (2, 3, 3), (1, 3, 1)]);
        let expected = min_cut_by_enumeration(&g, 1, 3);
        assert_eq!(expected, 3);
        let (value, flow) = max_flow(&g, 1, 3);
        assert_eq!(value, expected);
        check_flow_valid(&g, &flow, 1, 3, value);
    }

    #[test]
    fn disconnected_terminals() {
        let g = graph_from(4, &[(1, 2, 10), (3, 4, 5)]);
        assert_eq!(max_flow(&g, 1, 3).0, 0);
    }

    #[test]
    fn random_flows_match_cut_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xF10);
        for _ in 0..150 {
            let n = rng.gen_range(2..=8usize);
            let m = rng.gen_range(0..=12usize);
            let mut g = Graph::new(n).unwrap();
            for _ in 0..m {
                let a = rng.gen_range(1..=n);
                let b = rng.gen_range(1..=n);
                if a != b {
                    g.add_edge(a, b, rng.gen_range(0..=9)).unwrap();
                }
            }
            let s = rng.gen_range(1..=n);
            let t = loop {
                let t = rng.gen_range(1..=n);
                if t != s {
                    break t;
                }
            };
            let (value, flow) = max_flow(&g, s, t);
            assert_eq!(value, min_cut_by_enumeration(&g, s, t));
            check_flow_valid(&g, &flow, s, t, value);

            let decomposition = decompose_paths(&g, &flow, s, t, value).unwrap();
            assert_eq!(decomposition.paths.len(), value as usize);
            let mut load = vec![0i64; g.edge_count()];
            for p in &decomposition.paths {
                assert_eq!(p.vertices.first(), Some(&s));
                assert_eq!(p.vertices.last(), Some(&t));
                let mut seen = std::collections::BTreeSet::new();
                assert!(p.vertices.iter().all(|v| seen.insert(*v)), "simple path");
                for &e in &p.edges {
                    load[e] += 1;
                }
            }
            for (l, f) in load.iter().zip(&flow) {
                assert!(*l <= f.abs(), "unit loads within net flow");
            }
        }
    }

    #[test]
    fn transshipment_single_path() {
        let g = graph_from(2, &[(1, 2, 5)]);
        let flow = feasible_transshipment(&g, &vec![(1, 1), (2, -1)]).unwrap();
        assert_eq!(flow, vec![1]);
    }

    #[test]
    fn transshipment_cut_bound_violation() {
        let g = graph_from(2, &[(1, 2, 1), (1, 2, 1)]);
        let cut = feasible_transshipment(&g, &vec![(1, 3), (2, -3)]).unwrap_err();
        assert_eq!(cut, InfeasibilityCut { members: vec![1], capacity: 2, required: 3 });
    }

    /// Exhaustive oracle over integral edge labelings in {-1,0,1}^m for the
    /// unit-capacity four-cycle pattern.
    fn four_cycle_pattern_feasible_by_enumeration(
        g: &Graph,
        supply: &[i64; 5], // indexed by vertex id
    ) -> bool {
        let m = g.edge_count();
        'labeling: for code in 0..3i64.pow(m as u32) {
            let mut f = Vec::with_capacity(m);
            let mut c = code;
            for _ in 0..m {
                f.push((c % 3) - 1);
                c /= 3;
            }
            let mut net = [0i64; 5];
            for (e, &fe) in g.edges().iter().zip(&f) {
                if fe.abs() > e.capacity {
                    continue 'labeling;
                }
                net[e.a] -= fe;
                net[e.b] += fe;
            }
            if (1..=4).all(|v| net[v] == -supply[v]) {
                return true;
            }
        }
        false
    }

    #[test]
    fn transshipment_four_cycle_two_pairs() {
        // Cycle 1-2-3-4-1 with unit capacities; supplies at 1 and 2,
        // demands at 3 and 4.
        let g = graph_from(4, &[(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 1, 1)]);
        let supply = [0i64, 1, 1, -1, -1];
        assert!(four_cycle_pattern_feasible_by_enumeration(&g, &supply));
        let flow = feasible_transshipment(&g, &vec![(1, 1), (2, 1), (3, -1), (4, -1)]).unwrap();
        let mut net = [0i64; 5];
        for (e, &fe) in g.edges().iter().zip(&flow) {
            assert!(fe.abs() <= e.capacity);
            net[e.a] -= fe;
            net[e.b] += fe;
        }
        assert_eq!(&net[1..], &[-1, -1, 1, 1]);
    }

    #[test]
    fn decompose_repeated_single_edge() {
        let g = graph_from(2, &[(1, 2, 5)]);
        let d = decompose_paths(&g, &vec![3], 1, 2, 3).unwrap();
        assert_eq!(d.paths.len(), 3);
        assert!(d.paths.iter().all(|p| p.vertices == vec![1, 2] && p.edges == vec![0]));
        assert_eq!(d.discarded_cycles, 0);
    }

    #[test]
    fn decompose_two_disjoint_routes() {
        // 1-2-4 and 1-3-4, one unit each; unique decomposition.
        let g = graph_from(4, &[(1, 2, 1), (2, 4, 1), (1, 3, 1), (3, 4, 1)]);
        let d = decompose_paths(&g, &vec![1, 1, 1, 1], 1, 4, 2).unwrap();
        assert_eq!(d.paths.len(), 2);
        assert_eq!(d.paths[0].vertices, vec![1, 2, 4]);
        assert_eq!(d.paths[1].vertices, vec![1, 3, 4]);
        assert_eq!(d.discarded_cycles, 0);
    }

    #[test]
    fn decompose_discards_disjoint_cycle() {
        // Path 1-2 of value 1, plus circulation 3-4-5-3.
        let g = graph_from(5, &[(1, 2, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1)]);
        let d = decompose_paths(&g, &vec![1, 1, 1, 1], 1, 2, 1).unwrap();
        assert_eq!(d.paths.len(), 1);
        assert_eq!(d.paths[0].vertices, vec![1, 2]);
        assert_eq!(d.discarded_cycles, 1);
    }

    #[test]
    fn decompose_rejects_nonconserving_flow() {
        let g = graph_from(3, &[(1, 2, 2), (2, 3, 2)]);
        let err = decompose_paths(&g, &vec![2, 1], 1, 3, 2).unwrap_err();
        assert_eq!(err, FlowError::NotConserving { vertex: 2, net: 1, expected: 0 });
        let err = decompose_paths(&g, &vec![1, 1], 1, 3, 2).unwrap_err();
        assert_eq!(err, FlowError::WrongValue { requested: 2, found: 1 });
    }

    #[test]
    fn decompose_peels_cycle_through_path_vertex() {
        // Flow 1 along 1-2-3 plus a cycle 2-4-5-2 touching the path.
        let g =
            graph_from(5, &[(1, 2, 1), (2, 3, 1), (2, 4, 1), (4, 5, 1), (5, 2, 1)]);
        let d = decompose_paths(&g, &vec![1, 1, 1, 1, 1], 1, 3, 1).unwrap();
        assert_eq!(d.paths.len(), 1);
        assert!(d.paths[0].vertices == vec![1, 2, 3]);
        assert_eq!(d.discarded_cycles, 1);
    }
}
