//! Undirected capacitated graph and two-commodity instance model.
//!
//! Vertices are dense 1-based ids fixed by the input file. Edge identity is
//! insertion order, which keeps parallel edges distinguishable in flows and
//! cut witnesses. All types are immutable after construction.

use crate::rational::{floor_div, Rational};
use num_traits::Zero;
use thiserror::Error;

/// 1-based vertex id.
pub type VertexId = usize;

/// Index into the graph's edge list (insertion order).
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub capacity: i64,
}

impl Edge {
    /// The endpoint opposite `v`, or `None` if `v` is not an endpoint.
    pub fn other(&self, v: VertexId) -> Option<VertexId> {
        if v == self.a {
            Some(self.b)
        } else if v == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("self-loop rejected")]
    SelfLoop,
    #[error("vertex id {0} out of range 1..={1}")]
    VertexOutOfRange(VertexId, usize),
    #[error("negative capacity {0}")]
    NegativeCapacity(i64),
    #[error("graph needs at least one vertex")]
    NoVertices,
    #[error("commodity {0} has identical source and sink")]
    SourceEqualsSink(u8),
    #[error("demands must be given for both commodities or neither")]
    LonelyDemand,
    #[error("demand for commodity {0} must be positive")]
    NonPositiveDemand(u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(vertex_count: usize) -> Result<Self, ModelError> {
        if vertex_count == 0 {
            return Err(ModelError::NoVertices);
        }
        Ok(Graph { vertex_count, edges: Vec::new() })
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId, capacity: i64) -> Result<EdgeId, ModelError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(ModelError::SelfLoop);
        }
        if capacity < 0 {
            return Err(ModelError::NegativeCapacity(capacity));
        }
        self.edges.push(Edge { a, b, capacity });
        Ok(self.edges.len() - 1)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), ModelError> {
        if v == 0 || v > self.vertex_count {
            return Err(ModelError::VertexOutOfRange(v, self.vertex_count));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn max_capacity(&self) -> i64 {
        self.edges.iter().map(|e| e.capacity).max().unwrap_or(0)
    }

    /// Edge ids with exactly one endpoint inside the cut.
    ///
    /// `members` is indexed by vertex id (slot 0 unused).
    pub fn boundary(&self, members: &[bool]) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| members[e.a] != members[e.b])
            .map(|(id, _)| id)
            .collect()
    }

    /// Same topology with capacities `floor(u_e / x)`; requires `x > 0`.
    pub fn floor_scaled(&self, x: Rational) -> Graph {
        assert!(x > Rational::zero(), "scale factor must be positive");
        Graph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|e| Edge { a: e.a, b: e.b, capacity: floor_div(e.capacity, x) })
                .collect(),
        }
    }

    /// Membership mask (indexed by vertex id) from a member list.
    pub fn member_mask(&self, members: &[VertexId]) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count + 1];
        for &v in members {
            mask[v] = true;
        }
        mask
    }
}

/// One commodity: terminal pair, split count and optional demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commodity {
    pub source: VertexId,
    pub sink: VertexId,
    /// Number of paths the commodity is split into (`k_i`).
    pub splits: u32,
    pub demand: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub commodities: [Commodity; 2],
}

impl Instance {
    pub fn new(graph: Graph, first: Commodity, second: Commodity) -> Result<Self, ModelError> {
        for (idx, c) in [&first, &second].into_iter().enumerate() {
            let label = idx as u8 + 1;
            graph.check_vertex(c.source)?;
            graph.check_vertex(c.sink)?;
            if c.source == c.sink {
                return Err(ModelError::SourceEqualsSink(label));
            }
            if let Some(d) = c.demand {
                if d <= Rational::zero() {
                    return Err(ModelError::NonPositiveDemand(label));
                }
            }
        }
        if first.demand.is_some() != second.demand.is_some() {
            return Err(ModelError::LonelyDemand);
        }
        Ok(Instance { graph, commodities: [first, second] })
    }

    pub fn splits(&self) -> (u32, u32) {
        (self.commodities[0].splits, self.commodities[1].splits)
    }

    /// Copy of the instance with both split counts halved.
    pub fn with_halved_splits(&self) -> Instance {
        let mut halved = self.clone();
        for c in halved.commodities.iter_mut() {
            c.splits /= 2;
        }
        halved
    }
}

/// A vertex cut: the member set S and its boundary δ(S).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    /// Sorted member vertex ids.
    pub members: Vec<VertexId>,
    /// Edge ids with exactly one endpoint in S.
    pub boundary: Vec<EdgeId>,
}

impl Cut {
    pub fn from_mask(graph: &Graph, mask: &[bool]) -> Cut {
        let members = (1..=graph.vertex_count()).filter(|&v| mask[v]).collect();
        Cut { members, boundary: graph.boundary(mask) }
    }

    pub fn capacity(&self, graph: &Graph) -> i64 {
        self.boundary.iter().map(|&e| graph.edges()[e].capacity).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn two_vertex_graph() -> Graph {
        let mut g = Graph::new(2).unwrap();
        g.add_edge(1, 2, 5).unwrap();
        g
    }

    #[test]
    fn rejects_self_loop_and_bad_vertices() {
        let mut g = Graph::new(3).unwrap();
        assert_eq!(g.add_edge(1, 1, 3), Err(ModelError::SelfLoop));
        assert_eq!(g.add_edge(1, 4, 3), Err(ModelError::VertexOutOfRange(4, 3)));
        assert_eq!(g.add_edge(0, 2, 3), Err(ModelError::VertexOutOfRange(0, 3)));
        assert_eq!(g.add_edge(1, 2, -1), Err(ModelError::NegativeCapacity(-1)));
    }

    #[test]
    fn parallel_edges_keep_distinct_ids() {
        let mut g = Graph::new(2).unwrap();
        let e0 = g.add_edge(1, 2, 3).unwrap();
        let e1 = g.add_edge(1, 2, 5).unwrap();
        assert_eq!((e0, e1), (0, 1));
        assert_eq!(g.edges()[0].capacity, 3);
        assert_eq!(g.edges()[1].capacity, 5);
    }

    #[test]
    fn instance_validation() {
        let g = two_vertex_graph();
        let c = |source, sink, demand| Commodity { source, sink, splits: 1, demand };
        assert!(Instance::new(g.clone(), c(1, 2, None), c(2, 1, None)).is_ok());
        assert_eq!(
            Instance::new(g.clone(), c(1, 1, None), c(1, 2, None)),
            Err(ModelError::SourceEqualsSink(1))
        );
        assert_eq!(
            Instance::new(g.clone(), c(1, 2, Some(ratio(1, 2))), c(2, 1, None)),
            Err(ModelError::LonelyDemand)
        );
        assert_eq!(
            Instance::new(g, c(1, 2, Some(ratio(1, 2))), c(2, 1, Some(ratio(0, 1)))),
            Err(ModelError::NonPositiveDemand(2))
        );
    }

    #[test]
    fn boundary_and_scaling() {
        let mut g = Graph::new(3).unwrap();
        g.add_edge(1, 2, 4).unwrap();
        g.add_edge(2, 3, 6).unwrap();
        let mask = g.member_mask(&[1]);
        assert_eq!(g.boundary(&mask), vec![0]);

        let scaled = g.floor_scaled(ratio(4, 1));
        assert_eq!(scaled.edges()[0].capacity, 1);
        assert_eq!(scaled.edges()[1].capacity, 1);
        let scaled = g.floor_scaled(ratio(5, 2));
        assert_eq!(scaled.edges()[1].capacity, 2);
        let same = g.floor_scaled(ratio(1, 1));
        assert_eq!(same, g);
    }
}
