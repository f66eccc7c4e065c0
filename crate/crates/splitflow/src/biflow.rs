//! Constructive half-integral two-commodity flow for integer demands.
//!
//! Two integral transshipments are solved: one routing both demands in their
//! stated direction (sum flow) and one with the second commodity reversed
//! (difference flow). Half their sum and half their difference split back
//! into the per-commodity flows; the identity
//! `|f1(e)| + |f2(e)| = max(|F(e)|, |G(e)|)` keeps every edge within its
//! capacity, and both flows are multiples of 1/2 by construction.

use crate::graph::{Graph, VertexId};
use crate::maxflow::{feasible_transshipment, InfeasibilityCut};
use crate::rational::{ratio, Rational};
use num_traits::Signed;

/// Per-edge signed half-integral flows for both commodities, relative to the
/// fixed a->b edge orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBiFlow {
    pub first: Vec<Rational>,
    pub second: Vec<Rational>,
    pub demands: (i64, i64),
}

/// Terminal pair with an integral demand.
#[derive(Debug, Clone, Copy)]
pub struct DemandSpec {
    pub source: VertexId,
    pub sink: VertexId,
    pub amount: i64,
}

/// Routes both demands simultaneously, or returns a cut whose capacity is
/// below the demand that must cross it.
pub fn half_integral_biflow(
    graph: &Graph,
    first: DemandSpec,
    second: DemandSpec,
) -> Result<EdgeBiFlow, InfeasibilityCut> {
    assert!(first.amount >= 0 && second.amount >= 0, "demands are nonnegative");
    let sum_pattern = vec![
        (first.source, first.amount),
        (first.sink, -first.amount),
        (second.source, second.amount),
        (second.sink, -second.amount),
    ];
    let diff_pattern = vec![
        (first.source, first.amount),
        (first.sink, -first.amount),
        (second.sink, second.amount),
        (second.source, -second.amount),
    ];
    let sum_flow = feasible_transshipment(graph, &sum_pattern)?;
    let diff_flow = feasible_transshipment(graph, &diff_pattern)?;
    let half = ratio(1, 2);
    let mut first_flow = Vec::with_capacity(graph.edge_count());
    let mut second_flow = Vec::with_capacity(graph.edge_count());
    for ((edge, &f), &g) in graph.edges().iter().zip(&sum_flow).zip(&diff_flow) {
        let f1 = Rational::from_integer(f + g) * half;
        let f2 = Rational::from_integer(f - g) * half;
        // |f1| + |f2| = max(|F|, |G|), which both transshipments bound by
        // the edge capacity.
        let joint = f1.abs() + f2.abs();
        debug_assert_eq!(joint, Rational::from_integer(f.abs().max(g.abs())));
        assert!(
            joint <= Rational::from_integer(edge.capacity),
            "joint flow exceeds capacity"
        );
        first_flow.push(f1);
        second_flow.push(f2);
    }
    Ok(EdgeBiFlow {
        first: first_flow,
        second: second_flow,
        demands: (first.amount, second.amount),
    })
}
