//! Two-commodity k-splittable flow toolkit for undirected capacitated graphs:
//! minimum k-cut values, the doubled totally uniform flow construction, a
//! 1/2-approximation for totally uniform flows with an even-split exactness
//! certificate, a 1/4-approximation for concurrent flows, and brute-force
//! exact oracles for desk-scale validation.

pub mod approx;
pub mod biflow;
pub mod cuts;
pub mod generate;
pub mod graph;
pub mod io;
pub mod maxflow;
pub mod oracle;
pub mod rational;

#[cfg(test)]
mod testutil;

pub use approx::{PathFlow, SplittableFlow, Uniformity};
pub use cuts::CutValue;
pub use graph::{Commodity, Cut, Edge, EdgeId, Graph, Instance, ModelError, VertexId};
pub use io::{parse_instance, serialize_instance};
pub use rational::{format_rational, parse_rational, ratio, Rational};
