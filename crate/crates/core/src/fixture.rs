//! The shipped example graph.

use std::sync::Arc;

use crate::graph::{parse_graph, Graph};

pub const EXAMPLE_GRAPH: &str = include_str!("../fixtures/example.graph");

/// Example polynomials: degree 2 and degree 3, both with constant term -1.
pub const EXAMPLE_P: &str = "1/2x^2-1";
pub const EXAMPLE_Q: &str = "x^3-3x-1";

pub fn example() -> Arc<Graph> {
    Arc::new(parse_graph(EXAMPLE_GRAPH).expect("fixture parses"))
}

/// One loop `e` at `v` plus an exit edge `f: v -> w`.
pub fn loop_with_exit() -> Arc<Graph> {
    Arc::new(parse_graph("vertex v w\nedge e v v\nedge f v w\n").expect("fixture parses"))
}
