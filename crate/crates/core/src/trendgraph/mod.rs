//! The trend/follower graph and its GML representation.

mod gml;
mod graph;

pub use gml::{read_gml, write_gml, write_gml_string};
pub use graph::{
    Edge, EdgeOutcome, GraphEvents, Node, NodeId, NodeKind, TrendGraph, TrendNode, UserNode,
};
