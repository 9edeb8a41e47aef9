//! Intersection verdicts, adjacency components and separation conditions.

mod graph;
mod osc;
mod ssc;
mod verdict;

pub use graph::{
    adjacency_graph, components, verify_component_properties, AdjacencyGraph, ComponentCheck, ComponentPartition,
    ComponentReport, PropertyCheck, UnionFind,
};
pub use osc::{check_osc_witness, osc_witness_from_ssc, NeighbourhoodWitness, OpenBox, OscCertificate};
pub use ssc::{check_ssc, min_gap, ssc_from_graph, SscVerdict};
pub use verdict::{decide_intersection, IntersectionVerdict};
