//! Exact vertex-Ramsey threshold parameters for randomly perturbed graphs,
//! plus the machinery to probe them on concrete instances: graph primitives,
//! rational density parameters, exact Ramsey deciders with certificates,
//! seeded perturbation samplers, the two-sided colouring/finding procedures
//! on complete multipartite hosts, general pattern-pair bounds, and a
//! deterministic Monte Carlo scan harness.

pub mod bounds;
pub mod catalogue;
pub mod construct;
pub mod densities;
pub mod format;
pub mod graph;
pub mod iso;
pub mod perturb;
pub mod ramsey;
pub mod rational;
pub mod report;
pub mod scan;

pub use graph::{Graph, InducedPartition, VertexSet};
pub use rational::Rational;
