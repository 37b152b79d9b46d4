#![forbid(unsafe_code)]

//! Squaregraph product structure: recognition, leveled embeddings,
//! vertical-path decompositions with verified certificates, graph
//! products with brute-force oracles, and lower-bound gadget families.

pub mod decompose;
pub mod gadgets;
pub mod generate;
pub mod graph;
pub mod layering;
pub mod planegraph;
pub mod products;
pub mod recognize;

pub use decompose::{decompose, decompose_squaregraph, Certificate, Decomposition};
pub use graph::Graph;
pub use layering::{bfs_layering, leveled_embedding, Layering, LeveledEmbedding};
pub use planegraph::PlaneGraph;
pub use products::{product, ProductMode};
pub use recognize::{is_squaregraph, SquaregraphVerdict};
