//! Quark decomposition: motif-driven dense subgraph discovery in directed,
//! signed-directed and node-labeled networks.
//!
//! A decomposition is parameterized by a pair of motifs `(M, N)`: `N` is the
//! pattern whose dense regions are sought, `M` (a vanilla node, edge or
//! triangle) is the unit that receives a quark number. The crate is layered
//! bottom-up:
//!
//! - [`graph`]: loaders and the in-memory graph.
//! - [`motif`]: the closed motif catalog, classifiers and orbit tables.
//! - [`engine`]: on-the-fly enumeration of `N` instances around an `M` instance.
//! - [`peel`]: bucket peeling for quark numbers and role-aware quark numbers.
//! - [`forest`]: k-quarks, their containment hierarchy and node role profiles.
//! - [`metrics`]: subgraph quality and partition agreement scores.
//! - [`oracle`]: brute-force reference used for differential testing.

pub mod engine;
pub mod error;
pub mod forest;
pub mod graph;
pub mod metrics;
pub mod motif;
pub mod oracle;
pub mod peel;
pub mod synth;

pub use engine::{MInstance, MotifEngine, NInstance};
pub use error::{QuarkError, Result};
pub use forest::{Quark, QuarkForest};
pub use graph::{Edge, EdgeKind, Graph, GraphBuilder, Link, NodeId, Sign};
pub use motif::{DirectedTriangleClass, LabeledCliqueClass, MKind, MotifSpec, NClass, OrbitTable, SignedTriangleClass};
pub use peel::{PeelOptions, QuarkNumbers, RoleAwareNumbers};
