//! Semi-directed phylogenetic networks: structure checks, mu-representations,
//! distances and reconstruction.

pub mod batch;
pub mod distance;
pub mod error;
pub mod generator;
pub mod io;
pub mod model;
pub mod murep;
pub mod oracle;
pub mod reconstruct;
pub mod structure;

pub use error::{Error, Result};
pub use model::{Edge, EdgeId, EdgeKind, Network, NetworkBuilder, NodeId};
pub use murep::{mu_edge_rep, EdgeMuSet, MuRep, MuVector, Tag, TaggedMu};
pub use structure::TreeChildStatus;
