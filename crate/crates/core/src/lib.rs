//! Rainbow spanning trees in properly edge-colored complete graphs.
//!
//! A proper (N-1)-edge-coloring of K_N (N even) is an [`EdgeColoring`]. The
//! crate builds families of edge-disjoint isomorphic rainbow spanning trees
//! ([`constructions`]), certifies them with an independent verifier
//! ([`verify`]), and checks small cases exhaustively ([`oracle`]).

pub mod canon;
pub mod coloring;
pub mod constructions;
pub mod format;
pub mod gf2;
pub mod labeling;
pub mod latin;
pub mod oracle;
mod transversal_search;
pub mod tree;
pub mod verify;

pub use canon::{ahu_code, is_isomorphic, CanonicalCode};
pub use coloring::{Color, ColoredEdge, ColoringError, EdgeColoring, Vertex};
pub use constructions::{ConstructionError, TreeDecomposition};
pub use labeling::{binary_labeling, BinaryLabeling};
pub use tree::{ColoredTree, TreeError};
