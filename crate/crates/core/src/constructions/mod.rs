//! Constructions of disjoint isomorphic rainbow spanning trees.
//!
//! * [`two_trees`]: two trees in any proper coloring of K_N, N >= 6.
//! * [`decompose_c4`]: a full partition into N/2 isomorphic trees when every
//!   color pair forms a 4-cycle factor, built on the K_8 base case
//!   [`k8_base_decomposition`].
//! * [`three_trees`]: three trees in any proper coloring with N >= 28.
//!
//! Every construction runs the independent verifier before returning.

mod base8;
mod decompose;
mod three;
mod two;
mod witness;

use thiserror::Error;

use crate::coloring::{ColoringError, EdgeColoring};
use crate::latin::LatinError;
use crate::tree::{ColoredTree, TreeError};
use crate::verify::{verify_family, FamilyChecks, FamilyViolation};

pub use base8::{k8_base_decomposition, xor8_base_trees};
pub use decompose::decompose_c4;
pub use three::{
    build_three_trees, select_three_tree_vertices, three_trees, SelectionTrace, ThreeTreeRoute,
    ThreeTreeSelection, ThreeTrees, MIN_ORDER_THREE_TREES,
};
pub use two::{star_swap_pair, two_trees, TwoTreeRoute, TwoTrees};
pub use witness::{find_four_cycle_witness, four_cycle_witnesses, FourCycleWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("order {order} is below the supported minimum {minimum}")]
    OrderTooSmall { order: usize, minimum: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("exhaustive search failed: {0}")]
    SearchFailed(String),
    #[error("no admissible vertex selection ({0})")]
    SelectionExhausted(SelectionTrace),
    /// The verifier rejected the output of a construction that should always
    /// succeed. Indicates a bug.
    #[error("construction defect: {0}")]
    Defect(String),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Latin(#[from] LatinError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Partition of E(K_N) into N/2 isomorphic rainbow spanning trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub trees: Vec<ColoredTree>,
}

impl TreeDecomposition {
    pub fn verify(&self, phi: &EdgeColoring) -> Result<(), FamilyViolation> {
        verify_family(phi, &self.trees, FamilyChecks::all())
    }
}

fn certify(
    phi: &EdgeColoring,
    trees: &[ColoredTree],
    checks: FamilyChecks,
    what: &str,
) -> Result<(), ConstructionError> {
    verify_family(phi, trees, checks).map_err(|v| ConstructionError::Defect(format!("{what}: {v}")))
}
