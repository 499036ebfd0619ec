//! Partition into N/2 isomorphic rainbow spanning trees for colorings of
//! K_{2^n} in which every color pair forms a 4-cycle factor.
//!
//! Vertices are ordered by binary label. A block of `2^k` consecutive labels
//! is a sub-clique using `2^k - 1` colors; its lower and upper halves `A`, `B`
//! are mirrored (`a_i`, `b_i` differ only in the top bit), so both halves are
//! partitioned by the same recursive construction. The colors between `A` and
//! `B` form a latin square isomorphic to the group square, and each of its
//! `2^(k-1)` disjoint transversals is a rainbow perfect matching between the
//! halves. Tree `i` of the block is half-tree `i` (A-trees first) plus
//! matching `i`, which hangs one pendant leaf off every half-tree vertex.

use crate::coloring::{all_pairs_c4, ColoredEdge, EdgeColoring, Vertex};
use crate::labeling::binary_labeling;
use crate::latin::{bipartite_color_matrix, disjoint_transversals, TransversalStrategy};
use crate::tree::ColoredTree;
use crate::verify::FamilyChecks;

use super::base8::base_on_block;
use super::{certify, ConstructionError, TreeDecomposition};

/// Blocks at least this large recurse into their halves in parallel.
const PARALLEL_BLOCK: usize = 64;

pub fn decompose_c4(phi: &EdgeColoring) -> Result<TreeDecomposition, ConstructionError> {
    let n = phi.order();
    if !n.is_power_of_two() || n < 8 {
        return Err(ConstructionError::HypothesisViolated(format!("order {n} is not a power of two >= 8")));
    }
    if !all_pairs_c4(phi).holds() {
        return Err(ConstructionError::HypothesisViolated("some color pair is not a 4-cycle factor".into()));
    }
    let lab = binary_labeling(phi)?;
    let trees = decompose_block(phi, lab.vertices_by_label())?
        .into_iter()
        .map(|pairs| {
            let edges = pairs.into_iter().map(|(u, v)| ColoredEdge::new(u, v, phi.color(u, v))).collect();
            ColoredTree::new(n, edges)
        })
        .collect::<Result<Vec<_>, _>>()?;
    certify(phi, &trees, FamilyChecks::all(), "4-cycle partition")?;
    Ok(TreeDecomposition { trees })
}

/// Trees (as vertex pairs) partitioning the clique on `block`, where
/// `block[i]` carries local label `i`.
fn decompose_block(
    phi: &EdgeColoring,
    block: &[Vertex],
) -> Result<Vec<Vec<(Vertex, Vertex)>>, ConstructionError> {
    if block.len() == 8 {
        return base_on_block(block);
    }
    let half = block.len() / 2;
    let (a, b) = block.split_at(half);
    let (trees_a, trees_b) = if block.len() >= PARALLEL_BLOCK {
        rayon::join(|| decompose_block(phi, a), || decompose_block(phi, b))
    } else {
        (decompose_block(phi, a), decompose_block(phi, b))
    };
    let (trees_a, trees_b) = (trees_a?, trees_b?);

    let matrix = bipartite_color_matrix(phi, a, b)?;
    let bits = half.trailing_zeros();
    let family = disjoint_transversals(bits, TransversalStrategy::default_for(bits))?;
    for t in &family.members {
        // the group square's transversals are transversals of M because
        // M[i][j] depends only on i ^ j
        t.check(&matrix.square)
            .map_err(|e| ConstructionError::HypothesisViolated(format!("bipartite color square: {e}")))?;
    }

    Ok(trees_a
        .into_iter()
        .chain(trees_b)
        .zip(&family.members)
        .map(|(mut tree, matching)| {
            tree.extend(matching.cells.iter().map(|&(r, c)| (a[r], b[c])));
            tree
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::ahu_code;
    use crate::coloring::{random_relabel, round_robin_coloring, xor_coloring};

    #[test]
    fn xor16_partition() {
        let phi = xor_coloring(16).unwrap();
        let d = decompose_c4(&phi).unwrap();
        assert_eq!(d.trees.len(), 8);
        assert!(d.trees.iter().all(|t| t.edges().len() == 15));
        d.verify(&phi).unwrap();
    }

    #[test]
    fn xor8_delegates_to_base() {
        let phi = xor_coloring(8).unwrap();
        assert_eq!(decompose_c4(&phi).unwrap(), super::super::k8_base_decomposition(&phi).unwrap());
    }

    #[test]
    fn trees_are_half_trees_with_pendant_leaves() {
        let phi = xor_coloring(16).unwrap();
        let d = decompose_c4(&phi).unwrap();
        let base = super::super::k8_base_decomposition(&xor_coloring(8).unwrap()).unwrap();
        for t in &d.trees {
            // every vertex of one half has exactly one neighbor in the other half
            let low: Vec<_> = t.edges().iter().filter(|e| e.u < 8 && e.v < 8).collect();
            let high: Vec<_> = t.edges().iter().filter(|e| e.u >= 8 && e.v >= 8).collect();
            let cross = t.edges().iter().filter(|e| (e.u < 8) != (e.v < 8)).count();
            assert_eq!(cross, 8);
            assert!(low.len() == 7 && high.is_empty() || high.len() == 7 && low.is_empty());
            let leaves = t.degrees().iter().filter(|&&d| d == 1).count();
            assert_eq!(leaves, 8);
            // the half tree has the base shape
            let half: Vec<_> =
                low.iter().chain(&high).map(|e| ColoredEdge::new(e.u % 8, e.v % 8, e.c)).collect();
            let half = ColoredTree::new(8, half).unwrap();
            assert_eq!(ahu_code(&half), ahu_code(&base.trees[0]));
        }
    }

    #[test]
    fn relabeled_orders() {
        for n in [8, 16, 32, 64] {
            for seed in 0..3 {
                let phi = random_relabel(&xor_coloring(n).unwrap(), seed);
                let d = decompose_c4(&phi).unwrap();
                assert_eq!(d.trees.len(), n / 2);
            }
        }
    }

    #[test]
    fn rejects_non_c4() {
        assert!(matches!(
            decompose_c4(&round_robin_coloring(3).unwrap()),
            Err(ConstructionError::HypothesisViolated(_))
        ));
        assert!(matches!(
            decompose_c4(&round_robin_coloring(8).unwrap()),
            Err(ConstructionError::HypothesisViolated(_))
        ));
    }
}
