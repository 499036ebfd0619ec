use crate::coloring::EdgeColoring;
use crate::tree::{leaf_swap, star, ColoredTree, TreeError};
use crate::verify::FamilyChecks;

use super::witness::{find_four_cycle_witness, FourCycleWitness};
use super::{certify, decompose_c4, ConstructionError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoTreeRoute {
    /// Swapped stars around a path on a long bichromatic cycle.
    LongCycle(FourCycleWitness),
    /// Every color pair is a 4-cycle factor; first two trees of the full partition.
    AllFourCycles,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTrees {
    pub trees: [ColoredTree; 2],
    pub route: TwoTreeRoute,
}

/// `S_x1[x2,x4; b,a]` and `S_x2[x1,x3; b,a]`.
///
/// The first star loses `x1x2`, `x1x4` and gains `x2x3`, `x4<b>`; the second
/// loses `x2x1`, `x2x3` and gains `x1x4`, `x3<b>`. The two are edge-disjoint
/// and both are spiders with two legs of length two.
pub fn star_swap_pair(phi: &EdgeColoring, w: &FourCycleWitness) -> Result<[ColoredTree; 2], TreeError> {
    let t1 = leaf_swap(phi, &star(phi, w.x1), w.x2, w.x4)?;
    let t2 = leaf_swap(phi, &star(phi, w.x2), w.x1, w.x3)?;
    Ok([t1, t2])
}

pub fn two_trees(phi: &EdgeColoring) -> Result<TwoTrees, ConstructionError> {
    let n = phi.order();
    if n < 6 {
        return Err(ConstructionError::OrderTooSmall { order: n, minimum: 6 });
    }
    let out = match find_four_cycle_witness(phi) {
        Some(w) => TwoTrees { trees: star_swap_pair(phi, &w)?, route: TwoTreeRoute::LongCycle(w) },
        None => {
            let mut all = decompose_c4(phi)?.trees.into_iter();
            let (a, b) = (all.next().unwrap(), all.next().unwrap());
            TwoTrees { trees: [a, b], route: TwoTreeRoute::AllFourCycles }
        }
    };
    certify(phi, &out.trees, FamilyChecks::disjoint_isomorphic(), "two trees")?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{round_robin_coloring, xor_coloring, Color, ColoredEdge};

    fn e(u: usize, v: usize, c: u16) -> ColoredEdge {
        ColoredEdge::new(u, v, Color(c))
    }

    #[test]
    fn k6_circle_pair() {
        let phi = round_robin_coloring(3).unwrap();
        let out = two_trees(&phi).unwrap();
        assert!(matches!(out.route, TwoTreeRoute::LongCycle(_)));
        let t1 =
            ColoredTree::new(6, vec![e(0, 1, 3), e(0, 3, 4), e(0, 4, 2), e(2, 3, 0), e(1, 5, 1)]).unwrap();
        assert_eq!(out.trees[0], t1);
        // S_2 without 2-0 and 2-3, plus 0<0> = 0-5 and 3<1> = 3-4
        let mut want: Vec<_> =
            star(&phi, 2).edges().iter().copied().filter(|x| !x.touches(0) && !x.touches(3)).collect();
        want.push(e(0, 5, 0));
        want.push(e(3, 4, 1));
        assert_eq!(out.trees[1], ColoredTree::new(6, want).unwrap());
        for a in out.trees[0].edges() {
            assert!(!out.trees[1].contains_edge(a.u, a.v));
        }
    }

    #[test]
    fn xor8_uses_partition() {
        let out = two_trees(&xor_coloring(8).unwrap()).unwrap();
        assert_eq!(out.route, TwoTreeRoute::AllFourCycles);
    }

    #[test]
    fn k4_rejected() {
        assert_eq!(
            two_trees(&xor_coloring(4).unwrap()),
            Err(ConstructionError::OrderTooSmall { order: 4, minimum: 6 })
        );
    }
}
