//! The K_8 base case: four isomorphic rainbow spanning trees partitioning the
//! group-table coloring of K_8, found once by exhaustive search and then
//! transported to any coloring with the 4-cycle property via its binary
//! labeling.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::canon::{ahu_code, CanonicalCode};
use crate::coloring::{all_pairs_c4, ColoredEdge, EdgeColoring, Vertex};
use crate::labeling::binary_labeling;
use crate::tree::ColoredTree;
use crate::verify::FamilyChecks;

use super::{certify, ConstructionError, TreeDecomposition};

const N: usize = 8;

/// Edges `(x, y)` with `x < y` in label space, one list per tree.
pub type BaseSolution = Vec<Vec<(usize, usize)>>;

static BASE: OnceLock<Option<BaseSolution>> = OnceLock::new();

/// The cached base partition of the XOR coloring of K_8 (labels = vertices).
pub fn xor8_base_trees() -> Result<&'static BaseSolution, ConstructionError> {
    BASE.get_or_init(search_base)
        .as_ref()
        .ok_or_else(|| ConstructionError::SearchFailed("no isomorphic partition of XOR K_8".into()))
}

fn edge_index() -> (Vec<(usize, usize)>, [[usize; N]; N]) {
    let mut list = Vec::new();
    let mut idx = [[usize::MAX; N]; N];
    for u in 0..N {
        for v in u + 1..N {
            idx[u][v] = list.len();
            idx[v][u] = list.len();
            list.push((u, v));
        }
    }
    (list, idx)
}

/// Enumerates rainbow spanning trees of XOR K_8 as 28-bit edge masks, groups
/// them by shape, and runs an exact cover over each shape class.
fn search_base() -> Option<BaseSolution> {
    let (list, _) = edge_index();
    let mut trees: Vec<u32> = Vec::new();
    enumerate(&list, 0, 0, 0, [0, 1, 2, 3, 4, 5, 6, 7], 0, &mut trees);

    let mut by_shape: BTreeMap<CanonicalCode, Vec<u32>> = BTreeMap::new();
    for &mask in &trees {
        by_shape.entry(ahu_code(&mask_to_tree(&list, mask))).or_default().push(mask);
    }
    for group in by_shape.values() {
        let mut chosen = Vec::new();
        if cover(group, 0, &mut chosen) {
            return Some(
                chosen
                    .iter()
                    .map(|&m| (0..list.len()).filter(|i| m >> i & 1 == 1).map(|i| list[i]).collect())
                    .collect(),
            );
        }
    }
    None
}

fn enumerate(
    list: &[(usize, usize)],
    start: usize,
    mask: u32,
    colors: u32,
    comp: [usize; N],
    count: usize,
    out: &mut Vec<u32>,
) {
    if count == N - 1 {
        out.push(mask);
        return;
    }
    for i in start..list.len() {
        if list.len() - i < N - 1 - count {
            break;
        }
        let (u, v) = list[i];
        let c = (u ^ v) - 1;
        if colors >> c & 1 == 1 || comp[u] == comp[v] {
            continue;
        }
        let (from, to) = (comp[u], comp[v]);
        let mut next = comp;
        for x in next.iter_mut() {
            if *x == from {
                *x = to;
            }
        }
        enumerate(list, i + 1, mask | 1 << i, colors | 1 << c, next, count + 1, out);
    }
}

fn cover(group: &[u32], covered: u32, chosen: &mut Vec<u32>) -> bool {
    const ALL: u32 = (1 << 28) - 1;
    if covered == ALL {
        return chosen.len() == N / 2;
    }
    let lowest = (!covered).trailing_zeros();
    for &t in group {
        if t >> lowest & 1 == 1 && t & covered == 0 {
            chosen.push(t);
            if cover(group, covered | t, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn mask_to_tree(list: &[(usize, usize)], mask: u32) -> ColoredTree {
    let edges = (0..list.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| {
            let (u, v) = list[i];
            ColoredEdge::new(u, v, crate::coloring::Color::from_index((u ^ v) - 1))
        })
        .collect();
    ColoredTree::from_edges_unchecked(N, edges)
}

/// Base trees placed on `block`, where `block[x]` is the vertex with local label `x`.
pub(super) fn base_on_block(block: &[Vertex]) -> Result<Vec<Vec<(Vertex, Vertex)>>, ConstructionError> {
    debug_assert_eq!(block.len(), N);
    Ok(xor8_base_trees()?.iter().map(|t| t.iter().map(|&(x, y)| (block[x], block[y])).collect()).collect())
}

/// Four isomorphic rainbow spanning trees partitioning E(K_8), for a coloring
/// in which every color pair forms a 4-cycle factor.
pub fn k8_base_decomposition(phi: &EdgeColoring) -> Result<TreeDecomposition, ConstructionError> {
    if phi.order() != N {
        return Err(ConstructionError::HypothesisViolated(format!(
            "base case needs order 8, got {}",
            phi.order()
        )));
    }
    if !all_pairs_c4(phi).holds() {
        return Err(ConstructionError::HypothesisViolated("some color pair is not a 4-cycle factor".into()));
    }
    let lab = binary_labeling(phi)?;
    let trees = base_on_block(lab.vertices_by_label())?
        .into_iter()
        .map(|pairs| {
            let edges = pairs.into_iter().map(|(u, v)| ColoredEdge::new(u, v, phi.color(u, v))).collect();
            ColoredTree::new(N, edges)
        })
        .collect::<Result<Vec<_>, _>>()?;
    certify(phi, &trees, FamilyChecks::all(), "K_8 base partition")?;
    Ok(TreeDecomposition { trees })
}
