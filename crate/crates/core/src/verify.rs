//! Certificate checks for rainbow spanning trees and tree families.
//!
//! These checks use their own union-find and color bookkeeping and never call
//! into the construction code, so a construction cannot certify itself.

use std::collections::HashMap;

use thiserror::Error;

use crate::canon::ahu_code;
use crate::coloring::{Color, EdgeColoring, Vertex};
use crate::tree::ColoredTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("tree has order {tree}, coloring has order {coloring}")]
    OrderMismatch { tree: usize, coloring: usize },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("edge {{{u},{v}}} has an endpoint outside the vertex set")]
    VertexOutOfRange { u: Vertex, v: Vertex },
    #[error("edge {{{u},{v}}} listed twice")]
    DuplicateEdge { u: Vertex, v: Vertex },
    #[error("edge {{{u},{v}}} claims color {claimed} but the coloring gives {actual}")]
    ColorMismatch { u: Vertex, v: Vertex, claimed: Color, actual: Color },
    #[error("color {color} used on both {{{}, {}}} and {{{}, {}}}", first.0, first.1, second.0, second.1)]
    MulticoloredViolation { color: Color, first: (Vertex, Vertex), second: (Vertex, Vertex) },
    #[error("edge {{{u},{v}}} closes a cycle")]
    Cycle { u: Vertex, v: Vertex },
    #[error("vertex {vertex} is not connected to vertex 0")]
    Disconnected { vertex: Vertex },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyViolation {
    #[error("tree {index}: {violation}")]
    Tree { index: usize, violation: Violation },
    #[error("edge {{{u},{v}}} appears in trees {first} and {second}")]
    SharedEdge { u: Vertex, v: Vertex, first: usize, second: usize },
    #[error("edge {{{u},{v}}} is not covered")]
    MissingEdge { u: Vertex, v: Vertex },
    #[error("expected {expected} trees, found {found}")]
    TreeCount { expected: usize, found: usize },
    #[error("trees {first} and {second} are not isomorphic")]
    NotIsomorphic { first: usize, second: usize },
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Checks that `tree` is a spanning tree of K_N whose edge colors agree with
/// `phi` and are pairwise distinct. Returns the first violation found.
pub fn verify_multicolored_spanning_tree(phi: &EdgeColoring, tree: &ColoredTree) -> Result<(), Violation> {
    let n = phi.order();
    if tree.order() != n {
        return Err(Violation::OrderMismatch { tree: tree.order(), coloring: n });
    }
    let edges = tree.edges();
    if edges.len() != n - 1 {
        return Err(Violation::EdgeCount { expected: n - 1, found: edges.len() });
    }
    let mut color_owner: HashMap<Color, (Vertex, Vertex)> = HashMap::new();
    let mut seen_pairs = HashMap::new();
    let mut uf = UnionFind::new(n);
    for e in edges {
        let (u, v) = (e.u.min(e.v), e.u.max(e.v));
        if v >= n || u == v {
            return Err(Violation::VertexOutOfRange { u, v });
        }
        if seen_pairs.insert((u, v), ()).is_some() {
            return Err(Violation::DuplicateEdge { u, v });
        }
        let actual = phi.color(u, v);
        if actual != e.c {
            return Err(Violation::ColorMismatch { u, v, claimed: e.c, actual });
        }
        if let Some(&first) = color_owner.get(&e.c) {
            return Err(Violation::MulticoloredViolation { color: e.c, first, second: (u, v) });
        }
        color_owner.insert(e.c, (u, v));
        if !uf.union(u, v) {
            return Err(Violation::Cycle { u, v });
        }
    }
    let root = uf.find(0);
    if let Some(vertex) = (1..n).find(|&x| uf.find(x) != root) {
        return Err(Violation::Disconnected { vertex });
    }
    Ok(())
}

/// Which family-level properties to certify besides per-tree validity.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyChecks {
    pub disjoint: bool,
    pub isomorphic: bool,
    /// Trees cover every edge of K_N exactly once (implies `disjoint`).
    pub partition: bool,
}

impl FamilyChecks {
    pub fn all() -> Self {
        FamilyChecks { disjoint: true, isomorphic: true, partition: true }
    }

    pub fn disjoint_isomorphic() -> Self {
        FamilyChecks { disjoint: true, isomorphic: true, partition: false }
    }
}

/// Per-tree rainbow spanning checks followed by the requested family checks.
pub fn verify_family(
    phi: &EdgeColoring,
    trees: &[ColoredTree],
    checks: FamilyChecks,
) -> Result<(), FamilyViolation> {
    for (index, t) in trees.iter().enumerate() {
        verify_multicolored_spanning_tree(phi, t)
            .map_err(|violation| FamilyViolation::Tree { index, violation })?;
    }
    if checks.disjoint || checks.partition {
        let mut owner: HashMap<(Vertex, Vertex), usize> = HashMap::new();
        for (i, t) in trees.iter().enumerate() {
            for e in t.edges() {
                if let Some(&first) = owner.get(&(e.u, e.v)) {
                    return Err(FamilyViolation::SharedEdge { u: e.u, v: e.v, first, second: i });
                }
                owner.insert((e.u, e.v), i);
            }
        }
        if checks.partition {
            let n = phi.order();
            if trees.len() != n / 2 {
                return Err(FamilyViolation::TreeCount { expected: n / 2, found: trees.len() });
            }
            for u in 0..n {
                for v in u + 1..n {
                    if !owner.contains_key(&(u, v)) {
                        return Err(FamilyViolation::MissingEdge { u, v });
                    }
                }
            }
        }
    }
    if checks.isomorphic && !trees.is_empty() {
        let first = ahu_code(&trees[0]);
        if let Some(i) = (1..trees.len()).find(|&i| ahu_code(&trees[i]) != first) {
            return Err(FamilyViolation::NotIsomorphic { first: 0, second: i });
        }
    }
    Ok(())
}
