//! Colored spanning trees of K_N and the operations the constructions use on
//! them: stars and the leaf swap `T[x1,x2;c1,c2]`.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::coloring::{Color, ColoredEdge, EdgeColoring, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("vertex {0} is not a leaf")]
    NotALeaf(Vertex),
    #[error("not a spanning tree: {0}")]
    NotATree(String),
    #[error("trees have different orders ({0} vs {1})")]
    OrderMismatch(usize, usize),
}

/// Spanning tree on `0..order` whose edges carry colors.
///
/// [`ColoredTree::new`] checks the tree structure; colors are only compared
/// against a coloring by [`crate::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredTree {
    order: usize,
    edges: Vec<ColoredEdge>,
}

impl ColoredTree {
    pub fn new(order: usize, edges: Vec<ColoredEdge>) -> Result<Self, TreeError> {
        let t = Self::from_edges_unchecked(order, edges);
        t.check_structure()?;
        Ok(t)
    }

    /// Wraps an edge list without any checks. Used for parsed certificates
    /// that are then handed to the verifier.
    pub fn from_edges_unchecked(order: usize, mut edges: Vec<ColoredEdge>) -> Self {
        edges.sort_unstable();
        ColoredTree { order, edges }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Edges sorted by endpoints.
    pub fn edges(&self) -> &[ColoredEdge] {
        &self.edges
    }

    pub fn contains_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges.iter().any(|e| e.u == a && e.v == b)
    }

    pub fn degree(&self, x: Vertex) -> usize {
        self.edges.iter().filter(|e| e.touches(x)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.order];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.order];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    /// Color multiset as `color -> count`.
    pub fn color_counts(&self) -> BTreeMap<Color, usize> {
        let mut m = BTreeMap::new();
        for e in &self.edges {
            *m.entry(e.c).or_insert(0) += 1;
        }
        m
    }

    fn check_structure(&self) -> Result<(), TreeError> {
        let n = self.order;
        if n == 0 {
            return Err(TreeError::NotATree("empty vertex set".into()));
        }
        if self.edges.len() + 1 != n {
            return Err(TreeError::NotATree(format!("{} edges on {n} vertices", self.edges.len())));
        }
        if let Some(e) = self.edges.iter().find(|e| e.v >= n) {
            return Err(TreeError::NotATree(format!("edge {e} leaves 0..{n}")));
        }
        // |E| = n - 1, so connected <=> tree
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        if count != n {
            let lost = seen.iter().position(|s| !s).unwrap();
            return Err(TreeError::NotATree(format!("vertex {lost} unreachable from 0")));
        }
        Ok(())
    }

    /// The single edge at a leaf.
    pub fn pendant_edge(&self, leaf: Vertex) -> Result<ColoredEdge, TreeError> {
        let mut it = self.edges.iter().filter(|e| e.touches(leaf));
        match (it.next(), it.next()) {
            (Some(&e), None) => Ok(e),
            _ => Err(TreeError::NotALeaf(leaf)),
        }
    }

    /// Vertex counts by distance from `center`; entry 0 is the center itself.
    pub fn depth_profile(&self, center: Vertex) -> Vec<usize> {
        let adj = self.adjacency();
        let mut depth = vec![usize::MAX; self.order];
        depth[center] = 0;
        let mut queue = VecDeque::from([center]);
        let mut counts = vec![0usize];
        counts[0] = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    if counts.len() <= depth[y] {
                        counts.push(0);
                    }
                    counts[depth[y]] += 1;
                    queue.push_back(y);
                }
            }
        }
        counts
    }

    /// Replaces `remove` by `add` and rechecks the tree structure.
    pub fn exchange(&self, remove: &[ColoredEdge], add: &[ColoredEdge]) -> Result<Self, TreeError> {
        let mut edges = self.edges.clone();
        for r in remove {
            let pos = edges
                .iter()
                .position(|e| e.u == r.u && e.v == r.v)
                .ok_or_else(|| TreeError::NotATree(format!("edge {r} is not in the tree")))?;
            edges.swap_remove(pos);
        }
        for a in add {
            if edges.iter().any(|e| e.u == a.u && e.v == a.v) {
                return Err(TreeError::NotATree(format!("edge {a} already present")));
            }
            edges.push(*a);
        }
        ColoredTree::new(self.order, edges)
    }
}

/// The star `S_u`: every edge at `u`.
pub fn star(phi: &EdgeColoring, u: Vertex) -> ColoredTree {
    let edges =
        (0..phi.order()).filter(|&v| v != u).map(|v| ColoredEdge::new(u, v, phi.color(u, v))).collect();
    ColoredTree::from_edges_unchecked(phi.order(), edges)
}

/// `T[x1,x2;c1,c2]`: removes the pendant edges `e1` (color `c1`) at leaf `x1`
/// and `e2` (color `c2`) at leaf `x2`, then adds `x1<c2>` and `x2<c1>`.
pub fn leaf_swap(
    phi: &EdgeColoring,
    tree: &ColoredTree,
    x1: Vertex,
    x2: Vertex,
) -> Result<ColoredTree, TreeError> {
    let e1 = tree.pendant_edge(x1)?;
    let e2 = tree.pendant_edge(x2)?;
    let (c1, c2) = (e1.c, e2.c);
    let bracket = format!("T[{x1},{x2};{c1},{c2}]");
    if c1 == c2 {
        return Err(TreeError::NotATree(format!("{bracket}: pendant colors coincide")));
    }
    tree.exchange(&[e1, e2], &[phi.edge_at(x1, c2), phi.edge_at(x2, c1)])
        .map_err(|e| TreeError::NotATree(format!("{bracket}: {e}")))
}
