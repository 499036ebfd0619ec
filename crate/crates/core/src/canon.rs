//! Canonical codes for unlabeled trees.
//!
//! The code roots the tree at its centroid and builds the classic
//! Aho-Hopcroft-Ullman bracket string: each vertex is `(` followed by the
//! sorted codes of its children and `)`. With two centroids the smaller of
//! the two rooted codes is taken. Edge colors are ignored.

use crate::coloring::Vertex;
use crate::tree::{ColoredTree, TreeError};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl std::fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(std::str::from_utf8(&self.0).expect("code is ASCII brackets"))
    }
}

pub fn ahu_code(tree: &ColoredTree) -> CanonicalCode {
    let adj = tree.adjacency();
    centroids(&adj)
        .into_iter()
        .map(|root| CanonicalCode(rooted_code(&adj, root)))
        .min()
        .expect("a tree has at least one centroid")
}

pub fn is_isomorphic(a: &ColoredTree, b: &ColoredTree) -> Result<bool, TreeError> {
    if a.order() != b.order() {
        return Err(TreeError::OrderMismatch(a.order(), b.order()));
    }
    Ok(ahu_code(a) == ahu_code(b))
}

/// Parent array and BFS order from `root`.
fn bfs_order(adj: &[Vec<Vertex>], root: Vertex) -> (Vec<Vertex>, Vec<Vertex>) {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    parent[root] = root;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                order.push(y);
            }
        }
    }
    (parent, order)
}

fn centroids(adj: &[Vec<Vertex>]) -> Vec<Vertex> {
    let n = adj.len();
    let (parent, order) = bfs_order(adj, 0);
    let mut size = vec![1usize; n];
    for &x in order.iter().rev() {
        if parent[x] != x {
            size[parent[x]] += size[x];
        }
    }
    let mut out = Vec::new();
    for x in 0..n {
        let mut heaviest = n - size[x];
        for &y in &adj[x] {
            if parent[y] == x {
                heaviest = heaviest.max(size[y]);
            }
        }
        if 2 * heaviest <= n {
            out.push(x);
        }
    }
    out
}

fn rooted_code(adj: &[Vec<Vertex>], root: Vertex) -> Vec<u8> {
    let n = adj.len();
    let (parent, order) = bfs_order(adj, root);
    let mut codes: Vec<Vec<u8>> = vec![Vec::new(); n];
    for &x in order.iter().rev() {
        let mut kids: Vec<Vec<u8>> = adj[x]
            .iter()
            .filter(|&&y| parent[y] == x && y != x)
            .map(|&y| std::mem::take(&mut codes[y]))
            .collect();
        kids.sort_unstable();
        let mut code = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
        code.push(b'(');
        for k in kids {
            code.extend(k);
        }
        code.push(b')');
        codes[x] = code;
    }
    std::mem::take(&mut codes[root])
}
