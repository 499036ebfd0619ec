//! Exhaustive searches at small orders, used as ground truth for the
//! constructions.
//!
//! Rainbow spanning trees are enumerated by edge-ordered backtracking; family
//! searches then run exact cover (partitions) or disjoint-set search over the
//! enumerated trees, one isomorphism class at a time when isomorphism is
//! required. Results are the first solution in that fixed order.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::canon::ahu_code;
use crate::coloring::{ColoredEdge, EdgeColoring, Vertex};
use crate::constructions::TreeDecomposition;
use crate::tree::ColoredTree;

pub const MAX_ENUMERATION_ORDER: usize = 10;
pub const MAX_PARTITION_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("order {order} exceeds the oracle limit {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("search budget exhausted after {nodes} nodes ({elapsed:?}); verdict unknown")]
    BudgetExhausted { nodes: u64, elapsed: Duration },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_duration: Duration,
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_duration: Duration) -> Result<Self, OracleError> {
        if max_nodes == 0 || max_duration.is_zero() {
            return Err(OracleError::InvalidArgument("budget must be positive".into()));
        }
        Ok(SearchBudget { max_nodes, max_duration })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 500_000_000, max_duration: Duration::from_secs(60) }
    }
}

/// Result of a completed search: `found` is `None` only when the search space
/// was exhausted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome<T> {
    pub found: Option<T>,
    pub nodes: u64,
}

struct Meter {
    budget: SearchBudget,
    start: Instant,
    nodes: u64,
}

impl Meter {
    fn new(budget: SearchBudget) -> Self {
        Meter { budget, start: Instant::now(), nodes: 0 }
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        let over_nodes = self.nodes > self.budget.max_nodes;
        if over_nodes || (self.nodes & 0xfff == 0 && self.start.elapsed() > self.budget.max_duration) {
            return Err(OracleError::BudgetExhausted { nodes: self.nodes, elapsed: self.start.elapsed() });
        }
        Ok(())
    }
}

struct RollbackDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<(usize, usize)>,
}

impl RollbackDsu {
    fn new(n: usize) -> Self {
        RollbackDsu { parent: (0..n).collect(), size: vec![1; n], history: Vec::new() }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Returns false (and records nothing) if already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.history.push((rb, ra));
        true
    }

    fn undo(&mut self) {
        let (child, root) = self.history.pop().expect("undo without union");
        self.parent[child] = child;
        self.size[root] -= self.size[child];
    }
}

/// Lazy enumeration of every rainbow spanning tree, each exactly once, in
/// lexicographic order of sorted edge lists.
pub struct RainbowTrees<'a> {
    phi: &'a EdgeColoring,
    edges: Vec<ColoredEdge>,
    chosen: Vec<usize>,
    dsu: RollbackDsu,
    colors: u64,
    next: usize,
    done: bool,
}

impl RainbowTrees<'_> {
    fn pop(&mut self) {
        let last = self.chosen.pop().expect("pop on empty path");
        self.dsu.undo();
        self.colors &= !(1 << self.edges[last].c.index());
        self.next = last + 1;
    }
}

impl Iterator for RainbowTrees<'_> {
    type Item = ColoredTree;

    fn next(&mut self) -> Option<ColoredTree> {
        let n = self.phi.order();
        loop {
            if self.done {
                return None;
            }
            if self.chosen.len() == n - 1 {
                let edges = self.chosen.iter().map(|&i| self.edges[i]).collect();
                self.pop();
                return Some(ColoredTree::from_edges_unchecked(n, edges));
            }
            let need = n - 1 - self.chosen.len();
            let mut advanced = false;
            while self.next + need <= self.edges.len() {
                let i = self.next;
                let e = self.edges[i];
                if self.colors >> e.c.index() & 1 == 0 && self.dsu.union(e.u, e.v) {
                    self.chosen.push(i);
                    self.colors |= 1 << e.c.index();
                    self.next = i + 1;
                    advanced = true;
                    break;
                }
                self.next += 1;
            }
            if !advanced {
                if self.chosen.is_empty() {
                    self.done = true;
                } else {
                    self.pop();
                }
            }
        }
    }
}

pub fn enumerate_rainbow_spanning_trees(phi: &EdgeColoring) -> Result<RainbowTrees<'_>, OracleError> {
    let n = phi.order();
    if n > MAX_ENUMERATION_ORDER {
        return Err(OracleError::OrderTooLarge { order: n, max: MAX_ENUMERATION_ORDER });
    }
    Ok(RainbowTrees {
        phi,
        edges: phi.edges(),
        chosen: Vec::new(),
        dsu: RollbackDsu::new(n),
        colors: 0,
        next: 0,
        done: n < 2,
    })
}

/// Edge bitmasks with the trees they encode.
type TreeGroup = (Vec<u64>, Vec<ColoredTree>);

/// Enumerated trees as edge bitmasks over `phi.edges()` order, grouped by
/// shape when `by_shape` (otherwise a single group).
fn tree_groups(phi: &EdgeColoring, by_shape: bool, meter: &mut Meter) -> Result<Vec<TreeGroup>, OracleError> {
    let index = edge_bits(phi.order());
    let mut groups: BTreeMap<Vec<u8>, TreeGroup> = BTreeMap::new();
    for t in enumerate_rainbow_spanning_trees(phi)? {
        meter.tick()?;
        let mask = t.edges().iter().fold(0u64, |m, e| m | 1 << index[e.u][e.v]);
        let key = if by_shape { ahu_code(&t).as_bytes().to_vec() } else { Vec::new() };
        let g = groups.entry(key).or_default();
        g.0.push(mask);
        g.1.push(t);
    }
    Ok(groups.into_values().collect())
}

fn edge_bits(n: usize) -> Vec<Vec<usize>> {
    let mut index = vec![vec![usize::MAX; n]; n];
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            index[u][v] = k;
            index[v][u] = k;
            k += 1;
        }
    }
    index
}

/// Partition of E(K_N) into N/2 rainbow spanning trees (isomorphic if
/// required), or a definite `None`.
pub fn brute_force_partition(
    phi: &EdgeColoring,
    require_isomorphic: bool,
    budget: SearchBudget,
) -> Result<SearchOutcome<TreeDecomposition>, OracleError> {
    let n = phi.order();
    if n > MAX_PARTITION_ORDER {
        return Err(OracleError::OrderTooLarge { order: n, max: MAX_PARTITION_ORDER });
    }
    let mut meter = Meter::new(budget);
    let all: u64 = (1u64 << (n * (n - 1) / 2)) - 1;
    for (masks, trees) in tree_groups(phi, require_isomorphic, &mut meter)? {
        let mut chosen = Vec::new();
        if exact_cover(&masks, all, 0, n / 2, &mut chosen, &mut meter)? {
            let trees = chosen.into_iter().map(|i| trees[i].clone()).collect();
            return Ok(SearchOutcome { found: Some(TreeDecomposition { trees }), nodes: meter.nodes });
        }
    }
    Ok(SearchOutcome { found: None, nodes: meter.nodes })
}

fn exact_cover(
    masks: &[u64],
    all: u64,
    covered: u64,
    remaining: usize,
    chosen: &mut Vec<usize>,
    meter: &mut Meter,
) -> Result<bool, OracleError> {
    if covered == all {
        return Ok(remaining == 0);
    }
    if remaining == 0 {
        return Ok(false);
    }
    let lowest = (!covered).trailing_zeros();
    for (i, &m) in masks.iter().enumerate() {
        if m >> lowest & 1 == 1 && m & covered == 0 {
            meter.tick()?;
            chosen.push(i);
            if exact_cover(masks, all, covered | m, remaining - 1, chosen, meter)? {
                return Ok(true);
            }
            chosen.pop();
        }
    }
    Ok(false)
}

/// `k` pairwise edge-disjoint rainbow spanning trees (isomorphic if required),
/// or a definite `None`.
pub fn brute_force_disjoint_trees(
    phi: &EdgeColoring,
    k: usize,
    require_isomorphic: bool,
    budget: SearchBudget,
) -> Result<SearchOutcome<Vec<ColoredTree>>, OracleError> {
    let n = phi.order();
    if n > MAX_ENUMERATION_ORDER {
        return Err(OracleError::OrderTooLarge { order: n, max: MAX_ENUMERATION_ORDER });
    }
    if !(1..=3).contains(&k) {
        return Err(OracleError::InvalidArgument(format!("k = {k} outside 1..=3")));
    }
    let mut meter = Meter::new(budget);
    for (masks, trees) in tree_groups(phi, require_isomorphic, &mut meter)? {
        let mut chosen = Vec::new();
        if disjoint_set(&masks, 0, 0, k, &mut chosen, &mut meter)? {
            let found = chosen.into_iter().map(|i| trees[i].clone()).collect();
            return Ok(SearchOutcome { found: Some(found), nodes: meter.nodes });
        }
    }
    Ok(SearchOutcome { found: None, nodes: meter.nodes })
}

fn disjoint_set(
    masks: &[u64],
    start: usize,
    used: u64,
    k: usize,
    chosen: &mut Vec<usize>,
    meter: &mut Meter,
) -> Result<bool, OracleError> {
    if chosen.len() == k {
        return Ok(true);
    }
    for i in start..masks.len() {
        if masks[i] & used == 0 {
            meter.tick()?;
            chosen.push(i);
            if disjoint_set(masks, i + 1, used | masks[i], k, chosen, meter)? {
                return Ok(true);
            }
            chosen.pop();
        }
    }
    Ok(false)
}

/// Rainbow spanning check by edge bitmask and depth-first reachability,
/// independent of the main verifier.
pub fn is_rainbow_spanning_tree(phi: &EdgeColoring, tree: &ColoredTree) -> bool {
    let n = phi.order();
    let edges = tree.edges();
    if tree.order() != n || edges.len() + 1 != n {
        return false;
    }
    let mut colors = 0u64;
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        if e.u >= n || e.v >= n || e.u == e.v || phi.color(e.u, e.v) != e.c {
            return false;
        }
        if colors >> e.c.index() & 1 == 1 {
            return false;
        }
        colors |= 1 << e.c.index();
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    // n - 1 edges reaching every vertex form a tree
    count == n
}

/// Graph isomorphism of two trees by backtracking over vertex bijections.
///
/// Vertices of `a` are mapped in depth-first order, so every vertex after the
/// first must land on an unused neighbor of its parent's image with the same
/// degree. Leaves of one parent are interchangeable, so only one image is
/// tried for each. Exponential in the worst case.
pub fn isomorphic_by_permutation(a: &ColoredTree, b: &ColoredTree) -> bool {
    let n = a.order();
    if b.order() != n || a.edges().len() != b.edges().len() || a.edges().len() + 1 != n {
        return false;
    }
    let (adj_a, adj_b) = (a.adjacency(), b.adjacency());
    let (deg_a, deg_b) = (a.degrees(), b.degrees());
    let mut sorted_a = deg_a.clone();
    let mut sorted_b = deg_b.clone();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    if sorted_a != sorted_b {
        return false;
    }
    // depth-first order of `a` with parents
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in adj_a[x].iter().rev() {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    if order.len() != n {
        return false;
    }
    let ctx = PermSearch { adj_b: &adj_b, deg_a: &deg_a, deg_b: &deg_b, order: &order, parent: &parent };
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    (0..n).filter(|&y| deg_b[y] == deg_a[0]).any(|y| {
        map[0] = y;
        used[y] = true;
        let ok = ctx.extend(1, &mut map, &mut used);
        used[y] = false;
        ok
    })
}

struct PermSearch<'a> {
    adj_b: &'a [Vec<Vertex>],
    deg_a: &'a [usize],
    deg_b: &'a [usize],
    order: &'a [Vertex],
    parent: &'a [Vertex],
}

impl PermSearch<'_> {
    fn extend(&self, i: usize, map: &mut [Vertex], used: &mut [bool]) -> bool {
        if i == self.order.len() {
            return true;
        }
        let x = self.order[i];
        let leaf = self.deg_a[x] == 1;
        for &y in &self.adj_b[map[self.parent[x]]] {
            if used[y] || self.deg_b[y] != self.deg_a[x] {
                continue;
            }
            map[x] = y;
            used[y] = true;
            let ok = self.extend(i + 1, map, used);
            used[y] = false;
            if ok {
                return true;
            }
            if leaf {
                break;
            }
        }
        map[x] = usize::MAX;
        false
    }
}

/// Oracle-side certificate for a family: every tree rainbow spanning,
/// pairwise edge-disjoint, covering E(K_N) when `partition`, pairwise
/// isomorphic by permutation search when `isomorphic`.
pub fn certify_family(phi: &EdgeColoring, trees: &[ColoredTree], partition: bool, isomorphic: bool) -> bool {
    let n = phi.order();
    if !trees.iter().all(|t| is_rainbow_spanning_tree(phi, t)) {
        return false;
    }
    let mut seen = vec![vec![false; n]; n];
    let mut total = 0;
    for e in trees.iter().flat_map(|t| t.edges()) {
        if seen[e.u][e.v] {
            return false;
        }
        seen[e.u][e.v] = true;
        total += 1;
    }
    if partition && total != n * (n - 1) / 2 {
        return false;
    }
    !isomorphic || trees.windows(2).all(|w| isomorphic_by_permutation(&w[0], &w[1]))
}
