//! Proper (N-1)-edge-colorings of the complete graph K_N.
//!
//! An [`EdgeColoring`] is a symmetric color table in which every vertex sees
//! each of the `N - 1` colors exactly once, so every color class is a perfect
//! matching. Colors are 0-indexed, `0..N-1` exclusive of `N - 1`.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Vertex of K_N, in `0..N`.
pub type Vertex = usize;

/// Color identifier. Valid ids for K_N are `0..N-1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u16);

impl Color {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        Color(u16::try_from(i).expect("color index fits in u16"))
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Diagonal marker; never a valid color.
const NO_COLOR: u16 = u16::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("malformed coloring: {0}")]
    BadShape(String),
    #[error("color table is not symmetric at {{{u},{v}}}")]
    Asymmetric { u: Vertex, v: Vertex },
    #[error("color {color} repeats at vertex {vertex}")]
    NotProper { vertex: Vertex, color: Color },
    #[error("order {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("binary structure violated on edge {{{u},{v}}}")]
    StructureViolation { u: Vertex, v: Vertex },
}

/// Undirected colored edge, stored with `u < v`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub c: Color,
}

impl ColoredEdge {
    pub fn new(a: Vertex, b: Vertex, c: Color) -> Self {
        assert_ne!(a, b, "self-loop {a}");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        ColoredEdge { u, v, c }
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }

    pub fn touches(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: Vertex) -> Vertex {
        if self.u == x {
            self.v
        } else {
            debug_assert_eq!(self.v, x);
            self.u
        }
    }
}

impl fmt::Display for ColoredEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}({})", self.u, self.v, self.c)
    }
}

/// A validated proper (N-1)-edge-coloring of K_N.
#[derive(Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    order: usize,
    table: Vec<u16>,
    // partner[x * (order - 1) + c] = the vertex joined to x by color c
    partner: Vec<u16>,
}

impl fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "EdgeColoring(order {})", self.order)?;
        for u in 0..self.order {
            let row: Vec<String> = (0..self.order)
                .map(|v| match self.get(u, v) {
                    Some(c) => c.to_string(),
                    None => "-".into(),
                })
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl EdgeColoring {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_colors(&self) -> usize {
        self.order - 1
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        (0..self.order - 1).map(Color::from_index)
    }

    /// Color of the edge `{u, v}`. Panics on the diagonal.
    #[inline]
    pub fn color(&self, u: Vertex, v: Vertex) -> Color {
        let c = self.table[u * self.order + v];
        assert!(c != NO_COLOR, "no color on diagonal ({u},{v})");
        Color(c)
    }

    /// Color of `{u, v}`, or `None` when `u == v`.
    #[inline]
    pub fn get(&self, u: Vertex, v: Vertex) -> Option<Color> {
        match self.table[u * self.order + v] {
            NO_COLOR => None,
            c => Some(Color(c)),
        }
    }

    /// The unique vertex joined to `x` by an edge of color `c`.
    #[inline]
    pub fn inverse_at(&self, x: Vertex, c: Color) -> Vertex {
        self.partner[x * (self.order - 1) + c.index()] as Vertex
    }

    /// The edge `x<c>`: the edge at `x` carrying color `c`.
    pub fn edge_at(&self, x: Vertex, c: Color) -> ColoredEdge {
        ColoredEdge::new(x, self.inverse_at(x, c), c)
    }

    /// `V` together with the `c`-matching partners of its members.
    pub fn color_closure(&self, vs: &BTreeSet<Vertex>, c: Color) -> BTreeSet<Vertex> {
        let mut out = vs.clone();
        out.extend(vs.iter().map(|&v| self.inverse_at(v, c)));
        out
    }

    /// Edges of color `c`, each with `u < v`, sorted.
    pub fn color_class(&self, c: Color) -> Vec<ColoredEdge> {
        (0..self.order)
            .filter_map(|x| {
                let y = self.inverse_at(x, c);
                (x < y).then(|| ColoredEdge::new(x, y, c))
            })
            .collect()
    }

    /// All edges of K_N in lexicographic order.
    pub fn edges(&self) -> Vec<ColoredEdge> {
        let mut out = Vec::with_capacity(self.order * (self.order - 1) / 2);
        for u in 0..self.order {
            for v in u + 1..self.order {
                out.push(ColoredEdge::new(u, v, self.color(u, v)));
            }
        }
        out
    }

    /// Rows of the table with `-1` on the diagonal.
    pub fn to_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.order)
            .map(|u| (0..self.order).map(|v| self.get(u, v).map_or(-1, |c| c.index() as i64)).collect())
            .collect()
    }

    fn from_raw_table(order: usize, table: Vec<u16>) -> Result<Self, ColoringError> {
        let k = order - 1;
        let mut partner = vec![NO_COLOR; order * k];
        for u in 0..order {
            for v in 0..order {
                if u == v {
                    continue;
                }
                let c = table[u * order + v];
                if c as usize >= k {
                    return Err(ColoringError::BadShape(format!(
                        "color {c} at ({u},{v}) outside 0..{}",
                        k - 1
                    )));
                }
                if table[v * order + u] != c {
                    return Err(ColoringError::Asymmetric { u: u.min(v), v: u.max(v) });
                }
                let slot = &mut partner[u * k + c as usize];
                if *slot != NO_COLOR {
                    return Err(ColoringError::NotProper { vertex: u, color: Color(c) });
                }
                *slot = v as u16;
            }
        }
        Ok(EdgeColoring { order, table, partner })
    }

    /// Swaps colors `c1` and `c2` on every edge of `cycle` (consecutive vertices,
    /// closing back to the first).
    fn swap_along(&mut self, cycle: &[Vertex], c1: Color, c2: Color) {
        let n = self.order;
        let k = n - 1;
        for i in 0..cycle.len() {
            let (x, y) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            let old = self.table[x * n + y];
            let new = if old == c1.0 { c2.0 } else { c1.0 };
            self.table[x * n + y] = new;
            self.table[y * n + x] = new;
        }
        for &x in cycle {
            let a = self.partner[x * k + c1.index()];
            let b = self.partner[x * k + c2.index()];
            self.partner[x * k + c1.index()] = b;
            self.partner[x * k + c2.index()] = a;
        }
    }

    /// Applies a vertex permutation and a color permutation:
    /// the result colors `{vperm[u], vperm[v]}` with `cperm[color(u, v)]`.
    pub fn relabel(&self, vperm: &[Vertex], cperm: &[Color]) -> EdgeColoring {
        let n = self.order;
        assert_eq!(vperm.len(), n);
        assert_eq!(cperm.len(), n - 1);
        let mut table = vec![NO_COLOR; n * n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    table[vperm[u] * n + vperm[v]] = cperm[self.color(u, v).index()].0;
                }
            }
        }
        EdgeColoring::from_raw_table(n, table).expect("relabeling by permutations stays proper")
    }
}

fn check_order(order: usize) -> Result<(), ColoringError> {
    if order < 4 || order % 2 == 1 {
        return Err(ColoringError::BadShape(format!("order must be even and at least 4, got {order}")));
    }
    if order > u16::MAX as usize {
        return Err(ColoringError::BadShape(format!("order {order} too large")));
    }
    Ok(())
}

/// Validates a color matrix and builds the coloring.
///
/// Diagonal cells must be negative (the text format uses `-1`); off-diagonal
/// cells must hold colors in `0..order-1`, symmetric and proper at every vertex.
pub fn make_coloring(order: usize, table: &[Vec<i64>]) -> Result<EdgeColoring, ColoringError> {
    check_order(order)?;
    if table.len() != order {
        return Err(ColoringError::BadShape(format!("expected {order} rows, found {}", table.len())));
    }
    let mut raw = vec![NO_COLOR; order * order];
    for (u, row) in table.iter().enumerate() {
        if row.len() != order {
            return Err(ColoringError::BadShape(format!(
                "row {u} has {} entries, expected {order}",
                row.len()
            )));
        }
        for (v, &x) in row.iter().enumerate() {
            if u == v {
                if x >= 0 {
                    return Err(ColoringError::BadShape(format!(
                        "diagonal cell ({u},{u}) holds {x}, expected -1"
                    )));
                }
                continue;
            }
            if x < 0 || x >= (order - 1) as i64 {
                return Err(ColoringError::BadShape(format!(
                    "color {x} at ({u},{v}) outside 0..{}",
                    order - 2
                )));
            }
            raw[u * order + v] = x as u16;
        }
    }
    EdgeColoring::from_raw_table(order, raw)
}

/// Circle-method 1-factorization of K_{2m}.
///
/// Vertices `0..2m-1` sit on a cycle of odd length `p = 2m - 1` and vertex
/// `p` is the hub. Edge `{u, v}` with `u, v < p` gets the unique `r` with
/// `2r = u + v (mod p)`; hub edge `{p, v}` gets color `v`.
pub fn round_robin_coloring(m: usize) -> Result<EdgeColoring, ColoringError> {
    let order = 2 * m;
    check_order(order)?;
    let p = order - 1;
    let half = p.div_ceil(2); // inverse of 2 mod p
    let mut table = vec![NO_COLOR; order * order];
    for u in 0..order {
        for v in 0..order {
            if u == v {
                continue;
            }
            let c = if u == p {
                v
            } else if v == p {
                u
            } else {
                (u + v) * half % p
            };
            table[u * order + v] = c as u16;
        }
    }
    EdgeColoring::from_raw_table(order, table)
}

/// The group-table coloring of K_{2^n}: `{u, v}` gets `(u XOR v) - 1`.
pub fn xor_coloring(order: usize) -> Result<EdgeColoring, ColoringError> {
    if !order.is_power_of_two() || order < 4 {
        return Err(ColoringError::NotPowerOfTwo(order));
    }
    check_order(order)?;
    let mut table = vec![NO_COLOR; order * order];
    for u in 0..order {
        for v in 0..order {
            if u != v {
                table[u * order + v] = ((u ^ v) - 1) as u16;
            }
        }
    }
    EdgeColoring::from_raw_table(order, table)
}

/// Alternating cycles of the union of two color classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePairReport {
    pub c1: Color,
    pub c2: Color,
    /// Each cycle starts at its smallest vertex and leaves it along `c1`.
    pub cycles: Vec<Vec<Vertex>>,
}

impl CyclePairReport {
    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    pub fn all_four_cycles(&self) -> bool {
        self.cycles.iter().all(|c| c.len() == 4)
    }
}

/// Decomposes the 2-regular subgraph of colors `c1`, `c2` into its cycles.
pub fn color_pair_cycles(phi: &EdgeColoring, c1: Color, c2: Color) -> CyclePairReport {
    assert_ne!(c1, c2, "color pair must be distinct");
    let n = phi.order();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        let mut use_first = true;
        loop {
            seen[cur] = true;
            cycle.push(cur);
            cur = phi.inverse_at(cur, if use_first { c1 } else { c2 });
            use_first = !use_first;
            if cur == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    CyclePairReport { c1, c2, cycles }
}

/// Outcome of testing whether every color pair induces a 4-cycle factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum C4Check {
    AllFourCycles,
    /// First pair (in lexicographic color order) with a cycle of length >= 6.
    LongCycle {
        c1: Color,
        c2: Color,
        cycle: Vec<Vertex>,
    },
}

impl C4Check {
    pub fn holds(&self) -> bool {
        matches!(self, C4Check::AllFourCycles)
    }
}

pub fn all_pairs_c4(phi: &EdgeColoring) -> C4Check {
    let k = phi.num_colors();
    for a in 0..k {
        for b in a + 1..k {
            let (c1, c2) = (Color::from_index(a), Color::from_index(b));
            let report = color_pair_cycles(phi, c1, c2);
            if let Some(cycle) = report.cycles.into_iter().find(|c| c.len() > 4) {
                return C4Check::LongCycle { c1, c2, cycle };
            }
        }
    }
    C4Check::AllFourCycles
}

/// Random sequence of Kempe moves.
///
/// Each step draws two distinct colors, lists their bichromatic cycles, and
/// swaps the colors along one uniformly chosen cycle. Deterministic in `seed`.
pub fn kempe_randomize(phi: &EdgeColoring, seed: u64, steps: usize) -> EdgeColoring {
    let mut out = phi.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = phi.num_colors();
    for _ in 0..steps {
        let picked = rand::seq::index::sample(&mut rng, k, 2);
        let (c1, c2) = (Color::from_index(picked.index(0)), Color::from_index(picked.index(1)));
        let report = color_pair_cycles(&out, c1, c2);
        let i = rng.gen_range(0..report.cycles.len());
        out.swap_along(&report.cycles[i], c1, c2);
    }
    out
}

/// Swaps colors `c1` and `c2` along every one of their bichromatic cycles.
pub fn swap_color_pair(phi: &EdgeColoring, c1: Color, c2: Color) -> EdgeColoring {
    let mut out = phi.clone();
    for cycle in color_pair_cycles(phi, c1, c2).cycles {
        out.swap_along(&cycle, c1, c2);
    }
    out
}

/// Random vertex and color relabeling. Preserves every structural property of
/// the coloring, including the all-4-cycles property.
pub fn random_relabel(phi: &EdgeColoring, seed: u64) -> EdgeColoring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vperm: Vec<Vertex> = (0..phi.order()).collect();
    vperm.shuffle(&mut rng);
    let mut cperm: Vec<Color> = phi.colors().collect();
    cperm.shuffle(&mut rng);
    phi.relabel(&vperm, &cperm)
}

/// Circle-method coloring followed by `steps` Kempe moves.
pub fn random_coloring(order: usize, seed: u64, steps: usize) -> Result<EdgeColoring, ColoringError> {
    check_order(order)?;
    Ok(kempe_randomize(&round_robin_coloring(order / 2)?, seed, steps))
}
