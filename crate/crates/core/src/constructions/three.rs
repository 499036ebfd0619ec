//! Three disjoint isomorphic rainbow spanning trees for N >= 28.
//!
//! Starting from the swapped-star pair `T1`, `T2` centered at `x1`, `x2`, a
//! third center `u` is chosen; `T1`, `T2` each give up the edge to `u`
//! (plus one more pendant edge) so that the star at `u` can be bent into a
//! third tree of the same shape: center of degree N - 5 with four vertices at
//! distance two.
//!
//! The side conditions on the chosen vertices do not force every detail of
//! the result, so candidates are scanned in vertex and color order and each
//! candidate is accepted only after the verifier has certified all three
//! trees.

use std::collections::BTreeSet;
use std::fmt;

use crate::coloring::{Color, ColoredEdge, EdgeColoring, Vertex};
use crate::tree::{leaf_swap, star, ColoredTree};
use crate::verify::{verify_family, FamilyChecks};

use super::two::star_swap_pair;
use super::witness::{four_cycle_witnesses, FourCycleWitness};
use super::{certify, decompose_c4, ConstructionError};

pub const MIN_ORDER_THREE_TREES: usize = 28;

/// Every vertex and color fixed by the scan.
///
/// `k1 = color(u x1)`, `k2 = color(u x2)`, `k3 = color(x1 v1)`,
/// `k4 = color(x2 v2)`; `u1 = u<k3>`, `u2 = u<k4>`, `p1 = v1<k1>`,
/// `p2 = v2<k2>`; `w1 w2` has color `k3`; `z1 = u2<c_r>`, `z2 = u<c_r>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeTreeSelection {
    pub witness: FourCycleWitness,
    pub y1: Vertex,
    pub y2: Vertex,
    pub u: Vertex,
    pub v1: Vertex,
    pub v2: Vertex,
    pub u1: Vertex,
    pub u2: Vertex,
    pub p1: Vertex,
    pub p2: Vertex,
    pub w1: Vertex,
    pub w2: Vertex,
    pub z1: Vertex,
    pub z2: Vertex,
    pub k1: Color,
    pub k2: Color,
    pub k3: Color,
    pub k4: Color,
    pub c1: Color,
    pub c2: Color,
    pub c_r: Color,
    /// Color of the `u w1` edge moved to `z2`; equals `c1` after `w1`, `w2`
    /// are ordered so that `color(z1 z2) != c1`.
    pub c_p: Color,
    /// `T1'` needed the extra swap at `v1`, `x4` (`u1 == p1`).
    pub adjust1: bool,
    /// `T2'` needed the extra swap at `v2`, `x3` (`u2 == p2`).
    pub adjust2: bool,
    pub u_set: Vec<Vertex>,
    pub w_set: Vec<Vertex>,
}

impl fmt::Display for ThreeTreeSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}; u={} v1={} v2={} u1={} u2={} w1={} w2={} z1={} z2={} \
             colors k1..k4={},{},{},{} c1={} c2={} c_r={} c_p={}",
            self.witness,
            self.u,
            self.v1,
            self.v2,
            self.u1,
            self.u2,
            self.w1,
            self.w2,
            self.z1,
            self.z2,
            self.k1,
            self.k2,
            self.k3,
            self.k4,
            self.c1,
            self.c2,
            self.c_r,
            self.c_p
        )?;
        if self.adjust1 || self.adjust2 {
            write!(f, " adjusted: T1'={} T2'={}", self.adjust1, self.adjust2)?;
        }
        Ok(())
    }
}

impl ThreeTreeSelection {
    /// Rechecks every stated side condition against `phi`.
    pub fn validate(&self, phi: &EdgeColoring) -> Result<(), String> {
        let w = &self.witness;
        w.validate(phi)?;
        let [x1, x2, x3, x4] = w.vertices();
        let inv = |x, c| phi.inverse_at(x, c);
        let expect = |what: &str, ok: bool| if ok { Ok(()) } else { Err(format!("{what} fails")) };

        expect("y1 = x3<b>", self.y1 == inv(x3, w.b))?;
        expect("y2 = x4<b>", self.y2 == inv(x4, w.b))?;
        let excluded = [x1, x2, x3, x4, self.y1, self.y2];
        let u_set: Vec<Vertex> = (0..phi.order()).filter(|v| !excluded.contains(v)).collect();
        expect("U = V - {x1..x4, y1, y2}", self.u_set == u_set)?;
        let in_u = |v: Vertex| u_set.binary_search(&v).is_ok();
        let in_u_not_u = |v: Vertex| in_u(v) && v != self.u;

        expect("u in U", in_u(self.u))?;
        expect("k1 = color(u x1)", self.k1 == phi.color(self.u, x1))?;
        expect("k2 = color(u x2)", self.k2 == phi.color(self.u, x2))?;
        let k4_colors = k4_colors(phi, w);
        expect(
            "k1, k2 avoid the colors on {x1..x4}",
            !k4_colors.contains(&self.k1) && !k4_colors.contains(&self.k2),
        )?;

        expect("v1 in U - {u}", in_u_not_u(self.v1))?;
        expect("k3 = color(x1 v1)", self.k3 == phi.color(x1, self.v1))?;
        expect("v1<b> != x4<k1>", inv(self.v1, w.b) != inv(x4, self.k1))?;
        expect("u1 = u<k3> in U - {u}", self.u1 == inv(self.u, self.k3) && in_u_not_u(self.u1))?;
        expect("p1 = v1<k1> in U - {u}", self.p1 == inv(self.v1, self.k1) && in_u_not_u(self.p1))?;

        expect(
            "v2 in U - {u, v1, v1<b>}",
            in_u_not_u(self.v2) && self.v2 != self.v1 && self.v2 != inv(self.v1, w.b),
        )?;
        expect("k4 = color(x2 v2)", self.k4 == phi.color(x2, self.v2))?;
        expect("k3 != k4", self.k3 != self.k4)?;
        expect("v2<b> != x3<k2>", inv(self.v2, w.b) != inv(x3, self.k2))?;
        expect("u2 = u<k4> in U - {u}", self.u2 == inv(self.u, self.k4) && in_u_not_u(self.u2))?;
        expect("p2 = v2<k2> in U - {u}", self.p2 == inv(self.v2, self.k2) && in_u_not_u(self.p2))?;
        expect("adjust1 iff u1 = p1", self.adjust1 == (self.u1 == self.p1))?;
        expect("adjust2 iff u2 = p2", self.adjust2 == (self.u2 == self.p2))?;

        expect("color(w1 w2) = k3", phi.color(self.w1, self.w2) == self.k3)?;
        let avoid = [x1, x2, self.u, self.u2];
        expect("w1, w2 avoid {x1, x2, u, u2}", !avoid.contains(&self.w1) && !avoid.contains(&self.w2))?;
        expect("c1 = color(u w1)", self.c1 == phi.color(self.u, self.w1))?;
        expect("c2 = color(u w2)", self.c2 == phi.color(self.u, self.w2))?;
        let w_set = w_set(phi, x1, x2, self.u1, self.k4, self.w1, self.w2);
        expect("W = {x1, x2, u1, u1<k4>, w1, w2}", self.w_set == w_set)?;
        expect("z1 = u2<c_r> not in W", self.z1 == inv(self.u2, self.c_r) && !w_set.contains(&self.z1))?;
        let closure = closure(phi, &w_set, self.c1, self.c2);
        expect(
            "z2 = u<c_r> not in [W]c1 + [W]c2",
            self.z2 == inv(self.u, self.c_r) && !closure.contains(&self.z2),
        )?;
        expect(
            "c_r avoids k1..k4, c1, c2",
            ![self.k1, self.k2, self.k3, self.k4, self.c1, self.c2].contains(&self.c_r),
        )?;
        expect("c_p = c1", self.c_p == self.c1)?;
        expect("color(z1 z2) != c_p", phi.color(self.z1, self.z2) != self.c_p)?;
        Ok(())
    }
}

/// Candidate counts at each level of the scan.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SelectionTrace {
    pub witnesses: usize,
    pub u: usize,
    pub v1: usize,
    pub v2: usize,
    pub w_edges: usize,
    pub c_r: usize,
    /// Candidates whose trees the verifier rejected.
    pub rejected: usize,
}

impl fmt::Display for SelectionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "witnesses={} u={} v1={} v2={} w1w2={} c_r={} rejected={}",
            self.witnesses, self.u, self.v1, self.v2, self.w_edges, self.c_r, self.rejected
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThreeTreeRoute {
    /// Vertex selection around a long bichromatic cycle.
    Selection(Box<ThreeTreeSelection>),
    /// Every color pair is a 4-cycle factor; first three trees of the full partition.
    AllFourCycles,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeTrees {
    pub trees: [ColoredTree; 3],
    /// Centers `x1`, `x2`, `u` on the selection route.
    pub centers: Option<[Vertex; 3]>,
    pub route: ThreeTreeRoute,
    pub trace: SelectionTrace,
}

fn k4_colors(phi: &EdgeColoring, w: &FourCycleWitness) -> BTreeSet<Color> {
    let xs = w.vertices();
    let mut out = BTreeSet::new();
    for i in 0..4 {
        for j in i + 1..4 {
            out.insert(phi.color(xs[i], xs[j]));
        }
    }
    out
}

fn w_set(
    phi: &EdgeColoring,
    x1: Vertex,
    x2: Vertex,
    u1: Vertex,
    k4: Color,
    w1: Vertex,
    w2: Vertex,
) -> Vec<Vertex> {
    let set: BTreeSet<Vertex> = [x1, x2, u1, phi.inverse_at(u1, k4), w1, w2].into();
    set.into_iter().collect()
}

fn closure(phi: &EdgeColoring, w: &[Vertex], c1: Color, c2: Color) -> BTreeSet<Vertex> {
    let w: BTreeSet<Vertex> = w.iter().copied().collect();
    let mut out = phi.color_closure(&w, c1);
    out.extend(phi.color_closure(&w, c2));
    out
}

fn spider_profile(t: &ColoredTree, center: Vertex) -> bool {
    t.depth_profile(center) == [1, t.order() - 5, 4]
}

/// `T1' = T1[u, v1; k1, k3]`, then `T1'[v1, x4; k1, b]` when adjusted.
fn bend_first(
    phi: &EdgeColoring,
    t1: &ColoredTree,
    u: Vertex,
    v1: Vertex,
    x4: Vertex,
    adjust: bool,
) -> Option<ColoredTree> {
    let t = leaf_swap(phi, t1, u, v1).ok()?;
    if adjust {
        leaf_swap(phi, &t, v1, x4).ok()
    } else {
        Some(t)
    }
}

/// `T3' = S_u[u1, u2; k3, k4] - {u2<k3>, u<c_p>, u<c_r>} + {u2<c_r>, w1<k3>, z2<c_p>}`.
fn bend_third(phi: &EdgeColoring, s: &ThreeTreeSelection) -> Option<ColoredTree> {
    let t3 = leaf_swap(phi, &star(phi, s.u), s.u1, s.u2).ok()?;
    let remove = [phi.edge_at(s.u2, s.k3), phi.edge_at(s.u, s.c_p), phi.edge_at(s.u, s.c_r)];
    let add = [phi.edge_at(s.u2, s.c_r), phi.edge_at(s.w1, s.k3), phi.edge_at(s.z2, s.c_p)];
    if distinct_edges(&add) && distinct_edges(&remove) {
        t3.exchange(&remove, &add).ok()
    } else {
        None
    }
}

fn distinct_edges(es: &[ColoredEdge]) -> bool {
    (0..es.len()).all(|i| (i + 1..es.len()).all(|j| (es[i].u, es[i].v) != (es[j].u, es[j].v)))
}

fn certified(phi: &EdgeColoring, trees: &[ColoredTree; 3], centers: [Vertex; 3]) -> bool {
    trees.iter().zip(centers).all(|(t, c)| spider_profile(t, c))
        && verify_family(phi, trees, FamilyChecks::disjoint_isomorphic()).is_ok()
}

/// The trees determined by a selection, certified.
pub fn build_three_trees(
    phi: &EdgeColoring,
    sel: &ThreeTreeSelection,
) -> Result<[ColoredTree; 3], ConstructionError> {
    sel.validate(phi).map_err(ConstructionError::HypothesisViolated)?;
    let w = &sel.witness;
    let [t1, t2] = star_swap_pair(phi, w)?;
    let fail = |what: &str| ConstructionError::Defect(format!("{what} is not a tree for {sel}"));
    let t1 = bend_first(phi, &t1, sel.u, sel.v1, w.x4, sel.adjust1).ok_or_else(|| fail("T1'"))?;
    let t2 = bend_first(phi, &t2, sel.u, sel.v2, w.x3, sel.adjust2).ok_or_else(|| fail("T2'"))?;
    let t3 = bend_third(phi, sel).ok_or_else(|| fail("T3'"))?;
    let trees = [t1, t2, t3];
    for (t, c) in trees.iter().zip([w.x1, w.x2, sel.u]) {
        if !spider_profile(t, c) {
            return Err(ConstructionError::Defect(format!(
                "depth profile {:?} at center {c} for {sel}",
                t.depth_profile(c)
            )));
        }
    }
    certify(phi, &trees, FamilyChecks::disjoint_isomorphic(), "three trees")?;
    Ok(trees)
}

/// First selection for witness `w` (in scan order) whose trees the verifier
/// accepts.
pub fn select_three_tree_vertices(
    phi: &EdgeColoring,
    w: &FourCycleWitness,
) -> Result<ThreeTreeSelection, ConstructionError> {
    let mut trace = SelectionTrace { witnesses: 1, ..Default::default() };
    scan(phi, w, &mut trace).map(|(sel, _)| sel).ok_or(ConstructionError::SelectionExhausted(trace))
}

fn scan(
    phi: &EdgeColoring,
    w: &FourCycleWitness,
    trace: &mut SelectionTrace,
) -> Option<(ThreeTreeSelection, [ColoredTree; 3])> {
    let n = phi.order();
    let [x1, x2, x3, x4] = w.vertices();
    let b = w.b;
    let inv = |x, c| phi.inverse_at(x, c);
    let [t1, t2] = star_swap_pair(phi, w).ok()?;
    let (y1, y2) = (inv(x3, b), inv(x4, b));
    let excluded = [x1, x2, x3, x4, y1, y2];
    let u_set: Vec<Vertex> = (0..n).filter(|v| !excluded.contains(v)).collect();
    let mut in_u = vec![false; n];
    for &v in &u_set {
        in_u[v] = true;
    }
    let quad_colors = k4_colors(phi, w);

    for &u in &u_set {
        let (k1, k2) = (phi.color(u, x1), phi.color(u, x2));
        if quad_colors.contains(&k1) || quad_colors.contains(&k2) {
            continue;
        }
        trace.u += 1;
        let ok = |v: Vertex| in_u[v] && v != u;

        for &v1 in &u_set {
            if v1 == u {
                continue;
            }
            let k3 = phi.color(x1, v1);
            let (u1, p1) = (inv(u, k3), inv(v1, k1));
            if inv(v1, b) == inv(x4, k1) || !ok(u1) || !ok(p1) {
                continue;
            }
            trace.v1 += 1;
            let adjust1 = u1 == p1;
            let Some(t1p) = bend_first(phi, &t1, u, v1, x4, adjust1).filter(|t| spider_profile(t, x1)) else {
                trace.rejected += 1;
                continue;
            };

            for &v2 in &u_set {
                if v2 == u || v2 == v1 || v2 == inv(v1, b) {
                    continue;
                }
                let k4 = phi.color(x2, v2);
                let (u2, p2) = (inv(u, k4), inv(v2, k2));
                if k4 == k3 || inv(v2, b) == inv(x3, k2) || !ok(u2) || !ok(p2) {
                    continue;
                }
                trace.v2 += 1;
                let adjust2 = u2 == p2;
                let Some(t2p) = bend_first(phi, &t2, u, v2, x3, adjust2)
                    .filter(|t| spider_profile(t, x2))
                    .filter(|t| t.edges().iter().all(|e| !t1p.contains_edge(e.u, e.v)))
                else {
                    trace.rejected += 1;
                    continue;
                };

                let avoid = [x1, x2, u, u2];
                for e in phi.color_class(k3) {
                    if avoid.contains(&e.u) || avoid.contains(&e.v) {
                        continue;
                    }
                    trace.w_edges += 1;
                    let (w1, w2) = (e.u, e.v);
                    let (c1, c2) = (phi.color(u, w1), phi.color(u, w2));
                    let w_set = w_set(phi, x1, x2, u1, k4, w1, w2);
                    let closure = closure(phi, &w_set, c1, c2);

                    for c_r in phi.colors() {
                        if [k1, k2, k3, k4, c1, c2].contains(&c_r) {
                            continue;
                        }
                        let (z1, z2) = (inv(u2, c_r), inv(u, c_r));
                        if w_set.contains(&z1) || closure.contains(&z2) {
                            continue;
                        }
                        trace.c_r += 1;
                        let (w1, w2, c1, c2) =
                            if phi.color(z1, z2) == c1 { (w2, w1, c2, c1) } else { (w1, w2, c1, c2) };
                        let sel = ThreeTreeSelection {
                            witness: *w,
                            y1,
                            y2,
                            u,
                            v1,
                            v2,
                            u1,
                            u2,
                            p1,
                            p2,
                            w1,
                            w2,
                            z1,
                            z2,
                            k1,
                            k2,
                            k3,
                            k4,
                            c1,
                            c2,
                            c_r,
                            c_p: c1,
                            adjust1,
                            adjust2,
                            u_set: u_set.clone(),
                            w_set: w_set.clone(),
                        };
                        let Some(t3p) = bend_third(phi, &sel) else {
                            trace.rejected += 1;
                            continue;
                        };
                        let trees = [t1p.clone(), t2p.clone(), t3p];
                        if certified(phi, &trees, [x1, x2, u]) {
                            return Some((sel, trees));
                        }
                        trace.rejected += 1;
                    }
                }
            }
        }
    }
    None
}

/// Three disjoint isomorphic rainbow spanning trees.
///
/// Colorings where every color pair is a 4-cycle factor (orders 2^n >= 8) take
/// the first three trees of [`decompose_c4`]; any other coloring needs
/// N >= [`MIN_ORDER_THREE_TREES`] and goes through the vertex selection,
/// falling back to later witnesses if the first admits no certified selection.
pub fn three_trees(phi: &EdgeColoring) -> Result<ThreeTrees, ConstructionError> {
    let n = phi.order();
    let mut witnesses = four_cycle_witnesses(phi).peekable();
    if witnesses.peek().is_none() {
        if n < 8 {
            return Err(ConstructionError::OrderTooSmall { order: n, minimum: 8 });
        }
        let mut all = decompose_c4(phi)?.trees.into_iter();
        let trees = [all.next().unwrap(), all.next().unwrap(), all.next().unwrap()];
        certify(phi, &trees, FamilyChecks::disjoint_isomorphic(), "three trees")?;
        return Ok(ThreeTrees {
            trees,
            centers: None,
            route: ThreeTreeRoute::AllFourCycles,
            trace: SelectionTrace::default(),
        });
    }
    if n < MIN_ORDER_THREE_TREES {
        return Err(ConstructionError::OrderTooSmall { order: n, minimum: MIN_ORDER_THREE_TREES });
    }
    let mut trace = SelectionTrace::default();
    for w in witnesses {
        trace.witnesses += 1;
        if let Some((sel, trees)) = scan(phi, &w, &mut trace) {
            certify(phi, &trees, FamilyChecks::disjoint_isomorphic(), "three trees")?;
            return Ok(ThreeTrees {
                trees,
                centers: Some([w.x1, w.x2, sel.u]),
                route: ThreeTreeRoute::Selection(Box::new(sel)),
                trace,
            });
        }
    }
    Err(ConstructionError::SelectionExhausted(trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::ahu_code;
    use crate::coloring::{random_coloring, round_robin_coloring, xor_coloring};
    use crate::constructions::find_four_cycle_witness;

    #[test]
    fn circle_order_28() {
        let phi = round_robin_coloring(14).unwrap();
        let out = three_trees(&phi).unwrap();
        let ThreeTreeRoute::Selection(sel) = &out.route else { panic!("expected selection route") };
        sel.validate(&phi).unwrap();
        assert_eq!(build_three_trees(&phi, sel).unwrap(), out.trees);
        for (t, c) in out.trees.iter().zip(out.centers.unwrap()) {
            assert_eq!(t.degree(c), 23);
            assert_eq!(t.depth_profile(c), vec![1, 23, 4]);
        }
    }

    #[test]
    fn random_orders_certify() {
        for (seed, n) in [(1, 28), (2, 30), (3, 40), (4, 64)] {
            let phi = random_coloring(n, seed, 2000).unwrap();
            let out = three_trees(&phi).unwrap();
            verify_family(&phi, &out.trees, FamilyChecks::disjoint_isomorphic()).unwrap();
            assert_eq!(ahu_code(&out.trees[0]), ahu_code(&out.trees[2]));
        }
    }

    #[test]
    fn selection_is_deterministic() {
        let phi = random_coloring(28, 11, 500).unwrap();
        let w = find_four_cycle_witness(&phi).unwrap();
        assert_eq!(
            select_three_tree_vertices(&phi, &w).unwrap(),
            select_three_tree_vertices(&phi, &w).unwrap()
        );
    }

    #[test]
    fn tampered_selection_rejected() {
        let phi = round_robin_coloring(14).unwrap();
        let w = find_four_cycle_witness(&phi).unwrap();
        let mut sel = select_three_tree_vertices(&phi, &w).unwrap();
        sel.c_p = sel.c2;
        assert!(sel.validate(&phi).is_err());
        assert!(matches!(build_three_trees(&phi, &sel), Err(ConstructionError::HypothesisViolated(_))));
    }

    #[test]
    fn xor32_uses_partition() {
        let out = three_trees(&xor_coloring(32).unwrap()).unwrap();
        assert_eq!(out.route, ThreeTreeRoute::AllFourCycles);
    }

    #[test]
    fn small_orders_refused() {
        assert_eq!(
            three_trees(&round_robin_coloring(6).unwrap()),
            Err(ConstructionError::OrderTooSmall { order: 12, minimum: 28 })
        );
        assert_eq!(
            three_trees(&xor_coloring(4).unwrap()),
            Err(ConstructionError::OrderTooSmall { order: 4, minimum: 8 })
        );
    }
}
