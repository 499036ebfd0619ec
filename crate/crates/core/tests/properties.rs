use std::collections::BTreeSet;

use proptest::prelude::*;
use rainbow_core::coloring::{
    all_pairs_c4, kempe_randomize, make_coloring, random_coloring, random_relabel, round_robin_coloring,
    xor_coloring,
};
use rainbow_core::latin::{direct_product, power_square, z2_square, LatinSquare};
use rainbow_core::oracle::is_rainbow_spanning_tree;
use rainbow_core::tree::{leaf_swap, star};
use rainbow_core::verify::{verify_multicolored_spanning_tree, Violation};
use rainbow_core::{Color, ColoredEdge, ColoredTree, EdgeColoring};

fn even_order() -> impl Strategy<Value = usize> {
    (2usize..=16).prop_map(|m| 2 * m)
}

fn is_proper(phi: &EdgeColoring) -> bool {
    make_coloring(phi.order(), &phi.to_matrix()).is_ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn kempe_moves_keep_colorings_proper(n in even_order(), seed in any::<u64>(), steps in 0usize..40) {
        let phi = kempe_randomize(&round_robin_coloring(n / 2).unwrap(), seed, steps);
        prop_assert!(is_proper(&phi));
        for x in 0..n {
            let seen: BTreeSet<Color> = (0..n).filter(|&y| y != x).map(|y| phi.color(x, y)).collect();
            prop_assert_eq!(seen.len(), n - 1);
        }
    }

    #[test]
    fn leaf_swap_keeps_colors_and_undoes_itself(n in even_order(), seed in any::<u64>(), picks in any::<(u64, u64, u64)>()) {
        let phi = random_coloring(n, seed, 50).unwrap();
        let center = (picks.0 % n as u64) as usize;
        let leaves: Vec<usize> = (0..n).filter(|&x| x != center).collect();
        let i = (picks.1 % leaves.len() as u64) as usize;
        let mut j = (picks.2 % (leaves.len() as u64 - 1)) as usize;
        if j >= i {
            j += 1;
        }
        let (x1, x2) = (leaves[i], leaves[j]);
        let s = star(&phi, center);
        match leaf_swap(&phi, &s, x1, x2) {
            Ok(t) => {
                prop_assert_eq!(t.color_counts(), s.color_counts());
                prop_assert!(verify_multicolored_spanning_tree(&phi, &t).is_ok());
                prop_assert_eq!(leaf_swap(&phi, &t, x1, x2).unwrap(), s);
            }
            // the swap is undefined only when the new edges collide or close a cycle
            Err(_) => {
                let a = phi.edge_at(x1, phi.color(center, x2));
                let b = phi.edge_at(x2, phi.color(center, x1));
                prop_assert!(a.touches(center) || b.touches(center) || a == b || a.other(x1) == x2);
            }
        }
    }

    #[test]
    fn relabeling_preserves_four_cycles(bits in 2u32..=6, seed in any::<u64>()) {
        let phi = random_relabel(&xor_coloring(1 << bits).unwrap(), seed);
        prop_assert!(is_proper(&phi));
        prop_assert!(all_pairs_c4(&phi).holds());
    }
}

fn random_tree(phi: &EdgeColoring, seed: u64) -> ColoredTree {
    // grow a rainbow tree by always attaching along the first unused color
    let n = phi.order();
    let mut inside = vec![false; n];
    let start = (seed % n as u64) as usize;
    inside[start] = true;
    let mut used = BTreeSet::new();
    let mut edges = Vec::new();
    let mut k = seed;
    while edges.len() < n - 1 {
        k = k.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let members: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
        let mut options = Vec::new();
        for &x in &members {
            for y in 0..n {
                if !inside[y] && !used.contains(&phi.color(x, y)) {
                    options.push(ColoredEdge::new(x, y, phi.color(x, y)));
                }
            }
        }
        if options.is_empty() {
            break;
        }
        let e = options[(k >> 33) as usize % options.len()];
        inside[e.u] = true;
        inside[e.v] = true;
        used.insert(e.c);
        edges.push(e);
    }
    ColoredTree::new(n, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn verifier_rejects_mutations(n in even_order(), seed in any::<u64>(), which in any::<u64>()) {
        let phi = random_coloring(n, seed, 30).unwrap();
        let tree = random_tree(&phi, seed);
        prop_assume!(tree.edges().len() == n - 1);
        prop_assert!(verify_multicolored_spanning_tree(&phi, &tree).is_ok());
        prop_assert!(is_rainbow_spanning_tree(&phi, &tree));
        let edges = tree.edges().to_vec();
        let i = (which % edges.len() as u64) as usize;

        // deletion
        let mut fewer = edges.clone();
        fewer.remove(i);
        let t = ColoredTree::from_edges_unchecked(n, fewer);
        let deleted = matches!(verify_multicolored_spanning_tree(&phi, &t), Err(Violation::EdgeCount { .. }));
        prop_assert!(deleted);
        prop_assert!(!is_rainbow_spanning_tree(&phi, &t));

        // color corruption
        let mut bad = edges.clone();
        bad[i].c = Color::from_index((bad[i].c.index() + 1) % phi.num_colors());
        let t = ColoredTree::from_edges_unchecked(n, bad);
        let corrupted = matches!(verify_multicolored_spanning_tree(&phi, &t), Err(Violation::ColorMismatch { .. }));
        prop_assert!(corrupted);
        prop_assert!(!is_rainbow_spanning_tree(&phi, &t));

        // replace an edge by a chord that closes a cycle: still N-1 edges,
        // so the tree is both cyclic and disconnected
        let e = edges[i];
        let adj = tree.adjacency();
        let chord = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).find(|&(a, b)| {
            !tree.contains_edge(a, b) && (a, b) != (e.u, e.v) && path_avoids(&adj, a, b, (e.u, e.v))
        });
        if let Some((a, b)) = chord {
            let mut cyc = edges.clone();
            cyc[i] = ColoredEdge::new(a, b, phi.color(a, b));
            let t = ColoredTree::from_edges_unchecked(n, cyc);
            prop_assert!(verify_multicolored_spanning_tree(&phi, &t).is_err());
            prop_assert!(!is_rainbow_spanning_tree(&phi, &t));
        }
    }
}

/// Whether the tree path from `a` to `b` avoids edge `skip`.
fn path_avoids(adj: &[Vec<usize>], a: usize, b: usize, skip: (usize, usize)) -> bool {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[a] = a;
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut x = b;
    while x != a {
        let p = parent[x];
        if (p.min(x), p.max(x)) == skip {
            return false;
        }
        x = p;
    }
    true
}

fn cyclic_square(q: usize) -> LatinSquare {
    LatinSquare::new((0..q).map(|r| (0..q).map(|c| (r + c) % q).collect()).collect()).unwrap()
}

#[test]
fn direct_products_are_latin() {
    for (a, b) in [(2, 3), (3, 3), (4, 2), (5, 1), (1, 4)] {
        let p = direct_product(&cyclic_square(a), &cyclic_square(b));
        assert_eq!(p.order(), a * b);
        assert!(LatinSquare::new(p.rows()).is_ok());
    }
    let mut l = z2_square();
    for n in 2..=5 {
        l = direct_product(&l, &z2_square());
        assert_eq!(l, power_square(n));
        for r in 0..l.order() {
            for c in 0..l.order() {
                assert_eq!(l.get(r, c), r ^ c);
            }
        }
    }
}

#[test]
fn kempe_colorings_rarely_keep_four_cycles() {
    let phi = random_coloring(16, 3, 200).unwrap();
    assert!(is_proper(&phi));
    assert!(!all_pairs_c4(&phi).holds());
}
