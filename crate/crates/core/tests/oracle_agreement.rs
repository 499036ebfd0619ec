use std::collections::{BTreeMap, BTreeSet};

use rainbow_core::coloring::{random_coloring, random_relabel, round_robin_coloring, xor_coloring};
use rainbow_core::constructions::{k8_base_decomposition, xor8_base_trees};
use rainbow_core::oracle::{
    brute_force_disjoint_trees, brute_force_partition, certify_family, enumerate_rainbow_spanning_trees,
    isomorphic_by_permutation, OracleError, SearchBudget,
};
use rainbow_core::verify::verify_multicolored_spanning_tree;
use rainbow_core::{ahu_code, is_isomorphic, ColoredEdge, ColoredTree, EdgeColoring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_labeled_tree(n: usize, phi: &EdgeColoring, rng: &mut ChaCha8Rng) -> ColoredTree {
    // Prüfer decoding
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut edges = Vec::new();
    for &x in &seq {
        let leaf = (0..n).find(|&y| degree[y] == 1).unwrap();
        edges.push(ColoredEdge::new(leaf, x, phi.color(leaf, x)));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&y| degree[y] == 1).collect();
    edges.push(ColoredEdge::new(rest[0], rest[1], phi.color(rest[0], rest[1])));
    ColoredTree::new(n, edges).unwrap()
}

fn permuted(tree: &ColoredTree, phi: &EdgeColoring, rng: &mut ChaCha8Rng) -> ColoredTree {
    let n = tree.order();
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    let edges =
        tree.edges().iter().map(|e| ColoredEdge::new(p[e.u], p[e.v], phi.color(p[e.u], p[e.v]))).collect();
    ColoredTree::new(n, edges).unwrap()
}

#[test]
fn canonical_codes_match_permutation_search() {
    let phi = xor_coloring(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut same, mut different) = (0, 0);
    for i in 0..500 {
        let a = random_labeled_tree(8, &phi, &mut rng);
        let b =
            if i % 2 == 0 { permuted(&a, &phi, &mut rng) } else { random_labeled_tree(8, &phi, &mut rng) };
        let fast = is_isomorphic(&a, &b).unwrap();
        assert_eq!(fast, isomorphic_by_permutation(&a, &b), "pair {i}: {a:?} vs {b:?}");
        if fast {
            same += 1;
        } else {
            different += 1;
        }
    }
    assert!(same >= 250 && different > 100, "{same} isomorphic, {different} not");
}

fn naive_rainbow_trees(phi: &EdgeColoring) -> BTreeSet<Vec<ColoredEdge>> {
    let n = phi.order();
    let edges = phi.edges();
    let m = edges.len();
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << m {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let chosen: Vec<ColoredEdge> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let t = ColoredTree::from_edges_unchecked(n, chosen.clone());
        if verify_multicolored_spanning_tree(phi, &t).is_ok() {
            out.insert(t.edges().to_vec());
        }
    }
    out
}

#[test]
fn enumeration_matches_subset_filtering() {
    let mut cases = vec![xor_coloring(4).unwrap(), round_robin_coloring(3).unwrap()];
    cases.extend((0..5).map(|s| random_coloring(6, s, 20).unwrap()));
    for phi in &cases {
        let listed: Vec<Vec<ColoredEdge>> =
            enumerate_rainbow_spanning_trees(phi).unwrap().map(|t| t.edges().to_vec()).collect();
        let unique: BTreeSet<_> = listed.iter().cloned().collect();
        assert_eq!(unique.len(), listed.len(), "duplicates at order {}", phi.order());
        assert_eq!(unique, naive_rainbow_trees(phi));
        let mut sorted = listed.clone();
        sorted.sort();
        assert_eq!(sorted, listed, "enumeration is in lexicographic order");
    }
}

#[test]
fn k8_base_agrees_with_exhaustive_search() {
    let budget = SearchBudget::default();
    for seed in [0, 1, 2] {
        let phi = if seed == 0 {
            xor_coloring(8).unwrap()
        } else {
            random_relabel(&xor_coloring(8).unwrap(), seed)
        };
        let ours = k8_base_decomposition(&phi).unwrap();
        assert!(certify_family(&phi, &ours.trees, true, true));
        let found = brute_force_partition(&phi, true, budget).unwrap().found.expect("partition exists");
        assert!(certify_family(&phi, &found.trees, true, true));
        assert_eq!(ahu_code(&found.trees[0]), ahu_code(&found.trees[3]));
    }
    assert_eq!(xor8_base_trees().unwrap().len(), 4);
}

#[test]
fn small_orders() {
    let budget = SearchBudget::default();
    let k4 = xor_coloring(4).unwrap();
    assert!(brute_force_partition(&k4, false, budget).unwrap().found.is_none());
    assert!(brute_force_disjoint_trees(&k4, 2, false, budget).unwrap().found.is_none());
    for seed in 0..10 {
        let phi = random_coloring(6, seed, 30).unwrap();
        let pair = brute_force_disjoint_trees(&phi, 2, true, budget).unwrap().found.unwrap();
        assert!(certify_family(&phi, &pair, false, true));
    }
}

#[test]
fn three_disjoint_trees_at_order_eight() {
    let phi = xor_coloring(8).unwrap();
    let found = brute_force_disjoint_trees(&phi, 3, true, SearchBudget::default()).unwrap();
    let trees = found.found.unwrap();
    assert_eq!(trees.len(), 3);
    assert!(certify_family(&phi, &trees, false, true));
}

#[test]
fn tiny_budget_is_not_absence() {
    let phi = xor_coloring(8).unwrap();
    let budget = SearchBudget::new(10, std::time::Duration::from_secs(60)).unwrap();
    assert!(matches!(brute_force_partition(&phi, true, budget), Err(OracleError::BudgetExhausted { .. })));
}

#[test]
fn xor8_tree_shapes_match_subset_filtering() {
    let phi = xor_coloring(8).unwrap();
    let mut shapes: BTreeMap<_, usize> = BTreeMap::new();
    for t in enumerate_rainbow_spanning_trees(&phi).unwrap() {
        *shapes.entry(ahu_code(&t)).or_default() += 1;
    }
    let mut naive: BTreeMap<_, usize> = BTreeMap::new();
    for edges in naive_rainbow_trees(&phi) {
        *naive.entry(ahu_code(&ColoredTree::from_edges_unchecked(8, edges))).or_default() += 1;
    }
    assert_eq!((naive.len(), naive.values().sum::<usize>()), (5, 2304));
    assert_eq!(shapes, naive);
}
