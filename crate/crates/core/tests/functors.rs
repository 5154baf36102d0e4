use proptest::prelude::*;

use regulus::digraph::{bidirect, excise, find_isomorphism, forget, opposite, simplify, DiGraph, Edge, GraphMorphism};
use regulus::emulation::{check_directed_emulator, is_directed_cover, is_directed_emulator};
use regulus::genus::{genus_exact, genus_invariance_suite, is_planar, GenusBudget};

fn graph(n: usize, edges: &[(usize, usize)]) -> DiGraph {
    let vs = (0..n).map(|i| format!("v{i}")).collect();
    let es =
        edges.iter().enumerate().map(|(i, &(s, t))| Edge { id: format!("e{i}"), src: s % n, dst: t % n }).collect();
    DiGraph::from_indexed(vs, es).unwrap()
}

fn small_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = DiGraph> {
    (1..=max_v, prop::collection::vec((0usize..16, 0usize..16), 0..=max_e)).prop_map(|(n, es)| graph(n, &es))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn opposite_is_an_involution(g in small_graph(5, 8)) {
        prop_assert_eq!(opposite(&opposite(&g)), g);
    }

    #[test]
    fn simplify_and_excise_are_idempotent(g in small_graph(5, 8)) {
        let (r, rho) = simplify(&g);
        prop_assert!(r.is_simple());
        prop_assert_eq!(simplify(&r).0, r.clone());
        prop_assert!(is_directed_emulator(&rho));
        let x = excise(&g);
        prop_assert!(!x.has_loops());
        prop_assert_eq!(excise(&x), x);
    }

    #[test]
    fn identity_is_a_cover(g in small_graph(5, 8)) {
        prop_assert!(is_directed_cover(&GraphMorphism::identity(&g)));
    }

    #[test]
    fn bidirection_of_forget_keeps_genus(g in small_graph(5, 7)) {
        let u = forget(&g);
        let back = forget(&bidirect(&u));
        prop_assert_eq!(genus_exact(&u).unwrap().genus, genus_exact(&back).unwrap().genus);
    }

    #[test]
    fn genus_is_invariant_under_the_functors(g in small_graph(5, 8)) {
        let r = genus_invariance_suite(&g, &GenusBudget::default()).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
    }

    #[test]
    fn planarity_agrees_with_exact_genus(g in small_graph(6, 11)) {
        let u = forget(&g);
        prop_assert_eq!(is_planar(&u).planar, genus_exact(&u).unwrap().genus == 0);
    }

    #[test]
    fn relabelled_copies_are_isomorphic(g in small_graph(5, 7), shift in 0usize..5) {
        let n = g.vertex_count();
        let moved: Vec<(usize, usize)> = g.edges().iter().rev().map(|e| ((e.src + shift) % n, (e.dst + shift) % n)).collect();
        let h = graph(n, &moved);
        let iso = find_isomorphism(&g, &h).expect("shifted copy");
        prop_assert!(iso.is_isomorphism());
        prop_assert!(check_directed_emulator(&iso).unwrap().is_ok());
    }
}
