use proptest::prelude::*;

use clique_transversal::decomp::{find_branches, maximal_clique_tree, nice_decomposition, validate_nice};
use clique_transversal::engine::{replay_verify, Trace};
use clique_transversal::generators::random_four_chordal_capped;
use clique_transversal::graph::{
    connected_components, is_chordal, maximal_cliques, maximal_triangles, parse_graph, write_graph, Clique, Graph,
};
use clique_transversal::oracle::{bron_kerbosch, is_transversal, min_transversal_exact, naive_min_transversal};
use clique_transversal::{bound, solve};

fn four_chordal(max_vertices: usize) -> impl Strategy<Value = Graph> {
    (any::<u64>(), 1usize..=20, 4usize..=8)
        .prop_map(move |(seed, nodes, bag)| random_four_chordal_capped(seed, nodes, bag, Some(max_vertices)).unwrap())
}

fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn sorted(mut cs: Vec<Clique>) -> Vec<Clique> {
    cs.sort();
    cs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solve_gives_a_replayable_transversal(g in four_chordal(40)) {
        let r = solve(&g).unwrap();
        prop_assert!(is_transversal(&g, &r.red).is_ok());
        let rep = replay_verify(&r.trace, &g).unwrap();
        prop_assert_eq!(&rep.red, &r.red);
        prop_assert_eq!(rep.saved, r.saved);
        prop_assert_eq!(7 * r.size() as i64, 2 * g.n() as i64 + r.t as i64 - r.saved);
        if g.n() >= 5 {
            prop_assert!(r.size() <= bound(g.n()));
        }
    }

    #[test]
    fn solve_is_deterministic(g in four_chordal(30)) {
        let a = solve(&g).unwrap();
        let b = solve(&g).unwrap();
        prop_assert_eq!(a.red, b.red);
        prop_assert_eq!(a.trace.to_jsonl(), b.trace.to_jsonl());
    }

    #[test]
    fn oracle_is_at_most_the_engine(g in four_chordal(24)) {
        let r = solve(&g).unwrap();
        let best = min_transversal_exact(&g, r.size()).unwrap();
        prop_assert!(best.minimum_size <= r.size());
        prop_assert!(is_transversal(&g, &best.witness).is_ok());
    }

    #[test]
    fn peo_cliques_match_bron_kerbosch(g in four_chordal(40)) {
        let peo = is_chordal(&g).unwrap();
        prop_assert_eq!(sorted(maximal_cliques(&g, &peo).unwrap()), sorted(bron_kerbosch(&g)));
    }

    #[test]
    fn clique_tree_and_nice_decomposition_are_valid(g in four_chordal(40)) {
        let peo = is_chordal(&g).unwrap();
        let td = maximal_clique_tree(&g, &peo).unwrap();
        prop_assert!(td.violations(&g).is_empty());
        let cliques = maximal_cliques(&g, &peo).unwrap();
        let has_triangle = cliques.iter().any(|c| c.len() == 3);
        let roots = cliques.iter().filter(|c| if has_triangle { c.len() == 3 } else { c.len() >= 4 });
        for c in roots {
            let d = nice_decomposition(&g, c).unwrap();
            prop_assert!(validate_nice(&d, &g).is_ok());
        }
    }

    #[test]
    fn connected_graphs_with_triangles_have_enough_branches(g in four_chordal(40)) {
        let triangles = maximal_triangles(&g).unwrap();
        prop_assume!(!triangles.is_empty() && connected_components(&g).len() == 1);
        let d = nice_decomposition(&g, &triangles[0]).unwrap();
        prop_assert!(find_branches(&d).len() >= triangles.len() + 2);
    }

    #[test]
    fn graph_text_round_trips(g in any_graph(12)) {
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn trace_jsonl_round_trips(g in four_chordal(30)) {
        let t = solve(&g).unwrap().trace;
        prop_assert_eq!(Trace::from_jsonl(&t.to_jsonl()).unwrap(), t);
    }

    #[test]
    fn exact_matches_naive_on_small_graphs(g in any_graph(8)) {
        let exact = min_transversal_exact(&g, g.n()).unwrap();
        prop_assert_eq!(exact.minimum_size, naive_min_transversal(&g).0);
    }
}
