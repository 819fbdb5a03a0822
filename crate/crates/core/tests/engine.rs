use clique_transversal::engine::{
    replay_verify, solve_with_mode, solve_with_triangle, solve_without_triangle, Account, EngineError, Event,
    EventKind, Mode, Rule, Trace,
};
use clique_transversal::fuzz::{instance, FuzzConfig};
use clique_transversal::generators::{complete_graph, h_graph, lower_bound_graph};
use clique_transversal::graph::Graph;
use clique_transversal::oracle::min_transversal_exact;
use clique_transversal::{bound, solve};

fn graph(n: usize, cliques: &[&[usize]]) -> Graph {
    let mut g = Graph::new(n);
    for c in cliques {
        for (i, &a) in c.iter().enumerate() {
            for &b in &c[i + 1..] {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

fn moved(e: &Event, to: Account) -> i64 {
    e.moves.iter().filter(|m| m.to == to).map(|m| m.amount).sum()
}

fn corpus_traces(limit: usize) -> impl Iterator<Item = Trace> {
    traces_of(FuzzConfig {
        count: limit,
        max_bag: 12,
        ..FuzzConfig::default()
    })
}

fn traces_of(cfg: FuzzConfig) -> impl Iterator<Item = Trace> {
    (0..cfg.count).map(move |i| solve(&instance(&cfg, i)).expect("fuzz instance solves").trace)
}

#[test]
fn bound_values() {
    assert_eq!(bound(5), 1);
    assert_eq!(bound(8), 2);
    assert_eq!(bound(4), 0);
    assert_eq!(bound(15), 4);
    assert_eq!(bound(23), 6);
}

#[test]
fn wide_leaf_with_two_private_vertices_uses_b5_then_g3() {
    let g = graph(6, &[&[0, 1, 2, 3], &[2, 3, 4, 5]]);
    let r = solve_with_mode(&g, Mode::Basic).unwrap();
    let ev = &r.trace.events;
    let rules: Vec<Rule> = ev
        .iter()
        .filter_map(|e| e.rule.filter(|_| e.kind == EventKind::Rule))
        .collect();
    assert_eq!(&rules[..2], &[Rule::B5, Rule::G3]);
    let first_node = ev
        .iter()
        .position(|e| e.kind == EventKind::Removed && e.node.is_some())
        .unwrap();
    let head = &ev[..first_node];
    let saved: i64 = head.iter().map(|e| moved(e, Account::Saved)).sum();
    assert_eq!(saved, 1);
    let pairs: Vec<&Event> = head
        .iter()
        .filter(|e| e.kind == EventKind::TupleCreated && e.members.as_ref().unwrap().len() == 2)
        .collect();
    assert_eq!(pairs.len(), 1);
    let funded: i64 = pairs[0].moves.iter().map(|m| m.amount).sum();
    assert_eq!(funded, 3);
}

#[test]
fn t5_pairs_from_vertex_and_node() {
    let mut seen = 0;
    for tr in corpus_traces(300) {
        let ev = &tr.events;
        for (i, e) in ev.iter().enumerate() {
            if e.kind == EventKind::Rule && e.rule == Some(Rule::T5) {
                let v = e.vertex.unwrap();
                let made = &ev[i + 1];
                assert_eq!(made.kind, EventKind::TupleCreated);
                assert_eq!(made.members.as_ref().unwrap().len(), 2);
                let from_v: i64 = made
                    .moves
                    .iter()
                    .filter(|m| m.from == Account::Vertex(v))
                    .map(|m| m.amount)
                    .sum();
                let from_node: i64 = made
                    .moves
                    .iter()
                    .filter(|m| matches!(m.from, Account::Node(_)))
                    .map(|m| m.amount)
                    .sum();
                assert_eq!((from_v, from_node), (2, 1));
                seen += 1;
            }
        }
    }
    assert!(seen > 0, "no T5 in the corpus");
}

#[test]
fn every_colouring_pays_seven() {
    for tr in corpus_traces(200) {
        for e in tr.events.iter().filter(|e| e.kind == EventKind::Colored) {
            assert_eq!(moved(e, Account::Paid), 7);
        }
    }
}

#[test]
fn pair_triple_surgery_removes_twelve() {
    let g = graph(
        14,
        &[
            &[0, 1, 2, 3, 5, 13],
            &[0, 2, 5, 8, 9, 13],
            &[0, 4, 5, 6, 7, 13],
            &[1, 2, 3, 5, 10, 13],
            &[1, 5, 10, 11, 12],
        ],
    );
    let r = solve(&g).unwrap();
    let ev = &r.trace.events;
    let i = ev
        .iter()
        .position(|e| e.kind == EventKind::Saved && e.reason.as_deref() == Some("partner paired twice"))
        .expect("pair/triple surgery with a twice-paired partner");
    let start = ev[..i].iter().rposition(|x| x.kind == EventKind::Surgery).unwrap();
    let window = &ev[start..=i];
    let paid: i64 = window.iter().map(|x| moved(x, Account::Paid)).sum();
    let pair: i64 = window
        .iter()
        .filter(|x| x.kind == EventKind::TupleCreated)
        .map(|x| x.moves.iter().map(|m| m.amount).sum::<i64>())
        .sum();
    assert_eq!((paid, pair, ev[i].saved), (7, 3, 2));
    assert!(replay_verify(&r.trace, &g).is_ok());
}

#[test]
fn two_triple_surgery_borrows_one_and_repays_inside_the_branch() {
    let mut seen = 0;
    for tr in corpus_traces(3000) {
        let ev = &tr.events;
        for (i, e) in ev.iter().enumerate() {
            if e.kind != EventKind::DebtIncurred {
                continue;
            }
            let colour = &ev[i - 1];
            assert_eq!(colour.kind, EventKind::Colored);
            let from_debt: i64 = colour
                .moves
                .iter()
                .filter(|m| m.from == Account::Debt)
                .map(|m| m.amount)
                .sum();
            assert_eq!(from_debt, 1);
            let end = i + ev[i..].iter().position(|x| x.kind == EventKind::BranchEnd).unwrap();
            assert!(ev[i..end].iter().any(|x| x.kind == EventKind::DebtRepaid));
            assert!(ev[end].saved >= 1);
            seen += 1;
        }
        if seen >= 3 {
            break;
        }
    }
    assert!(seen > 0, "no borrowing surgery in the corpus");
}

#[test]
fn triangle_driver_on_hk() {
    let r = solve_with_triangle(&h_graph(1)).unwrap();
    assert_eq!((r.size(), r.bound(), r.saved), (4, 4, 3));
    let r = solve_with_triangle(&h_graph(2)).unwrap();
    assert_eq!(r.size(), 6);
    assert_eq!(min_transversal_exact(&h_graph(2), 6).unwrap().minimum_size, 6);
    assert!(r.saved >= r.t as i64 + 2);
    assert!(matches!(
        solve_with_triangle(&complete_graph(5)),
        Err(EngineError::Precondition(_))
    ));
}

#[test]
fn triangle_free_driver() {
    let r = solve_without_triangle(&complete_graph(5)).unwrap();
    assert_eq!(r.size(), 1);
    let g = graph(6, &[&[0, 1, 2, 3], &[1, 2, 3, 4], &[2, 3, 4, 5]]);
    let r = solve_without_triangle(&g).unwrap();
    assert_eq!(r.size(), min_transversal_exact(&g, 3).unwrap().minimum_size);
    assert!(r.size() <= bound(6));
    let k4 = solve_without_triangle(&complete_graph(4)).unwrap();
    assert_eq!(k4.size(), 1);
    assert!(!k4.bound_ok);
    assert!(matches!(
        solve_without_triangle(&h_graph(1)),
        Err(EngineError::Precondition(_))
    ));
}

#[test]
fn dispatcher_examples() {
    assert_eq!(solve(&complete_graph(6)).unwrap().size(), 1);
    assert_eq!(solve(&lower_bound_graph(12).unwrap()).unwrap().size(), 3);
    let two_k4 = graph(8, &[&[0, 1, 2, 3], &[4, 5, 6, 7]]);
    let r = solve(&two_k4).unwrap();
    assert_eq!((r.size(), r.bound_ok), (2, true));
    let path = graph(3, &[&[0, 1], &[1, 2]]);
    assert!(matches!(solve(&path), Err(EngineError::NotFourChordal(_))));
    let edgeless = solve(&Graph::new(3)).unwrap();
    assert!(edgeless.red.is_empty());
    assert_eq!(edgeless.saved, 6);
}

#[test]
fn replay_examples() {
    let g = h_graph(1);
    let r = solve(&g).unwrap();
    let rep = replay_verify(&r.trace, &g).unwrap();
    assert_eq!((rep.red.len(), rep.saved), (4, 3));
    assert_eq!(7 * rep.red.len() as i64, 2 * 15 + 1 - rep.saved);

    let mut bad = r.trace.clone();
    let k = bad.events.iter().position(|e| e.kind == EventKind::Saved).unwrap();
    bad.events[k].saved += 1;
    let err = replay_verify(&bad, &g).unwrap_err();
    assert_eq!(err.index, Some(k));

    let rep = replay_verify(&Trace::default(), &Graph::new(4)).unwrap();
    assert_eq!(rep.saved, 8);
    assert!(rep.red.is_empty());
}

#[test]
fn replay_rejects_a_wrong_graph_and_a_dropped_colouring() {
    let g = h_graph(1);
    let r = solve(&g).unwrap();
    assert!(replay_verify(&r.trace, &h_graph(2)).is_err());
    let mut cut = r.trace.clone();
    let k = cut.events.iter().position(|e| e.kind == EventKind::Colored).unwrap();
    cut.events.remove(k);
    for (i, e) in cut.events.iter_mut().enumerate() {
        e.i = i;
    }
    assert!(replay_verify(&cut, &g).is_err());
}
