//! Independent re-execution of a trace against the input graph.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{maximal_triangles, Graph};
use crate::oracle::is_transversal;

use super::ledger::{Account, Ledger};
use super::rules::{select_rule, Family, RuleContext};
use super::trace::{EventKind, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("replay violation at {}: {message}", index.map_or("end of trace".to_string(), |i| format!("event {i}")))]
pub struct ReplayViolation {
    pub index: Option<usize>,
    pub message: String,
}

/// What a successful replay established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub n: usize,
    pub t: usize,
    pub red: Vec<usize>,
    pub saved: i64,
    pub paid: i64,
    pub branches: Vec<i64>,
}

struct Tup {
    members: Vec<usize>,
    lineage: Option<u32>,
}

/// Re-executes `trace` on `g`: every move is applied to a fresh ledger
/// with range checks; colourings must pay exactly 7; tuples must be cliques
/// of live, non-red vertices funded 3 (pair) or 2 (triple); rule markers
/// must name the first applicable rule; branch brackets must report their
/// saving and close without debt. Funds still held at the end by vertices
/// and nodes are treated as saved. The final red set must hit every
/// maximal clique and satisfy `7|X| = 2n + t - s`.
pub fn replay_verify(trace: &Trace, g: &Graph) -> Result<ReplayReport, ReplayViolation> {
    let n = g.n();
    let triangles: Vec<Vec<usize>> = maximal_triangles(g)
        .map_err(|e| ReplayViolation {
            index: None,
            message: format!("input graph: {e}"),
        })?
        .into_iter()
        .map(|c| c.into_vec())
        .collect();
    let t = triangles.len();
    let mut ledger = Ledger::new(n, t);
    let mut red: BTreeSet<usize> = BTreeSet::new();
    let mut dead: BTreeSet<usize> = BTreeSet::new();
    let mut aux: BTreeSet<usize> = BTreeSet::new();
    let mut tuples: BTreeMap<u32, Tup> = BTreeMap::new();
    let mut branch_stack: Vec<i64> = Vec::new();
    let mut branches = Vec::new();

    for (idx, e) in trace.events.iter().enumerate() {
        let bad = |m: String| ReplayViolation {
            index: Some(idx),
            message: m,
        };
        if e.i != idx {
            return Err(bad(format!("index field is {}", e.i)));
        }
        let known = |v: usize| v < n || aux.contains(&v);
        let saved_now: i64 = e
            .moves
            .iter()
            .filter(|m| m.to == Account::Saved)
            .map(|m| m.amount)
            .sum();
        if e.kind != EventKind::BranchEnd && saved_now != e.saved {
            return Err(bad(format!("saved field {} but moves save {saved_now}", e.saved)));
        }
        for m in &e.moves {
            for a in [m.from, m.to] {
                if let Account::Vertex(v) = a {
                    if !known(v) && e.kind != EventKind::AuxMinted {
                        return Err(bad(format!("unknown vertex {v}")));
                    }
                }
            }
            ledger.apply(m).map_err(|err| bad(err.to_string()))?;
        }
        let members_of = |v: usize, tuples: &BTreeMap<u32, Tup>| -> Vec<u32> {
            tuples
                .iter()
                .filter(|(_, t)| t.members.contains(&v))
                .map(|(&id, _)| id)
                .collect()
        };
        match e.kind {
            EventKind::Init => {
                if e.n != Some(n) || e.t != Some(t) {
                    return Err(bad(format!("init says n={:?} t={:?}, graph has n={n} t={t}", e.n, e.t)));
                }
                if let Some(tr) = &e.triangles {
                    if *tr != triangles {
                        return Err(bad("triangle list differs from the graph".into()));
                    }
                }
            }
            EventKind::Rule => {
                let (Some(rule), Some(v), Some(bag)) = (e.rule, e.vertex, e.bag.as_ref()) else {
                    return Err(bad("rule marker without rule, vertex or bag".into()));
                };
                if dead.contains(&v) {
                    return Err(bad(format!("rule applied to removed vertex {v}")));
                }
                let ids = members_of(v, &tuples);
                let pairs: Vec<u32> = ids.iter().copied().filter(|id| tuples[id].members.len() == 2).collect();
                let triples = ids.len() - pairs.len();
                let partner_busy = pairs.len() == 1 && {
                    let m = &tuples[&pairs[0]].members;
                    let p = if m[0] == v { m[1] } else { m[0] };
                    members_of(p, &tuples).len() >= 2
                };
                let ctx = RuleContext {
                    v_red: red.contains(&v),
                    pairs: pairs.len(),
                    triples,
                    partner_in_other_tuple: partner_busy,
                    other_red_in_bag: bag.iter().any(|&w| w != v && red.contains(&w)),
                };
                let fam: Family = rule.family();
                if select_rule(fam, &ctx) != Some(rule) {
                    return Err(bad(format!(
                        "{rule} applied to {v} but precedence selects {:?}",
                        select_rule(fam, &ctx)
                    )));
                }
            }
            EventKind::Colored => {
                let Some(v) = e.vertex else {
                    return Err(bad("colouring without vertex".into()));
                };
                if red.contains(&v) || dead.contains(&v) || aux.contains(&v) {
                    return Err(bad(format!("vertex {v} cannot be coloured")));
                }
                let paid: i64 = e.moves.iter().filter(|m| m.to == Account::Paid).map(|m| m.amount).sum();
                if paid != 7 || e.moves.iter().any(|m| m.to != Account::Paid) {
                    return Err(bad(format!("colouring {v} pays {paid}")));
                }
                if ledger.balance(Account::Vertex(v)) != 0 {
                    return Err(bad(format!("red vertex {v} still holds funds")));
                }
                red.insert(v);
            }
            EventKind::TupleCreated => {
                let (Some(id), Some(members)) = (e.tuple, e.members.clone()) else {
                    return Err(bad("tuple without id or members".into()));
                };
                if tuples.contains_key(&id) {
                    return Err(bad(format!("tuple {id} already live")));
                }
                let want = match members.len() {
                    2 => 3,
                    3 => 2,
                    k => return Err(bad(format!("tuple of size {k}"))),
                };
                if ledger.balance(Account::Tuple(id)) != want {
                    return Err(bad(format!("tuple {id} funded {}", ledger.balance(Account::Tuple(id)))));
                }
                for (i, &a) in members.iter().enumerate() {
                    if a >= n || red.contains(&a) || dead.contains(&a) {
                        return Err(bad(format!("tuple member {a} is not a live non-red vertex")));
                    }
                    for &b in &members[i + 1..] {
                        if !g.has_edge(a, b) {
                            return Err(bad(format!("tuple members {a} and {b} are not adjacent")));
                        }
                    }
                }
                if let Some(l) = e.lineage {
                    if !tuples.contains_key(&l) {
                        return Err(bad(format!("lineage {l} is not a live tuple")));
                    }
                }
                tuples.insert(
                    id,
                    Tup {
                        members,
                        lineage: e.lineage,
                    },
                );
            }
            EventKind::TupleCeased => {
                let Some(id) = e.tuple else {
                    return Err(bad("cease without tuple".into()));
                };
                let Some(tp) = tuples.get(&id) else {
                    return Err(bad(format!("tuple {id} is not live")));
                };
                if ledger.balance(Account::Tuple(id)) != 0 {
                    return Err(bad(format!("tuple {id} ceases holding funds")));
                }
                match e.reason.as_deref() {
                    Some("hit") if tp.members.iter().any(|m| red.contains(m)) => {}
                    Some("converted") if tuples.values().any(|s| s.lineage == Some(id)) => {}
                    r => return Err(bad(format!("tuple {id} ceases without cause ({r:?})"))),
                }
                tuples.remove(&id);
            }
            EventKind::Removed => {
                if let Some(v) = e.vertex {
                    if dead.contains(&v) || !known(v) {
                        return Err(bad(format!("vertex {v} removed twice or unknown")));
                    }
                    if ledger.balance(Account::Vertex(v)) != 0 {
                        return Err(bad(format!("vertex {v} removed with funds")));
                    }
                    if !members_of(v, &tuples).is_empty() {
                        return Err(bad(format!("vertex {v} removed while in a tuple")));
                    }
                    dead.insert(v);
                }
            }
            EventKind::AuxMinted => {
                let Some(w) = e.vertex else {
                    return Err(bad("aux vertex without id".into()));
                };
                if w < n || aux.contains(&w) {
                    return Err(bad(format!("aux id {w} clashes")));
                }
                aux.insert(w);
            }
            EventKind::AuxBurned => {
                let Some(w) = e.vertex else {
                    return Err(bad("aux vertex without id".into()));
                };
                if !aux.contains(&w) || ledger.balance(Account::Vertex(w)) != 0 {
                    return Err(bad(format!("aux vertex {w} not burned cleanly")));
                }
                dead.insert(w);
            }
            EventKind::BranchBegin => branch_stack.push(ledger.saved()),
            EventKind::BranchEnd => {
                let Some(start) = branch_stack.pop() else {
                    return Err(bad("branch end without begin".into()));
                };
                let got = ledger.saved() - start;
                if got != e.saved {
                    return Err(bad(format!("branch reports {} but saved {got}", e.saved)));
                }
                if ledger.debt() != 0 {
                    return Err(bad("branch closes with debt".into()));
                }
                branches.push(got);
            }
            EventKind::DebtIncurred => {
                if ledger.debt() != 1 {
                    return Err(bad("debt marker without debt".into()));
                }
            }
            EventKind::Saved
            | EventKind::DebtRepaid
            | EventKind::Surgery
            | EventKind::Reduction
            | EventKind::Finish => {}
        }
    }

    let end = |m: String| ReplayViolation {
        index: None,
        message: m,
    };
    if !branch_stack.is_empty() {
        return Err(end("unclosed branch".into()));
    }
    if !tuples.is_empty() {
        return Err(end(format!("{} tuples still live", tuples.len())));
    }
    if ledger.debt() != 0 || ledger.aux() != 0 {
        return Err(end("debt or aux balance left open".into()));
    }
    // Whatever vertices and nodes still hold is saved.
    let leftovers: i64 = (0..n).map(|v| ledger.balance(Account::Vertex(v))).sum::<i64>()
        + (0..t).map(|k| ledger.balance(Account::Node(k))).sum::<i64>();
    if ledger.held() != leftovers {
        return Err(end("funds held outside vertices and nodes".into()));
    }
    let saved = ledger.saved() + leftovers;
    let paid = ledger.paid();
    if paid != 7 * red.len() as i64 {
        return Err(end(format!("paid {paid} for {} red vertices", red.len())));
    }
    if 7 * red.len() as i64 != 2 * n as i64 + t as i64 - saved {
        return Err(end(format!("7*{} != 2*{n} + {t} - {saved}", red.len())));
    }
    let red: Vec<usize> = red.into_iter().collect();
    if let Err(c) = is_transversal(g, &red) {
        return Err(end(format!("red set misses clique {c}")));
    }
    Ok(ReplayReport {
        n,
        t,
        red,
        saved,
        paid,
        branches,
    })
}
