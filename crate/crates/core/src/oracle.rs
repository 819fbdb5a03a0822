//! Ground truth that shares no code with the engine: Bron–Kerbosch,
//! transversal checking and exact minimum clique transversals.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Clique, Graph};

/// All maximal cliques (isolated vertices included as singletons), sorted.
pub fn bron_kerbosch(g: &Graph) -> Vec<Clique> {
    let mut out = Vec::new();
    let mut r = Vec::new();
    let p: Vec<usize> = (0..g.n()).collect();
    expand(g, &mut r, p, Vec::new(), &mut out);
    out.sort();
    out
}

fn expand(g: &Graph, r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Clique>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(Clique::new(r.iter().copied()));
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| (p.iter().filter(|&&w| g.has_edge(u, w)).count(), std::cmp::Reverse(u)))
        .expect("p is non-empty");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !g.has_edge(pivot, v)).collect();
    let mut p = p;
    let mut x = x;
    for v in candidates {
        let np = p.iter().copied().filter(|&w| g.has_edge(v, w)).collect();
        let nx = x.iter().copied().filter(|&w| g.has_edge(v, w)).collect();
        r.push(v);
        expand(g, r, np, nx, out);
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// Non-trivial maximal cliques, i.e. the hyperedges a transversal must hit.
pub fn transversal_hypergraph(g: &Graph) -> Vec<Clique> {
    bron_kerbosch(g).into_iter().filter(|c| c.len() >= 2).collect()
}

/// `Ok` if `s` meets every non-trivial maximal clique, else a missed clique.
pub fn is_transversal(g: &Graph, s: &[usize]) -> Result<(), Clique> {
    let mut chosen = vec![false; g.n()];
    for &v in s {
        if v < g.n() {
            chosen[v] = true;
        }
    }
    match transversal_hypergraph(g)
        .into_iter()
        .find(|c| !c.vertices().iter().any(|&v| chosen[v]))
    {
        Some(c) => Err(c),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub minimum_size: usize,
    pub witness: Vec<usize>,
    pub explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("no clique transversal of size at most {cap} (explored {explored} search nodes)")]
pub struct CapExceeded {
    pub cap: usize,
    pub explored: u64,
}

/// Exact minimum clique transversal by iterative deepening over hitting sets.
///
/// Each search node branches on the unhit clique with fewest vertices and
/// prunes with a greedy packing of pairwise disjoint unhit cliques.
pub fn min_transversal_exact(g: &Graph, size_cap: usize) -> Result<OracleResult, CapExceeded> {
    let edges: Vec<Vec<usize>> = transversal_hypergraph(g).into_iter().map(Clique::into_vec).collect();
    let mut explored = 0u64;
    for depth in 0..=size_cap {
        let mut chosen = Vec::new();
        let mut hit = vec![false; g.n()];
        if search(&edges, depth, &mut chosen, &mut hit, &mut explored) {
            chosen.sort_unstable();
            return Ok(OracleResult {
                minimum_size: depth,
                witness: chosen,
                explored,
            });
        }
    }
    Err(CapExceeded {
        cap: size_cap,
        explored,
    })
}

fn search(edges: &[Vec<usize>], budget: usize, chosen: &mut Vec<usize>, red: &mut [bool], explored: &mut u64) -> bool {
    *explored += 1;
    let unhit: Vec<&Vec<usize>> = edges.iter().filter(|e| !e.iter().any(|&v| red[v])).collect();
    let Some(smallest) = unhit.iter().min_by_key(|e| e.len()) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    // Disjoint unhit cliques each need their own vertex.
    let mut used = vec![false; red.len()];
    let mut packing = 0;
    let mut by_size = unhit.clone();
    by_size.sort_by_key(|e| e.len());
    for e in by_size {
        if e.iter().all(|&v| !used[v]) {
            packing += 1;
            for &v in e {
                used[v] = true;
            }
        }
    }
    if packing > budget {
        return false;
    }
    for &v in smallest.iter() {
        red[v] = true;
        chosen.push(v);
        if search(edges, budget - 1, chosen, red, explored) {
            return true;
        }
        chosen.pop();
        red[v] = false;
    }
    false
}

/// Minimum transversal by enumerating vertex subsets in order of size.
/// Exponential; intended for `n <= 12` or so.
pub fn naive_min_transversal(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.n();
    let masks: Vec<u64> = transversal_hypergraph(g)
        .iter()
        .map(|c| c.vertices().iter().fold(0u64, |m, &v| m | (1 << v)))
        .collect();
    assert!(n < 64, "naive enumeration limited to n < 64");
    for size in 0..=n {
        let mut best: Option<u64> = None;
        for_each_subset(n, size, &mut |s| {
            if best.is_none() && masks.iter().all(|&m| m & s != 0) {
                best = Some(s);
            }
        });
        if let Some(s) = best {
            return (size, (0..n).filter(|&v| s >> v & 1 == 1).collect());
        }
    }
    unreachable!("the full vertex set is a transversal")
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(u64)) {
    fn rec(start: usize, n: usize, left: usize, acc: u64, f: &mut dyn FnMut(u64)) {
        if left == 0 {
            f(acc);
            return;
        }
        for v in start..n {
            if n - v < left {
                break;
            }
            rec(v + 1, n, left - 1, acc | (1 << v), f);
        }
    }
    rec(0, n, k, 0, f);
}
