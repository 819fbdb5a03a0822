//! Undirected simple graphs, chordality recognition and maximal cliques.
//!
//! Vertices are dense `usize` ids `0..n`. Graph files are 1-indexed; the
//! conversion happens in [`parse_graph`] and [`write_graph`] only.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while reading the text graph format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    OutOfRange { line: usize, vertex: i64, n: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("missing problem line `p <n> <m>`")]
    MissingHeader,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("not a perfect elimination ordering: {0}")]
    InvalidPeo(String),
    #[error("graph is not chordal (induced cycle {0:?})")]
    NotChordal(Vec<usize>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, ignoring duplicate edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Adds `uv`; returns whether the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        let n = self.n();
        if u >= n {
            return Err(GraphError::VertexOutOfRange(u));
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let fresh = self.adj[u].insert(v);
        self.adj[v].insert(u);
        if fresh {
            self.m += 1;
        }
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() {
            return false;
        }
        let had = self.adj[u].remove(&v);
        self.adj[v].remove(&u);
        if had {
            self.m -= 1;
        }
        had
    }

    /// Deletes every edge at `v`, leaving it isolated.
    pub fn isolate(&mut self, v: usize) {
        let nbrs: Vec<usize> = self.adj[v].iter().copied().collect();
        for w in nbrs {
            self.remove_edge(v, w);
        }
    }

    /// Appends a new isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for (u, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.range(u + 1..).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    /// Subgraph induced by `vertices`; the returned map sends local ids to
    /// the ids of `self`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut map: Vec<usize> = vertices.to_vec();
        map.sort_unstable();
        map.dedup();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let mut g = Graph::new(map.len());
        for (i, &v) in map.iter().enumerate() {
            for w in self.neighbors(v) {
                let j = local[w];
                if j != usize::MAX && i < j {
                    g.add_edge(i, j).expect("induced edge is valid");
                }
            }
        }
        (g, map)
    }
}

/// A set of pairwise adjacent vertices, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Clique(Vec<usize>);

impl Clique {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Clique(v)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Clique) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for Clique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "}}")
    }
}

/// A perfect elimination ordering: `order[0]` is eliminated first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peo {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl Peo {
    /// Checks `order` against `g` and wraps it.
    pub fn from_order(g: &Graph, order: Vec<usize>) -> Result<Self, GraphError> {
        let n = g.n();
        if order.len() != n {
            return Err(GraphError::InvalidPeo(format!(
                "order has {} entries, graph has {} vertices",
                order.len(),
                n
            )));
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(GraphError::InvalidPeo(format!("entry {v} is out of range or repeated")));
            }
            position[v] = i;
        }
        let peo = Peo { order, position };
        if let Some((v, x, y)) = peo.first_violation(g) {
            return Err(GraphError::InvalidPeo(format!(
                "later neighbours {x} and {y} of vertex {v} are not adjacent"
            )));
        }
        Ok(peo)
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn later_neighbors(&self, g: &Graph, v: usize) -> Vec<usize> {
        let p = self.position[v];
        g.neighbors(v).filter(|&w| self.position[w] > p).collect()
    }

    /// First `(v, x, y)` where `x`, `y` are non-adjacent later neighbours of `v`.
    fn first_violation(&self, g: &Graph) -> Option<(usize, usize, usize)> {
        for &v in &self.order {
            let later = self.later_neighbors(g, v);
            let Some(&first) = later.iter().min_by_key(|&&w| self.position[w]) else {
                continue;
            };
            for &w in &later {
                if w != first && !g.has_edge(first, w) {
                    return Some((v, first, w));
                }
            }
        }
        None
    }
}

/// Maximum cardinality search visiting order (ties broken by smallest id).
fn maximum_cardinality_search(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if !visited[v] && best.is_none_or(|b| weight[v] > weight[b]) {
                best = Some(v);
            }
        }
        let v = best.expect("unvisited vertex remains");
        visited[v] = true;
        visit.push(v);
        for w in g.neighbors(v) {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    visit
}

/// Searches for an induced cycle of length at least four.
///
/// Tries the triple `(v, x, y)` first when given, then every triple with
/// `x`, `y` non-adjacent neighbours of `v`: a shortest `x`–`y` path avoiding
/// the rest of `N[v]` closes an induced cycle through `v`.
fn find_induced_cycle(g: &Graph, hint: Option<(usize, usize, usize)>) -> Option<Vec<usize>> {
    let try_triple = |v: usize, x: usize, y: usize| -> Option<Vec<usize>> {
        let n = g.n();
        let mut blocked = vec![false; n];
        blocked[v] = true;
        for w in g.neighbors(v) {
            if w != x && w != y {
                blocked[w] = true;
            }
        }
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::from([x]);
        prev[x] = x;
        while let Some(a) = queue.pop_front() {
            if a == y {
                break;
            }
            for b in g.neighbors(a) {
                if !blocked[b] && prev[b] == usize::MAX {
                    prev[b] = a;
                    queue.push_back(b);
                }
            }
        }
        if prev[y] == usize::MAX {
            return None;
        }
        let mut path = vec![y];
        let mut cur = y;
        while cur != x {
            cur = prev[cur];
            path.push(cur);
        }
        path.push(v);
        path.reverse();
        Some(path)
    };
    if let Some((v, x, y)) = hint {
        if let Some(c) = try_triple(v, x, y) {
            return Some(c);
        }
    }
    for v in 0..g.n() {
        let nbrs: Vec<usize> = g.neighbors(v).collect();
        for (i, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[i + 1..] {
                if !g.has_edge(x, y) {
                    if let Some(c) = try_triple(v, x, y) {
                        return Some(c);
                    }
                }
            }
        }
    }
    None
}

/// Recognises chordal graphs.
///
/// Returns a perfect elimination ordering, or an induced cycle of length at
/// least four as the failure witness.
pub fn is_chordal(g: &Graph) -> Result<Peo, Vec<usize>> {
    let mut order = maximum_cardinality_search(g);
    order.reverse();
    let mut position = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let peo = Peo { order, position };
    match peo.first_violation(g) {
        None => Ok(peo),
        Some(hint) => Err(find_induced_cycle(g, Some(hint))
            .expect("a graph without a perfect elimination ordering has an induced cycle")),
    }
}

/// Inclusion-wise maximal cliques, sorted; isolated vertices appear as
/// singletons.
pub fn maximal_cliques(g: &Graph, peo: &Peo) -> Result<Vec<Clique>, GraphError> {
    if peo.order.len() != g.n() {
        return Err(GraphError::InvalidPeo("size mismatch".into()));
    }
    if let Some((v, x, y)) = peo.first_violation(g) {
        return Err(GraphError::InvalidPeo(format!(
            "later neighbours {x} and {y} of vertex {v} are not adjacent"
        )));
    }
    let mut out = Vec::new();
    for &v in &peo.order {
        let later = peo.later_neighbors(g, v);
        // C_v = {v} + later(v) is maximal iff no outside vertex sees all of it.
        let extendable = g
            .neighbors(v)
            .filter(|&w| peo.position[w] < peo.position[v])
            .any(|w| later.iter().all(|&x| g.has_edge(w, x)));
        if !extendable {
            out.push(Clique::new(std::iter::once(v).chain(later)));
        }
    }
    out.sort();
    Ok(out)
}

/// Why a graph fails to be 4-chordal.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FourChordalWitness {
    #[error("not chordal: induced cycle {0:?}")]
    NotChordal(Vec<usize>),
    #[error("edge {0}-{1} lies in no 4-clique")]
    EdgeWithoutK4(usize, usize),
}

pub fn is_four_chordal(g: &Graph) -> Result<(), FourChordalWitness> {
    let peo = is_chordal(g).map_err(FourChordalWitness::NotChordal)?;
    let cliques = maximal_cliques(g, &peo).expect("peo from is_chordal is valid");
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    for c in cliques.iter().filter(|c| c.len() >= 4) {
        let vs = c.vertices();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                covered.insert((u, v));
            }
        }
    }
    match g.edges().into_iter().find(|e| !covered.contains(e)) {
        Some((u, v)) => Err(FourChordalWitness::EdgeWithoutK4(u, v)),
        None => Ok(()),
    }
}

/// Number of maximal cliques of size exactly three.
pub fn count_maximal_triangles(g: &Graph) -> Result<usize, GraphError> {
    Ok(maximal_triangles(g)?.len())
}

pub fn maximal_triangles(g: &Graph) -> Result<Vec<Clique>, GraphError> {
    let peo = is_chordal(g).map_err(GraphError::NotChordal)?;
    Ok(maximal_cliques(g, &peo)?.into_iter().filter(|c| c.len() == 3).collect())
}

/// Connected components, each sorted, ordered by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut block = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    block.push(w);
                    stack.push(w);
                }
            }
        }
        block.sort_unstable();
        out.push(block);
    }
    out
}

/// Reads the `p <n> <m>` / `e <u> <v>` format. `c` lines are comments;
/// DIMACS-style `p edge <n> <m>` is accepted too.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(head) = tok.next() else { continue };
        match head {
            "c" => continue,
            "p" => {
                if graph.is_some() {
                    return Err(ParseError::Malformed {
                        line,
                        msg: "duplicate problem line".into(),
                    });
                }
                let mut rest: Vec<&str> = tok.collect();
                if rest.len() == 3 {
                    rest.remove(0);
                }
                if rest.len() != 2 {
                    return Err(ParseError::Malformed {
                        line,
                        msg: "expected `p <n> <m>`".into(),
                    });
                }
                let n: usize = parse_num(rest[0], line)?;
                let _m: usize = parse_num(rest[1], line)?;
                graph = Some(Graph::new(n));
            }
            "e" => {
                let g = graph.as_mut().ok_or(ParseError::MissingHeader)?;
                let ends: Vec<&str> = tok.collect();
                if ends.len() != 2 {
                    return Err(ParseError::Malformed {
                        line,
                        msg: "expected `e <u> <v>`".into(),
                    });
                }
                let n = g.n();
                let mut ids = [0usize; 2];
                for (slot, s) in ids.iter_mut().zip(&ends) {
                    let x: i64 = parse_num(s, line)?;
                    if x < 1 || x as u64 > n as u64 {
                        return Err(ParseError::OutOfRange { line, vertex: x, n });
                    }
                    *slot = (x - 1) as usize;
                }
                if ids[0] == ids[1] {
                    return Err(ParseError::SelfLoop {
                        line,
                        vertex: ids[0] + 1,
                    });
                }
                g.add_edge(ids[0], ids[1]).expect("checked endpoints");
            }
            other => {
                return Err(ParseError::Malformed {
                    line,
                    msg: format!("unknown line type `{other}`"),
                })
            }
        }
    }
    graph.ok_or(ParseError::MissingHeader)
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, ParseError> {
    s.parse().map_err(|_| ParseError::Malformed {
        line,
        msg: format!("`{s}` is not a number"),
    })
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        parse_graph("p 3 2\ne 1 2\ne 2 3\n").unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n).unwrap();
        }
        g
    }

    #[test]
    fn parses_path_and_k4() {
        let g = path3();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        let k4 = parse_graph("c all pairs\np 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n").unwrap();
        assert_eq!(k4, complete(4));
    }

    #[test]
    fn parse_errors_name_the_line() {
        assert_eq!(
            parse_graph("p 2 1\ne 1 1\n"),
            Err(ParseError::SelfLoop { line: 2, vertex: 1 })
        );
        assert!(matches!(
            parse_graph("p 2 1\ne 1 3\n"),
            Err(ParseError::OutOfRange { line: 2, vertex: 3, .. })
        ));
        assert!(matches!(
            parse_graph("p 2 1\nx 1 2\n"),
            Err(ParseError::Malformed { line: 2, .. })
        ));
        assert_eq!(parse_graph("e 1 2\n"), Err(ParseError::MissingHeader));
    }

    #[test]
    fn duplicate_edges_are_idempotent() {
        let g = parse_graph("p 2 2\ne 1 2\ne 2 1\n").unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn write_then_parse() {
        let g = cycle(5);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn four_cycle_is_its_own_witness() {
        let c4 = cycle(4);
        let w = is_chordal(&c4).unwrap_err();
        assert_eq!(w.len(), 4);
        let mut sorted = w.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
    }

    #[test]
    fn every_order_of_k4_is_a_peo() {
        let k4 = complete(4);
        assert!(is_chordal(&k4).is_ok());
        assert!(Peo::from_order(&k4, vec![3, 1, 0, 2]).is_ok());
    }

    #[test]
    fn invalid_peo_is_a_contract_error() {
        let p = path3();
        let bad = Peo {
            order: vec![1, 0, 2],
            position: vec![1, 0, 2],
        };
        assert!(matches!(maximal_cliques(&p, &bad), Err(GraphError::InvalidPeo(_))));
        assert!(Peo::from_order(&p, vec![1, 0, 2]).is_err());
    }

    #[test]
    fn cliques_of_small_graphs() {
        let k4 = complete(4);
        let peo = is_chordal(&k4).unwrap();
        assert_eq!(maximal_cliques(&k4, &peo).unwrap(), vec![Clique::new(0..4)]);
        let p = path3();
        let peo = is_chordal(&p).unwrap();
        assert_eq!(
            maximal_cliques(&p, &peo).unwrap(),
            vec![Clique::new([0, 1]), Clique::new([1, 2])]
        );
        let empty = Graph::new(3);
        let peo = is_chordal(&empty).unwrap();
        assert_eq!(maximal_cliques(&empty, &peo).unwrap().len(), 3);
    }

    #[test]
    fn four_chordality() {
        assert!(matches!(
            is_four_chordal(&complete(3)),
            Err(FourChordalWitness::EdgeWithoutK4(_, _))
        ));
        assert!(is_four_chordal(&complete(4)).is_ok());
        assert!(matches!(
            is_four_chordal(&cycle(5)),
            Err(FourChordalWitness::NotChordal(_))
        ));
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(count_maximal_triangles(&complete(4)).unwrap(), 0);
        assert_eq!(count_maximal_triangles(&complete(3)).unwrap(), 1);
    }

    #[test]
    fn components() {
        let mut g = Graph::new(8);
        for base in [0, 4] {
            for u in base..base + 4 {
                for v in u + 1..base + 4 {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        assert_eq!(connected_components(&g), vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
        assert_eq!(connected_components(&complete(5)).len(), 1);
        assert_eq!(connected_components(&Graph::new(3)).len(), 3);
    }

    #[test]
    fn induced_subgraph_maps_back() {
        let g = cycle(6);
        let (h, map) = g.induced_subgraph(&[5, 0, 1]);
        assert_eq!(map, vec![0, 1, 5]);
        assert_eq!(h.edges(), vec![(0, 1), (0, 2)]);
    }
}
