//! Extremal graphs, complete graphs and seeded random 4-chordal graphs.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{is_four_chordal, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("lower_bound_graph needs n >= 5, got {0}")]
    TooSmall(usize),
    #[error("random generator needs nodes >= 1 and 4 <= max_bag <= 12 (got nodes {nodes}, max_bag {max_bag})")]
    BadRandomParams { nodes: usize, max_bag: usize },
    #[error("complete graph needs n >= 1")]
    EmptyComplete,
    #[error("bad generator spec `{0}`")]
    BadSpec(String),
}

fn add_clique(g: &mut Graph, vs: &[usize]) {
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            g.add_edge(a, b).expect("generator edges are valid");
        }
    }
}

pub fn complete_graph(n: usize) -> Graph {
    let mut g = Graph::new(n);
    add_clique(&mut g, &(0..n).collect::<Vec<_>>());
    g
}

/// Vertex ids of `h_graph`: `a..a'''` are 0..=3, `d..d'''` are 4..=7, and
/// block `i` (1-based) holds `b_i, b'_i, b''_i, c_i, c'_i, c''_i, c'''_i`
/// at `8 + 7(i-1) ..`.
pub mod hk_ids {
    pub const A: [usize; 4] = [0, 1, 2, 3];
    pub const D: [usize; 4] = [4, 5, 6, 7];

    pub fn b(i: usize) -> [usize; 3] {
        let base = 8 + 7 * (i - 1);
        [base, base + 1, base + 2]
    }

    pub fn c(i: usize) -> [usize; 4] {
        let base = 8 + 7 * (i - 1) + 3;
        [base, base + 1, base + 2, base + 3]
    }
}

/// The `7k + 8` vertex graph with `2k + 2` disjoint maximal cliques.
/// For `k = 0` the two 4-cliques are joined through `{a'', a''', d, d'}`.
pub fn h_graph(k: usize) -> Graph {
    use hk_ids::*;
    let mut g = Graph::new(7 * k + 8);
    add_clique(&mut g, &A);
    add_clique(&mut g, &D);
    if k == 0 {
        add_clique(&mut g, &[A[2], A[3], D[0], D[1]]);
        return g;
    }
    for i in 1..=k {
        let [b0, b1, b2] = b(i);
        let cc = c(i);
        add_clique(&mut g, &[b0, b1, b2]);
        add_clique(&mut g, &cc);
        add_clique(&mut g, &[b1, b2, cc[0], cc[1]]);
        if i < k {
            let [n0, n1, _] = b(i + 1);
            add_clique(&mut g, &[b0, b2, n0, n1]);
        }
    }
    let [b10, b11, _] = b(1);
    add_clique(&mut g, &[A[2], A[3], b10, b11]);
    let [bk0, _, bk2] = b(k);
    add_clique(&mut g, &[bk0, bk2, D[0], D[1]]);
    g
}

/// An `n`-vertex 4-chordal graph whose clique transversal number is
/// `floor(2(n-1)/7)`.
pub fn lower_bound_graph(n: usize) -> Result<Graph, GenError> {
    if n < 5 {
        return Err(GenError::TooSmall(n));
    }
    if n <= 7 {
        return Ok(complete_graph(n));
    }
    let k = (n - 8) / 7;
    let z = (n - 1) % 7;
    let h = h_graph(k);
    let base = h.n();
    let mut g = Graph::new(n);
    for (u, v) in h.edges() {
        g.add_edge(u, v).expect("valid");
    }
    let es: Vec<usize> = (base..base + z).collect();
    let d = hk_ids::D;
    if z <= 3 {
        for &e in &es {
            for &x in &d {
                g.add_edge(e, x).expect("valid");
            }
        }
    } else {
        add_clique(&mut g, &es);
        for &e in &es[..2] {
            g.add_edge(e, d[2]).expect("valid");
            g.add_edge(e, d[3]).expect("valid");
        }
    }
    Ok(g)
}

/// Seeded random 4-chordal graph grown as a tree of bags.
pub fn random_four_chordal(seed: u64, target_nodes: usize, max_bag: usize) -> Result<Graph, GenError> {
    random_four_chordal_capped(seed, target_nodes, max_bag, None)
}

/// As [`random_four_chordal`], but never exceeds `max_vertices` vertices.
pub fn random_four_chordal_capped(
    seed: u64,
    target_nodes: usize,
    max_bag: usize,
    max_vertices: Option<usize>,
) -> Result<Graph, GenError> {
    if target_nodes == 0 || !(4..=12).contains(&max_bag) {
        return Err(GenError::BadRandomParams {
            nodes: target_nodes,
            max_bag,
        });
    }
    let mut attempt_seed = seed;
    loop {
        let g = grow(attempt_seed, target_nodes, max_bag, max_vertices);
        if is_four_chordal(&g).is_ok() {
            return Ok(g);
        }
        attempt_seed = attempt_seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
    }
}

fn grow(seed: u64, target_nodes: usize, max_bag: usize, max_vertices: Option<usize>) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = max_vertices.unwrap_or(usize::MAX).max(max_bag);
    let mut bags: Vec<Vec<usize>> = vec![(0..max_bag).collect()];
    let mut n = max_bag;
    let fresh = |n: &mut usize, k: usize| -> Vec<usize> {
        let out = (*n..*n + k).collect();
        *n += k;
        out
    };
    while bags.len() < target_nodes {
        let p = rng.gen_range(0..bags.len());
        let parent = bags[p].clone();
        let parent_is_triangle = parent.len() == 3;
        if rng.gen_bool(0.2) {
            // A maximal 3-clique plus 4-clique children covering its new edges.
            let s = rng.gen_range(1..=2usize);
            let new_vertices = (3 - s) + 2 * if s == 2 { 2 } else { 3 };
            if n + new_vertices > cap {
                break;
            }
            let mut tri: Vec<usize> = sample(&mut rng, &parent, s);
            let shared_part = tri.clone();
            tri.extend(fresh(&mut n, 3 - s));
            bags.push(tri.clone());
            for i in 0..3 {
                for j in i + 1..3 {
                    let (x, y) = (tri[i], tri[j]);
                    if shared_part.contains(&x) && shared_part.contains(&y) {
                        continue;
                    }
                    let mut child = vec![x, y];
                    child.extend(fresh(&mut n, 2));
                    bags.push(child);
                }
            }
        } else {
            let max_share = if parent_is_triangle {
                2
            } else {
                parent.len().min(max_bag - 1)
            };
            let s = rng.gen_range(1..=max_share);
            let lo = 1.max(4usize.saturating_sub(s));
            let hi = max_bag - s;
            let f = rng.gen_range(lo..=hi.max(lo));
            if n + f > cap {
                break;
            }
            let mut bag = sample(&mut rng, &parent, s);
            bag.extend(fresh(&mut n, f));
            bags.push(bag);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut g = Graph::new(n);
    for bag in &bags {
        let mapped: Vec<usize> = bag.iter().map(|&v| perm[v]).collect();
        add_clique(&mut g, &mapped);
    }
    g
}

fn sample(rng: &mut ChaCha8Rng, from: &[usize], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = index::sample(rng, from.len(), k).into_iter().collect();
    idx.sort_unstable();
    idx.into_iter().map(|i| from[i]).collect()
}

/// Generator request, as accepted on the command line (`hk:2`, `lower:12`,
/// `complete:5`, `random:SEED:NODES:MAXBAG`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenSpec {
    Hk { k: usize },
    Lower { n: usize },
    Complete { n: usize },
    Random { seed: u64, nodes: usize, max_bag: usize },
}

impl GenSpec {
    pub fn build(&self) -> Result<Graph, GenError> {
        match *self {
            GenSpec::Hk { k } => Ok(h_graph(k)),
            GenSpec::Lower { n } => lower_bound_graph(n),
            GenSpec::Complete { n } => {
                if n == 0 {
                    Err(GenError::EmptyComplete)
                } else {
                    Ok(complete_graph(n))
                }
            }
            GenSpec::Random { seed, nodes, max_bag } => random_four_chordal(seed, nodes, max_bag),
        }
    }
}

impl FromStr for GenSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        let bad = || GenError::BadSpec(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u64, GenError> { parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(bad) };
        match (parts[0], parts.len()) {
            ("hk", 2) => Ok(GenSpec::Hk { k: num(1)? as usize }),
            ("lower", 2) => Ok(GenSpec::Lower { n: num(1)? as usize }),
            ("complete", 2) => Ok(GenSpec::Complete { n: num(1)? as usize }),
            ("random", 4) => Ok(GenSpec::Random {
                seed: num(1)?,
                nodes: num(2)? as usize,
                max_bag: num(3)? as usize,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Hk { k } => write!(f, "hk:{k}"),
            GenSpec::Lower { n } => write!(f, "lower:{n}"),
            GenSpec::Complete { n } => write!(f, "complete:{n}"),
            GenSpec::Random { seed, nodes, max_bag } => write!(f, "random:{seed}:{nodes}:{max_bag}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::count_maximal_triangles;
    use crate::oracle::bron_kerbosch;

    #[test]
    fn h_graph_sizes_and_shape() {
        for k in 0..4 {
            let g = h_graph(k);
            assert_eq!(g.n(), 7 * k + 8);
            assert!(is_four_chordal(&g).is_ok(), "k = {k}");
            assert_eq!(count_maximal_triangles(&g).unwrap(), k);
        }
        assert_eq!(bron_kerbosch(&h_graph(0)).len(), 3);
    }

    #[test]
    fn h_graph_disjoint_cliques_are_maximal() {
        let k = 2;
        let g = h_graph(k);
        let cliques = bron_kerbosch(&g);
        let mut listed: Vec<Vec<usize>> = vec![hk_ids::A.to_vec(), hk_ids::D.to_vec()];
        for i in 1..=k {
            listed.push(hk_ids::b(i).to_vec());
            listed.push(hk_ids::c(i).to_vec());
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &listed {
            assert!(cliques.iter().any(|m| m.vertices() == c.as_slice()));
            for &v in c {
                assert!(seen.insert(v), "cliques overlap at {v}");
            }
        }
        assert_eq!(listed.len(), 2 * k + 2);
    }

    #[test]
    fn lower_bound_graphs_are_four_chordal() {
        for n in 5..=30 {
            let g = lower_bound_graph(n).unwrap();
            assert_eq!(g.n(), n);
            assert!(is_four_chordal(&g).is_ok(), "n = {n}");
        }
        assert_eq!(lower_bound_graph(6).unwrap(), complete_graph(6));
        assert_eq!(lower_bound_graph(4), Err(GenError::TooSmall(4)));
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        assert_eq!(random_four_chordal(1, 1, 5).unwrap(), complete_graph(5));
        let a = random_four_chordal(7, 30, 6).unwrap();
        let b = random_four_chordal(7, 30, 6).unwrap();
        assert_eq!(a, b);
        assert!(is_four_chordal(&a).is_ok());
        let capped = random_four_chordal_capped(3, 100, 8, Some(40)).unwrap();
        assert!(capped.n() <= 40);
    }

    #[test]
    fn spec_round_trip() {
        for s in ["hk:2", "lower:12", "complete:5", "random:1:30:6"] {
            let spec: GenSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("hk".parse::<GenSpec>().is_err());
        assert!("random:1:2".parse::<GenSpec>().is_err());
    }
}
