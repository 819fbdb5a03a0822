//! Rooted tree decompositions whose bags are cliques, nice decompositions,
//! and branch detection.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{is_chordal, is_four_chordal, maximal_cliques, Clique, FourChordalWitness, Graph, Peo};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("graph has no edge, so no non-trivial clique can host a node")]
    Edgeless,
    #[error("graph is not 4-chordal: {0}")]
    NotFourChordal(FourChordalWitness),
    #[error("root clique {0} is not a valid root: {1}")]
    BadRoot(Clique, String),
    #[error("parent array does not describe a rooted tree: {0}")]
    NotATree(String),
    #[error("nice construction exceeded its step budget ({0})")]
    StepBudget(usize),
}

/// Rooted tree of bags. Bags are sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, parent: Vec<Option<usize>>) -> Result<Self, DecompError> {
        let td = TreeDecomposition {
            bags: bags.into_iter().map(|b| Clique::new(b).into_vec()).collect(),
            parent,
        };
        td.check_shape()?;
        Ok(td)
    }

    fn check_shape(&self) -> Result<(), DecompError> {
        let n = self.bags.len();
        if self.parent.len() != n {
            return Err(DecompError::NotATree("length mismatch".into()));
        }
        if n == 0 {
            return Err(DecompError::NotATree("no nodes".into()));
        }
        let roots = self.parent.iter().filter(|p| p.is_none()).count();
        if roots != 1 {
            return Err(DecompError::NotATree(format!("{roots} roots")));
        }
        for start in 0..n {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = self.parent[cur] {
                if p >= n {
                    return Err(DecompError::NotATree(format!("parent {p} out of range")));
                }
                cur = p;
                steps += 1;
                if steps > n {
                    return Err(DecompError::NotATree("cycle".into()));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn root(&self) -> usize {
        self.parent
            .iter()
            .position(|p| p.is_none())
            .expect("validated tree has a root")
    }

    pub fn bag(&self, u: usize) -> &[usize] {
        &self.bags[u]
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn parent(&self, u: usize) -> Option<usize> {
        self.parent[u]
    }

    /// Children of every node, ascending.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (u, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(u);
            }
        }
        ch
    }

    /// Children before parents; siblings ascending.
    pub fn post_order(&self) -> Vec<usize> {
        let ch = self.children();
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root(), false)];
        while let Some((u, expanded)) = stack.pop() {
            if expanded {
                out.push(u);
            } else {
                stack.push((u, true));
                for &c in ch[u].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Same tree, rooted at `r`.
    pub fn rerooted(&self, r: usize) -> TreeDecomposition {
        let mut adj = vec![Vec::new(); self.len()];
        for (u, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                adj[u].push(*p);
                adj[*p].push(u);
            }
        }
        let mut parent = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[r] = true;
        let mut queue = VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        TreeDecomposition {
            bags: self.bags.clone(),
            parent,
        }
    }

    /// Tree-decomposition violations of this tree against `g`.
    pub fn violations(&self, g: &Graph) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Err(DecompError::NotATree(msg)) = self.check_shape() {
            out.push(Violation::NotATree(msg));
            return out;
        }
        for (u, bag) in self.bags.iter().enumerate() {
            if bag.iter().any(|&v| v >= g.n()) || !g.is_clique(bag) {
                out.push(Violation::BagNotClique { node: u });
            }
        }
        let mut covered = BTreeSet::new();
        for bag in &self.bags {
            for (i, &a) in bag.iter().enumerate() {
                for &b in &bag[i + 1..] {
                    covered.insert((a, b));
                }
            }
        }
        for (a, b) in g.edges() {
            if !covered.contains(&(a, b)) {
                out.push(Violation::EdgeNotCovered { u: a, v: b });
            }
        }
        // A vertex's bags form a subtree iff exactly one of them has a
        // parent outside the set.
        let mut tops = vec![0usize; g.n()];
        for (u, bag) in self.bags.iter().enumerate() {
            for &v in bag.iter().filter(|&&v| v < g.n()) {
                let parent_has = self.parent[u].is_some_and(|p| self.bags[p].binary_search(&v).is_ok());
                if !parent_has {
                    tops[v] += 1;
                }
            }
        }
        for (v, &c) in tops.iter().enumerate() {
            if c > 1 {
                out.push(Violation::SubtreeDisconnected { vertex: v });
            }
        }
        out
    }

    pub fn to_export(&self) -> DecompositionExport {
        DecompositionExport {
            root: self.root(),
            nodes: (0..self.len())
                .map(|u| ExportNode {
                    id: u,
                    bag: self.bags[u].clone(),
                    parent: self.parent[u],
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportNode {
    pub id: usize,
    pub bag: Vec<usize>,
    pub parent: Option<usize>,
}

/// JSON shape used by `ct decompose`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionExport {
    pub root: usize,
    pub nodes: Vec<ExportNode>,
}

/// A rooted decomposition produced by [`make_nice`] or [`nice_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceDecomposition(TreeDecomposition);

impl NiceDecomposition {
    /// Wraps an arbitrary tree without checking anything; for negative tests.
    pub fn from_tree_unchecked(td: TreeDecomposition) -> Self {
        NiceDecomposition(td)
    }

    pub fn tree(&self) -> &TreeDecomposition {
        &self.0
    }

    pub fn into_tree(self) -> TreeDecomposition {
        self.0
    }
}

impl std::ops::Deref for NiceDecomposition {
    type Target = TreeDecomposition;
    fn deref(&self) -> &TreeDecomposition {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotATree(String),
    BagNotClique { node: usize },
    EdgeNotCovered { u: usize, v: usize },
    SubtreeDisconnected { vertex: usize },
    AdjacentDuplicateBags { parent: usize, child: usize },
    BagTooSmall { node: usize, size: usize },
    NonMaximalTriangle { node: usize },
    SharingRule { node: usize, size: usize, shared: usize },
    RootNotTriangle { root: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree(m) => write!(f, "not a tree: {m}"),
            Violation::BagNotClique { node } => write!(f, "bag of node {node} is not a clique"),
            Violation::EdgeNotCovered { u, v } => {
                write!(f, "edge {}-{} is in no bag", u + 1, v + 1)
            }
            Violation::SubtreeDisconnected { vertex } => {
                write!(f, "bags containing vertex {} are not connected", vertex + 1)
            }
            Violation::AdjacentDuplicateBags { parent, child } => {
                write!(f, "adjacent duplicate bags at nodes {parent} and {child}")
            }
            Violation::BagTooSmall { node, size } => {
                write!(f, "bag of node {node} has size {size} < 3")
            }
            Violation::NonMaximalTriangle { node } => {
                write!(f, "3-bag of node {node} is not a maximal clique")
            }
            Violation::SharingRule { node, size, shared } => write!(
                f,
                "k-1 sharing rule: node {node} has size {size} but shares {shared} with its parent"
            ),
            Violation::RootNotTriangle { root } => {
                write!(f, "graph has a maximal 3-clique but root {root} is not one")
            }
        }
    }
}

/// Clique tree: one node per non-trivial maximal clique, joined by a
/// maximum-weight spanning tree of the intersection graph, rooted at node 0.
pub fn maximal_clique_tree(g: &Graph, peo: &Peo) -> Result<TreeDecomposition, DecompError> {
    let cliques: Vec<Vec<usize>> = maximal_cliques(g, peo)
        .map_err(|e| DecompError::NotATree(e.to_string()))?
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(Clique::into_vec)
        .collect();
    if cliques.is_empty() {
        return Err(DecompError::Edgeless);
    }
    Ok(spanning_clique_tree(cliques))
}

/// Prim's algorithm on `|Ci ∩ Cj|`; ties go to the smaller index.
pub(crate) fn spanning_clique_tree(cliques: Vec<Vec<usize>>) -> TreeDecomposition {
    let c = cliques.len();
    let weight = |a: &[usize], b: &[usize]| a.iter().filter(|v| b.binary_search(v).is_ok()).count();
    let mut parent = vec![None; c];
    let mut in_tree = vec![false; c];
    let mut best: Vec<(usize, usize)> = vec![(0, 0); c];
    in_tree[0] = true;
    for j in 1..c {
        best[j] = (weight(&cliques[0], &cliques[j]), 0);
    }
    for _ in 1..c {
        let mut pick: Option<usize> = None;
        for j in 0..c {
            if !in_tree[j] && pick.is_none_or(|p| best[j].0 > best[p].0) {
                pick = Some(j);
            }
        }
        let j = pick.expect("a node is outside the tree");
        in_tree[j] = true;
        parent[j] = Some(best[j].1);
        for k in 0..c {
            if !in_tree[k] {
                let w = weight(&cliques[j], &cliques[k]);
                if w > best[k].0 {
                    best[k] = (w, j);
                }
            }
        }
    }
    TreeDecomposition { bags: cliques, parent }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

fn shared(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|v| b.binary_search(v).is_ok()).count()
}

/// Subdivides and contracts a rooted decomposition until it has the nice
/// shape. Returns the result and, for every input node, the id of the node
/// that now carries its bag.
pub fn make_nice_mapped(td: &TreeDecomposition) -> Result<(NiceDecomposition, Vec<usize>), DecompError> {
    let mut bags = td.bags.clone();
    let mut parent = td.parent.clone();
    let n_vertices = bags.iter().flatten().copied().collect::<BTreeSet<_>>().len();
    let max_bag = bags.iter().map(Vec::len).max().unwrap_or(0);
    let budget = 4 * n_vertices.max(1) * max_bag.max(1) * max_bag.max(1);
    let mut steps = 0usize;

    // Subdivision: a bag of size >= 5 with two or more vertices missing from
    // its parent gets a new parent without its largest such vertex.
    let mut work: Vec<usize> = (0..bags.len()).filter(|&u| parent[u].is_some()).collect();
    work.reverse();
    while let Some(u) = work.pop() {
        let Some(p) = parent[u] else { continue };
        let private: Vec<usize> = bags[u]
            .iter()
            .copied()
            .filter(|v| bags[p].binary_search(v).is_err())
            .collect();
        if bags[u].len() < 5 || private.len() < 2 {
            continue;
        }
        steps += 1;
        if steps > budget {
            return Err(DecompError::StepBudget(budget));
        }
        let drop = *private.last().expect("two private vertices");
        let new_bag: Vec<usize> = bags[u].iter().copied().filter(|&v| v != drop).collect();
        let w = bags.len();
        bags.push(new_bag);
        parent.push(Some(p));
        parent[u] = Some(w);
        work.push(w);
    }

    // Contraction of equal adjacent bags, child into parent.
    let mut merged: Vec<Option<usize>> = vec![None; bags.len()];
    loop {
        let mut changed = false;
        for u in 0..bags.len() {
            if merged[u].is_some() {
                continue;
            }
            let Some(p) = parent[u] else { continue };
            if bags[u] == bags[p] {
                for w in 0..bags.len() {
                    if merged[w].is_none() && parent[w] == Some(u) {
                        parent[w] = Some(p);
                    }
                }
                merged[u] = Some(p);
                changed = true;
                steps += 1;
                if steps > budget {
                    return Err(DecompError::StepBudget(budget));
                }
            }
        }
        if !changed {
            break;
        }
    }

    // Renumber breadth-first from the root, children by old id.
    let root = (0..bags.len())
        .find(|&u| merged[u].is_none() && parent[u].is_none())
        .expect("root survives contraction");
    let mut children = vec![Vec::new(); bags.len()];
    for u in 0..bags.len() {
        if merged[u].is_none() {
            if let Some(p) = parent[u] {
                children[p].push(u);
            }
        }
    }
    let mut new_id = vec![usize::MAX; bags.len()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        new_id[u] = order.len();
        order.push(u);
        queue.extend(children[u].iter().copied());
    }
    let out_bags: Vec<Vec<usize>> = order.iter().map(|&u| bags[u].clone()).collect();
    let out_parent: Vec<Option<usize>> = order.iter().map(|&u| parent[u].map(|p| new_id[p])).collect();
    let resolve = |mut u: usize| {
        while let Some(p) = merged[u] {
            u = p;
        }
        new_id[u]
    };
    let mapping = (0..td.len()).map(resolve).collect();
    Ok((
        NiceDecomposition(TreeDecomposition {
            bags: out_bags,
            parent: out_parent,
        }),
        mapping,
    ))
}

pub fn make_nice(td: &TreeDecomposition) -> Result<NiceDecomposition, DecompError> {
    make_nice_mapped(td).map(|(d, _)| d)
}

/// Nice decomposition of a 4-chordal graph rooted at `root_clique`.
pub fn nice_decomposition(g: &Graph, root_clique: &Clique) -> Result<NiceDecomposition, DecompError> {
    is_four_chordal(g).map_err(DecompError::NotFourChordal)?;
    let peo = is_chordal(g).expect("4-chordal graphs are chordal");
    let cliques = maximal_cliques(g, &peo).expect("valid peo");
    let triangles: Vec<&Clique> = cliques.iter().filter(|c| c.len() == 3).collect();
    let rc = root_clique.vertices();
    if rc.iter().any(|&v| v >= g.n()) || !g.is_clique(rc) {
        return Err(DecompError::BadRoot(
            root_clique.clone(),
            "not a clique of the graph".into(),
        ));
    }
    if !triangles.is_empty() {
        if !triangles.contains(&root_clique) {
            return Err(DecompError::BadRoot(
                root_clique.clone(),
                "graph has maximal 3-cliques and this is not one of them".into(),
            ));
        }
    } else if rc.len() < 4 {
        return Err(DecompError::BadRoot(
            root_clique.clone(),
            "needs at least four vertices".into(),
        ));
    }
    let tree = maximal_clique_tree(g, &peo)?;
    let host = (0..tree.len())
        .find(|&u| is_subset(rc, tree.bag(u)))
        .ok_or_else(|| DecompError::BadRoot(root_clique.clone(), "not inside a maximal clique".into()))?;
    let tree = tree.rerooted(host);
    let mut bags = tree.bags.clone();
    let mut parent = tree.parent.clone();
    parent[host] = Some(bags.len());
    bags.push(rc.to_vec());
    parent.push(None);
    make_nice(&TreeDecomposition { bags, parent })
}

/// Checks tree-decomposition and niceness properties against `g`.
pub fn validate_nice(d: &NiceDecomposition, g: &Graph) -> Result<(), Vec<Violation>> {
    let td = d.tree();
    let mut out = td.violations(g);
    if matches!(out.first(), Some(Violation::NotATree(_))) {
        return Err(out);
    }
    let cliques: BTreeSet<Vec<usize>> = match is_chordal(g) {
        Ok(peo) => maximal_cliques(g, &peo)
            .expect("valid peo")
            .into_iter()
            .map(Clique::into_vec)
            .collect(),
        Err(_) => BTreeSet::new(),
    };
    let has_triangle = cliques.iter().any(|c| c.len() == 3);
    for u in 0..td.len() {
        let bag = td.bag(u);
        if bag.len() < 3 {
            out.push(Violation::BagTooSmall {
                node: u,
                size: bag.len(),
            });
        } else if bag.len() == 3 && !cliques.contains(bag) {
            out.push(Violation::NonMaximalTriangle { node: u });
        }
        if let Some(p) = td.parent(u) {
            if td.bag(p) == bag {
                out.push(Violation::AdjacentDuplicateBags { parent: p, child: u });
            }
            let s = shared(bag, td.bag(p));
            if bag.len() >= 5 && s != bag.len() - 1 {
                out.push(Violation::SharingRule {
                    node: u,
                    size: bag.len(),
                    shared: s,
                });
            }
        }
    }
    let root = td.root();
    if has_triangle && !(td.bag(root).len() == 3 && cliques.contains(td.bag(root))) {
        out.push(Violation::RootNotTriangle { root });
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub root_node: usize,
    pub alpha: usize,
    pub beta: usize,
    /// The root and all its descendants, in post-order.
    pub nodes: Vec<usize>,
}

/// Maximal branches, ordered by root node.
pub fn find_branches(d: &NiceDecomposition) -> Vec<Branch> {
    let td = d.tree();
    let ch = td.children();
    let post = td.post_order();
    // clean[u]: the subtree of u has no 3-bag.
    let mut clean = vec![true; td.len()];
    for &u in &post {
        clean[u] = td.bag(u).len() != 3 && ch[u].iter().all(|&c| clean[c]);
    }
    let is_root = |u: usize| -> Option<(usize, usize)> {
        let p = td.parent(u)?;
        if td.bag(u).len() != 4 || !clean[u] {
            return None;
        }
        let common: Vec<usize> = td
            .bag(u)
            .iter()
            .copied()
            .filter(|v| td.bag(p).binary_search(v).is_ok())
            .collect();
        (common.len() == 2).then(|| (common[0], common[1]))
    };
    let mut out = Vec::new();
    let mut stack = vec![td.root()];
    while let Some(u) = stack.pop() {
        if let Some((alpha, beta)) = is_root(u) {
            let mut nodes = Vec::new();
            let mut inner = vec![(u, false)];
            while let Some((x, expanded)) = inner.pop() {
                if expanded {
                    nodes.push(x);
                } else {
                    inner.push((x, true));
                    for &c in ch[x].iter().rev() {
                        inner.push((c, false));
                    }
                }
            }
            out.push(Branch {
                root_node: u,
                alpha,
                beta,
                nodes,
            });
        } else {
            for &c in ch[u].iter().rev() {
                stack.push(c);
            }
        }
    }
    out.sort_by_key(|b| b.root_node);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, h_graph};
    use crate::graph::maximal_triangles;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn clique_tree_of_k5_and_path() {
        let k5 = complete_graph(5);
        let t = maximal_clique_tree(&k5, &is_chordal(&k5).unwrap()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.bag(0), &[0, 1, 2, 3, 4]);
        let p = path3();
        let t = maximal_clique_tree(&p, &is_chordal(&p).unwrap()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.bags(), &[vec![0, 1], vec![1, 2]]);
        assert!(t.violations(&p).is_empty());
    }

    #[test]
    fn edgeless_graph_has_no_clique_tree() {
        let g = Graph::new(3);
        assert_eq!(
            maximal_clique_tree(&g, &is_chordal(&g).unwrap()),
            Err(DecompError::Edgeless)
        );
    }

    #[test]
    fn h0_clique_tree_is_a_path() {
        let g = h_graph(0);
        let t = maximal_clique_tree(&g, &is_chordal(&g).unwrap()).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.violations(&g).is_empty());
        let ch = t.children();
        let degrees: Vec<usize> = (0..3)
            .map(|u| ch[u].len() + usize::from(t.parent(u).is_some()))
            .collect();
        let mut sorted = degrees;
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 2]);
    }

    #[test]
    fn single_node_for_k5() {
        let k5 = complete_graph(5);
        let d = nice_decomposition(&k5, &Clique::new(0..5)).unwrap();
        assert_eq!(d.len(), 1);
        assert!(validate_nice(&d, &k5).is_ok());
        assert!(find_branches(&d).is_empty());
    }

    #[test]
    fn h1_rooted_at_its_triangle() {
        let g = h_graph(1);
        let tri = maximal_triangles(&g).unwrap();
        assert_eq!(tri.len(), 1);
        let d = nice_decomposition(&g, &tri[0]).unwrap();
        assert_eq!(d.bag(d.root()), tri[0].vertices());
        assert!(validate_nice(&d, &g).is_ok());
        assert!(find_branches(&d).len() >= 3);
    }

    #[test]
    fn h0_on_connector() {
        let g = h_graph(0);
        let d = nice_decomposition(&g, &Clique::new([2, 3, 4, 5])).unwrap();
        assert!(validate_nice(&d, &g).is_ok());
        assert!(d.bags().iter().all(|b| b.len() == 4));
    }

    #[test]
    fn bad_roots_are_rejected() {
        let g = h_graph(1);
        assert!(matches!(
            nice_decomposition(&g, &Clique::new([0, 1, 2, 3])),
            Err(DecompError::BadRoot(..))
        ));
        let k5 = complete_graph(5);
        assert!(matches!(
            nice_decomposition(&k5, &Clique::new([0, 1, 2])),
            Err(DecompError::BadRoot(..))
        ));
    }

    #[test]
    fn duplicate_adjacent_bags_are_reported() {
        let k4 = complete_graph(4);
        let td = TreeDecomposition::new(vec![vec![0, 1, 2, 3], vec![0, 1, 2, 3]], vec![None, Some(0)]).unwrap();
        let errs = validate_nice(&NiceDecomposition::from_tree_unchecked(td), &k4).unwrap_err();
        assert!(errs
            .iter()
            .any(|v| matches!(v, Violation::AdjacentDuplicateBags { .. })));
        assert!(errs[0].to_string().contains("adjacent duplicate bags"));
    }

    #[test]
    fn sharing_rule_is_reported() {
        // K6 on 0..6 glued to K6 on 3..9 along {3,4,5}.
        let mut g = Graph::new(9);
        for block in [[0, 1, 2, 3, 4, 5], [3, 4, 5, 6, 7, 8]] {
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    g.add_edge(a, b).unwrap();
                }
            }
        }
        let td = TreeDecomposition::new(
            vec![vec![0, 1, 2, 3, 4, 5], vec![3, 4, 5, 6, 7, 8]],
            vec![None, Some(0)],
        )
        .unwrap();
        let errs = validate_nice(&NiceDecomposition::from_tree_unchecked(td.clone()), &g).unwrap_err();
        assert!(errs.iter().any(|v| matches!(
            v,
            Violation::SharingRule {
                node: 1,
                size: 6,
                shared: 3
            }
        )));
        let nice = make_nice(&td).unwrap();
        assert!(validate_nice(&nice, &g).is_ok());
    }

    #[test]
    fn mapping_follows_contraction() {
        let td = TreeDecomposition::new(
            vec![vec![0, 1, 2, 3], vec![0, 1, 2, 3], vec![2, 3, 4, 5]],
            vec![None, Some(0), Some(1)],
        )
        .unwrap();
        let (d, map) = make_nice_mapped(&td).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(map, vec![0, 0, 1]);
    }

    #[test]
    fn post_order_visits_children_first() {
        let td = TreeDecomposition::new(
            vec![vec![0], vec![1], vec![2], vec![3]],
            vec![None, Some(0), Some(0), Some(1)],
        )
        .unwrap();
        assert_eq!(td.post_order(), vec![3, 1, 2, 0]);
        let re = td.rerooted(3);
        assert_eq!(re.root(), 3);
        assert_eq!(re.parent(0), Some(1));
    }
}
