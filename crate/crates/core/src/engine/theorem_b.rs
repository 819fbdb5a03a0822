//! Reduction driver for components without maximal 3-cliques.

use std::collections::BTreeSet;

use crate::decomp::{make_nice_mapped, spanning_clique_tree, NiceDecomposition, TreeDecomposition};
use crate::graph::{is_chordal, maximal_cliques};

use super::ledger::Account;
use super::state::{fail, Engine, Fail, Step};
use super::trace::{Event, EventKind};

enum Outcome {
    Again,
    Done,
}

fn inter(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|v| b.binary_search(v).is_ok()).collect()
}

fn minus(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|v| b.binary_search(v).is_err()).collect()
}

/// Rooted clique tree in local vertex ids.
#[derive(Clone, Debug)]
struct RTree {
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    root: usize,
}

impl RTree {
    fn rooted(bags: Vec<Vec<usize>>, adj: &[Vec<usize>], root: usize) -> Self {
        let mut parent = vec![None; bags.len()];
        let mut seen = vec![false; bags.len()];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    stack.push(w);
                }
            }
        }
        RTree { bags, parent, root }
    }

    fn children(&self, u: usize) -> Vec<usize> {
        (0..self.bags.len()).filter(|&c| self.parent[c] == Some(u)).collect()
    }

    fn is_leaf(&self, u: usize) -> bool {
        u != self.root && self.children(u).is_empty()
    }

    fn leaf_children(&self, u: usize) -> Vec<usize> {
        self.children(u).into_iter().filter(|&c| self.is_leaf(c)).collect()
    }

    fn depth(&self, mut u: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent[u] {
            u = p;
            d += 1;
        }
        d
    }

    fn private(&self, u: usize) -> Vec<usize> {
        match self.parent[u] {
            Some(p) => minus(&self.bags[u], &self.bags[p]),
            None => self.bags[u].clone(),
        }
    }

    /// Moves a leaf from a one-child parent up to its grandparent while
    /// the attachment stays the same; this only adds leaves.
    fn normalise(&mut self) {
        loop {
            let mut moved = false;
            for u1 in 0..self.bags.len() {
                let Some(u2) = self.parent[u1] else { continue };
                let ch = self.children(u1);
                if ch.len() != 1 || !self.is_leaf(ch[0]) {
                    continue;
                }
                let u = ch[0];
                if inter(&self.bags[u1], &self.bags[u2]) == inter(&self.bags[u], &self.bags[u1]) {
                    self.parent[u] = Some(u2);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }

    fn decomposition(&self) -> Step<TreeDecomposition> {
        TreeDecomposition::new(self.bags.clone(), self.parent.clone()).map_err(|e| Fail(e.to_string()))
    }
}

impl Engine {
    /// Reduction driver. Returns whether the component was finished with at
    /// least two zlotys saved; on `false` nothing was changed.
    pub fn run_theorem_b(&mut self, comp: &[usize]) -> Step<bool> {
        let start = self.snapshot();
        let before = self.saved();
        let budget = self.work.m() + comp.len() + 8;
        let mut res = fail("reduction budget exhausted");
        for _ in 0..budget {
            match self.reduce_once(comp) {
                Ok(Outcome::Again) => continue,
                Ok(Outcome::Done) => {
                    res = Ok(());
                    break;
                }
                Err(e) => {
                    res = Err(e);
                    break;
                }
            }
        }
        if res.is_ok() && self.saved() - before >= 2 && comp.iter().all(|&v| !self.is_alive(v)) {
            return Ok(true);
        }
        self.restore(&start);
        Ok(false)
    }

    fn reduce_once(&mut self, comp: &[usize]) -> Step<Outcome> {
        let (h, map) = self.live_view(comp);
        let peo = is_chordal(&h).map_err(|c| Fail(format!("work graph not chordal at {c:?}")))?;
        let cliques: Vec<Vec<usize>> = maximal_cliques(&h, &peo)
            .map_err(|e| Fail(e.to_string()))?
            .into_iter()
            .filter(|c| c.len() >= 2)
            .map(|c| c.into_vec())
            .collect();
        if cliques.iter().any(|c| c.len() < 4) {
            return fail("work graph has a maximal clique below four vertices");
        }
        let global = |b: &[usize]| -> Vec<usize> {
            let mut g: Vec<usize> = b.iter().map(|&v| map[v]).collect();
            g.sort_unstable();
            g
        };
        if cliques.len() <= 2 {
            let obligations: Vec<Vec<usize>> = cliques.iter().map(|c| global(c)).collect();
            self.finish(&obligations, comp, &[], "at most two maximal cliques")?;
            return Ok(Outcome::Done);
        }
        let td = spanning_clique_tree(cliques.clone());
        let mut adj = vec![Vec::new(); cliques.len()];
        for u in 0..td.len() {
            if let Some(p) = td.parent(u) {
                adj[u].push(p);
                adj[p].push(u);
            }
        }
        let roots: Vec<usize> = (0..cliques.len()).filter(|&u| adj[u].len() >= 2).collect();
        let mut last = Fail("no node of degree two".into());
        for &root in roots.iter().take(6) {
            let snap = self.snapshot();
            let mut t = RTree::rooted(cliques.clone(), &adj, root);
            t.normalise();
            match self.reduce_tree(comp, &t, &map) {
                Ok(o) => return Ok(o),
                Err(e) => {
                    self.restore(&snap);
                    last = e;
                }
            }
        }
        Err(last)
    }

    fn push_reduced(&mut self, reason: String) -> Step {
        self.reduced.push(self.work.clone());
        self.marker(EventKind::Reduction, reason)
    }

    fn reduce_tree(&mut self, comp: &[usize], t: &RTree, map: &[usize]) -> Step<Outcome> {
        let n_nodes = t.bags.len();
        let global = |b: &[usize]| -> Vec<usize> {
            let mut g: Vec<usize> = b.iter().map(|&v| map[v]).collect();
            g.sort_unstable();
            g
        };
        let leaves: Vec<usize> = (0..n_nodes).filter(|&u| t.is_leaf(u)).collect();

        // Large leaves.
        for &leaf in &leaves {
            if t.bags[leaf].len() < 5 {
                continue;
            }
            let p = t.parent[leaf].expect("leaf has a parent");
            let private = t.private(leaf);
            if private.len() >= 2 {
                let v = map[private[0]];
                self.drop_vertex(v, "private vertex of a large leaf")?;
                self.work.isolate(v);
                self.push_reduced(format!(
                    "delete vertex {v} from a leaf clique of size {}",
                    t.bags[leaf].len()
                ))?;
            } else {
                let v = map[private[0]];
                let w = map[inter(&t.bags[leaf], &t.bags[p])[0]];
                self.work.remove_edge(v, w);
                self.push_reduced(format!(
                    "delete edge {v}-{w} from a leaf clique of size {}",
                    t.bags[leaf].len()
                ))?;
            }
            return Ok(Outcome::Again);
        }

        // A leaf with two or three private vertices.
        for &leaf in &leaves {
            let private = t.private(leaf);
            if private.len() < 2 {
                continue;
            }
            let p = t.parent[leaf].expect("leaf has a parent");
            let shared = inter(&t.bags[leaf], &t.bags[p]);
            let td = t.decomposition()?.rerooted(leaf);
            let (nice, mapping) = make_nice_mapped(&td).map_err(|e| Fail(e.to_string()))?;
            let r = mapping[leaf];
            let ch = nice.children();
            if r != nice.root() || ch[r].len() != 1 {
                return fail("leaf root does not have a single child");
            }
            let c = ch[r][0];
            let (a, b) = if shared.len() >= 2 {
                (shared[0], shared[1])
            } else {
                let v = shared[0];
                let other = nice
                    .bag(c)
                    .iter()
                    .copied()
                    .find(|&x| x != v)
                    .ok_or_else(|| Fail("child bag too small".into()))?;
                (v, other)
            };
            self.marker(
                EventKind::Reduction,
                format!("leaf with {} private vertices becomes the root", private.len()),
            )?;
            let base = self.install(&nice, map);
            self.process_branch(base + c, map[a], map[b])?;
            self.finish(&[global(&t.bags[leaf])], comp, &[], "root clique after the branch")?;
            self.remove_node(base + r)?;
            return Ok(Outcome::Done);
        }

        // A node whose only child is a leaf.
        for u1 in 0..n_nodes {
            let Some(u2) = t.parent[u1] else { continue };
            let ch = t.children(u1);
            if ch.len() != 1 || !t.is_leaf(ch[0]) {
                continue;
            }
            let u = ch[0];
            let (bu, bu1, bu2) = (&t.bags[u], &t.bags[u1], &t.bags[u2]);
            let a01 = inter(bu, bu1);
            let a12 = inter(bu1, bu2);
            if bu1.len() > 4 {
                let v = if a12.iter().all(|x| a01.contains(x)) {
                    minus(&a01, &a12)[0]
                } else {
                    minus(&a12, bu)[0]
                };
                let gv = map[v];
                let mut bags: Vec<Vec<usize>> = t.bags.iter().map(|b| global(b)).collect();
                bags[u1].retain(|&x| x != gv);
                for &x in comp {
                    if self.is_alive(x) {
                        self.work.isolate(x);
                    }
                }
                for b in &bags {
                    for (i, &x) in b.iter().enumerate() {
                        for &y in &b[i + 1..] {
                            self.work.add_edge(x, y).map_err(|e| Fail(e.to_string()))?;
                        }
                    }
                }
                self.push_reduced(format!("drop vertex {gv} from the clique {:?}", global(bu1)))?;
                return Ok(Outcome::Again);
            }
            return self.lone_leaf(comp, t, map, u, u1, u2);
        }

        // Nodes with two or more leaf children.
        let leafy: Vec<usize> = (0..n_nodes).filter(|&u| t.leaf_children(u).len() >= 2).collect();
        for &u in &leafy {
            let lc = t.leaf_children(u);
            for (i, &x) in lc.iter().enumerate() {
                for &y in &lc[i + 1..] {
                    let k = inter(&t.bags[x], &t.bags[y]).len();
                    if k == 3 {
                        return self.twin_leaves(comp, t, map, u, x, y);
                    }
                    if k <= 1 {
                        return self.split_leaves(comp, t, map, u, x, y);
                    }
                }
            }
        }

        if leafy.len() >= 2 {
            for &u in &leafy[..2] {
                let lc = t.leaf_children(u);
                self.pair_leaves(t, map, u, lc[0], lc[1])?;
            }
            self.run_basic(comp)?;
            return Ok(Outcome::Done);
        }
        let root_children = t.children(t.root);
        if root_children.iter().any(|&c| !t.is_leaf(c)) {
            return self.deep_root(comp, t, map);
        }
        let mut common: Vec<usize> = t.bags[0].clone();
        for b in &t.bags {
            common = inter(&common, b);
        }
        if !common.is_empty() {
            let obligations: Vec<Vec<usize>> = t.bags.iter().map(|b| global(b)).collect();
            self.finish(&obligations, comp, &[], "a vertex lies in every clique")?;
            return Ok(Outcome::Done);
        }
        if root_children.len() >= 4 {
            self.pair_leaves(t, map, t.root, root_children[0], root_children[1])?;
            self.pair_leaves(t, map, t.root, root_children[2], root_children[3])?;
            self.run_basic(comp)?;
            return Ok(Outcome::Done);
        }
        fail("no reduction applies")
    }

    /// Two leaves `x`, `y` under `u` sharing two vertices: their private
    /// vertices fund a pair on the shared ones.
    fn pair_leaves(&mut self, t: &RTree, map: &[usize], u: usize, x: usize, y: usize) -> Step {
        let px = minus(&t.bags[x], &t.bags[u]);
        let py = minus(&t.bags[y], &t.bags[u]);
        let shared = inter(&t.bags[x], &t.bags[y]);
        if px.len() != 1 || py.len() != 1 || shared.len() != 2 {
            return fail("leaf pair has the wrong shape");
        }
        let (v1, v6) = (map[px[0]], map[py[0]]);
        self.emit(Event::new(EventKind::Reduction).reason("two leaves fund a pair on their common edge"))?;
        let mut pot = self.pot_of(&[Account::Vertex(v1), Account::Vertex(v6)]);
        self.fund_tuple(vec![map[shared[0]], map[shared[1]]], None, &mut pot)?;
        self.save(&mut pot, "two leaves")?;
        self.remove_vertex(v1)?;
        self.remove_vertex(v6)
    }

    fn twin_leaves(&mut self, comp: &[usize], t: &RTree, map: &[usize], u: usize, x: usize, y: usize) -> Step<Outcome> {
        let v1 = map[minus(&t.bags[x], &t.bags[u])[0]];
        let v2 = map[minus(&t.bags[y], &t.bags[u])[0]];
        let shared: Vec<usize> = inter(&t.bags[x], &t.bags[y]).iter().map(|&v| map[v]).collect();
        self.marker(EventKind::Reduction, "two leaves share three vertices")?;
        let mut pot = self.pot_of(&[Account::Vertex(v1)]);
        self.fund_tuple(shared, None, &mut pot)?;
        self.remove_vertex(v1)?;
        self.drop_vertex(v2, "two leaves share three vertices")?;
        self.run_basic(comp)?;
        Ok(Outcome::Done)
    }

    /// Two leaves sharing at most one vertex hang off a new node holding
    /// their attachments; everything else is processed first.
    fn split_leaves(
        &mut self,
        comp: &[usize],
        t: &RTree,
        map: &[usize],
        u: usize,
        x: usize,
        y: usize,
    ) -> Step<Outcome> {
        let mut w: Vec<usize> = inter(&t.bags[u], &t.bags[x]);
        w.extend(inter(&t.bags[u], &t.bags[y]));
        w.sort_unstable();
        w.dedup();
        let mut bags = t.bags.clone();
        let mut parent = t.parent.clone();
        let wi = bags.len();
        bags.push(w);
        parent.push(Some(u));
        parent[x] = Some(wi);
        parent[y] = Some(wi);
        let td = TreeDecomposition::new(bags, parent)
            .map_err(|e| Fail(e.to_string()))?
            .rerooted(wi);
        let (nice, mapping) = make_nice_mapped(&td).map_err(|e| Fail(e.to_string()))?;
        let (r, mx, my) = (mapping[wi], mapping[x], mapping[y]);
        if r != nice.root() || nice.parent(mx) != Some(r) || nice.parent(my) != Some(r) {
            return fail("leaves moved away from the new node");
        }
        self.marker(EventKind::Reduction, "two leaves sharing at most one vertex")?;
        let base = self.install(&nice, map);
        let skip = [base + r, base + mx, base + my];
        for node in self.core.forest.post_order(base + r) {
            if !skip.contains(&node) {
                self.process_node(node)?;
            }
        }
        let global = |b: &[usize]| -> Vec<usize> { b.iter().map(|&v| map[v]).collect() };
        self.finish(&[global(&t.bags[x]), global(&t.bags[y])], comp, &[], "two leaves")?;
        for node in [base + mx, base + my, base + r] {
            self.remove_node(node)?;
        }
        Ok(Outcome::Done)
    }

    /// Node `u1` with the single leaf child `u` and parent `u2`, all bags of
    /// size four: the two cliques are replaced by two new vertices next to
    /// `u2`, the rest is processed with a branch at the new clique, and the
    /// two cliques are finished last.
    fn lone_leaf(&mut self, comp: &[usize], t: &RTree, map: &[usize], u: usize, u1: usize, u2: usize) -> Step<Outcome> {
        let (bu, bu1, bu2) = (&t.bags[u], &t.bags[u1], &t.bags[u2]);
        let a01 = inter(bu, bu1);
        let Some(&v2) = minus(&a01, bu2).first() else {
            return fail("leaf attachment equals the parent attachment");
        };
        let rest: Vec<usize> = a01.iter().copied().filter(|&x| x != v2).collect();
        let mut x: Vec<usize> = inter(&rest, bu2);
        for &c in bu2.iter() {
            if x.len() >= 2 {
                break;
            }
            if !x.contains(&c) {
                x.push(c);
            }
        }
        x.sort_unstable();
        if x.len() != 2 {
            return fail("parent clique too small");
        }
        self.marker(
            EventKind::Reduction,
            "single leaf child: replace two cliques by an auxiliary one",
        )?;
        let w1 = self.mint_aux()?;
        let w2 = self.mint_aux()?;
        let hn = map.len();
        let mut ext = map.to_vec();
        ext.push(w1);
        ext.push(w2);

        let keep: Vec<usize> = (0..t.bags.len()).filter(|&k| k != u && k != u1).collect();
        let mut new_id = vec![usize::MAX; t.bags.len()];
        for (i, &k) in keep.iter().enumerate() {
            new_id[k] = i;
        }
        let mut bags: Vec<Vec<usize>> = keep.iter().map(|&k| t.bags[k].clone()).collect();
        let mut parent: Vec<Option<usize>> = keep.iter().map(|&k| t.parent[k].map(|p| new_id[p])).collect();
        let s = bags.len();
        bags.push(vec![x[0], x[1], hn, hn + 1]);
        parent.push(Some(new_id[u2]));
        let td = TreeDecomposition::new(bags, parent)
            .map_err(|e| Fail(e.to_string()))?
            .rerooted(s);
        let (nice, mapping) = make_nice_mapped(&td).map_err(|e| Fail(e.to_string()))?;
        let r = mapping[s];
        let ch = nice.children();
        if r != nice.root() || ch[r].len() != 1 {
            return fail("auxiliary root does not have a single child");
        }
        let base = self.install(&nice, &ext);
        self.process_branch(base + ch[r][0], map[x[0]], map[x[1]])?;
        self.burn_aux(w1)?;
        self.burn_aux(w2)?;
        self.remove_node(base + r)?;
        let global = |b: &[usize]| -> Vec<usize> { b.iter().map(|&v| map[v]).collect() };
        self.finish(&[global(bu), global(bu1)], comp, &[], "two replaced cliques")?;
        Ok(Outcome::Done)
    }

    /// The root has one leaf child and one deeper child.
    fn deep_root(&mut self, comp: &[usize], t: &RTree, map: &[usize]) -> Step<Outcome> {
        let root = t.root;
        let rc = t.children(root);
        let leaves: Vec<usize> = rc.iter().copied().filter(|&c| t.is_leaf(c)).collect();
        if rc.len() != 2 || leaves.len() != 1 {
            return fail("root does not have one leaf and one deeper child");
        }
        let r1 = leaves[0];
        let w234 = inter(&t.bags[r1], &t.bags[root]);
        let Some(&w5) = minus(&t.bags[root], &t.bags[r1]).first() else {
            return fail("root is inside its leaf child");
        };
        let deepest = (0..t.bags.len())
            .filter(|&k| t.leaf_children(k).len() >= 2)
            .max_by_key(|&k| (t.depth(k), std::cmp::Reverse(k)))
            .ok_or_else(|| Fail("no node with two leaf children".into()))?;
        let lc = t.leaf_children(deepest);
        let (l1, l2) = (lc[0], lc[1]);

        let mut bags = t.bags.clone();
        let mut parent = t.parent.clone();
        let u0 = bags.len();
        let mut b0 = w234.clone();
        b0.push(w5);
        b0.sort_unstable();
        bags.push(b0);
        parent.push(None);
        parent[root] = Some(u0);
        parent[r1] = Some(u0);
        let td = TreeDecomposition::new(bags, parent).map_err(|e| Fail(e.to_string()))?;
        let (nice, mapping): (NiceDecomposition, Vec<usize>) =
            make_nice_mapped(&td).map_err(|e| Fail(e.to_string()))?;
        let (r, mr1) = (mapping[u0], mapping[r1]);
        if r != nice.root() || nice.parent(mr1) != Some(r) {
            return fail("new root lost its leaf child");
        }
        self.marker(EventKind::Reduction, "new root over the leaf child of the root")?;
        let base = self.install(&nice, map);
        self.pair_leaves(t, map, deepest, l1, l2)?;
        self.remove_node(base + mapping[l1])?;
        self.remove_node(base + mapping[l2])?;
        let skip: BTreeSet<usize> = [base + r, base + mr1].into_iter().collect();
        for node in self.core.forest.post_order(base + r) {
            if !skip.contains(&node) {
                self.process_node(node)?;
            }
        }
        self.process_node(base + mr1)?;
        self.finish(&[], comp, &[], "new root")?;
        self.remove_node(base + r)?;
        Ok(Outcome::Done)
    }
}
