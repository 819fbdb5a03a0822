//! Plain rule processing, the triangle driver, and the exact fallback.

use std::collections::BTreeMap;

use crate::decomp::{find_branches, make_nice, maximal_clique_tree, nice_decomposition};
use crate::graph::{connected_components, is_chordal, maximal_cliques, Clique, Graph};

use super::ledger::Account;
use super::state::{fail, Engine, Fail, Step};
use super::trace::EventKind;

impl Engine {
    /// Alive vertices of `comp` and the work graph they induce.
    pub(crate) fn live_view(&self, comp: &[usize]) -> (Graph, Vec<usize>) {
        let live: Vec<usize> = comp.iter().copied().filter(|&v| self.is_alive(v)).collect();
        self.work.induced_subgraph(&live)
    }

    pub(crate) fn live_cliques(&self, comp: &[usize]) -> Step<Vec<Vec<usize>>> {
        let (h, map) = self.live_view(comp);
        let peo = is_chordal(&h).map_err(|c| Fail(format!("work graph lost chordality at {c:?}")))?;
        let cliques = maximal_cliques(&h, &peo).map_err(|e| Fail(e.to_string()))?;
        Ok(cliques
            .into_iter()
            .filter(|c| c.len() >= 2)
            .map(|c| {
                let mut b: Vec<usize> = c.vertices().iter().map(|&v| map[v]).collect();
                b.sort_unstable();
                b
            })
            .collect())
    }

    /// Funds of the triangle nodes inside `comp`.
    pub(crate) fn node_accounts_in(&self, comp: &[usize]) -> Vec<Account> {
        self.triangle_of
            .iter()
            .filter(|(t, _)| t.iter().all(|v| comp.binary_search(v).is_ok()))
            .map(|(_, &k)| Account::Node(k))
            .collect()
    }

    /// Processes whatever is left of `comp` with the rules alone.
    pub fn run_basic(&mut self, comp: &[usize]) -> Step {
        let (h, map) = self.live_view(comp);
        for part in connected_components(&h) {
            if part.len() == 1 {
                self.drop_vertex(map[part[0]], "isolated vertex")?;
                continue;
            }
            let (hp, local) = h.induced_subgraph(&part);
            let labels: Vec<usize> = local.iter().map(|&x| map[x]).collect();
            let peo = is_chordal(&hp).map_err(|c| Fail(format!("not chordal at {c:?}")))?;
            let td = maximal_clique_tree(&hp, &peo).map_err(|e| Fail(e.to_string()))?;
            let nice = make_nice(&td).map_err(|e| Fail(e.to_string()))?;
            let base = self.install(&nice, &labels);
            for u in self.core.forest.post_order(base + nice.root()) {
                self.process_node(u)?;
            }
        }
        Ok(())
    }

    /// Colours a minimum transversal of what is left of `comp` from all of
    /// its remaining funds.
    pub fn run_fallback(&mut self, comp: &[usize]) -> Step {
        self.fallbacks += 1;
        let cliques = self.live_cliques(comp)?;
        let accts = self.node_accounts_in(comp);
        self.finish(&cliques, comp, &accts, "fallback")
    }

    /// Triangle driver: one root triangle after another until one run saves
    /// `t + 2` zlotys. Returns whether that happened; on `false` nothing was
    /// changed.
    pub fn run_theorem_a(&mut self, comp: &[usize]) -> Step<bool> {
        let (h, map) = self.live_view(comp);
        let mut local_of = BTreeMap::new();
        for (i, &v) in map.iter().enumerate() {
            local_of.insert(v, i);
        }
        let triangles: Vec<Vec<usize>> = self
            .triangle_of
            .keys()
            .filter(|t| t.iter().all(|v| local_of.contains_key(v)))
            .cloned()
            .collect();
        let t = triangles.len() as i64;
        if t == 0 {
            return fail("no maximal 3-clique in this component");
        }
        let start = self.snapshot();
        let before = self.saved();
        for tri in &triangles {
            let root = Clique::new(tri.iter().map(|v| local_of[v]));
            let Ok(nice) = nice_decomposition(&h, &root) else {
                continue;
            };
            let branches = find_branches(&nice);
            if (branches.len() as i64) < t + 2 {
                continue;
            }
            self.marker(
                EventKind::Reduction,
                format!("triangle root {tri:?}, {} branches", branches.len()),
            )?;
            let base = self.install(&nice, &map);
            let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
            for (i, b) in branches.iter().enumerate() {
                for &u in &b.nodes {
                    owner.insert(base + u, i);
                }
            }
            let run = (|| -> Step {
                for u in self.core.forest.post_order(base + nice.root()) {
                    match owner.get(&u) {
                        Some(&i) if branches[i].root_node + base == u => {
                            let b = &branches[i];
                            self.process_branch(u, map[b.alpha], map[b.beta])?;
                        }
                        Some(_) => {}
                        None => self.process_node(u)?,
                    }
                }
                Ok(())
            })();
            if run.is_ok() && self.saved() - before >= t + 2 {
                return Ok(true);
            }
            self.restore(&start);
        }
        Ok(false)
    }
}
