//! Branch processing: find an order or a surgery that saves a zloty inside
//! a branch, paying back any debt before the branch ends.

use std::collections::BTreeSet;

use super::ledger::Account;
use super::rules::Rule;
use super::state::{fail, Cursor, Engine, NodeCtx, Pot, Step};
use super::trace::{Event, EventKind};

/// Vertices whose first private appearance may repay the debt.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Watch {
    pub x: BTreeSet<usize>,
}

impl Engine {
    /// Processes the live subtree at `root` as a branch attached through
    /// `alpha` and `beta`. Returns the zlotys saved inside it.
    pub fn process_branch(&mut self, root: usize, alpha: usize, beta: usize) -> Step<i64> {
        self.emit(Event::new(EventKind::BranchBegin).node(root).members(vec![alpha, beta]))?;
        let start = self.snapshot();
        let before = self.saved();
        let nodes = self.core.forest.post_order(root);
        let leaves: Vec<usize> = nodes
            .iter()
            .copied()
            .filter(|&u| self.core.forest.live_children(u).is_empty())
            .collect();
        let mut done = false;
        for &leaf in &leaves {
            if self.try_branch_from(root, leaf, (alpha, beta), before).is_ok()
                && self.saved() - before >= 1
                && self.debt() == 0
            {
                done = true;
                break;
            }
            self.restore(&start);
        }
        if !done {
            for u in nodes {
                self.process_node(u)?;
            }
            if self.debt() != 0 {
                return fail("branch left a debt");
            }
        }
        let gained = self.saved() - before;
        let mut end = Event::new(EventKind::BranchEnd).node(root);
        end.saved = gained;
        self.emit(end)?;
        Ok(gained)
    }

    fn try_branch_from(&mut self, root: usize, leaf: usize, ab: (usize, usize), before: i64) -> Step {
        let mut path = vec![leaf];
        while *path.last().expect("non-empty") != root {
            let u = *path.last().expect("non-empty");
            path.push(self.core.forest.parent[u].ok_or_else(|| super::state::Fail("leaf outside branch".into()))?);
        }
        let on_path: BTreeSet<usize> = path.iter().copied().collect();
        self.process_node(leaf)?;
        if self.saved() > before {
            for u in self.core.forest.post_order(root) {
                self.process_node(u)?;
            }
            return Ok(());
        }
        let off: Vec<usize> = self
            .core
            .forest
            .post_order(root)
            .into_iter()
            .filter(|u| !on_path.contains(u))
            .collect();
        for u in off {
            self.process_node(u)?;
        }
        let mut snaps = Vec::new();
        let mut had_triple = Vec::new();
        for &u in &path[1..] {
            snaps.push(self.snapshot());
            let bag = self.core.forest.bags[u].clone();
            had_triple.push(
                self.core
                    .tuples
                    .values()
                    .any(|t| t.members.len() == 3 && t.members.iter().all(|m| bag.binary_search(m).is_ok())),
            );
            self.process_node(u)?;
        }
        if self.saved() > before && self.debt() == 0 {
            return Ok(());
        }
        let Some(k) = had_triple.iter().rposition(|&h| h) else {
            return fail("no triple reaches the branch path");
        };
        self.restore(&snaps[k]);
        let mut ctx = NodeCtx {
            intercept: Some(ab),
            alpha_beta: Some(ab),
            ..NodeCtx::default()
        };
        for &u in &path[k + 1..] {
            self.process_node_with(u, &mut ctx)?;
            ctx.intercept = None;
        }
        Ok(())
    }

    /// Replaces the B2/B3 removal of `v` at node `u`.
    pub(crate) fn surgery(
        &mut self,
        rule: Rule,
        v: usize,
        u: usize,
        ab: (usize, usize),
        ctx: &mut NodeCtx,
        _cur: &mut Cursor,
    ) -> Step {
        self.emit(
            Event::new(EventKind::Surgery)
                .rule(rule)
                .vertex(v)
                .node(u)
                .reason(format!("replaces {rule}")),
        )?;
        match rule {
            Rule::B2 => self.surgery_pair_triple(v, ab),
            Rule::B3 => self.surgery_two_triples(v, ctx),
            _ => fail("surgery only replaces B2 or B3"),
        }
    }

    fn tuple_accounts(&self, vs: &[usize]) -> Vec<Account> {
        let mut out: Vec<Account> = Vec::new();
        for &v in vs {
            for id in self.tuples_of(v) {
                let a = Account::Tuple(id);
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out
    }

    fn surgery_pair_triple(&mut self, v: usize, (alpha, beta): (usize, usize)) -> Step {
        let pair = self.pairs_of(v)[0];
        let triple = self.triples_of(v)[0];
        let v2 = self.members(pair).into_iter().find(|&m| m != v).expect("pair partner");
        let tri: Vec<usize> = self.members(triple).into_iter().filter(|&m| m != v).collect();
        let own = Account::Vertex(v);
        if tri.contains(&v2) {
            let mut accts = vec![Account::Vertex(v2), own];
            accts.extend(self.tuple_accounts(&[v, v2]));
            let mut pot = self.pot_of(&accts);
            self.pay_red(v2, &mut pot, false)?;
            self.save(&mut pot, "pair partner inside the triple")?;
            self.cease_hit()?;
            return self.remove_vertex(v);
        }
        let v2_other_pair = self.pairs_of(v2).len() >= 2;
        if v2_other_pair {
            let mut accts = vec![Account::Vertex(v2), own];
            accts.extend(self.tuple_accounts(&[v2]));
            let mut pot = self.pot_of(&accts);
            self.pay_red(v2, &mut pot, false)?;
            let mut fresh = Pot::default();
            fresh.add(Account::Tuple(triple), self.balance(Account::Tuple(triple)));
            for (a, x) in pot.drain() {
                fresh.add(a, x);
            }
            self.fund_tuple(tri.clone(), Some(triple), &mut fresh)?;
            self.cease(triple, "converted")?;
            self.save(&mut fresh, "partner paired twice")?;
            self.cease_hit()?;
            return self.remove_vertex(v);
        }
        // v2 is alpha or beta: colour it and one triple vertex whose pair
        // avoids the other attachment vertex.
        let other = if v2 == alpha { beta } else { alpha };
        let partner_of = |e: &Engine, x: usize| -> Option<usize> {
            e.pairs_of(x)
                .first()
                .and_then(|&p| e.members(p).into_iter().find(|&m| m != x))
        };
        let mut cands = tri.clone();
        cands.sort_by_key(|&x| (x == other, partner_of(self, x) == Some(other), x));
        let v1 = cands[0];
        let mut accts = vec![own, Account::Vertex(v1), Account::Vertex(v2)];
        accts.extend(self.tuple_accounts(&[v, v1, v2]));
        let mut pot = self.pot_of(&accts);
        self.pay_red(v2, &mut pot, false)?;
        self.pay_red(v1, &mut pot, false)?;
        self.save(&mut pot, "pair partner is an attachment vertex")?;
        self.cease_hit()?;
        self.remove_vertex(v)
    }

    fn surgery_two_triples(&mut self, v: usize, ctx: &mut NodeCtx) -> Step {
        let ts = self.triples_of(v);
        let a: BTreeSet<usize> = self.members(ts[0]).into_iter().filter(|&m| m != v).collect();
        let b: BTreeSet<usize> = self.members(ts[1]).into_iter().filter(|&m| m != v).collect();
        let own = Account::Vertex(v);
        if let Some(&common) = a.intersection(&b).next() {
            let mut accts = vec![Account::Vertex(common), own];
            accts.extend(self.tuple_accounts(&[v, common]));
            let mut pot = self.pot_of(&accts);
            self.pay_red(common, &mut pot, false)?;
            self.save(&mut pot, "triples share a second vertex")?;
            self.cease_hit()?;
            return self.remove_vertex(v);
        }
        let mut accts = vec![own];
        accts.extend(self.tuple_accounts(&[v]));
        let mut pot = self.pot_of(&accts);
        self.pay_red(v, &mut pot, true)?;
        self.save(&mut pot, "two triples")?;
        self.cease_hit()?;
        self.remove_vertex(v)?;
        if self.debt() > 0 {
            ctx.watch = Some(Watch {
                x: a.union(&b).copied().collect(),
            });
        }
        Ok(())
    }

    /// Runs before each vertex step while a debt is outstanding.
    pub(crate) fn watch_step(&mut self, cur: &mut Cursor, ctx: &mut NodeCtx) -> Step {
        if self.debt() == 0 {
            ctx.watch = None;
            return Ok(());
        }
        let Some(watch) = ctx.watch.clone() else {
            return Ok(());
        };
        let u = cur.node;
        let private = self.private(u);
        let Some(x1) = watch
            .x
            .iter()
            .copied()
            .find(|x| private.contains(x) && !cur.done.contains(x))
        else {
            return Ok(());
        };
        if self.bag_has_red(u) {
            return Ok(());
        }
        let bag = self.alive_bag(u);
        if bag.iter().all(|b| watch.x.contains(b)) {
            if !cur.drop_untupled {
                cur.drop_untupled = true;
            }
            return Ok(());
        }
        let ab = ctx.alpha_beta;
        let ys: Vec<usize> = bag
            .iter()
            .copied()
            .filter(|y| !watch.x.contains(y) && !self.is_red(*y))
            .collect();
        let at = |y: usize| ab.is_some_and(|(a, b)| y == a || y == b);
        if let Some(&y) = ys.iter().find(|&&y| at(y)) {
            let (a, b) = ab.expect("attachment vertices");
            let other = if y == a { b } else { a };
            if !watch.x.contains(&other) {
                let mut accts = vec![Account::Vertex(y)];
                accts.extend(self.tuple_accounts(&[y]));
                accts.extend(watch.x.iter().map(|&x| Account::Vertex(x)));
                let mut pot = self.pot_of(&accts);
                self.emit(
                    Event::new(EventKind::Surgery)
                        .vertex(y)
                        .node(u)
                        .reason("colour attachment vertex"),
                )?;
                self.pay_red(y, &mut pot, false)?;
                self.save(&mut pot, "attachment vertex pays off the debt")?;
                self.cease_hit()?;
            } else {
                let rest: Vec<usize> = watch.x.iter().copied().filter(|&x| x != other).collect();
                let accts: Vec<Account> = rest.iter().map(|&x| Account::Vertex(x)).collect();
                let mut pot = self.pot_of(&accts);
                self.emit(
                    Event::new(EventKind::Surgery)
                        .node(u)
                        .reason("pair the attachment vertices"),
                )?;
                self.fund_tuple(vec![y, other], None, &mut pot)?;
                self.save(&mut pot, "attachment pair pays off the debt")?;
                self.core.exempt.extend(rest);
            }
            ctx.watch = None;
            return Ok(());
        }
        let Some(&y) = ys.iter().find(|&&y| self.pairs_of(y).len() == 1) else {
            return fail("no vertex to carry the debt forward");
        };
        let pair = self.pairs_of(y)[0];
        let y2 = self.members(pair).into_iter().find(|&m| m != y).expect("pair partner");
        if !self.untupled(x1) {
            return fail("watched vertex is in a tuple");
        }
        let mut pot = self.pot_of(&[Account::Vertex(y), Account::Tuple(pair), Account::Vertex(x1)]);
        self.emit(
            Event::new(EventKind::Surgery)
                .vertex(y)
                .node(u)
                .reason("colour paired vertex, carry the debt"),
        )?;
        self.pay_red(y, &mut pot, false)?;
        self.save(&mut pot, "carry")?;
        self.cease_hit()?;
        self.remove_vertex(x1)?;
        cur.done.insert(x1);
        let mut x = watch.x.clone();
        x.remove(&x1);
        x.insert(y2);
        ctx.watch = Some(Watch { x });
        Ok(())
    }
}
