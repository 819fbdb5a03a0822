//! Mutable engine state, zloty primitives and the per-node rule driver.

use std::collections::{BTreeMap, BTreeSet};

use crate::decomp::TreeDecomposition;
use crate::graph::Graph;

use super::ledger::{Account, Ledger, LedgerError, Move};
use super::rules::{select_rule, Family, Rule, RuleContext};
use super::trace::{Event, EventKind};

/// A recoverable failure inside a driver strategy; the caller rolls back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Fail(pub String);

impl From<LedgerError> for Fail {
    fn from(e: LedgerError) -> Self {
        Fail(format!("ledger: {e}"))
    }
}

pub(crate) type Step<T = ()> = Result<T, Fail>;

pub(crate) fn fail<T>(msg: impl Into<String>) -> Step<T> {
    Err(Fail(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Tuple {
    pub members: Vec<usize>,
    pub lineage: Option<u32>,
}

/// Every decomposition node ever installed, under solve-wide ids.
#[derive(Clone, Debug, Default)]
pub(crate) struct Forest {
    pub bags: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub alive: Vec<bool>,
}

impl Forest {
    /// Adds `td`, relabelling bag entries through `map`; returns the id
    /// offset of its nodes.
    pub fn install(&mut self, td: &TreeDecomposition, map: &[usize]) -> usize {
        let base = self.bags.len();
        for u in 0..td.len() {
            let mut bag: Vec<usize> = td.bag(u).iter().map(|&v| map[v]).collect();
            bag.sort_unstable();
            self.bags.push(bag);
            self.parent.push(td.parent(u).map(|p| p + base));
            self.children.push(Vec::new());
            self.alive.push(true);
        }
        for u in base..self.bags.len() {
            if let Some(p) = self.parent[u] {
                self.children[p].push(u);
            }
        }
        base
    }

    /// Live nodes of the subtree at `root`, children before parents.
    pub fn post_order(&self, root: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((u, expanded)) = stack.pop() {
            if !self.alive[u] {
                continue;
            }
            if expanded {
                out.push(u);
            } else {
                stack.push((u, true));
                for &c in self.children[u].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    pub fn live_children(&self, u: usize) -> Vec<usize> {
        self.children[u].iter().copied().filter(|&c| self.alive[c]).collect()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Core {
    pub red: Vec<bool>,
    pub alive: Vec<bool>,
    pub aux: Vec<bool>,
    pub tuples: BTreeMap<u32, Tuple>,
    pub next_tuple: u32,
    pub ledger: Ledger,
    pub forest: Forest,
    /// Vertices to be dropped without a rule when their node is processed.
    pub exempt: BTreeSet<usize>,
}

pub(crate) struct Snapshot {
    core: Core,
    len: usize,
    work: Graph,
    reduced: usize,
}

pub(crate) struct Engine {
    pub core: Core,
    pub trace: Vec<Event>,
    /// Maximal 3-cliques (sorted) to their node-fund index.
    pub triangle_of: BTreeMap<Vec<usize>, usize>,
    pub fallbacks: usize,
    /// Current graph, after reductions; aux vertices are appended.
    pub work: Graph,
    /// Every modified graph, for end-of-solve validation.
    pub reduced: Vec<Graph>,
}

/// Zlotys gathered for one operation, spent front to back.
#[derive(Clone, Debug, Default)]
pub(crate) struct Pot {
    items: Vec<(Account, i64)>,
}

impl Pot {
    pub fn add(&mut self, a: Account, amount: i64) {
        if amount <= 0 {
            return;
        }
        if let Some(slot) = self.items.iter_mut().find(|(x, _)| *x == a) {
            slot.1 += amount;
        } else {
            self.items.push((a, amount));
        }
    }

    pub fn total(&self) -> i64 {
        self.items.iter().map(|(_, x)| x).sum()
    }

    /// Takes `amount`, draining `first` before the others.
    pub fn take(&mut self, amount: i64, first: Option<Account>) -> Option<Vec<(Account, i64)>> {
        if self.total() < amount {
            return None;
        }
        if let Some(f) = first {
            if let Some(pos) = self.items.iter().position(|(a, _)| *a == f) {
                let item = self.items.remove(pos);
                self.items.insert(0, item);
            }
        }
        let mut out = Vec::new();
        let mut left = amount;
        while left > 0 {
            let (a, x) = self.items[0];
            let t = x.min(left);
            out.push((a, t));
            left -= t;
            if t == x {
                self.items.remove(0);
            } else {
                self.items[0].1 -= t;
            }
        }
        Some(out)
    }

    pub fn drain(&mut self) -> Vec<(Account, i64)> {
        std::mem::take(&mut self.items)
    }
}

fn moves_to(parts: Vec<(Account, i64)>, to: Account) -> Vec<Move> {
    parts
        .into_iter()
        .map(|(from, amount)| Move { from, to, amount })
        .collect()
}

/// Which vertex of a node comes next.
pub(crate) struct Cursor {
    pub node: usize,
    private: Vec<usize>,
    pub done: BTreeSet<usize>,
    triangle: bool,
    first_done: bool,
    /// Untupled non-red vertices are dropped with their funds saved.
    pub drop_untupled: bool,
}

/// Per-node options and observations used by the branch processor.
#[derive(Clone, Debug, Default)]
pub(crate) struct NodeCtx {
    /// Replace the first B2/B3 application with the branch surgery.
    pub intercept: Option<(usize, usize)>,
    pub watch: Option<super::branch::Watch>,
    pub alpha_beta: Option<(usize, usize)>,
    /// First vertex that B2 or B3 was selected for.
    pub first_bad: Option<usize>,
}

impl Engine {
    pub fn new(g: &Graph, triangles: &[Vec<usize>]) -> Self {
        let n = g.n();
        let triangle_of = triangles.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
        Engine {
            core: Core {
                red: vec![false; n],
                alive: vec![true; n],
                aux: vec![false; n],
                tuples: BTreeMap::new(),
                next_tuple: 0,
                ledger: Ledger::new(n, triangles.len()),
                forest: Forest::default(),
                exempt: BTreeSet::new(),
            },
            trace: Vec::new(),
            triangle_of,
            fallbacks: 0,
            work: g.clone(),
            reduced: Vec::new(),
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            core: self.core.clone(),
            len: self.trace.len(),
            work: self.work.clone(),
            reduced: self.reduced.len(),
        }
    }

    pub fn restore(&mut self, s: &Snapshot) {
        self.core = s.core.clone();
        self.trace.truncate(s.len);
        self.work = s.work.clone();
        self.reduced.truncate(s.reduced);
    }

    pub fn install(&mut self, td: &TreeDecomposition, map: &[usize]) -> usize {
        self.core.forest.install(td, map)
    }

    /// New vertex outside the input graph, funded from the aux account.
    pub fn mint_aux(&mut self) -> Step<usize> {
        let w = self.work.add_vertex();
        self.core.red.push(false);
        self.core.alive.push(true);
        self.core.aux.push(true);
        self.emit(Event::new(EventKind::AuxMinted).vertex(w).moves(vec![Move {
            from: Account::Aux,
            to: Account::Vertex(w),
            amount: 2,
        }]))?;
        Ok(w)
    }

    pub fn burn_aux(&mut self, w: usize) -> Step {
        if !self.core.aux[w] || self.balance(Account::Vertex(w)) != 2 || !self.untupled(w) {
            return fail(format!("aux vertex {w} is not intact"));
        }
        self.emit(Event::new(EventKind::AuxBurned).vertex(w).moves(vec![Move {
            from: Account::Vertex(w),
            to: Account::Aux,
            amount: 2,
        }]))?;
        self.core.alive[w] = false;
        self.work.isolate(w);
        Ok(())
    }

    pub fn saved(&self) -> i64 {
        self.core.ledger.saved()
    }

    pub fn debt(&self) -> i64 {
        self.core.ledger.debt()
    }

    pub fn balance(&self, a: Account) -> i64 {
        self.core.ledger.balance(a)
    }

    pub fn emit(&mut self, mut e: Event) -> Step {
        for m in &e.moves {
            self.core.ledger.apply(m)?;
        }
        e.i = self.trace.len();
        self.trace.push(e);
        Ok(())
    }

    pub fn marker(&mut self, kind: EventKind, reason: impl Into<String>) -> Step {
        self.emit(Event::new(kind).reason(reason))
    }

    pub fn is_red(&self, v: usize) -> bool {
        self.core.red[v]
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.core.alive[v]
    }

    pub fn tuples_of(&self, v: usize) -> Vec<u32> {
        self.core
            .tuples
            .iter()
            .filter(|(_, t)| t.members.contains(&v))
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn pairs_of(&self, v: usize) -> Vec<u32> {
        self.tuples_of(v)
            .into_iter()
            .filter(|id| self.core.tuples[id].members.len() == 2)
            .collect()
    }

    pub fn triples_of(&self, v: usize) -> Vec<u32> {
        self.tuples_of(v)
            .into_iter()
            .filter(|id| self.core.tuples[id].members.len() == 3)
            .collect()
    }

    pub fn members(&self, id: u32) -> Vec<usize> {
        self.core.tuples[&id].members.clone()
    }

    pub fn untupled(&self, v: usize) -> bool {
        !self.core.tuples.values().any(|t| t.members.contains(&v))
    }

    pub fn node_account(&self, u: usize) -> Option<Account> {
        let bag = &self.core.forest.bags[u];
        if bag.len() != 3 {
            return None;
        }
        self.triangle_of.get(bag).map(|&k| Account::Node(k))
    }

    pub fn rule_context(&self, v: usize, bag: &[usize]) -> RuleContext {
        let pairs = self.pairs_of(v);
        let triples = self.triples_of(v);
        let partner_in_other_tuple = pairs.len() == 1 && {
            let m = self.members(pairs[0]);
            let partner = if m[0] == v { m[1] } else { m[0] };
            self.tuples_of(partner).len() >= 2
        };
        RuleContext {
            v_red: self.is_red(v),
            pairs: pairs.len(),
            triples: triples.len(),
            partner_in_other_tuple,
            other_red_in_bag: bag.iter().any(|&w| w != v && self.is_red(w)),
        }
    }

    pub fn bag_has_red(&self, u: usize) -> bool {
        self.core.forest.bags[u].iter().any(|&w| self.is_red(w))
    }

    pub fn alive_bag(&self, u: usize) -> Vec<usize> {
        self.core.forest.bags[u]
            .iter()
            .copied()
            .filter(|&w| self.is_alive(w))
            .collect()
    }

    /// Alive vertices of `u` that no other live node contains.
    pub fn private(&self, u: usize) -> Vec<usize> {
        let f = &self.core.forest;
        let parent_bag: &[usize] = match f.parent[u] {
            Some(p) if f.alive[p] => &f.bags[p],
            _ => &[],
        };
        f.bags[u]
            .iter()
            .copied()
            .filter(|&w| self.is_alive(w) && parent_bag.binary_search(&w).is_err())
            .collect()
    }

    /// Adds every account in `accts` at its full balance.
    pub fn pot_of(&self, accts: &[Account]) -> Pot {
        let mut pot = Pot::default();
        for &a in accts {
            pot.add(a, self.balance(a));
        }
        pot
    }

    /// Colours `v`, paying 7 from `pot` (6 and one zloty of debt if allowed).
    pub fn pay_red(&mut self, v: usize, pot: &mut Pot, allow_debt: bool) -> Step {
        if !self.is_alive(v) || self.is_red(v) {
            return fail(format!("cannot colour vertex {v}"));
        }
        let own = Account::Vertex(v);
        let (parts, debt) = match pot.take(7, Some(own)) {
            Some(p) => (p, false),
            None if allow_debt && self.debt() == 0 => match pot.take(6, Some(own)) {
                Some(p) => (p, true),
                None => return fail("not enough zlotys even with debt"),
            },
            None => return fail(format!("not enough zlotys to colour {v}")),
        };
        let mut moves = moves_to(parts, Account::Paid);
        if debt {
            moves.push(Move {
                from: Account::Debt,
                to: Account::Paid,
                amount: 1,
            });
        }
        // Anything the vertex still holds goes back into the pot.
        let left = self.balance(own) - moves.iter().filter(|m| m.from == own).map(|m| m.amount).sum::<i64>();
        self.emit(Event::new(EventKind::Colored).vertex(v).moves(moves))?;
        self.core.red[v] = true;
        if debt {
            self.emit(Event::new(EventKind::DebtIncurred).vertex(v))?;
        }
        if left > 0 {
            return fail(format!("red vertex {v} still holds {left}"));
        }
        Ok(())
    }

    pub fn fund_tuple(&mut self, members: Vec<usize>, lineage: Option<u32>, pot: &mut Pot) -> Step<u32> {
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        let amount = match members.len() {
            2 => 3,
            3 => 2,
            k => return fail(format!("tuple of size {k}")),
        };
        if members.iter().any(|&m| !self.is_alive(m) || self.is_red(m)) {
            return fail(format!("tuple {members:?} has a dead or red member"));
        }
        let Some(parts) = pot.take(amount, None) else {
            return fail("not enough zlotys for a tuple");
        };
        let id = self.core.next_tuple;
        self.core.next_tuple += 1;
        let ev = Event::new(EventKind::TupleCreated)
            .tuple(id)
            .members(members.clone())
            .lineage(lineage)
            .moves(moves_to(parts, Account::Tuple(id)));
        self.core.tuples.insert(id, Tuple { members, lineage });
        self.emit(ev)?;
        Ok(id)
    }

    /// Saves what is left in `pot`, repaying debt first.
    pub fn save(&mut self, pot: &mut Pot, reason: &str) -> Step {
        let debt = self.debt();
        if debt > 0 && pot.total() > 0 {
            let x = debt.min(pot.total());
            let parts = pot.take(x, None).expect("enough");
            self.emit(
                Event::new(EventKind::DebtRepaid)
                    .reason(reason)
                    .moves(moves_to(parts, Account::Debt)),
            )?;
        }
        let parts = pot.drain();
        if !parts.is_empty() {
            self.emit(
                Event::new(EventKind::Saved)
                    .reason(reason)
                    .moves(moves_to(parts, Account::Saved)),
            )?;
        }
        Ok(())
    }

    pub fn cease(&mut self, id: u32, reason: &str) -> Step {
        if self.balance(Account::Tuple(id)) != 0 {
            return fail(format!("tuple {id} ceases with funds"));
        }
        self.core.tuples.remove(&id);
        self.emit(Event::new(EventKind::TupleCeased).tuple(id).reason(reason))
    }

    /// Ceases every tuple that now has a red member.
    pub fn cease_hit(&mut self) -> Step {
        let hit: Vec<u32> = self
            .core
            .tuples
            .iter()
            .filter(|(_, t)| t.members.iter().any(|&m| self.core.red[m]))
            .map(|(&id, _)| id)
            .collect();
        for id in hit {
            self.cease(id, "hit")?;
        }
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: usize) -> Step {
        if !self.is_alive(v) {
            return fail(format!("vertex {v} already removed"));
        }
        if self.balance(Account::Vertex(v)) != 0 {
            return fail(format!("vertex {v} removed with funds"));
        }
        if !self.untupled(v) {
            return fail(format!("vertex {v} removed while in a tuple"));
        }
        self.core.alive[v] = false;
        self.emit(Event::new(EventKind::Removed).vertex(v))
    }

    /// Saves a vertex's funds and removes it.
    pub fn drop_vertex(&mut self, v: usize, reason: &str) -> Step {
        let mut pot = self.pot_of(&[Account::Vertex(v)]);
        self.save(&mut pot, reason)?;
        self.remove_vertex(v)
    }

    pub fn remove_node(&mut self, u: usize) -> Step {
        if let Some(a) = self.node_account(u) {
            let mut pot = self.pot_of(&[a]);
            self.save(&mut pot, "node teardown")?;
        }
        self.core.forest.alive[u] = false;
        let bag = self.core.forest.bags[u].clone();
        self.emit(Event::new(EventKind::Removed).node(u).bag(bag))
    }

    /// Applies `rule` to `v` at node `u` and removes `v`.
    pub fn apply_rule(&mut self, rule: Rule, v: usize, u: usize) -> Step {
        let bag = self.core.forest.bags[u].clone();
        self.emit(
            Event::new(EventKind::Rule)
                .rule(rule)
                .vertex(v)
                .node(u)
                .bag(bag.clone()),
        )?;
        let own = Account::Vertex(v);
        let node_acct = self.node_account(u);
        let tag = rule.to_string();
        match rule {
            Rule::B1 | Rule::T1 => {}
            Rule::G1 | Rule::G2 | Rule::B2 | Rule::T2 => {
                let mut accts = vec![own];
                accts.extend(self.tuples_of(v).into_iter().map(Account::Tuple));
                if rule == Rule::T2 {
                    accts.extend(node_acct);
                }
                let mut pot = self.pot_of(&accts);
                self.pay_red(v, &mut pot, false)?;
                self.save(&mut pot, &tag)?;
                self.cease_hit()?;
            }
            Rule::B3 => {
                for tid in self.triples_of(v) {
                    let rest: Vec<usize> = self.members(tid).into_iter().filter(|&m| m != v).collect();
                    let mut pot = Pot::default();
                    pot.add(Account::Tuple(tid), self.balance(Account::Tuple(tid)));
                    pot.add(own, 1);
                    self.fund_tuple(rest, Some(tid), &mut pot)?;
                    self.cease(tid, "converted")?;
                }
            }
            Rule::G3 => {
                let tid = self.triples_of(v)[0];
                let rest: Vec<usize> = self.members(tid).into_iter().filter(|&m| m != v).collect();
                let mut pot = Pot::default();
                pot.add(Account::Tuple(tid), self.balance(Account::Tuple(tid)));
                pot.add(own, 1);
                self.fund_tuple(rest, Some(tid), &mut pot)?;
                self.cease(tid, "converted")?;
                let mut pot = self.pot_of(&[own]);
                self.save(&mut pot, &tag)?;
            }
            Rule::G4 | Rule::B4 | Rule::T3 => {
                let tid = self.tuples_of(v)[0];
                let partner = self
                    .members(tid)
                    .into_iter()
                    .find(|&m| m != v)
                    .expect("tuple has another member");
                let mut accts = vec![own, Account::Vertex(partner)];
                accts.extend(self.tuples_of(partner).into_iter().map(Account::Tuple));
                if rule == Rule::T3 {
                    accts.extend(node_acct);
                }
                let mut pot = self.pot_of(&accts);
                self.pay_red(partner, &mut pot, false)?;
                self.save(&mut pot, &tag)?;
                self.cease_hit()?;
            }
            Rule::G5 => {
                let mut pot = self.pot_of(&[own]);
                self.save(&mut pot, &tag)?;
            }
            Rule::T4 => {
                let mut accts = vec![own];
                accts.extend(node_acct);
                let mut pot = self.pot_of(&accts);
                self.save(&mut pot, &tag)?;
            }
            Rule::B5 => {
                let mut others: Vec<usize> = bag.iter().copied().filter(|&w| w != v && self.is_alive(w)).collect();
                others.sort_by_key(|&w| (self.core.exempt.contains(&w), !self.untupled(w), w));
                if others.len() < 3 {
                    // Too few live vertices left for a triple. If a live tuple
                    // already sits inside what is left of the bag, it hits
                    // every clique through v, so v's funds are saved.
                    let covered = self
                        .core
                        .tuples
                        .values()
                        .any(|t| t.members.iter().all(|m| others.contains(m)));
                    if !covered {
                        return fail(format!("B5 at node {u} needs three other vertices"));
                    }
                    self.emit(
                        Event::new(EventKind::Surgery)
                            .vertex(v)
                            .node(u)
                            .reason("drop vertex covered by a live tuple"),
                    )?;
                    let mut pot = self.pot_of(&[own]);
                    self.save(&mut pot, "covered by a live tuple")?;
                    return self.remove_vertex(v);
                }
                let mut pot = self.pot_of(&[own]);
                self.fund_tuple(others[..3].to_vec(), None, &mut pot)?;
            }
            Rule::T5 => {
                let others: Vec<usize> = bag.iter().copied().filter(|&w| w != v).collect();
                let mut accts = vec![own];
                accts.extend(node_acct);
                let mut pot = self.pot_of(&accts);
                self.fund_tuple(others, None, &mut pot)?;
            }
        }
        self.remove_vertex(v)
    }

    pub fn cursor(&self, u: usize) -> Cursor {
        Cursor {
            node: u,
            private: self.private(u),
            done: BTreeSet::new(),
            triangle: self.core.forest.bags[u].len() == 3,
            first_done: false,
            drop_untupled: false,
        }
    }

    /// Next vertex of the node and the rule family to use for it.
    pub fn next_vertex(&self, c: &mut Cursor) -> Option<(usize, Family)> {
        let pending: Vec<usize> = c
            .private
            .iter()
            .copied()
            .filter(|v| !c.done.contains(v) && self.is_alive(*v))
            .collect();
        let first = *pending.first()?;
        if c.triangle {
            if !c.first_done {
                c.first_done = true;
                return Some((first, Family::Triangle));
            }
            return Some((first, Family::Wide));
        }
        let fresh = pending.iter().copied().find(|&v| !self.is_red(v) && self.untupled(v));
        Some((fresh.unwrap_or(first), Family::Wide))
    }

    pub fn process_node(&mut self, u: usize) -> Step {
        let mut ctx = NodeCtx::default();
        self.process_node_with(u, &mut ctx)
    }

    pub fn process_node_with(&mut self, u: usize, ctx: &mut NodeCtx) -> Step {
        if !self.core.forest.alive[u] {
            return fail(format!("node {u} already removed"));
        }
        if !self.core.forest.live_children(u).is_empty() {
            return fail(format!("node {u} still has children"));
        }
        let mut cur = self.cursor(u);
        loop {
            if ctx.watch.is_some() {
                self.watch_step(&mut cur, ctx)?;
            }
            let Some((v, fam)) = self.next_vertex(&mut cur) else {
                break;
            };
            cur.done.insert(v);
            if self.core.exempt.contains(&v) {
                self.drop_exempt(v)?;
                continue;
            }
            if cur.drop_untupled && !self.is_red(v) && self.untupled(v) {
                self.marker(EventKind::Surgery, "clique of this node is not maximal")?;
                self.drop_vertex(v, "non-maximal clique")?;
                continue;
            }
            let bag = self.core.forest.bags[u].clone();
            let c = self.rule_context(v, &bag);
            let Some(rule) = select_rule(fam, &c) else {
                return fail(format!("no rule applies to {v}"));
            };
            if matches!(rule, Rule::B2 | Rule::B3) {
                if ctx.first_bad.is_none() {
                    ctx.first_bad = Some(v);
                }
                if let Some(ab) = ctx.intercept.take() {
                    self.surgery(rule, v, u, ab, ctx, &mut cur)?;
                    continue;
                }
            }
            self.apply_rule(rule, v, u)?;
        }
        if ctx.watch.is_some() {
            self.watch_step(&mut cur, ctx)?;
        }
        self.remove_node(u)
    }

    fn drop_exempt(&mut self, v: usize) -> Step {
        if self.is_red(v) || !self.untupled(v) || self.balance(Account::Vertex(v)) != 0 {
            return fail(format!("exempt vertex {v} is not free to drop"));
        }
        self.core.exempt.remove(&v);
        self.emit(
            Event::new(EventKind::Surgery)
                .vertex(v)
                .reason("drop vertex covered by the alpha-beta pair"),
        )?;
        self.remove_vertex(v)
    }

    /// Colours a minimum set of vertices in `scope` hitting every unhit
    /// clique in `obligations`, every live clique contained in `scope` and
    /// every live tuple, paying from all funds
    /// left in `scope`, the live tuples and `node_accts`; saves the rest and
    /// removes `scope`.
    pub fn finish(
        &mut self,
        obligations: &[Vec<usize>],
        scope: &[usize],
        node_accts: &[Account],
        reason: &str,
    ) -> Step {
        self.marker(EventKind::Reduction, format!("finisher: {reason}"))?;
        let live: Vec<usize> = scope.iter().copied().filter(|&v| self.is_alive(v)).collect();
        let mut sets: Vec<Vec<usize>> = Vec::new();
        // Everything in scope is removed, so a clique left there counts unless
        // a red vertex or a live one outside scope extends it.
        let left: Vec<Vec<usize>> = self
            .live_cliques(scope)?
            .into_iter()
            .filter(|c| {
                !self.work.neighbors(c[0]).any(|x| {
                    (self.is_red(x) || (self.is_alive(x) && !scope.contains(&x)))
                        && c.iter().all(|&v| self.work.has_edge(v, x))
                })
            })
            .collect();
        for o in obligations.iter().chain(&left) {
            if o.iter().any(|&v| self.is_red(v)) {
                continue;
            }
            sets.push(o.iter().copied().filter(|&v| self.is_alive(v)).collect());
        }
        for t in self.core.tuples.values() {
            sets.push(t.members.clone());
        }
        let candidates: BTreeSet<usize> = live
            .iter()
            .copied()
            .filter(|&v| !self.is_red(v) && !self.core.aux[v])
            .collect();
        for s in &sets {
            if !s.iter().any(|v| candidates.contains(v)) {
                return fail(format!("finisher cannot hit {s:?}"));
            }
        }
        let sets: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|s| s.into_iter().filter(|v| candidates.contains(v)).collect())
            .collect();
        let hitting = min_hitting_set(&sets);
        let mut accts: Vec<Account> = live.iter().map(|&v| Account::Vertex(v)).collect();
        accts.extend(self.core.tuples.keys().map(|&id| Account::Tuple(id)));
        accts.extend(node_accts.iter().copied());
        let mut pot = self.pot_of(&accts);
        for &h in &hitting {
            self.pay_red(h, &mut pot, false)?;
        }
        self.save(&mut pot, reason)?;
        let ids: Vec<u32> = self.core.tuples.keys().copied().collect();
        for id in ids {
            self.cease(id, "hit")?;
        }
        for v in live {
            self.remove_vertex(v)?;
        }
        Ok(())
    }
}

/// Smallest set meeting every set in `sets`; iterative deepening that
/// branches on the smallest unmet set, bounded by a disjoint packing.
pub(crate) fn min_hitting_set(sets: &[Vec<usize>]) -> Vec<usize> {
    fn go(sets: &[Vec<usize>], budget: usize, chosen: &mut Vec<usize>) -> bool {
        let mut open: Vec<&Vec<usize>> = sets.iter().filter(|s| !s.iter().any(|v| chosen.contains(v))).collect();
        if open.is_empty() {
            return true;
        }
        if budget == 0 {
            return false;
        }
        open.sort_by_key(|s| s.len());
        let mut used: BTreeSet<usize> = BTreeSet::new();
        let mut packing = 0;
        for s in &open {
            if s.iter().all(|v| !used.contains(v)) {
                packing += 1;
                used.extend(s.iter().copied());
            }
        }
        if packing > budget {
            return false;
        }
        for &v in open[0].iter() {
            chosen.push(v);
            if go(sets, budget - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    for budget in 0.. {
        let mut chosen = Vec::new();
        if go(sets, budget, &mut chosen) {
            chosen.sort_unstable();
            return chosen;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pot_prefers_own_account() {
        let mut pot = Pot::default();
        pot.add(Account::Tuple(0), 3);
        pot.add(Account::Vertex(1), 2);
        pot.add(Account::Vertex(2), 2);
        let parts = pot.take(4, Some(Account::Vertex(1))).unwrap();
        assert_eq!(parts, vec![(Account::Vertex(1), 2), (Account::Tuple(0), 2)]);
        assert_eq!(pot.total(), 3);
        assert!(pot.take(4, None).is_none());
    }

    #[test]
    fn hitting_sets() {
        assert_eq!(min_hitting_set(&[]), Vec::<usize>::new());
        assert_eq!(min_hitting_set(&[vec![1, 2], vec![2, 3]]), vec![2]);
        assert_eq!(min_hitting_set(&[vec![1], vec![3], vec![1, 3]]), vec![1, 3]);
    }
}
