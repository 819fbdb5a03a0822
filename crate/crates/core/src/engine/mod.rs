//! The zloty-accounted transversal engine.

mod branch;
pub mod ledger;
pub mod replay;
pub mod rules;
mod state;
mod theorem_a;
mod theorem_b;
pub mod trace;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{connected_components, is_four_chordal, maximal_triangles, FourChordalWitness, Graph};
use crate::oracle::is_transversal;

pub use ledger::{Account, Ledger, LedgerError, Move};
pub use replay::{replay_verify, ReplayReport, ReplayViolation};
pub use rules::{guard, select_rule, Family, Rule, RuleContext, TRIANGLE_RULES, WIDE_RULES};
pub use trace::{Event, EventKind, Trace};

use state::Engine;
use trace::Event as Ev;

/// `floor(2(n-1)/7)`, and 0 for the empty graph.
pub fn bound(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        2 * (n - 1) / 7
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[default]
    Auto,
    ThmA,
    ThmB,
    Basic,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Mode::Auto),
            "thmA" | "thma" => Ok(Mode::ThmA),
            "thmB" | "thmb" => Ok(Mode::ThmB),
            "basic" => Ok(Mode::Basic),
            _ => Err(format!("unknown mode `{s}` (auto, thmA, thmB, basic)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Auto => "auto",
            Mode::ThmA => "thmA",
            Mode::ThmB => "thmB",
            Mode::Basic => "basic",
        })
    }
}

#[derive(Debug, Clone, Error)]
pub enum EngineError {
    #[error("graph is not 4-chordal: {0}")]
    NotFourChordal(FourChordalWitness),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {message}")]
    Internal { message: String, trace: Trace },
    #[error("transversal of size {size} exceeds the bound {bound} for n = {n}")]
    BoundMiss {
        n: usize,
        size: usize,
        bound: usize,
        trace: Trace,
    },
}

impl EngineError {
    pub fn trace(&self) -> Option<&Trace> {
        match self {
            EngineError::Internal { trace, .. } | EngineError::BoundMiss { trace, .. } => Some(trace),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalResult {
    pub red: Vec<usize>,
    pub saved: i64,
    pub trace: Trace,
    pub bound_ok: bool,
    pub n: usize,
    pub t: usize,
    /// Components finished by the exact fallback instead of the drivers.
    pub fallbacks: usize,
}

impl TransversalResult {
    pub fn size(&self) -> usize {
        self.red.len()
    }

    pub fn bound(&self) -> usize {
        bound(self.n)
    }
}

pub fn solve(g: &Graph) -> Result<TransversalResult, EngineError> {
    solve_with_mode(g, Mode::Auto)
}

/// Connected input with a maximal 3-clique and at least five vertices.
pub fn solve_with_triangle(g: &Graph) -> Result<TransversalResult, EngineError> {
    require_connected(g)?;
    solve_with_mode(g, Mode::ThmA)
}

/// Connected input without maximal 3-cliques; `K_4` is accepted and
/// reported with `bound_ok = false`.
pub fn solve_without_triangle(g: &Graph) -> Result<TransversalResult, EngineError> {
    require_connected(g)?;
    if g.n() == 4 {
        return solve_with_mode(g, Mode::Auto);
    }
    solve_with_mode(g, Mode::ThmB)
}

fn require_connected(g: &Graph) -> Result<(), EngineError> {
    if connected_components(g).len() != 1 {
        return Err(EngineError::Precondition("graph is not connected".into()));
    }
    Ok(())
}

pub fn solve_with_mode(g: &Graph, mode: Mode) -> Result<TransversalResult, EngineError> {
    is_four_chordal(g).map_err(EngineError::NotFourChordal)?;
    let triangles: Vec<Vec<usize>> = maximal_triangles(g)
        .expect("4-chordal graphs are chordal")
        .into_iter()
        .map(|c| c.into_vec())
        .collect();
    let n = g.n();
    let t = triangles.len();
    let comps = connected_components(g);
    for comp in &comps {
        if comp.len() < 2 {
            continue;
        }
        let tc = triangles.iter().filter(|tr| comp.binary_search(&tr[0]).is_ok()).count();
        let bad = match mode {
            Mode::ThmA => tc == 0 || comp.len() < 5,
            Mode::ThmB => tc > 0 || comp.len() < 5,
            _ => false,
        };
        if bad {
            return Err(EngineError::Precondition(format!(
                "component of {} vertices with {tc} maximal 3-cliques does not fit mode {mode}",
                comp.len()
            )));
        }
    }

    let mut e = Engine::new(g, &triangles);
    let internal = |e: &Engine, message: String| EngineError::Internal {
        message,
        trace: Trace {
            events: e.trace.clone(),
        },
    };
    let mut init = Ev::new(EventKind::Init);
    init.n = Some(n);
    init.t = Some(t);
    init.triangles = Some(triangles.clone());
    e.emit(init).map_err(|f| internal(&e, f.0))?;

    for comp in &comps {
        if let Err(f) = solve_component(&mut e, comp, mode) {
            return Err(internal(&e, f.0));
        }
    }
    e.emit(Ev::new(EventKind::Finish)).map_err(|f| internal(&e, f.0))?;

    let red: Vec<usize> = (0..n).filter(|&v| e.core.red[v]).collect();
    if let Err(c) = is_transversal(g, &red) {
        return Err(internal(&e, format!("red set misses clique {c}")));
    }
    for h in &e.reduced {
        let (hh, _) = h.induced_subgraph(&(0..n).collect::<Vec<_>>());
        if let Err(c) = is_transversal(&hh, &red) {
            return Err(internal(&e, format!("red set misses clique {c} of a reduced graph")));
        }
    }
    let ledger = &e.core.ledger;
    if ledger.held() != 0 || ledger.debt() != 0 || !ledger.conserved() {
        return Err(internal(&e, "ledger not settled at the end".into()));
    }
    let trace = Trace { events: e.trace };
    let size = red.len();
    let bound_ok = size <= bound(n);
    if n >= 5 && !bound_ok && mode != Mode::Basic {
        return Err(EngineError::BoundMiss {
            n,
            size,
            bound: bound(n),
            trace,
        });
    }
    Ok(TransversalResult {
        red,
        saved: ledger.saved(),
        trace,
        bound_ok,
        n,
        t,
        fallbacks: e.fallbacks,
    })
}

fn solve_component(e: &mut Engine, comp: &[usize], mode: Mode) -> state::Step {
    if comp.len() == 1 {
        return e.drop_vertex(comp[0], "isolated vertex");
    }
    let has_triangle = e.triangle_of.keys().any(|tr| comp.binary_search(&tr[0]).is_ok());
    if comp.len() <= 4 || mode == Mode::Basic {
        return e.run_basic(comp);
    }
    let done = if has_triangle {
        e.run_theorem_a(comp)?
    } else {
        e.run_theorem_b(comp)?
    };
    if !done {
        e.run_fallback(comp)?;
    }
    Ok(())
}
