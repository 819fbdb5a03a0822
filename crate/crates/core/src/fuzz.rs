//! Seeded batch runs over random 4-chordal graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::{nice_decomposition, validate_nice};
use crate::engine::{bound, replay_verify, solve, EngineError};
use crate::generators::random_four_chordal_capped;
use crate::graph::{is_chordal, maximal_cliques, maximal_triangles, Graph};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    /// Largest number of decomposition nodes per instance.
    pub nodes: usize,
    pub max_bag: usize,
    pub max_vertices: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: DEFAULT_SEED,
            count: 1000,
            nodes: 40,
            max_bag: 8,
            max_vertices: 60,
        }
    }
}

/// Seed of the `i`-th instance of a run.
pub fn instance_seed(seed: u64, i: usize) -> u64 {
    let mut z = seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `i`-th instance: between 5 and `max_vertices` vertices.
pub fn instance(cfg: &FuzzConfig, i: usize) -> Graph {
    let mut s = instance_seed(cfg.seed, i);
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let nodes = rng.gen_range(1..=cfg.nodes.max(1));
        let max_bag = rng.gen_range(4..=cfg.max_bag.clamp(4, 12));
        let g = random_four_chordal_capped(rng.gen(), nodes, max_bag, Some(cfg.max_vertices))
            .expect("parameters are in range");
        if g.n() >= 5 {
            return g;
        }
        s = s.wrapping_add(1);
    }
}

/// Everything checked on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceOutcome {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub t: usize,
    pub size: usize,
    pub bound: usize,
    pub saved: i64,
    pub within_bound: bool,
    pub replay_ok: bool,
    /// At least `t + 2` branches, each saving a zloty (vacuous for `t = 0`).
    pub branches_ok: bool,
    pub decomposition_ok: bool,
    pub bound_miss: bool,
    pub fallbacks: usize,
    pub error: Option<String>,
}

impl InstanceOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.within_bound && self.replay_ok && self.branches_ok && self.decomposition_ok
    }
}

pub fn check_instance(cfg: &FuzzConfig, index: usize) -> InstanceOutcome {
    let g = instance(cfg, index);
    let t = maximal_triangles(&g).map(|v| v.len()).unwrap_or(0);
    let mut out = InstanceOutcome {
        index,
        seed: instance_seed(cfg.seed, index),
        n: g.n(),
        t,
        size: 0,
        bound: bound(g.n()),
        saved: 0,
        within_bound: false,
        replay_ok: false,
        branches_ok: false,
        decomposition_ok: decomposition_ok(&g),
        bound_miss: false,
        fallbacks: 0,
        error: None,
    };
    match solve(&g) {
        Ok(r) => {
            out.size = r.size();
            out.saved = r.saved;
            out.within_bound = r.bound_ok;
            out.fallbacks = r.fallbacks;
            match replay_verify(&r.trace, &g) {
                Ok(rep) => {
                    out.replay_ok = rep.red == r.red && rep.saved == r.saved;
                    out.branches_ok = t == 0 || (rep.branches.len() >= t + 2 && rep.branches.iter().all(|&s| s >= 1));
                }
                Err(v) => out.error = Some(v.to_string()),
            }
        }
        Err(e) => {
            out.bound_miss = matches!(e, EngineError::BoundMiss { .. });
            out.error = Some(e.to_string());
        }
    }
    out
}

fn decomposition_ok(g: &Graph) -> bool {
    let Ok(peo) = is_chordal(g) else { return false };
    let Ok(cliques) = maximal_cliques(g, &peo) else {
        return false;
    };
    let root = cliques
        .iter()
        .find(|c| c.len() == 3)
        .or_else(|| cliques.iter().find(|c| c.len() >= 4));
    let Some(root) = root else { return false };
    match nice_decomposition(g, root) {
        Ok(d) => validate_nice(&d, g).is_ok(),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub within_bound: usize,
    pub replay_ok: usize,
    pub triangle_instances: usize,
    pub branches_ok: usize,
    pub decomposition_ok: usize,
    pub bound_misses: usize,
    pub fallbacks: usize,
    pub failures: Vec<InstanceOutcome>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&InstanceOutcome> {
        self.failures.first()
    }

    pub fn summary(&self) -> String {
        let c = self.config.count;
        let mut s = format!(
            "{}/{c} within bound\n{}/{c} traces replayed\n{}/{} triangle instances with enough saving branches\n{}/{c} decompositions valid\n{} fallbacks\n",
            self.within_bound,
            self.replay_ok,
            self.branches_ok,
            self.triangle_instances,
            self.decomposition_ok,
            self.fallbacks,
        );
        if let Some(f) = self.first_failure() {
            s.push_str(&format!(
                "first failure: instance {} (seed {}), n = {}, size {} vs bound {}{}\n",
                f.index,
                f.seed,
                f.n,
                f.size,
                f.bound,
                f.error.as_ref().map(|e| format!(": {e}")).unwrap_or_default()
            ));
        }
        s
    }
}

/// Runs every instance on the rayon pool; results are merged by index.
pub fn run_fuzz(cfg: &FuzzConfig) -> FuzzReport {
    let outcomes: Vec<InstanceOutcome> = (0..cfg.count).into_par_iter().map(|i| check_instance(cfg, i)).collect();
    let count = |f: &dyn Fn(&InstanceOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count();
    FuzzReport {
        config: *cfg,
        within_bound: count(&|o| o.within_bound),
        replay_ok: count(&|o| o.replay_ok),
        triangle_instances: count(&|o| o.t > 0),
        branches_ok: count(&|o| o.t > 0 && o.branches_ok),
        decomposition_ok: count(&|o| o.decomposition_ok),
        bound_misses: count(&|o| o.bound_miss),
        fallbacks: outcomes.iter().map(|o| o.fallbacks).sum(),
        failures: outcomes.iter().filter(|o| !o.passed()).cloned().collect(),
    }
}
