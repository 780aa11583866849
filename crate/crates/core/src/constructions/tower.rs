//! The finite and ω-level towers of treemaps.
//!
//! Level `n` works relative to `0^(n)` at a fixed stage. The ω-tower uses a
//! fixed point `e*` of `k`, so the level trees `T_{e*,n}` are all given by
//! one index, and the level maps are
//!
//! ```text
//! H_n(σ⌢τ) = σ⌢F(G(τ))    for |σ| = n,    H_n(ρ) = ρ for |ρ| ≤ n,
//! ```
//!
//! with `G` the jump-inversion map relative to `0^(n)` and `F` the hat map of
//! the tree `T_{g(r(e*,n+1,σ))}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::machine::{fixed_point, native_index, FixedPoint, Native, Oracle, RecursionError};
use crate::nat::Nat;
use crate::space::Str;
use crate::treemaps::{image_tree, MapRule, Rule, TreemapError, TreemapHandle};
use crate::trees::{in_we_stage, Membership, TreeHandle};

use super::friedberg::Friedberg;
use super::hat::{hat_map, HatError, Pi02Predicate};
use super::indices::{index_g, index_h, index_r, k_program, rejects};

/// Most levels the tower will build.
pub const MAX_LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error("{0} levels requested, at most {MAX_LEVELS} supported")]
    TooManyLevels(usize),
    #[error(transparent)]
    Recursion(#[from] RecursionError),
    #[error("level {level}: {source}")]
    Hat { level: usize, source: HatError },
    #[error(transparent)]
    Treemap(#[from] TreemapError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerConfig {
    /// Levels checked for coherence and reported.
    pub levels: usize,
    /// Stage for jumps, `G`'s search cap, and the hat witness search.
    pub stage: u64,
    pub depth: usize,
    pub branching: u64,
    /// Index of the program deciding the base tree `T_ω`.
    pub omega_tree: Nat,
}

impl TowerConfig {
    pub fn new(omega_tree: Nat) -> TowerConfig {
        TowerConfig { levels: 2, stage: 10_000, depth: 4, branching: 3, omega_tree }
    }

    pub fn base_tree(&self) -> TreeHandle {
        TreeHandle::Decidable { index: self.omega_tree.clone(), oracle: Oracle::zeros() }
    }
}

/// `0^(0), 0^(1), ...` at one stage, built on demand so jump caches are shared.
#[derive(Debug)]
pub struct JumpLadder {
    stage: u64,
    rungs: Mutex<Vec<Oracle>>,
}

impl JumpLadder {
    pub fn new(stage: u64) -> JumpLadder {
        JumpLadder { stage, rungs: Mutex::new(vec![Oracle::zeros()]) }
    }

    pub fn get(&self, n: usize) -> Oracle {
        let mut rungs = self.rungs.lock().unwrap();
        while rungs.len() <= n {
            let top = rungs.last().expect("never empty").clone();
            rungs.push(Oracle::jump(top, self.stage));
        }
        rungs[n].clone()
    }
}

/// Stage-`s` membership in `T_{e,n}`:
/// in when `|σ| ≤ n`; out when `σ↾n ∉ T_ω`; otherwise in unless some
/// `σ↾m`, `n < m ≤ |σ|`, is enumerated into `W_e` relative to `⟨n⟩⌢0^(n)`.
pub fn omega_family_member(e: &Nat, cfg: &TowerConfig, ladder: &JumpLadder, n: usize, s: &Str) -> Membership {
    if s.len() <= n {
        return Membership::In;
    }
    if !cfg.base_tree().contains(&s.prefix(n), cfg.stage).unwrap_or(false) {
        return Membership::Out { revoked_at: 0 };
    }
    let oracle = Oracle::prefix(Str::from(vec![n as u64]), ladder.get(n));
    (n + 1..=s.len())
        .filter_map(|m| in_we_stage(e, &oracle, &s.prefix(m), cfg.stage))
        .min()
        .map_or(Membership::In, |t| Membership::Out { revoked_at: t })
}

/// The ω-tower for one configuration.
#[derive(Debug)]
pub struct Tower {
    cfg: TowerConfig,
    fixed_point: FixedPoint,
    ladder: JumpLadder,
    friedbergs: Mutex<HashMap<usize, Arc<Friedberg>>>,
    level_memo: Mutex<HashMap<(usize, Str), Str>>,
}

impl Tower {
    pub fn new(cfg: TowerConfig) -> Result<Arc<Tower>, TowerError> {
        if cfg.levels > MAX_LEVELS {
            return Err(TowerError::TooManyLevels(cfg.levels));
        }
        let fixed_point = fixed_point(&k_program(&cfg.omega_tree), cfg.stage)?;
        Ok(Arc::new(Tower {
            ladder: JumpLadder::new(cfg.stage),
            cfg,
            fixed_point,
            friedbergs: Mutex::new(HashMap::new()),
            level_memo: Mutex::new(HashMap::new()),
        }))
    }

    pub fn config(&self) -> &TowerConfig {
        &self.cfg
    }

    /// `e*`.
    pub fn index(&self) -> &Nat {
        &self.fixed_point.index
    }

    pub fn fixed_point(&self) -> &FixedPoint {
        &self.fixed_point
    }

    pub fn oracle(&self, n: usize) -> Oracle {
        self.ladder.get(n)
    }

    fn friedberg(&self, n: usize) -> Arc<Friedberg> {
        self.friedbergs
            .lock()
            .unwrap()
            .entry(n)
            .or_insert_with(|| Arc::new(Friedberg::new(self.ladder.get(n), self.cfg.stage)))
            .clone()
    }

    /// The predicate whose hat codes the cone of `T_{e*,n+1}` above `σ`.
    pub fn cone_predicate(&self, n: usize, sigma: &Str) -> Pi02Predicate {
        let shifted = index_r(self.index(), n as u64 + 1, sigma, &self.cfg.omega_tree);
        Pi02Predicate::JumpTree { tree: index_g(&shifted) }
    }

    /// `H_n(ρ)`.
    pub fn level_apply(&self, n: usize, rho: &Str) -> Result<Str, TowerError> {
        if rho.len() <= n {
            return Ok(rho.clone());
        }
        if let Some(v) = self.level_memo.lock().unwrap().get(&(n, rho.clone())) {
            return Ok(v.clone());
        }
        let stem = rho.prefix(n);
        let g = self.friedberg(n).image(&rho.suffix_from(n));
        let f = hat_map(&self.cone_predicate(n, &stem), &self.oracle(n), &g, self.cfg.stage)
            .map_err(|source| TowerError::Hat { level: n, source })?;
        let out = stem.concat(&f);
        self.level_memo.lock().unwrap().insert((n, rho.clone()), out.clone());
        Ok(out)
    }

    /// `H^s_n(ρ) = H_n(⋯H_{s−1}(ρ))`; the identity when `s ≤ n`.
    pub fn chain_apply(&self, n: usize, s: usize, rho: &Str) -> Result<Str, TowerError> {
        let mut v = rho.clone();
        for k in (n..s).rev() {
            v = self.level_apply(k, &v)?;
        }
        Ok(v)
    }

    /// `H^ω_n(ρ) = H^{|ρ|}_n(ρ)` when `|ρ| > n`, else `ρ`.
    pub fn omega_apply(&self, n: usize, rho: &Str) -> Result<Str, TowerError> {
        if rho.len() <= n {
            return Ok(rho.clone());
        }
        self.chain_apply(n, rho.len(), rho)
    }

    /// `T_{e*,n}` at the configured stage, through the shift index.
    pub fn level_tree(&self, n: usize) -> TreeHandle {
        TreeHandle::Corecursive {
            index: index_r(self.index(), n as u64, &Str::empty(), &self.cfg.omega_tree),
            oracle: self.oracle(n),
        }
    }

    pub fn family_member(&self, n: usize, s: &Str) -> Membership {
        omega_family_member(self.index(), &self.cfg, &self.ladder, n, s)
    }

    pub fn level_map(self: &Arc<Self>, n: usize) -> TreemapHandle {
        self.map(TowerMap::Chain(n, n + 1), self.level_tree(n + 1)).with_identity_below(n)
    }

    pub fn chain(self: &Arc<Self>, n: usize, s: usize) -> TreemapHandle {
        self.map(TowerMap::Chain(n, s), self.level_tree(s)).with_identity_below(n)
    }

    /// `H^ω_n`, defined on the base tree.
    pub fn omega_map(self: &Arc<Self>, n: usize) -> TreemapHandle {
        self.map(TowerMap::Omega(n), self.cfg.base_tree()).with_identity_below(n)
    }

    /// `P_0`, the image of the base tree under `H^ω_0`.
    pub fn image(self: &Arc<Self>) -> TreeHandle {
        image_tree(&self.omega_map(0), true)
    }

    fn map(self: &Arc<Self>, which: TowerMap, domain: TreeHandle) -> TreemapHandle {
        TreemapHandle::new(domain, Rule::Custom(Arc::new(TowerRule { tower: self.clone(), which })))
    }
}

#[derive(Debug, Clone, Copy)]
enum TowerMap {
    Chain(usize, usize),
    Omega(usize),
}

struct TowerRule {
    tower: Arc<Tower>,
    which: TowerMap,
}

impl MapRule for TowerRule {
    fn apply(&self, s: &Str) -> Result<Str, TreemapError> {
        let r = match self.which {
            TowerMap::Chain(n, t) => self.tower.chain_apply(n, t, s),
            TowerMap::Omega(n) => self.tower.omega_apply(n, s),
        };
        r.map_err(|e| TreemapError::Other(e.to_string()))
    }

    fn describe(&self) -> String {
        match self.which {
            TowerMap::Chain(n, t) if t == n + 1 => format!("H_{n}"),
            TowerMap::Chain(n, t) => format!("H^{t}_{n}"),
            TowerMap::Omega(n) => format!("H^ω_{n}"),
        }
    }
}

/// The finite tower over a tree `P_n = T_e^{0^(n)}`: level `k` maps
/// `T_{e_{k+1}}^{0^(k+1)}` onto `T_{e_k}^{0^(k)}` with `e_k = h(e_{k+1})`, by
/// `σ ↦ F(G(σ))`. Returns `P_0` and `H^n_0 = H_0 ∘ ⋯ ∘ H_{n−1}`.
pub fn finite_tower(tree: &Nat, n: usize, stage: u64) -> Result<(TreeHandle, TreemapHandle), TowerError> {
    if n > MAX_LEVELS {
        return Err(TowerError::TooManyLevels(n));
    }
    let ladder = Arc::new(JumpLadder::new(stage));
    let domain = TreeHandle::Corecursive { index: tree.clone(), oracle: ladder.get(n) };
    if n == 0 {
        let id = TreemapHandle::new(domain.clone(), Rule::Identity);
        return Ok((domain, id));
    }
    // e_n = tree, e_k = h(e_{k+1}).
    let mut indices = vec![tree.clone()];
    for _ in 0..n {
        let next = index_h(indices.last().expect("nonempty"));
        indices.push(next);
    }
    indices.reverse();
    let steps: Vec<FiniteStep> = (0..n)
        .map(|k| FiniteStep {
            g: Friedberg::new(ladder.get(k), stage),
            pred: Pi02Predicate::JumpTree { tree: index_g(&indices[k + 1]) },
            oracle: ladder.get(k),
            stage,
        })
        .collect();
    let map = TreemapHandle::new(domain, Rule::Custom(Arc::new(FiniteChain { steps })));
    let p0 = TreeHandle::Corecursive { index: indices[0].clone(), oracle: Oracle::zeros() };
    Ok((p0, map))
}

/// The image tree of a finite tower as a decidable-at-stage image.
pub fn finite_tower_image(map: &TreemapHandle) -> TreeHandle {
    image_tree(map, true)
}

struct FiniteStep {
    g: Friedberg,
    pred: Pi02Predicate,
    oracle: Oracle,
    stage: u64,
}

struct FiniteChain {
    /// `steps[k]` is `H_k`.
    steps: Vec<FiniteStep>,
}

impl MapRule for FiniteChain {
    fn apply(&self, s: &Str) -> Result<Str, TreemapError> {
        let mut v = s.clone();
        for step in self.steps.iter().rev() {
            v = hat_map(&step.pred, &step.oracle, &step.g.image(&v), step.stage)?;
        }
        Ok(v)
    }

    fn describe(&self) -> String {
        format!("H^{}_0", self.steps.len())
    }
}

/// A co-r.e. index for a decidable base tree, for use with [`finite_tower`].
pub fn corecursive_index(decider: &Nat) -> Nat {
    rejects(decider)
}

/// The canonical base tree of the McLaughlin demo: at most one nonzero entry.
pub fn one_nonzero_index() -> Nat {
    native_index(Native::OneNonzeroTree)
}

/// The base tree with exactly the given eventually-zero points as paths.
/// The points are sorted so the index does not depend on their order.
pub fn path_tree_index(points: &[Str]) -> Nat {
    let mut pts: Vec<Str> = points.to_vec();
    pts.sort();
    pts.dedup();
    native_index(Native::PathTree { points: pts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::strings_up_to;
    use crate::treemaps::treemap_check;

    fn small_cfg() -> TowerConfig {
        TowerConfig { stage: 2_000, ..TowerConfig::new(one_nonzero_index()) }
    }

    #[test]
    fn level_maps_are_identity_below_their_level() {
        let t = Tower::new(small_cfg()).unwrap();
        for s in strings_up_to(2, 3) {
            assert_eq!(t.level_apply(2, &s).unwrap(), s);
            assert_eq!(t.omega_apply(2, &s).unwrap(), s);
        }
    }

    #[test]
    fn level_map_obeys_the_law_on_the_base_tree() {
        let t = Tower::new(small_cfg()).unwrap();
        let h = TreemapHandle::new(t.config().base_tree(), t.level_map(1).rule);
        let r = treemap_check(&h, 3, 3, 100).unwrap();
        assert!(r.ok(), "{:?}", r.violations);
    }

    #[test]
    fn too_many_levels() {
        let cfg = TowerConfig { levels: 9, ..small_cfg() };
        assert!(matches!(Tower::new(cfg), Err(TowerError::TooManyLevels(9))));
    }

    #[test]
    fn finite_tower_zero_is_identity() {
        let (_, h) = finite_tower(&corecursive_index(&one_nonzero_index()), 0, 100).unwrap();
        assert_eq!(h.apply(&Str::from(vec![4, 0])).unwrap(), Str::from(vec![4, 0]));
    }

    #[test]
    fn family_member_clauses() {
        let t = Tower::new(small_cfg()).unwrap();
        assert_eq!(t.family_member(2, &Str::from(vec![1, 1])), Membership::In);
        assert_eq!(t.family_member(2, &Str::from(vec![1, 1, 0])), Membership::Out { revoked_at: 0 });
    }
}
