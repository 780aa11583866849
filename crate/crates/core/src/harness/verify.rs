//! Named verification suites. Each reports how many cases it checked and
//! every violation found.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::demos::{coherence_check, incomparable_demo, mclaughlin_demo, INCOMPARABILITY_CAVEAT};
use crate::constructions::friedberg::{jump_predict, Friedberg};
use crate::constructions::tower::{one_nonzero_index, Tower, TowerConfig};
use crate::machine::{fixed_point, native_index, run, smn, Native, Oracle};
use crate::nat::{pair, pair_nat, unpair, Nat};
use crate::space::{str_code_u64, str_decode_u64, strings_up_to, Str};
use crate::treemaps::{image_tree, treemap_check, Rule, TreemapHandle};
use crate::trees::{corec_to_rec_tree, ExplicitTree, TreeHandle};

use super::bruteforce::{bruteforce_image_tree, bruteforce_least_extension};
use super::config::ExperimentConfig;
use super::fixtures;

/// Process exit code of `verify` when a suite finds a violation.
pub const EXIT_VIOLATION: i32 = 3;

pub const SUITES: &[&str] = &[
    "coding",
    "treemap-law",
    "image-tree",
    "decode",
    "jump-predict",
    "smn",
    "fixed-point",
    "corec",
    "tower",
    "mclaughlin",
    "incomp",
];

/// Budget for the s-m-n and fixed-point comparisons.
pub const SMN_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("unknown oracle {0:?}")]
    UnknownOracle(String),
    #[error("{0}")]
    Failed(String),
}

fn failed(e: impl fmt::Display) -> VerifyError {
    VerifyError::Failed(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> SuiteResult {
        SuiteResult { name: name.into(), checked: 0, violations: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {} checked, {} violations", self.name, self.checked, self.violations.len())
    }
}

fn base_oracle(cfg: &ExperimentConfig) -> Result<Oracle, VerifyError> {
    fixtures::oracle(&cfg.oracle, cfg.stage).ok_or_else(|| VerifyError::UnknownOracle(cfg.oracle.clone()))
}

pub fn run_suite(name: &str, cfg: &ExperimentConfig) -> Result<SuiteResult, VerifyError> {
    match name {
        "coding" => Ok(coding()),
        "treemap-law" => treemap_law(cfg),
        "image-tree" => image_tree_suite(cfg),
        "decode" => decode(cfg),
        "jump-predict" => jump_predict_suite(cfg),
        "smn" => Ok(smn_suite(cfg)),
        "fixed-point" => fixed_point_suite(cfg),
        "corec" => corec(cfg),
        "tower" => tower(cfg),
        "mclaughlin" => mclaughlin(cfg),
        "incomp" => incomp(cfg),
        _ => Err(VerifyError::UnknownSuite(name.into())),
    }
}

/// Pairing and string codes on a finite box.
pub fn coding() -> SuiteResult {
    let mut r = SuiteResult::new("coding");
    for m in 0..200u64 {
        for n in 0..200u64 {
            let z = pair(m, n).to_u64().expect("small");
            r.check(unpair(z) == (m, n) && m <= z && n <= z, || format!("pair({m},{n}) = {z}"));
        }
    }
    let mut seen = BTreeSet::new();
    for len in 0..6 {
        for s in crate::space::strings_of_length(len, 6) {
            let c = str_code_u64(&s);
            r.check(c.is_some_and(|c| str_decode_u64(c) == s && seen.insert(c)), || format!("code of {s}"));
        }
    }
    r
}

/// The treemap law for `G` on every string of length at most `depth`, and
/// agreement of `G` at caps `cap` and `2·cap` there.
pub fn treemap_law(cfg: &ExperimentConfig) -> Result<SuiteResult, VerifyError> {
    let mut r = SuiteResult::new("treemap-law");
    let a = base_oracle(cfg)?;
    let g = Arc::new(Friedberg::new(a.clone(), cfg.cap));
    let map = TreemapHandle::new(TreeHandle::All, Rule::Friedberg(g.clone()));
    let report = treemap_check(&map, cfg.depth, cfg.branching, cfg.stage).map_err(failed)?;
    r.checked += report.checked;
    r.violations.extend(report.violations.iter().map(ToString::to_string));
    let wide = Friedberg::new(a.clone(), cfg.cap.saturating_mul(2));
    for s in strings_up_to(cfg.depth, cfg.branching) {
        let (x, y) = (g.image(&s), wide.image(&s));
        r.check(x == y, || format!("G({s}) = {x} at cap {} but {y} at twice the cap", cfg.cap));
    }
    // Steps from the empty string, against a scan of every code below the cap.
    let mut indices: Vec<u64> = (0..cfg.branching.min(4)).collect();
    indices.extend(fixtures::step_programs().iter().map(|(_, t)| fixtures::step_program_index(t)));
    for e in indices {
        for i in 0..cfg.branching {
            let fast = g.step(&Str::empty(), e, i);
            let slow = bruteforce_least_extension(&Str::from(vec![i]), cfg.cap, |t| {
                run(&Nat::from(e), &Oracle::join(t.clone(), a.clone()), &Nat::from(e), t.len() as u64).halted()
            })
            .unwrap_or_else(|| Str::from(vec![i]));
            r.check(fast == slow, || format!("step(⟨⟩, {e}, {i}) = {fast}, scan gives {slow}"));
        }
    }
    Ok(r)
}

/// A random map obeying the treemap law on `tree`: each child's image extends
/// the parent's image and the entry by zero or one random entries.
pub fn random_law_table(tree: &ExplicitTree, rng: &mut ChaCha8Rng, branching: u64) -> BTreeMap<Str, Str> {
    let mut table = BTreeMap::new();
    let mut nodes: Vec<&Str> = tree.nodes().collect();
    nodes.sort_by_key(|s| s.len());
    for s in nodes {
        let img = if s.is_empty() {
            if rng.random_bool(0.5) {
                Str::from(vec![rng.random_range(0..branching)])
            } else {
                Str::empty()
            }
        } else {
            let parent = &table[&s.prefix(s.len() - 1)];
            let mut img: Str = Str::concat(parent, &Str::from(vec![s.get(s.len() - 1).expect("nonempty")]));
            if rng.random_bool(0.5) {
                img.push(rng.random_range(0..branching));
            }
            img
        };
        table.insert(s.clone(), img);
    }
    table
}

/// A random finite tree: each node keeps each child with probability 2/3.
pub fn random_tree(rng: &mut ChaCha8Rng, depth: usize, branching: u64) -> ExplicitTree {
    let mut nodes = vec![Str::empty()];
    let mut layer = vec![Str::empty()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &layer {
            for i in 0..branching {
                if rng.random_range(0..3) > 0 {
                    next.push(s.child(i));
                }
            }
        }
        nodes.extend(next.iter().cloned());
        layer = next;
    }
    ExplicitTree::new(nodes).expect("built level by level")
}

fn image_tree_case(r: &mut SuiteResult, tree: &ExplicitTree, table: &BTreeMap<Str, Str>, queries: &[Str], stage: u64) {
    let map = TreemapHandle::table(TreeHandle::explicit(tree.clone()), table.clone());
    let img = image_tree(&map, false);
    for tau in queries {
        let fast = img.contains(tau, stage);
        let slow = bruteforce_image_tree(table, tree, tau);
        r.check(fast.as_ref().is_ok_and(|&f| f == slow), || {
            format!("{tau}: image tree says {fast:?}, definition says {slow}")
        });
    }
}

/// The subsequence-bounded image-tree rule against the definition: every
/// query up to the depth on the full tree, then random trees, maps and queries.
pub fn image_tree_suite(cfg: &ExperimentConfig) -> Result<SuiteResult, VerifyError> {
    let mut r = SuiteResult::new("image-tree");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let full = ExplicitTree::new(strings_up_to(cfg.depth, cfg.branching)).map_err(failed)?;
    let table = random_law_table(&full, &mut rng, cfg.branching);
    let mut queries = strings_up_to(cfg.depth, cfg.branching);
    for img in table.values() {
        queries.extend(img.prefixes());
    }
    queries.sort();
    queries.dedup();
    image_tree_case(&mut r, &full, &table, &queries, cfg.stage);

    for _ in 0..1000 {
        let tree = random_tree(&mut rng, cfg.depth, cfg.branching);
        let table = random_law_table(&tree, &mut rng, cfg.branching);
        let len = rng.random_range(0..=2 * cfg.depth + 1);
        let tau = if rng.random_bool(0.5) {
            let imgs: Vec<&Str> = table.values().collect();
            let img = imgs[rng.random_range(0..imgs.len())];
            img.prefix(len.min(img.len()))
        } else {
            Str::from((0..len).map(|_| rng.random_range(0..cfg.branching)).collect::<Vec<_>>())
        };
        image_tree_case(&mut r, &tree, &table, &[tau], cfg.stage);
    }
    Ok(r)
}

/// Decoding recovers `X↾n` from `G(X↾n)` on every fixture point.
pub fn decode(cfg: &ExperimentConfig) -> Result<SuiteResult, VerifyError> {
    let mut r = SuiteResult::new("decode");
    let g = Friedberg::new(base_oracle(cfg)?, cfg.cap);
    for (name, x) in fixtures::points() {
        for n in 0..=cfg.depth + 2 {
            let s = x.prefix(n).map_err(failed)?;
            let back = g.decode(&g.image(&s));
            r.check(back == s, || format!("{name}: decode(G({s})) = {back}"));
        }
    }
    Ok(r)
}

/// The jump of `G(X) ⊕ A`, predicted from `X`, against a direct run.
pub fn jump_predict_suite(cfg: &ExperimentConfig) -> Result<SuiteResult, VerifyError> {
    let mut r = SuiteResult::new("jump-predict");
    let a = base_oracle(cfg)?;
    let g = Friedberg::new(a.clone(), cfg.cap);
    for (pname, x) in fixtures::points() {
        for f in fixtures::jump_programs() {
            let predicted = jump_predict(&g, f.index, &x).map_err(failed)?;
            let gx = g.image(&x.prefix(f.index as usize + 1).map_err(failed)?);
            let e = Nat::from(f.index);
            let direct = run(&e, &Oracle::join(gx, a.clone()), &e, cfg.stage).halted();
            r.check(predicted == direct && direct == f.halts, || {
                format!("{pname}, {}: predicted {predicted}, direct {direct}, expected {}", f.name, f.halts)
            });
        }
    }
    Ok(r)
}

fn random_table_oracle(rng: &mut ChaCha8Rng) -> Oracle {
    let len = rng.random_range(0..64);
    Oracle::table(Str::from((0..len).map(|_| rng.random_range(0..4)).collect::<Vec<_>>()))
}

/// `run(smn(e,a), A, b) = run(e, A, pair(a,b))` on random samples.
pub fn smn_suite(cfg: &ExperimentConfig) -> SuiteResult {
    let mut r = SuiteResult::new("smn");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let programs = fixtures::programs();
    for _ in 0..100 {
        let e = programs[rng.random_range(0..programs.len())].index();
        let (a, b) = (Nat::from(rng.random_range(0..50u64)), Nat::from(rng.random_range(0..50u64)));
        let oracle = random_table_oracle(&mut rng);
        let lhs = run(&smn(&e, &a), &oracle, &b, SMN_BUDGET);
        let rhs = run(&e, &oracle, &pair_nat(&a, &b), SMN_BUDGET);
        r.check(lhs == rhs, || format!("e={e} a={a} b={b}: {lhs:?} vs {rhs:?}"));
    }
    r
}

/// Transformers used to sample fixed points.
pub fn sample_transformers() -> Vec<(&'static str, Nat)> {
    let programs = fixtures::programs();
    let mut out: Vec<(&'static str, Nat)> = Vec::new();
    for p in &programs {
        out.push((p.name, native_index(Native::Const { value: p.index() })));
    }
    out.push(("tower", crate::constructions::indices::k_program(&one_nonzero_index())));
    out
}

/// `e*` and `k(e*)` agree on random inputs and oracles.
pub fn fixed_point_suite(cfg: &ExperimentConfig) -> Result<SuiteResult, VerifyError> {
    let mut r = SuiteResult::new("fixed-point");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ks = sample_transformers();
    for _ in 0..100 {
        let (name, k) = &ks[rng.random_range(0..ks.len())];
        let fp = fixed_point(k, cfg.stage).map_err(failed)?;
        let x = Nat::from(rng.random_range(0..50u64));
        let oracle = random_table_oracle(&mut rng);
        let direct = run(&fp.image, &oracle, &x, SMN_BUDGET);
        let via = run(&fp.index, &oracle, &x, SMN_BUDGET + fp.overhead);
        r.check(direct.output() == via.output(), || format!("{name}, x={x}: {via:?} vs {direct:?}"));
    }
    Ok(r)
}

/// Surviving paths of each fixture tree and its decidable version agree.
pub fn corec(cfg: &ExperimentConfig) -> Result<SuiteResult, VerifyError> {
    let mut r = SuiteResult::new("corec");
    let a = base_oracle(cfg)?;
    let horizon = cfg.depth + 8;
    for (name, e) in fixtures::tree_indices() {
        let corec = TreeHandle::Corecursive { index: e.clone(), oracle: a.clone() };
        let rec = corec_to_rec_tree(&e, &a);
        let x = corec.surviving(cfg.depth, horizon, cfg.branching, cfg.stage).map_err(failed)?;
        let y = rec.surviving(cfg.depth, horizon, cfg.branching, cfg.stage).map_err(failed)?;
        r.check(x == y, || format!("{name}: {x:?} vs {y:?}"));
    }
    Ok(r)
}

fn tower_config(cfg: &ExperimentConfig) -> TowerConfig {
    TowerConfig {
        levels: cfg.levels,
        stage: cfg.stage,
        depth: cfg.depth,
        branching: cfg.branching,
        omega_tree: one_nonzero_index(),
    }
}

/// Coherence of the ω-tower over the demo tree.
pub fn tower(cfg: &ExperimentConfig) -> Result<SuiteResult, VerifyError> {
    let mut r = SuiteResult::new("tower");
    let t = Tower::new(tower_config(cfg)).map_err(failed)?;
    let strings: Vec<Str> = t
        .config()
        .base_tree()
        .restrict_to(cfg.depth, cfg.branching, cfg.stage)
        .map_err(failed)?
        .nodes()
        .cloned()
        .collect();
    let c = coherence_check(&t, &strings).map_err(failed)?;
    r.checked += c.checked;
    r.violations.extend(c.failures);
    Ok(r)
}

pub fn mclaughlin(cfg: &ExperimentConfig) -> Result<SuiteResult, VerifyError> {
    let mut r = SuiteResult::new("mclaughlin");
    let m = mclaughlin_demo(tower_config(cfg), cfg.seed).map_err(failed)?;
    r.check(m.z0.len() >= cfg.depth, || format!("Z_0 = {} is shorter than the depth", m.z0));
    for w in &m.witnesses {
        r.check(w.distinct && w.agreement >= w.j, || {
            format!("witness {}: image {} agrees to {}", w.j, w.image, w.agreement)
        });
    }
    r.check(m.downward_closed, || "truncation is not downward closed".into());
    r.check(m.injective, || "sampled images are not pairwise incomparable".into());
    r.checked += m.coherence.checked;
    r.violations.extend(m.coherence.failures.iter().cloned());
    Ok(r)
}

pub fn incomp(cfg: &ExperimentConfig) -> Result<SuiteResult, VerifyError> {
    let mut r = SuiteResult::new("incomp");
    for (name, pair) in fixtures::mock_pairs() {
        let m = incomparable_demo(&pair, tower_config(cfg)).map_err(failed)?;
        r.check(m.two_paths && m.isolated, || format!("{name}: paths {:?}", m.paths));
        r.check(m.caveats.iter().any(|c| c == INCOMPARABILITY_CAVEAT), || format!("{name}: caveat missing"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig { depth: 3, stage: 2_000, cap: 2_000, ..ExperimentConfig::default() }
    }

    #[test]
    fn fast_suites_pass() {
        for name in ["coding", "treemap-law", "decode", "smn", "fixed-point", "corec"] {
            let r = run_suite(name, &small()).unwrap();
            assert!(r.ok(), "{r}: {:?}", r.violations);
        }
    }

    #[test]
    fn random_tables_obey_the_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let tree = random_tree(&mut rng, 3, 3);
            let table = random_law_table(&tree, &mut rng, 3);
            let map = TreemapHandle::table(TreeHandle::explicit(tree), table);
            assert!(treemap_check(&map, 3, 3, 10).unwrap().ok());
        }
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(run_suite("nope", &small()), Err(VerifyError::UnknownSuite("nope".into())));
    }
}
