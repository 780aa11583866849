//! Treemaps: maps on strings with `F(σ⌢i) ⊇ F(σ)⌢i`, and their image trees.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::constructions::friedberg::Friedberg;
use crate::constructions::hat::{hat_map, HatError, Pi02Predicate};
use crate::machine::{run, Oracle, Outcome};
use crate::nat::Nat;
use crate::space::{SpaceError, Str};
use crate::trees::{TreeError, TreeHandle};

/// Longest string the exhaustive image search accepts.
pub const SUBSEQUENCE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreemapError {
    #[error("no table entry for {0}")]
    Undefined(Str),
    #[error("{0} is not in the domain tree")]
    OutsideDomain(Str),
    #[error("the map program diverged on {0}")]
    Diverged(Str),
    #[error("{0} has several minimal preimages: {1:?}")]
    AmbiguousPreimage(Str, Vec<Str>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Hat(#[from] HatError),
    #[error("{0}")]
    Other(String),
}

/// A map given by code outside this module.
pub trait MapRule: Send + Sync {
    fn apply(&self, s: &Str) -> Result<Str, TreemapError>;
    fn describe(&self) -> String;
}

#[derive(Clone)]
pub enum Rule {
    Identity,
    Table(Arc<BTreeMap<Str, Str>>),
    /// `σ ↦ σ⌢0`. Breaks the treemap law; kept as a negative example.
    AppendZero,
    /// `σ ↦` the string coded by the program's output on `code σ`.
    Program {
        index: Nat,
        oracle: Oracle,
        budget: u64,
    },
    Friedberg(Arc<Friedberg>),
    /// `σ ↦ σ ⊕ σ̂`.
    Hat {
        pred: Pi02Predicate,
        oracle: Oracle,
        stage: u64,
    },
    /// Apply `.1`, then `.0`.
    Compose(Arc<TreemapHandle>, Arc<TreemapHandle>),
    Custom(Arc<dyn MapRule>),
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Identity => write!(f, "Identity"),
            Rule::Table(t) => write!(f, "Table({} entries)", t.len()),
            Rule::AppendZero => write!(f, "AppendZero"),
            Rule::Program { index, .. } => write!(f, "Program({index})"),
            Rule::Friedberg(g) => write!(f, "Friedberg(cap {})", g.cap()),
            Rule::Hat { pred, .. } => write!(f, "Hat({pred:?})"),
            Rule::Compose(a, b) => write!(f, "{:?} ∘ {:?}", a.rule, b.rule),
            Rule::Custom(c) => write!(f, "{}", c.describe()),
        }
    }
}

/// A treemap together with the tree it is defined on.
#[derive(Clone, Debug)]
pub struct TreemapHandle {
    pub domain: TreeHandle,
    pub rule: Rule,
    /// `F(σ) = σ` for `|σ| ≤ n`.
    pub identity_below: Option<usize>,
}

impl TreemapHandle {
    pub fn new(domain: TreeHandle, rule: Rule) -> TreemapHandle {
        let identity_below = match rule {
            Rule::Identity => Some(usize::MAX),
            _ => None,
        };
        TreemapHandle { domain, rule, identity_below }
    }

    pub fn with_identity_below(mut self, n: usize) -> TreemapHandle {
        self.identity_below = Some(n);
        self
    }

    pub fn table(domain: TreeHandle, entries: BTreeMap<Str, Str>) -> TreemapHandle {
        TreemapHandle::new(domain, Rule::Table(Arc::new(entries)))
    }

    /// `F(σ)` without checking that `σ` is in the domain.
    pub fn apply(&self, s: &Str) -> Result<Str, TreemapError> {
        match &self.rule {
            Rule::Identity => Ok(s.clone()),
            Rule::Table(t) => t.get(s).cloned().ok_or_else(|| TreemapError::Undefined(s.clone())),
            Rule::AppendZero => Ok(s.child(0)),
            Rule::Program { index, oracle, budget } => match run(index, oracle, &s.code(), *budget) {
                Outcome::Halt { output, .. } => {
                    output.as_str().ok_or_else(|| TreemapError::Other(format!("output {output} is not a string code")))
                }
                Outcome::Diverged(_) => Err(TreemapError::Diverged(s.clone())),
            },
            Rule::Friedberg(g) => Ok(g.image(s)),
            Rule::Hat { pred, oracle, stage } => Ok(hat_map(pred, oracle, s, *stage)?),
            Rule::Compose(outer, inner) => outer.apply(&inner.apply(s)?),
            Rule::Custom(c) => c.apply(s),
        }
    }

    /// `F(σ)`, after checking `σ` is in the domain at `stage`.
    pub fn apply_checked(&self, s: &Str, stage: u64) -> Result<Str, TreemapError> {
        if !self.domain.contains(s, stage)? {
            return Err(TreemapError::OutsideDomain(s.clone()));
        }
        self.apply(s)
    }

    /// `F(X↾n)`.
    pub fn induced_point(&self, x: &crate::space::Point, n: usize) -> Result<Str, TreemapError> {
        self.apply(&x.prefix(n)?)
    }

    /// Finite tables serialise as `σ -> F(σ)` lines.
    pub fn table_to_text(&self) -> Option<String> {
        match &self.rule {
            Rule::Table(t) => Some(t.iter().map(|(k, v)| format!("{k} -> {v}\n")).collect()),
            _ => None,
        }
    }

    pub fn table_from_text(domain: TreeHandle, text: &str) -> Result<TreemapHandle, TreemapError> {
        let mut entries = BTreeMap::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| TreemapError::Parse { line: k + 1, message };
            let (a, b) = line.split_once("->").ok_or_else(|| err("expected `σ -> τ`".into()))?;
            let a: Str = a.trim().parse().map_err(|e: SpaceError| err(e.to_string()))?;
            let b: Str = b.trim().parse().map_err(|e: SpaceError| err(e.to_string()))?;
            entries.insert(a, b);
        }
        Ok(TreemapHandle::table(domain, entries))
    }
}

/// `F ∘ G`, defined on `G`'s domain.
pub fn compose(f: &TreemapHandle, g: &TreemapHandle) -> TreemapHandle {
    let identity_below = match (f.identity_below, g.identity_below) {
        (Some(a), Some(b)) => Some(a.min(b)),
        _ => None,
    };
    TreemapHandle {
        domain: g.domain.clone(),
        rule: Rule::Compose(Arc::new(f.clone()), Arc::new(g.clone())),
        identity_below,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `F(σ)⌢i ⊄ F(σ⌢i)`.
    Law {
        parent: Str,
        entry: u64,
        parent_image: Str,
        child_image: Str,
    },
    /// `F(σ) ≠ σ` although the map claims to be the identity there.
    Identity {
        node: Str,
        image: Str,
    },
    Error {
        node: Str,
        error: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Law { parent, entry, parent_image, child_image } => {
                write!(f, "F({parent})⌢{entry} = {parent_image}⌢{entry} is not a prefix of F({parent}⌢{entry}) = {child_image}")
            }
            Violation::Identity { node, image } => write!(f, "F({node}) = {image}, expected {node}"),
            Violation::Error { node, error } => write!(f, "F({node}): {error}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the treemap law on every domain node of length below `depth`
/// (entries below `branching`) and the identity claim, if any.
pub fn treemap_check(f: &TreemapHandle, depth: usize, branching: u64, stage: u64) -> Result<CheckReport, TreemapError> {
    let mut report = CheckReport::default();
    let mut images: HashMap<Str, Str> = HashMap::new();
    let mut image = |s: &Str, report: &mut CheckReport| -> Option<Str> {
        if let Some(v) = images.get(s) {
            return Some(v.clone());
        }
        match f.apply(s) {
            Ok(v) => {
                images.insert(s.clone(), v.clone());
                Some(v)
            }
            Err(e) => {
                report.violations.push(Violation::Error { node: s.clone(), error: e.to_string() });
                None
            }
        }
    };
    for d in 0..=depth {
        for s in f.domain.level(d, branching, stage)? {
            report.checked += 1;
            let Some(img) = image(&s, &mut report) else { continue };
            if f.identity_below.is_some_and(|n| d <= n) && img != s {
                report.violations.push(Violation::Identity { node: s.clone(), image: img.clone() });
            }
            if d == depth {
                continue;
            }
            for i in 0..branching {
                let c = s.child(i);
                if !f.domain.contains(&c, stage)? {
                    continue;
                }
                let Some(ci) = image(&c, &mut report) else { continue };
                if !img.child(i).is_prefix_of(&ci) {
                    report.violations.push(Violation::Law {
                        parent: s.clone(),
                        entry: i,
                        parent_image: img.clone(),
                        child_image: ci,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// The image `F(T) = {τ : τ ⊆ F(σ) for some σ ∈ T}` as a lazy tree.
pub struct ImageTree {
    pub map: TreemapHandle,
    /// Trust the treemap law: `σ` is then read off `τ` one entry at a time.
    /// Otherwise every subsequence of `τ` is tried.
    pub trust_law: bool,
}

impl ImageTree {
    pub fn contains(&self, tau: &Str, stage: u64) -> Result<bool, TreeError> {
        let found = if self.trust_law {
            parse_preimage(&self.map, tau, stage)
        } else {
            exhaustive_preimages(&self.map, tau, stage).map(|v| v.into_iter().next())
        };
        found.map(|o| o.is_some()).map_err(|e| match e {
            TreemapError::Tree(t) => t,
            e => TreeError::Image(e.to_string()),
        })
    }
}

pub fn image_tree(f: &TreemapHandle, trust_law: bool) -> TreeHandle {
    TreeHandle::Image(Arc::new(ImageTree { map: f.clone(), trust_law }))
}

/// For a map obeying the law: the shortest domain `σ` with `τ ⊆ F(σ)`.
/// Each next entry of `σ` is the entry of `τ` just past `F(σ)`.
pub fn parse_preimage(f: &TreemapHandle, tau: &Str, stage: u64) -> Result<Option<Str>, TreemapError> {
    let mut sigma = Str::empty();
    loop {
        if !f.domain.contains(&sigma, stage)? {
            return Ok(None);
        }
        let img = f.apply(&sigma)?;
        if tau.is_prefix_of(&img) {
            return Ok(Some(sigma));
        }
        if !img.is_prefix_of(tau) {
            return Ok(None);
        }
        sigma.push(tau.get(img.len()).expect("img is a proper prefix of tau"));
    }
}

/// All minimal domain strings `σ` (subsequences of `τ`) with `τ ⊆ F(σ)`.
fn exhaustive_preimages(f: &TreemapHandle, tau: &Str, stage: u64) -> Result<Vec<Str>, TreemapError> {
    if tau.len() > SUBSEQUENCE_CAP {
        return Err(SpaceError::SubstringCap { len: tau.len(), cap: SUBSEQUENCE_CAP }.into());
    }
    let candidates: std::collections::BTreeSet<Str> =
        crate::space::substrings(tau, SUBSEQUENCE_CAP)?.into_iter().collect();
    let mut hits = Vec::new();
    for sigma in candidates {
        if f.domain.contains(&sigma, stage)? && tau.is_prefix_of(&f.apply(&sigma)?) {
            hits.push(sigma);
        }
    }
    let minimal: Vec<Str> =
        hits.iter().filter(|s| !hits.iter().any(|t| t.len() < s.len() && t.is_prefix_of(s))).cloned().collect();
    Ok(minimal)
}

/// The unique minimal `σ ∈ T` with `τ ⊆ F(σ)`, found without trusting the law.
pub fn minimal_preimage(f: &TreemapHandle, tau: &Str, stage: u64) -> Result<Option<Str>, TreemapError> {
    let mut minimal = exhaustive_preimages(f, tau, stage)?;
    match minimal.len() {
        0 => Ok(None),
        1 => Ok(minimal.pop()),
        _ => Err(TreemapError::AmbiguousPreimage(tau.clone(), minimal)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::strings_up_to;
    use crate::trees::ExplicitTree;

    fn s(v: &[u64]) -> Str {
        Str::from(v.to_vec())
    }

    fn full(depth: usize, b: u64) -> TreeHandle {
        TreeHandle::explicit(ExplicitTree::new(strings_up_to(depth, b)).unwrap())
    }

    #[test]
    fn identity_passes_and_append_zero_fails() {
        let id = TreemapHandle::new(full(3, 2), Rule::Identity);
        assert!(treemap_check(&id, 3, 2, 10).unwrap().ok());
        let bad = TreemapHandle::new(full(3, 2), Rule::AppendZero);
        let r = treemap_check(&bad, 3, 2, 10).unwrap();
        assert!(!r.ok());
        assert!(r.violations.iter().all(|v| matches!(v, Violation::Law { entry: 1, .. })));
    }

    #[test]
    fn table_round_trip_and_domain_check() {
        let mut t = BTreeMap::new();
        t.insert(s(&[]), s(&[]));
        t.insert(s(&[0]), s(&[0, 5]));
        let dom = TreeHandle::explicit(ExplicitTree::new([s(&[]), s(&[0])]).unwrap());
        let f = TreemapHandle::table(dom.clone(), t);
        let g = TreemapHandle::table_from_text(dom, &f.table_to_text().unwrap()).unwrap();
        assert_eq!(g.apply(&s(&[0])).unwrap(), s(&[0, 5]));
        assert_eq!(g.apply_checked(&s(&[1]), 1), Err(TreemapError::OutsideDomain(s(&[1]))));
    }

    #[test]
    fn image_membership_both_ways() {
        let dom = full(3, 2);
        let f =
            TreemapHandle::new(dom, Rule::Hat { pred: Pi02Predicate::Trivial, oracle: Oracle::zeros(), stage: 100 });
        let fast = ImageTree { map: f.clone(), trust_law: true };
        let slow = ImageTree { map: f.clone(), trust_law: false };
        for tau in strings_up_to(5, 2) {
            assert_eq!(fast.contains(&tau, 10).unwrap(), slow.contains(&tau, 10).unwrap(), "{tau}");
        }
        assert_eq!(minimal_preimage(&f, &s(&[1, 0, 1]), 10).unwrap(), Some(s(&[1, 1])));
    }

    #[test]
    fn composition_keeps_the_smaller_identity_bound() {
        let a = TreemapHandle::new(TreeHandle::All, Rule::AppendZero).with_identity_below(3);
        let b = TreemapHandle::new(TreeHandle::All, Rule::AppendZero).with_identity_below(1);
        assert_eq!(compose(&a, &b).identity_below, Some(1));
    }
}
