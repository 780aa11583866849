//! Trees: downward-closed sets of strings, given explicitly or by programs.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::machine::{native_index, run, Divergence, Native, Oracle, Outcome};
use crate::nat::Nat;
use crate::space::{str_decode, SpaceError, Str};
use crate::treemaps::ImageTree;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("{0} is in the set but its prefix {1} is not")]
    NotDownwardClosed(Str, Str),
    #[error("membership of {0} was not decided within {1} steps")]
    Undecided(Str, u64),
    #[error("the membership program for {0} diverged: {1:?}")]
    Diverged(Str, Divergence),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("image tree: {0}")]
    Image(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    /// Out, and known to be out from this stage on.
    Out {
        revoked_at: u64,
    },
}

impl Membership {
    pub fn is_in(self) -> bool {
        self == Membership::In
    }

    fn from_bool(b: bool) -> Membership {
        if b {
            Membership::In
        } else {
            Membership::Out { revoked_at: 0 }
        }
    }
}

/// A finite tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitTree {
    nodes: BTreeSet<Str>,
}

impl ExplicitTree {
    /// Checks that `nodes` is closed under prefixes.
    pub fn new(nodes: impl IntoIterator<Item = Str>) -> Result<ExplicitTree, TreeError> {
        let nodes: BTreeSet<Str> = nodes.into_iter().collect();
        for s in &nodes {
            if !s.is_empty() {
                let parent = s.prefix(s.len() - 1);
                if !nodes.contains(&parent) {
                    return Err(TreeError::NotDownwardClosed(s.clone(), parent));
                }
            }
        }
        Ok(ExplicitTree { nodes })
    }

    /// The smallest tree containing `strings`.
    pub fn closure(strings: impl IntoIterator<Item = Str>) -> ExplicitTree {
        let mut nodes = BTreeSet::new();
        for s in strings {
            nodes.extend(s.prefixes());
        }
        ExplicitTree { nodes }
    }

    pub fn contains(&self, s: &Str) -> bool {
        self.nodes.contains(s)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Str> {
        self.nodes.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Length of the longest node.
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(Str::len).max().unwrap_or(0)
    }

    /// One more than the largest entry.
    pub fn branching(&self) -> u64 {
        self.nodes.iter().flat_map(|s| s.entries().iter().copied()).max().map_or(0, |m| m + 1)
    }

    pub fn frontier(&self, depth: usize) -> Vec<Str> {
        self.nodes.iter().filter(|s| s.len() == depth).cloned().collect()
    }

    /// One string per line, `<>` for the root.
    pub fn to_text(&self) -> String {
        self.nodes.iter().map(|s| format!("{s}\n")).collect()
    }

    pub fn from_text(text: &str) -> Result<ExplicitTree, TreeError> {
        let mut nodes = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let s: Str =
                line.parse().map_err(|e: SpaceError| TreeError::Parse { line: k + 1, message: e.to_string() })?;
            nodes.push(s);
        }
        ExplicitTree::new(nodes)
    }
}

/// A tree, possibly infinite.
#[derive(Clone)]
pub enum TreeHandle {
    /// Every string.
    All,
    Explicit(Arc<ExplicitTree>),
    /// `σ` is in when program `index` outputs nonzero on `code σ`, run with
    /// the stage as budget.
    Decidable {
        index: Nat,
        oracle: Oracle,
    },
    /// The strings none of whose prefixes are enumerated into `W_index^oracle`.
    Corecursive {
        index: Nat,
        oracle: Oracle,
    },
    /// The image of a treemap's domain.
    Image(Arc<ImageTree>),
}

impl fmt::Debug for TreeHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeHandle::All => write!(f, "All"),
            TreeHandle::Explicit(t) => write!(f, "Explicit({} nodes)", t.len()),
            TreeHandle::Decidable { index, oracle } => write!(f, "Decidable({index}, {oracle:?})"),
            TreeHandle::Corecursive { index, oracle } => write!(f, "Corecursive({index}, {oracle:?})"),
            TreeHandle::Image(_) => write!(f, "Image"),
        }
    }
}

impl TreeHandle {
    pub fn explicit(t: ExplicitTree) -> TreeHandle {
        TreeHandle::Explicit(Arc::new(t))
    }

    /// Membership of `σ` as known at `stage`.
    pub fn member(&self, s: &Str, stage: u64) -> Result<Membership, TreeError> {
        match self {
            TreeHandle::All => Ok(Membership::In),
            TreeHandle::Explicit(t) => Ok(Membership::from_bool(t.contains(s))),
            TreeHandle::Decidable { index, oracle } => match run(index, oracle, &s.code(), stage) {
                Outcome::Halt { output, .. } => Ok(Membership::from_bool(!output.is_zero())),
                Outcome::Diverged(Divergence::BudgetExhausted) => Err(TreeError::Undecided(s.clone(), stage)),
                Outcome::Diverged(d) => Err(TreeError::Diverged(s.clone(), d)),
            },
            TreeHandle::Corecursive { index, oracle } => Ok(tree_stage_member(index, oracle, s, stage)),
            TreeHandle::Image(img) => img.contains(s, stage).map(Membership::from_bool),
        }
    }

    pub fn contains(&self, s: &Str, stage: u64) -> Result<bool, TreeError> {
        self.member(s, stage).map(Membership::is_in)
    }

    /// Members of length `depth` with entries below `branching`.
    pub fn level(&self, depth: usize, branching: u64, stage: u64) -> Result<Vec<Str>, TreeError> {
        let mut layer = vec![Str::empty()];
        if !self.contains(&Str::empty(), stage)? {
            return Ok(Vec::new());
        }
        for _ in 0..depth {
            let mut next = Vec::new();
            for s in &layer {
                for i in 0..branching {
                    let c = s.child(i);
                    if self.contains(&c, stage)? {
                        next.push(c);
                    }
                }
            }
            layer = next;
        }
        Ok(layer)
    }

    /// All members up to `depth` with entries below `branching`.
    pub fn restrict_to(&self, depth: usize, branching: u64, stage: u64) -> Result<ExplicitTree, TreeError> {
        let mut nodes = Vec::new();
        for d in 0..=depth {
            nodes.extend(self.level(d, branching, stage)?);
        }
        ExplicitTree::new(nodes)
    }

    /// Members of length `depth` that have an extension of length `horizon`
    /// in the tree (entries below `branching`).
    pub fn surviving(&self, depth: usize, horizon: usize, branching: u64, stage: u64) -> Result<Vec<Str>, TreeError> {
        let mut out = Vec::new();
        for s in self.level(depth, branching, stage)? {
            if self.extends_to(&s, horizon, branching, stage)? {
                out.push(s);
            }
        }
        Ok(out)
    }

    fn extends_to(&self, s: &Str, horizon: usize, branching: u64, stage: u64) -> Result<bool, TreeError> {
        if s.len() >= horizon {
            return Ok(true);
        }
        for i in 0..branching {
            let c = s.child(i);
            if self.contains(&c, stage)? && self.extends_to(&c, horizon, branching, stage)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Whether `code σ` is enumerated into `W_e^A` within `s` steps; the number
/// of steps when it is.
pub fn in_we_stage(e: &Nat, a: &Oracle, s: &Str, stage: u64) -> Option<u64> {
    match run(e, a, &s.code(), stage) {
        Outcome::Halt { steps, .. } => Some(steps),
        Outcome::Diverged(_) => None,
    }
}

/// `W_{e,s}^A` as strings: codes below `s` whose run halts within `s` steps.
pub fn we_stage(e: &Nat, a: &Oracle, stage: u64) -> BTreeSet<Str> {
    (0..stage).filter(|&c| run(e, a, &Nat::from(c), stage).halted()).filter_map(|c| str_decode(&Nat::from(c))).collect()
}

/// Membership in `T_e^A` at stage `s`: in unless some prefix halts within
/// `s` steps, in which case it is out from the earliest such halting time.
pub fn tree_stage_member(e: &Nat, a: &Oracle, s: &Str, stage: u64) -> Membership {
    s.prefixes()
        .filter_map(|p| in_we_stage(e, a, &p, stage))
        .min()
        .map_or(Membership::In, |t| Membership::Out { revoked_at: t })
}

/// A decidable tree that agrees with `T_e^A` on its infinite paths: `σ`
/// drops out once some prefix is enumerated within `|σ|` steps.
pub fn corec_to_rec_tree(e: &Nat, a: &Oracle) -> TreeHandle {
    TreeHandle::Decidable { index: native_index(Native::DelayedTree { tree: e.clone() }), oracle: a.clone() }
}

/// Steps needed to decide membership in a [`corec_to_rec_tree`] tree.
pub fn delayed_tree_budget(s: &Str) -> u64 {
    let n = s.len() as u64 + 1;
    n * (n + 1) + 1
}

/// The tree of strings with at most one nonzero entry.
pub fn one_nonzero_tree() -> TreeHandle {
    TreeHandle::Decidable { index: native_index(Native::OneNonzeroTree), oracle: Oracle::zeros() }
}

/// The initial segments of the given eventually-zero points.
pub fn path_tree(points: Vec<Str>) -> TreeHandle {
    TreeHandle::Decidable { index: native_index(Native::PathTree { points }), oracle: Oracle::zeros() }
}

pub fn is_downward_closed(nodes: &BTreeSet<Str>) -> bool {
    nodes.iter().all(|s| s.is_empty() || nodes.contains(&s.prefix(s.len() - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{encode_program, parse_program};

    fn s(v: &[u64]) -> Str {
        Str::from(v.to_vec())
    }

    #[test]
    fn explicit_trees_must_be_closed() {
        assert!(ExplicitTree::new([s(&[]), s(&[1]), s(&[1, 2])]).is_ok());
        assert!(matches!(ExplicitTree::new([s(&[]), s(&[1, 2])]), Err(TreeError::NotDownwardClosed(..))));
        let t = ExplicitTree::closure([s(&[0, 1]), s(&[2])]);
        assert_eq!(t.len(), 4);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.branching(), 3);
        assert_eq!(ExplicitTree::from_text(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn one_nonzero_tree_levels() {
        let d = one_nonzero_tree();
        // Depth 2, branching 3: 00, 0a, a0 for a in {1,2}.
        assert_eq!(d.level(2, 3, 10).unwrap().len(), 5);
        assert!(!d.contains(&s(&[1, 1]), 10).unwrap());
    }

    #[test]
    fn loop_tree_is_everything_and_halt_tree_is_empty() {
        let lp = encode_program(&parse_program("jz 1 1\njz 1 0").unwrap());
        let halt = encode_program(&parse_program("halt").unwrap());
        let o = Oracle::zeros();
        assert_eq!(tree_stage_member(&lp, &o, &s(&[1, 2]), 100), Membership::In);
        assert_eq!(tree_stage_member(&halt, &o, &s(&[1, 2]), 100), Membership::Out { revoked_at: 1 });
        assert!(we_stage(&lp, &o, 50).is_empty());
        assert_eq!(we_stage(&halt, &o, 50).len(), 50);
    }

    #[test]
    fn delayed_tree_drops_late() {
        let halt = encode_program(&parse_program("halt").unwrap());
        let t = corec_to_rec_tree(&halt, &Oracle::zeros());
        // The root halts in one step, so only the root survives.
        assert!(t.contains(&Str::empty(), delayed_tree_budget(&Str::empty())).unwrap());
        assert!(!t.contains(&s(&[0]), delayed_tree_budget(&s(&[0]))).unwrap());
    }
}
