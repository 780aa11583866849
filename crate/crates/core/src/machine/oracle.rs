//! Oracles: total or partial functions the machine may query.
//!
//! A query outside an oracle's domain makes the querying run diverge with
//! [`Divergence::OracleOutOfRange`](super::Divergence::OracleOutOfRange).

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::nat::{unpair_nat, Nat};
use crate::space::Str;

use super::run::{run, Outcome};

/// A shared, cheaply clonable oracle.
#[derive(Clone)]
pub struct Oracle(Arc<OracleKind>);

pub enum OracleKind {
    /// Constant zero.
    Zeros,
    /// The listed values, then zeros.
    Table(Str),
    /// `p ↦` output of the program on `p` with the zero oracle; arguments on
    /// which it does not halt within the budget are out of range.
    Program { index: Nat, budget: u64 },
    /// `head` followed by `tail` shifted right by `|head|`.
    Prefix { head: Str, tail: Oracle },
    /// `left ⊕ right`; even arguments beyond `left` are out of range.
    Join { left: Str, right: Oracle },
    /// Arguments at or above `bound` are out of range.
    Restrict { inner: Oracle, bound: u64 },
    /// `p ↦ inner(p + by)`.
    Drop { inner: Oracle, by: u64 },
    /// Stage of the jump of `base`: `q ↦ 1` when program `q` halts on input
    /// `q` with oracle `base` within `stage` steps, else 0.
    Jump { base: Oracle, stage: u64, cache: Mutex<HashMap<Nat, bool>> },
    /// `pair(i, n) ↦ levels[n](i)`; levels past the end are out of range.
    Omega { levels: Vec<Oracle> },
    /// Forwards to `inner`, recording `1 + max` of the arguments seen.
    Watched { inner: Oracle, max_use: AtomicU64 },
}

impl Oracle {
    pub fn new(kind: OracleKind) -> Oracle {
        Oracle(Arc::new(kind))
    }

    pub fn kind(&self) -> &OracleKind {
        &self.0
    }

    pub fn zeros() -> Oracle {
        Oracle::new(OracleKind::Zeros)
    }

    pub fn table(values: Str) -> Oracle {
        Oracle::new(OracleKind::Table(values))
    }

    pub fn program(index: Nat, budget: u64) -> Oracle {
        Oracle::new(OracleKind::Program { index, budget })
    }

    pub fn prefix(head: Str, tail: Oracle) -> Oracle {
        Oracle::new(OracleKind::Prefix { head, tail })
    }

    pub fn join(left: Str, right: Oracle) -> Oracle {
        Oracle::new(OracleKind::Join { left, right })
    }

    pub fn restrict(inner: Oracle, bound: u64) -> Oracle {
        Oracle::new(OracleKind::Restrict { inner, bound })
    }

    pub fn drop_first(inner: Oracle, by: u64) -> Oracle {
        Oracle::new(OracleKind::Drop { inner, by })
    }

    pub fn jump(base: Oracle, stage: u64) -> Oracle {
        Oracle::new(OracleKind::Jump { base, stage, cache: Mutex::new(HashMap::new()) })
    }

    pub fn omega(levels: Vec<Oracle>) -> Oracle {
        Oracle::new(OracleKind::Omega { levels })
    }

    pub fn watched(inner: Oracle) -> Oracle {
        Oracle::new(OracleKind::Watched { inner, max_use: AtomicU64::new(0) })
    }

    /// For a watched oracle, `1 + ` the largest argument queried so far.
    pub fn watched_use(&self) -> u64 {
        match self.kind() {
            OracleKind::Watched { max_use, .. } => max_use.load(Ordering::Relaxed),
            _ => 0,
        }
    }

    /// The base and stage when this is a jump stage, looking through watches.
    pub fn as_jump(&self) -> Option<(&Oracle, u64)> {
        match self.kind() {
            OracleKind::Jump { base, stage, .. } => Some((base, *stage)),
            OracleKind::Watched { inner, .. } => inner.as_jump(),
            _ => None,
        }
    }

    pub fn query(&self, p: &Nat) -> Option<Nat> {
        match self.kind() {
            OracleKind::Zeros => Some(Nat::ZERO),
            OracleKind::Table(values) => match p.to_u64() {
                Some(k) => Some(Nat::from(values.get(k as usize).unwrap_or(0))),
                None => Some(Nat::ZERO),
            },
            OracleKind::Program { index, budget } => match run(index, &Oracle::zeros(), p, *budget) {
                Outcome::Halt { output, .. } => Some(output),
                Outcome::Diverged(_) => None,
            },
            OracleKind::Prefix { head, tail } => match p.to_u64().filter(|&k| k < head.len() as u64) {
                Some(k) => Some(Nat::from(head.get(k as usize).unwrap_or(0))),
                None => tail.query(&p.checked_sub(head.len() as u64)?),
            },
            OracleKind::Join { left, right } => {
                let (half, odd) = p.halve();
                if odd {
                    right.query(&half)
                } else {
                    let k = half.to_u64()?;
                    left.get(usize::try_from(k).ok()?).map(Nat::from)
                }
            }
            OracleKind::Restrict { inner, bound } => match p.to_u64() {
                Some(k) if k < *bound => inner.query(p),
                _ => None,
            },
            OracleKind::Drop { inner, by } => {
                let shifted = match p.to_u64().and_then(|k| k.checked_add(*by)) {
                    Some(k) => Nat::from(k),
                    None => Nat::from_biguint(p.to_biguint() + *by),
                };
                inner.query(&shifted)
            }
            OracleKind::Jump { base, stage, cache } => {
                if let Some(&b) = cache.lock().unwrap().get(p) {
                    return Some(Nat::from(b as u64));
                }
                let halted = matches!(run(p, base, p, *stage), Outcome::Halt { .. });
                cache.lock().unwrap().insert(p.clone(), halted);
                Some(Nat::from(halted as u64))
            }
            OracleKind::Omega { levels } => {
                let (i, n) = unpair_nat(p);
                let level = levels.get(usize::try_from(n.to_u64()?).ok()?)?;
                level.query(&i)
            }
            OracleKind::Watched { inner, max_use } => {
                let u = p.to_u64().map_or(u64::MAX, |k| k.saturating_add(1));
                max_use.fetch_max(u, Ordering::Relaxed);
                inner.query(p)
            }
        }
    }

    /// Values at `0..n`, stopping at the first argument out of range.
    pub fn prefix_values(&self, n: u64) -> Vec<Option<Nat>> {
        (0..n).map(|k| self.query(&Nat::from(k))).collect()
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            OracleKind::Zeros => write!(f, "Zeros"),
            OracleKind::Table(v) => write!(f, "Table({v})"),
            OracleKind::Program { index, budget } => write!(f, "Program({index}, {budget})"),
            OracleKind::Prefix { head, tail } => write!(f, "{head}⌢{tail:?}"),
            OracleKind::Join { left, right } => write!(f, "{left}⊕{right:?}"),
            OracleKind::Restrict { inner, bound } => write!(f, "{inner:?}↾{bound}"),
            OracleKind::Drop { inner, by } => write!(f, "Drop({inner:?}, {by})"),
            OracleKind::Jump { base, stage, .. } => write!(f, "Jump({base:?}, {stage})"),
            OracleKind::Omega { levels } => write!(f, "Omega({})", levels.len()),
            OracleKind::Watched { inner, .. } => write!(f, "{inner:?}"),
        }
    }
}
