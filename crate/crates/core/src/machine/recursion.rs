//! Specialisation and fixed points.

use crate::nat::Nat;

use super::oracle::Oracle;
use super::program::{native_index, Native};
use super::run::{run, Outcome};

/// An index for `x ↦ {e}(pair(a, x))`. It adds no steps: runs of the two
/// agree exactly, including step counts and oracle use.
pub fn smn(e: &Nat, a: &Nat) -> Nat {
    native_index(Native::Smn { index: e.clone(), arg: a.clone() })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecursionError {
    #[error("the transformer did not halt on its diagonal input within {budget} steps")]
    TransformerDiverged { budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoint {
    /// `e*` with `{e*} = {k(e*)}`.
    pub index: Nat,
    /// `k(e*)`.
    pub image: Nat,
    /// Extra steps a run of `e*` spends before behaving as `k(e*)`.
    pub overhead: u64,
}

/// A fixed point of the total index transformer `k`.
///
/// `e* = smn(diag, v)` with `v = k ∘ smn(diag, ·)`, so `e*` on `x` computes
/// `{v}(v) = k(e*)` and continues as `k(e*)` on `x`. `k` must halt on that
/// one input within `budget` steps with the zero oracle; with any other
/// oracle it must compute the same index.
pub fn fixed_point(k: &Nat, budget: u64) -> Result<FixedPoint, RecursionError> {
    let diag = native_index(Native::Diag);
    let indexer = native_index(Native::SmnIndexer { index: diag.clone() });
    let v = native_index(Native::Compose { outer: k.clone(), inner: indexer });
    match run(&v, &Oracle::zeros(), &v, budget) {
        Outcome::Halt { output, steps, .. } => {
            Ok(FixedPoint { index: smn(&diag, &v), image: output, overhead: steps + 1 })
        }
        Outcome::Diverged(_) => Err(RecursionError::TransformerDiverged { budget }),
    }
}

/// Whether `a` and `b` agree on `(oracle, x)`: both halt with equal output or
/// neither halts. `b` gets `extra` more steps than `a`.
pub fn agree_on(a: &Nat, b: &Nat, oracle: &Oracle, x: &Nat, budget: u64, extra: u64) -> bool {
    let ra = run(a, oracle, x, budget);
    let rb = run(b, oracle, x, budget.saturating_add(extra));
    ra.output() == rb.output()
}
