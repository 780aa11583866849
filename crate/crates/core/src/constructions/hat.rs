//! Coding a Π⁰₂ property of a point into a tree.
//!
//! For a predicate `R(X, c, j)` with the property `∀c ∃j R`, the hat of `X`
//! is `X̂(c) = least j with R(X, c, j)`, and the hat tree `T̂` is the set of
//! initial segments of the points `X ⊕ X̂`. The map `σ ↦ σ ⊕ σ̂` is a treemap
//! onto `T̂` whenever `σ̂(c)` only reads `σ` below `c`.

use crate::machine::{Divergence, Meter, Oracle, Outcome};
use crate::nat::{unpair, Nat};
use crate::space::{oplus_str, Point, SpaceError, Str};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HatError {
    #[error("no witness for c = {c} within {stage} steps")]
    NoWitness { c: u64, stage: u64 },
    #[error("X({0}) is past the end of the given prefix")]
    Undetermined(u64),
    #[error("an inner computation diverged: {0:?}")]
    Diverged(Divergence),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// The Π⁰₂ predicates the hat construction is built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pi02Predicate {
    /// Always true; `X̂` is constantly zero.
    Trivial,
    /// `j > c ∧ X(j) = 0`: `X` has infinitely many zeros.
    NextZero,
    /// With `c = pair(n, i)`: `j ≥ i` and no `X↾m`, `m ≤ n`, is enumerated
    /// into `W_tree` within `i` steps relative to the stage-`j` jump of `A↾j`.
    /// `∀c ∃j` holds exactly when `X` is a path through `T_tree` relative to `A'`.
    JumpTree { tree: Nat },
}

/// Where the predicate reads `X` from.
#[derive(Debug, Clone, Copy)]
pub enum PointView<'a> {
    Point(&'a Point),
    Prefix(&'a Str),
}

impl PointView<'_> {
    fn value(&self, k: u64) -> Result<u64, HatError> {
        match self {
            PointView::Point(p) => Ok(p.value(k)?),
            PointView::Prefix(s) => s.get(k as usize).ok_or(HatError::Undetermined(k)),
        }
    }

    fn prefix(&self, n: u64) -> Result<Str, HatError> {
        (0..n).map(|k| self.value(k)).collect::<Result<Vec<_>, _>>().map(Str::from)
    }
}

impl Pi02Predicate {
    pub fn holds(&self, x: PointView<'_>, a: &Oracle, c: u64, j: u64, meter: &mut Meter) -> Result<bool, HatError> {
        meter.tick().map_err(HatError::Diverged)?;
        match self {
            Pi02Predicate::Trivial => Ok(true),
            Pi02Predicate::NextZero => Ok(j > c && x.value(j)? == 0),
            Pi02Predicate::JumpTree { tree } => {
                let (n, i) = unpair(c);
                if j < i {
                    return Ok(false);
                }
                let jump = Oracle::jump(Oracle::restrict(a.clone(), j), j);
                let sigma = x.prefix(n)?;
                for m in 0..=sigma.len() {
                    let out = meter.run(tree, &jump, &sigma.prefix(m).code(), i).map_err(HatError::Diverged)?;
                    if let Outcome::Halt { .. } = out {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

fn least_witness(
    pred: &Pi02Predicate,
    a: &Oracle,
    x: PointView<'_>,
    c: u64,
    meter: &mut Meter,
) -> Result<u64, HatError> {
    let mut j = 0;
    loop {
        if pred.holds(x, a, c, j, meter)? {
            return Ok(j);
        }
        j += 1;
    }
}

fn budget_error(e: HatError, c: u64, stage: u64) -> HatError {
    match e {
        HatError::Diverged(Divergence::BudgetExhausted) => HatError::NoWitness { c, stage },
        e => e,
    }
}

/// `X̂(c)`, searching with at most `stage` steps in total.
pub fn hat_point(pred: &Pi02Predicate, a: &Oracle, x: &Point, c: u64, stage: u64) -> Result<u64, HatError> {
    let mut meter = Meter::new(stage);
    least_witness(pred, a, PointView::Point(x), c, &mut meter).map_err(|e| budget_error(e, c, stage))
}

/// `σ̂`: the hat values at `0..|σ|` computed from `σ` alone.
pub fn hat_string(pred: &Pi02Predicate, a: &Oracle, sigma: &Str, stage: u64) -> Result<Str, HatError> {
    let mut out = Vec::with_capacity(sigma.len());
    for c in 0..sigma.len() as u64 {
        let mut meter = Meter::new(stage);
        let j =
            least_witness(pred, a, PointView::Prefix(sigma), c, &mut meter).map_err(|e| budget_error(e, c, stage))?;
        out.push(j);
    }
    Ok(Str::from(out))
}

/// `σ ⊕ σ̂`.
pub fn hat_map(pred: &Pi02Predicate, a: &Oracle, sigma: &Str, stage: u64) -> Result<Str, HatError> {
    Ok(oplus_str(sigma, &hat_string(pred, a, sigma, stage)?)?)
}

/// Membership of `ω` in the hat tree, charging all work to `meter`.
///
/// `ω` is read as `σ ⊕ τ` (a trailing odd entry is unconstrained) and is a
/// member when each `τ(c)` is the least witness for `c`.
pub fn hat_tree_member_metered(
    pred: &Pi02Predicate,
    a: &Oracle,
    omega: &Str,
    meter: &mut Meter,
) -> Result<bool, HatError> {
    let half = omega.len() / 2;
    let even = omega.prefix(2 * half);
    let sigma = even.evens();
    let tau = even.odds();
    for c in 0..half as u64 {
        let claimed = tau.get(c as usize).expect("same length");
        if !pred.holds(PointView::Prefix(&sigma), a, c, claimed, meter)? {
            return Ok(false);
        }
        for j in 0..claimed {
            if pred.holds(PointView::Prefix(&sigma), a, c, j, meter)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Membership of `ω` in the hat tree within `stage` steps.
pub fn hat_tree_member(pred: &Pi02Predicate, a: &Oracle, omega: &Str, stage: u64) -> Result<bool, HatError> {
    let mut meter = Meter::new(stage);
    hat_tree_member_metered(pred, a, omega, &mut meter).map_err(|e| budget_error(e, omega.len() as u64 / 2, stage))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{encode_program, parse_program};

    #[test]
    fn trivial_hat_is_zero() {
        let s = Str::from(vec![3, 1, 4]);
        assert_eq!(
            hat_map(&Pi02Predicate::Trivial, &Oracle::zeros(), &s, 100).unwrap(),
            Str::from(vec![3, 0, 1, 0, 4, 0])
        );
    }

    #[test]
    fn next_zero_on_points() {
        let x = Point::EventuallyZero(Str::from(vec![0, 5, 5, 0, 7]));
        let p = Pi02Predicate::NextZero;
        assert_eq!(hat_point(&p, &Oracle::zeros(), &x, 0, 100).unwrap(), 3);
        assert_eq!(hat_point(&p, &Oracle::zeros(), &x, 3, 100).unwrap(), 5);
        let s = Str::from(vec![1, 1]);
        assert_eq!(hat_string(&p, &Oracle::zeros(), &s, 100), Err(HatError::Undetermined(2)));
    }

    #[test]
    fn jump_tree_witnesses_for_a_full_tree() {
        let lp = encode_program(&parse_program("jz 1 1\njz 1 0").unwrap());
        let p = Pi02Predicate::JumpTree { tree: lp };
        let s = Str::from(vec![2, 0, 1, 1]);
        // Nothing is ever enumerated, so the least witness is i.
        let expect: Vec<u64> = (0..4).map(|c| unpair(c).1).collect();
        assert_eq!(hat_string(&p, &Oracle::zeros(), &s, 10_000).unwrap(), Str::from(expect));
        let image = hat_map(&p, &Oracle::zeros(), &s, 10_000).unwrap();
        for k in 0..=image.len() {
            assert!(hat_tree_member(&p, &Oracle::zeros(), &image.prefix(k), 10_000).unwrap());
        }
        let mut bad = image.entries().to_vec();
        bad[1] += 1;
        assert!(!hat_tree_member(&p, &Oracle::zeros(), &Str::from(bad), 10_000).unwrap());
    }

    #[test]
    fn jump_tree_with_empty_tree_has_no_witness() {
        // The empty program halts in one step, so once i ≥ 1 no j works.
        // c = 2 = pair(0, 1) is the first such c.
        let p = Pi02Predicate::JumpTree { tree: Nat::ZERO };
        let s = Str::from(vec![0, 0, 0]);
        assert!(matches!(hat_string(&p, &Oracle::zeros(), &s, 500), Err(HatError::NoWitness { c: 2, .. })));
    }
}
