//! Evaluation of native program nodes.

use crate::constructions::friedberg::Friedberg;
use crate::constructions::hat::{hat_tree_member_metered, HatError, Pi02Predicate};
use crate::nat::{pair_nat, unpair_nat, Nat};
use crate::space::Str;

use super::oracle::Oracle;
use super::program::{decode_program, native_index, Native, Program};
use super::run::{eval, Divergence, Meter, Outcome};

pub(crate) enum Step {
    Done(Nat),
    /// Continue as program `.0` on input `.1`, same oracle and meter.
    Tail(Nat, Nat),
}

fn bit(b: bool) -> Step {
    Step::Done(Nat::from(b as u64))
}

/// Runs the tasks side by side with doubling budgets until one halts.
fn dovetail(meter: &mut Meter, tasks: &[(Nat, Oracle, Nat)]) -> Result<(), Divergence> {
    if tasks.is_empty() {
        return Err(meter.exhaust());
    }
    let mut t = 1u64;
    loop {
        meter.tick()?;
        for (index, oracle, input) in tasks {
            if meter.run(index, oracle, input, t)?.halted() {
                return Ok(());
            }
        }
        t = t.saturating_mul(2);
    }
}

/// Runs to completion on the rest of the budget; halting means "not a member".
fn halts_with_rest(meter: &mut Meter, index: &Nat, oracle: &Oracle, input: &Nat) -> Result<Outcome, Divergence> {
    let rest = meter.remaining();
    match meter.run(index, oracle, input, rest)? {
        Outcome::Diverged(Divergence::BudgetExhausted) => Err(meter.exhaust()),
        Outcome::Diverged(d) => Err(d),
        out => Ok(out),
    }
}

pub(crate) fn eval_native(n: &Native, oracle: &Oracle, input: Nat, meter: &mut Meter) -> Result<Step, Divergence> {
    match n {
        Native::Smn { index, arg } => {
            if matches!(decode_program(index), Program::Native(Native::Diag)) {
                // Diag on pair(arg, input), without building the pair.
                meter.tick()?;
                let z = eval(arg, oracle, arg.clone(), meter)?;
                return Ok(Step::Tail(z, input));
            }
            Ok(Step::Tail(index.clone(), pair_nat(arg, &input)))
        }
        Native::Diag => {
            meter.tick()?;
            let (p, y) = unpair_nat(&input);
            let z = eval(&p, oracle, p.clone(), meter)?;
            Ok(Step::Tail(z, y))
        }
        Native::SmnIndexer { index } => {
            meter.tick()?;
            Ok(Step::Done(native_index(Native::Smn { index: index.clone(), arg: input })))
        }
        Native::Compose { outer, inner } => {
            let z = eval(inner, oracle, input, meter)?;
            Ok(Step::Tail(outer.clone(), z))
        }
        Native::Const { value } => {
            meter.tick()?;
            Ok(Step::Done(value.clone()))
        }
        Native::OneNonzeroTree => {
            meter.tick()?;
            let member = input.as_str().is_some_and(|s| s.entries().iter().filter(|&&x| x != 0).count() <= 1);
            Ok(bit(member))
        }
        Native::PathTree { points } => {
            meter.tick()?;
            let member = input.as_str().is_some_and(|s| {
                points.iter().any(|p| s.entries().iter().enumerate().all(|(k, &x)| p.get(k).unwrap_or(0) == x))
            });
            Ok(bit(member))
        }
        Native::DelayedTree { tree } => {
            meter.tick()?;
            let Some(s) = input.as_str() else { return Ok(bit(false)) };
            let w = Oracle::watched(oracle.clone());
            let stage = s.len() as u64;
            for m in 0..=s.len() {
                if meter.run(tree, &w, &s.prefix(m).code(), stage)?.halted() {
                    meter.note_use(w.watched_use());
                    return Ok(bit(false));
                }
            }
            meter.note_use(w.watched_use());
            Ok(bit(true))
        }
        Native::Hat { tree } => {
            meter.tick()?;
            let Some(omega) = input.as_str() else { return Err(meter.exhaust()) };
            let w = Oracle::watched(oracle.clone());
            let pred = Pi02Predicate::JumpTree { tree: tree.clone() };
            match hat_tree_member_metered(&pred, &w, &omega, meter) {
                Ok(true) => Err(meter.exhaust()),
                Ok(false) => {
                    meter.note_use(w.watched_use());
                    Ok(Step::Done(Nat::ZERO))
                }
                Err(HatError::Diverged(d)) => Err(d),
                Err(_) => Err(meter.exhaust()),
            }
        }
        Native::FriedbergImage { tree } => {
            meter.tick()?;
            let Some(tau) = input.as_str() else { return Err(meter.exhaust()) };
            let w = Oracle::watched(oracle.clone());
            let (base, cap) = match w.as_jump() {
                Some((base, stage)) => {
                    // Reading the base of a jump depends on the whole oracle.
                    meter.note_use(u64::MAX);
                    (base.clone(), stage)
                }
                None => (w.clone(), 0),
            };
            let g = Friedberg::new(base, cap);
            let Some(sigma) = g.parse(&tau) else {
                meter.note_use(w.watched_use());
                return Ok(Step::Done(Nat::ZERO));
            };
            let tasks: Vec<_> = (0..=sigma.len()).map(|m| (tree.clone(), w.clone(), sigma.prefix(m).code())).collect();
            dovetail(meter, &tasks)?;
            meter.note_use(w.watched_use());
            Ok(Step::Done(Nat::ZERO))
        }
        Native::Shift { index, level, stem, omega_tree } => {
            meter.tick()?;
            let Some(tau) = input.as_str() else { return Err(meter.exhaust()) };
            let rho = stem.concat(&tau);
            let n = usize::try_from(*level).unwrap_or(usize::MAX);
            if rho.len() <= n {
                return Err(meter.exhaust());
            }
            let w = Oracle::watched(oracle.clone());
            let base = halts_with_rest(meter, omega_tree, &w, &rho.prefix(n).code())?;
            if base.output().is_some_and(Nat::is_zero) {
                meter.note_use(w.watched_use());
                return Ok(Step::Done(Nat::ZERO));
            }
            let shifted = Oracle::prefix(Str::from(vec![*level]), w.clone());
            let tasks: Vec<_> =
                (n + 1..=rho.len()).map(|m| (index.clone(), shifted.clone(), rho.prefix(m).code())).collect();
            dovetail(meter, &tasks)?;
            meter.note_use(w.watched_use());
            Ok(Step::Done(Nat::ZERO))
        }
        Native::TowerLevel { index, omega_tree } => {
            meter.tick()?;
            let w = Oracle::watched(oracle.clone());
            let level = w.query(&Nat::ZERO).ok_or(Divergence::OracleOutOfRange)?;
            let Some(level) = level.to_u64() else { return Err(meter.exhaust()) };
            let Some(rho) = input.as_str() else { return Err(meter.exhaust()) };
            let n = usize::try_from(level).unwrap_or(usize::MAX);
            if rho.len() <= n {
                return Err(meter.exhaust());
            }
            let stem = rho.prefix(n);
            let tau = rho.suffix_from(n);
            let shift = native_index(Native::Shift {
                index: index.clone(),
                level: level + 1,
                stem,
                omega_tree: omega_tree.clone(),
            });
            let image = native_index(Native::Hat { tree: native_index(Native::FriedbergImage { tree: shift }) });
            let rest = Oracle::drop_first(w.clone(), 1);
            halts_with_rest(meter, &image, &rest, &tau.code())?;
            meter.note_use(w.watched_use());
            Ok(Step::Done(Nat::ZERO))
        }
        Native::Rejects { decider } => {
            meter.tick()?;
            let v = eval(decider, oracle, input, meter)?;
            if v.is_zero() {
                Ok(Step::Done(Nat::ZERO))
            } else {
                Err(meter.exhaust())
            }
        }
        Native::TowerTransform { omega_tree } => {
            meter.tick()?;
            Ok(Step::Done(native_index(Native::TowerLevel { index: input, omega_tree: omega_tree.clone() })))
        }
    }
}
