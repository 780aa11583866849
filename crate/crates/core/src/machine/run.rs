//! Step-bounded execution.

use std::cell::Cell;

use crate::nat::Nat;

use super::native::{eval_native, Step};
use super::oracle::Oracle;
use super::program::{decode_program, Instruction, Program};

/// Nested evaluations deeper than this diverge with
/// [`Divergence::NestingLimit`]. The limit does not depend on the budget, so
/// halting computations stay halting under larger budgets.
pub const MAX_NESTING: usize = 192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Divergence {
    BudgetExhausted,
    OracleOutOfRange,
    NestingLimit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Halt {
        output: Nat,
        steps: u64,
        /// `1 +` the largest oracle argument the run depended on.
        oracle_use: u64,
    },
    Diverged(Divergence),
}

impl Outcome {
    pub fn halted(&self) -> bool {
        matches!(self, Outcome::Halt { .. })
    }

    pub fn output(&self) -> Option<&Nat> {
        match self {
            Outcome::Halt { output, .. } => Some(output),
            Outcome::Diverged(_) => None,
        }
    }
}

/// Step accounting shared by a computation and everything it runs inside
/// itself.
#[derive(Debug, Clone)]
pub struct Meter {
    budget: u64,
    used: u64,
    oracle_use: u64,
}

impl Meter {
    pub fn new(budget: u64) -> Meter {
        Meter { budget, used: 0, oracle_use: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.used
    }

    pub fn oracle_use(&self) -> u64 {
        self.oracle_use
    }

    pub fn tick(&mut self) -> Result<(), Divergence> {
        self.charge(1)
    }

    pub fn charge(&mut self, n: u64) -> Result<(), Divergence> {
        if n > self.remaining() {
            self.used = self.budget;
            return Err(Divergence::BudgetExhausted);
        }
        self.used += n;
        Ok(())
    }

    /// Spends the rest of the budget: the computation never halts.
    pub fn exhaust(&mut self) -> Divergence {
        self.used = self.budget;
        Divergence::BudgetExhausted
    }

    pub fn note_use(&mut self, u: u64) {
        self.oracle_use = self.oracle_use.max(u);
    }

    /// Runs a separate computation with its own budget, charging its steps
    /// here. Fails only when this meter cannot cover the budget the inner run
    /// actually needed.
    pub fn run(&mut self, index: &Nat, oracle: &Oracle, input: &Nat, budget: u64) -> Result<Outcome, Divergence> {
        let sub = budget.min(self.remaining());
        let mut inner = Meter::new(sub);
        let res = eval(index, oracle, input.clone(), &mut inner);
        self.used += inner.used;
        match res {
            Ok(output) => Ok(Outcome::Halt { output, steps: inner.used, oracle_use: inner.oracle_use }),
            Err(Divergence::BudgetExhausted) if sub < budget => Err(Divergence::BudgetExhausted),
            Err(d) => Ok(Outcome::Diverged(d)),
        }
    }
}

/// Runs program `index` on `input` with `oracle` for at most `budget` steps.
pub fn run(index: &Nat, oracle: &Oracle, input: &Nat, budget: u64) -> Outcome {
    let mut meter = Meter::new(budget);
    match eval(index, oracle, input.clone(), &mut meter) {
        Ok(output) => Outcome::Halt { output, steps: meter.used, oracle_use: meter.oracle_use },
        Err(d) => Outcome::Diverged(d),
    }
}

thread_local! {
    static DEPTH: Cell<usize> = const { Cell::new(0) };
}

struct DepthGuard;

impl DepthGuard {
    fn enter() -> Result<DepthGuard, Divergence> {
        DEPTH.with(|d| {
            if d.get() >= MAX_NESTING {
                Err(Divergence::NestingLimit)
            } else {
                d.set(d.get() + 1);
                Ok(DepthGuard)
            }
        })
    }
}

impl Drop for DepthGuard {
    fn drop(&mut self) {
        DEPTH.with(|d| d.set(d.get() - 1));
    }
}

/// Evaluates with a shared meter. Tail positions of native nodes loop here
/// instead of recursing.
pub(crate) fn eval(index: &Nat, oracle: &Oracle, input: Nat, meter: &mut Meter) -> Result<Nat, Divergence> {
    let _guard = DepthGuard::enter()?;
    let mut index = index.clone();
    let mut input = input;
    loop {
        match decode_program(&index) {
            Program::Machine(instrs) => return exec(&instrs, oracle, input, meter),
            Program::Native(n) => match eval_native(&n, oracle, input, meter)? {
                Step::Done(v) => return Ok(v),
                Step::Tail(next, x) => {
                    index = next;
                    input = x;
                }
            },
        }
    }
}

enum Op {
    Inc(usize),
    Dec(usize),
    Jz(usize, usize),
    Query(usize),
    Halt,
}

fn exec(instrs: &[Instruction], oracle: &Oracle, input: Nat, meter: &mut Meter) -> Result<Nat, Divergence> {
    // Registers are renumbered densely; register 0 is always slot 0.
    let mut names: Vec<u32> = vec![0];
    for i in instrs {
        match *i {
            Instruction::Inc(r) | Instruction::Dec(r) | Instruction::Jz(r, _) | Instruction::Query(r) => names.push(r),
            Instruction::Halt => {}
        }
    }
    names.sort_unstable();
    names.dedup();
    let slot = |r: u32| names.binary_search(&r).expect("collected above");
    let ops: Vec<Op> = instrs
        .iter()
        .map(|i| match *i {
            Instruction::Inc(r) => Op::Inc(slot(r)),
            Instruction::Dec(r) => Op::Dec(slot(r)),
            Instruction::Jz(r, t) => Op::Jz(slot(r), t as usize),
            Instruction::Query(r) => Op::Query(slot(r)),
            Instruction::Halt => Op::Halt,
        })
        .collect();

    let mut regs = vec![Nat::ZERO; names.len()];
    regs[0] = input;
    let mut pc = 0usize;
    loop {
        meter.tick()?;
        let Some(op) = ops.get(pc) else {
            return Ok(std::mem::take(&mut regs[0]));
        };
        pc += 1;
        match *op {
            Op::Inc(r) => regs[r] = regs[r].succ(),
            Op::Dec(r) => regs[r] = regs[r].pred(),
            Op::Jz(r, t) => {
                if regs[r].is_zero() {
                    pc = t;
                }
            }
            Op::Query(r) => {
                meter.note_use(regs[r].to_u64().map_or(u64::MAX, |k| k.saturating_add(1)));
                regs[r] = oracle.query(&regs[r]).ok_or(Divergence::OracleOutOfRange)?;
            }
            Op::Halt => return Ok(std::mem::take(&mut regs[0])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::program::{encode_program, parse_program};
    use crate::space::Str;

    fn index(text: &str) -> Nat {
        encode_program(&parse_program(text).unwrap())
    }

    #[test]
    fn halt_takes_one_step() {
        let out = run(&index("halt"), &Oracle::zeros(), &Nat::from(7), 5);
        assert_eq!(out, Outcome::Halt { output: Nat::from(7), steps: 1, oracle_use: 0 });
    }

    #[test]
    fn falling_off_the_end_halts() {
        let out = run(&Nat::ZERO, &Oracle::zeros(), &Nat::from(3), 1);
        assert_eq!(out.output(), Some(&Nat::from(3)));
        assert_eq!(run(&index("inc 0"), &Oracle::zeros(), &Nat::ZERO, 2).output(), Some(&Nat::from(1)));
    }

    #[test]
    fn zero_budget_diverges() {
        assert_eq!(
            run(&index("halt"), &Oracle::zeros(), &Nat::ZERO, 0),
            Outcome::Diverged(Divergence::BudgetExhausted)
        );
    }

    #[test]
    fn tight_loop_never_halts() {
        let e = index("jz 1 1\njz 1 0");
        assert_eq!(run(&e, &Oracle::zeros(), &Nat::ZERO, 10_000), Outcome::Diverged(Divergence::BudgetExhausted));
    }

    #[test]
    fn query_reads_the_oracle_and_records_use() {
        let e = index("query 0\nhalt");
        let o = Oracle::table(Str::from(vec![0, 0, 0, 9]));
        assert_eq!(run(&e, &o, &Nat::from(3), 10), Outcome::Halt { output: Nat::from(9), steps: 2, oracle_use: 4 });
        let partial = Oracle::restrict(o, 3);
        assert_eq!(run(&e, &partial, &Nat::from(3), 10), Outcome::Diverged(Divergence::OracleOutOfRange));
    }

    #[test]
    fn meter_run_reports_outer_exhaustion() {
        let e = index("jz 1 1\njz 1 0");
        let mut m = Meter::new(5);
        assert_eq!(m.run(&e, &Oracle::zeros(), &Nat::ZERO, 3), Ok(Outcome::Diverged(Divergence::BudgetExhausted)));
        assert_eq!(m.run(&e, &Oracle::zeros(), &Nat::ZERO, 3), Err(Divergence::BudgetExhausted));
    }
}
