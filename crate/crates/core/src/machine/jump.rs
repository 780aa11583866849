//! Finite stages of the jump and its iterates.

use crate::nat::Nat;

use super::oracle::Oracle;
use super::run::run;

/// The first `s` bits of the stage-`s` jump of `a`: bit `q` is set when
/// program `q` halts on input `q` with oracle `a` within `s` steps.
pub fn jump_stage(a: &Oracle, s: u64) -> Vec<bool> {
    (0..s).map(|q| run(&Nat::from(q), a, &Nat::from(q), s).halted()).collect()
}

/// The stage-`s` jump of `a` as a total oracle.
pub fn jump_oracle(a: &Oracle, s: u64) -> Oracle {
    Oracle::jump(a.clone(), s)
}

/// `0^(n)` at stage `s`: the zero oracle jumped `n` times, each at stage `s`.
pub fn iterated_jump_stage(n: usize, s: u64) -> Oracle {
    (0..n).fold(Oracle::zeros(), |o, _| Oracle::jump(o, s))
}

/// `pair(i, n) ↦ 0^(n)(i)` for `n ≤ levels`, all at stage `s`.
pub fn omega_jump_stage(s: u64, levels: usize) -> Oracle {
    Oracle::omega((0..=levels).map(|n| iterated_jump_stage(n, s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::program::{encode_program, parse_program};
    use crate::nat::pair;

    #[test]
    fn jump_bits_match_direct_runs() {
        let bits = jump_stage(&Oracle::zeros(), 64);
        // Index 0 is the empty program and halts at once.
        assert!(bits[0]);
        for (q, &b) in bits.iter().enumerate() {
            let q = Nat::from(q as u64);
            assert_eq!(b, run(&q, &Oracle::zeros(), &q, 64).halted());
        }
    }

    #[test]
    fn tight_loop_is_out_of_the_jump() {
        let e = encode_program(&parse_program("jz 1 1\njz 1 0").unwrap());
        let j = jump_oracle(&Oracle::zeros(), 1000);
        assert_eq!(j.query(&e), Some(Nat::ZERO));
    }

    #[test]
    fn omega_reads_levels() {
        let o = omega_jump_stage(50, 2);
        let direct = iterated_jump_stage(1, 50);
        for i in 0..20 {
            assert_eq!(o.query(&pair(i, 1)), direct.query(&Nat::from(i)));
        }
        assert_eq!(o.query(&pair(0, 3)), None);
    }
}
