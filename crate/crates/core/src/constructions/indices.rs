//! Index transformations. None of them runs its argument: each builds the
//! index of a native node that refers to it.

use crate::machine::{native_index, Native};
use crate::nat::Nat;
use crate::space::Str;

/// `T_{f(e)}^A` is the hat tree of `T_e^{A'}`.
pub fn index_f(e: &Nat) -> Nat {
    native_index(Native::Hat { tree: e.clone() })
}

/// `T_{g(e)}^{A'}` is `G(T_e^{A'})`, with `G` relative to `A`.
pub fn index_g(e: &Nat) -> Nat {
    native_index(Native::FriedbergImage { tree: e.clone() })
}

/// `h(e) = f(g(e))`.
pub fn index_h(e: &Nat) -> Nat {
    index_f(&index_g(e))
}

/// `T_{r(e,n,σ)}^{0^(n)} = {τ : σ⌢τ ∈ T_{e,n}}`, where `T_{e,n}` is the level-`n`
/// tree of `e` over the base tree decided by `omega_tree`.
pub fn index_r(e: &Nat, n: u64, sigma: &Str, omega_tree: &Nat) -> Nat {
    native_index(Native::Shift { index: e.clone(), level: n, stem: sigma.clone(), omega_tree: omega_tree.clone() })
}

/// `k(e)`: reads the level `n` off its oracle and, above length `n`, keeps
/// `σ⌢τ` exactly when `τ ∈ T_{h(r(e,n+1,σ))}`.
pub fn index_k(e: &Nat, omega_tree: &Nat) -> Nat {
    native_index(Native::TowerLevel { index: e.clone(), omega_tree: omega_tree.clone() })
}

/// A program computing `e ↦ k(e)`.
pub fn k_program(omega_tree: &Nat) -> Nat {
    native_index(Native::TowerTransform { omega_tree: omega_tree.clone() })
}

/// A co-r.e. index for the tree decided by `decider`.
pub fn rejects(decider: &Nat) -> Nat {
    native_index(Native::Rejects { decider: decider.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{run, Oracle};

    #[test]
    fn h_is_f_after_g() {
        for e in 0..100u64 {
            let e = Nat::from(e);
            assert_eq!(index_h(&e), index_f(&index_g(&e)));
        }
    }

    #[test]
    fn k_program_computes_k() {
        let tw = native_index(Native::OneNonzeroTree);
        for e in 0..100u64 {
            let out = run(&k_program(&tw), &Oracle::zeros(), &Nat::from(e), 10);
            assert_eq!(out.output(), Some(&index_k(&Nat::from(e), &tw)));
        }
    }
}
