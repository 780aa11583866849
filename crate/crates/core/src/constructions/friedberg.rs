//! The jump-inversion treemap `G`.
//!
//! `G(⟨⟩) = ⟨⟩` and `G(σ⌢i)` is the least-coded `τ ⊇ G(σ)⌢i` (code below
//! the cap) such that program `|σ|` halts on input `|σ|` within `|τ|` steps
//! with oracle `τ ⊕ A`; when there is none, `G(σ)⌢i`. Along any point `X`,
//! `G(X) ⊕ A` decides the jump of itself from `X ⊕ A'`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Mutex;

use crate::machine::{run, Oracle};
use crate::nat::{pair_u64, Nat};
use crate::space::{str_code_below, Point, SpaceError, Str};

/// `G` relative to one oracle and cap, memoised.
#[derive(Debug)]
pub struct Friedberg {
    oracle: Oracle,
    cap: u64,
    memo: Mutex<HashMap<Str, Str>>,
}

impl Friedberg {
    pub fn new(oracle: Oracle, cap: u64) -> Friedberg {
        Friedberg { oracle, cap, memo: Mutex::new(HashMap::new()) }
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn forces(&self, e: u64, tau: &Str) -> bool {
        let o = Oracle::join(tau.clone(), self.oracle.clone());
        run(&Nat::from(e), &o, &Nat::from(e), tau.len() as u64).halted()
    }

    /// The least-coded extension of `base⌢i` forcing program `e` to halt.
    pub fn step(&self, base: &Str, e: u64, i: u64) -> Str {
        let root = base.child(i);
        let Some(root_code) = str_code_below(&root, self.cap) else {
            return root;
        };
        // Min-heap of (code, code of parent, string). Popping ρ⌢k pushes its
        // first child ρ⌢k⌢0 and, below the root, its next sibling ρ⌢(k+1);
        // both have larger codes, so strings come out in code order.
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((root_code, None::<u64>, root.clone())));
        while let Some(Reverse((code, parent, rho))) = heap.pop() {
            if self.forces(e, &rho) {
                return rho;
            }
            if let Some(c) = pair_u64(code, 0).and_then(|p| p.checked_add(1)).filter(|&c| c < self.cap) {
                heap.push(Reverse((c, Some(code), rho.child(0))));
            }
            if let Some(pc) = parent {
                let last = rho.get(rho.len() - 1).expect("nonempty") + 1;
                if let Some(c) = pair_u64(pc, last).and_then(|p| p.checked_add(1)).filter(|&c| c < self.cap) {
                    let mut sib = rho.prefix(rho.len() - 1);
                    sib.push(last);
                    heap.push(Reverse((c, Some(pc), sib)));
                }
            }
        }
        root
    }

    /// `G(σ)`.
    pub fn image(&self, sigma: &Str) -> Str {
        let mut start = 0;
        let mut g = Str::empty();
        {
            let memo = self.memo.lock().unwrap();
            for n in (1..=sigma.len()).rev() {
                if let Some(v) = memo.get(&sigma.prefix(n)) {
                    start = n;
                    g = v.clone();
                    break;
                }
            }
        }
        for n in start..sigma.len() {
            g = self.step(&g, n as u64, sigma.get(n).expect("in range"));
            self.memo.lock().unwrap().insert(sigma.prefix(n + 1), g.clone());
        }
        g
    }

    /// The shortest `σ` with `τ ⊆ G(σ)`, if any.
    pub fn parse(&self, tau: &Str) -> Option<Str> {
        let mut sigma = Str::empty();
        let mut g = Str::empty();
        loop {
            if tau.is_prefix_of(&g) {
                return Some(sigma);
            }
            if !g.is_prefix_of(tau) {
                return None;
            }
            sigma.push(tau.get(g.len()).expect("g is a proper prefix"));
            g = self.image(&sigma);
        }
    }

    /// The longest `σ` with `G(σ) ⊆ τ`: what a prefix of `G(X)` reveals of `X`.
    pub fn decode(&self, tau: &Str) -> Str {
        let mut sigma = Str::empty();
        loop {
            let Some(i) = tau.get(self.image(&sigma).len()) else { return sigma };
            let next = sigma.child(i);
            if !self.image(&next).is_prefix_of(tau) {
                return sigma;
            }
            sigma = next;
        }
    }
}

pub fn friedberg_step(base: &Str, e: u64, i: u64, a: &Oracle, cap: u64) -> Str {
    Friedberg::new(a.clone(), cap).step(base, e, i)
}

pub fn friedberg_treemap(a: &Oracle, sigma: &Str, cap: u64) -> Str {
    Friedberg::new(a.clone(), cap).image(sigma)
}

pub fn friedberg_decode(tau: &Str, a: &Oracle, cap: u64) -> Str {
    Friedberg::new(a.clone(), cap).decode(tau)
}

/// Whether `e` is in the jump of `G(X) ⊕ A`, as computed from `X` and `A`:
/// program `e` on `e` halts within `|G(X↾e+1)|` steps with oracle
/// `G(X↾e+1) ⊕ A`.
pub fn jump_predict(g: &Friedberg, e: u64, x: &Point) -> Result<bool, SpaceError> {
    let gx = g.image(&x.prefix(e as usize + 1)?);
    let o = Oracle::join(gx.clone(), g.oracle().clone());
    Ok(run(&Nat::from(e), &o, &Nat::from(e), gx.len() as u64).halted())
}
