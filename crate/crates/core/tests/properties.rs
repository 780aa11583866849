use jump_tower::constructions::friedberg::Friedberg;
use jump_tower::machine::{encode_program, parse_program, run, smn, Instruction, Oracle, Program};
use jump_tower::nat::{pair, pair_nat, unpair, unpair_nat, Nat};
use jump_tower::space::{str_code, str_decode, Str};
use jump_tower::treemaps::{compose, treemap_check, Rule, TreemapHandle};
use jump_tower::trees::TreeHandle;
use proptest::prelude::*;
use std::sync::Arc;

fn small_str(len: usize, max: u64) -> impl Strategy<Value = Str> {
    prop::collection::vec(0..max, 0..=len).prop_map(Str::from)
}

fn instruction() -> impl Strategy<Value = Instruction> {
    prop_oneof![
        (0u32..3).prop_map(Instruction::Inc),
        (0u32..3).prop_map(Instruction::Dec),
        (0u32..3, 0u32..6).prop_map(|(r, t)| Instruction::Jz(r, t)),
        (0u32..3).prop_map(Instruction::Query),
        Just(Instruction::Halt),
    ]
}

proptest! {
    #[test]
    fn unpair_inverts_pair(m in any::<u32>(), n in any::<u32>()) {
        let z = pair(m as u64, n as u64);
        prop_assert_eq!(unpair_nat(&z), (Nat::from(m as u64), Nat::from(n as u64)));
        if let Some(z) = z.to_u64() {
            prop_assert_eq!(unpair(z), (m as u64, n as u64));
        }
    }

    #[test]
    fn big_pairs_round_trip(m in any::<u64>(), n in any::<u64>()) {
        let z = pair_nat(&Nat::from(m), &Nat::from(n));
        prop_assert_eq!(unpair_nat(&z), (Nat::from(m), Nat::from(n)));
    }

    #[test]
    fn string_codes_round_trip(s in small_str(8, 1 << 20)) {
        prop_assert_eq!(str_decode(&str_code(&s)), Some(s));
    }

    #[test]
    fn programs_round_trip(instrs in prop::collection::vec(instruction(), 0..6)) {
        let p = Program::machine(instrs);
        let text = p.to_string();
        prop_assert_eq!(encode_program(&parse_program(&text).unwrap()), encode_program(&p));
    }

    #[test]
    fn smn_adds_nothing(instrs in prop::collection::vec(instruction(), 0..6), a in 0u64..50, b in 0u64..50,
                        table in small_str(20, 4)) {
        let e = encode_program(&Program::machine(instrs));
        let o = Oracle::table(table);
        prop_assert_eq!(run(&smn(&e, &Nat::from(a)), &o, &Nat::from(b), 500), run(&e, &o, &pair(a, b), 500));
    }

    #[test]
    fn g_obeys_the_law_along_random_strings(sigma in small_str(6, 4), table in small_str(6, 3)) {
        let g = Friedberg::new(Oracle::table(table), 3_000);
        let mut prev = Str::empty();
        for n in 1..=sigma.len() {
            let img = g.image(&sigma.prefix(n));
            prop_assert!(prev.child(sigma.get(n - 1).unwrap()).is_prefix_of(&img));
            prev = img;
        }
        prop_assert_eq!(g.decode(&prev), sigma);
    }

    #[test]
    fn budgets_are_monotone(instrs in prop::collection::vec(instruction(), 0..6), x in 0u64..20, budget in 0u64..60) {
        let e = encode_program(&Program::machine(instrs));
        let short = run(&e, &Oracle::zeros(), &Nat::from(x), budget);
        if short.halted() {
            prop_assert_eq!(run(&e, &Oracle::zeros(), &Nat::from(x), budget + 40), short);
        }
    }
}

#[test]
fn composition_of_treemaps_is_a_treemap() {
    let g = TreemapHandle::new(TreeHandle::All, Rule::Friedberg(Arc::new(Friedberg::new(Oracle::zeros(), 1_000))));
    let twice = compose(&g, &g);
    assert!(treemap_check(&twice, 3, 3, 100).unwrap().ok());
    let broken = TreemapHandle::new(TreeHandle::All, Rule::AppendZero);
    assert!(!treemap_check(&broken, 2, 2, 100).unwrap().ok());
}
