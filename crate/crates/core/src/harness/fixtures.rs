//! Named programs, points, trees and oracles with hand-checked behaviour.

use crate::constructions::demos::MockPointPair;
use crate::constructions::indices::rejects;
use crate::constructions::tower::one_nonzero_index;
use crate::machine::{encode_program, iterated_jump_stage, parse_program, Oracle};
use crate::nat::Nat;
use crate::space::{Point, Str};
use crate::trees::{one_nonzero_tree, TreeHandle};

#[derive(Debug, Clone)]
pub struct ProgramFixture {
    pub name: &'static str,
    pub text: String,
    /// Halting on the zero oracle, for every input, when that does not
    /// depend on the input.
    pub halts: Option<bool>,
    /// Why `halts` is right.
    pub proof: &'static str,
}

impl ProgramFixture {
    pub fn index(&self) -> Nat {
        encode_program(&parse_program(&self.text).expect("fixture programs parse"))
    }
}

/// Halts exactly on input `c`, in `2c + 2` steps.
pub fn equals_program(c: u32) -> String {
    let fail = 2 * c + 1;
    let mut lines = Vec::new();
    for _ in 0..c {
        lines.push(format!("jz 0 {fail}"));
        lines.push("dec 0".to_string());
    }
    lines.push(format!("jz 0 {}", fail + 1));
    lines.push(format!("jz {} {fail}", c + 1));
    lines.push("halt".to_string());
    lines.join("\n")
}

pub fn programs() -> Vec<ProgramFixture> {
    vec![
        ProgramFixture {
            name: "halt",
            text: "halt".into(),
            halts: Some(true),
            proof: "the first instruction halts; one step",
        },
        ProgramFixture {
            name: "loop",
            text: "jz 1 1\njz 1 0".into(),
            halts: Some(false),
            proof: "register 1 is never written, so both jumps are taken forever",
        },
        ProgramFixture {
            name: "empty",
            text: String::new(),
            halts: Some(true),
            proof: "no instructions: the implicit halt runs at once; one step",
        },
        ProgramFixture {
            name: "query-input",
            text: "query 0\nhalt".into(),
            halts: None,
            proof: "halts in two steps exactly when the oracle is defined at the input",
        },
        ProgramFixture {
            name: "second-entry",
            text: "inc 1\ninc 1\nquery 1\njz 1 5\nhalt\njz 2 5".into(),
            halts: None,
            proof: "reads the oracle at 2; halts in five steps when that value is nonzero, else spins on line 5",
        },
        ProgramFixture {
            name: "equals-2",
            text: equals_program(2),
            halts: None,
            proof: "counts the input down twice; halts in six steps exactly on input 2",
        },
        ProgramFixture {
            name: "equals-3",
            text: equals_program(3),
            halts: None,
            proof: "counts the input down three times; halts in eight steps exactly on input 3",
        },
    ]
}

/// A program with a small index, for jump questions "does `e` halt on `e`
/// with oracle `G(X) ⊕ A`?", whose answer is known for every `X` and `A`.
#[derive(Debug, Clone)]
pub struct JumpFixture {
    pub name: &'static str,
    pub index: u64,
    pub halts: bool,
    pub proof: &'static str,
}

pub fn jump_programs() -> Vec<JumpFixture> {
    vec![
        JumpFixture { name: "empty", index: 0, halts: true, proof: "no instructions; halts in one step" },
        JumpFixture {
            name: "jz-fallthrough",
            index: 6,
            halts: true,
            proof: "`jz 0 0` on input 6 falls through, then the implicit halt; two steps",
        },
        JumpFixture { name: "halt", index: 15, halts: true, proof: "`halt`; one step" },
        JumpFixture {
            name: "self-loop",
            index: 36,
            halts: false,
            proof: "`jz 1 0`: register 1 stays zero, so it jumps to itself forever",
        },
        JumpFixture {
            name: "query-input",
            index: 110,
            halts: true,
            proof: "`query 0; halt` asks for entry 55 of the left oracle, defined since |G(X↾111)| ≥ 111; two steps",
        },
    ]
}

/// Programs whose forcing extensions in `G`'s search are not just `base⌢i`,
/// as `(name, text)`. Their indices fit in a word.
pub fn step_programs() -> Vec<(&'static str, &'static str)> {
    vec![
        ("four-steps", "inc 1\ninc 1\ninc 1\nhalt"),
        ("needs-second-entry", "inc 1\ninc 1\nquery 1\njz 1 3\nhalt"),
        ("needs-oracle", "inc 1\nquery 1\njz 1 2\nhalt"),
        ("loop", "jz 1 1\njz 1 0"),
    ]
}

pub fn step_program_index(text: &str) -> u64 {
    encode_program(&parse_program(text).expect("fixture programs parse")).to_u64().expect("word-sized")
}

pub fn program(name: &str) -> Option<ProgramFixture> {
    programs().into_iter().find(|p| p.name == name)
}

/// Indices `e` whose co-r.e. trees `T_e^A` are known:
/// `loop` keeps everything, `halt` removes the root, `equals-3` removes the
/// cone above `⟨1⟩` (code 3), `equals-2` the cone above `⟨0,0⟩` (code 2),
/// `tree-D` keeps the strings with at most one nonzero entry.
pub fn tree_indices() -> Vec<(&'static str, Nat)> {
    let mut out: Vec<(&'static str, Nat)> = ["loop", "halt", "equals-2", "equals-3"]
        .into_iter()
        .map(|n| (n, program(n).expect("listed above").index()))
        .collect();
    out.push(("tree-D", rejects(&one_nonzero_index())));
    out
}

/// The tree of points with at most one nonzero entry.
pub fn tree_d() -> TreeHandle {
    one_nonzero_tree()
}

pub fn points() -> Vec<(&'static str, Point)> {
    let ez = |v: &[u64]| Point::EventuallyZero(Str::from(v.to_vec()));
    let parity = parse_program("jz 0 7\ndec 0\njz 0 5\ndec 0\njz 1 0\ninc 0\nhalt\nhalt").expect("parses");
    vec![
        ("zeros", ez(&[])),
        ("one", ez(&[1])),
        ("late-two", ez(&[0, 2])),
        ("mixed", ez(&[2, 1, 0, 1])),
        ("ones", ez(&[1, 1, 1, 1, 1, 1])),
        ("far-three", ez(&[0, 0, 0, 0, 0, 3])),
        ("threes", ez(&[3, 0, 3])),
        ("countdown", ez(&[5, 4, 3, 2, 1])),
        ("identity", Point::Program { index: Nat::ZERO, budget: 10 }),
        ("parity", Point::Program { index: encode_program(&parity), budget: 10_000 }),
    ]
}

pub fn point(name: &str) -> Option<Point> {
    points().into_iter().find(|(n, _)| *n == name).map(|(_, p)| p)
}

pub fn mock_pairs() -> Vec<(&'static str, MockPointPair)> {
    let s = |v: &[u64]| Str::from(v.to_vec());
    vec![
        ("pair-a", MockPointPair { x: s(&[1]), y: s(&[2]) }),
        ("pair-b", MockPointPair { x: s(&[0, 1, 0, 2]), y: s(&[0, 2, 1]) }),
    ]
}

pub fn mock_pair(name: &str) -> Option<MockPointPair> {
    mock_pairs().into_iter().find(|(n, _)| *n == name).map(|(_, p)| p)
}

/// `zeros`, `jump` (= `jump1`), `jumpN`, or a table literal such as `<1,0,1>`.
pub fn oracle(name: &str, stage: u64) -> Option<Oracle> {
    let name = name.trim();
    if name == "zeros" {
        return Some(Oracle::zeros());
    }
    if name == "jump" {
        return Some(iterated_jump_stage(1, stage));
    }
    if let Some(n) = name.strip_prefix("jump") {
        return n.parse().ok().map(|n| iterated_jump_stage(n, stage));
    }
    name.parse::<Str>().ok().map(Oracle::table)
}
