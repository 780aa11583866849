//! Instructions, programs and their numbering.
//!
//! # Numbering
//!
//! A program index `e` is first read as the string `str_decode(e)` (every
//! natural codes exactly one string). That string is then parsed:
//!
//! * If its first entry is [`NATIVE_MARK`] and the remaining entries parse as
//!   a native node, the program is that native node.
//! * Otherwise each entry is an instruction code and the program is the
//!   machine program with those instructions, in order.
//!
//! An instruction code `c` splits as `op = c mod 5`, `q = c div 5`:
//!
//! | op | instruction          |
//! |----|----------------------|
//! | 0  | `inc q`              |
//! | 1  | `dec q`              |
//! | 2  | `jz r t`, `(r,t) = unpair(q)` |
//! | 3  | `query q`            |
//! | 4  | `halt` (q ignored)   |
//!
//! Operands above [`MAX_OPERAND`] saturate. `NATIVE_MARK` is the code of
//! `halt` with a padding operand, which the canonical encoder never emits, so
//! `decode(encode(p)) = p` for every program with in-range operands.
//!
//! `decode(0)` is the empty machine program; falling off the end of a program
//! is an implicit `halt`, so it halts in one step with its input as output.
//! Native nodes whose first field is an index are written `[9, tag, ...]`;
//! field layouts are documented on [`Native`].

use std::fmt;

use num_bigint::BigUint;

use crate::nat::{pair_u64, unpair, Nat};
use crate::space::Str;

/// Register numbers and jump targets are capped so every instruction code
/// fits in a word.
pub const MAX_OPERAND: u32 = (1 << 30) - 1;

/// First entry of a native node's string.
pub const NATIVE_MARK: u64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    Inc(u32),
    Dec(u32),
    /// Jump to the target when the register is zero.
    Jz(u32, u32),
    /// Replace the register's content by the oracle's value at it.
    Query(u32),
    Halt,
}

impl Instruction {
    pub fn code(self) -> u64 {
        match self {
            Instruction::Inc(r) => 5 * clamp(r as u64) as u64,
            Instruction::Dec(r) => 5 * clamp(r as u64) as u64 + 1,
            Instruction::Jz(r, t) => {
                let q = pair_u64(clamp(r as u64) as u64, clamp(t as u64) as u64).expect("operands are capped");
                5 * q + 2
            }
            Instruction::Query(r) => 5 * clamp(r as u64) as u64 + 3,
            Instruction::Halt => 4,
        }
    }

    pub fn from_code(c: u64) -> Instruction {
        let q = c / 5;
        match c % 5 {
            0 => Instruction::Inc(clamp(q)),
            1 => Instruction::Dec(clamp(q)),
            2 => {
                let (r, t) = unpair(q);
                Instruction::Jz(clamp(r), clamp(t))
            }
            3 => Instruction::Query(clamp(q)),
            _ => Instruction::Halt,
        }
    }
}

fn clamp(v: u64) -> u32 {
    v.min(MAX_OPERAND as u64) as u32
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Inc(r) => write!(f, "inc {r}"),
            Instruction::Dec(r) => write!(f, "dec {r}"),
            Instruction::Jz(r, t) => write!(f, "jz {r} {t}"),
            Instruction::Query(r) => write!(f, "query {r}"),
            Instruction::Halt => write!(f, "halt"),
        }
    }
}

/// Natively evaluated program nodes.
///
/// These are the index-level constructions (specialisation, the diagonal
/// used for fixed points, and the tree transformations of the tower). They
/// live in the same numbering as machine programs and are run by the same
/// evaluator, charging their inner computations to the caller's step budget.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Native {
    /// On `x`, behaves as `index` on `pair(arg, x)`. Layout `[1, index, arg]`.
    Smn { index: Nat, arg: Nat },
    /// On `pair(p, y)`, computes `z = {p}(p)` and behaves as `z` on `y`. `[2]`.
    Diag,
    /// On `x`, outputs the index of `Smn { index, arg: x }`. `[3, index]`.
    SmnIndexer { index: Nat },
    /// On `x`, behaves as `outer` on `{inner}(x)`. `[4, outer, inner]`.
    Compose { outer: Nat, inner: Nat },
    /// Outputs `value`. `[5, value]`.
    Const { value: Nat },
    /// Halts exactly off the hat tree built from `T_tree` relative to the
    /// jump of its oracle. `[6, tree]`.
    Hat { tree: Nat },
    /// With a jump oracle `A'`, halts exactly off `G_A(T_tree^{A'})`. `[7, tree]`.
    FriedbergImage { tree: Nat },
    /// With oracle `0^(level)`, halts exactly when `stem⌢x` leaves the level
    /// tree `T_{index,level}` over `omega_tree`. `[8, index, level, stem, omega_tree]`.
    Shift { index: Nat, level: u64, stem: Str, omega_tree: Nat },
    /// The tree `T_{k(index)}`: reads the level `n` from oracle argument 0.
    /// `[9, index, omega_tree]`.
    TowerLevel { index: Nat, omega_tree: Nat },
    /// The transformer `e ↦ TowerLevel { index: e, omega_tree }`. `[10, omega_tree]`.
    TowerTransform { omega_tree: Nat },
    /// Characteristic function of the strings with at most one nonzero entry. `[11]`.
    OneNonzeroTree,
    /// Characteristic function of the prefixes of the listed eventually-zero
    /// points. `[12, count, strs...]`.
    PathTree { points: Vec<Str> },
    /// Characteristic function of the tree that removes `σ` once some prefix
    /// enters `W_tree` within `|σ|` steps. `[13, tree]`.
    DelayedTree { tree: Nat },
    /// Halts when `decider` outputs 0, runs forever otherwise: the co-r.e.
    /// form of a decidable tree. `[14, decider]`.
    Rejects { decider: Nat },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Program {
    Machine(Vec<Instruction>),
    Native(Native),
}

impl Program {
    pub fn machine(instrs: Vec<Instruction>) -> Program {
        Program::Machine(instrs)
    }

    pub fn index(&self) -> Nat {
        encode_program(self)
    }
}

impl From<Native> for Program {
    fn from(n: Native) -> Self {
        Program::Native(n)
    }
}

pub fn encode_program(p: &Program) -> Nat {
    let mut out = Vec::new();
    match p {
        Program::Machine(instrs) => out.extend(instrs.iter().map(|i| i.code())),
        Program::Native(n) => {
            out.push(NATIVE_MARK);
            write_native(n, &mut out);
        }
    }
    Nat::from_code(&Str::from(out))
}

pub fn native_index(n: Native) -> Nat {
    encode_program(&Program::Native(n))
}

pub fn decode_program(e: &Nat) -> Program {
    let s = match e.as_str() {
        Some(s) => s,
        None => return Program::Machine(Vec::new()),
    };
    let entries = s.entries();
    if entries.first() == Some(&NATIVE_MARK) {
        let mut r = Reader { items: &entries[1..], pos: 0 };
        if let Some(n) = read_native(&mut r) {
            if r.pos == r.items.len() {
                return Program::Native(n);
            }
        }
    }
    Program::Machine(entries.iter().map(|&c| Instruction::from_code(c)).collect())
}

fn write_nat(n: &Nat, out: &mut Vec<u64>) {
    match n {
        Nat::Small(v) => out.extend([0, *v]),
        Nat::Code(s) => {
            out.extend([1, s.len() as u64]);
            out.extend_from_slice(s.entries());
        }
        Nat::Big(b) => {
            let limbs = b.to_u64_digits();
            out.extend([2, limbs.len() as u64]);
            out.extend(limbs);
        }
    }
}

fn write_str(s: &Str, out: &mut Vec<u64>) {
    out.push(s.len() as u64);
    out.extend_from_slice(s.entries());
}

fn write_native(n: &Native, out: &mut Vec<u64>) {
    match n {
        Native::Smn { index, arg } => {
            out.push(1);
            write_nat(index, out);
            write_nat(arg, out);
        }
        Native::Diag => out.push(2),
        Native::SmnIndexer { index } => {
            out.push(3);
            write_nat(index, out);
        }
        Native::Compose { outer, inner } => {
            out.push(4);
            write_nat(outer, out);
            write_nat(inner, out);
        }
        Native::Const { value } => {
            out.push(5);
            write_nat(value, out);
        }
        Native::Hat { tree } => {
            out.push(6);
            write_nat(tree, out);
        }
        Native::FriedbergImage { tree } => {
            out.push(7);
            write_nat(tree, out);
        }
        Native::Shift { index, level, stem, omega_tree } => {
            out.push(8);
            write_nat(index, out);
            out.push(*level);
            write_str(stem, out);
            write_nat(omega_tree, out);
        }
        Native::TowerLevel { index, omega_tree } => {
            out.push(9);
            write_nat(index, out);
            write_nat(omega_tree, out);
        }
        Native::TowerTransform { omega_tree } => {
            out.push(10);
            write_nat(omega_tree, out);
        }
        Native::OneNonzeroTree => out.push(11),
        Native::PathTree { points } => {
            out.push(12);
            out.push(points.len() as u64);
            for p in points {
                write_str(p, out);
            }
        }
        Native::DelayedTree { tree } => {
            out.push(13);
            write_nat(tree, out);
        }
        Native::Rejects { decider } => {
            out.push(14);
            write_nat(decider, out);
        }
    }
}

struct Reader<'a> {
    items: &'a [u64],
    pos: usize,
}

impl Reader<'_> {
    fn next(&mut self) -> Option<u64> {
        let v = self.items.get(self.pos).copied();
        self.pos += 1;
        v
    }

    fn take(&mut self, len: u64) -> Option<&[u64]> {
        let len = usize::try_from(len).ok()?;
        let end = self.pos.checked_add(len)?;
        let slice = self.items.get(self.pos..end)?;
        self.pos = end;
        Some(slice)
    }

    fn nat(&mut self) -> Option<Nat> {
        match self.next()? {
            0 => self.next().map(Nat::Small),
            1 => {
                let len = self.next()?;
                Some(Nat::from_code(&Str::from(self.take(len)?)))
            }
            2 => {
                let len = self.next()?;
                let limbs = self.take(len)?;
                let mut bytes = Vec::with_capacity(limbs.len() * 8);
                for l in limbs {
                    bytes.extend_from_slice(&l.to_le_bytes());
                }
                Some(Nat::from_biguint(BigUint::from_bytes_le(&bytes)))
            }
            _ => None,
        }
    }

    fn string(&mut self) -> Option<Str> {
        let len = self.next()?;
        Some(Str::from(self.take(len)?))
    }
}

fn read_native(r: &mut Reader<'_>) -> Option<Native> {
    let n = match r.next()? {
        1 => Native::Smn { index: r.nat()?, arg: r.nat()? },
        2 => Native::Diag,
        3 => Native::SmnIndexer { index: r.nat()? },
        4 => Native::Compose { outer: r.nat()?, inner: r.nat()? },
        5 => Native::Const { value: r.nat()? },
        6 => Native::Hat { tree: r.nat()? },
        7 => Native::FriedbergImage { tree: r.nat()? },
        8 => Native::Shift { index: r.nat()?, level: r.next()?, stem: r.string()?, omega_tree: r.nat()? },
        9 => Native::TowerLevel { index: r.nat()?, omega_tree: r.nat()? },
        10 => Native::TowerTransform { omega_tree: r.nat()? },
        11 => Native::OneNonzeroTree,
        12 => {
            let count = r.next()?;
            let mut points = Vec::new();
            for _ in 0..count {
                points.push(r.string()?);
            }
            Native::PathTree { points }
        }
        13 => Native::DelayedTree { tree: r.nat()? },
        14 => Native::Rejects { decider: r.nat()? },
        _ => return None,
    };
    Some(n)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ProgramParseError {
    pub line: usize,
    pub message: String,
}

/// Parses the one-instruction-per-line text form. Blank lines and `#`
/// comments are skipped.
pub fn parse_program(text: &str) -> Result<Program, ProgramParseError> {
    let mut instrs = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| ProgramParseError { line: k + 1, message: message.to_string() };
        let mut words = line.split_whitespace();
        let op = words.next().unwrap_or("").to_ascii_lowercase();
        let mut operand = || -> Result<u32, ProgramParseError> {
            let w = words.next().ok_or_else(|| err("missing operand"))?;
            let v: u32 = w.parse().map_err(|_| err("operand is not a natural"))?;
            if v > MAX_OPERAND {
                return Err(err("operand too large"));
            }
            Ok(v)
        };
        let ins = match op.as_str() {
            "inc" => Instruction::Inc(operand()?),
            "dec" => Instruction::Dec(operand()?),
            "jz" => {
                let r = operand()?;
                Instruction::Jz(r, operand()?)
            }
            "query" => Instruction::Query(operand()?),
            "halt" => Instruction::Halt,
            _ => return Err(err("unknown instruction")),
        };
        if words.next().is_some() {
            return Err(err("trailing tokens"));
        }
        instrs.push(ins);
    }
    Ok(Program::Machine(instrs))
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Program::Machine(instrs) => {
                for i in instrs {
                    writeln!(f, "{i}")?;
                }
                Ok(())
            }
            Program::Native(n) => writeln!(f, "# native {n:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Instruction::*;

    #[test]
    fn instruction_codes() {
        assert_eq!(Halt.code(), 4);
        assert_eq!(Inc(0).code(), 0);
        assert_eq!(Query(0).code(), 3);
        assert_eq!(Jz(1, 1).code(), 5 * 4 + 2);
        assert_eq!(Instruction::from_code(9), Halt);
        for c in 0..2000 {
            let i = Instruction::from_code(c);
            assert_eq!(Instruction::from_code(i.code()), i);
        }
    }

    #[test]
    fn decode_zero_is_empty_program() {
        assert_eq!(decode_program(&Nat::ZERO), Program::Machine(vec![]));
    }

    #[test]
    fn three_instruction_round_trip() {
        // [query 0; jz 0 2; halt] = <3, 2, 4>; code(<3>) = 10, code(<3,2>) = pair(10,2)+1 = 81,
        // code(<3,2,4>) = pair(81,4)+1 = 3660.
        let p = Program::Machine(vec![Query(0), Jz(0, 0), Halt]);
        assert_eq!(Jz(0, 0).code(), 2);
        assert_eq!(encode_program(&p), Nat::from(3660));
        assert_eq!(decode_program(&Nat::from(3660)), p);
    }

    #[test]
    fn halt_index() {
        assert_eq!(encode_program(&Program::Machine(vec![Halt])), Nat::from(15));
    }

    #[test]
    fn natives_round_trip() {
        let nodes = vec![
            Native::Smn { index: Nat::from(15), arg: Nat::from(7) },
            Native::Diag,
            Native::Compose { outer: Nat::from(3), inner: native_index(Native::Diag) },
            Native::Shift {
                index: native_index(Native::Diag),
                level: 2,
                stem: Str::from(vec![0, 1]),
                omega_tree: native_index(Native::OneNonzeroTree),
            },
            Native::PathTree { points: vec![Str::from(vec![1]), Str::from(vec![0, 2])] },
            Native::Const { value: Nat::from_biguint(num_bigint::BigUint::from(u64::MAX) * 7u32) },
        ];
        for n in nodes {
            let e = native_index(n.clone());
            assert_eq!(decode_program(&e), Program::Native(n));
        }
    }

    #[test]
    fn malformed_native_falls_back_to_machine() {
        // <9> alone: the mark with no node decodes as a lone halt.
        let e = Nat::from_code(&Str::from(vec![NATIVE_MARK]));
        assert_eq!(decode_program(&e), Program::Machine(vec![Halt]));
        let e = Nat::from_code(&Str::from(vec![NATIVE_MARK, 2, 0]));
        assert_eq!(decode_program(&e), Program::Machine(vec![Halt, Jz(0, 0), Inc(0)]));
    }

    #[test]
    fn text_format() {
        let p = parse_program("query 0\n# comment\n jz 0 2 \nhalt\n").unwrap();
        assert_eq!(p, Program::Machine(vec![Query(0), Jz(0, 2), Halt]));
        assert_eq!(parse_program(&p.to_string()).unwrap(), p);
        assert!(parse_program("jump 1").is_err());
        assert!(parse_program("inc").is_err());
        assert!(parse_program("inc 1 2").is_err());
    }
}
