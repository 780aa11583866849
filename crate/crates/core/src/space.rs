//! Strings over the naturals, their canonical codes, joins, and finitely
//! presented points of Baire space.

use std::fmt;
use std::str::FromStr;

use crate::machine::{run, Oracle, Outcome};
use crate::nat::{pair_u64, unpair, Nat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("cannot restrict a string of length {len} to length {n}")]
    RestrictTooLong { n: usize, len: usize },
    #[error("join needs equal lengths, got {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("string of length {len} exceeds the substring cap {cap}")]
    SubstringCap { len: usize, cap: usize },
    #[error("point program {index} gave no value at argument {arg}")]
    PointDiverged { index: Nat, arg: u64 },
    #[error("malformed string text {0:?}")]
    Parse(String),
}

/// A finite sequence of naturals.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Str(Vec<u64>);

impl Str {
    pub fn empty() -> Self {
        Str(Vec::new())
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.0.get(i).copied()
    }

    pub fn concat(&self, other: &Str) -> Str {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Str(v)
    }

    /// `σ⌢⟨i⟩`
    pub fn child(&self, i: u64) -> Str {
        let mut v = self.0.clone();
        v.push(i);
        Str(v)
    }

    pub fn push(&mut self, i: u64) {
        self.0.push(i);
    }

    pub fn restrict(&self, n: usize) -> Result<Str, SpaceError> {
        if n > self.len() {
            return Err(SpaceError::RestrictTooLong { n, len: self.len() });
        }
        Ok(Str(self.0[..n].to_vec()))
    }

    /// `σ↾n` for callers that already know `n <= |σ|`.
    pub fn prefix(&self, n: usize) -> Str {
        Str(self.0[..n.min(self.len())].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Str {
        Str(self.0[n.min(self.len())..].to_vec())
    }

    /// `self ⊆ other`
    pub fn is_prefix_of(&self, other: &Str) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn comparable(&self, other: &Str) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// All prefixes, shortest first, including `⟨⟩` and the string itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Str> + '_ {
        (0..=self.len()).map(move |n| self.prefix(n))
    }

    pub fn code(&self) -> Nat {
        Nat::from_code(self)
    }

    pub fn evens(&self) -> Str {
        Str(self.0.iter().step_by(2).copied().collect())
    }

    pub fn odds(&self) -> Str {
        Str(self.0.iter().skip(1).step_by(2).copied().collect())
    }
}

impl From<Vec<u64>> for Str {
    fn from(v: Vec<u64>) -> Self {
        Str(v)
    }
}

impl From<&[u64]> for Str {
    fn from(v: &[u64]) -> Self {
        Str(v.to_vec())
    }
}

impl fmt::Display for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Str {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner =
            t.strip_prefix('<').and_then(|r| r.strip_suffix('>')).ok_or_else(|| SpaceError::Parse(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(Str::empty());
        }
        inner
            .split(',')
            .map(|p| p.trim().parse::<u64>().map_err(|_| SpaceError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Str)
    }
}

pub fn concat(a: &Str, b: &Str) -> Str {
    a.concat(b)
}

pub fn restrict(s: &Str, n: usize) -> Result<Str, SpaceError> {
    s.restrict(n)
}

/// `(σ⊕τ)(2i) = σ(i)`, `(σ⊕τ)(2i+1) = τ(i)`.
pub fn oplus_str(a: &Str, b: &Str) -> Result<Str, SpaceError> {
    if a.len() != b.len() {
        return Err(SpaceError::LengthMismatch { left: a.len(), right: b.len() });
    }
    let mut v = Vec::with_capacity(2 * a.len());
    for (x, y) in a.0.iter().zip(&b.0) {
        v.push(*x);
        v.push(*y);
    }
    Ok(Str(v))
}

/// `code(⟨⟩) = 0`, `code(σ⌢⟨i⟩) = pair(code(σ), i) + 1`, when it fits in a word.
pub fn str_code_u64(s: &Str) -> Option<u64> {
    let mut c = 0u64;
    for &x in &s.0 {
        c = pair_u64(c, x)?.checked_add(1)?;
    }
    Some(c)
}

/// Like [`str_code_u64`] but gives up as soon as the code reaches `cap`.
pub fn str_code_below(s: &Str, cap: u64) -> Option<u64> {
    let mut c = 0u64;
    for &x in &s.0 {
        c = pair_u64(c, x)?.checked_add(1)?;
        if c >= cap {
            return None;
        }
    }
    (c < cap).then_some(c)
}

pub fn str_decode_u64(mut c: u64) -> Str {
    let mut rev = Vec::new();
    while c > 0 {
        let (m, i) = unpair(c - 1);
        rev.push(i);
        c = m;
    }
    rev.reverse();
    Str(rev)
}

pub fn str_code(s: &Str) -> Nat {
    Nat::from_code(s)
}

/// Decodes any natural whose string has word-sized entries.
pub fn str_decode(c: &Nat) -> Option<Str> {
    c.as_str()
}

/// Every increasing-index subsequence of `tau`, once each, in index-set
/// order. Repeated entries give repeated strings.
pub fn substrings(tau: &Str, cap: usize) -> Result<Vec<Str>, SpaceError> {
    if tau.len() > cap {
        return Err(SpaceError::SubstringCap { len: tau.len(), cap });
    }
    let n = tau.len();
    let mut out = Vec::with_capacity(1usize << n);
    for mask in 0u64..(1u64 << n) {
        let v = (0..n).filter(|&k| mask >> k & 1 == 1).map(|k| tau.0[k]).collect();
        out.push(Str(v));
    }
    Ok(out)
}

/// All strings of length exactly `len` with entries below `branching`, in
/// lexicographic order.
pub fn strings_of_length(len: usize, branching: u64) -> Vec<Str> {
    let mut out = vec![Str::empty()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|s| (0..branching).map(move |i| s.child(i))).collect();
    }
    out
}

/// All strings of length at most `depth` with entries below `branching`.
pub fn strings_up_to(depth: usize, branching: u64) -> Vec<Str> {
    (0..=depth).flat_map(|l| strings_of_length(l, branching)).collect()
}

/// A finitely presented point `X: ℕ → ℕ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    /// `prefix` followed by zeros.
    EventuallyZero(Str),
    /// `X(n)` is the output of the program on input `n` with the zero oracle.
    Program { index: Nat, budget: u64 },
    /// `(A⊕B)(2i) = A(i)`, `(A⊕B)(2i+1) = B(i)`.
    Join(Box<Point>, Box<Point>),
}

impl Point {
    pub fn zeros() -> Point {
        Point::EventuallyZero(Str::empty())
    }

    pub fn value(&self, n: u64) -> Result<u64, SpaceError> {
        match self {
            Point::EventuallyZero(p) => Ok(p.get(n as usize).unwrap_or(0)),
            Point::Program { index, budget } => match run(index, &Oracle::zeros(), &Nat::from(n), *budget) {
                Outcome::Halt { output, .. } => {
                    output.to_u64().ok_or(SpaceError::PointDiverged { index: index.clone(), arg: n })
                }
                Outcome::Diverged(_) => Err(SpaceError::PointDiverged { index: index.clone(), arg: n }),
            },
            Point::Join(a, b) => {
                if n.is_multiple_of(2) {
                    a.value(n / 2)
                } else {
                    b.value(n / 2)
                }
            }
        }
    }

    /// `X↾n`
    pub fn prefix(&self, n: usize) -> Result<Str, SpaceError> {
        (0..n as u64).map(|k| self.value(k)).collect::<Result<Vec<_>, _>>().map(Str)
    }

    pub fn evens(&self) -> Option<&Point> {
        match self {
            Point::Join(a, _) => Some(a),
            _ => None,
        }
    }
}

pub fn oplus_point(a: &Point, b: &Point) -> Point {
    Point::Join(Box::new(a.clone()), Box::new(b.clone()))
}
