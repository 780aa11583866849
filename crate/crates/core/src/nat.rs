//! Naturals, Cantor pairing and the canonical string coding they share.
//!
//! Every natural is the code of exactly one string (see [`crate::space`]), so
//! values too large for a machine word are kept as the string they code
//! whenever that string has word-sized entries. Codes grow doubly
//! exponentially with string length, so this is the only representation that
//! lets deep strings and long program indices flow through the machine.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use crate::space::Str;

/// A natural number.
///
/// The representation is canonical: values below 2^64 are always `Small`,
/// larger values are `Code` when their string decoding has word-sized
/// entries and `Big` otherwise. Derived equality and hashing are therefore
/// numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Nat {
    Small(u64),
    Code(Str),
    Big(BigUint),
}

impl Nat {
    pub const ZERO: Nat = Nat::Small(0);

    pub fn is_zero(&self) -> bool {
        matches!(self, Nat::Small(0))
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Nat::Small(v) => Some(*v),
            _ => None,
        }
    }

    /// The natural coded by `s`.
    pub fn from_code(s: &Str) -> Nat {
        match crate::space::str_code_u64(s) {
            Some(c) => Nat::Small(c),
            None => Nat::Code(s.clone()),
        }
    }

    /// The string this natural codes, when its entries fit in a word.
    pub fn as_str(&self) -> Option<Str> {
        match self {
            Nat::Small(c) => Some(crate::space::str_decode_u64(*c)),
            Nat::Code(s) => Some(s.clone()),
            Nat::Big(_) => None,
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match self {
            Nat::Small(v) => BigUint::from(*v),
            Nat::Big(b) => b.clone(),
            Nat::Code(s) => {
                let mut c = BigUint::zero();
                for &x in s.entries() {
                    c = pair_big(&c, &BigUint::from(x)) + 1u32;
                }
                c
            }
        }
    }

    pub fn from_biguint(b: BigUint) -> Nat {
        if let Some(v) = b.to_u64() {
            return Nat::Small(v);
        }
        let mut rev = Vec::new();
        let mut c = b.clone();
        while !c.is_zero() {
            let (m, i) = unpair_big(&(c - 1u32));
            match i.to_u64() {
                Some(i) => rev.push(i),
                None => return Nat::Big(b),
            }
            c = m;
        }
        rev.reverse();
        Nat::Code(Str::from(rev))
    }

    pub fn succ(&self) -> Nat {
        match self {
            Nat::Small(v) if *v < u64::MAX => Nat::Small(v + 1),
            _ => Nat::from_biguint(self.to_biguint() + 1u32),
        }
    }

    /// Truncated predecessor (0 stays 0).
    pub fn pred(&self) -> Nat {
        match self {
            Nat::Small(v) => Nat::Small(v.saturating_sub(1)),
            _ => Nat::from_biguint(self.to_biguint() - 1u32),
        }
    }

    /// `self / 2` and `self % 2`.
    pub fn halve(&self) -> (Nat, bool) {
        match self {
            Nat::Small(v) => (Nat::Small(v / 2), v % 2 == 1),
            _ => {
                let b = self.to_biguint();
                let odd = b.bit(0);
                (Nat::from_biguint(b >> 1u32), odd)
            }
        }
    }

    /// `self - k`, or `None` when `self < k`.
    pub fn checked_sub(&self, k: u64) -> Option<Nat> {
        match self {
            Nat::Small(v) => v.checked_sub(k).map(Nat::Small),
            _ => Some(Nat::from_biguint(self.to_biguint() - BigUint::from(k))),
        }
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Self {
        Nat::Small(v)
    }
}

impl Default for Nat {
    fn default() -> Self {
        Nat::ZERO
    }
}

/// Decimal for word-sized values; `#<a,b,...>` (the coded string) for large
/// codes; decimal digits otherwise.
impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nat::Small(v) => write!(f, "{v}"),
            Nat::Code(s) => write!(f, "#{s}"),
            Nat::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a natural: {0:?}")]
pub struct ParseNatError(pub String);

impl FromStr for Nat {
    type Err = ParseNatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix('#') {
            let st: Str = rest.parse().map_err(|_| ParseNatError(s.to_string()))?;
            return Ok(Nat::from_code(&st));
        }
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseNatError(s.to_string()));
        }
        let b = BigUint::parse_bytes(t.as_bytes(), 10).ok_or_else(|| ParseNatError(s.to_string()))?;
        Ok(Nat::from_biguint(b))
    }
}

/// Cantor pairing `(m+n)(m+n+1)/2 + n`, when it fits in a word.
pub fn pair_u64(m: u64, n: u64) -> Option<u64> {
    let s = (m as u128) + (n as u128);
    let v = s.checked_mul(s + 1)? / 2 + n as u128;
    u64::try_from(v).ok()
}

/// Cantor pairing of two word-sized naturals, exact.
pub fn pair(m: u64, n: u64) -> Nat {
    match pair_u64(m, n) {
        Some(v) => Nat::Small(v),
        None => Nat::from_biguint(pair_big(&BigUint::from(m), &BigUint::from(n))),
    }
}

pub fn pair_nat(m: &Nat, n: &Nat) -> Nat {
    if let (Some(a), Some(b)) = (m.to_u64(), n.to_u64()) {
        return pair(a, b);
    }
    Nat::from_biguint(pair_big(&m.to_biguint(), &n.to_biguint()))
}

/// Inverse of [`pair_u64`].
pub fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    let w = ((8 * z + 1).sqrt() - 1) / 2;
    let t = w * (w + 1) / 2;
    let n = z - t;
    let m = w - n;
    (m as u64, n as u64)
}

pub fn unpair_nat(z: &Nat) -> (Nat, Nat) {
    match z {
        Nat::Small(v) => {
            let (m, n) = unpair(*v);
            (Nat::Small(m), Nat::Small(n))
        }
        _ => {
            let (m, n) = unpair_big(&z.to_biguint());
            (Nat::from_biguint(m), Nat::from_biguint(n))
        }
    }
}

fn pair_big(m: &BigUint, n: &BigUint) -> BigUint {
    let s = m + n;
    let t = (&s * (&s + BigUint::one())) >> 1u32;
    t + n
}

fn unpair_big(z: &BigUint) -> (BigUint, BigUint) {
    let w: BigUint = ((z * 8u32 + 1u32).sqrt() - 1u32) >> 1u32;
    let t = (&w * (&w + 1u32)) >> 1u32;
    let n = z - t;
    let m = w - &n;
    (m, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_small_values() {
        assert_eq!(pair_u64(0, 0), Some(0));
        assert_eq!(pair_u64(1, 0), Some(1));
        assert_eq!(pair_u64(0, 1), Some(2));
        assert_eq!(pair_u64(2, 0), Some(3));
        assert_eq!(unpair(0), (0, 0));
        assert_eq!(unpair(1), (1, 0));
        assert_eq!(unpair(2), (0, 1));
    }

    #[test]
    fn pairing_near_word_limit() {
        let z = u64::MAX;
        let (m, n) = unpair(z);
        assert_eq!(pair_u64(m, n), Some(z));
        assert_eq!(pair_u64(u64::MAX, 1), None);
        let big = pair(u64::MAX, 1);
        assert_eq!(unpair_nat(&big), (Nat::Small(u64::MAX), Nat::Small(1)));
    }

    #[test]
    fn big_values_round_trip_through_codes() {
        let s = Str::from(vec![7, 3, 9, 1, 2, 8, 5]);
        let n = Nat::from_code(&s);
        assert!(matches!(n, Nat::Code(_)));
        let b = n.to_biguint();
        assert_eq!(Nat::from_biguint(b.clone()), n);
        assert_eq!(n.succ().pred(), n);
        assert_eq!(Nat::from_biguint(b + 1u32), n.succ());
    }

    #[test]
    fn word_boundary_arithmetic() {
        let top = Nat::Small(u64::MAX);
        let over = top.succ();
        assert_ne!(over, top);
        assert_eq!(over.pred(), top);
        assert_eq!(over.halve(), (Nat::Small(1u64 << 63), false));
    }

    #[test]
    fn parse_and_display() {
        for text in ["0", "12345", "#<1,2,3,4,5,6,7>"] {
            let n: Nat = text.parse().unwrap();
            assert_eq!(n.to_string().parse::<Nat>().unwrap(), n);
        }
        assert!("x".parse::<Nat>().is_err());
        assert_eq!("18446744073709551616".parse::<Nat>().unwrap(), Nat::Small(u64::MAX).succ());
    }
}
