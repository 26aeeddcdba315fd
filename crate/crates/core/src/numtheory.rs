//! Fractions p/q, their odd-length continued fractions, and Schubert's
//! equivalence predicates.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction `p/q` with `0 < p < q`, the Schubert parameter of a
/// rational link.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    p: BigUint,
    q: BigUint,
}

impl Fraction {
    pub fn new(p: BigUint, q: BigUint) -> Result<Self> {
        if p.is_zero() || p >= q || !p.gcd(&q).is_one() {
            return Err(Error::InvalidFraction {
                p: p.to_string(),
                q: q.to_string(),
            });
        }
        Ok(Fraction { p, q })
    }

    pub fn from_u64(p: u64, q: u64) -> Result<Self> {
        Self::new(BigUint::from(p), BigUint::from(q))
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    /// True when the denominator is even, i.e. the link has two components.
    pub fn is_two_component(&self) -> bool {
        self.q.is_even()
    }

    pub fn components(&self) -> u8 {
        if self.is_two_component() {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseFraction(s.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p = BigUint::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigUint::from_str(q.trim()).map_err(|_| bad())?;
        Fraction::new(p, q)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The odd-length, all-positive continued fraction vector `[a1, ..., a_{2k+1}]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct OddCf(Vec<u64>);

impl OddCf {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.len() % 2 == 0 {
            return Err(Error::InvalidVector(format!(
                "length {} is not odd",
                entries.len()
            )));
        }
        if entries.contains(&0) {
            return Err(Error::InvalidVector("entries must be positive".into()));
        }
        if entries == [1] {
            return Err(Error::InvalidVector("[1] is the unknot (1/1)".into()));
        }
        Ok(OddCf(entries))
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

    pub fn reversed(&self) -> OddCf {
        OddCf(self.0.iter().rev().copied().collect())
    }

    pub fn crossing_number(&self) -> u128 {
        crossing_number(self)
    }
}

impl fmt::Display for OddCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Expands `p/q` into its unique odd-length positive continued fraction.
///
/// Fails only when a partial quotient exceeds `u64`, which would mean a twist
/// region with more than 2^64 crossings.
pub fn to_odd_cf(f: &Fraction) -> Result<OddCf> {
    let mut entries = Vec::new();
    let (mut p, mut q) = (f.p.clone(), f.q.clone());
    while !p.is_zero() {
        let (a, r) = q.div_rem(&p);
        let a = a
            .to_u64()
            .ok_or_else(|| Error::PartialQuotientOverflow(f.to_string()))?;
        entries.push(a);
        q = p;
        p = r;
    }
    if entries.len() % 2 == 0 {
        let last = entries.pop().expect("nonempty expansion");
        if last > 1 {
            entries.push(last - 1);
            entries.push(1);
        } else {
            *entries.last_mut().expect("length >= 2") += 1;
        }
    }
    Ok(OddCf(entries))
}

/// Evaluates `1/(a1 + 1/(a2 + ...))`.
pub fn from_odd_cf(v: &OddCf) -> Fraction {
    let (mut p, mut q) = (BigUint::zero(), BigUint::one());
    for &a in v.0.iter().rev() {
        let next_q = &q * a + &p;
        p = q;
        q = next_q;
    }
    // Continuants are coprime and 0 < p < q whenever the vector is not [1].
    Fraction { p, q }
}

pub fn crossing_number(v: &OddCf) -> u128 {
    v.0.iter().map(|&a| a as u128).sum()
}

/// Unoriented classification: `q = q'` and `p ≡ p'` or `p·p' ≡ 1 (mod q)`.
pub fn unoriented_equivalent(f1: &Fraction, f2: &Fraction) -> bool {
    if f1.q != f2.q {
        return false;
    }
    let q = &f1.q;
    (&f1.p % q) == (&f2.p % q) || ((&f1.p * &f2.p) % q).is_one()
}

/// Oriented classification for denominator closures with odd numerators:
/// `q = q'` and `p ≡ p'` or `p·p' ≡ 1 (mod 2q)`.
///
/// The pairs are taken as stated; `p` may exceed `q`.
pub fn oriented_equivalent(a: (&BigUint, &BigUint), b: (&BigUint, &BigUint)) -> Result<bool> {
    for p in [a.0, b.0] {
        if p.is_even() {
            return Err(Error::EvenNumerator(p.to_string()));
        }
    }
    if a.1 != b.1 {
        return Ok(false);
    }
    let m = a.1 * 2u32;
    Ok((a.0 % &m) == (b.0 % &m) || ((a.0 * b.0) % &m).is_one())
}

pub fn is_palindromic(v: &OddCf) -> bool {
    v.0.iter().eq(v.0.iter().rev())
}

/// Two-component links only: palindromic vector with odd middle entry.
pub fn is_strongly_invertible(f: &Fraction) -> Result<bool> {
    if !f.is_two_component() {
        return Err(Error::NotTwoComponent(f.to_string()));
    }
    let v = to_odd_cf(f)?;
    Ok(is_palindromic(&v) && v.0[v.0.len() / 2] % 2 == 1)
}

/// `(q - p)/q`, the fraction of the mirror image.
pub fn mirror_fraction(f: &Fraction) -> Fraction {
    Fraction {
        p: &f.q - &f.p,
        q: f.q.clone(),
    }
}

/// Inverse of `p` modulo `q` for coprime `p`, `q`.
pub fn mod_inverse(p: &BigUint, q: &BigUint) -> BigUint {
    let (p, q) = (BigInt::from(p.clone()), BigInt::from(q.clone()));
    let e = p.extended_gcd(&q);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(&q)
        .to_biguint()
        .expect("mod_floor of positive modulus is nonnegative")
}
