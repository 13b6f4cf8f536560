//! Symbolic "towers": integers of the shape `Σ cᵢ·2^(eᵢ) + c` where each
//! exponent `eᵢ` is itself a tower. Census sizes beyond day 5 are only
//! representable this way (`|M₆|` already has over a million digits).
//!
//! The normal form binary-decomposes coefficients so every power term carries
//! coefficient ±1, merges equal exponents, and sorts terms in descending
//! order of exact value. `2·2^a` thus folds into `2^(a+1)`, exactly the
//! like-term combining used in the published census figures.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// One power term: `coeff * 2^exponent`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub coeff: BigInt,
    pub exponent: Tower,
}

/// A symbolic integer: `terms + constant`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Tower {
    terms: Vec<Term>,
    constant: BigInt,
}

impl Tower {
    /// A plain integer as a tower.
    pub fn int(v: impl Into<BigInt>) -> Tower {
        Tower {
            terms: Vec::new(),
            constant: v.into(),
        }
    }

    /// The power `2^exponent`.
    pub fn power(exponent: Tower) -> Tower {
        Tower {
            terms: vec![Term {
                coeff: BigInt::one(),
                exponent,
            }],
            constant: BigInt::zero(),
        }
    }

    pub fn from_parts(terms: Vec<Term>, constant: BigInt) -> Tower {
        Tower { terms, constant }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn constant(&self) -> &BigInt {
        &self.constant
    }

    pub fn is_int(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of power terms (the constant is not a term).
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, coeff: impl Into<BigInt>, exponent: Tower) {
        self.terms.push(Term {
            coeff: coeff.into(),
            exponent,
        });
    }

    pub fn add_int(&mut self, v: impl Into<BigInt>) {
        self.constant += v.into();
    }

    pub fn add(&mut self, other: &Tower) {
        self.terms.extend_from_slice(&other.terms);
        self.constant += &other.constant;
    }

    pub fn sub(&mut self, other: &Tower) {
        for t in &other.terms {
            self.terms.push(Term {
                coeff: -&t.coeff,
                exponent: t.exponent.clone(),
            });
        }
        self.constant -= &other.constant;
    }

    fn plus_int(&self, k: i64) -> Tower {
        let mut t = self.clone();
        t.constant += k;
        t
    }

    /// Normal form: exponents normalized recursively, equal exponents merged,
    /// coefficients binary-decomposed to ±1 (so `2·2^a = 2^(a+1)`), zero
    /// terms dropped, terms sorted by descending value of exponent with any
    /// surviving negative digit after a positive one of equal exponent
    /// impossible by construction.
    pub fn normalize(&self) -> Tower {
        let mut entries: Vec<(Tower, BigInt)> = Vec::new();
        let mut pending: Vec<(Tower, BigInt)> = self
            .terms
            .iter()
            .map(|t| (t.exponent.normalize(), t.coeff.clone()))
            .collect();
        while let Some((e, c)) = pending.pop() {
            merge_entry(&mut entries, e, c);
        }
        // Fold the even part of every coefficient into its exponent
        // (m·2^j · 2^e = m·2^(e+j), m odd), so like terms combine into a
        // single term with an odd multiplicity.
        loop {
            let Some(i) = entries
                .iter()
                .position(|(_, c)| !c.is_zero() && (c % BigInt::from(2)).is_zero())
            else {
                break;
            };
            let (e, c) = entries.remove(i);
            merge_entry(&mut entries, e.plus_int(1), c / 2);
        }
        entries.retain(|(_, c)| !c.is_zero());
        entries.sort_by(|(a, _), (b, _)| cmp_value(b, a));
        Tower {
            terms: entries
                .into_iter()
                .map(|(exponent, coeff)| Term { coeff, exponent })
                .collect(),
            constant: self.constant.clone(),
        }
    }

    /// Evaluates to an integer, refusing once any power would exceed
    /// `max_bits` bits.
    pub fn to_decimal(&self, max_bits: u64) -> Result<BigInt> {
        let mut v = self.constant.clone();
        for t in &self.terms {
            let e = t.exponent.to_decimal(max_bits)?;
            let bits = e
                .to_u64()
                .filter(|&b| b <= max_bits)
                .ok_or_else(|| Error::TooLarge(format!("exponent {e} exceeds {max_bits} bits")))?;
            v += &t.coeff * (BigInt::one() << bits);
        }
        Ok(v)
    }
}

/// Adds `c·2^e` into `entries`, combining with an existing entry whose
/// exponent has the same value (structurally equal or, failing that,
/// comparing as equal) when one exists.
fn merge_entry(entries: &mut Vec<(Tower, BigInt)>, e: Tower, c: BigInt) {
    if c.is_zero() {
        return;
    }
    if let Some(entry) = entries
        .iter_mut()
        .find(|(ee, _)| *ee == e || try_cmp_value(ee, &e) == Some(std::cmp::Ordering::Equal))
    {
        entry.1 += c;
    } else {
        entries.push((e, c));
    }
}

/// Exact comparison of two towers by integer value.
///
/// Complete for towers whose exponents are plain integers (an exact shifted
/// accumulation) and for higher towers whose leading term dominates; panics
/// on pathological higher towers that would genuinely require evaluating a
/// number with more than 2²⁶ bits. Every tower produced by the counting
/// recurrences is comparable.
pub fn cmp_value(a: &Tower, b: &Tower) -> std::cmp::Ordering {
    try_cmp_value(a, b).expect("towers not comparable without full evaluation")
}

pub fn try_cmp_value(a: &Tower, b: &Tower) -> Option<std::cmp::Ordering> {
    use std::cmp::Ordering;
    if a == b {
        return Some(Ordering::Equal);
    }
    // Form the difference a - b, merged by exponent equality.
    let mut entries: Vec<(Tower, BigInt)> = Vec::new();
    for (t, sign) in a
        .terms
        .iter()
        .map(|t| (t, 1))
        .chain(b.terms.iter().map(|t| (t, -1)))
    {
        merge_entry(&mut entries, t.exponent.normalize(), &t.coeff * sign);
    }
    entries.retain(|(_, c)| !c.is_zero());
    let constant = &a.constant - &b.constant;
    sign_of(entries, constant).map(|s| s.cmp(&0))
}

/// Sign of `Σ cᵢ 2^(eᵢ) + constant`.
fn sign_of(mut entries: Vec<(Tower, BigInt)>, constant: BigInt) -> Option<i32> {
    if entries.is_empty() {
        return Some(if constant.is_zero() {
            0
        } else if constant.is_negative() {
            -1
        } else {
            1
        });
    }
    if entries.iter().all(|(e, _)| e.is_int()) {
        return sign_by_walk(&entries, &constant);
    }
    // Higher towers: leading-term domination.
    entries.sort_by(|(x, _), (y, _)| cmp_value(y, x));
    let (e1, c1) = &entries[0];
    let rest_mag: num_bigint::BigUint = entries[1..]
        .iter()
        .map(|(_, c)| c.magnitude())
        .sum::<num_bigint::BigUint>()
        + constant.magnitude();
    let bound = rest_mag.bits() as i64 + 1;
    let dominated = match entries.get(1) {
        Some((e2, _)) => cmp_value(e1, &e2.plus_int(bound)) == std::cmp::Ordering::Greater,
        None => cmp_value(e1, &Tower::int(bound)) == std::cmp::Ordering::Greater,
    };
    if dominated {
        return Some(if c1.is_negative() { -1 } else { 1 });
    }
    // Leading term too close to the next for domination: the exponent gap is
    // then small enough to evaluate exactly, so fold the top two terms into
    // one ((c1·2^gap + c2)·2^(e2)) and recurse on the shorter sum.
    if let Some((e2, c2)) = entries.get(1) {
        let mut gap_t = e1.clone();
        gap_t.sub(e2);
        let gap_t = gap_t.normalize();
        let gap = if gap_t.is_int() {
            gap_t.constant().to_u64()
        } else {
            gap_t.to_decimal(64).ok().and_then(|v| v.to_u64())
        };
        if let Some(gap) = gap.filter(|&g| g <= 1 << 20) {
            let folded = (c1.clone() << gap) + c2;
            let mut rest = entries.split_off(1);
            rest[0].1 = folded;
            return sign_of(rest, constant);
        }
    }
    // Last resort: evaluate outright if feasibly small.
    let full = Tower {
        terms: entries
            .into_iter()
            .map(|(exponent, coeff)| Term { coeff, exponent })
            .collect(),
        constant,
    };
    let v = full.to_decimal(1 << 26).ok()?;
    Some(if v.is_zero() {
        0
    } else if v.is_negative() {
        -1
    } else {
        1
    })
}

/// Exact sign of a sum with integer exponents: walk the terms from the
/// largest exponent down, shifting an accumulator across the gaps and
/// saturating once the result can no longer change sign.
fn sign_by_walk(entries: &[(Tower, BigInt)], constant: &BigInt) -> Option<i32> {
    let mut items: Vec<(BigInt, BigInt)> = entries
        .iter()
        .map(|(e, c)| (e.constant.clone(), c.clone()))
        .collect();
    if !constant.is_zero() {
        items.push((BigInt::zero(), constant.clone()));
    }
    // Merge equal exponents, sort descending.
    items.sort_by(|(e1, _), (e2, _)| e2.cmp(e1));
    let mut merged: Vec<(BigInt, BigInt)> = Vec::with_capacity(items.len());
    for (e, c) in items {
        if let Some(last) = merged.last_mut() {
            if last.0 == e {
                last.1 += c;
                continue;
            }
        }
        merged.push((e, c));
    }

    // Once |acc| reaches 2^100 at a shift point, later terms (each |coeff|
    // bounded well below 2^63) can never flip the sign: every further step at
    // least doubles the magnitude before adding one coefficient.
    const SAT: i128 = 1 << 100;
    let mut acc: i128 = 0;
    let mut prev: Option<BigInt> = None;
    for (e, c) in merged {
        if e.is_negative() {
            return None;
        }
        if let Some(p) = &prev {
            let gap = (p - &e).to_u64().unwrap_or(u64::MAX);
            if acc != 0 {
                let bits = 128 - acc.unsigned_abs().leading_zeros() as u64;
                if gap >= 120 - bits {
                    acc = if acc < 0 { -SAT } else { SAT };
                } else {
                    acc <<= gap as u32;
                    acc = acc.clamp(-SAT, SAT);
                }
            }
        }
        let c = c.to_i128()?;
        if c.unsigned_abs() >= 1 << 63 {
            return None;
        }
        acc = acc.saturating_add(c).clamp(-(SAT * 2), SAT * 2);
        prev = Some(e);
    }
    Some(acc.signum() as i32)
}

impl std::fmt::Display for Tower {
    /// Presentation form: terms in descending exponent order (negative before
    /// positive on ties), each coefficient expanded into unit powers, the
    /// constant last. `2^(...)` parenthesizes non-integer exponents.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut items: Vec<(&Tower, bool)> = Vec::new(); // (exponent, negative)
        for t in &self.terms {
            let count = t.coeff.magnitude().to_u64().unwrap_or(u64::MAX).min(1 << 20);
            for _ in 0..count {
                items.push((&t.exponent, t.coeff.is_negative()));
            }
        }
        items.sort_by(|(e1, n1), (e2, n2)| {
            try_cmp_value(e2, e1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(n2.cmp(n1))
        });
        let mut first = true;
        for (e, neg) in items {
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e.is_int() {
                write!(f, "2^{}", e.constant)?;
            } else {
                write!(f, "2^({e})")?;
            }
        }
        if first {
            write!(f, "{}", self.constant)?;
        } else if !self.constant.is_zero() {
            if self.constant.is_negative() {
                write!(f, " - {}", self.constant.magnitude())?;
            } else {
                write!(f, " + {}", self.constant)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn p(e: i64) -> Tower {
        Tower::power(Tower::int(e))
    }

    #[test]
    fn folding_pairs() {
        // 2^10 + 2^10 = 2^11.
        let mut t = p(10);
        t.add(&p(10));
        let n = t.normalize();
        assert_eq!(n, p(11).normalize());
        assert_eq!(n.term_count(), 1);
    }

    #[test]
    fn odd_coefficients_split() {
        // Odd multiplicities stay as one term; even parts fold upward.
        let mut t = Tower::int(0);
        t.add_term(3, Tower::int(4));
        let n = t.normalize();
        assert_eq!(n.to_decimal(64).unwrap(), BigInt::from(48));
        assert_eq!(n.term_count(), 1);

        let mut t = Tower::int(0);
        t.add_term(6, Tower::int(4));
        let n = t.normalize();
        assert_eq!(n.to_decimal(64).unwrap(), BigInt::from(96));
        assert_eq!(n.term_count(), 1);
        assert_eq!(n.terms()[0].coeff, BigInt::from(3));
        assert_eq!(n.terms()[0].exponent, Tower::int(5));
    }

    #[test]
    fn cancellation() {
        let mut t = p(9);
        t.sub(&p(9));
        t.add_int(4);
        let n = t.normalize();
        assert!(n.is_int());
        assert_eq!(n.constant(), &BigInt::from(4));
    }

    #[test]
    fn cmp_handles_adjacent_exponents() {
        // 2^a - 2^(a-1) > 0 and -2^a + 2^(a-1) < 0, at large a.
        let mut t = p(4_000_000);
        t.sub(&p(3_999_999));
        assert_eq!(cmp_value(&t, &Tower::int(0)), Ordering::Greater);
        let mut u = p(3_999_999);
        u.sub(&p(4_000_000));
        assert_eq!(cmp_value(&u, &Tower::int(0)), Ordering::Less);
        // 2^a vs 2^a + 1
        assert_eq!(cmp_value(&p(50), &p(50).plus_int(1)), Ordering::Less);
    }

    #[test]
    fn cmp_level_two() {
        // 2^(2^100) > 2^(2^100 - 1) + anything small.
        let big = Tower::power(p(100));
        let mut smaller = Tower::power(p(100).plus_int(-1));
        smaller.add_int(1_000_000);
        assert_eq!(cmp_value(&big, &smaller), Ordering::Greater);
    }

    #[test]
    fn to_decimal_respects_bound() {
        let t = p(100);
        assert!(t.to_decimal(64).is_err());
        assert_eq!(t.to_decimal(128).unwrap(), BigInt::one() << 100);
        let nested = Tower::power(p(100));
        assert!(nested.to_decimal(1 << 20).is_err());
    }

    #[test]
    fn normalize_is_idempotent() {
        let mut t = p(22);
        for e in [14, 12, 10, 10, 9] {
            t.sub(&p(e));
        }
        t.add(&p(9));
        t.add_int(4);
        let n = t.normalize();
        assert_eq!(n.normalize(), n);
        assert_eq!(n.to_decimal(64).unwrap(), BigInt::from(4_171_780));
    }
}
