//! Symbolic census counting.
//!
//! Canonicity of a day-`n` candidate (a set of day-`n-1` members) is a local
//! condition, which turns census sizes into recurrences:
//!
//! ```text
//! |M_n|     = 2^|M_{n-1}| - Σ_{G ∈ M_{n-2}} |R_n^G|
//! |R_n^G|   = 2^|S_{n-1}^G| - 1                      (G not 0)
//! |R_n^0|   = 2^|S_{n-1}^0| - 2^|N_{n-1}^0|
//! |S_n^K|   = 2^(|M_{n-1}|-1) - Σ_{G ∈ K} |R_n^{G,K}| - Σ_{G ∈ S_{n-2}^K} |R_n^G|
//! |R_n^{G,K}| = 2^(|S_{n-1}^G|-1)                    (G not 0, or K a P-position)
//!             = 2^(|S_{n-1}^G|-1) - 2^(|N_{n-1}^0|-1) (G = 0, K an N-position)
//! |N_n|     = 2^|M_{n-1}| - 2^|N_{n-1}| + 1 - Σ_{G ∈ N_{n-2}} |R_n^G|
//! |N_n^0|   = 2^(|M_{n-1}|-1) - 2^(|N_{n-1}|-1) - Σ_{G ∈ N_{n-2}^0} |R_n^G|
//! ```
//!
//! where `S_n^G` are the day-`n` members with `G` as an option, `R_n^G` the
//! day-`n` candidate sets reducible to `G`, and `N_n` (`N_n^0`) the day-`n`
//! N-position members (with 0 as an option). A census of day `d` supports
//! `s/r` queries up to `n = d+1` and `m/n` counts up to `n = d+2`: one day of
//! exponents beyond what can be materialized, which is how `|M_7|` is reached
//! from the day-5 census.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::arena::Outcome;
use crate::census::Census;
use crate::error::{Error, Result};
use crate::tower::Tower;

/// Symbolic counting over a backing census.
pub struct Counter<'a> {
    census: &'a Census,
    /// s_count(day, g) for every possible option ordinal g, computed lazily
    /// (each entry is a full scan of the census).
    s_at_day: std::sync::OnceLock<Vec<u64>>,
}

impl<'a> Counter<'a> {
    pub fn new(census: &'a Census) -> Counter<'a> {
        Counter {
            census,
            s_at_day: std::sync::OnceLock::new(),
        }
    }

    fn day(&self) -> u32 {
        self.census.day()
    }

    fn need(&self, n: u32, slack: u32) -> Result<()> {
        if n > self.day() + slack {
            return Err(Error::InsufficientCensus {
                needed: n.saturating_sub(slack),
                have: self.day(),
            });
        }
        Ok(())
    }

    fn s_direct(&self, d: u32, g: u32) -> u64 {
        if d == self.day() {
            let cache = self.s_at_day.get_or_init(|| {
                let lim = (self.census.count_at(self.day().min(4)).min(32)) as u32;
                (0..lim).map(|g| self.census.s_count(self.day(), g)).collect()
            });
            if let Some(&v) = cache.get(g as usize) {
                return v;
            }
        }
        self.census.s_count(d, g)
    }

    /// |M_n| as a tower (exact integer tower when `n <= day`).
    pub fn m_sym(&self, n: u32) -> Result<Tower> {
        if n <= self.day() {
            return Ok(Tower::int(self.census.count_at(n)));
        }
        self.need(n, 2)?;
        if n == self.day() + 2 && self.census.count_at(self.day()) > 1_000 {
            return self.m_compact();
        }
        let head = self.m_sym(n - 1)?;
        let mut t = Tower::power(head);
        for g in 0..self.census.count_at(n - 2) {
            t.sub(&self.r_sym(n, g)?);
        }
        Ok(t)
    }

    /// |R_n^G|: day-`n` option sets reducible to member `g` (an ordinal of a
    /// game born by day `n-2`).
    pub fn r_sym(&self, n: u32, g: u32) -> Result<Tower> {
        // Only needs |S_{n-1}^G|, so one more day of slack than s_sym.
        self.need(n, 2)?;
        if n < 2 || g >= self.census.count_at(n - 2) {
            return Err(Error::Domain(format!(
                "r_sym: member {g} not born by day {}",
                n.saturating_sub(2)
            )));
        }
        let s = self.s_sym(n - 1, g)?;
        let mut t = Tower::power(s);
        if g == 0 {
            t.sub(&Tower::power(self.n0_sym(n - 1)?));
        } else {
            t.add_int(-1);
        }
        Ok(t)
    }

    /// |R_n^{G,K}|: as `r_sym` but restricted to sets containing the fixed
    /// day-`n-1` member `k` (of which `g` is an option).
    pub fn rk_sym(&self, n: u32, g: u32, k: u32) -> Result<Tower> {
        // Like r_sym, depends only on day n-1 quantities.
        self.need(n, 2)?;
        if self.census.mask(k) >> g & 1 != 1 {
            return Err(Error::Domain(format!(
                "rk_sym: member {g} is not an option of member {k}"
            )));
        }
        let s = self.s_sym(n - 1, g)?;
        let mut t = Tower::power(plus_int(s, -1));
        if g == 0 && self.census.outcome(k) == Outcome::N {
            t.sub(&Tower::power(plus_int(self.n0_sym(n - 1)?, -1)));
        }
        Ok(t)
    }

    /// |S_n^K|: day-`n` members having member `k` as an option.
    pub fn s_sym(&self, n: u32, k: u32) -> Result<Tower> {
        if n <= self.day() {
            return Ok(Tower::int(self.s_direct(n, k)));
        }
        self.need(n, 2)?;
        if k >= self.census.count_at((n - 1).min(self.day())) {
            return Err(Error::Domain(format!(
                "s_sym: member {k} not born by day {}",
                (n - 1).min(self.day())
            )));
        }
        let mut t = Tower::power(plus_int(self.m_sym(n - 1)?, -1));
        let mut bits = self.census.mask(k);
        while bits != 0 {
            let g = bits.trailing_zeros();
            bits &= bits - 1;
            t.sub(&self.rk_sym(n, g, k)?);
        }
        // Members of day n-2 having k as an option (only possible when k was
        // born by day n-3, i.e. has a small ordinal).
        if n >= 2 && k < 22 {
            for h in 0..self.census.count_at(n - 2) {
                if self.census.mask(h) >> k & 1 == 1 {
                    t.sub(&self.r_sym(n, h)?);
                }
            }
        }
        Ok(t)
    }

    /// |N_n|: N-position members born by day n.
    pub fn n_sym(&self, n: u32) -> Result<Tower> {
        if n <= self.day() {
            return Ok(Tower::int(self.census.n_count(n)));
        }
        self.need(n, 2)?;
        let mut t = Tower::power(self.m_sym(n - 1)?);
        t.sub(&Tower::power(self.n_sym(n - 1)?));
        t.add_int(1);
        if n >= 2 {
            for g in 0..self.census.count_at(n - 2) {
                if self.census.outcome(g) == Outcome::N {
                    t.sub(&self.r_sym(n, g)?);
                }
            }
        }
        Ok(t)
    }

    /// |N_n^0|: N-position members born by day n having 0 as an option.
    pub fn n0_sym(&self, n: u32) -> Result<Tower> {
        if n <= self.day() {
            return Ok(Tower::int(self.census.n0_count(n)));
        }
        self.need(n, 2)?;
        let mut t = Tower::power(plus_int(self.m_sym(n - 1)?, -1));
        t.sub(&Tower::power(plus_int(self.n_sym(n - 1)?, -1)));
        if n >= 2 {
            for g in 0..self.census.count_at(n - 2) {
                if self.census.outcome(g) == Outcome::N && self.census.mask(g) & 1 == 1 {
                    t.sub(&self.r_sym(n, g)?);
                }
            }
        }
        Ok(t)
    }

    /// |M_{day+2}| when the last census day is too large to loop over with
    /// general towers: every subtracted term is `2^|S_{d+1}^K|` where
    /// `|S_{d+1}^K|` depends only on `K`'s option mask and outcome, so the
    /// terms are computed in a compact fixed-width form, like terms combined
    /// by value, and pairs folded (`2·2^a = 2^(a+1)`) to a fixpoint.
    fn m_compact(&self) -> Result<Tower> {
        let day = self.day();
        let n = day + 2;
        let count = self.census.count_at(day);

        // Per-option-ordinal |S_day^G| (the 2^(s-1) exponents).
        let small = self.census.count_at(day.min(4)).min(32);
        let s_prev: Vec<i64> = (0..small).map(|g| self.s_direct(day, g) as i64).collect();
        let n0_prev = self.census.n0_count(day) as i64;

        // |S_{day+1}^K| = 2^(|M_day|-1) - Σ_{G∈K}|R^{G,K}| - Σ_{G∈S_{day-1}^K}|R^G|,
        // in compact form: implicit head 2^(|M_day|-1), then ±1 digits.
        let m_prev_minus1 = count as i64 - 1;

        // Which members of the previous census have k as an option, for the
        // small k that can appear as options of census members.
        let prev_limit = self.census.count_at(day - 1);
        let make_key = |k: u32| -> CompactKey {
            let mut digits: Vec<(i64, i64)> = Vec::new();
            let mask = self.census.mask(k);
            let mut bits = mask;
            while bits != 0 {
                let g = bits.trailing_zeros();
                bits &= bits - 1;
                digits.push((s_prev[g as usize] - 1, -1));
            }
            if mask & 1 == 1 && self.census.outcome(k) == Outcome::N {
                digits.push((n0_prev - 1, 1));
            }
            let mut constant = 0i64;
            if k < prev_limit {
                for h in 0..self.census.count_at(day - 1) {
                    if self.census.mask(h) >> k & 1 == 1 {
                        digits.push((s_prev[h as usize], -1));
                        constant += 1;
                    }
                }
            }
            CompactKey::new(digits, constant)
        };

        // Group the members by compact key, in parallel.
        let groups: HashMap<CompactKey, u64> = (0..count)
            .into_par_iter()
            .fold(HashMap::new, |mut acc: HashMap<CompactKey, u64>, k| {
                *acc.entry(make_key(k)).or_insert(0) += 1;
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            });

        // Fold the even part of every multiplicity into the exponent
        // (m·2^j equal terms → one term m·2^(S+j), m odd; the fold only
        // shifts the key's constant), then combine any groups whose distinct
        // digit shapes nevertheless carry equal values, repeating until the
        // multiplicities are odd and the values pairwise distinct.
        let mut keys: Vec<(CompactKey, u64)> = groups.into_iter().collect();
        loop {
            for (key, m) in &mut keys {
                let j = m.trailing_zeros();
                if j > 0 {
                    key.constant += j as i64;
                    *m >>= j;
                }
            }
            // Exact value order, descending.
            keys.par_sort_unstable_by(|(a, _), (b, _)| b.cmp_value(a));
            let mut merged: Vec<(CompactKey, u64)> = Vec::with_capacity(keys.len());
            let mut changed = false;
            for (key, m) in keys {
                match merged.last_mut() {
                    Some(last) if last.0.cmp_value(&key).is_eq() => {
                        last.1 += m;
                        changed = true;
                    }
                    _ => merged.push((key, m)),
                }
            }
            keys = merged;
            if !changed {
                break;
            }
        }

        // Assemble: 2^|M_{day+1}| - Σ m·2^(S-values) + 2^|N_{day+1}^0| + (|M_day| - 1).
        let head = self.m_sym(n - 1)?.normalize();
        let mut t = Tower::power(head);
        for (key, m) in &keys {
            t.add_term(-(*m as i64), key.to_tower(m_prev_minus1));
        }
        t.add_term(1, self.n0_sym(n - 1)?.normalize());
        t.add_int(count as i64 - 1);
        Ok(t)
    }
}

fn plus_int(mut t: Tower, k: i64) -> Tower {
    t.add_int(k);
    t
}

/// Compact form of one `|S_{day+1}^K|` value: an implicit head power plus a
/// handful of `(exponent, ±1)` digits and a small constant. Digits are merged
/// and folded so that equal keys mean equal values.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct CompactKey {
    /// Strictly descending exponents with odd coefficients.
    digits: Vec<(i64, i64)>,
    constant: i64,
}

impl CompactKey {
    fn new(raw: Vec<(i64, i64)>, constant: i64) -> CompactKey {
        // Merge equal exponents and fold the even part of every coefficient
        // upward (m·2^j · 2^e = m·2^(e+j), m odd), mirroring normalize. The
        // result keeps the published digit shapes; value-uniqueness of the
        // grouped keys is checked after sorting in m_compact.
        let mut map: std::collections::BTreeMap<i64, i64> = std::collections::BTreeMap::new();
        for (e, c) in raw {
            *map.entry(e).or_insert(0) += c;
        }
        let mut digits: Vec<(i64, i64)> = Vec::new();
        while let Some((&e, _)) = map.iter().next() {
            let c = map.remove(&e).unwrap();
            if c == 0 {
                continue;
            }
            if c % 2 == 0 {
                *map.entry(e + 1).or_insert(0) += c / 2;
                continue;
            }
            digits.push((e, c));
        }
        digits.reverse();
        CompactKey { digits, constant }
    }

    /// Exact value comparison (the implicit head is shared by all keys).
    fn cmp_value(&self, other: &CompactKey) -> std::cmp::Ordering {
        // Walk both digit lists (descending) accumulating the difference,
        // exactly as towers compare, but allocation-free.
        let (mut i, mut j) = (0, 0);
        let mut acc: i128 = 0;
        const SAT: i128 = 1 << 100;
        let mut prev: Option<i64> = None;
        loop {
            let ea = self.digits.get(i).map(|&(e, _)| e);
            let eb = other.digits.get(j).map(|&(e, _)| e);
            let e = match (ea, eb) {
                (None, None) => break,
                (a, b) => a.max(b).unwrap(),
            };
            let mut c: i128 = 0;
            if ea == Some(e) {
                c += self.digits[i].1 as i128;
                i += 1;
            }
            if eb == Some(e) {
                c -= other.digits[j].1 as i128;
                j += 1;
            }
            if let Some(p) = prev {
                let gap = (p - e) as u128;
                if acc != 0 {
                    let bits = 128 - acc.unsigned_abs().leading_zeros() as u128;
                    if gap >= 120 - bits {
                        acc = if acc < 0 { -SAT } else { SAT };
                    } else {
                        acc <<= gap as u32;
                    }
                }
            }
            acc = (acc + c).clamp(-SAT * 2, SAT * 2);
            prev = Some(e);
        }
        let cd = (self.constant - other.constant) as i128;
        if acc == 0 {
            return cd.cmp(&0);
        }
        // acc is the digit difference divided by 2^p; when small enough,
        // finish exactly, otherwise the digits dominate the constants
        // (which stay tiny compared to any 2^100 saturation).
        let p = prev.expect("digits exist when acc is nonzero") as u32;
        let bits = 128 - acc.unsigned_abs().leading_zeros();
        if p + bits < 100 {
            return ((acc << p) + cd).cmp(&0);
        }
        acc.cmp(&0)
    }

    fn to_tower(&self, head_exp: i64) -> Tower {
        let mut t = Tower::power(Tower::int(head_exp));
        for &(e, c) in &self.digits {
            t.add_term(c, Tower::int(e));
        }
        t.add_int(self.constant);
        t
    }
}
