//! Primality and prime partitions.
//!
//! A *proper* part of `G` is one that is neither a unit (0 or *1) nor a unit
//! multiple of `G` itself. `G` is **prime** when it is not a unit and has no
//! proper parts, **composite** when it has at least one. A *prime partition*
//! expresses `G` as a sum of primes (possibly plus a unit); we normalize the unit
//! away by working with the even representative of each value.

use std::sync::Arc;

use crate::arena::{Arena, GameId, Parity};
use crate::error::{Error, Result};

impl Arena {
    /// The proper parts of `g`: parts that are not units and not `g` or its
    /// associate. Ascending by id.
    pub fn proper_parts(&self, g: GameId) -> Vec<GameId> {
        let g = self.canonicalize(g);
        let assoc = self.associate(g);
        let (zero, one) = (self.nimber(0), self.nimber(1));
        self.parts(g)
            .parts()
            .filter(|&x| x != zero && x != one && x != g && x != assoc)
            .collect()
    }

    /// Whether `g` is prime: not a unit, and no proper parts.
    pub fn is_prime(&self, g: GameId) -> bool {
        !self.is_unit(g) && self.proper_parts(g).is_empty()
    }

    /// Whether `g` is composite: not a unit, and has a proper part.
    pub fn is_composite(&self, g: GameId) -> bool {
        !self.is_unit(g) && !self.proper_parts(g).is_empty()
    }

    /// All partitions of `g` into even primes (each possibly implicitly
    /// carrying the unit on the whole sum): sorted multisets of canonical
    /// ids of *even associates* of primes. For an even `g`, multiplying the
    /// parts back (plus nothing) gives `g` or its associate depending on the
    /// parities absorbed; we normalize every prime to its even representative
    /// and record the multiset, so two partitions are identified exactly when
    /// the paper's Figure treats them as the same expression.
    pub fn prime_partitions(&self, g: GameId) -> Result<Arc<Vec<Vec<GameId>>>> {
        let g = self.canonicalize(g);
        if self.is_unit(g) {
            return Err(Error::Domain(
                "units have no prime partitions".to_string(),
            ));
        }
        Ok(self.prime_partitions_inner(self.even_rep(g)))
    }

    /// The even representative of a value: `g` if even, else its associate.
    pub fn even_rep(&self, g: GameId) -> GameId {
        let g = self.canonicalize(g);
        match self.parity(g) {
            Parity::Even => g,
            Parity::Odd => self.associate(g),
        }
    }

    fn prime_partitions_inner(&self, g: GameId) -> Arc<Vec<Vec<GameId>>> {
        debug_assert_eq!(self.parity(g), Parity::Even);
        if let Some(p) = self.prime_partitions_memo.get(&g) {
            return p.clone();
        }
        let mut results: Vec<Vec<GameId>> = Vec::new();
        if self.is_prime(g) {
            results.push(vec![g]);
        } else {
            // Composite: every partition starts with an even-prime part.
            let mut firsts: Vec<GameId> = self
                .proper_parts(g)
                .into_iter()
                .map(|x| self.even_rep(x))
                .filter(|&x| self.is_prime(x))
                .collect();
            firsts.sort_unstable();
            firsts.dedup();
            for p in firsts {
                // Counterpart of p (or of its odd associate) in g.
                let table = self.parts(g);
                let rest = table
                    .counterpart(p)
                    .or_else(|| table.counterpart(self.associate(p)));
                let Some(rest) = rest else { continue };
                let rest = self.even_rep(rest);
                if self.is_unit(rest) {
                    // g = p (+ unit): g prime would have caught this.
                    results.push(vec![p]);
                    continue;
                }
                for sub in self.prime_partitions_inner(rest).iter() {
                    let mut partition = Vec::with_capacity(sub.len() + 1);
                    partition.push(p);
                    partition.extend_from_slice(sub);
                    partition.sort_unstable();
                    results.push(partition);
                }
            }
            results.sort();
            results.dedup();
        }
        let arc = Arc::new(results);
        self.prime_partitions_memo.insert(g, arc.clone());
        arc
    }

    /// Whether `g` has a unique prime partition. Errors on units.
    pub fn has_upp(&self, g: GameId) -> Result<bool> {
        Ok(self.prime_partitions(g)?.len() == 1)
    }

    /// Whether `g` is biprime: composite, and every prime partition has
    /// exactly two primes.
    pub fn is_biprime(&self, g: GameId) -> Result<bool> {
        if self.is_unit(g) {
            return Err(Error::Domain("units are not biprime".to_string()));
        }
        if !self.is_composite(g) {
            return Ok(false);
        }
        let pp = self.prime_partitions(g)?;
        Ok(!pp.is_empty() && pp.iter().all(|p| p.len() == 2))
    }

    /// The largest number of primes over all prime partitions of `g`.
    pub fn max_prime_count(&self, g: GameId) -> Result<usize> {
        let pp = self.prime_partitions(g)?;
        Ok(pp.iter().map(|p| p.len()).max().unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let a = Arena::new();
        assert!(a.is_prime(a.nimber(2)));
        assert!(a.is_prime(a.nimber(3))); // *3 = *2 + *1: unit multiple of *2
        assert!(!a.is_prime(a.nimber(0)));
        assert!(!a.is_prime(a.nimber(1)));
        assert!(!a.is_composite(a.nimber(2)));
    }

    #[test]
    fn star2_plus_star2_is_biprime_with_upp() {
        let a = Arena::new();
        let g = a.sum(a.nimber(2), a.nimber(2));
        assert!(a.is_composite(g));
        let pp = a.prime_partitions(g).unwrap();
        assert_eq!(pp.as_ref(), &vec![vec![a.nimber(2), a.nimber(2)]]);
        assert!(a.has_upp(g).unwrap());
        assert!(a.is_biprime(g).unwrap());
    }

    #[test]
    fn units_are_rejected() {
        let a = Arena::new();
        assert!(a.prime_partitions(a.nimber(1)).is_err());
        assert!(a.has_upp(a.nimber(0)).is_err());
    }

    #[test]
    fn primes_trivially_have_upp() {
        let a = Arena::new();
        assert!(a.has_upp(a.nimber(2)).unwrap());
        assert_eq!(a.max_prime_count(a.nimber(2)).unwrap(), 1);
    }
}
