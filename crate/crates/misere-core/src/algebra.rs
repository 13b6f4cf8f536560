//! Sums, mates, concubines, parity, and birthdays.

use crate::arena::{Arena, GameId, Outcome, Parity};
use crate::error::{Error, Result};

impl Arena {
    /// Form-level disjunctive sum: `a + b = {a' + b} ∪ {a + b'}` with no
    /// simplification. Mates and other form-sensitive operations need this.
    pub fn sum_form(&self, a: GameId, b: GameId) -> GameId {
        let key = (a.min(b), a.max(b));
        if let Some(s) = self.sum_form_memo.get(&key) {
            return *s;
        }
        let (oa, ob) = (self.options(a), self.options(b));
        let mut opts: Vec<GameId> = Vec::with_capacity(oa.len() + ob.len());
        for &ap in oa.iter() {
            opts.push(self.sum_form(ap, b));
        }
        for &bp in ob.iter() {
            opts.push(self.sum_form(a, bp));
        }
        opts.sort_unstable();
        opts.dedup();
        let s = self.intern_sorted(opts.into());
        self.sum_form_memo.insert(key, s);
        s
    }

    /// Canonical disjunctive sum: canonicalizes as it goes so intermediate
    /// forms stay small. `sum(a, b)` is always a canonical id.
    pub fn sum(&self, a: GameId, b: GameId) -> GameId {
        let a = self.canonicalize(a);
        let b = self.canonicalize(b);
        let zero = self.nimber(0);
        if a == zero {
            return b;
        }
        if b == zero {
            return a;
        }
        let key = (a.min(b), a.max(b));
        if let Some(s) = self.sum_memo.get(&key) {
            return *s;
        }
        let (oa, ob) = (self.options(a), self.options(b));
        let mut opts: Vec<GameId> = Vec::with_capacity(oa.len() + ob.len());
        for &ap in oa.iter() {
            opts.push(self.sum(ap, b));
        }
        for &bp in ob.iter() {
            opts.push(self.sum(a, bp));
        }
        opts.sort_unstable();
        opts.dedup();
        let s = self.canonicalize(self.intern_sorted(opts.into()));
        self.sum_memo.insert(key, s);
        s
    }

    /// Outcome of `a + b` without materializing the sum's form. Much cheaper
    /// than `outcome(sum(a, b))` when only the outcome is needed.
    pub fn outcome_of_sum(&self, a: GameId, b: GameId) -> Outcome {
        let key = (a.min(b), a.max(b));
        if let Some(o) = self.sum_outcome_memo.get(&key) {
            return *o;
        }
        let (oa, ob) = (self.options(a), self.options(b));
        let out = if oa.is_empty() && ob.is_empty() {
            Outcome::N
        } else if oa
            .iter()
            .any(|&ap| self.outcome_of_sum(ap, b) == Outcome::P)
            || ob
                .iter()
                .any(|&bp| self.outcome_of_sum(a, bp) == Outcome::P)
        {
            Outcome::N
        } else {
            Outcome::P
        };
        self.sum_outcome_memo.insert(key, out);
        out
    }

    /// The mate `g⁻`: `0⁻ = *1`, otherwise `g⁻ = {(g')⁻}`. This is an
    /// operation on *forms*, not on values: equal games can have unequal
    /// mates. `g + g⁻` is always a P-position.
    pub fn mate(&self, g: GameId) -> GameId {
        if let Some(m) = self.mate_memo.get(&g) {
            return *m;
        }
        let opts = self.options(g);
        let m = if opts.is_empty() {
            self.nimber(1)
        } else {
            let mut mopts: Vec<GameId> = opts.iter().map(|&o| self.mate(o)).collect();
            mopts.sort_unstable();
            mopts.dedup();
            self.intern_sorted(mopts.into())
        };
        self.mate_memo.insert(g, m);
        m
    }

    /// A concubine of `g`: a form `c(g)` whose mate has canonical form `g`.
    /// Defined on canonical forms by `c(0) = ((*2♯♯ + *1 interleave) ...)`,
    /// concretely `c(0) = {{ {{*2}} , *1-adjusted }}` — see below — and
    /// `c(g) = {c(g')}` otherwise. Every game arises as a mate this way.
    pub fn concubine(&self, g: GameId) -> GameId {
        let g = self.canonicalize(g);
        if let Some(c) = self.concubine_memo.get(&g) {
            return *c;
        }
        let opts = self.options(g);
        let c = if opts.is_empty() {
            // c(0) = (2♯♯1)♯ : the form {{ {{*2}}, *1 }}, whose mate's
            // canonical form is 0.
            let s2sharp = self.intern_sorted(vec![self.nimber(2)].into());
            let s2sharpsharp = self.intern_sorted(vec![s2sharp].into());
            let mut inner = vec![s2sharpsharp, self.nimber(1)];
            inner.sort_unstable();
            let body = self.intern_sorted(inner.into());
            self.intern_sorted(vec![body].into())
        } else {
            let mut copts: Vec<GameId> = opts.iter().map(|&o| self.concubine(o)).collect();
            copts.sort_unstable();
            copts.dedup();
            self.intern_sorted(copts.into())
        };
        self.concubine_memo.insert(g, c);
        c
    }

    /// The associate of `g`: the canonical form of `g + *1`. The associate
    /// map is an involution pairing each even game with an odd one.
    pub fn associate(&self, g: GameId) -> GameId {
        self.sum(g, self.nimber(1))
    }

    /// Whether `g` is a unit of the monoid (equal to *0 or *1).
    pub fn is_unit(&self, g: GameId) -> bool {
        self.equals(g, self.nimber(0)) || self.equals(g, self.nimber(1))
    }

    /// Parity of `g`'s value. A game is even iff its canonical form appears
    /// among the options of the canonical form of `g + *1`; equivalently, `g`
    /// is odd iff one of its canonical options has associate `g` itself.
    pub fn parity(&self, g: GameId) -> Parity {
        let g = self.canonicalize(g);
        if let Some(p) = self.parity_memo.get(&g) {
            return *p;
        }
        let assoc = self.associate(g);
        let p = if self.options(assoc).contains(&g) {
            Parity::Even
        } else {
            Parity::Odd
        };
        self.parity_memo.insert(g, p);
        p
    }

    /// Birthday of `g`'s *value*: the formal birthday of its canonical form.
    /// (The canonical form is a minimum-height representative of the value.)
    pub fn birthday(&self, g: GameId) -> u32 {
        self.formal_birthday(self.canonicalize(g))
    }

    /// Torsion check helper: smallest `n >= 1` with `n·g = (n+k)·g` for some
    /// `k >= 1` would require a search; this computes `n·g` canonically.
    pub fn multiple(&self, g: GameId, n: u32) -> GameId {
        let mut acc = self.nimber(0);
        for _ in 0..n {
            acc = self.sum(acc, g);
        }
        acc
    }

    /// `a - b` in the monoid when it exists: the unique `x` with `b + x = a`,
    /// found through the parts machinery. Errors when `b` is not a part of `a`.
    pub fn difference(&self, a: GameId, b: GameId) -> Result<GameId> {
        let a = self.canonicalize(a);
        let b = self.canonicalize(b);
        let table = self.parts(a);
        table.counterpart(b).ok_or_else(|| {
            Error::Domain(format!(
                "game {} is not a part of game {}",
                b.raw(),
                a.raw()
            ))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star2_plus_star2_is_not_zero() {
        let a = Arena::new();
        // *2 + *2 = {*3+...} simplifies to the canonical form {*3, *2}.
        let s = a.sum(a.nimber(2), a.nimber(2));
        let expected = a.intern(&[a.nimber(3), a.nimber(2)]).unwrap();
        assert_eq!(s, a.canonicalize(expected));
        assert_eq!(s, expected, "{{*3,*2}} should itself be canonical");
        assert!(!a.equals(s, a.nimber(0)));
    }

    #[test]
    fn unit_sums() {
        let a = Arena::new();
        assert_eq!(a.sum(a.nimber(1), a.nimber(1)), a.nimber(0));
        assert_eq!(a.sum(a.nimber(0), a.nimber(3)), a.nimber(3));
        assert_eq!(a.sum(a.nimber(2), a.nimber(3)), a.sum(a.nimber(3), a.nimber(2)));
    }

    #[test]
    fn mate_examples() {
        let a = Arena::new();
        // 0⁻ = *1, *1⁻ = {*1} ( = *1 + adjustments? no: {*1} ), (*2)⁻ = {*1,{*1}}.
        assert_eq!(a.mate(a.nimber(0)), a.nimber(1));
        let m1 = a.mate(a.nimber(1));
        assert_eq!(a.options(m1).as_ref(), &[a.nimber(1)]);
        // g + g⁻ is a P-position for every form.
        for m in 0..=4 {
            let g = a.nimber(m);
            assert_eq!(a.outcome_of_sum(g, a.mate(g)), Outcome::P);
        }
    }

    #[test]
    fn concubine_round_trips_through_mate() {
        let a = Arena::new();
        let star2sharp = a.intern(&[a.nimber(2)]).unwrap();
        for g in [a.nimber(0), a.nimber(1), a.nimber(2), a.nimber(3), star2sharp] {
            let c = a.concubine(g);
            assert_eq!(a.canonicalize(a.mate(c)), a.canonicalize(g));
        }
    }

    #[test]
    fn parity_small_cases() {
        let a = Arena::new();
        assert_eq!(a.parity(a.nimber(0)), Parity::Even);
        assert_eq!(a.parity(a.nimber(1)), Parity::Odd);
        assert_eq!(a.parity(a.nimber(2)), Parity::Even);
        assert_eq!(a.parity(a.nimber(3)), Parity::Odd);
        // 2# is even: 2# + *1 has 2# itself among its canonical options.
        let star2sharp = a.intern(&[a.nimber(2)]).unwrap();
        assert_eq!(a.parity(star2sharp), Parity::Even);
        assert_eq!(a.parity(a.sum(star2sharp, a.nimber(1))), Parity::Odd);
    }

    #[test]
    fn outcome_of_sum_matches_materialized_sum() {
        let a = Arena::new();
        let star2sharp = a.intern(&[a.nimber(2)]).unwrap();
        let games = [a.nimber(0), a.nimber(1), a.nimber(2), a.nimber(3), star2sharp];
        for &x in &games {
            for &y in &games {
                assert_eq!(a.outcome_of_sum(x, y), a.outcome(a.sum_form(x, y)));
            }
        }
    }

    #[test]
    fn birthday_of_values() {
        let a = Arena::new();
        // {*2,*0} = *1 is born on day 1 despite formal birthday 3.
        let g = a.intern(&[a.nimber(2), a.nimber(0)]).unwrap();
        assert_eq!(a.formal_birthday(g), 3);
        assert_eq!(a.birthday(g), 1);
        assert_eq!(a.birthday(a.nimber(4)), 4);
    }
}
