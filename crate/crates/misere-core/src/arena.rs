//! Hash-consing arena for game forms.
//!
//! Every impartial game is identified with the set of its options, so a form
//! is just a strictly ascending slice of previously interned [`GameId`]s.
//! Interning guarantees that structurally identical forms share one id, which
//! lets every expensive operation (outcome, equality, canonicalization, sums,
//! parts) memoize on ids alone.

use std::sync::{Arc, Mutex, RwLock};

use dashmap::DashMap;

use crate::error::{Error, Result};

/// Opaque handle to an interned game form. Ids are dense and allocation-order
/// deterministic for a deterministic sequence of interns.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GameId(pub(crate) u32);

impl GameId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn raw(self) -> u32 {
        self.0
    }
}

/// Misère outcome of a game: previous-player win (`P`) or next-player win (`N`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Outcome {
    P,
    N,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::P => write!(f, "P"),
            Outcome::N => write!(f, "N"),
        }
    }
}

/// Parity of a game in the monoid: even games sum to 0-like behaviour with
/// themselves, odd games are even games plus a unit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// An interned form: its options, strictly ascending by id.
#[derive(Clone)]
pub struct GameForm {
    options: Arc<[GameId]>,
}

impl GameForm {
    pub fn options(&self) -> &[GameId] {
        &self.options
    }
}

/// Append-only arena of interned forms plus memo tables for the engine.
pub struct Arena {
    forms: RwLock<Vec<GameForm>>,
    ids: DashMap<Arc<[GameId]>, GameId>,
    /// Serializes id allocation so ids stay dense under concurrent interns.
    grow: Mutex<()>,
    /// Interned nimbers *0, *1, ... (index = nimber value).
    nimbers: RwLock<Vec<GameId>>,
    /// Reverse map: id of a nimber form -> its value.
    nimber_values: DashMap<GameId, u32>,

    pub(crate) outcome_memo: DashMap<GameId, Outcome>,
    pub(crate) fb_memo: DashMap<GameId, u32>,
    pub(crate) linked_memo: DashMap<(GameId, GameId), bool>,
    pub(crate) equals_memo: DashMap<(GameId, GameId), bool>,
    pub(crate) canon_memo: DashMap<GameId, GameId>,
    pub(crate) sum_memo: DashMap<(GameId, GameId), GameId>,
    pub(crate) sum_form_memo: DashMap<(GameId, GameId), GameId>,
    pub(crate) sum_outcome_memo: DashMap<(GameId, GameId), Outcome>,
    pub(crate) mate_memo: DashMap<GameId, GameId>,
    pub(crate) concubine_memo: DashMap<GameId, GameId>,
    pub(crate) parity_memo: DashMap<GameId, Parity>,
    pub(crate) parts_memo: DashMap<GameId, Arc<crate::parts::PartsTable>>,
    pub(crate) prime_partitions_memo: DashMap<GameId, Arc<Vec<Vec<GameId>>>>,
}

impl Default for Arena {
    fn default() -> Self {
        Self::new()
    }
}

impl Arena {
    /// Creates an arena with nimbers *0..*4 pre-interned, so the smallest ids
    /// are reproducible: 0 = *0, 1 = *1, 2 = *2, 3 = *3, 4 = *4.
    pub fn new() -> Self {
        let arena = Arena {
            forms: RwLock::new(Vec::new()),
            ids: DashMap::new(),
            grow: Mutex::new(()),
            nimbers: RwLock::new(Vec::new()),
            nimber_values: DashMap::new(),
            outcome_memo: DashMap::new(),
            fb_memo: DashMap::new(),
            linked_memo: DashMap::new(),
            equals_memo: DashMap::new(),
            canon_memo: DashMap::new(),
            sum_memo: DashMap::new(),
            sum_form_memo: DashMap::new(),
            sum_outcome_memo: DashMap::new(),
            mate_memo: DashMap::new(),
            concubine_memo: DashMap::new(),
            parity_memo: DashMap::new(),
            parts_memo: DashMap::new(),
            prime_partitions_memo: DashMap::new(),
        };
        for _ in 0..=4 {
            let n = arena.nimbers.read().unwrap().len() as u32;
            arena.nimber(n);
        }
        arena
    }

    /// Number of interned forms.
    pub fn len(&self) -> usize {
        self.forms.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Interns a form given by its options. The slice is sorted and
    /// deduplicated; every option must already be interned.
    pub fn intern(&self, options: &[GameId]) -> Result<GameId> {
        let len = self.len();
        for &o in options {
            if o.index() >= len {
                return Err(Error::InvalidHandle(o.0, len));
            }
        }
        let mut opts: Vec<GameId> = options.to_vec();
        opts.sort_unstable();
        opts.dedup();
        Ok(self.intern_sorted(opts.into()))
    }

    /// Interns a slice already known to be strictly ascending with valid ids.
    pub(crate) fn intern_sorted(&self, opts: Arc<[GameId]>) -> GameId {
        if let Some(id) = self.ids.get(&opts) {
            return *id;
        }
        let _guard = self.grow.lock().unwrap();
        if let Some(id) = self.ids.get(&opts) {
            return *id;
        }
        let mut forms = self.forms.write().unwrap();
        let id = GameId(forms.len() as u32);
        forms.push(GameForm {
            options: opts.clone(),
        });
        drop(forms);
        self.ids.insert(opts, id);
        id
    }

    /// The options of an interned form, strictly ascending.
    pub fn options(&self, g: GameId) -> Arc<[GameId]> {
        self.forms.read().unwrap()[g.index()].options.clone()
    }

    /// The canonical form of the nimber *m; `*0 = {}`, `*(m+1) = {*0..*m}`.
    pub fn nimber(&self, m: u32) -> GameId {
        {
            let cache = self.nimbers.read().unwrap();
            if let Some(&id) = cache.get(m as usize) {
                return id;
            }
        }
        let mut cache_len = self.nimbers.read().unwrap().len() as u32;
        while cache_len <= m {
            let opts: Vec<GameId> = {
                let cache = self.nimbers.read().unwrap();
                cache[..cache_len as usize].to_vec()
            };
            let id = self.intern_sorted(opts.into());
            let mut cache = self.nimbers.write().unwrap();
            if cache.len() as u32 == cache_len {
                cache.push(id);
                self.nimber_values.insert(id, cache_len);
            }
            cache_len = cache.len() as u32;
        }
        self.nimbers.read().unwrap()[m as usize]
    }

    /// If `g` is (identically) a nimber form, its value.
    pub fn nimber_value(&self, g: GameId) -> Option<u32> {
        self.nimber_values.get(&g).map(|v| *v)
    }

    /// Misère outcome: `N` iff `g` has no options or some option is a P-position.
    pub fn outcome(&self, g: GameId) -> Outcome {
        if let Some(o) = self.outcome_memo.get(&g) {
            return *o;
        }
        let opts = self.options(g);
        let out = if opts.is_empty() || opts.iter().any(|&o| self.outcome(o) == Outcome::P) {
            Outcome::N
        } else {
            Outcome::P
        };
        self.outcome_memo.insert(g, out);
        out
    }

    /// Formal birthday: height of the form as a tree (0 for the empty form).
    pub fn formal_birthday(&self, g: GameId) -> u32 {
        if let Some(b) = self.fb_memo.get(&g) {
            return *b;
        }
        let opts = self.options(g);
        let b = opts
            .iter()
            .map(|&o| self.formal_birthday(o) + 1)
            .max()
            .unwrap_or(0);
        self.fb_memo.insert(g, b);
        b
    }

    /// Mex-rule shortcut: if every option of `g` is identically a nimber and
    /// at least one of them is *0 or *1, the canonical form is the nimber
    /// whose value is the mex of the option values. Returns `None` when the
    /// rule does not apply (it never misfires, but it is not complete).
    pub fn mex_reduce(&self, g: GameId) -> Option<GameId> {
        let opts = self.options(g);
        if opts.is_empty() {
            return None;
        }
        let mut values = Vec::with_capacity(opts.len());
        for &o in opts.iter() {
            values.push(self.nimber_value(o)?);
        }
        if !values.iter().any(|&v| v <= 1) {
            return None;
        }
        values.sort_unstable();
        let mut mex = 0u32;
        for v in values {
            if v == mex {
                mex += 1;
            } else if v > mex {
                break;
            }
        }
        Some(self.nimber(mex))
    }

    /// Total order used for deterministic display and census ordering:
    /// first by formal birthday, then lexicographically by the (recursively
    /// ordered) ascending option sequences.
    pub fn cmp_games(&self, a: GameId, b: GameId) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if a == b {
            return Ordering::Equal;
        }
        match self.formal_birthday(a).cmp(&self.formal_birthday(b)) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (oa, ob) = (self.options(a), self.options(b));
        let mut sa: Vec<GameId> = oa.to_vec();
        let mut sb: Vec<GameId> = ob.to_vec();
        sa.sort_by(|&x, &y| self.cmp_games(x, y));
        sb.sort_by(|&x, &y| self.cmp_games(x, y));
        for (&x, &y) in sa.iter().zip(sb.iter()) {
            match self.cmp_games(x, y) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        sa.len().cmp(&sb.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nimber_ids_are_dense_and_small() {
        let a = Arena::new();
        for m in 0..=4 {
            assert_eq!(a.nimber(m), GameId(m));
        }
        assert_eq!(a.len(), 5);
    }

    #[test]
    fn intern_is_idempotent_and_sorts() {
        let a = Arena::new();
        let g = a.intern(&[GameId(2), GameId(0), GameId(2)]).unwrap();
        let h = a.intern(&[GameId(0), GameId(2)]).unwrap();
        assert_eq!(g, h);
        assert_eq!(a.options(g).as_ref(), &[GameId(0), GameId(2)]);
    }

    #[test]
    fn intern_rejects_unknown_ids() {
        let a = Arena::new();
        let bad = GameId(999);
        assert!(matches!(a.intern(&[bad]), Err(Error::InvalidHandle(999, _))));
    }

    #[test]
    fn outcomes_of_small_nimbers() {
        let a = Arena::new();
        assert_eq!(a.outcome(a.nimber(0)), Outcome::N);
        assert_eq!(a.outcome(a.nimber(1)), Outcome::P);
        assert_eq!(a.outcome(a.nimber(2)), Outcome::N);
        assert_eq!(a.outcome(a.nimber(3)), Outcome::N);
    }

    #[test]
    fn formal_birthday_counts_height() {
        let a = Arena::new();
        assert_eq!(a.formal_birthday(a.nimber(0)), 0);
        assert_eq!(a.formal_birthday(a.nimber(4)), 4);
        // {*2} has height 3 even though it is canonically born on day 3.
        let g = a.intern(&[a.nimber(2)]).unwrap();
        assert_eq!(a.formal_birthday(g), 3);
    }

    #[test]
    fn mex_reduce_examples() {
        let a = Arena::new();
        // {*2, *0} -> *1
        let g = a.intern(&[a.nimber(2), a.nimber(0)]).unwrap();
        assert_eq!(a.mex_reduce(g), Some(a.nimber(1)));
        // {*2} has no *0/*1 option: rule does not apply.
        let h = a.intern(&[a.nimber(2)]).unwrap();
        assert_eq!(a.mex_reduce(h), None);
        // {*0,*1,*2,*3} -> *4
        assert_eq!(a.mex_reduce(a.nimber(4)), Some(a.nimber(4)));
    }
}
