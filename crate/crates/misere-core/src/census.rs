//! Census of canonical games by birthday.
//!
//! Every canonical game born by day `n` has all of its options among the
//! members born by day `n-1`, so once the day-4 census (22 games) is known,
//! every candidate for day 5 is a subset of those 22 members: a `u32`
//! bitmask. A mask is a *new* canonical game iff it contains an option born
//! exactly on day `n-1` and is not reducible to an earlier game `G`, where
//! reducibility means: every option of `G` appears in the mask, every
//! remaining option of the mask has `G` itself as an option (so it reverses
//! out through `G`), and — when `G = 0` — the mask is an N-position.
//!
//! Members are ordered by (birthday, lexicographic option sequence), which
//! makes ordinals stable: the census for day `n-1` is a prefix of the census
//! for day `n`.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::arena::{Arena, GameId, Outcome};
use crate::error::{Error, Result};

/// The largest day the bitmask representation supports (and the largest
/// census that fits in memory anyway).
pub const MAX_DAY: u32 = 5;

/// Census of all canonical games born by some day `<= 5`.
pub struct Census {
    day: u32,
    /// Option sets, one bit per earlier-born member ordinal.
    masks: Vec<u32>,
    birthdays: Vec<u8>,
    /// Outcome per member, true = P-position.
    is_p: Vec<bool>,
    /// counts[d] = number of members born by day d.
    counts: Vec<u32>,
}

impl Census {
    /// Enumerates all canonical games born by `day` (capacity error above 5).
    pub fn enumerate(day: u32) -> Result<Census> {
        if day > MAX_DAY {
            return Err(Error::Capacity(format!(
                "census supports day <= {MAX_DAY}, got {day}"
            )));
        }
        let mut c = Census {
            day: 0,
            masks: vec![0],
            birthdays: vec![0],
            is_p: vec![false],
            counts: vec![1],
        };
        for d in 1..=day {
            c.grow_one_day(d);
        }
        Ok(c)
    }

    fn grow_one_day(&mut self, d: u32) {
        let prev_total = self.masks.len() as u32;
        debug_assert!(prev_total <= 22);
        // Members born exactly on day d-1 have ordinal >= floor.
        let floor = if d >= 2 {
            self.counts[(d - 2) as usize]
        } else {
            0
        };
        let cand_count = floor as usize; // reduction targets: born by day d-2

        let mut pmask: u32 = 0;
        for i in 0..prev_total as usize {
            if self.is_p[i] {
                pmask |= 1 << i;
            }
        }
        // smask[j] = prev members having member j as an option.
        let mut smask = vec![0u32; cand_count];
        for i in 0..prev_total as usize {
            let m = self.masks[i];
            for (j, s) in smask.iter_mut().enumerate() {
                if m >> j & 1 == 1 {
                    *s |= 1 << i;
                }
            }
        }
        let cand_masks: Vec<u32> = self.masks[..cand_count].to_vec();

        let is_new = |mask: u32| -> bool {
            if mask >> floor == 0 {
                return false; // no option born exactly on day d-1
            }
            for j in 0..cand_count {
                let g = cand_masks[j];
                if g & !mask != 0 {
                    continue; // an option of G is missing from H
                }
                let extra = mask & !g;
                debug_assert_ne!(extra, 0);
                if extra & !smask[j] != 0 {
                    continue; // an extra option does not reverse through G
                }
                if j == 0 && mask & pmask == 0 {
                    continue; // proviso: H must be an N-position to equal 0
                }
                return false; // reducible to G
            }
            true
        };

        let space: u64 = 1u64 << prev_total;
        let mut new_masks: Vec<u32> = if prev_total > 16 {
            const CHUNK: u64 = 1 << 16;
            let chunks: Vec<Vec<u32>> = (0..space.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| {
                    let lo = c * CHUNK;
                    let hi = (lo + CHUNK).min(space);
                    (lo..hi)
                        .map(|m| m as u32)
                        .filter(|&m| is_new(m))
                        .collect()
                })
                .collect();
            chunks.concat()
        } else {
            (0..space).map(|m| m as u32).filter(|&m| is_new(m)).collect()
        };
        new_masks.sort_unstable_by(|&a, &b| cmp_masks(a, b));

        for m in new_masks {
            self.masks.push(m);
            self.birthdays.push(d as u8);
            self.is_p.push(m & pmask == 0); // nonempty, no P option => P
        }
        self.counts.push(self.masks.len() as u32);
        self.day = d;
    }

    pub fn day(&self) -> u32 {
        self.day
    }

    /// Total number of members (games born by `self.day()`).
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Number of members born by day `d`.
    pub fn count_at(&self, d: u32) -> u32 {
        self.counts[d as usize]
    }

    pub fn mask(&self, ordinal: u32) -> u32 {
        self.masks[ordinal as usize]
    }

    pub fn birthday(&self, ordinal: u32) -> u32 {
        self.birthdays[ordinal as usize] as u32
    }

    pub fn outcome(&self, ordinal: u32) -> Outcome {
        if self.is_p[ordinal as usize] {
            Outcome::P
        } else {
            Outcome::N
        }
    }

    /// |S_d^g|: members born by day `d` having member `g` as an option.
    pub fn s_count(&self, d: u32, g: u32) -> u64 {
        let limit = self.counts[d as usize] as usize;
        self.masks[..limit]
            .iter()
            .filter(|&&m| m >> g & 1 == 1)
            .count() as u64
    }

    /// |N_d|: N-positions born by day d.
    pub fn n_count(&self, d: u32) -> u64 {
        let limit = self.counts[d as usize] as usize;
        self.is_p[..limit].iter().filter(|&&p| !p).count() as u64
    }

    /// |N_d^0|: N-positions born by day d that have 0 as an option.
    pub fn n0_count(&self, d: u32) -> u64 {
        let limit = self.counts[d as usize] as usize;
        (0..limit)
            .filter(|&i| !self.is_p[i] && self.masks[i] & 1 == 1)
            .count() as u64
    }

    /// Finds the ordinal of a mask via the census ordering (binary search in
    /// its birthday segment).
    pub fn ordinal_of_mask(&self, mask: u32) -> Option<u32> {
        let bd = if mask == 0 {
            0
        } else {
            let top = 31 - mask.leading_zeros();
            if top as usize >= self.len() {
                return None;
            }
            // Ordinals ascend with birthday, so the top bit is the youngest.
            1 + self.birthday(top)
        };
        if bd > self.day {
            return None;
        }
        let lo = if bd == 0 { 0 } else { self.counts[(bd - 1) as usize] } as usize;
        let hi = self.counts[bd as usize] as usize;
        self.masks[lo..hi]
            .binary_search_by(|&m| cmp_masks(m, mask))
            .ok()
            .map(|i| (lo + i) as u32)
    }

    /// Serializes to the census text format and returns the bytes written.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut body = String::with_capacity(self.len() * 24);
        body.push_str(&format!(
            "MISERE-CENSUS v1 day={} count={}\n",
            self.day,
            self.len()
        ));
        for (i, &m) in self.masks.iter().enumerate() {
            body.push_str(&i.to_string());
            body.push(':');
            let mut bits = m;
            while bits != 0 {
                let j = bits.trailing_zeros();
                bits &= bits - 1;
                body.push(' ');
                body.push_str(&j.to_string());
            }
            body.push('\n');
        }
        let digest = Sha256::digest(body.as_bytes());
        let mut file = std::fs::File::create(path)?;
        file.write_all(body.as_bytes())?;
        file.write_all(format!("sha256={digest:x}\n").as_bytes())?;
        Ok(())
    }

    /// Loads and fully validates a census file (checksum, version, shape).
    pub fn load(path: &Path) -> Result<Census> {
        let mut raw = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut raw)?;
        let text = std::str::from_utf8(&raw)
            .map_err(|_| Error::Malformed("file is not utf-8".into()))?;

        // The footer is the final line; a missing or wrong footer (including
        // any truncation) is a checksum error.
        let body_end = text
            .trim_end_matches('\n')
            .rfind('\n')
            .map(|i| i + 1)
            .unwrap_or(0);
        let footer = text[body_end..].trim_end();
        let Some(expected) = footer.strip_prefix("sha256=") else {
            return Err(Error::Checksum("missing sha256 footer".into()));
        };
        let actual = format!("{:x}", Sha256::digest(&text.as_bytes()[..body_end]));
        if actual != expected {
            return Err(Error::Checksum(format!(
                "expected {expected}, computed {actual}"
            )));
        }

        let mut lines = text[..body_end].lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Malformed("empty file".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("MISERE-CENSUS") {
            return Err(Error::Malformed("bad magic".into()));
        }
        match fields.next() {
            Some("v1") => {}
            Some(v) => return Err(Error::Version(v.to_string())),
            None => return Err(Error::Malformed("missing version".into())),
        }
        let mut day = None;
        let mut count = None;
        for f in fields {
            if let Some(v) = f.strip_prefix("day=") {
                day = v.parse::<u32>().ok();
            } else if let Some(v) = f.strip_prefix("count=") {
                count = v.parse::<usize>().ok();
            }
        }
        let day = day.ok_or_else(|| Error::Malformed("missing day".into()))?;
        let count = count.ok_or_else(|| Error::Malformed("missing count".into()))?;
        if day > MAX_DAY {
            return Err(Error::Capacity(format!("day {day} in file")));
        }

        let mut masks: Vec<u32> = Vec::with_capacity(count);
        let mut birthdays: Vec<u8> = Vec::with_capacity(count);
        for (i, line) in lines.enumerate() {
            let (id, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::Malformed(format!("line {}: missing ':'", i + 2)))?;
            if id.trim().parse::<usize>() != Ok(i) {
                return Err(Error::Malformed(format!("line {}: ids not dense", i + 2)));
            }
            let mut mask = 0u32;
            let mut bd = 0u8;
            let mut prev: Option<u32> = None;
            for tok in rest.split_whitespace() {
                let j: u32 = tok
                    .parse()
                    .map_err(|_| Error::Malformed(format!("line {}: bad option", i + 2)))?;
                if j as usize >= i || prev.is_some_and(|p| p >= j) {
                    return Err(Error::Malformed(format!(
                        "line {}: options not ascending ordinals of earlier members",
                        i + 2
                    )));
                }
                prev = Some(j);
                if j >= 32 {
                    return Err(Error::Malformed(format!("line {}: option too large", i + 2)));
                }
                mask |= 1 << j;
                bd = bd.max(birthdays[j as usize] + 1);
            }
            masks.push(mask);
            birthdays.push(bd);
        }
        if masks.len() != count {
            return Err(Error::Malformed(format!(
                "count={} but {} member lines",
                count,
                masks.len()
            )));
        }

        // Rebuild outcomes and per-day counts.
        let mut is_p: Vec<bool> = Vec::with_capacity(count);
        for i in 0..count {
            let mut bits = masks[i];
            let mut p = bits != 0;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if is_p[j] {
                    p = false;
                    break;
                }
            }
            is_p.push(p);
        }
        let mut counts = vec![0u32; (day + 1) as usize];
        for (i, &bd) in birthdays.iter().enumerate() {
            if bd as u32 > day {
                return Err(Error::Malformed(format!(
                    "member {i} has birthday {bd} beyond day {day}"
                )));
            }
            for d in bd as usize..=day as usize {
                counts[d] += 1;
            }
        }
        Ok(Census {
            day,
            masks,
            birthdays,
            is_p,
            counts,
        })
    }
}

/// Census order for two masks of equal birthday: lexicographic comparison of
/// their ascending option sequences (a proper prefix sorts first).
pub fn cmp_masks(a: u32, b: u32) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if a == b {
        return Ordering::Equal;
    }
    let t = (a ^ b).trailing_zeros();
    let above = u32::MAX.checked_shl(t + 1).unwrap_or(0);
    if a >> t & 1 == 1 {
        // a's next element is t; b continues with something larger or ends.
        if b & above != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    } else if a & above != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Two-way mapping between census ordinals (for members born by a prefix day)
/// and canonical engine ids.
pub struct CensusBridge {
    to_engine: Vec<GameId>,
    to_ordinal: std::collections::HashMap<GameId, u32>,
}

impl CensusBridge {
    /// Interns every member born by `through_day` into the arena.
    pub fn new(arena: &Arena, census: &Census, through_day: u32) -> Result<CensusBridge> {
        let limit = census.count_at(through_day.min(census.day()));
        let mut to_engine: Vec<GameId> = Vec::with_capacity(limit as usize);
        let mut to_ordinal = std::collections::HashMap::new();
        for i in 0..limit {
            let mut bits = census.mask(i);
            let mut opts = Vec::new();
            while bits != 0 {
                let j = bits.trailing_zeros();
                bits &= bits - 1;
                opts.push(to_engine[j as usize]);
            }
            let id = arena.intern(&opts)?;
            to_engine.push(id);
            to_ordinal.insert(id, i);
        }
        Ok(CensusBridge {
            to_engine,
            to_ordinal,
        })
    }

    pub fn engine_id(&self, ordinal: u32) -> GameId {
        self.to_engine[ordinal as usize]
    }

    pub fn ordinal(&self, id: GameId) -> Option<u32> {
        self.to_ordinal.get(&id).copied()
    }

    pub fn len(&self) -> usize {
        self.to_engine.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_engine.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_through_day_four() {
        let c = Census::enumerate(4).unwrap();
        assert_eq!(c.count_at(0), 1);
        assert_eq!(c.count_at(1), 2);
        assert_eq!(c.count_at(2), 3);
        assert_eq!(c.count_at(3), 5);
        assert_eq!(c.count_at(4), 22);
    }

    #[test]
    fn small_ordinals_are_nimbers_then_sharps() {
        let c = Census::enumerate(4).unwrap();
        // 0,1,2 are nimbers; 3 = *3 = {0,1,2}; 4 = {2} = 2#.
        assert_eq!(c.mask(1), 0b1);
        assert_eq!(c.mask(2), 0b11);
        assert_eq!(c.mask(3), 0b111);
        assert_eq!(c.mask(4), 0b100);
        // First day-4 member is *4 = {0,1,2,3}.
        assert_eq!(c.mask(5), 0b1111);
    }

    #[test]
    fn outcomes_of_day_three_members() {
        let c = Census::enumerate(3).unwrap();
        let outcomes: Vec<Outcome> = (0..5).map(|i| c.outcome(i)).collect();
        assert_eq!(
            outcomes,
            [Outcome::N, Outcome::P, Outcome::N, Outcome::N, Outcome::P]
        );
    }

    #[test]
    fn day_four_outcome_counts() {
        let c = Census::enumerate(4).unwrap();
        assert_eq!(c.n_count(4), 18);
        assert_eq!(c.n0_count(4), 9);
    }

    #[test]
    fn prefix_property() {
        let c4 = Census::enumerate(4).unwrap();
        let c5 = Census::enumerate(5).unwrap();
        for i in 0..c4.len() as u32 {
            assert_eq!(c4.mask(i), c5.mask(i));
            assert_eq!(c4.birthday(i), c5.birthday(i));
        }
    }

    #[test]
    fn ordinal_of_mask_round_trips() {
        let c = Census::enumerate(4).unwrap();
        for i in 0..c.len() as u32 {
            assert_eq!(c.ordinal_of_mask(c.mask(i)), Some(i));
        }
        // {1} is not canonical: it reduces to 0.
        assert_eq!(c.ordinal_of_mask(0b10), None);
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census-day4.txt");
        let c = Census::enumerate(4).unwrap();
        c.save(&path).unwrap();
        let d = Census::load(&path).unwrap();
        assert_eq!(c.day(), d.day());
        assert_eq!(c.masks, d.masks);
        assert_eq!(c.birthdays, d.birthdays);
        assert_eq!(c.is_p, d.is_p);
        assert_eq!(c.counts, d.counts);
    }

    #[test]
    fn truncated_file_is_checksum_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census-day3.txt");
        Census::enumerate(3).unwrap().save(&path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let cut = dir.path().join("cut.txt");
        std::fs::write(&cut, &bytes[..bytes.len() / 2]).unwrap();
        assert!(matches!(Census::load(&cut), Err(Error::Checksum(_))));
    }

    #[test]
    fn wrong_version_is_version_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census.txt");
        let body = "MISERE-CENSUS v2 day=0 count=1\n0:\n";
        let digest = Sha256::digest(body.as_bytes());
        std::fs::write(&path, format!("{body}sha256={digest:x}\n")).unwrap();
        assert!(matches!(Census::load(&path), Err(Error::Version(_))));
    }

    #[test]
    fn bridge_interns_canonical_members() {
        let arena = Arena::new();
        let c = Census::enumerate(4).unwrap();
        let bridge = CensusBridge::new(&arena, &c, 4).unwrap();
        assert_eq!(bridge.len(), 22);
        for i in 0..22 {
            let id = bridge.engine_id(i);
            assert!(arena.is_canonical(id), "member {i} not canonical");
            assert_eq!(arena.birthday(id), c.birthday(i));
            assert_eq!(arena.outcome(id), c.outcome(i));
            assert_eq!(bridge.ordinal(id), Some(i));
        }
    }
}
