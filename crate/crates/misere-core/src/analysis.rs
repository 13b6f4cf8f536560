//! Whole-census analysis: parity of every member and the composite scan.
//!
//! Parity is a mask computation: a member is odd exactly when one of its
//! options has the member itself as its associate, and the associates of the
//! 22 possible options are known up front.
//!
//! Compositeness is decided by a two-stage scan. A partition `m = X + Y`
//! forces, for every option `m'` of `m`, that `m' = X' + Y` or `m' = X + Y'`;
//! in particular every option either has `X` as a part, or has some part `Y`
//! whose counterpart is an option of `X` — with the *same* `Y` across all
//! options missing `X`. Candidates `X` only come from parts of day-4 members,
//! so this necessary condition is a cheap bitmask test that eliminates almost
//! all of the 4.17 million members; survivors get an exact parts computation.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::arena::{Arena, GameId, Parity};
use crate::census::{Census, CensusBridge};
use crate::error::Result;
use crate::parts::PartsTable;

/// Facts about one composite census member.
#[derive(Clone, Debug)]
pub struct CompositeInfo {
    pub ordinal: u32,
    pub engine_id: GameId,
    pub parity: Parity,
    /// Number of distinct prime partitions (of its even representative).
    pub partition_count: usize,
    /// Largest number of primes over all prime partitions.
    pub max_primes: usize,
    /// Whether *2 is a part.
    pub has_star2_part: bool,
}

/// Parity of every member plus all composites, in census order.
pub struct CensusAnalysis {
    pub parity: Vec<Parity>,
    pub composites: Vec<CompositeInfo>,
    /// How many members survived the prefilter (exact parts were computed
    /// only for these).
    pub prefilter_survivors: usize,
}

impl CensusAnalysis {
    pub fn even_count(&self) -> usize {
        self.parity.iter().filter(|&&p| p == Parity::Even).count()
    }

    /// The even composites, in census order.
    pub fn even_composites(&self) -> Vec<&CompositeInfo> {
        self.composites
            .iter()
            .filter(|c| c.parity == Parity::Even)
            .collect()
    }
}

pub fn analyze(arena: &Arena, census: &Census) -> Result<CensusAnalysis> {
    let option_day = census.day().saturating_sub(1).min(4);
    let bridge = CensusBridge::new(arena, census, option_day)?;
    let base = bridge.len() as u32;

    // Ordinal of the associate of each possible option.
    let assoc_ordinal: Vec<Option<u32>> = (0..base)
        .map(|j| {
            let a = arena.associate(bridge.engine_id(j));
            ordinal_of(arena, census, &bridge, a)
        })
        .collect();

    // Parity: member m is odd iff some option's associate is m itself.
    let parity: Vec<Parity> = (0..census.len() as u32)
        .into_par_iter()
        .map(|m| {
            let mut bits = census.mask(m);
            while bits != 0 {
                let j = bits.trailing_zeros();
                bits &= bits - 1;
                if assoc_ordinal[j as usize] == Some(m) {
                    return Parity::Odd;
                }
            }
            Parity::Even
        })
        .collect();

    // Candidate parts: everything that is a part of some possible option.
    let opt_tables: Vec<Arc<PartsTable>> = (0..base)
        .map(|j| arena.parts(bridge.engine_id(j)))
        .collect();
    let mut cands: Vec<GameId> = opt_tables.iter().flat_map(|t| t.parts()).collect();
    cands.sort_unstable();
    cands.dedup();
    let (zero, one) = (arena.nimber(0), arena.nimber(1));
    cands.retain(|&x| x != zero && x != one);

    struct Cand {
        /// Options of the previous day that have this candidate as a part.
        part_of: u32,
        /// Per option j: the parts Y of j whose counterpart is an option of
        /// the candidate (sorted).
        links: Vec<Vec<GameId>>,
        /// Census ordinals of the candidate and its associate, if born here.
        self_ordinals: [Option<u32>; 2],
    }
    let cand_data: Vec<Cand> = cands
        .iter()
        .map(|&x| {
            let x_opts = arena.options(x);
            let mut part_of = 0u32;
            let mut links = Vec::with_capacity(base as usize);
            for (j, t) in opt_tables.iter().enumerate() {
                if t.contains(x) {
                    part_of |= 1 << j;
                }
                let mut ys: Vec<GameId> = x_opts
                    .iter()
                    .filter_map(|&xp| t.counterpart(xp))
                    .collect();
                ys.sort_unstable();
                ys.dedup();
                links.push(ys);
            }
            let self_ordinals = [
                ordinal_of(arena, census, &bridge, x),
                ordinal_of(arena, census, &bridge, arena.associate(x)),
            ];
            Cand {
                part_of,
                links,
                self_ordinals,
            }
        })
        .collect();

    // Stage 1: the bitmask prefilter.
    let survivors: Vec<u32> = (2..census.len() as u32)
        .into_par_iter()
        .filter(|&m| {
            let mask = census.mask(m);
            cand_data.iter().any(|c| {
                if c.self_ordinals.contains(&Some(m)) {
                    return false; // x would be a unit multiple of m
                }
                let rest = mask & !c.part_of;
                if rest == 0 {
                    return true;
                }
                // One shared Y must serve every option that lacks x.
                let first = rest.trailing_zeros();
                c.links[first as usize].iter().any(|y| {
                    let mut bits = rest & !(1 << first);
                    while bits != 0 {
                        let j = bits.trailing_zeros();
                        bits &= bits - 1;
                        if c.links[j as usize].binary_search(y).is_err() {
                            return false;
                        }
                    }
                    true
                })
            })
        })
        .collect();

    // Stage 2: exact parts for the survivors.
    let mut composites = Vec::new();
    for &m in &survivors {
        let mut bits = census.mask(m);
        let mut opts = Vec::new();
        while bits != 0 {
            let j = bits.trailing_zeros();
            bits &= bits - 1;
            opts.push(bridge.engine_id(j));
        }
        let id = arena.intern(&opts)?;
        if !arena.is_composite(id) {
            continue;
        }
        let partitions = arena.prime_partitions(id)?;
        composites.push(CompositeInfo {
            ordinal: m,
            engine_id: id,
            parity: parity[m as usize],
            partition_count: partitions.len(),
            max_primes: partitions.iter().map(|p| p.len()).max().unwrap_or(0),
            has_star2_part: arena.parts(id).contains(arena.nimber(2)),
        });
    }

    Ok(CensusAnalysis {
        parity,
        composites,
        prefilter_survivors: survivors.len(),
    })
}

/// Census ordinal of a canonical engine id, when its options are all among
/// the bridged members.
fn ordinal_of(
    arena: &Arena,
    census: &Census,
    bridge: &CensusBridge,
    g: GameId,
) -> Option<u32> {
    if let Some(o) = bridge.ordinal(g) {
        return Some(o);
    }
    let mut mask = 0u32;
    for &o in arena.options(g).iter() {
        mask |= 1u32 << bridge.ordinal(o)?;
    }
    census.ordinal_of_mask(mask)
}

/// Lookup table from census ordinal to parity for members born by `day`,
/// cheap enough to build for unit tests.
pub fn parity_map(analysis: &CensusAnalysis) -> HashMap<u32, Parity> {
    analysis
        .parity
        .iter()
        .enumerate()
        .map(|(i, &p)| (i as u32, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Outcome;

    #[test]
    fn day_four_parities_match_engine() {
        let arena = Arena::new();
        let census = Census::enumerate(4).unwrap();
        let analysis = analyze(&arena, &census).unwrap();
        let bridge = CensusBridge::new(&arena, &census, 4).unwrap();
        for m in 0..22 {
            assert_eq!(
                analysis.parity[m as usize],
                arena.parity(bridge.engine_id(m)),
                "parity of member {m}"
            );
        }
    }

    #[test]
    fn day_four_composites() {
        let arena = Arena::new();
        let census = Census::enumerate(4).unwrap();
        let analysis = analyze(&arena, &census).unwrap();
        // Six even composites are born by day 4, plus one odd associate
        // ({2#,3} = {2#,2} + *1), for seven composites in total.
        assert_eq!(analysis.composites.len(), 7);
        assert_eq!(analysis.even_composites().len(), 6);
        let odd = analysis
            .composites
            .iter()
            .find(|c| c.parity == Parity::Odd)
            .expect("odd composite missing");
        assert!(analysis
            .composites
            .iter()
            .any(|c| c.parity == Parity::Even && arena.associate(c.engine_id) == odd.engine_id));
        for c in &analysis.composites {
            assert!(c.has_star2_part, "member {} lacks *2 part", c.ordinal);
        }
        // *2+*2 = {*3,*2} is among them and is even with a unique partition.
        let g = arena.sum(arena.nimber(2), arena.nimber(2));
        let found = analysis
            .composites
            .iter()
            .find(|c| c.engine_id == g)
            .expect("*2+*2 missing");
        assert_eq!(found.parity, Parity::Even);
        assert_eq!(found.partition_count, 1);
        assert_eq!(found.max_primes, 2);
    }

    #[test]
    fn day_three_parities() {
        // 0,*2,2# are even; *1,*3 are their odd associates' images.
        let arena = Arena::new();
        let census = Census::enumerate(3).unwrap();
        let analysis = analyze(&arena, &census).unwrap();
        let expected = [
            Parity::Even,
            Parity::Odd,
            Parity::Even,
            Parity::Odd,
            Parity::Even,
        ];
        assert_eq!(analysis.parity, expected);
        // Outcome sanity on the same members.
        assert_eq!(census.outcome(4), Outcome::P);
    }
}
