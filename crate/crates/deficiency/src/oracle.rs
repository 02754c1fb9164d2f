//! Ground-truth deficiency by literal breadth-first expansion of the
//! definition: level ℓ+1 holds every hand reachable from level ℓ by replacing
//! one hand tile with one tile still available in the knowledge base (which
//! loses that copy — discards are never returned). The answer is the first
//! level containing a complete hand.
//!
//! This is exponential in the cap and exists to be slow and obviously
//! correct; the search engines are differential-tested against it. States are
//! deduplicated per level as packed (hand counts, KB counts) nibble pairs;
//! completeness checks are memoized per hand multiset. Levels never collide
//! across depths because the KB total shrinks by exactly one per level.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::completeness::complete_counts;
use crate::tiles::{pack_counts, Hand, KnowledgeBase, KINDS};
use crate::INCOMPLETABLE;

/// Errors from the oracle entry points.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    /// The hand size does not match the entry point (full-size for
    /// [`oracle_dfncy`], ready-size for [`oracle_dfncy13`]).
    #[error("expected a hand of {expected} tiles, found {found}")]
    HandSize { expected: usize, found: usize },
    /// [`oracle_dfncy13`] needs at least one draw, so its cap must be ≥ 1.
    #[error("cap must be at least 1 for ready-size hands")]
    CapTooSmall,
}

fn unpack(mut packed: u128) -> [u8; KINDS] {
    let mut counts = [0u8; KINDS];
    for c in counts.iter_mut() {
        *c = (packed & 0xf) as u8;
        packed >>= 4;
    }
    counts
}

/// Memoized completeness over packed hand counts.
struct CompleteMemo {
    seen: HashMap<u128, bool>,
}

impl CompleteMemo {
    fn new() -> Self {
        CompleteMemo { seen: HashMap::new() }
    }

    fn is_complete(&mut self, packed_hand: u128) -> bool {
        if let Some(&hit) = self.seen.get(&packed_hand) {
            return hit;
        }
        let result = complete_counts(&unpack(packed_hand));
        self.seen.insert(packed_hand, result);
        result
    }
}

/// Knowledge-aware deficiency of a full-size hand (14 − 3k tiles) by
/// breadth-first search, giving up beyond `cap` replacements.
///
/// Returns the first level at which a complete hand appears, or
/// [`INCOMPLETABLE`] when no complete hand exists within `cap` levels —
/// the caller cannot distinguish "truly incompletable" from "deeper than
/// cap", which is exactly the capped contract.
pub fn oracle_dfncy(hand: &Hand, kb: &KnowledgeBase, cap: u8) -> Result<u8, OracleError> {
    let expected = 14 - 3 * hand.melds_fixed() as usize;
    if hand.len() != expected {
        return Err(OracleError::HandSize { expected, found: hand.len() });
    }
    let hand_counts = hand.counts();
    let mut memo = CompleteMemo::new();
    let start = (pack_counts(&hand_counts), pack_counts(kb.counts()));
    if memo.is_complete(start.0) {
        return Ok(0);
    }

    let mut frontier: HashSet<(u128, u128)> = HashSet::from([start]);
    for level in 1..=cap {
        let last = level == cap;
        let mut next: HashSet<(u128, u128)> = HashSet::new();
        for &(h, k) in &frontier {
            let hc = unpack(h);
            let kc = unpack(k);
            for out in 0..KINDS {
                if hc[out] == 0 {
                    continue;
                }
                for inn in 0..KINDS {
                    // A draw must stay available and keep the hand a legal
                    // multiset: never grow a kind past its four copies.
                    if inn == out || kc[inn] == 0 || hc[inn] >= 4 {
                        continue;
                    }
                    let nh = h - (1u128 << (4 * out)) + (1u128 << (4 * inn));
                    if memo.is_complete(nh) {
                        return Ok(level);
                    }
                    if !last {
                        let nk = k - (1u128 << (4 * inn));
                        next.insert((nh, nk));
                    }
                }
            }
        }
        if next.is_empty() && !last {
            // The knowledge base ran dry: nothing deeper is reachable.
            return Ok(INCOMPLETABLE);
        }
        frontier = next;
    }
    Ok(INCOMPLETABLE)
}

/// Knowledge-aware deficiency of a ready-size hand (13 − 3k tiles): the
/// minimum over available draws t of `oracle_dfncy(hand ⊕ t, kb ⊖ t, cap−1) + 1`.
///
/// Inner caps are tightened as the running minimum improves; a draw whose
/// completion needs at least `best − 1` further replacements cannot improve
/// the minimum, so cutting it off early never changes the result.
pub fn oracle_dfncy13(hand: &Hand, kb: &KnowledgeBase, cap: u8) -> Result<u8, OracleError> {
    let expected = 13 - 3 * hand.melds_fixed() as usize;
    if hand.len() != expected {
        return Err(OracleError::HandSize { expected, found: hand.len() });
    }
    if cap == 0 {
        return Err(OracleError::CapTooSmall);
    }

    let mut best = INCOMPLETABLE;
    let hand_counts = hand.counts();
    for kind in 0..KINDS {
        if kb.get_kind(kind) == 0 || hand_counts[kind] >= 4 {
            continue;
        }
        let tile = crate::tiles::Tile::from_kind(kind);
        let mut tiles = hand.tiles().to_vec();
        tiles.push(tile);
        let drawn = Hand::new(tiles, hand.melds_fixed()).expect("one draw keeps the hand valid");
        let drawn_kb = kb.minus(tile).expect("availability checked");
        let inner_cap = if best == INCOMPLETABLE { cap - 1 } else { (best - 2).min(cap - 1) };
        let d = oracle_dfncy(&drawn, &drawn_kb, inner_cap)?;
        if d != INCOMPLETABLE {
            best = best.min(d + 1);
            if best == 1 {
                break;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::{kb_from_hand, parse_hand, parse_kb, KnowledgeBase};

    #[test]
    fn complete_hand_is_level_zero() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        let kb = kb_from_hand(&hand);
        assert_eq!(oracle_dfncy(&hand, &kb, 6).unwrap(), 0);
        assert_eq!(oracle_dfncy(&hand, &KnowledgeBase::empty(), 6).unwrap(), 0);
    }

    #[test]
    fn one_replacement_fixes_a_near_miss() {
        // The complete example with B4 swapped for a lone C9: one replacement
        // (C9 → B4, still available) restores it.
        let hand = parse_hand("B1B2B2B3B3C9B7B7B7C1C1D4D5D6").unwrap();
        let kb = kb_from_hand(&hand);
        assert_eq!(oracle_dfncy(&hand, &kb, 6).unwrap(), 1);
    }

    #[test]
    fn empty_kb_blocks_all_progress() {
        let hand = parse_hand("B1B2B2B3B3C9B7B7B7C1C1D4D5D6").unwrap();
        assert_eq!(oracle_dfncy(&hand, &KnowledgeBase::empty(), 6).unwrap(), INCOMPLETABLE);
    }

    #[test]
    fn ready_hand_tenpai_is_one() {
        // The complete example minus D6: drawing D6 (or D3) wins.
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5").unwrap();
        let kb = kb_from_hand(&hand);
        assert_eq!(oracle_dfncy13(&hand, &kb, 2).unwrap(), 1);
    }

    #[test]
    fn ready_hand_with_empty_kb_is_incompletable() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5").unwrap();
        assert_eq!(oracle_dfncy13(&hand, &KnowledgeBase::empty(), 2).unwrap(), INCOMPLETABLE);
        assert_eq!(oracle_dfncy13(&hand, &KnowledgeBase::empty(), 0), Err(OracleError::CapTooSmall));
    }

    #[test]
    fn size_mismatches_are_rejected() {
        let ready = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5").unwrap();
        let full = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        let kb = kb_from_hand(&full);
        assert!(matches!(oracle_dfncy(&ready, &kb, 3), Err(OracleError::HandSize { expected: 14, found: 13 })));
        assert!(matches!(oracle_dfncy13(&full, &kb, 3), Err(OracleError::HandSize { expected: 13, found: 14 })));
    }

    #[test]
    fn kb_monotonicity_spot_check() {
        let hand = parse_hand("B1B2B2B3B3C9B7B7B7C1C1D4D5D6").unwrap();
        // Sparse KB missing B4: two replacements needed (e.g. C9→B1, B1... )
        // versus the full complement where one suffices.
        let sparse = parse_kb("000000000|000110000|000000111").unwrap();
        let full = kb_from_hand(&hand);
        let with_sparse = oracle_dfncy(&hand, &sparse, 3).unwrap();
        let with_full = oracle_dfncy(&hand, &full, 3).unwrap();
        assert!(with_full <= with_sparse, "more availability can only help: {with_full} vs {with_sparse}");
    }

    // Paper-anchored slow checks (seconds each at test opt-level): the
    // quadtree counterexample hand and the running example.

    #[test]
    fn quadtree_counterexample_hand_is_three() {
        let hand = parse_hand("B1B5B6B8B8B8B9D1D2D4D5D5D6D7").unwrap();
        let kb = parse_kb("343423023|434434443|334220344").unwrap();
        assert_eq!(oracle_dfncy(&hand, &kb, 3).unwrap(), 3);
    }

    #[test]
    fn running_example_ready_hand_is_four() {
        let hand = parse_hand("C1C4C6C7C8C9D1D2D3D6D6D7D8").unwrap();
        let kb = parse_kb("001100121|010000030|032242321").unwrap();
        assert_eq!(oracle_dfncy13(&hand, &kb, 4).unwrap(), 4);
    }
}
