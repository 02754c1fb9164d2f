//! Discard choice by replacement-improvement counting.
//!
//! For each tile in the hand, weigh every replacement that would strictly
//! lower the hand's deficiency by the replacement's surviving copies in the
//! knowledge base, and sum. Whether a replacement improves the hand is a
//! question about tile shapes alone, so it is judged by the knowledge-free
//! deficiency (each probed hand priced against its own full complement);
//! the knowledge base only says how many ways there are to draw the
//! improvement. The tile with the highest total is the discard whose
//! replacement is most likely to make progress.

use thiserror::Error;

use crate::block::block_dfncy;
use crate::oracle::{oracle_dfncy, oracle_dfncy13};
use crate::quadtree::quadtree_dfncy;
use crate::tiles::{kb_from_hand, replace_tile, Hand, KnowledgeBase, Tile, KINDS};

/// Which engine prices hands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Breadth-first replacement search; exact but slow, so the search stops
    /// at the worst value a full-complement hand can reach.
    Oracle,
    /// Exhaustive pre-decomposition search; exact at any depth.
    Quadtree,
    /// Block engine; exact up to four, a lower bound beyond.
    Block,
}

/// Deficiency of a hand under the chosen backend.
pub fn dfncy_with(backend: Backend, hand: &Hand, kb: &KnowledgeBase) -> u8 {
    match backend {
        Backend::Block => block_dfncy(hand, kb),
        Backend::Quadtree => quadtree_dfncy(hand, kb),
        Backend::Oracle => {
            if hand.has_draw() {
                oracle_dfncy(hand, kb, 6).expect("hand size was validated on construction")
            } else {
                oracle_dfncy13(hand, kb, 7).expect("hand size was validated on construction")
            }
        }
    }
}

/// The discard evaluation of one hand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscardReport {
    /// Knowledge-free deficiency of the hand as it stands.
    pub dfncy: u8,
    /// Improvement count per distinct hand tile, in tile order.
    pub values: Vec<(Tile, u32)>,
    /// The tile with the highest count; ties go to the smallest tile.
    pub chosen: Tile,
}

/// Errors from [`discard_values`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiscardError {
    /// A complete hand has nothing worth improving.
    #[error("the hand is already complete")]
    AlreadyComplete,
}

/// Count, for every distinct tile of the hand, the knowledge-base tiles
/// whose substitution for it would strictly lower the knowledge-free
/// deficiency, each candidate kind weighted by its surviving copies.
pub fn discard_values(
    hand: &Hand,
    kb: &KnowledgeBase,
    backend: Backend,
) -> Result<DiscardReport, DiscardError> {
    let base = dfncy_with(backend, hand, &kb_from_hand(hand));
    if base == 0 {
        return Err(DiscardError::AlreadyComplete);
    }
    let mut values = Vec::new();
    let counts = hand.counts();
    for kind in 0..KINDS {
        if counts[kind] == 0 {
            continue;
        }
        let out = Tile::from_kind(kind);
        let mut value = 0u32;
        for in_kind in 0..KINDS {
            if in_kind == kind || kb.get_kind(in_kind) == 0 {
                continue;
            }
            // A replacement can fail only by overflowing four copies of the
            // incoming kind, which leaves no legal hand to improve.
            let Ok((next_hand, _)) = replace_tile(hand, out, Tile::from_kind(in_kind), kb) else {
                continue;
            };
            if dfncy_with(backend, &next_hand, &kb_from_hand(&next_hand)) < base {
                value += kb.get_kind(in_kind) as u32;
            }
        }
        values.push((out, value));
    }
    let mut chosen = values[0];
    for &v in &values[1..] {
        if v.1 > chosen.1 {
            chosen = v;
        }
    }
    Ok(DiscardReport { dfncy: base, values, chosen: chosen.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::{kb_from_hand, parse_hand, parse_kb, Colour};

    fn tile(c: Colour, r: u8) -> Tile {
        Tile::new(c, r).unwrap()
    }

    #[test]
    fn documented_evaluation_chooses_c8() {
        let hand = parse_hand("C1C1C1C5C6C8C9C9C9D3D3D4D5D5").unwrap();
        let kb = parse_kb("333411123|010433411|101121422").unwrap();
        let report = discard_values(&hand, &kb, Backend::Block).unwrap();
        assert_eq!(report.dfncy, 2);
        let want: Vec<(Tile, u32)> = [
            (Colour::Character, 1, 9),
            (Colour::Character, 5, 13),
            (Colour::Character, 6, 9),
            (Colour::Character, 8, 19),
            (Colour::Character, 9, 9),
            (Colour::Dot, 3, 14),
            (Colour::Dot, 4, 11),
            (Colour::Dot, 5, 14),
        ]
        .into_iter()
        .map(|(c, r, v)| (tile(c, r), v))
        .collect();
        assert_eq!(report.values, want);
        assert_eq!(report.chosen, tile(Colour::Character, 8));
    }

    #[test]
    fn backends_agree_on_the_documented_evaluation() {
        let hand = parse_hand("C1C1C1C5C6C8C9C9C9D3D3D4D5D5").unwrap();
        let kb = parse_kb("333411123|010433411|101121422").unwrap();
        let block = discard_values(&hand, &kb, Backend::Block).unwrap();
        let quad = discard_values(&hand, &kb, Backend::Quadtree).unwrap();
        assert_eq!(block, quad);
    }

    #[test]
    fn junk_tile_is_discarded_from_a_near_complete_hand() {
        let hand = parse_hand("B1B2B2B3B3C9B7B7B7C1C1D4D5D6").unwrap();
        let report = discard_values(&hand, &kb_from_hand(&hand), Backend::Block).unwrap();
        assert_eq!(report.dfncy, 1);
        assert_eq!(report.chosen, tile(Colour::Character, 9));
        // Only B1 (three surviving copies) and B4 (all four) finish the rest.
        let c9 = report.values.iter().find(|(t, _)| *t == tile(Colour::Character, 9)).unwrap();
        assert_eq!(c9.1, 7);
    }

    #[test]
    fn complete_hands_are_rejected() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        assert_eq!(
            discard_values(&hand, &kb_from_hand(&hand), Backend::Block),
            Err(DiscardError::AlreadyComplete)
        );
    }

    #[test]
    fn ties_prefer_the_smallest_tile() {
        // A hopeless hand with an empty knowledge base: every value is zero,
        // so the smallest tile wins.
        let hand = parse_hand("B1B4B7C1C4C7D1D4D7D9D9B9C9D8").unwrap();
        let report = discard_values(&hand, &KnowledgeBase::empty(), Backend::Block).unwrap();
        assert!(report.values.iter().all(|&(_, v)| v == 0));
        assert_eq!(report.chosen, tile(Colour::Bamboo, 1));
    }
}
