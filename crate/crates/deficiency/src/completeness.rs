//! Winning-hand detection: can a full-size hand be decomposed into
//! (4 − melds_fixed) melds plus one pair?
//!
//! A meld is a pong (three identical tiles) or a chow (three consecutive
//! same-colour tiles); the pair is the eye. Seven pairs is *not* a win here.
//!
//! The checker walks the per-kind counts array left to right: at the smallest
//! kind still holding tiles, every decomposition must either start a pong or
//! start a chow there (or place the eye), so branching on those alternatives
//! enumerates all decompositions without a transposition table.

use thiserror::Error;

use crate::tiles::{Hand, Tile, KINDS};

/// A witness that a hand is complete: the melds and the eye.
///
/// Melds are stored as sorted tile triples, the eye as an identical tile
/// pair; together they partition the hand's concealed tiles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Decomposition {
    /// Exactly `4 − melds_fixed` triples, each a pong or a chow, sorted.
    pub melds: Vec<[Tile; 3]>,
    /// The identical pair.
    pub eye: [Tile; 2],
}

/// The hand has the wrong number of tiles for a completeness check.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("completeness needs a full-size hand of {expected} tiles, found {found}")]
pub struct WrongSize {
    pub expected: usize,
    pub found: usize,
}

fn require_full_size(hand: &Hand) -> Result<(), WrongSize> {
    let expected = 14 - 3 * hand.melds_fixed() as usize;
    if hand.len() == expected {
        Ok(())
    } else {
        Err(WrongSize { expected, found: hand.len() })
    }
}

/// True iff the hand decomposes into (4 − melds_fixed) melds plus a pair.
pub fn is_complete(hand: &Hand) -> Result<bool, WrongSize> {
    require_full_size(hand)?;
    Ok(complete_counts(&hand.counts()))
}

/// Counts-level completeness used by the hot search paths: the remaining meld
/// count is implied by the tile total (`len = 3·melds + 2`).
pub(crate) fn complete_counts(counts: &[u8; KINDS]) -> bool {
    let total: u8 = counts.iter().sum();
    debug_assert!(total % 3 == 2, "full-size hands hold 3k+2 tiles");
    let mut counts = *counts;
    for eye in 0..KINDS {
        if counts[eye] >= 2 {
            counts[eye] -= 2;
            if melds_only(&mut counts, (total - 2) / 3) {
                return true;
            }
            counts[eye] += 2;
        }
    }
    false
}

/// Can `counts` be partitioned into exactly `need` melds? Branches at the
/// leftmost nonzero kind: it must begin a pong or a chow.
fn melds_only(counts: &mut [u8; KINDS], need: u8) -> bool {
    if need == 0 {
        return counts.iter().all(|&c| c == 0);
    }
    let kind = match counts.iter().position(|&c| c > 0) {
        Some(k) => k,
        None => return false,
    };
    if counts[kind] >= 3 {
        counts[kind] -= 3;
        let ok = melds_only(counts, need - 1);
        counts[kind] += 3;
        if ok {
            return true;
        }
    }
    // A chow must stay inside one colour: kinds 0..9, 9..18, 18..27.
    if kind % 9 <= 6 && counts[kind + 1] > 0 && counts[kind + 2] > 0 {
        counts[kind] -= 1;
        counts[kind + 1] -= 1;
        counts[kind + 2] -= 1;
        let ok = melds_only(counts, need - 1);
        counts[kind] += 1;
        counts[kind + 1] += 1;
        counts[kind + 2] += 1;
        if ok {
            return true;
        }
    }
    false
}

/// All decompositions of the hand, deduplicated up to meld reordering.
pub fn decompositions(hand: &Hand) -> Result<Vec<Decomposition>, WrongSize> {
    require_full_size(hand)?;
    let mut counts = hand.counts();
    let total: u8 = counts.iter().sum();
    let need = (total - 2) / 3;
    let mut out = Vec::new();
    for eye in 0..KINDS {
        if counts[eye] >= 2 {
            counts[eye] -= 2;
            let mut melds = Vec::new();
            collect_melds(&mut counts, need, &mut melds, &mut |melds| {
                let mut melds = melds.to_vec();
                melds.sort();
                let eye_tile = Tile::from_kind(eye);
                out.push(Decomposition { melds, eye: [eye_tile, eye_tile] });
            });
            counts[eye] += 2;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn collect_melds(
    counts: &mut [u8; KINDS],
    need: u8,
    acc: &mut Vec<[Tile; 3]>,
    emit: &mut impl FnMut(&[[Tile; 3]]),
) {
    if need == 0 {
        if counts.iter().all(|&c| c == 0) {
            emit(acc);
        }
        return;
    }
    let kind = match counts.iter().position(|&c| c > 0) {
        Some(k) => k,
        None => return,
    };
    let t = Tile::from_kind(kind);
    if counts[kind] >= 3 {
        counts[kind] -= 3;
        acc.push([t, t, t]);
        collect_melds(counts, need - 1, acc, emit);
        acc.pop();
        counts[kind] += 3;
    }
    if kind % 9 <= 6 && counts[kind + 1] > 0 && counts[kind + 2] > 0 {
        counts[kind] -= 1;
        counts[kind + 1] -= 1;
        counts[kind + 2] -= 1;
        acc.push([t, Tile::from_kind(kind + 1), Tile::from_kind(kind + 2)]);
        collect_melds(counts, need - 1, acc, emit);
        acc.pop();
        counts[kind] += 1;
        counts[kind + 1] += 1;
        counts[kind + 2] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::parse_hand;

    #[test]
    fn complete_example_decomposes() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        assert!(is_complete(&hand).unwrap());
        let ds = decompositions(&hand).unwrap();
        assert!(!ds.is_empty());
        // The canonical witness: (B1B2B3)(B2B3B4)(B7B7B7)(D4D5D6) eye (C1C1).
        let has_witness = ds.iter().any(|d| {
            d.eye[0].to_string() == "C1"
                && d.melds.iter().any(|m| m[0].to_string() == "B7" && m[1].to_string() == "B7")
        });
        assert!(has_witness, "expected the documented decomposition, got {ds:?}");
    }

    #[test]
    fn seven_pairs_is_not_a_win() {
        // Pairs spaced three ranks apart cannot regroup into chows or pongs.
        let hand = parse_hand("B1B1B4B4B7B7C1C1C4C4C7C7D1D1").unwrap();
        assert!(!is_complete(&hand).unwrap());
        assert!(decompositions(&hand).unwrap().is_empty());
    }

    #[test]
    fn running_example_hand_is_incomplete() {
        // 13 tiles plus a drawn C1 still admit no decomposition.
        let hand = parse_hand("C1C1C4C6C7C8C9D1D2D3D6D6D7D8").unwrap();
        assert!(!is_complete(&hand).unwrap());
    }

    #[test]
    fn wrong_size_is_rejected() {
        let hand = parse_hand("C1C4C6C7C8C9D1D2D3D6D6D7D8").unwrap();
        assert_eq!(is_complete(&hand), Err(WrongSize { expected: 14, found: 13 }));
    }

    #[test]
    fn multiple_decompositions_found() {
        // Three identical triples read as pongs or as three parallel chows.
        let hand = parse_hand("B1B1B1B2B2B2B3B3B3C1C1C1D9D9").unwrap();
        let ds = decompositions(&hand).unwrap();
        assert!(ds.len() >= 2, "pong and chow readings expected, got {ds:?}");
        assert!(is_complete(&hand).unwrap());
    }

    #[test]
    fn melds_fixed_reduces_the_target() {
        // 4 consolidated melds: two concealed tiles must form the eye.
        let hand = parse_hand("D9D9;k=4").unwrap();
        assert!(is_complete(&hand).unwrap());
        let hand = parse_hand("D8D9;k=4").unwrap();
        assert!(!is_complete(&hand).unwrap());
        // One consolidated meld: 11 concealed tiles, 3 melds + eye.
        let hand = parse_hand("B1B2B3B4B5B6B7B8B9C2C2;k=1").unwrap();
        assert!(is_complete(&hand).unwrap());
    }
}
