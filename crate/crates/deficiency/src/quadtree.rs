//! Exhaustive deficiency by branch-and-bound over pre-decompositions.
//!
//! A pre-decomposition (pDCMP) assigns hand tiles to four meld holders and
//! one eye holder, leaving the rest as remainder. Its cost is the minimum
//! number of tiles that must be borrowed from the knowledge base to grow the
//! holders into four melds plus a pair; the hand's deficiency is the minimum
//! cost over all pre-decompositions.
//!
//! The search scans the hand left to right. At the first unprocessed tile t
//! it branches six ways: pass t to the remainder; seize the chow pattern
//! (t, t⁺, t⁺⁺) ∩ pending into a meld holder; make the eye (tt); make a pong
//! (ttt) ∩ pending; or claim just (t, t⁺) or just (t, t⁺⁺) as a partial chow.
//! The two partial-chow actions exist because the greedy chow action alone
//! cannot leave a completing tile in the remainder, which matters as soon as
//! the knowledge base rules some completions out; they are only emitted when
//! the knowledge base can still complete them.
//!
//! Cost evaluation is an exact min-borrow search with *joint* consumption:
//! every borrow decrements one shared KB multiset and every scratch build
//! consumes a distinct remainder instance, so one leftover tile can never
//! fund both the eye and a new meld.

use std::collections::HashSet;

use thiserror::Error;

use crate::tiles::{pack_counts, Hand, KnowledgeBase, Tile, KINDS};
use crate::INCOMPLETABLE;

/// One of the four meld holders of a pre-decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeldHolder {
    /// Nothing assigned yet.
    Empty,
    /// A single tile that must evolve into a meld (two borrows).
    Single(Tile),
    /// A pair that must evolve into a pong (one borrow).
    Pair(Tile),
    /// Two chow tiles with a gap of one or two (one borrow).
    Pchow(Tile, Tile),
    /// A complete chow starting at the given tile.
    Chow(Tile),
    /// A complete pong.
    Pong(Tile),
    /// A meld consolidated outside the concealed tiles.
    Fixed,
}

/// The eye holder of a pre-decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EyeHolder {
    /// Nothing assigned yet.
    Empty,
    /// A single tile that must find its twin (one borrow).
    Single(Tile),
    /// A complete pair.
    Pair(Tile),
}

/// A pre-decomposition: four meld holders, one eye holder, and the remainder
/// (hand tiles assigned to no holder).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PDcmp {
    /// The four meld holders.
    pub holders: [MeldHolder; 4],
    /// The eye holder.
    pub eye: EyeHolder,
    remainder: [u8; KINDS],
}

/// Errors from assembling a [`PDcmp`] by hand.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PDcmpError {
    /// A holder uses tiles the hand does not have left.
    #[error("holders consume more copies of {tile} than the hand holds")]
    NotInHand { tile: Tile },
    /// A pchow's tiles are not a one-or-two rank gap in one colour.
    #[error("({a}, {b}) is not a partial chow")]
    BadPchow { a: Tile, b: Tile },
    /// A chow starting at rank 8 or 9 would leave the colour.
    #[error("no chow starts at {tile}")]
    BadChow { tile: Tile },
}

impl PDcmp {
    /// Assemble a pre-decomposition from explicit holders, computing the
    /// remainder as the hand tiles left over.
    pub fn new(holders: [MeldHolder; 4], eye: EyeHolder, hand: &Hand) -> Result<PDcmp, PDcmpError> {
        let mut consumed = [0u8; KINDS];
        let mut consume = |kind: usize, n: u8| {
            consumed[kind] += n;
        };
        for h in &holders {
            match *h {
                MeldHolder::Empty | MeldHolder::Fixed => {}
                MeldHolder::Single(t) => consume(t.kind(), 1),
                MeldHolder::Pair(t) => consume(t.kind(), 2),
                MeldHolder::Pchow(a, b) => {
                    let gap = b.kind() as i32 - a.kind() as i32;
                    if a.colour() != b.colour() || !(1..=2).contains(&gap) {
                        return Err(PDcmpError::BadPchow { a, b });
                    }
                    consume(a.kind(), 1);
                    consume(b.kind(), 1);
                }
                MeldHolder::Chow(t) => {
                    if t.rank() > 7 {
                        return Err(PDcmpError::BadChow { tile: t });
                    }
                    consume(t.kind(), 1);
                    consume(t.kind() + 1, 1);
                    consume(t.kind() + 2, 1);
                }
                MeldHolder::Pong(t) => consume(t.kind(), 3),
            }
        }
        match eye {
            EyeHolder::Empty => {}
            EyeHolder::Single(t) => consume(t.kind(), 1),
            EyeHolder::Pair(t) => consume(t.kind(), 2),
        }
        let hand_counts = hand.counts();
        let mut remainder = [0u8; KINDS];
        for k in 0..KINDS {
            if consumed[k] > hand_counts[k] {
                return Err(PDcmpError::NotInHand { tile: Tile::from_kind(k) });
            }
            remainder[k] = hand_counts[k] - consumed[k];
        }
        Ok(PDcmp { holders, eye, remainder })
    }

    /// Per-kind counts of the unassigned hand tiles.
    pub fn remainder_counts(&self) -> &[u8; KINDS] {
        &self.remainder
    }
}

/// Minimum borrows to complete a pre-decomposition under a knowledge base;
/// [`INCOMPLETABLE`] when no completion exists.
///
/// Borrow prices: +1 to finish a partial chow or turn a pair into a pong,
/// +1 for an eye grown from a remainder tile (its twin borrowed), +2 for an
/// eye taken wholly from the KB, +2 for a meld grown from one remainder tile,
/// +3 for a meld taken wholly from the KB. All choices share one KB multiset
/// and the remainder's tile instances.
pub fn pdcmp_cost(pdcmp: &PDcmp, kb: &KnowledgeBase) -> u8 {
    let mut partials = Vec::new();
    let mut empties = 0u8;
    for h in &pdcmp.holders {
        match *h {
            MeldHolder::Empty => empties += 1,
            MeldHolder::Single(t) => partials.push(Partial::Single(t.kind() as u8)),
            MeldHolder::Pair(t) => partials.push(Partial::Pair(t.kind() as u8)),
            MeldHolder::Pchow(a, b) => partials.push(Partial::Pchow(a.kind() as u8, b.kind() as u8)),
            MeldHolder::Chow(_) | MeldHolder::Pong(_) | MeldHolder::Fixed => {}
        }
    }
    let eye = match pdcmp.eye {
        EyeHolder::Empty => EyeNeed::Empty,
        EyeHolder::Single(t) => EyeNeed::Single(t.kind() as u8),
        EyeHolder::Pair(_) => EyeNeed::Done,
    };
    let mut search = Completion {
        rem: pdcmp.remainder,
        kb: *kb.counts(),
        best: INCOMPLETABLE,
    };
    search.partials(&partials, 0, eye, empties, 0);
    search.best
}

/// A holder needing completion, by tile kind.
#[derive(Clone, Copy)]
enum Partial {
    Single(u8),
    Pair(u8),
    Pchow(u8, u8),
}

#[derive(Clone, Copy)]
enum EyeNeed {
    Done,
    Single(u8),
    Empty,
}

/// Exact min-borrow completion over shared KB and remainder multisets.
struct Completion {
    rem: [u8; KINDS],
    kb: [u8; KINDS],
    best: u8,
}

/// Candidate kinds that would finish the partial chow (a, b).
pub(crate) fn pchow_completers(a: u8, b: u8) -> [Option<u8>; 2] {
    let rank = a % 9;
    if b == a + 1 {
        [
            (rank >= 1).then(|| a - 1),
            (rank <= 6).then(|| b + 1),
        ]
    } else {
        [Some(a + 1), None]
    }
}

/// Partner-kind pairs that would complete a chow around kind `r`.
pub(crate) fn chow_partners(r: u8) -> [Option<(u8, u8)>; 3] {
    let rank = r % 9;
    [
        (rank >= 2).then(|| (r - 2, r - 1)),
        (1..=7).contains(&rank).then(|| (r - 1, r + 1)),
        (rank <= 6).then(|| (r + 1, r + 2)),
    ]
}

impl Completion {
    /// Cheapest conceivable finish: one borrow per partial holder, one for a
    /// pending eye, two per empty meld holder.
    fn floor(partials_left: usize, eye: EyeNeed, empties: u8) -> u8 {
        let eye_floor = match eye {
            EyeNeed::Done => 0,
            _ => 1,
        };
        partials_left as u8 + eye_floor + 2 * empties
    }

    fn partials(&mut self, partials: &[Partial], idx: usize, eye: EyeNeed, empties: u8, acc: u8) {
        if acc + Self::floor(partials.len() - idx, eye, empties) >= self.best {
            return;
        }
        let Some(&p) = partials.get(idx) else {
            self.eye(eye, empties, acc);
            return;
        };
        match p {
            Partial::Pair(a) => {
                let a = a as usize;
                if self.kb[a] >= 1 {
                    self.kb[a] -= 1;
                    self.partials(partials, idx + 1, eye, empties, acc + 1);
                    self.kb[a] += 1;
                }
            }
            Partial::Pchow(a, b) => {
                for cand in pchow_completers(a, b).into_iter().flatten() {
                    let c = cand as usize;
                    if self.kb[c] >= 1 {
                        self.kb[c] -= 1;
                        self.partials(partials, idx + 1, eye, empties, acc + 1);
                        self.kb[c] += 1;
                    }
                }
            }
            Partial::Single(a) => {
                let a = a as usize;
                if self.kb[a] >= 2 {
                    self.kb[a] -= 2;
                    self.partials(partials, idx + 1, eye, empties, acc + 2);
                    self.kb[a] += 2;
                }
                for pair in chow_partners(a as u8).into_iter().flatten() {
                    let (x, y) = (pair.0 as usize, pair.1 as usize);
                    if self.kb[x] >= 1 && self.kb[y] >= 1 {
                        self.kb[x] -= 1;
                        self.kb[y] -= 1;
                        self.partials(partials, idx + 1, eye, empties, acc + 2);
                        self.kb[x] += 1;
                        self.kb[y] += 1;
                    }
                }
            }
        }
    }

    fn eye(&mut self, eye: EyeNeed, empties: u8, acc: u8) {
        if acc + Self::floor(0, eye, empties) >= self.best {
            return;
        }
        match eye {
            EyeNeed::Done => self.fill(empties, 0, acc),
            EyeNeed::Single(a) => {
                let a = a as usize;
                if self.kb[a] >= 1 {
                    self.kb[a] -= 1;
                    self.fill(empties, 0, acc + 1);
                    self.kb[a] += 1;
                }
            }
            EyeNeed::Empty => {
                // Grow the eye from a remainder tile plus its borrowed twin…
                for r in 0..KINDS {
                    if self.rem[r] >= 1 && self.kb[r] >= 1 {
                        self.rem[r] -= 1;
                        self.kb[r] -= 1;
                        self.fill(empties, 0, acc + 1);
                        self.rem[r] += 1;
                        self.kb[r] += 1;
                    }
                }
                // …or borrow a whole pair.
                for x in 0..KINDS {
                    if self.kb[x] >= 2 {
                        self.kb[x] -= 2;
                        self.fill(empties, 0, acc + 2);
                        self.kb[x] += 2;
                    }
                }
            }
        }
    }

    /// Fill the empty meld holders with scratch builds. Recipes are tried in
    /// non-decreasing code order so interchangeable holders are filled once
    /// per combination, not per permutation.
    fn fill(&mut self, empties: u8, min_recipe: u16, acc: u8) {
        if acc + 2 * empties >= self.best {
            return;
        }
        if empties == 0 {
            self.best = acc;
            return;
        }
        for kind in 0..KINDS as u8 {
            let k = kind as usize;
            // Variant 0: remainder tile + two borrowed twins (pong, +2).
            let recipe = (kind as u16) << 3;
            if recipe >= min_recipe && self.rem[k] >= 1 && self.kb[k] >= 2 {
                self.rem[k] -= 1;
                self.kb[k] -= 2;
                self.fill(empties - 1, recipe, acc + 2);
                self.rem[k] += 1;
                self.kb[k] += 2;
            }
            // Variants 1–3: remainder tile + two borrowed chow partners (+2).
            for (v, partners) in chow_partners(kind).into_iter().enumerate() {
                let recipe = ((kind as u16) << 3) | (1 + v as u16);
                if recipe < min_recipe {
                    continue;
                }
                let Some((x, y)) = partners else { continue };
                let (x, y) = (x as usize, y as usize);
                if self.rem[k] >= 1 && self.kb[x] >= 1 && self.kb[y] >= 1 {
                    self.rem[k] -= 1;
                    self.kb[x] -= 1;
                    self.kb[y] -= 1;
                    self.fill(empties - 1, recipe, acc + 2);
                    self.rem[k] += 1;
                    self.kb[x] += 1;
                    self.kb[y] += 1;
                }
            }
            // Variant 4: borrowed pong (+3).
            let recipe = ((kind as u16) << 3) | 4;
            if recipe >= min_recipe && self.kb[k] >= 3 && acc + 3 + 2 * (empties - 1) < self.best {
                self.kb[k] -= 3;
                self.fill(empties - 1, recipe, acc + 3);
                self.kb[k] += 3;
            }
            // Variant 5: borrowed chow starting here (+3).
            let recipe = ((kind as u16) << 3) | 5;
            if recipe >= min_recipe
                && kind % 9 <= 6
                && self.kb[k] >= 1
                && self.kb[k + 1] >= 1
                && self.kb[k + 2] >= 1
                && acc + 3 + 2 * (empties - 1) < self.best
            {
                self.kb[k] -= 1;
                self.kb[k + 1] -= 1;
                self.kb[k + 2] -= 1;
                self.fill(empties - 1, recipe, acc + 3);
                self.kb[k] += 1;
                self.kb[k + 1] += 1;
                self.kb[k + 2] += 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The branch-and-bound search.
// ---------------------------------------------------------------------------

/// Compact holder code for search nodes: tag in bits 10.., kinds in bits 5..10
/// and 0..5. Empty is 0 so unsorted slots collapse under sorting.
type Code = u16;

const TAG_PAIR: u16 = 2;
const TAG_PCHOW: u16 = 3;
const TAG_CHOW: u16 = 4;
const TAG_PONG: u16 = 5;
const TAG_FIXED: u16 = 6;

fn code(tag: u16, a: u8, b: u8) -> Code {
    (tag << 10) | ((a as u16) << 5) | b as u16
}

struct Search {
    hand: [u8; KINDS],
    kb: [u8; KINDS],
    best: u8,
    visited: HashSet<(u128, u64, u16)>,
}

/// Knowledge-aware deficiency of a hand (full or ready size, with any number
/// of consolidated melds) by exhaustive pre-decomposition search.
pub fn quadtree_dfncy(hand: &Hand, kb: &KnowledgeBase) -> u8 {
    let mut holders = [0u16; 4];
    for slot in holders.iter_mut().take(hand.melds_fixed() as usize) {
        *slot = code(TAG_FIXED, 0, 0);
    }
    holders.sort_unstable();
    let mut search = Search {
        hand: hand.counts(),
        kb: *kb.counts(),
        best: INCOMPLETABLE,
        visited: HashSet::new(),
    };
    search.expand(hand.counts(), holders, 0);
    search.best
}

impl Search {
    /// Optimistic borrows to finish: each committed partial holder needs at
    /// least one borrow; completed holders are free, and empty holders and a
    /// pending eye are not charged because unexamined pending tiles might
    /// still fill them without borrowing.
    fn bound(holders: &[Code; 4]) -> u8 {
        holders
            .iter()
            .filter(|&&h| matches!(h >> 10, TAG_PAIR | TAG_PCHOW))
            .count() as u8
    }

    fn leaf(&mut self, holders: &[Code; 4], eye: Code) {
        // Remainder = hand − holder tiles; pending tiles not yet examined are
        // remainder too (no holder will ever claim them on this branch).
        let mut consumed = [0u8; KINDS];
        let mut partials = Vec::new();
        let mut empties = 0u8;
        for &h in holders {
            let (a, b) = (((h >> 5) & 0x1f) as u8, (h & 0x1f) as u8);
            match h >> 10 {
                0 => empties += 1,
                TAG_PAIR => {
                    consumed[a as usize] += 2;
                    partials.push(Partial::Pair(a));
                }
                TAG_PCHOW => {
                    consumed[a as usize] += 1;
                    consumed[b as usize] += 1;
                    partials.push(Partial::Pchow(a, b));
                }
                TAG_CHOW => {
                    consumed[a as usize] += 1;
                    consumed[a as usize + 1] += 1;
                    consumed[a as usize + 2] += 1;
                }
                TAG_PONG => consumed[a as usize] += 3,
                _ => {} // Fixed: consolidated tiles live outside the hand.
            }
        }
        let eye_need = if eye == 0 {
            EyeNeed::Empty
        } else {
            consumed[((eye >> 5) & 0x1f) as usize] += 2;
            EyeNeed::Done
        };
        let mut rem = [0u8; KINDS];
        for k in 0..KINDS {
            rem[k] = self.hand[k] - consumed[k];
        }
        let mut completion = Completion { rem, kb: self.kb, best: self.best };
        completion.partials(&partials, 0, eye_need, empties, 0);
        self.best = self.best.min(completion.best);
    }

    fn expand(&mut self, pending: [u8; KINDS], holders: [Code; 4], eye: Code) {
        if self.best == 0 {
            return;
        }
        let full = holders.iter().all(|&h| h != 0) && eye != 0;
        let first = pending.iter().position(|&c| c > 0);
        if full || first.is_none() {
            self.leaf(&holders, eye);
            return;
        }
        if !self.visited.insert((
            pack_counts(&pending),
            holders.iter().fold(0u64, |acc, &h| (acc << 16) | h as u64),
            eye,
        )) {
            return;
        }
        if Self::bound(&holders) >= self.best {
            return;
        }

        let t = first.expect("checked above");
        let rank = t % 9;
        let has1 = rank <= 7 && pending[t + 1] > 0;
        let has2 = rank <= 6 && pending[t + 2] > 0;
        let empty_slot = holders.iter().any(|&h| h == 0);

        let place = |holders: &[Code; 4], c: Code| -> [Code; 4] {
            let mut out = *holders;
            let slot = out.iter().position(|&h| h == 0).expect("caller checked an empty slot");
            out[slot] = c;
            out.sort_unstable();
            out
        };
        // A pchow that the knowledge base cannot complete costs 100 on every
        // descendant, so the branch is dropped at creation.
        let pchow1_ok = (rank >= 1 && self.kb[t - 1] > 0) || (rank <= 6 && self.kb[t + 2] > 0);
        let pchow2_ok = rank <= 6 && self.kb[t + 1] > 0;

        // Action 2: seize (t, t⁺, t⁺⁺) ∩ pending.
        if empty_slot && (has1 || has2) {
            let mut p = pending;
            p[t] -= 1;
            let c = if has1 && has2 {
                p[t + 1] -= 1;
                p[t + 2] -= 1;
                Some(code(TAG_CHOW, t as u8, 0))
            } else if has1 {
                p[t + 1] -= 1;
                pchow1_ok.then(|| code(TAG_PCHOW, t as u8, t as u8 + 1))
            } else {
                p[t + 2] -= 1;
                pchow2_ok.then(|| code(TAG_PCHOW, t as u8, t as u8 + 2))
            };
            if let Some(c) = c {
                self.expand(p, place(&holders, c), eye);
            }
        }
        // Action 4: seize (t, t, t) ∩ pending.
        if empty_slot && pending[t] >= 2 {
            let mut p = pending;
            let c = if pending[t] >= 3 {
                p[t] -= 3;
                code(TAG_PONG, t as u8, 0)
            } else {
                p[t] -= 2;
                code(TAG_PAIR, t as u8, 0)
            };
            self.expand(p, place(&holders, c), eye);
        }
        // Action 3: make the eye.
        if eye == 0 && pending[t] >= 2 {
            let mut p = pending;
            p[t] -= 2;
            self.expand(p, holders, code(TAG_PAIR, t as u8, 0));
        }
        // Action 5: claim only (t, t⁺), leaving t⁺⁺ pending.
        if empty_slot && has1 && has2 && pchow1_ok {
            let mut p = pending;
            p[t] -= 1;
            p[t + 1] -= 1;
            self.expand(p, place(&holders, code(TAG_PCHOW, t as u8, t as u8 + 1)), eye);
        }
        // Action 6: claim only (t, t⁺⁺), leaving t⁺ pending.
        if empty_slot && has1 && has2 && pchow2_ok {
            let mut p = pending;
            p[t] -= 1;
            p[t + 2] -= 1;
            self.expand(p, place(&holders, code(TAG_PCHOW, t as u8, t as u8 + 2)), eye);
        }
        // Action 1: pass t to the remainder.
        let mut p = pending;
        p[t] -= 1;
        self.expand(p, holders, eye);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::{kb_from_hand, parse_hand, parse_kb, Colour, KnowledgeBase};

    fn tile(c: Colour, r: u8) -> Tile {
        Tile::new(c, r).unwrap()
    }

    #[test]
    fn complete_hand_costs_zero() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        assert_eq!(quadtree_dfncy(&hand, &kb_from_hand(&hand)), 0);
        assert_eq!(quadtree_dfncy(&hand, &KnowledgeBase::empty()), 0);
    }

    #[test]
    fn counterexample_hand_needs_partial_chow_actions() {
        // Greedy chows alone cannot reach the cost-3 pre-decomposition here;
        // the two partial-chow actions make it reachable.
        let hand = parse_hand("B1B5B6B8B8B8B9D1D2D4D5D5D6D7").unwrap();
        let kb = parse_kb("343423023|434434443|334220344").unwrap();
        assert_eq!(quadtree_dfncy(&hand, &kb), 3);
    }

    #[test]
    fn running_example_ready_hand() {
        let hand = parse_hand("C1C4C6C7C8C9D1D2D3D6D6D7D8").unwrap();
        let kb = parse_kb("001100121|010000030|032242321").unwrap();
        assert_eq!(quadtree_dfncy(&hand, &kb), 4);
    }

    #[test]
    fn worst_case_full_complement_is_six() {
        let hand = parse_hand("B3B5B6B9C2C2C3C6C9D1D1D2D5D8").unwrap();
        assert_eq!(quadtree_dfncy(&hand, &kb_from_hand(&hand)), 6);
    }

    #[test]
    fn ready_hand_tenpai_is_one() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5").unwrap();
        assert_eq!(quadtree_dfncy(&hand, &kb_from_hand(&hand)), 1);
    }

    #[test]
    fn empty_kb_makes_incomplete_hands_incompletable() {
        let hand = parse_hand("B1B2B2B3B3C9B7B7B7C1C1D4D5D6").unwrap();
        assert_eq!(quadtree_dfncy(&hand, &KnowledgeBase::empty()), INCOMPLETABLE);
    }

    #[test]
    fn fixed_melds_shrink_the_search() {
        // Two concealed tiles and four consolidated melds: a pair wins now.
        let hand = parse_hand("D9D9;k=4").unwrap();
        assert_eq!(quadtree_dfncy(&hand, &kb_from_hand(&hand)), 0);
        // Non-pair: one replacement if a twin is available.
        let hand = parse_hand("D8D9;k=4").unwrap();
        assert_eq!(quadtree_dfncy(&hand, &kb_from_hand(&hand)), 1);
    }

    #[test]
    fn pdcmp_cost_counterexample_pdcmp_is_incompletable() {
        // (B5B6)(D1D2)(D4D5D6)(D5D7) eye (B8B8): the (D5D7) pchow needs D6,
        // which this knowledge base no longer has.
        let hand = parse_hand("B1B5B6B8B8B8B9D1D2D4D5D5D6D7").unwrap();
        let kb = parse_kb("343423023|434434443|334220344").unwrap();
        let pdcmp = PDcmp::new(
            [
                MeldHolder::Pchow(tile(Colour::Bamboo, 5), tile(Colour::Bamboo, 6)),
                MeldHolder::Pchow(tile(Colour::Dot, 1), tile(Colour::Dot, 2)),
                MeldHolder::Chow(tile(Colour::Dot, 4)),
                MeldHolder::Pchow(tile(Colour::Dot, 5), tile(Colour::Dot, 7)),
            ],
            EyeHolder::Pair(tile(Colour::Bamboo, 8)),
            &hand,
        )
        .unwrap();
        assert_eq!(pdcmp_cost(&pdcmp, &kb), INCOMPLETABLE);
    }

    #[test]
    fn pdcmp_cost_with_full_complement_is_three() {
        // (B5B6)(B8B8B8)(D4D5D6)(D5D7), eye empty, remainder B1 B9 D1 D2 D5:
        // two pchow completions plus an eye grown from the remainder.
        let hand = parse_hand("B1B5B6B8B8B8B9D1D2D4D5D5D6D7").unwrap();
        let pdcmp = PDcmp::new(
            [
                MeldHolder::Pchow(tile(Colour::Bamboo, 5), tile(Colour::Bamboo, 6)),
                MeldHolder::Pong(tile(Colour::Bamboo, 8)),
                MeldHolder::Chow(tile(Colour::Dot, 4)),
                MeldHolder::Pchow(tile(Colour::Dot, 5), tile(Colour::Dot, 7)),
            ],
            EyeHolder::Empty,
            &hand,
        )
        .unwrap();
        assert_eq!(pdcmp_cost(&pdcmp, &kb_from_hand(&hand)), 3);
    }

    #[test]
    fn pdcmp_cost_of_a_complete_decomposition_is_zero() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        let pdcmp = PDcmp::new(
            [
                MeldHolder::Chow(tile(Colour::Bamboo, 1)),
                MeldHolder::Chow(tile(Colour::Bamboo, 2)),
                MeldHolder::Pong(tile(Colour::Bamboo, 7)),
                MeldHolder::Chow(tile(Colour::Dot, 4)),
            ],
            EyeHolder::Pair(tile(Colour::Character, 1)),
            &hand,
        )
        .unwrap();
        assert_eq!(pdcmp_cost(&pdcmp, &KnowledgeBase::empty()), 0);
    }

    #[test]
    fn pdcmp_new_rejects_overconsumption_and_bad_shapes() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        let err = PDcmp::new(
            [MeldHolder::Pong(tile(Colour::Bamboo, 1)), MeldHolder::Empty, MeldHolder::Empty, MeldHolder::Empty],
            EyeHolder::Empty,
            &hand,
        )
        .unwrap_err();
        assert_eq!(err, PDcmpError::NotInHand { tile: tile(Colour::Bamboo, 1) });
        let err = PDcmp::new(
            [
                MeldHolder::Pchow(tile(Colour::Bamboo, 1), tile(Colour::Bamboo, 4)),
                MeldHolder::Empty,
                MeldHolder::Empty,
                MeldHolder::Empty,
            ],
            EyeHolder::Empty,
            &hand,
        )
        .unwrap_err();
        assert!(matches!(err, PDcmpError::BadPchow { .. }));
        let err = PDcmp::new(
            [MeldHolder::Chow(tile(Colour::Bamboo, 8)), MeldHolder::Empty, MeldHolder::Empty, MeldHolder::Empty],
            EyeHolder::Empty,
            &hand,
        )
        .unwrap_err();
        assert!(matches!(err, PDcmpError::BadChow { .. }));
    }

    #[test]
    fn joint_consumption_never_reuses_a_remainder_tile() {
        // Hand with one D6 in the remainder and a knowledge base where D6 is
        // the only eye seed and the only meld seed: the single tile cannot
        // fund both, so two scratch builds cost more than naive per-holder
        // pricing would claim.
        let hand = parse_hand("C1C4C6C7C8C9D1D2D3D6D6D7D8").unwrap();
        let kb = parse_kb("001100121|010000030|032242321").unwrap();
        // Holders: (C6C7C8)(D1D2D3)(D6D7D8), eye empty, one meld holder left.
        // Remainder: C1 C4 C9 D6.
        let pdcmp = PDcmp::new(
            [
                MeldHolder::Chow(tile(Colour::Character, 6)),
                MeldHolder::Chow(tile(Colour::Dot, 1)),
                MeldHolder::Chow(tile(Colour::Dot, 6)),
                MeldHolder::Empty,
            ],
            EyeHolder::Empty,
            &hand,
        )
        .unwrap();
        // D6 is the only remainder tile the knowledge base can pair into an
        // eye (+1) and the only one it can grow into a meld (+2). Pricing the
        // eye and the meld independently would claim 1 + 2 = 3, spending the
        // single D6 instance twice; every honest joint plan costs 4.
        assert_eq!(pdcmp_cost(&pdcmp, &kb), 4);
    }
}
