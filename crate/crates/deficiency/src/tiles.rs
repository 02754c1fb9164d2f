//! Tile, hand, and knowledge-base model: parsing, formatting, and the
//! elementary tile algebra every engine builds on.
//!
//! A tile is a (colour, rank) pair: colour ∈ {Bamboo, Character, Dot},
//! rank ∈ 1..=9, giving 27 kinds with 4 physical copies each. A hand is a
//! sorted multiset of 13−3k or 14−3k tiles, where k counts melds already
//! consolidated outside the concealed tiles. A knowledge base is a 27-vector
//! of counters 0..=4: how many copies of each kind the player believes are
//! still available.
//!
//! Text formats (the wire format for the CLI):
//! - hand: tokens like `B1`, `C9`, `D4`, optionally separated by spaces or
//!   `|`, with an optional `;k=<0..4>` suffix for consolidated melds;
//! - knowledge base: 27 digits 0..=4 in kind order (B1..B9, C1..C9, D1..D9),
//!   with an optional `|` after each group of nine.

use std::fmt;

use thiserror::Error;

/// Number of distinct tile kinds (3 colours × 9 ranks).
pub const KINDS: usize = 27;

/// Maximum copies of one tile kind in play.
pub const COPIES: u8 = 4;

/// Tile colour. The discriminant is the colour index used in kind arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Colour {
    /// `B` tiles.
    Bamboo = 0,
    /// `C` tiles.
    Character = 1,
    /// `D` tiles.
    Dot = 2,
}

impl Colour {
    /// All colours in canonical order.
    pub const ALL: [Colour; 3] = [Colour::Bamboo, Colour::Character, Colour::Dot];

    /// Colour from its index 0..=2.
    pub fn from_index(index: usize) -> Option<Colour> {
        Colour::ALL.get(index).copied()
    }

    /// Index 0..=2.
    pub fn index(self) -> usize {
        self as usize
    }

    /// One-letter name used in the text formats.
    pub fn letter(self) -> char {
        match self {
            Colour::Bamboo => 'B',
            Colour::Character => 'C',
            Colour::Dot => 'D',
        }
    }
}

/// One of the 27 tile kinds: a colour plus a rank 1..=9.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile {
    colour: Colour,
    rank: u8,
}

impl Tile {
    /// Build a tile, checking the rank bounds.
    pub fn new(colour: Colour, rank: u8) -> Result<Tile, ParseError> {
        if (1..=9).contains(&rank) {
            Ok(Tile { colour, rank })
        } else {
            Err(ParseError::RankOutOfRange { rank })
        }
    }

    /// The tile's colour.
    pub fn colour(self) -> Colour {
        self.colour
    }

    /// The tile's rank, 1..=9.
    pub fn rank(self) -> u8 {
        self.rank
    }

    /// Kind index `9·colour + rank − 1`, 0..=26.
    pub fn kind(self) -> usize {
        9 * self.colour.index() + self.rank as usize - 1
    }

    /// Tile from a kind index 0..=26.
    pub fn from_kind(kind: usize) -> Tile {
        debug_assert!(kind < KINDS);
        Tile {
            colour: Colour::from_index(kind / 9).expect("kind < 27"),
            rank: (kind % 9) as u8 + 1,
        }
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.colour.letter(), self.rank)
    }
}

/// `t⁺` / `t⁺⁺`: the tile `step` ranks above `t` in the same colour, when that
/// rank exists.
pub fn tile_succ(t: Tile, step: u8) -> Option<Tile> {
    debug_assert!(step == 1 || step == 2, "step must be 1 or 2");
    let rank = t.rank + step;
    (rank <= 9).then(|| Tile { colour: t.colour, rank })
}

/// Errors from parsing hand or knowledge-base text, or from tile construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    /// A hand token did not match `<B|C|D><1..9>`.
    #[error("malformed tile token at byte {at}: expected a colour letter B/C/D followed by a digit 1-9")]
    MalformedToken { at: usize },
    /// Rank outside 1..=9.
    #[error("rank {rank} out of range 1..=9")]
    RankOutOfRange { rank: u8 },
    /// The `;k=` suffix was malformed or out of range.
    #[error("malformed melds suffix: expected `;k=<0..4>`")]
    MalformedMeldsSuffix,
    /// A knowledge base string was not exactly 27 digits.
    #[error("knowledge base must contain exactly 27 digits, found {found}")]
    KbLength { found: usize },
    /// A knowledge base digit exceeded 4.
    #[error("knowledge base digit {digit} at position {at} exceeds 4")]
    KbDigit { digit: char, at: usize },
    /// An unexpected character appeared in a knowledge base string.
    #[error("unexpected character {found:?} in knowledge base at byte {at}")]
    KbChar { found: char, at: usize },
}

/// Errors from hand construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HandError {
    /// More than four copies of one kind.
    #[error("tile {tile} occurs {count} times; at most 4 copies exist")]
    TooManyCopies { tile: Tile, count: u8 },
    /// Tile count does not fit 13−3k / 14−3k for the given melds_fixed.
    #[error("hand has {len} tiles with {melds_fixed} consolidated melds; expected {expect13} or {expect14}")]
    Size { len: usize, melds_fixed: u8, expect13: usize, expect14: usize },
    /// melds_fixed outside 0..=4.
    #[error("melds_fixed {melds_fixed} out of range 0..=4")]
    MeldsFixed { melds_fixed: u8 },
}

/// Errors from [`replace_tile`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplaceError {
    /// The outgoing tile is not in the hand.
    #[error("tile {tile} is not in the hand")]
    NotInHand { tile: Tile },
    /// The incoming tile has no copies left in the knowledge base.
    #[error("tile {tile} is not available in the knowledge base")]
    NotAvailable { tile: Tile },
    /// Outgoing and incoming tiles are identical — a no-op replacement.
    #[error("replacing {tile} with itself is a no-op and is rejected")]
    NoOp { tile: Tile },
    /// The hand already holds all four copies of the incoming tile.
    #[error("the hand already holds four copies of {tile}")]
    TooManyCopies { tile: Tile },
}

/// A sorted multiset of tiles plus the count of consolidated melds.
///
/// Invariants (enforced at construction): tiles sorted canonically, at most
/// four copies per kind, and `len + 3·melds_fixed ∈ {13, 14}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hand {
    tiles: Vec<Tile>,
    melds_fixed: u8,
}

impl Hand {
    /// Build a hand from tiles (any order) and a consolidated-meld count.
    pub fn new(mut tiles: Vec<Tile>, melds_fixed: u8) -> Result<Hand, HandError> {
        if melds_fixed > 4 {
            return Err(HandError::MeldsFixed { melds_fixed });
        }
        tiles.sort();
        let mut counts = [0u8; KINDS];
        for &t in &tiles {
            counts[t.kind()] += 1;
            if counts[t.kind()] > COPIES {
                return Err(HandError::TooManyCopies { tile: t, count: counts[t.kind()] });
            }
        }
        let expect13 = 13 - 3 * melds_fixed as usize;
        let expect14 = 14 - 3 * melds_fixed as usize;
        if tiles.len() != expect13 && tiles.len() != expect14 {
            return Err(HandError::Size { len: tiles.len(), melds_fixed, expect13, expect14 });
        }
        Ok(Hand { tiles, melds_fixed })
    }

    /// Build a hand from per-kind counts.
    pub fn from_counts(counts: &[u8; KINDS], melds_fixed: u8) -> Result<Hand, HandError> {
        let mut tiles = Vec::new();
        for (kind, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                tiles.push(Tile::from_kind(kind));
            }
        }
        Hand::new(tiles, melds_fixed)
    }

    /// The concealed tiles, sorted.
    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    /// Number of concealed tiles.
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    /// True when the hand holds no concealed tiles. Unreachable for valid
    /// hands (even four consolidated melds leave one or two tiles) but
    /// conventional to provide alongside `len`.
    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Count of consolidated melds held outside the concealed tiles.
    pub fn melds_fixed(&self) -> u8 {
        self.melds_fixed
    }

    /// True when the hand is at full size (14 − 3k tiles): one discard away
    /// from its ready size.
    pub fn has_draw(&self) -> bool {
        self.tiles.len() + 3 * self.melds_fixed as usize == 14
    }

    /// Per-kind multiplicities.
    pub fn counts(&self) -> [u8; KINDS] {
        let mut counts = [0u8; KINDS];
        for &t in &self.tiles {
            counts[t.kind()] += 1;
        }
        counts
    }

    /// Multiplicity of one tile.
    pub fn count_of(&self, t: Tile) -> u8 {
        self.tiles.iter().filter(|&&x| x == t).count() as u8
    }
}

impl fmt::Display for Hand {
    /// Canonical text: concatenated sorted tokens, plus `;k=` when nonzero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tiles {
            write!(f, "{t}")?;
        }
        if self.melds_fixed > 0 {
            write!(f, ";k={}", self.melds_fixed)?;
        }
        Ok(())
    }
}

/// Per-kind counters 0..=4 of tiles the player believes are available.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KnowledgeBase {
    counts: [u8; KINDS],
}

impl KnowledgeBase {
    /// Build from counts, checking the 0..=4 bounds.
    pub fn new(counts: [u8; KINDS]) -> Result<KnowledgeBase, ParseError> {
        if let Some(at) = counts.iter().position(|&c| c > COPIES) {
            return Err(ParseError::KbDigit { digit: (b'0' + counts[at]) as char, at });
        }
        Ok(KnowledgeBase { counts })
    }

    /// A knowledge base with all 27 counters zero.
    pub fn empty() -> KnowledgeBase {
        KnowledgeBase { counts: [0; KINDS] }
    }

    /// The raw counters.
    pub fn counts(&self) -> &[u8; KINDS] {
        &self.counts
    }

    /// Counter for one kind index.
    pub fn get_kind(&self, kind: usize) -> u8 {
        self.counts[kind]
    }

    /// Counter for one tile.
    pub fn get(&self, t: Tile) -> u8 {
        self.counts[t.kind()]
    }

    /// Total believed-available tiles.
    pub fn total(&self) -> u32 {
        self.counts.iter().map(|&c| c as u32).sum()
    }

    /// True when some kind has at least two copies (the KB "has a pair").
    pub fn has_pair(&self) -> bool {
        self.counts.iter().any(|&c| c >= 2)
    }

    /// True when the KB "has a meld": some kind with three copies, or some
    /// chow with every member available.
    pub fn has_meld(&self) -> bool {
        if self.counts.iter().any(|&c| c >= 3) {
            return true;
        }
        for colour in 0..3 {
            for start in 0..7 {
                let base = 9 * colour + start;
                if self.counts[base] > 0 && self.counts[base + 1] > 0 && self.counts[base + 2] > 0 {
                    return true;
                }
            }
        }
        false
    }

    /// Compatibility with a hand: hand copies plus believed-available copies
    /// never exceed the four physical copies of any kind.
    pub fn is_compatible(&self, hand: &Hand) -> bool {
        let hc = hand.counts();
        (0..KINDS).all(|k| hc[k] + self.counts[k] <= COPIES)
    }

    /// `KB ⊖ t`: one fewer copy of `t`. `None` when no copy is available.
    pub fn minus(&self, t: Tile) -> Option<KnowledgeBase> {
        let kind = t.kind();
        if self.counts[kind] == 0 {
            return None;
        }
        let mut counts = self.counts;
        counts[kind] -= 1;
        Some(KnowledgeBase { counts })
    }
}

impl fmt::Display for KnowledgeBase {
    /// Canonical text: three `|`-separated groups of nine digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &c) in self.counts.iter().enumerate() {
            if i == 9 || i == 18 {
                write!(f, "|")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parse hand text: `<B|C|D><1..9>` tokens with optional spaces or `|`
/// separators and an optional `;k=<0..4>` suffix. Token order is irrelevant;
/// the result is canonically sorted.
pub fn parse_hand(text: &str) -> Result<Hand, HandParseError> {
    let (tile_part, melds_fixed) = match text.find(';') {
        Some(pos) => {
            let suffix = &text[pos..];
            let k = suffix
                .strip_prefix(";k=")
                .and_then(|rest| rest.trim().parse::<u8>().ok())
                .filter(|&k| k <= 4)
                .ok_or(ParseError::MalformedMeldsSuffix)?;
            (&text[..pos], k)
        }
        None => (text, 0),
    };

    let bytes = tile_part.as_bytes();
    let mut tiles = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'|' | b'\t' => i += 1,
            b'B' | b'C' | b'D' => {
                let colour = match bytes[i] {
                    b'B' => Colour::Bamboo,
                    b'C' => Colour::Character,
                    _ => Colour::Dot,
                };
                let rank = bytes
                    .get(i + 1)
                    .filter(|d| (b'1'..=b'9').contains(d))
                    .map(|d| d - b'0')
                    .ok_or(ParseError::MalformedToken { at: i })?;
                tiles.push(Tile::new(colour, rank).expect("rank checked"));
                i += 2;
            }
            _ => return Err(ParseError::MalformedToken { at: i }.into()),
        }
    }
    Ok(Hand::new(tiles, melds_fixed)?)
}

/// Combined error type for [`parse_hand`]: token errors or hand-invariant
/// violations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HandParseError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Hand(#[from] HandError),
}

/// Parse knowledge-base text: exactly 27 digits 0..=4 in kind order, with
/// optional `|` separators and spaces.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let mut counts = [0u8; KINDS];
    let mut n = 0usize;
    for (at, ch) in text.char_indices() {
        match ch {
            '|' | ' ' | '\t' => {}
            '0'..='4' => {
                if n < KINDS {
                    counts[n] = ch as u8 - b'0';
                }
                n += 1;
            }
            '5'..='9' => return Err(ParseError::KbDigit { digit: ch, at }),
            _ => return Err(ParseError::KbChar { found: ch, at }),
        }
    }
    if n != KINDS {
        return Err(ParseError::KbLength { found: n });
    }
    Ok(KnowledgeBase { counts })
}

/// The complement knowledge base of a hand: 4 minus the hand's multiplicity
/// for every kind. Interpreting deficiency against this KB recovers the
/// knowledge-free deficiency number.
pub fn kb_from_hand(hand: &Hand) -> KnowledgeBase {
    let hc = hand.counts();
    let mut counts = [0u8; KINDS];
    for k in 0..KINDS {
        counts[k] = COPIES - hc[k];
    }
    KnowledgeBase { counts }
}

/// `H[out/in_]` with `KB ⊖ in_`: replace one copy of `out` with `in_`, drawn
/// from the knowledge base. The discarded tile is *not* returned to the KB —
/// the deficiency definition only ever decrements availability.
pub fn replace_tile(
    hand: &Hand,
    out: Tile,
    in_: Tile,
    kb: &KnowledgeBase,
) -> Result<(Hand, KnowledgeBase), ReplaceError> {
    if out == in_ {
        return Err(ReplaceError::NoOp { tile: out });
    }
    let pos = hand
        .tiles
        .iter()
        .position(|&t| t == out)
        .ok_or(ReplaceError::NotInHand { tile: out })?;
    let new_kb = kb.minus(in_).ok_or(ReplaceError::NotAvailable { tile: in_ })?;
    if hand.tiles.iter().filter(|&&t| t == in_).count() >= 4 {
        return Err(ReplaceError::TooManyCopies { tile: in_ });
    }
    let mut tiles = hand.tiles.clone();
    tiles[pos] = in_;
    tiles.sort();
    // Size and multiplicity are re-checked above, so the struct can be built
    // directly; the knowledge base may lawfully disagree with the hand.
    let new_hand = Hand { tiles, melds_fixed: hand.melds_fixed };
    Ok((new_hand, new_kb))
}

/// Pack per-kind counts (each 0..=4) into nibbles of a `u128` for cheap
/// hashing and equality in search frontiers.
pub(crate) fn pack_counts(counts: &[u8; KINDS]) -> u128 {
    let mut packed = 0u128;
    for (i, &c) in counts.iter().enumerate() {
        packed |= (c as u128) << (4 * i);
    }
    packed
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tile(text: &str) -> Tile {
        let h = text.as_bytes();
        let colour = match h[0] {
            b'B' => Colour::Bamboo,
            b'C' => Colour::Character,
            _ => Colour::Dot,
        };
        Tile::new(colour, h[1] - b'0').unwrap()
    }

    #[test]
    fn parses_complete_example_hand() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        assert_eq!(hand.len(), 14);
        assert_eq!(hand.melds_fixed(), 0);
        assert_eq!(hand.count_of(tile("B7")), 3);
        assert_eq!(hand.to_string(), "B1B2B2B3B3B4B7B7B7C1C1D4D5D6");
    }

    #[test]
    fn parse_accepts_separators_and_sorts() {
        let hand = parse_hand("D6 D5|D4 C1C1 B7B7B7 B4B3B3B2B2B1").unwrap();
        assert_eq!(hand.to_string(), "B1B2B2B3B3B4B7B7B7C1C1D4D5D6");
    }

    #[test]
    fn parse_hand_rejects_wrong_size() {
        assert!(matches!(parse_hand("B1B1"), Err(HandParseError::Hand(HandError::Size { len: 2, .. }))));
    }

    #[test]
    fn parse_hand_rejects_five_copies() {
        let err = parse_hand("C5C5C5C5C5C9C9C9C9B1B2B3D1D2").unwrap_err();
        assert!(matches!(err, HandParseError::Hand(HandError::TooManyCopies { count: 5, .. })));
    }

    #[test]
    fn parse_hand_rejects_garbage_token() {
        assert!(matches!(parse_hand("X1B2B3"), Err(HandParseError::Parse(ParseError::MalformedToken { at: 0 }))));
        assert!(matches!(parse_hand("B0B2B3"), Err(HandParseError::Parse(ParseError::MalformedToken { at: 0 }))));
    }

    #[test]
    fn parse_hand_melds_suffix() {
        let hand = parse_hand("B1B2B2B3B3B4B7C1C1D4D6;k=1").unwrap();
        assert_eq!(hand.melds_fixed(), 1);
        assert_eq!(hand.len(), 11);
        assert!(parse_hand("B1B2B3;k=9").is_err());
        assert!(parse_hand("B1B2B3;j=1").is_err());
    }

    #[test]
    fn parse_kb_running_example() {
        let kb = parse_kb("001100121|010000030|032242321").unwrap();
        assert_eq!(kb.get(tile("B3")), 1);
        assert_eq!(kb.get(tile("C8")), 3);
        assert_eq!(kb.get(tile("D5")), 4);
        assert_eq!(kb.to_string(), "001100121|010000030|032242321");
    }

    #[test]
    fn parse_kb_rejects_bad_input() {
        assert_eq!(parse_kb("000"), Err(ParseError::KbLength { found: 3 }));
        let bad = "005000000|000000000|000000000";
        assert_eq!(parse_kb(bad), Err(ParseError::KbDigit { digit: '5', at: 2 }));
        assert!(matches!(parse_kb("x00000000|000000000|000000000"), Err(ParseError::KbChar { found: 'x', .. })));
    }

    #[test]
    fn kb_from_hand_is_complement() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        let kb = kb_from_hand(&hand);
        assert_eq!(kb.get(tile("B1")), 3);
        assert_eq!(kb.get(tile("B2")), 2);
        assert_eq!(kb.get(tile("B7")), 1);
        assert_eq!(kb.get(tile("C1")), 2);
        assert_eq!(kb.get(tile("D5")), 3);
        assert_eq!(kb.get(tile("C9")), 4);
        assert!(kb.is_compatible(&hand));
        assert_eq!(kb.total() as usize + hand.len(), 108);
    }

    #[test]
    fn tile_succ_respects_rank_bounds() {
        assert_eq!(tile_succ(tile("B8"), 1), Some(tile("B9")));
        assert_eq!(tile_succ(tile("B8"), 2), None);
        assert_eq!(tile_succ(tile("D1"), 2), Some(tile("D3")));
    }

    #[test]
    fn replace_tile_swaps_and_decrements() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        let kb = kb_from_hand(&hand);
        let (next, next_kb) = replace_tile(&hand, tile("B1"), tile("C1"), &kb).unwrap();
        assert_eq!(next.len(), 14);
        assert_eq!(next.count_of(tile("C1")), 3);
        assert_eq!(next.count_of(tile("B1")), 0);
        assert_eq!(next_kb.get(tile("C1")), 1);
        // The discard is not returned to the knowledge base.
        assert_eq!(next_kb.get(tile("B1")), 3);
    }

    #[test]
    fn replace_tile_rejects_noop_and_unavailable() {
        let hand = parse_hand("B1B2B2B3B3B4B7B7B7C1C1D4D5D6").unwrap();
        let kb = KnowledgeBase::empty();
        assert_eq!(replace_tile(&hand, tile("B1"), tile("B1"), &kb), Err(ReplaceError::NoOp { tile: tile("B1") }));
        assert_eq!(
            replace_tile(&hand, tile("B1"), tile("C2"), &kb),
            Err(ReplaceError::NotAvailable { tile: tile("C2") })
        );
        let full = kb_from_hand(&hand);
        assert_eq!(
            replace_tile(&hand, tile("C9"), tile("C2"), &full),
            Err(ReplaceError::NotInHand { tile: tile("C9") })
        );
    }

    #[test]
    fn kb_flags_pair_and_meld() {
        let mut counts = [0u8; KINDS];
        counts[0] = 1;
        let kb = KnowledgeBase::new(counts).unwrap();
        assert!(!kb.has_pair());
        assert!(!kb.has_meld());
        counts[0] = 2;
        assert!(KnowledgeBase::new(counts).unwrap().has_pair());
        counts[0] = 3;
        assert!(KnowledgeBase::new(counts).unwrap().has_meld());
        // Chow-shaped meld: B4 B5 B6 singletons.
        let mut chow = [0u8; KINDS];
        chow[3] = 1;
        chow[4] = 1;
        chow[5] = 1;
        let kb = KnowledgeBase::new(chow).unwrap();
        assert!(kb.has_meld());
        assert!(!kb.has_pair());
    }

    #[test]
    fn pack_counts_distinguishes_multisets() {
        let mut a = [0u8; KINDS];
        let mut b = [0u8; KINDS];
        a[0] = 2;
        b[0] = 1;
        b[1] = 1;
        assert_ne!(pack_counts(&a), pack_counts(&b));
        assert_eq!(pack_counts(&a), pack_counts(&a.clone()));
    }
}
