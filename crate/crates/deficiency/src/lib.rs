//! Knowledge-aware Mahjong deficiency (shanten) computation.
//!
//! The deficiency of a hand is the minimum number of tile replacements needed
//! to reach a winning hand (four melds plus a pair). This crate computes the
//! *knowledge-aware* variant, where every replacement must draw a tile the
//! player still believes to be available, tracked per tile kind in a
//! [`KnowledgeBase`].
//!
//! Three engines compute the same number with different cost profiles:
//!
//! - [`oracle`] — literal breadth-first expansion of the definition.
//!   Exponential; exists to be slow and obviously correct.
//! - [`quadtree`] — exhaustive branch-and-bound over pre-decompositions
//!   (four meld holders plus an eye holder). Exact, moderately fast.
//! - [`block`] — the fast path: partition the hand into independent blocks,
//!   compress each block's quasi-decompositions into 7-attribute type tuples,
//!   join the type sets, and price each global type with a closed-form
//!   decision procedure. Exact whenever the true deficiency is at most 4.
//!
//! On top of the engines sit a discard heuristic ([`decision`]) and a
//! benchmark/fuzzing harness ([`bench`]) with a census of all single-colour
//! 14-tile hands.
//!
//! Tiles span three colours (Bamboo, Character, Dot) with ranks 1–9, four
//! copies each — 108 physical tiles. Honour tiles are out of scope, and a
//! seven-pairs hand is not a win.

pub mod bench;
pub mod block;
pub mod completeness;
pub mod decision;
pub mod oracle;
pub mod quadtree;
pub mod tiles;

pub use block::{
    audit_groups, block_dfncy, block_dfncy_opts, decide, join_types, kb_blocks, BlockOptions,
    TypeTuple,
};
pub use completeness::{is_complete, Decomposition};
pub use decision::{discard_values, Backend, DiscardReport};
pub use oracle::{oracle_dfncy, oracle_dfncy13};
pub use quadtree::{pdcmp_cost, quadtree_dfncy, PDcmp};
pub use tiles::{kb_from_hand, parse_hand, parse_kb, replace_tile, tile_succ, Colour, Hand, KnowledgeBase, Tile};

/// Sentinel deficiency for a hand that cannot be completed (or, for the
/// capped oracle, cannot be completed within the cap). Chosen far above any
/// real deficiency so `min` folds treat it as "no result".
pub const INCOMPLETABLE: u8 = 100;
