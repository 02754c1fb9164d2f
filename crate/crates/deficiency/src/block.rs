//! Fast deficiency via block decomposition and attribute tuples.
//!
//! The hand splits into knowledge-aware blocks: maximal same-colour groups
//! whose tiles can still interact through some chow, given what the
//! knowledge base has left. Each block is small, so all of its internal
//! decompositions into melds, pairs, and partial chows can be enumerated
//! outright; one survives only when its partial sets can draw completing
//! tiles from the knowledge base all at once, at most one pair going
//! without. A decomposition is then forgotten in favour of its
//! *type*: a seven-attribute tuple recording how many melds and partial sets
//! it has, how many of its pairs are dead, and three flags describing what
//! its remainder can still become. Types from different blocks combine with
//! a small join, and a closed-form decision procedure prices each combined
//! type without any further search.
//!
//! The price is a lower bound on true deficiency that is exact whenever the
//! true value is at most four — the regime every discard decision lives in.

use std::collections::BTreeSet;
use std::fmt;

use crate::quadtree::{chow_partners, pchow_completers};
use crate::tiles::{Hand, KnowledgeBase, Tile, KINDS};
use crate::INCOMPLETABLE;

/// A maximal group of hand tiles of one colour that the knowledge base still
/// lets interact through chows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    counts: [u8; KINDS],
}

impl Block {
    /// Per-kind counts of the block's tiles.
    pub fn counts(&self) -> &[u8; KINDS] {
        &self.counts
    }

    /// The block's tiles in ascending order.
    pub fn tiles(&self) -> Vec<Tile> {
        let mut out = Vec::new();
        for k in 0..KINDS {
            for _ in 0..self.counts[k] {
                out.push(Tile::from_kind(k));
            }
        }
        out
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for t in self.tiles() {
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// Split a hand into its knowledge-aware blocks, in tile order.
///
/// Two hand kinds of one colour belong together when they are identical or
/// some chow containing both can still be assembled: the third tile of that
/// chow must survive in the hand or the knowledge base.
pub fn kb_blocks(hand: &Hand, kb: &KnowledgeBase) -> Vec<Block> {
    let hc = hand.counts();
    let kc = kb.counts();
    let avail = |k: usize| hc[k] > 0 || kc[k] > 0;
    let mut blocks = Vec::new();
    for colour in 0..3 {
        let base = 9 * colour;
        let mut current: Option<(usize, [u8; KINDS])> = None;
        for rank in 0..9 {
            let k = base + rank;
            if hc[k] == 0 {
                continue;
            }
            let joins = match current {
                None => false,
                Some((last, _)) => match k - last {
                    1 => (rank >= 2 && avail(k - 2)) || (rank <= 7 && avail(k + 1)),
                    2 => avail(k - 1),
                    _ => false,
                },
            };
            match (&mut current, joins) {
                (Some((last, counts)), true) => {
                    counts[k] = hc[k];
                    *last = k;
                }
                _ => {
                    if let Some((_, counts)) = current.take() {
                        blocks.push(Block { counts });
                    }
                    let mut counts = [0u8; KINDS];
                    counts[k] = hc[k];
                    current = Some((k, counts));
                }
            }
        }
        if let Some((_, counts)) = current.take() {
            blocks.push(Block { counts });
        }
    }
    blocks
}

/// Regroup a hand's blocks for pricing: two same-colour blocks that could
/// draw on the same knowledge-base tile — some surviving kind lies within
/// chow range of both — are enumerated and audited together, so joint
/// consumption stays honest across the gap between them. The result is a
/// coarser partition into the same block shape; blocks with disjoint
/// resource ranges pass through untouched.
pub fn audit_groups(hand: &Hand, kb: &KnowledgeBase) -> Vec<Block> {
    grouped_with_claims(hand, kb).into_iter().map(|(b, _)| b).collect()
}

/// [`audit_groups`] paired with each group's claim mask: the knowledge-base
/// kinds the group could consume — every surviving kind within two ranks of
/// one of its tiles, in its own colour. Masks of distinct groups are
/// disjoint by construction, so the groups never compete for a tile.
fn grouped_with_claims(hand: &Hand, kb: &KnowledgeBase) -> Vec<(Block, u32)> {
    let kc = kb.counts();
    let claim_mask = |counts: &[u8; KINDS]| -> u32 {
        let mut mask = 0u32;
        for k in 0..KINDS {
            if counts[k] == 0 {
                continue;
            }
            let colour_base = k / 9 * 9;
            let lo = k.saturating_sub(2).max(colour_base);
            let hi = (k + 2).min(colour_base + 8);
            for c in lo..=hi {
                if kc[c] > 0 {
                    mask |= 1 << c;
                }
            }
        }
        mask
    };
    let mut groups: Vec<(Block, u32)> = Vec::new();
    for b in kb_blocks(hand, kb) {
        let mut counts = b.counts;
        let mut mask = claim_mask(&counts);
        while let Some(i) = groups.iter().position(|&(_, m)| m & mask != 0) {
            let (g, m) = groups.swap_remove(i);
            for k in 0..KINDS {
                counts[k] += g.counts[k];
            }
            mask |= m;
        }
        groups.push((Block { counts }, mask));
    }
    groups.sort_by_key(|(b, _)| b.counts.iter().position(|&c| c > 0));
    groups
}

/// One part of a block decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    /// Complete chow starting at the tile.
    Chow(Tile),
    /// Complete pong.
    Pong(Tile),
    /// A pair: a pong seed, or the eye.
    Pair(Tile),
    /// A partial chow the knowledge base can still complete.
    Pchow(Tile, Tile),
}

/// A decomposition of one block into at most five parts plus a remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QDcmp {
    /// The parts, in canonical order.
    pub parts: Vec<Part>,
    remainder: [u8; KINDS],
}

impl QDcmp {
    /// Per-kind counts of the block tiles assigned to no part.
    pub fn remainder_counts(&self) -> &[u8; KINDS] {
        &self.remainder
    }
}

/// Tuning knobs for the block engine. The defaults enumerate everything.
#[derive(Clone, Copy, Debug)]
pub struct BlockOptions {
    /// Skip decompositions that park a partial chow while a tile completing
    /// it is still unassigned in the block. Faster, but the consumed third
    /// tile can carry remainder flags, so the bound may loosen in the
    /// above-four regime; leave off when exactness there matters.
    pub pchow_prune: bool,
    /// Drop attribute tuples dominated within each block's type set (same
    /// counts, weaker remainder flags). Sound, off by default so raw set
    /// sizes stay observable.
    pub dominance_prune: bool,
}

impl Default for BlockOptions {
    fn default() -> Self {
        BlockOptions { pchow_prune: false, dominance_prune: false }
    }
}

/// Enumerate every decomposition of a block that respects the knowledge
/// base: at most five parts, five only with a pair among them, and the
/// partial sets jointly completable — every partial chow secures a distinct
/// knowledge-base tile and at most one pair is left without one.
pub fn enumerate_qdcmps(block: &Block, kb: &KnowledgeBase, opts: &BlockOptions) -> Vec<QDcmp> {
    let mut out = Vec::new();
    enumerate_into(block, kb, opts, |parts, rem, _, _| {
        out.push(QDcmp { parts: parts.to_vec(), remainder: *rem });
    });
    out
}

/// Walk the block's decompositions, handing each one's sorted parts,
/// remainder, audited attribute tuple, and optional eye-committed variant to
/// `sink` without materialising a [`QDcmp`].
fn enumerate_into<F>(block: &Block, kb: &KnowledgeBase, opts: &BlockOptions, sink: F)
where
    F: FnMut(&[Part], &[u8; KINDS], TypeTuple, Option<TypeTuple>),
{
    let mut state = Enumerate {
        counts: block.counts,
        rem: [0; KINDS],
        kb: *kb.counts(),
        parts: Vec::new(),
        dead_pairs: 0,
        opts: *opts,
        sink,
    };
    state.rec(0, 0);
}

struct Enumerate<F> {
    counts: [u8; KINDS],
    rem: [u8; KINDS],
    kb: [u8; KINDS],
    parts: Vec<Part>,
    dead_pairs: u8,
    opts: BlockOptions,
    sink: F,
}

impl<F: FnMut(&[Part], &[u8; KINDS], TypeTuple, Option<TypeTuple>)> Enumerate<F> {
    fn emit(&mut self) {
        if self.parts.len() == 5 && !self.parts.iter().any(|p| matches!(p, Part::Pair(_))) {
            return;
        }
        let mut sorted = [Part::Chow(Tile::from_kind(0)); 5];
        let len = self.parts.len();
        sorted[..len].copy_from_slice(&self.parts);
        let parts = &mut sorted[..len];
        parts.sort_unstable();
        // The parts compete for one shared knowledge base: every partial chow
        // must secure its own completing tile, and at most one pair may be
        // left without a surviving copy (it can still serve as the eye). The
        // canonical choice order builds each decomposition exactly once, so
        // nothing here rescreens for duplicates.
        let Some(audit) = audit_parts(parts, &self.rem, &self.kb) else {
            return;
        };
        let Some((base, variant)) = finish_tuple(part_counts(parts), &audit) else {
            return;
        };
        (self.sink)(parts, &self.rem, base, variant);
    }

    fn pchow_completable(&self, a: u8, b: u8) -> bool {
        pchow_completers(a, b)
            .into_iter()
            .flatten()
            .any(|c| self.kb[c as usize] > 0)
    }

    /// Explore every split of the tiles at and after the lowest surviving
    /// kind. While that kind stays `anchor`, choices run in a fixed order —
    /// remainder copies first, then part shapes by ascending `floor` code —
    /// so each decomposition is built along exactly one path.
    fn rec(&mut self, anchor: usize, floor: u8) {
        // Kinds below the anchor are exhausted, so the scan starts there.
        let Some(off) = self.counts[anchor..].iter().position(|&c| c > 0) else {
            self.emit();
            return;
        };
        let k = anchor + off;
        let floor = if off == 0 { floor } else { 0 };
        let rank = k % 9;

        // Pass a tile to the remainder.
        if floor == 0 {
            self.counts[k] -= 1;
            self.rem[k] += 1;
            self.rec(k, 0);
            self.rem[k] -= 1;
            self.counts[k] += 1;
        }

        if self.parts.len() >= 5 {
            return;
        }
        let t = Tile::from_kind(k);
        // Complete chow.
        if floor <= 1 && rank <= 6 && self.counts[k + 1] >= 1 && self.counts[k + 2] >= 1 {
            self.counts[k] -= 1;
            self.counts[k + 1] -= 1;
            self.counts[k + 2] -= 1;
            self.parts.push(Part::Chow(t));
            self.rec(k, 1);
            self.parts.pop();
            self.counts[k] += 1;
            self.counts[k + 1] += 1;
            self.counts[k + 2] += 1;
        }
        // Complete pong.
        if floor <= 2 && self.counts[k] >= 3 {
            self.counts[k] -= 3;
            self.parts.push(Part::Pong(t));
            self.rec(k, 2);
            self.parts.pop();
            self.counts[k] += 3;
        }
        // Pair; at most one may be beyond completion.
        if floor <= 3 && self.counts[k] >= 2 {
            let dead = self.kb[k] == 0;
            if !dead || self.dead_pairs == 0 {
                self.counts[k] -= 2;
                self.parts.push(Part::Pair(t));
                self.dead_pairs += u8::from(dead);
                self.rec(k, 3);
                self.dead_pairs -= u8::from(dead);
                self.parts.pop();
                self.counts[k] += 2;
            }
        }
        // Partial chow over a one-rank gap.
        if floor <= 4
            && rank <= 7
            && self.counts[k + 1] >= 1
            && self.pchow_completable(k as u8, k as u8 + 1)
            && !(self.opts.pchow_prune && rank <= 6 && self.counts[k + 2] >= 1)
        {
            self.counts[k] -= 1;
            self.counts[k + 1] -= 1;
            self.parts.push(Part::Pchow(t, Tile::from_kind(k + 1)));
            self.rec(k, 4);
            self.parts.pop();
            self.counts[k] += 1;
            self.counts[k + 1] += 1;
        }
        // Partial chow over a two-rank gap.
        if rank <= 6
            && self.counts[k + 2] >= 1
            && self.kb[k + 1] > 0
            && !(self.opts.pchow_prune && self.counts[k + 1] >= 1)
        {
            self.counts[k] -= 1;
            self.counts[k + 2] -= 1;
            self.parts.push(Part::Pchow(t, Tile::from_kind(k + 2)));
            self.rec(k, 5);
            self.parts.pop();
            self.counts[k] += 1;
            self.counts[k + 2] += 1;
        }
    }
}

/// The seven attributes that summarise a block decomposition (and, after
/// joining, a whole hand): meld count, partial-set count, pair count, dead
/// pair count, and three remainder flags.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeTuple {
    /// Complete melds.
    pub m: u8,
    /// Partial sets: pairs plus partial chows.
    pub n: u8,
    /// Pairs (dead or not) among the partial sets.
    pub p: u8,
    /// Pairs beyond completion once the other partial sets have drawn their
    /// tiles; at most one.
    pub e: u8,
    /// Some remainder tile has a surviving copy in the knowledge base after
    /// the partial sets take theirs.
    pub re: bool,
    /// Some remainder tile can grow into a meld with knowledge-base tiles
    /// left over by the partial sets.
    pub rm: bool,
    /// `re` and `rm` hold but no eye *and* meld fit the remainder jointly.
    pub em: bool,
}

impl TypeTuple {
    /// Assemble a tuple from its attributes.
    pub fn new(m: u8, n: u8, p: u8, e: u8, re: bool, rm: bool, em: bool) -> TypeTuple {
        TypeTuple { m, n, p, e, re, rm, em }
    }
}

impl fmt::Display for TypeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{},{},{})",
            self.m,
            self.n,
            self.p,
            self.e,
            u8::from(self.re),
            u8::from(self.rm),
            u8::from(self.em)
        )
    }
}

/// What a decomposition's partial sets leave behind once they draw their
/// completing tiles from one shared knowledge-base pool.
#[derive(Clone, Copy)]
struct PartsAudit {
    /// Fewest pairs left without a surviving copy of their kind, over all
    /// ways of completing the partial chows.
    unserved: u8,
    /// Some way of serving every partial set leaves a twin for a remainder
    /// tile (an eye can still be grown).
    re: bool,
    /// Some way of serving every partial set — except a pair already beyond
    /// completion, which sits as the eye — leaves a remainder tile able to
    /// grow into a meld.
    rm: bool,
    /// Some way of serving every partial set leaves an eye *and* a meld
    /// jointly fundable from the remainder.
    em_joint: bool,
    /// Exempting one *live* pair from completion — committing it as the eye
    /// — leaves a remainder tile able to grow into a meld. Surfaced as a
    /// separate type variant with the exempted pair counted beyond
    /// completion, so the one-eye budget is enforced at the join.
    rm_exempt: bool,
}

/// Audit a decomposition's partial sets against one shared knowledge-base
/// pool: each partial chow must take a distinct completing tile, and the
/// pairs then compete for what is left, one surviving copy of their own kind
/// apiece. The remainder flags are computed against what survives. `None`
/// when the partial chows alone cannot all be completed together.
fn audit_parts(parts: &[Part], rem: &[u8; KINDS], kb: &[u8; KINDS]) -> Option<PartsAudit> {
    audit_parts_multi(parts, rem, kb, &[]).0
}

/// [`audit_parts`] plus, for each kind in `reserve`, the audit of the same
/// parts against the pool with two copies of that kind set aside. All the
/// audits ride on one completer-assignment walk.
fn audit_parts_multi(
    parts: &[Part],
    rem: &[u8; KINDS],
    kb: &[u8; KINDS],
    reserve: &[usize],
) -> (Option<PartsAudit>, Vec<Option<PartsAudit>>) {
    struct Ctx<'a> {
        rem: &'a [u8; KINDS],
        rem_kinds: &'a [usize],
        pairs: &'a [usize],
        reserve: &'a [usize],
    }

    impl Ctx<'_> {
        fn seed_survives(&self, residual: &[u8; KINDS]) -> bool {
            self.rem_kinds.iter().any(|&k| evolves_to_meld(k, residual))
        }

        /// Nothing a further completer assignment could still improve.
        fn saturated(&self, slot: &Option<PartsAudit>) -> bool {
            let Some(a) = slot else { return false };
            let flags_done = self.rem_kinds.is_empty() || (a.re && a.rm && a.em_joint);
            a.unserved == 0
                && flags_done
                && (a.rm_exempt || self.pairs.is_empty() || self.rem_kinds.is_empty())
        }

        /// Fold one completer assignment into `slot`, with two copies of
        /// `hold` (if any) kept out of the pool's reach throughout.
        fn leaf(&self, pool: &[u8; KINDS], hold: Option<usize>, slot: &mut Option<PartsAudit>) {
            let mut start = *pool;
            if let Some(c) = hold {
                if start[c] < 2 {
                    return;
                }
                start[c] -= 2;
            }
            // Serve the pairs and read the remainder flags off what is left.
            let mut residual = start;
            let mut unserved = 0u8;
            for &x in self.pairs {
                if residual[x] > 0 {
                    residual[x] -= 1;
                } else {
                    unserved += 1;
                }
            }
            let audit = slot.get_or_insert(PartsAudit {
                unserved,
                re: false,
                rm: false,
                em_joint: false,
                rm_exempt: false,
            });
            audit.unserved = audit.unserved.min(unserved);
            match unserved {
                0 => {
                    if !audit.re {
                        audit.re = self.rem_kinds.iter().any(|&k| residual[k] > 0);
                    }
                    if !audit.rm {
                        audit.rm = self.seed_survives(&residual);
                    }
                    if !audit.em_joint {
                        audit.em_joint = joint_eye_and_meld(self.rem, &residual);
                    }
                    // A live pair may commit to being the eye instead of
                    // completing; what it declines to consume can fund a meld.
                    if !audit.rm_exempt {
                        let mut tried = [false; KINDS];
                        for (i, &x) in self.pairs.iter().enumerate() {
                            if tried[x] {
                                continue;
                            }
                            tried[x] = true;
                            let mut rest = start;
                            for (j, &y) in self.pairs.iter().enumerate() {
                                if j != i {
                                    rest[y] -= 1;
                                }
                            }
                            if self.seed_survives(&rest) {
                                audit.rm_exempt = true;
                                break;
                            }
                        }
                    }
                }
                // One pair is beyond completion and sits as the eye; the
                // others all complete.
                1 => {
                    if !audit.rm {
                        audit.rm = self.seed_survives(&residual);
                    }
                }
                _ => {}
            }
        }
    }

    /// Returns true once no audit can change any further, cutting the walk.
    fn walk(
        pchows: &[(u8, u8)],
        ctx: &Ctx,
        pool: &mut [u8; KINDS],
        out: &mut (Option<PartsAudit>, Vec<Option<PartsAudit>>),
    ) -> bool {
        if let Some((&(a, b), rest)) = pchows.split_first() {
            for cand in pchow_completers(a, b).into_iter().flatten() {
                let c = cand as usize;
                if pool[c] > 0 {
                    pool[c] -= 1;
                    let stop = walk(rest, ctx, pool, out);
                    pool[c] += 1;
                    if stop {
                        return true;
                    }
                }
            }
            return false;
        }
        ctx.leaf(pool, None, &mut out.0);
        for (slot, &c) in out.1.iter_mut().zip(ctx.reserve) {
            ctx.leaf(pool, Some(c), slot);
        }
        ctx.saturated(&out.0) && out.1.iter().all(|slot| ctx.saturated(slot))
    }

    let mut pchows = [(0u8, 0u8); 5];
    let mut pairs = [0usize; 5];
    let (mut npchows, mut npairs) = (0, 0);
    for p in parts {
        match *p {
            Part::Pchow(a, b) => {
                pchows[npchows] = (a.kind() as u8, b.kind() as u8);
                npchows += 1;
            }
            Part::Pair(x) => {
                pairs[npairs] = x.kind();
                npairs += 1;
            }
            _ => {}
        }
    }
    let mut rem_kinds = [0usize; KINDS];
    let mut nrem = 0;
    for (k, &c) in rem.iter().enumerate() {
        if c > 0 {
            rem_kinds[nrem] = k;
            nrem += 1;
        }
    }
    let ctx = Ctx { rem, rem_kinds: &rem_kinds[..nrem], pairs: &pairs[..npairs], reserve };
    let mut pool = *kb;
    let mut out = (None, vec![None::<PartsAudit>; reserve.len()]);
    walk(&pchows[..npchows], &ctx, &mut pool, &mut out);
    out
}

/// Whether kind `k` can grow into a meld using knowledge-base tiles only:
/// two more copies for a pong, or both partners of some chow.
fn evolves_to_meld(k: usize, kb: &[u8; KINDS]) -> bool {
    if kb[k] >= 2 {
        return true;
    }
    chow_partners(k as u8)
        .into_iter()
        .flatten()
        .any(|(x, y)| kb[x as usize] > 0 && kb[y as usize] > 0)
}

/// Whether the remainder can fund an eye *and* a meld at once: two distinct
/// remainder tiles, with the knowledge-base copies they borrow counted
/// against one shared pool.
fn joint_eye_and_meld(rem: &[u8; KINDS], kb: &[u8; KINDS]) -> bool {
    for r1 in 0..KINDS {
        if rem[r1] == 0 || kb[r1] == 0 {
            continue;
        }
        let mut rem2 = *rem;
        let mut kb2 = *kb;
        rem2[r1] -= 1;
        kb2[r1] -= 1;
        for r2 in 0..KINDS {
            if rem2[r2] > 0 && evolves_to_meld(r2, &kb2) {
                return true;
            }
        }
    }
    false
}

/// The attribute tuples of one block decomposition: the straight reading,
/// plus — when a live pair committing to be the eye is what frees a meld
/// seed — a variant with that pair counted beyond completion, so the one-eye
/// budget still binds when tuples join.
fn tuples_of(qdcmp: &QDcmp, kb: &KnowledgeBase) -> (TypeTuple, Option<TypeTuple>) {
    try_tuples_of(qdcmp, kb.counts())
        .expect("decompositions always have jointly completable partial chows")
}

/// [`tuples_of`] against an arbitrary pool: `None` when the decomposition's
/// partial chows cannot all complete from it, or more than one pair starves.
fn try_tuples_of(qdcmp: &QDcmp, kc: &[u8; KINDS]) -> Option<(TypeTuple, Option<TypeTuple>)> {
    let audit = audit_parts(&qdcmp.parts, &qdcmp.remainder, kc)?;
    finish_tuple(part_counts(&qdcmp.parts), &audit)
}

/// The m/n/p census of a decomposition's parts, flags still blank.
fn part_counts(parts: &[Part]) -> TypeTuple {
    let mut t = TypeTuple::default();
    for part in parts {
        match part {
            Part::Chow(_) | Part::Pong(_) => t.m += 1,
            Part::Pchow(_, _) => t.n += 1,
            Part::Pair(_) => {
                t.n += 1;
                t.p += 1;
            }
        }
    }
    t
}

/// Stamp an audit's findings onto a part census; `None` when more than one
/// pair starves.
fn finish_tuple(mut t: TypeTuple, audit: &PartsAudit) -> Option<(TypeTuple, Option<TypeTuple>)> {
    if audit.unserved > 1 {
        return None;
    }
    t.e = audit.unserved;
    t.re = audit.re;
    t.rm = audit.rm;
    t.em = t.e == 0 && t.re && t.rm && !audit.em_joint;
    let variant = (audit.rm_exempt && t.e == 0 && !t.rm)
        .then_some(TypeTuple { e: 1, re: false, rm: true, em: false, ..t });
    Some((t, variant))
}

/// Compute the attribute tuple of one block decomposition.
///
/// Dead pairs and remainder flags are the joint readings: the partial sets
/// first draw their completing tiles from the knowledge base, and only what
/// survives can pair a remainder tile or grow one into a meld. A tile the
/// knowledge base held before the partial chows took it counts for nothing.
pub fn type_of(qdcmp: &QDcmp, kb: &KnowledgeBase) -> TypeTuple {
    tuples_of(qdcmp, kb).0
}

/// All distinct attribute tuples of a block's decompositions, including the
/// eye-committed variants of decompositions whose live pairs are what free a
/// meld seed.
pub fn type_set(block: &Block, kb: &KnowledgeBase, opts: &BlockOptions) -> BTreeSet<TypeTuple> {
    let mut set = BTreeSet::new();
    enumerate_into(block, kb, opts, |_, _, base, variant| {
        set.insert(base);
        set.extend(variant);
    });
    if opts.dominance_prune {
        prune_dominated(&mut set);
    }
    set
}

/// `a` dominates `b`: same counts, remainder flags at least as useful.
fn dominates(a: &TypeTuple, b: &TypeTuple) -> bool {
    a.m == b.m
        && a.n == b.n
        && a.p == b.p
        && a.e == b.e
        && a.re >= b.re
        && a.rm >= b.rm
        && a.em <= b.em
}

fn prune_dominated(set: &mut BTreeSet<TypeTuple>) {
    let all: Vec<TypeTuple> = set.iter().copied().collect();
    set.retain(|t| !all.iter().any(|o| o != t && dominates(o, t)));
}

/// Join the type sets of two tile groups: attribute tuples add, remainder
/// flags merge, and combinations that could never sit inside one winning
/// hand are dropped.
pub fn join_types(a: &BTreeSet<TypeTuple>, b: &BTreeSet<TypeTuple>) -> BTreeSet<TypeTuple> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.extend(join_pair(x, y));
        }
    }
    out
}

/// Combine two attribute tuples, or `None` when the result could never sit
/// inside one winning hand.
fn join_pair(x: &TypeTuple, y: &TypeTuple) -> Option<TypeTuple> {
    let m = x.m + y.m;
    let n = x.n + y.n;
    let p = x.p + y.p;
    let e = x.e + y.e;
    if e > 1 || m + n > 5 || (m + n == 5 && p == 0) {
        return None;
    }
    let em = (x.em && !y.re && !y.rm) || (y.em && !x.re && !x.rm);
    Some(TypeTuple { m, n, p, e, re: x.re || y.re, rm: x.rm || y.rm, em })
}

/// Pack a tuple into one integer so set folds sort and deduplicate on a
/// scalar key. Counts stay under 8, so three bits each suffice.
fn pack(t: TypeTuple) -> u16 {
    u16::from(t.m)
        | u16::from(t.n) << 3
        | u16::from(t.p) << 6
        | u16::from(t.e) << 9
        | u16::from(t.re) << 10
        | u16::from(t.rm) << 11
        | u16::from(t.em) << 12
}

fn unpack(v: u16) -> TypeTuple {
    TypeTuple {
        m: (v & 7) as u8,
        n: (v >> 3 & 7) as u8,
        p: (v >> 6 & 7) as u8,
        e: (v >> 9 & 1) as u8,
        re: v >> 10 & 1 != 0,
        rm: v >> 11 & 1 != 0,
        em: v >> 12 & 1 != 0,
    }
}

/// Price an attribute tuple: the minimum number of knowledge-base borrows
/// that turn a hand of this type into four melds and a pair, or
/// [`INCOMPLETABLE`]. `ke` and `km` say whether the knowledge base itself
/// still holds a full pair or a full meld.
///
/// Exact when the result is at most four; a lower bound above that. Expects
/// `m ≤ 4`, `m + n ≤ 5`, and a pair whenever `m + n = 5`.
pub fn decide(t: TypeTuple, ke: bool, km: bool) -> u8 {
    let (m, n, p, e) = (t.m as i32, t.n as i32, t.p as i32, t.e as i32);
    let (re, rm, em) = (i32::from(t.re), i32::from(t.rm), i32::from(t.em));
    let (ke, km) = (i32::from(ke), i32::from(km));
    debug_assert!(m <= 4 && m + n <= 5 && p <= n && e <= p.min(1));

    if p == 0 && re == 0 && ke == 0 {
        return INCOMPLETABLE;
    }
    if m + n <= 4 && re == 0 && ke == 0 && rm == 0 && km == 0 {
        return INCOMPLETABLE;
    }
    if m + n - e <= 3 && rm == 0 && km == 0 {
        return INCOMPLETABLE;
    }
    if m + n <= 3 && p == 0 && ke == 0 && km == 0 && em == 1 {
        return INCOMPLETABLE;
    }
    if m + n >= 4 {
        return if m + n > 4 {
            (4 - m) as u8
        } else if (e == 0 && re == 1) || (p > 0 && rm == 1) {
            (4 - m + 1) as u8
        } else {
            (4 - m + 2) as u8
        };
    }
    // Here m + n ≤ 3, so m + n − e ≤ 3 as well.
    let mcost = 2 * rm + 3 * (1 - rm);
    let ecost = re + 2 * (1 - re);
    if e == 1 {
        ((n - 1) + mcost * (4 - m - n + 1)) as u8
    } else if p == 0 {
        (n + mcost * (4 - m - n) + ecost + em) as u8
    } else {
        let f1 = n + mcost * (4 - m - n) + ecost;
        let f2 = (n - 1) + mcost * (4 - m - n + 1);
        f1.min(f2) as u8
    }
}

/// Knowledge-aware deficiency via the block engine, with default options.
///
/// A lower bound on the exhaustive search's answer, exact whenever that
/// answer is at most four. Accepts full-size and ready-size hands.
pub fn block_dfncy(hand: &Hand, kb: &KnowledgeBase) -> u8 {
    block_dfncy_opts(hand, kb, &BlockOptions::default())
}

/// [`block_dfncy`] with explicit options.
pub fn block_dfncy_opts(hand: &Hand, kb: &KnowledgeBase, opts: &BlockOptions) -> u8 {
    let groups = grouped_with_claims(hand, kb);
    let kc = kb.counts();
    let base_sets: Vec<Vec<u16>> = groups
        .iter()
        .map(|(g, _)| {
            let mut set = Vec::new();
            enumerate_into(g, kb, opts, |_, _, base, variant| {
                set.push(pack(base));
                set.extend(variant.map(pack));
            });
            finish_packed(&mut set, opts);
            set
        })
        .collect();
    let km = kb.has_meld();
    let fixed = hand.melds_fixed();

    let join_all = |sets: &[&Vec<u16>]| -> Vec<u16> {
        let mut folded = vec![pack(TypeTuple::default())];
        let mut next = Vec::new();
        let mut ys: Vec<TypeTuple> = Vec::new();
        for ts in sets {
            ys.clear();
            ys.extend(ts.iter().map(|&v| unpack(v)));
            next.clear();
            for &x in &folded {
                let x = unpack(x);
                for y in &ys {
                    next.extend(join_pair(&x, y).map(pack));
                }
            }
            finish_packed(&mut next, opts);
            std::mem::swap(&mut folded, &mut next);
        }
        folded
    };
    let decide_min = |folded: &[u16], ke: bool| -> u8 {
        let mut best = INCOMPLETABLE;
        for &v in folded {
            // Consolidated melds join the count only now; combinations that
            // no longer fit a five-set win are skipped rather than mispriced.
            let mut t = unpack(v);
            t.m += fixed;
            if t.m + t.n > 5 || (t.m + t.n == 5 && t.p == 0) {
                continue;
            }
            best = best.min(decide(t, ke, km));
            if best == 0 {
                break;
            }
        }
        best
    };

    // A knowledge-base pair can serve as the eye only if the plan leaves both
    // copies in place. Kinds outside every group's reach are always safe, so
    // they justify the eye outright. A pair inside one group's reach needs a
    // witness: reprice with that group's tuples rebuilt against the pool
    // minus the two reserved copies — no other group can touch them. The
    // witness hunt runs only when the eye assumption changes the answer.
    let claimed = groups.iter().fold(0u32, |acc, &(_, m)| acc | m);
    let ke_free = (0..KINDS).any(|k| kc[k] >= 2 && claimed & (1 << k) == 0);
    let refs: Vec<&Vec<u16>> = base_sets.iter().collect();
    let folded = join_all(&refs);
    let mut best = if ke_free {
        decide_min(&folded, true)
    } else if !kb.has_pair() {
        decide_min(&folded, false)
    } else {
        let optimistic = decide_min(&folded, true);
        let pessimistic = decide_min(&folded, false);
        if optimistic == pessimistic {
            pessimistic
        } else if optimistic > 4 {
            // Beyond four the value is a plain lower bound anyway, and the
            // optimistic price already is one, so the hunt would buy nothing.
            optimistic
        } else {
            let mut best = pessimistic;
            for (i, &(_, mask)) in groups.iter().enumerate() {
                let candidates: Vec<usize> =
                    (0..KINDS).filter(|&c| kc[c] >= 2 && mask & (1 << c) != 0).collect();
                if candidates.is_empty() {
                    continue;
                }
                // A pool shrunk by two copies admits a subset of the full
                // pool's decompositions, so one enumeration serves them all.
                let mut reserved = Vec::new();
                for q in enumerate_qdcmps(&groups[i].0, kb, opts) {
                    let counts = part_counts(&q.parts);
                    let audits =
                        audit_parts_multi(&q.parts, &q.remainder, kc, &candidates).1;
                    for audit in audits.into_iter().flatten() {
                        if let Some((base, variant)) = finish_tuple(counts, &audit) {
                            reserved.push(pack(base));
                            reserved.extend(variant.map(pack));
                        }
                    }
                }
                if reserved.is_empty() {
                    continue;
                }
                finish_packed(&mut reserved, opts);
                let mut sets = refs.clone();
                sets[i] = &reserved;
                best = best.min(decide_min(&join_all(&sets), true));
                if best <= optimistic {
                    break;
                }
            }
            best
        }
    };
    // Every replacement consumes one knowledge-base tile, so a price beyond
    // the whole pool is unreachable no matter which plan it came from.
    if u32::from(best) > kb.total() {
        best = INCOMPLETABLE;
    }
    best
}

/// Sort-and-deduplicate a packed tuple collection, applying the optional
/// dominance prune.
fn finish_packed(set: &mut Vec<u16>, opts: &BlockOptions) {
    set.sort_unstable();
    set.dedup();
    if opts.dominance_prune {
        let mut unpacked: BTreeSet<TypeTuple> = set.iter().map(|&v| unpack(v)).collect();
        prune_dominated(&mut unpacked);
        set.clear();
        set.extend(unpacked.into_iter().map(pack));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadtree::quadtree_dfncy;
    use crate::tiles::{kb_from_hand, parse_hand, parse_kb, Colour};

    fn tile(c: Colour, r: u8) -> Tile {
        Tile::new(c, r).unwrap()
    }

    fn tuple(m: u8, n: u8, p: u8, e: u8, re: u8, rm: u8, em: u8) -> TypeTuple {
        TypeTuple::new(m, n, p, e, re != 0, rm != 0, em != 0)
    }

    fn running_example() -> (Hand, KnowledgeBase) {
        (
            parse_hand("C1C4C6C7C8C9D1D2D3D6D6D7D8").unwrap(),
            parse_kb("001100121|010000030|032242321").unwrap(),
        )
    }

    #[test]
    fn blocks_split_where_no_chow_can_bridge() {
        let (hand, kb) = running_example();
        let blocks: Vec<String> = kb_blocks(&hand, &kb).iter().map(|b| b.to_string()).collect();
        assert_eq!(blocks, ["(C1)", "(C4)", "(C6C7C8C9)", "(D1D2D3)", "(D6D6D7D8)"]);
    }

    #[test]
    fn hand_tiles_can_bridge_blocks_without_kb_help() {
        // B1 and B3 connect through the hand's own B2 even with an empty KB.
        let hand = parse_hand("B1B2B3B7B8B9C1C2C3D1D2D3D5D5").unwrap();
        let blocks: Vec<String> =
            kb_blocks(&hand, &KnowledgeBase::empty()).iter().map(|b| b.to_string()).collect();
        assert_eq!(blocks, ["(B1B2B3)", "(B7B8B9)", "(C1C2C3)", "(D1D2D3)", "(D5D5)"]);
    }

    #[test]
    fn canonical_walk_emits_each_decomposition_once() {
        // A dense block where every part shape is live: duplicates would
        // surface here if the fixed choice order ever admitted two paths to
        // one decomposition.
        let hand = parse_hand("B1B1B2B2B3B3B4B4B5B5B6B6B7B7").unwrap();
        let kb = parse_kb("444444444|000000000|000000000").unwrap();
        let blocks = kb_blocks(&hand, &kb);
        assert_eq!(blocks.len(), 1);
        let qdcmps = enumerate_qdcmps(&blocks[0], &kb, &BlockOptions::default());
        let mut keys: Vec<(Vec<Part>, [u8; KINDS])> =
            qdcmps.iter().map(|q| (q.parts.clone(), q.remainder)).collect();
        let total = keys.len();
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), total, "a decomposition was emitted twice");
    }

    #[test]
    fn enumeration_includes_chows_and_respects_dead_pchows() {
        let (hand, kb) = running_example();
        let blocks = kb_blocks(&hand, &kb);
        let opts = BlockOptions::default();

        // (C6C7C8C9): both embedded chows appear, and of the partial chows
        // only those a surviving C8 can complete are kept — the KB has no
        // C5, C6, C7, or C9, so (C6C8), (C7C8), and (C8C9) are dead.
        let qdcmps = enumerate_qdcmps(&blocks[2], &kb, &opts);
        let has = |parts: &[Part]| qdcmps.iter().any(|q| q.parts == parts);
        let c = |r| tile(Colour::Character, r);
        assert!(has(&[Part::Chow(c(6))]), "missing chow C6C7C8");
        assert!(has(&[Part::Chow(c(7))]), "missing chow C7C8C9");
        let pchows: BTreeSet<(Tile, Tile)> = qdcmps
            .iter()
            .flat_map(|q| q.parts.iter())
            .filter_map(|p| match p {
                Part::Pchow(a, b) => Some((*a, *b)),
                _ => None,
            })
            .collect();
        assert_eq!(
            pchows,
            BTreeSet::from([(c(6), c(7)), (c(7), c(9))]),
            "exactly the completable partial chows survive"
        );

        // (C1): nothing to build.
        let qdcmps = enumerate_qdcmps(&blocks[0], &kb, &opts);
        assert_eq!(qdcmps.len(), 1, "a lone tile admits only the empty decomposition");
        assert!(qdcmps[0].parts.is_empty());

        // (D6D6D7D8): the documented decompositions all appear.
        let qdcmps = enumerate_qdcmps(&blocks[4], &kb, &opts);
        let has = |parts: &[Part]| qdcmps.iter().any(|q| q.parts == parts);
        let d = |r| tile(Colour::Dot, r);
        assert!(has(&[Part::Chow(d(6))]));
        assert!(has(&[Part::Pong(d(6)), Part::Pair(d(6))]) == false, "only two D6 copies exist");
        assert!(has(&[Part::Pair(d(6)), Part::Pchow(d(7), d(8))]));
        assert!(has(&[Part::Pair(d(6))]));
        assert!(has(&[Part::Pchow(d(7), d(8))]));
        assert!(has(&[]));
    }

    #[test]
    fn chow_type_of_final_block_keeps_the_lone_tile_useful() {
        let (hand, kb) = running_example();
        let blocks = kb_blocks(&hand, &kb);
        let qdcmps = enumerate_qdcmps(&blocks[4], &kb, &BlockOptions::default());
        let q = qdcmps
            .iter()
            .find(|q| q.parts == [Part::Chow(tile(Colour::Dot, 6))])
            .expect("chow decomposition exists");
        // Remainder D6: a KB copy survives (re), it can grow into a pong
        // (rm), but the single tile cannot fund an eye and a meld at once.
        assert_eq!(type_of(q, &kb), tuple(1, 0, 0, 0, 1, 1, 1));
    }

    #[test]
    fn join_merges_flags_and_drops_impossible_combinations() {
        let a = BTreeSet::from([tuple(1, 0, 0, 0, 0, 0, 0)]);
        let b = BTreeSet::from([tuple(1, 0, 0, 0, 1, 1, 1)]);
        assert_eq!(join_types(&a, &b), BTreeSet::from([tuple(2, 0, 0, 0, 1, 1, 1)]));

        let a = BTreeSet::from([tuple(1, 0, 0, 0, 1, 1, 1)]);
        let b = BTreeSet::from([tuple(1, 1, 1, 0, 1, 0, 0)]);
        assert_eq!(join_types(&a, &b), BTreeSet::from([tuple(2, 1, 1, 0, 1, 1, 0)]));

        let a = BTreeSet::from([tuple(3, 3, 1, 0, 0, 0, 0)]);
        let b = BTreeSet::from([tuple(2, 0, 0, 0, 0, 0, 0)]);
        assert!(join_types(&a, &b).is_empty(), "eight sets never fit a winning hand");
    }

    #[test]
    fn join_is_fold_order_invariant_on_the_running_example() {
        let (hand, kb) = running_example();
        let opts = BlockOptions::default();
        let sets: Vec<BTreeSet<TypeTuple>> =
            kb_blocks(&hand, &kb).iter().map(|b| type_set(b, &kb, &opts)).collect();
        let forward = sets.iter().fold(BTreeSet::from([TypeTuple::default()]), |acc, s| {
            join_types(&acc, s)
        });
        let backward = sets.iter().rev().fold(BTreeSet::from([TypeTuple::default()]), |acc, s| {
            join_types(&acc, s)
        });
        assert_eq!(forward, backward);
        assert!(forward.contains(&tuple(3, 0, 0, 0, 1, 1, 1)), "documented global type missing");
    }

    #[test]
    fn decide_prices_documented_tuples() {
        assert_eq!(decide(tuple(3, 0, 0, 0, 1, 1, 1), true, true), 4);
        for flags in [(false, false), (true, false), (false, true), (true, true)] {
            assert_eq!(decide(tuple(4, 1, 1, 0, 0, 0, 0), flags.0, flags.1), 0);
        }
        assert_eq!(decide(TypeTuple::default(), false, false), INCOMPLETABLE);
        assert_eq!(decide(tuple(2, 2, 1, 0, 0, 1, 0), false, false), 3);
    }

    #[test]
    fn running_example_prices_at_four() {
        let (hand, kb) = running_example();
        assert_eq!(block_dfncy(&hand, &kb), 4);
    }

    #[test]
    fn fixtures_agree_with_the_exhaustive_search() {
        let cases = [
            ("B1B2B2B3B3B4B7B7B7C1C1D4D5D6", None, 0),
            ("B1B5B6B8B8B8B9D1D2D4D5D5D6D7", Some("343423023|434434443|334220344"), 3),
            ("B3B5B6B9C2C2C3C6C9D1D1D2D5D8", None, 6),
        ];
        for (hand_str, kb_str, want) in cases {
            let hand = parse_hand(hand_str).unwrap();
            let kb = match kb_str {
                Some(s) => parse_kb(s).unwrap(),
                None => kb_from_hand(&hand),
            };
            assert_eq!(block_dfncy(&hand, &kb), want, "block price of {hand_str}");
            assert_eq!(quadtree_dfncy(&hand, &kb), want, "search price of {hand_str}");
        }
    }

    #[test]
    fn consolidated_melds_count_toward_the_five_set_cap() {
        // Four completable partial chows and two consolidated melds: only
        // decompositions leaving headroom for an eye may be priced.
        let hand = parse_hand("B1B2B4B5C1C2C4C5;k=2").unwrap();
        let kb = kb_from_hand(&hand);
        assert_eq!(block_dfncy(&hand, &kb), 3);
        assert_eq!(quadtree_dfncy(&hand, &kb), 3);
    }

    #[test]
    fn ready_size_hands_price_directly() {
        let (hand, kb) = running_example();
        assert_eq!(hand.len(), 13);
        assert_eq!(block_dfncy(&hand, &kb), quadtree_dfncy(&hand, &kb));
        let pair_wait = parse_hand("D9D9;k=4").unwrap();
        assert_eq!(block_dfncy(&pair_wait, &kb_from_hand(&pair_wait)), 0);
        let edge_wait = parse_hand("D8D9;k=4").unwrap();
        assert_eq!(block_dfncy(&edge_wait, &kb_from_hand(&edge_wait)), 1);
    }

    #[test]
    fn dominance_prune_keeps_the_price() {
        let cases = [
            ("C1C4C6C7C8C9D1D2D3D6D6D7D8", Some("001100121|010000030|032242321")),
            ("B1B5B6B8B8B8B9D1D2D4D5D5D6D7", Some("343423023|434434443|334220344")),
            ("B3B5B6B9C2C2C3C6C9D1D1D2D5D8", None),
        ];
        let pruned = BlockOptions { dominance_prune: true, ..BlockOptions::default() };
        for (hand_str, kb_str) in cases {
            let hand = parse_hand(hand_str).unwrap();
            let kb = match kb_str {
                Some(s) => parse_kb(s).unwrap(),
                None => kb_from_hand(&hand),
            };
            assert_eq!(
                block_dfncy_opts(&hand, &kb, &pruned),
                block_dfncy(&hand, &kb),
                "dominance prune changed the price of {hand_str}"
            );
        }
    }
}
