//! Deterministic generators, differential fuzzing, benchmarks, and the
//! pure-hand census.
//!
//! Everything here is replayable: hands and knowledge bases derive from a
//! seed through fixed per-index stream offsets, so any disagreement found by
//! the fuzzer can be reproduced from its printed inputs alone.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::block::{audit_groups, block_dfncy, enumerate_qdcmps, type_set, BlockOptions};
use crate::oracle::oracle_dfncy;
use crate::quadtree::quadtree_dfncy;
use crate::tiles::{kb_from_hand, Colour, Hand, KnowledgeBase, Tile, COPIES, KINDS};
use crate::INCOMPLETABLE;

/// A seeded generator on its own stream, so indexed draws never overlap.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Deal a full-size hand from a shuffled deck of the first `colours`
/// colours, redrawing until the hand touches every chosen colour.
pub fn gen_hand(seed: u64, index: u64, colours: u8) -> Hand {
    assert!((1..=3).contains(&colours), "colour count must be 1, 2, or 3");
    let mut rng = rng_for(seed, 2 * index);
    let mut deck: Vec<Tile> = Vec::with_capacity(36 * colours as usize);
    for &colour in &Colour::ALL[..colours as usize] {
        for rank in 1..=9 {
            for _ in 0..COPIES {
                deck.push(Tile::new(colour, rank).expect("ranks 1..=9 are valid"));
            }
        }
    }
    loop {
        deck.shuffle(&mut rng);
        let draw = &deck[..14];
        let mut seen = [false; 3];
        for t in draw {
            seen[t.colour().index()] = true;
        }
        if seen.iter().filter(|&&s| s).count() == colours as usize {
            return Hand::new(draw.to_vec(), 0).expect("fourteen tiles from one deck");
        }
    }
}

/// Draw a knowledge base of `size` tiles from the complement pool of the
/// hand, restricted to the hand's colours. Sizes beyond the pool are capped.
pub fn gen_kb(
    seed: u64,
    hand_index: u64,
    kb_index: u64,
    kbs_per_hand: u64,
    hand: &Hand,
    size: usize,
) -> KnowledgeBase {
    let mut rng = rng_for(seed, 2 * (hand_index * kbs_per_hand + kb_index) + 1);
    let hc = hand.counts();
    let mut colours = [false; 3];
    for t in hand.tiles() {
        colours[t.colour().index()] = true;
    }
    let mut pool: Vec<usize> = Vec::new();
    for k in 0..KINDS {
        if colours[k / 9] {
            for _ in 0..(COPIES - hc[k]) {
                pool.push(k);
            }
        }
    }
    pool.shuffle(&mut rng);
    let mut counts = [0u8; KINDS];
    for &k in pool.iter().take(size.min(pool.len())) {
        counts[k] += 1;
    }
    KnowledgeBase::new(counts).expect("complement draws never exceed four copies")
}

/// Inclusive knowledge-base size range per colour count.
pub fn max_kb_size(colours: u8) -> usize {
    36 * colours as usize - 14
}

/// Bucket edges for knowledge-base sizes: bucket `i` spans
/// `edges[i]..edges[i+1]`, with the last bucket closed on the right.
pub fn kb_bucket_edges(colours: u8) -> &'static [usize] {
    match colours {
        1 => &[0, 5, 10, 15, 22],
        2 => &[0, 10, 20, 30, 40, 50, 58],
        _ => &[0, 10, 20, 30, 40, 50, 60, 70, 80, 94],
    }
}

fn bucket_label(edges: &[usize], i: usize) -> String {
    let hi = if i + 2 == edges.len() { edges[i + 1] } else { edges[i + 1] - 1 };
    format!("{}-{}", edges[i], hi)
}

/// Benchmark shape: `hands × kbs_per_hand` pairs cycle over the size
/// buckets, with sizes drawn near each bucket's midpoint.
#[derive(Clone, Copy, Debug)]
pub struct BenchConfig {
    /// How many colours hands span (1, 2, or 3).
    pub colours: u8,
    /// Number of generated hands.
    pub hands: u64,
    /// Knowledge bases drawn per hand.
    pub kbs_per_hand: u64,
    /// Seed for all generation.
    pub seed: u64,
}

/// One benchmark row: timings for a knowledge-base size bucket.
#[derive(Clone, Debug)]
pub struct BenchRow {
    /// Bucket label, `lo-hi` inclusive, or `total`.
    pub label: String,
    /// Pairs measured in this bucket.
    pub pairs: u64,
    /// Worst exhaustive-search time, milliseconds.
    pub quad_max_ms: f64,
    /// Mean exhaustive-search time, milliseconds.
    pub quad_mean_ms: f64,
    /// Worst block-engine time, milliseconds.
    pub block_max_ms: f64,
    /// Mean block-engine time, milliseconds.
    pub block_mean_ms: f64,
    /// Mean exhaustive time over mean block time.
    pub ratio: f64,
    /// Agreement rate on pairs whose exhaustive answer is at most four.
    pub agree_rate_le4: f64,
}

#[derive(Clone, Copy, Default)]
struct BucketAcc {
    pairs: u64,
    quad_sum: f64,
    quad_max: f64,
    block_sum: f64,
    block_max: f64,
    le4: u64,
    agree: u64,
}

impl BucketAcc {
    fn add(&mut self, quad_ms: f64, block_ms: f64, quad: u8, block: u8) {
        self.pairs += 1;
        self.quad_sum += quad_ms;
        self.quad_max = self.quad_max.max(quad_ms);
        self.block_sum += block_ms;
        self.block_max = self.block_max.max(block_ms);
        if quad <= 4 {
            self.le4 += 1;
            if block == quad {
                self.agree += 1;
            }
        }
    }

    fn row(&self, label: String) -> BenchRow {
        let quad_mean = self.quad_sum / self.pairs.max(1) as f64;
        let block_mean = self.block_sum / self.pairs.max(1) as f64;
        BenchRow {
            label,
            pairs: self.pairs,
            quad_max_ms: self.quad_max,
            quad_mean_ms: quad_mean,
            block_max_ms: self.block_max,
            block_mean_ms: block_mean,
            ratio: if block_mean > 0.0 { quad_mean / block_mean } else { 0.0 },
            agree_rate_le4: if self.le4 > 0 { self.agree as f64 / self.le4 as f64 } else { 1.0 },
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (f64, T) {
    let start = Instant::now();
    let value = f();
    (start.elapsed().as_secs_f64() * 1e3, value)
}

/// Time the exhaustive search against the block engine, serially, bucketed
/// by knowledge-base size. The returned rows end with a `total` row.
pub fn run_bench(config: &BenchConfig) -> Vec<BenchRow> {
    let edges = kb_bucket_edges(config.colours);
    let buckets = edges.len() - 1;
    let mut accs = vec![BucketAcc::default(); buckets];
    let mut total = BucketAcc::default();
    for i in 0..config.hands {
        let hand = gen_hand(config.seed, i, config.colours);
        for j in 0..config.kbs_per_hand {
            let pair = i * config.kbs_per_hand + j;
            let b = (pair % buckets as u64) as usize;
            let lo = edges[b];
            let hi = if b + 2 == edges.len() { edges[b + 1] } else { edges[b + 1] - 1 };
            let size = sample_bucket_size(config.seed, pair, lo, hi);
            let kb = gen_kb(config.seed, i, j, config.kbs_per_hand, &hand, size);
            let (quad_ms, quad) = timed(|| quadtree_dfncy(&hand, &kb));
            let (block_ms, block) = timed(|| block_dfncy(&hand, &kb));
            accs[b].add(quad_ms, block_ms, quad, block);
            total.add(quad_ms, block_ms, quad, block);
        }
    }
    let mut rows: Vec<BenchRow> =
        accs.iter().enumerate().map(|(i, a)| a.row(bucket_label(edges, i))).collect();
    rows.push(total.row("total".to_string()));
    rows
}

/// Draw a size near the middle of `lo..=hi` (normal, sd a quarter of the
/// range), clamped to the bucket.
fn sample_bucket_size(seed: u64, pair: u64, lo: usize, hi: usize) -> usize {
    let mut rng = rng_for(seed, (1 << 40) | pair);
    let mid = (lo + hi) as f64 / 2.0;
    let sd = ((hi - lo) as f64 / 4.0).max(0.5);
    let normal = Normal::new(mid, sd).expect("finite mean and positive deviation");
    (normal.sample(&mut rng).round() as i64).clamp(lo as i64, hi as i64) as usize
}

/// Render benchmark rows as CSV. Every run reproduces the same buckets,
/// pair counts, and agreement rates; the timing columns vary with the host.
pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out =
        String::from("kb_bucket,pairs,quad_max_ms,quad_mean_ms,block_max_ms,block_mean_ms,ratio,agree_rate_le4\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{:.4},{:.4},{:.4},{:.4},{:.2},{:.4}",
            r.label,
            r.pairs,
            r.quad_max_ms,
            r.quad_mean_ms,
            r.block_max_ms,
            r.block_mean_ms,
            r.ratio,
            r.agree_rate_le4
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// One fuzzed pair with every engine's verdict, replayable from the strings.
#[derive(Clone, Debug)]
pub struct FuzzRecord {
    /// Hand, in parseable notation.
    pub hand: String,
    /// Knowledge base, in parseable notation.
    pub kb: String,
    /// Colours the hand spans.
    pub colours: u8,
    /// Tiles in the knowledge base.
    pub kb_size: usize,
    /// Exhaustive search's answer.
    pub quadtree: u8,
    /// Block engine's answer.
    pub block: u8,
    /// Replacement-search answer, when an oracle cap was set.
    pub oracle: Option<u8>,
}

/// Outcome of a differential fuzzing run.
#[derive(Clone, Debug)]
pub struct FuzzReport {
    /// The oracle cap the run used, if any.
    pub oracle_cap: Option<u8>,
    /// Every pair examined, in generation order.
    pub records: Vec<FuzzRecord>,
}

impl FuzzReport {
    /// Records that violate an engine contract: the block engine must match
    /// the exhaustive search whenever the latter is at most four, must never
    /// exceed it, and the oracle must match it whenever the cap allows an
    /// exact answer.
    pub fn errors(&self) -> Vec<&FuzzRecord> {
        self.records.iter().filter(|r| self.is_error(r)).collect()
    }

    fn is_error(&self, r: &FuzzRecord) -> bool {
        if r.quadtree <= 4 && r.block != r.quadtree {
            return true;
        }
        if r.block > r.quadtree {
            return true;
        }
        if let (Some(cap), Some(oracle)) = (self.oracle_cap, r.oracle) {
            if oracle != INCOMPLETABLE && oracle != r.quadtree {
                return true;
            }
            if oracle == INCOMPLETABLE && r.quadtree <= cap {
                return true;
            }
        }
        false
    }
}

/// Run the engines against each other on seeded random pairs.
///
/// `colours` fixes the palette, or cycles 1, 2, 3 when `None`. Knowledge-base
/// sizes are uniform over the full range. With `oracle_cap` set, the
/// replacement search joins the comparison up to that depth.
pub fn fuzz_diff(pairs: u64, oracle_cap: Option<u8>, seed: u64, colours: Option<u8>) -> FuzzReport {
    let records: Vec<FuzzRecord> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let c = colours.unwrap_or((i % 3) as u8 + 1);
            let hand = gen_hand(seed, i, c);
            let size = rng_for(seed, (1 << 41) | i).random_range(0..=max_kb_size(c));
            let kb = gen_kb(seed, i, 0, 1, &hand, size);
            let quadtree = quadtree_dfncy(&hand, &kb);
            let block = block_dfncy(&hand, &kb);
            let oracle = oracle_cap
                .map(|cap| oracle_dfncy(&hand, &kb, cap).expect("generated hands are full size"));
            FuzzRecord {
                hand: hand.to_string(),
                kb: kb.to_string(),
                colours: c,
                kb_size: kb.total() as usize,
                quadtree,
                block,
                oracle,
            }
        })
        .collect();
    FuzzReport { oracle_cap, records }
}

/// Deficiency histogram over every single-colour full-size hand (118800 of
/// them), priced against the full-complement knowledge base.
pub fn pure_census() -> BTreeMap<u8, u64> {
    let mut shapes: Vec<[u8; 9]> = Vec::new();
    fn rec(pos: usize, left: u8, cur: &mut [u8; 9], out: &mut Vec<[u8; 9]>) {
        if left > ((9 - pos) as u8) * COPIES {
            return;
        }
        if pos == 9 {
            out.push(*cur);
            return;
        }
        for c in 0..=left.min(COPIES) {
            cur[pos] = c;
            rec(pos + 1, left - c, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, 14, &mut [0u8; 9], &mut shapes);
    shapes
        .par_iter()
        .map(|shape| {
            let mut counts = [0u8; KINDS];
            counts[..9].copy_from_slice(shape);
            let hand = Hand::from_counts(&counts, 0).expect("census shapes are valid hands");
            block_dfncy(&hand, &kb_from_hand(&hand))
        })
        .fold(BTreeMap::new, |mut acc: BTreeMap<u8, u64>, d| {
            *acc.entry(d).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (d, n) in b {
                *a.entry(d).or_insert(0) += n;
            }
            a
        })
}

/// Average decomposition and type counts over seeded single-colour hands
/// against the full-complement knowledge base.
#[derive(Clone, Copy, Debug)]
pub struct CountStats {
    /// Hands sampled.
    pub hands: u64,
    /// Mean block decompositions per hand.
    pub mean_qdcmps: f64,
    /// Mean distinct attribute tuples per hand.
    pub mean_types: f64,
}

/// Measure how far type dedup compresses the decomposition space.
pub fn count_stats(hands: u64, seed: u64) -> CountStats {
    let opts = BlockOptions::default();
    let (mut qdcmps, mut types) = (0u64, 0u64);
    for i in 0..hands {
        let hand = gen_hand(seed, i, 1);
        let kb = kb_from_hand(&hand);
        for block in audit_groups(&hand, &kb) {
            qdcmps += enumerate_qdcmps(&block, &kb, &opts).len() as u64;
            types += type_set(&block, &kb, &opts).len() as u64;
        }
    }
    CountStats {
        hands,
        mean_qdcmps: qdcmps as f64 / hands.max(1) as f64,
        mean_types: types as f64 / hands.max(1) as f64,
    }
}
