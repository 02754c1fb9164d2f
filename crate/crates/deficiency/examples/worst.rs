//! Debug: find the slowest block-engine pairs in a fuzz stream.
use std::time::Instant;

use deficiency::bench::fuzz_diff;
use deficiency::{block_dfncy, parse_hand, parse_kb};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let pairs: u64 = args[1].parse().unwrap();
    let colours: u8 = args[2].parse().unwrap();
    let report = fuzz_diff(pairs, None, 7, Some(colours));
    let mut timed: Vec<(f64, String, String)> = report
        .records
        .iter()
        .map(|r| {
            let hand = parse_hand(&r.hand).unwrap();
            let kb = parse_kb(&r.kb).unwrap();
            let t = Instant::now();
            std::hint::black_box(block_dfncy(&hand, &kb));
            (t.elapsed().as_secs_f64() * 1e3, r.hand.clone(), r.kb.clone())
        })
        .collect();
    timed.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    for (ms, hand, kb) in timed.iter().take(5) {
        println!("{ms:.3} ms  {hand}  {kb}");
    }
    let total: f64 = timed.iter().map(|t| t.0).sum();
    println!("total block time {total:.1} ms over {} pairs", timed.len());
}
