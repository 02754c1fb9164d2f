//! Debug: repeat block_dfncy on one pair.
use std::time::Instant;

use deficiency::{block_dfncy, parse_hand, parse_kb};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let hand = parse_hand(&args[1]).unwrap();
    let kb = parse_kb(&args[2]).unwrap();
    for _ in 0..5 {
        let t = Instant::now();
        let v = std::hint::black_box(block_dfncy(&hand, &kb));
        println!("{v} in {:?}", t.elapsed());
    }
}
