//! Debug: time block-engine phases on one pair.
use std::time::Instant;

use deficiency::block::{audit_groups, enumerate_qdcmps, type_set, BlockOptions};
use deficiency::{block_dfncy, parse_hand, parse_kb, quadtree_dfncy};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let hand = parse_hand(&args[1]).unwrap();
    let kb = parse_kb(&args[2]).unwrap();
    let opts = BlockOptions::default();
    let t0 = Instant::now();
    let groups = audit_groups(&hand, &kb);
    println!("grouping: {:?}", t0.elapsed());
    for g in &groups {
        let t1 = Instant::now();
        let qs = enumerate_qdcmps(g, &kb, &opts);
        let te = t1.elapsed();
        let t2 = Instant::now();
        let ts = type_set(g, &kb, &opts);
        let tt = t2.elapsed();
        println!("group {g}: {} qdcmps in {te:?}, {} types in {tt:?} (incl re-enumeration)", qs.len(), ts.len());
    }
    let t3 = Instant::now();
    let b = block_dfncy(&hand, &kb);
    println!("block_dfncy: {b} in {:?}", t3.elapsed());
    let t4 = Instant::now();
    let q = quadtree_dfncy(&hand, &kb);
    println!("quadtree: {q} in {:?}", t4.elapsed());
}
