//! Debug: aggregate block-engine phase timing over a fuzz corpus.
use std::time::Instant;

use deficiency::bench::fuzz_diff;
use deficiency::block::{audit_groups, enumerate_qdcmps, type_set, BlockOptions};
use deficiency::{block_dfncy, kb_blocks, parse_hand, parse_kb, quadtree_dfncy};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let pairs: u64 = args[1].parse().unwrap();
    let colours: u8 = args[2].parse().unwrap();
    let report = fuzz_diff(pairs, None, 7, Some(colours));
    let parsed: Vec<_> = report
        .records
        .iter()
        .map(|r| (parse_hand(&r.hand).unwrap(), parse_kb(&r.kb).unwrap()))
        .collect();
    let opts = BlockOptions::default();

    let t = Instant::now();
    let mut nblocks = 0usize;
    for (h, kb) in &parsed {
        nblocks += std::hint::black_box(kb_blocks(h, kb)).len();
    }
    println!("kb_blocks    : {:?} ({} blocks)", t.elapsed(), nblocks);

    let t = Instant::now();
    let mut ngroups = 0usize;
    for (h, kb) in &parsed {
        ngroups += std::hint::black_box(audit_groups(h, kb)).len();
    }
    println!("audit_groups : {:?} ({} groups)", t.elapsed(), ngroups);

    let groups: Vec<_> = parsed.iter().map(|(h, kb)| (audit_groups(h, kb), kb)).collect();

    let t = Instant::now();
    let mut nq = 0usize;
    for (gs, kb) in &groups {
        for g in gs {
            nq += std::hint::black_box(enumerate_qdcmps(g, kb, &opts)).len();
        }
    }
    println!("enumerate    : {:?} ({} qdcmps)", t.elapsed(), nq);

    let t = Instant::now();
    let mut nt = 0usize;
    for (gs, kb) in &groups {
        for g in gs {
            nt += std::hint::black_box(type_set(g, kb, &opts)).len();
        }
    }
    println!("type_set     : {:?} ({} types, incl re-enumeration)", t.elapsed(), nt);

    let t = Instant::now();
    for (h, kb) in &parsed {
        std::hint::black_box(block_dfncy(h, kb));
    }
    println!("block_dfncy  : {:?}", t.elapsed());

    let t = Instant::now();
    for (h, kb) in &parsed {
        std::hint::black_box(quadtree_dfncy(h, kb));
    }
    println!("quadtree     : {:?}", t.elapsed());
}
