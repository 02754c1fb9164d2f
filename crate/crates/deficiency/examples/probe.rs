//! Debug probe: dump per-group decompositions, type sets, and joined pricing.
use std::collections::BTreeSet;

use deficiency::block::{audit_groups, enumerate_qdcmps, type_of, type_set, BlockOptions};
use deficiency::{block_dfncy, decide, join_types, parse_hand, parse_kb, quadtree_dfncy, TypeTuple};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let hand = parse_hand(&args[1]).unwrap();
    let kb = parse_kb(&args[2]).unwrap();
    let dump = args.len() > 3 && args[3] == "dump";
    println!("block={} quad={}", block_dfncy(&hand, &kb), quadtree_dfncy(&hand, &kb));
    let opts = BlockOptions::default();
    let groups = audit_groups(&hand, &kb);
    let mut joined: Option<BTreeSet<TypeTuple>> = None;
    for b in &groups {
        let qs = enumerate_qdcmps(b, &kb, &opts);
        let ts = type_set(b, &kb, &opts);
        println!("group {b}: {} qdcmps, {} types", qs.len(), ts.len());
        if dump {
            for q in &qs {
                println!("  {:?} -> {:?}", q, type_of(q, &kb));
            }
        }
        for t in &ts {
            println!("  {t:?}");
        }
        joined = Some(match joined {
            None => ts,
            Some(a) => join_types(&a, &ts),
        });
    }
    let ke = (0..27).any(|k| kb.get_kind(k) >= 2);
    let km = {
        let kc = kb.counts();
        (0..27).any(|k| kc[k] >= 3)
            || (0..27).any(|k| k % 9 <= 6 && kc[k] >= 1 && kc[k + 1] >= 1 && kc[k + 2] >= 1)
    };
    println!("ke={ke} km={km}");
    let mut best = (200u8, None);
    for t in joined.unwrap() {
        let d = decide(t, ke, km);
        if d < best.0 {
            best = (d, Some(t));
        }
    }
    println!("best {best:?}");
}
