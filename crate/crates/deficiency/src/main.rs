//! Command-line interface to the deficiency engines.
//!
//! Exit codes: 0 on success (including a clean fuzz run), 1 when fuzzing
//! finds an engine disagreement, 2 on malformed input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use deficiency::bench::{bench_csv, fuzz_diff, pure_census, run_bench, BenchConfig};
use deficiency::block::kb_blocks;
use deficiency::decision::{dfncy_with, discard_values, Backend, DiscardError};
use deficiency::tiles::{parse_hand, parse_kb, Hand, KnowledgeBase};
use deficiency::INCOMPLETABLE;

#[derive(Parser)]
#[command(name = "deficiency", version, about = "Knowledge-aware deficiency tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    /// Block engine: fast, exact up to four.
    Block,
    /// Exhaustive pre-decomposition search: exact.
    Quadtree,
    /// Breadth-first replacement search: exact up to its cap.
    Oracle,
}

impl From<Algo> for Backend {
    fn from(a: Algo) -> Backend {
        match a {
            Algo::Block => Backend::Block,
            Algo::Quadtree => Backend::Quadtree,
            Algo::Oracle => Backend::Oracle,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a hand's deficiency.
    Dfncy {
        /// Hand tiles, e.g. B1B2B3C4C4 (optionally with a ;k=N suffix).
        #[arg(long)]
        hand: String,
        /// Knowledge base: 27 digits 0-4, colours separated by |.
        #[arg(long)]
        kb: String,
        /// Engine to use.
        #[arg(long, value_enum, default_value_t = Algo::Block)]
        algo: Algo,
        /// Consolidated meld count, when not given as a ;k=N suffix.
        #[arg(long)]
        melds_fixed: Option<u8>,
    },
    /// Evaluate every discard of a hand.
    Discard {
        /// Hand tiles.
        #[arg(long)]
        hand: String,
        /// Knowledge base digits.
        #[arg(long)]
        kb: String,
        /// Engine to use.
        #[arg(long, value_enum, default_value_t = Algo::Block)]
        algo: Algo,
        /// Consolidated meld count, when not given as a ;k=N suffix.
        #[arg(long)]
        melds_fixed: Option<u8>,
    },
    /// Show a hand's knowledge-aware blocks.
    Blocks {
        /// Hand tiles.
        #[arg(long)]
        hand: String,
        /// Knowledge base digits.
        #[arg(long)]
        kb: String,
        /// Consolidated meld count, when not given as a ;k=N suffix.
        #[arg(long)]
        melds_fixed: Option<u8>,
    },
    /// Histogram deficiency over every single-colour full-size hand.
    Census,
    /// Time the exhaustive search against the block engine, as CSV.
    Bench {
        /// Colours hands span (1, 2, or 3).
        #[arg(long, default_value_t = 3)]
        colours: u8,
        /// Number of hands to deal.
        #[arg(long, default_value_t = 180)]
        hands: u64,
        /// Knowledge bases per hand.
        #[arg(long, default_value_t = 5)]
        kbs_per_hand: u64,
        /// Generation seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the engines on seeded random pairs.
    Fuzz {
        /// Pairs to generate.
        #[arg(long, default_value_t = 1000)]
        pairs: u64,
        /// Also run the replacement search up to this depth.
        #[arg(long)]
        oracle_cap: Option<u8>,
        /// Generation seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Fix the colour count instead of cycling 1, 2, 3.
        #[arg(long)]
        colours: Option<u8>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load(hand: &str, kb: &str, melds_fixed: Option<u8>) -> Result<(Hand, KnowledgeBase), String> {
    let parsed = parse_hand(hand).map_err(|e| e.to_string())?;
    let parsed = match melds_fixed {
        None => parsed,
        Some(k) => {
            if hand.contains(";k=") && parsed.melds_fixed() != k {
                return Err(format!(
                    "--melds-fixed {k} contradicts the ;k={} suffix",
                    parsed.melds_fixed()
                ));
            }
            Hand::new(parsed.tiles().to_vec(), k).map_err(|e| e.to_string())?
        }
    };
    let kb = parse_kb(kb).map_err(|e| e.to_string())?;
    Ok((parsed, kb))
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Dfncy { hand, kb, algo, melds_fixed } => {
            let (hand, kb) = load(&hand, &kb, melds_fixed)?;
            let d = dfncy_with(algo.into(), &hand, &kb);
            if d >= INCOMPLETABLE {
                println!("incompletable");
            } else {
                println!("{d}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Discard { hand, kb, algo, melds_fixed } => {
            let (hand, kb) = load(&hand, &kb, melds_fixed)?;
            match discard_values(&hand, &kb, algo.into()) {
                Ok(report) => {
                    if report.dfncy >= INCOMPLETABLE {
                        println!("dfncy incompletable");
                    } else {
                        println!("dfncy {}", report.dfncy);
                    }
                    for (tile, value) in &report.values {
                        println!("{tile} {value}");
                    }
                    println!("discard {}", report.chosen);
                }
                Err(DiscardError::AlreadyComplete) => {
                    println!("hand is already complete; discard anything");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Blocks { hand, kb, melds_fixed } => {
            let (hand, kb) = load(&hand, &kb, melds_fixed)?;
            let blocks: Vec<String> =
                kb_blocks(&hand, &kb).iter().map(|b| b.to_string()).collect();
            println!("{}", blocks.join(","));
            Ok(ExitCode::SUCCESS)
        }
        Command::Census => {
            for (d, count) in pure_census() {
                println!("{d} {count}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { colours, hands, kbs_per_hand, seed, out } => {
            if !(1..=3).contains(&colours) {
                return Err("colour count must be 1, 2, or 3".to_string());
            }
            let rows = run_bench(&BenchConfig { colours, hands, kbs_per_hand, seed });
            let csv = bench_csv(&rows);
            match out {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fuzz { pairs, oracle_cap, seed, colours } => {
            if let Some(c) = colours {
                if !(1..=3).contains(&c) {
                    return Err("colour count must be 1, 2, or 3".to_string());
                }
            }
            let report = fuzz_diff(pairs, oracle_cap, seed, colours);
            let errors = report.errors();
            println!("pairs {}", report.records.len());
            println!("errors {}", errors.len());
            for r in &errors {
                let oracle = match r.oracle {
                    Some(o) if o >= INCOMPLETABLE => "incompletable".to_string(),
                    Some(o) => o.to_string(),
                    None => "-".to_string(),
                };
                println!(
                    "error hand={} kb={} quadtree={} block={} oracle={oracle}",
                    r.hand, r.kb, r.quadtree, r.block
                );
            }
            if errors.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
