//! Keygen/sign/verify timings for the four LCG parameter sets in both chain
//! modes, printed as a table and as summary CSV.
//!
//! cargo run --release --example bench_table -- [w] [trials]

use prng_ots::bench::{self, BenchConfig, ModeSelection};
use prng_ots::Scheme;

fn main() {
    let mut args = std::env::args().skip(1);
    let w: u32 = args.next().map(|s| s.parse().expect("w")).unwrap_or(20);
    let trials: usize = args.next().map(|s| s.parse().expect("trials")).unwrap_or(10);

    let config = BenchConfig::new(&[Scheme::PrngOts], &["vb", "gcc", "posix", "mmix"], w, trials)
        .unwrap()
        .modes(ModeSelection::Both);
    let records = bench::run_bench(&config).unwrap();
    let summaries = bench::summarize(&records);
    print!("{}", bench::summary_table(&summaries));
    println!();
    print!("{}", bench::summary_csv(&summaries));
}
