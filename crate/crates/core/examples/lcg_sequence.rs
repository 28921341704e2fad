//! Print the first few outputs of every built-in LCG, then jump ahead and
//! walk back again.
//!
//! cargo run --example lcg_sequence -- [seed]

use prng_ots::lcg::{LcgParams, POSIX};

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|s| prng_ots::hexfmt::parse_dec_or_hex(&s).expect("seed"))
        .unwrap_or(1);

    for params in LcgParams::all_builtin() {
        let state = params.seed(seed);
        let first: Vec<String> = state.iter().take(3).map(|v| params.format_value(v)).collect();
        println!(
            "{:<6} a={:#x} c={:#x} k={:<2}  f0={}  f1..f3={}",
            params.name(),
            params.a(),
            params.c(),
            params.k(),
            state,
            first.join(" ")
        );
    }

    let n = (1u64 << 24) - 1;
    let start = POSIX.seed(0x13579BDE);
    let end = start.jump(n);
    println!("posix: f_{n} = {end}  (one jump, O(log n) compositions)");
    let back = end.jump_back(n).unwrap();
    println!("posix: jumping back {n} steps returns to {back}");
    assert_eq!(back, start);
}
