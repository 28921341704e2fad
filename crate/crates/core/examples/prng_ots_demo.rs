//! The worked PRNG-OTS example: posix parameters, w = 24, p = 0x13579BDE,
//! t = 12345678. Runs both chain modes and times them.
//!
//! cargo run --release --example prng_ots_demo

use std::time::Instant;

use prng_ots::lcg::POSIX;
use prng_ots::prngots::{chain_value_at, prng_keygen_with, prng_recompute, prng_sign_with};
use prng_ots::ChainMode;

fn main() {
    let (p, t, w) = (0x13579BDE, 12345678, 24);
    for mode in [ChainMode::Sequential, ChainMode::Jump] {
        let start = Instant::now();
        let kp = prng_keygen_with(p, &POSIX, w, mode).unwrap();
        let ft = chain_value_at(p, t, &POSIX, mode);
        let sig = prng_sign_with(p, t, &POSIX, w, mode).unwrap();
        let v = prng_recompute(sig.value, t, &POSIX, w, mode).unwrap();
        let elapsed = start.elapsed();

        println!("[{}] {elapsed:?}", mode.name());
        println!("  p   = {}", POSIX.format_value(p));
        println!("  P   = {}", POSIX.format_value(kp.public));
        println!("  f_t = {}", POSIX.format_value(ft));
        println!("  S   = {}", sig.to_hex());
        println!("  V   = {}  ({})", POSIX.format_value(v), if v == kp.public { "accept" } else { "reject" });
    }
}
