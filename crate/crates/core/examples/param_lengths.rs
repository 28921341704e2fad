//! Key and signature sizes for every parameter set of both schemes.
//!
//! cargo run --example param_lengths

use prng_ots::hashchain::HashAlg;
use prng_ots::lcg::LcgParams;
use prng_ots::SchemeParams;

fn main() {
    println!("{:<10} {:<8} {:>8} {:>8} {:>8}", "scheme", "params", "private", "public", "sig");
    let lcgs = LcgParams::all_builtin().into_iter().map(|l| SchemeParams::prng(l, 24).unwrap());
    let hashes = HashAlg::ALL.iter().map(|&h| SchemeParams::wots(h, 24).unwrap());
    for params in lcgs.chain(hashes) {
        let (sk, pk, sig) = params.lengths();
        println!(
            "{:<10} {:<8} {:>7}b {:>7}b {:>7}b",
            params.scheme().name(),
            params.paramset(),
            sk,
            pk,
            sig
        );
    }
}
