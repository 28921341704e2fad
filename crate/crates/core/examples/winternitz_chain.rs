//! Winternitz one-time signature over a single SHA-224 hash chain.
//!
//! cargo run --release --example winternitz_chain -- [w] [message]

use prng_ots::hashchain::{
    normalize_message, wots_keygen, wots_recompute, wots_sign, wots_verify, ChainValue, HashAlg,
    WotsParams,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let w: u32 = args.next().map(|s| s.parse().expect("w")).unwrap_or(16);
    let message = args.next().unwrap_or_else(|| "hello".into());

    let params = WotsParams::new(w, HashAlg::Sha224).unwrap();
    let r = ChainValue::random(HashAlg::Sha224);
    let big_r = wots_keygen(&r, &params).unwrap();
    let t = normalize_message(message.as_bytes(), w, HashAlg::Sha224).unwrap();
    let zeta = wots_sign(&r, t, &params).unwrap();
    let xi = wots_recompute(&zeta, t, &params).unwrap();

    println!("w    = {w} (chain length {})", params.chain_len());
    println!("r    = {r}");
    println!("R    = {big_r}");
    println!("t    = {t}  (from {message:?})");
    println!("zeta = {zeta}");
    println!("xi   = {xi}");
    println!("verify: {}", wots_verify(&big_r, &zeta, t, &params).unwrap());
}
