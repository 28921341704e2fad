//! Attacks on a revealed signature: forward forgery for any larger t, and
//! full private-key recovery for the LCG scheme.
//!
//! cargo run --release --example audit_forgery

use prng_ots::audit::{self, forge_forward, recover_seed_from_signature};
use prng_ots::hashchain::HashAlg;
use prng_ots::lcg::POSIX;
use prng_ots::{ChainMode, OtsValue, SchemeParams, Signature};

fn main() {
    eprintln!("{}", audit::WARNING_BANNER);

    let params = SchemeParams::prng(&POSIX, 24).unwrap();
    let p = OtsValue::Lcg(0x13579BDE);
    let public = params.public_key(&p, ChainMode::Jump).unwrap();
    let sig = Signature {
        value: params.sign(&p, 12345678, ChainMode::Jump).unwrap(),
        params: params.clone(),
        t: 12345678,
    };
    println!("observed  t={} S={}", sig.t, sig.to_hex());
    for target in [12345679, 16000000, 16777215] {
        let forged = forge_forward(&sig, target).unwrap();
        println!("forged    t={target} S={} verifies={}", forged.to_hex(), forged.verify(&public).unwrap());
    }
    let seed = recover_seed_from_signature(&sig).unwrap();
    println!("recovered p={}", POSIX.format_value(seed));

    let wots = SchemeParams::wots(HashAlg::Sha224, 12).unwrap();
    let r = wots.random_private();
    let big_r = wots.public_key(&r, ChainMode::Sequential).unwrap();
    let sig = Signature {
        value: wots.sign(&r, 1000, ChainMode::Sequential).unwrap(),
        params: wots,
        t: 1000,
    };
    let forged = forge_forward(&sig, 4000).unwrap();
    println!("wots      forged t=4000 from t=1000, verifies={}", forged.verify(&big_r).unwrap());
}
