//! Key files on disk and one-time enforcement: eight threads race to sign
//! with the same key and exactly one wins.
//!
//! cargo run --example keystore_one_time

use std::sync::{Arc, Barrier};

use prng_ots::keystore::{self, KeyRecord, Visibility};
use prng_ots::lcg::POSIX;
use prng_ots::{Error, OtsValue, SchemeParams};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let key = dir.path().join("demo.key");
    let record = KeyRecord::from_private(
        SchemeParams::prng(&POSIX, 24).unwrap(),
        OtsValue::Lcg(0x13579BDE),
    )
    .unwrap();
    keystore::save_key(&record, &key, Visibility::Private).unwrap();
    keystore::save_key(&record, dir.path().join("demo.pub"), Visibility::Public).unwrap();
    print!("{}", std::fs::read_to_string(&key).unwrap());

    let barrier = Arc::new(Barrier::new(8));
    let handles: Vec<_> = (0..8u64)
        .map(|i| {
            let (key, barrier) = (key.clone(), barrier.clone());
            std::thread::spawn(move || {
                barrier.wait();
                (i, keystore::sign_with_store(&key, 12345678 + i))
            })
        })
        .collect();
    for h in handles {
        match h.join().unwrap() {
            (i, Ok(sig)) => println!("thread {i}: signed t={} S={}", sig.t, sig.to_hex()),
            (i, Err(Error::KeyReused(_))) => println!("thread {i}: refused, key already used"),
            (i, Err(e)) => println!("thread {i}: {e}"),
        }
    }
    print!("{}", std::fs::read_to_string(&key).unwrap());
}
