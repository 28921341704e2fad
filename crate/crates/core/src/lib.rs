//! One-time signatures built on linear congruential generators.
//!
//! A key pair is an LCG chain: the private seed `p` is mixed into the
//! generator's first state and the public value is the state after
//! `2^w - 1` steps. Signing a normalized message `t` publishes the state
//! after `t` steps, XOR-masked with the multiplier; verification unmasks it
//! and finishes the walk. A single-chain Winternitz scheme over SHA-2 is
//! included as the hash-based baseline.
//!
//! * [`lcg`]: generators for the four built-in parameter sets, jump-ahead
//!   and inversion
//! * [`hashchain`]: Winternitz hash chains
//! * [`prngots`]: the LCG-based scheme
//! * [`scheme`]: one interface over both schemes
//! * [`keystore`]: key and signature files, one-time-use enforcement
//! * [`audit`]: forward forgery and seed recovery
//! * [`bench`]: timing harness with CSV and quartile summaries
//! * [`cli`]: the `prng-ots` command line
//!
//! ```
//! use prng_ots::lcg::POSIX;
//! use prng_ots::prngots::{prng_keygen, prng_sign, prng_verify};
//!
//! let key = prng_keygen(0x13579BDE, &POSIX, 24).unwrap();
//! assert_eq!(key.public, 0xE9694A840B48);
//! let sig = prng_sign(key.private, 12345678, &POSIX, 24).unwrap();
//! assert_eq!(sig.value, 0xECE38D6DD84C);
//! assert!(prng_verify(key.public, sig.value, 12345678, &POSIX, 24).unwrap());
//! ```

pub mod audit;
pub mod bench;
pub mod cli;
pub mod error;
pub mod hashchain;
pub mod hexfmt;
pub mod keystore;
pub mod lcg;
pub mod prngots;
pub mod scheme;

pub use error::{Error, Result};
pub use lcg::{LcgParams, LcgState, Registry};
pub use prngots::ChainMode;
pub use scheme::{OtsValue, Scheme, SchemeParams, Signature};
