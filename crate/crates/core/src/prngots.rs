//! One-time signatures whose chain is LCG iteration.
//!
//! With generator `f` seeded through `f_0(s) = a ^ s`:
//!
//! * keygen: private seed `p`, public value `P = f_{2^w-1}(p)`
//! * sign `t`: `S = a ^ f_t(p)`
//! * verify: reseed with `S`, which unmasks to `f_0(S) = a ^ S = f_t(p)`,
//!   advance `2^w - 1 - t` steps and compare with `P`
//!
//! Chains can be walked one step at a time or with a logarithmic jump; the
//! two modes always agree.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hashchain::{chain_len, check_t, check_w};
use crate::lcg::LcgParams;

pub const DEFAULT_W: u32 = 24;

/// How a chain of `n` LCG steps is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum ChainMode {
    /// `n` individual steps.
    Sequential,
    /// Affine-map exponentiation, `O(log n)`.
    #[default]
    Jump,
}

impl ChainMode {
    pub fn name(self) -> &'static str {
        match self {
            ChainMode::Sequential => "sequential",
            ChainMode::Jump => "jump",
        }
    }

    pub fn advance(self, params: &LcgParams, x: u64, n: u64) -> u64 {
        match self {
            ChainMode::Sequential => params.walk_value(x, n),
            ChainMode::Jump => params.jump_value(x, n),
        }
    }
}

impl FromStr for ChainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(ChainMode::Sequential),
            "jump" => Ok(ChainMode::Jump),
            other => Err(Error::Config(format!("unknown chain mode `{other}`"))),
        }
    }
}

impl fmt::Display for ChainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrngOtsKeyPair {
    /// Private seed `p`.
    pub private: u64,
    /// Public chain endpoint `P`.
    pub public: u64,
    pub params: LcgParams,
    pub w: u32,
    pub used: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrngOtsSignature {
    /// Masked chain value `S`.
    pub value: u64,
    pub params: LcgParams,
    pub w: u32,
}

impl PrngOtsSignature {
    pub fn to_hex(&self) -> String {
        self.params.format_value(self.value)
    }
}

fn check_value(name: &str, v: u64, params: &LcgParams) -> Result<()> {
    if v > params.mask() {
        return Err(Error::Domain(format!(
            "{name} = {v:#x} does not fit in {} bits",
            params.k()
        )));
    }
    Ok(())
}

/// A uniformly random `k`-bit seed from the OS entropy source.
pub fn random_seed(params: &LcgParams) -> u64 {
    use rand::RngCore;
    rand::rngs::OsRng.next_u64() & params.mask()
}

pub fn prng_keygen(p: u64, params: &LcgParams, w: u32) -> Result<PrngOtsKeyPair> {
    prng_keygen_with(p, params, w, ChainMode::Jump)
}

pub fn prng_keygen_with(
    p: u64,
    params: &LcgParams,
    w: u32,
    mode: ChainMode,
) -> Result<PrngOtsKeyPair> {
    check_w(w)?;
    check_value("p", p, params)?;
    let public = mode.advance(params, params.init_value(p), chain_len(w));
    Ok(PrngOtsKeyPair {
        private: p,
        public,
        params: params.clone(),
        w,
        used: false,
    })
}

/// `f_t(p)`, the unmasked chain value a signature for `t` reveals.
pub fn chain_value_at(p: u64, t: u64, params: &LcgParams, mode: ChainMode) -> u64 {
    mode.advance(params, params.init_value(p), t)
}

pub fn prng_sign(p: u64, t: u64, params: &LcgParams, w: u32) -> Result<PrngOtsSignature> {
    prng_sign_with(p, t, params, w, ChainMode::Jump)
}

pub fn prng_sign_with(
    p: u64,
    t: u64,
    params: &LcgParams,
    w: u32,
    mode: ChainMode,
) -> Result<PrngOtsSignature> {
    check_w(w)?;
    check_t(t, w)?;
    check_value("p", p, params)?;
    let ft = chain_value_at(p, t, params, mode);
    Ok(PrngOtsSignature {
        value: (params.a() ^ ft) & params.mask(),
        params: params.clone(),
        w,
    })
}

/// The verification value `V = f_{2^w-1-t}(S)`.
pub fn prng_recompute(s: u64, t: u64, params: &LcgParams, w: u32, mode: ChainMode) -> Result<u64> {
    check_w(w)?;
    check_t(t, w)?;
    check_value("S", s, params)?;
    Ok(mode.advance(params, params.init_value(s), chain_len(w) - t))
}

pub fn prng_verify(public: u64, s: u64, t: u64, params: &LcgParams, w: u32) -> Result<bool> {
    prng_verify_with(public, s, t, params, w, ChainMode::Jump)
}

pub fn prng_verify_with(
    public: u64,
    s: u64,
    t: u64,
    params: &LcgParams,
    w: u32,
    mode: ChainMode,
) -> Result<bool> {
    check_value("P", public, params)?;
    Ok(prng_recompute(s, t, params, w, mode)? == public)
}

impl PrngOtsKeyPair {
    pub fn generate(params: &LcgParams, w: u32) -> Result<Self> {
        prng_keygen(random_seed(params), params, w)
    }

    pub fn sign(&self, t: u64) -> Result<PrngOtsSignature> {
        prng_sign(self.private, t, &self.params, self.w)
    }

    pub fn verify(&self, sig: &PrngOtsSignature, t: u64) -> Result<bool> {
        prng_verify(self.public, sig.value, t, &self.params, self.w)
    }
}
