//! Single-chain Winternitz one-time signatures.
//!
//! The chain is a bare iterated digest `h_n(r) = h(h_{n-1}(r))` over the raw
//! digest bytes, with no masks, addresses or checksum chains. A key pair is
//! `(r, R = h_{2^w-1}(r))`; signing a normalized message `t` reveals
//! `h_t(r)` and verification walks the remaining `2^w - 1 - t` links.

use std::fmt;
use std::str::FromStr;

use sha2::digest::Digest;
use sha2::{Sha224, Sha256, Sha384, Sha512};

use crate::error::{Error, Result};
use crate::hexfmt;

pub const MIN_W: u32 = 1;
pub const MAX_W: u32 = 32;

/// Digest used for the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum HashAlg {
    #[default]
    Sha224,
    Sha256,
    Sha384,
    Sha512,
}

impl HashAlg {
    pub const ALL: [HashAlg; 4] = [
        HashAlg::Sha224,
        HashAlg::Sha256,
        HashAlg::Sha384,
        HashAlg::Sha512,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HashAlg::Sha224 => "sha224",
            HashAlg::Sha256 => "sha256",
            HashAlg::Sha384 => "sha384",
            HashAlg::Sha512 => "sha512",
        }
    }

    /// Output length in bytes.
    pub fn output_len(self) -> usize {
        match self {
            HashAlg::Sha224 => 28,
            HashAlg::Sha256 => 32,
            HashAlg::Sha384 => 48,
            HashAlg::Sha512 => 64,
        }
    }

    pub fn output_bits(self) -> u32 {
        self.output_len() as u32 * 8
    }

    pub fn digest(self, data: &[u8]) -> Vec<u8> {
        match self {
            HashAlg::Sha224 => Sha224::digest(data).to_vec(),
            HashAlg::Sha256 => Sha256::digest(data).to_vec(),
            HashAlg::Sha384 => Sha384::digest(data).to_vec(),
            HashAlg::Sha512 => Sha512::digest(data).to_vec(),
        }
    }

    fn iterate(self, data: &[u8], n: u64) -> Vec<u8> {
        match self {
            HashAlg::Sha224 => iterate_with::<Sha224>(data, n),
            HashAlg::Sha256 => iterate_with::<Sha256>(data, n),
            HashAlg::Sha384 => iterate_with::<Sha384>(data, n),
            HashAlg::Sha512 => iterate_with::<Sha512>(data, n),
        }
    }
}

impl FromStr for HashAlg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        HashAlg::ALL
            .into_iter()
            .find(|h| h.name() == lower || h.name().replace("sha", "sha-") == lower)
            .ok_or_else(|| Error::UnknownDigest(s.to_string()))
    }
}

impl fmt::Display for HashAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn iterate_with<D: Digest>(data: &[u8], n: u64) -> Vec<u8> {
    if n == 0 {
        return data.to_vec();
    }
    let mut out = D::digest(data);
    for _ in 1..n {
        out = D::digest(&out);
    }
    out.to_vec()
}

/// One link of a hash chain: exactly one digest worth of bytes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChainValue {
    bytes: Vec<u8>,
    hash: HashAlg,
}

impl ChainValue {
    pub fn new(bytes: Vec<u8>, hash: HashAlg) -> Result<Self> {
        if bytes.len() != hash.output_len() {
            return Err(Error::Domain(format!(
                "chain value must be {} bytes for {}, got {}",
                hash.output_len(),
                hash,
                bytes.len()
            )));
        }
        Ok(ChainValue { bytes, hash })
    }

    pub fn from_hex(s: &str, hash: HashAlg) -> Result<Self> {
        Self::new(hexfmt::parse_bytes(s)?, hash)
    }

    /// A fresh private chain start from the OS entropy source.
    pub fn random(hash: HashAlg) -> Self {
        use rand::RngCore;
        let mut bytes = vec![0u8; hash.output_len()];
        rand::rngs::OsRng.fill_bytes(&mut bytes);
        ChainValue { bytes, hash }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn hash(&self) -> HashAlg {
        self.hash
    }

    pub fn to_hex(&self) -> String {
        hexfmt::format_bytes(&self.bytes)
    }

    /// Copy with bit `bit` (counted from the least significant end) flipped.
    pub fn with_bit_flipped(&self, bit: usize) -> Self {
        let mut bytes = self.bytes.clone();
        let len = bytes.len();
        bytes[len - 1 - (bit / 8) % len] ^= 1 << (bit % 8);
        ChainValue {
            bytes,
            hash: self.hash,
        }
    }
}

impl fmt::Debug for ChainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainValue({}, {})", self.hash, self.to_hex())
    }
}

impl fmt::Display for ChainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Chain parameters: depth exponent `w` (chain length `2^w - 1`) and digest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WotsParams {
    w: u32,
    hash: HashAlg,
}

impl WotsParams {
    pub fn new(w: u32, hash: HashAlg) -> Result<Self> {
        check_w(w)?;
        Ok(WotsParams { w, hash })
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn hash(&self) -> HashAlg {
        self.hash
    }

    /// `2^w - 1`.
    pub fn chain_len(&self) -> u64 {
        chain_len(self.w)
    }

    pub fn check_t(&self, t: u64) -> Result<()> {
        check_t(t, self.w)
    }
}

pub(crate) fn check_w(w: u32) -> Result<()> {
    if !(MIN_W..=MAX_W).contains(&w) {
        return Err(Error::Domain(format!(
            "w = {w} outside [{MIN_W}, {MAX_W}]"
        )));
    }
    Ok(())
}

pub(crate) fn chain_len(w: u32) -> u64 {
    (1u64 << w) - 1
}

pub(crate) fn check_t(t: u64, w: u32) -> Result<()> {
    let max = chain_len(w);
    if t > max {
        return Err(Error::Domain(format!(
            "t = {t} outside [0, {max}] for w = {w}"
        )));
    }
    Ok(())
}

/// Applies the digest `n` times; `n = 0` returns `x` unchanged.
pub fn hash_iterate(x: &ChainValue, n: u64) -> ChainValue {
    ChainValue {
        bytes: x.hash.iterate(&x.bytes, n),
        hash: x.hash,
    }
}

/// Maps a message onto `[0, 2^w - 1]`: the big-endian digest reduced mod `2^w`.
pub fn normalize_message(message: &[u8], w: u32, hash: HashAlg) -> Result<u64> {
    check_w(w)?;
    let digest = hash.digest(message);
    let tail = digest
        .iter()
        .rev()
        .take(8)
        .rev()
        .fold(0u64, |acc, &b| (acc << 8) | b as u64);
    Ok(tail & chain_len(w))
}

/// `R = h_{2^w-1}(r)`.
pub fn wots_keygen(r: &ChainValue, params: &WotsParams) -> Result<ChainValue> {
    check_alg(r, params)?;
    Ok(hash_iterate(r, params.chain_len()))
}

/// `ζ = h_t(r)`.
pub fn wots_sign(r: &ChainValue, t: u64, params: &WotsParams) -> Result<ChainValue> {
    check_alg(r, params)?;
    params.check_t(t)?;
    Ok(hash_iterate(r, t))
}

/// `ξ = h_{2^w-1-t}(ζ)`, the value verification compares against `R`.
pub fn wots_recompute(zeta: &ChainValue, t: u64, params: &WotsParams) -> Result<ChainValue> {
    check_alg(zeta, params)?;
    params.check_t(t)?;
    Ok(hash_iterate(zeta, params.chain_len() - t))
}

/// Accepts iff `h_{2^w-1-t}(ζ) == R`. An out-of-range `t` is an error, not
/// a rejection.
pub fn wots_verify(
    public: &ChainValue,
    zeta: &ChainValue,
    t: u64,
    params: &WotsParams,
) -> Result<bool> {
    check_alg(public, params)?;
    let xi = wots_recompute(zeta, t, params)?;
    Ok(xi == *public)
}

fn check_alg(x: &ChainValue, params: &WotsParams) -> Result<()> {
    if x.hash != params.hash {
        return Err(Error::Domain(format!(
            "chain value uses {} but parameters use {}",
            x.hash, params.hash
        )));
    }
    Ok(())
}
