//! Scheme-agnostic view over the two one-time signature constructions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hashchain::{self, ChainValue, HashAlg, WotsParams};
use crate::hexfmt;
use crate::lcg::{LcgParams, Registry};
use crate::prngots::{self, ChainMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Wots,
    PrngOts,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Wots => "wots",
            Scheme::PrngOts => "prng-ots",
        }
    }

    pub(crate) fn private_field(self) -> &'static str {
        match self {
            Scheme::Wots => "r",
            Scheme::PrngOts => "p",
        }
    }

    pub(crate) fn public_field(self) -> &'static str {
        match self {
            Scheme::Wots => "R",
            Scheme::PrngOts => "P",
        }
    }

    pub(crate) fn signature_field(self) -> &'static str {
        match self {
            Scheme::Wots => "zeta",
            Scheme::PrngOts => "S",
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wots" => Ok(Scheme::Wots),
            "prng-ots" => Ok(Scheme::PrngOts),
            other => Err(Error::Config(format!("unknown scheme `{other}`"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A chain value of either scheme: an LCG integer or a digest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OtsValue {
    Lcg(u64),
    Chain(ChainValue),
}

impl OtsValue {
    pub fn as_lcg(&self) -> Option<u64> {
        match self {
            OtsValue::Lcg(v) => Some(*v),
            OtsValue::Chain(_) => None,
        }
    }

    pub fn as_chain(&self) -> Option<&ChainValue> {
        match self {
            OtsValue::Chain(c) => Some(c),
            OtsValue::Lcg(_) => None,
        }
    }
}

/// Fully resolved parameters for one key: scheme, parameter set and `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeParams {
    PrngOts { lcg: LcgParams, w: u32 },
    Wots(WotsParams),
}

impl SchemeParams {
    pub fn prng(lcg: &LcgParams, w: u32) -> Result<Self> {
        hashchain::check_w(w)?;
        Ok(SchemeParams::PrngOts {
            lcg: lcg.clone(),
            w,
        })
    }

    pub fn wots(hash: HashAlg, w: u32) -> Result<Self> {
        Ok(SchemeParams::Wots(WotsParams::new(w, hash)?))
    }

    /// Resolves a `(scheme, paramset, w)` triple. For WOTS the paramset is a
    /// digest name; for PRNG-OTS it is an LCG registry name.
    pub fn resolve(scheme: Scheme, paramset: &str, w: u32, registry: &Registry) -> Result<Self> {
        match scheme {
            Scheme::PrngOts => match registry.get(paramset) {
                Ok(lcg) => Self::prng(lcg, w),
                Err(e) if paramset.parse::<HashAlg>().is_ok() => Err(Error::Config(format!(
                    "prng-ots needs an LCG parameter set, `{paramset}` is a digest ({e})"
                ))),
                Err(e) => Err(e),
            },
            Scheme::Wots => match paramset.parse::<HashAlg>() {
                Ok(hash) => Self::wots(hash, w),
                Err(_) if registry.get(paramset).is_ok() => Err(Error::Config(format!(
                    "wots needs a digest, `{paramset}` is an LCG parameter set"
                ))),
                Err(e) => Err(e),
            },
        }
    }

    pub fn scheme(&self) -> Scheme {
        match self {
            SchemeParams::PrngOts { .. } => Scheme::PrngOts,
            SchemeParams::Wots(_) => Scheme::Wots,
        }
    }

    pub fn paramset(&self) -> &str {
        match self {
            SchemeParams::PrngOts { lcg, .. } => lcg.name(),
            SchemeParams::Wots(p) => p.hash().name(),
        }
    }

    pub fn w(&self) -> u32 {
        match self {
            SchemeParams::PrngOts { w, .. } => *w,
            SchemeParams::Wots(p) => p.w(),
        }
    }

    pub fn chain_len(&self) -> u64 {
        hashchain::chain_len(self.w())
    }

    pub fn check_t(&self, t: u64) -> Result<()> {
        hashchain::check_t(t, self.w())
    }

    /// Bit widths of (private key, public key, signature).
    pub fn lengths(&self) -> (u32, u32, u32) {
        let bits = match self {
            SchemeParams::PrngOts { lcg, .. } => lcg.value_bits(),
            SchemeParams::Wots(p) => p.hash().output_bits(),
        };
        (bits, bits, bits)
    }

    pub fn format_value(&self, value: &OtsValue) -> String {
        match (self, value) {
            (SchemeParams::PrngOts { lcg, .. }, OtsValue::Lcg(v)) => lcg.format_value(*v),
            (_, OtsValue::Chain(c)) => c.to_hex(),
            (SchemeParams::Wots(_), OtsValue::Lcg(v)) => format!("{v:#X}"),
        }
    }

    pub fn parse_value(&self, s: &str) -> Result<OtsValue> {
        match self {
            SchemeParams::PrngOts { lcg, .. } => {
                let v = hexfmt::parse_int(s)?;
                lcg.state(v)?;
                Ok(OtsValue::Lcg(v))
            }
            SchemeParams::Wots(p) => Ok(OtsValue::Chain(ChainValue::from_hex(s, p.hash())?)),
        }
    }

    fn expect_lcg(&self, v: &OtsValue) -> Result<u64> {
        v.as_lcg()
            .ok_or_else(|| Error::Domain("expected an LCG value, got a digest".into()))
    }

    fn expect_chain<'v>(&self, v: &'v OtsValue) -> Result<&'v ChainValue> {
        v.as_chain()
            .ok_or_else(|| Error::Domain("expected a digest, got an LCG value".into()))
    }

    pub fn random_private(&self) -> OtsValue {
        match self {
            SchemeParams::PrngOts { lcg, .. } => OtsValue::Lcg(prngots::random_seed(lcg)),
            SchemeParams::Wots(p) => OtsValue::Chain(ChainValue::random(p.hash())),
        }
    }

    pub fn public_key(&self, private: &OtsValue, mode: ChainMode) -> Result<OtsValue> {
        match self {
            SchemeParams::PrngOts { lcg, w } => {
                let p = self.expect_lcg(private)?;
                Ok(OtsValue::Lcg(prngots::prng_keygen_with(p, lcg, *w, mode)?.public))
            }
            SchemeParams::Wots(params) => Ok(OtsValue::Chain(hashchain::wots_keygen(
                self.expect_chain(private)?,
                params,
            )?)),
        }
    }

    pub fn sign(&self, private: &OtsValue, t: u64, mode: ChainMode) -> Result<OtsValue> {
        match self {
            SchemeParams::PrngOts { lcg, w } => {
                let p = self.expect_lcg(private)?;
                Ok(OtsValue::Lcg(prngots::prng_sign_with(p, t, lcg, *w, mode)?.value))
            }
            SchemeParams::Wots(params) => Ok(OtsValue::Chain(hashchain::wots_sign(
                self.expect_chain(private)?,
                t,
                params,
            )?)),
        }
    }

    /// The verifier's recomputed endpoint (`V` or `ξ`).
    pub fn recompute(&self, sig: &OtsValue, t: u64, mode: ChainMode) -> Result<OtsValue> {
        match self {
            SchemeParams::PrngOts { lcg, w } => {
                let s = self.expect_lcg(sig)?;
                Ok(OtsValue::Lcg(prngots::prng_recompute(s, t, lcg, *w, mode)?))
            }
            SchemeParams::Wots(params) => Ok(OtsValue::Chain(hashchain::wots_recompute(
                self.expect_chain(sig)?,
                t,
                params,
            )?)),
        }
    }

    pub fn verify(&self, public: &OtsValue, sig: &OtsValue, t: u64, mode: ChainMode) -> Result<bool> {
        match self {
            SchemeParams::PrngOts { lcg, w } => prngots::prng_verify_with(
                self.expect_lcg(public)?,
                self.expect_lcg(sig)?,
                t,
                lcg,
                *w,
                mode,
            ),
            SchemeParams::Wots(params) => hashchain::wots_verify(
                self.expect_chain(public)?,
                self.expect_chain(sig)?,
                t,
                params,
            ),
        }
    }

    /// Message to `t`. PRNG-OTS reuses the WOTS normalization with SHA-224.
    pub fn normalize(&self, message: &[u8]) -> Result<u64> {
        let hash = match self {
            SchemeParams::PrngOts { .. } => HashAlg::Sha224,
            SchemeParams::Wots(p) => p.hash(),
        };
        hashchain::normalize_message(message, self.w(), hash)
    }
}

/// A signature on the normalized message `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub params: SchemeParams,
    pub t: u64,
    pub value: OtsValue,
}

impl Signature {
    pub fn to_hex(&self) -> String {
        self.params.format_value(&self.value)
    }

    pub fn verify(&self, public: &OtsValue) -> Result<bool> {
        self.params.verify(public, &self.value, self.t, ChainMode::Jump)
    }
}
