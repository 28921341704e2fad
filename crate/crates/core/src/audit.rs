//! Attacks that follow from the construction itself.
//!
//! * **Forward forgery.** A signature for `t` is a point on a public chain.
//!   Anyone holding it can walk the chain further and obtain a valid
//!   signature for every `t' > t`, no private key needed. This is why each
//!   key may sign once, and why a single-chain scheme without a checksum
//!   offers no protection beyond that.
//! * **Seed recovery.** Every built-in multiplier is odd, so each LCG step
//!   is a bijection on `[0, 2^k)` with a unique preimage. A PRNG-OTS signature
//!   reveals `f_t(p) = a ^ S`; stepping back `t` times and undoing the seed
//!   mix gives back `p`. The public key alone leaks `p` the same way, by
//!   stepping back `2^w - 1` times from `P`.

use crate::error::{Error, Result};
use crate::hashchain::{chain_len, check_t, check_w, hash_iterate};
use crate::lcg::LcgParams;
use crate::prngots::PrngOtsSignature;
use crate::scheme::{OtsValue, SchemeParams, Signature};

pub const WARNING_BANNER: &str = "\
!! AUDIT: the output below is a forgery/key-recovery demonstration.      !!
!! It derives signing material without the private key.                 !!";

/// Derives a signature for `t_target` from `sig` (a signature for `sig.t`),
/// using only public information.
pub fn forge_forward(sig: &Signature, t_target: u64) -> Result<Signature> {
    if t_target <= sig.t {
        return Err(Error::Domain(format!(
            "forward forgery needs t_target > t, got t_target = {t_target}, t = {}",
            sig.t
        )));
    }
    sig.params.check_t(t_target)?;
    let steps = t_target - sig.t;
    let value = match (&sig.params, &sig.value) {
        (SchemeParams::Wots(_), OtsValue::Chain(zeta)) => OtsValue::Chain(hash_iterate(zeta, steps)),
        (SchemeParams::PrngOts { lcg, .. }, OtsValue::Lcg(s)) => {
            OtsValue::Lcg(forge_forward_value(lcg, *s, steps))
        }
        _ => return Err(Error::Domain("signature value does not match its scheme".into())),
    };
    Ok(Signature {
        params: sig.params.clone(),
        t: t_target,
        value,
    })
}

/// Unmask, advance `steps`, remask.
fn forge_forward_value(lcg: &LcgParams, s: u64, steps: u64) -> u64 {
    let ft = lcg.init_value(s);
    let forged = lcg.jump_value(ft, steps);
    (lcg.a() ^ forged) & lcg.mask()
}

/// Recovers the private seed `p` from a signature on `t`.
pub fn recover_seed(sig: &PrngOtsSignature, t: u64) -> Result<u64> {
    check_w(sig.w)?;
    check_t(t, sig.w)?;
    recover_seed_raw(&sig.params, sig.value, t)
}

/// Recovers `p` given `S = a ^ f_t(p)`; no bound on `t` is needed.
pub fn recover_seed_raw(lcg: &LcgParams, s: u64, t: u64) -> Result<u64> {
    let ft = lcg.init_value(s);
    let f0 = lcg.jump_back_value(ft, t)?;
    Ok((lcg.a() ^ f0) & lcg.mask())
}

/// Recovers `p` from the public value `P = f_{2^w-1}(p)` alone.
pub fn recover_seed_from_public(lcg: &LcgParams, public: u64, w: u32) -> Result<u64> {
    check_w(w)?;
    let f0 = lcg.jump_back_value(public & lcg.mask(), chain_len(w))?;
    Ok((lcg.a() ^ f0) & lcg.mask())
}

/// Scheme-generic entry point for [`recover_seed`]; WOTS signatures are
/// rejected since hash chains cannot be walked backwards.
pub fn recover_seed_from_signature(sig: &Signature) -> Result<u64> {
    match (&sig.params, &sig.value) {
        (SchemeParams::PrngOts { lcg, w }, OtsValue::Lcg(s)) => {
            check_t(sig.t, *w)?;
            recover_seed_raw(lcg, *s, sig.t)
        }
        _ => Err(Error::UnsupportedParams(
            "seed recovery applies to prng-ots signatures only".into(),
        )),
    }
}
