//! Linear congruential generators over power-of-two moduli.
//!
//! A generator is the affine map `x -> a*x + c (mod 2^k)`. Seeds enter
//! through the XOR mix `f_0(s) = a ^ s (mod 2^k)`, the same initialization
//! `java.util.Random` uses, and it is applied to every parameter set.
//!
//! All products are formed exactly in 128 bits and then reduced, so every
//! `k <= 64` is handled without overflow or rounding.
//!
//! The four built-in sets are:
//!
//! | name    | a                   | c                   | k  |
//! |---------|---------------------|---------------------|----|
//! | `vb`    | 16598013            | 12820163            | 24 |
//! | `gcc`   | 1664525             | 1013904223          | 31 |
//! | `posix` | 25214903917         | 11                  | 48 |
//! | `mmix`  | 6364136223846793005 | 1442695040888963407 | 64 |
//!
//! Every built-in multiplier is odd, which makes `a` a unit mod `2^k`. A
//! single step therefore has exactly one preimage and [`LcgState::step_inverse`]
//! computes it.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::hexfmt;

pub const MIN_BITS: u32 = 8;
pub const MAX_BITS: u32 = 64;

/// Names of the built-in parameter sets, in table order.
pub const BUILTIN_NAMES: [&str; 4] = ["vb", "gcc", "posix", "mmix"];

/// One LCG parameter set: multiplier, increment and modulus exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LcgParams {
    name: Cow<'static, str>,
    a: u64,
    c: u64,
    k: u32,
}

pub static VB: LcgParams = LcgParams::builtin_unchecked("vb", 16598013, 12820163, 24);
pub static GCC: LcgParams = LcgParams::builtin_unchecked("gcc", 1664525, 1013904223, 31);
pub static POSIX: LcgParams = LcgParams::builtin_unchecked("posix", 25214903917, 11, 48);
pub static MMIX: LcgParams = LcgParams::builtin_unchecked(
    "mmix",
    6364136223846793005,
    1442695040888963407,
    64,
);

impl LcgParams {
    const fn builtin_unchecked(name: &'static str, a: u64, c: u64, k: u32) -> Self {
        LcgParams {
            name: Cow::Borrowed(name),
            a,
            c,
            k,
        }
    }

    /// Builds a custom parameter set. Requires `8 <= k <= 64`, `0 < a < 2^k`
    /// and `c < 2^k`. Even multipliers are accepted but cannot be inverted.
    pub fn new(name: impl Into<String>, a: u64, c: u64, k: u32) -> Result<Self> {
        let name = name.into();
        if !(MIN_BITS..=MAX_BITS).contains(&k) {
            return Err(Error::InvalidParams(format!(
                "{name}: modulus exponent {k} outside [{MIN_BITS}, {MAX_BITS}]"
            )));
        }
        let mask = mask_for(k);
        if a == 0 || a > mask {
            return Err(Error::InvalidParams(format!(
                "{name}: multiplier must satisfy 0 < a < 2^{k}"
            )));
        }
        if c > mask {
            return Err(Error::InvalidParams(format!(
                "{name}: increment must satisfy c < 2^{k}"
            )));
        }
        Ok(LcgParams {
            name: Cow::Owned(name),
            a,
            c,
            k,
        })
    }

    /// Looks up one of the built-in sets by name.
    pub fn builtin(name: &str) -> Result<&'static LcgParams> {
        match name {
            "vb" => Ok(&VB),
            "gcc" => Ok(&GCC),
            "posix" => Ok(&POSIX),
            "mmix" => Ok(&MMIX),
            other => Err(Error::UnknownParamSet(other.to_string())),
        }
    }

    pub fn all_builtin() -> [&'static LcgParams; 4] {
        [&VB, &GCC, &POSIX, &MMIX]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    /// Modulus exponent; the modulus is `2^k`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `2^k - 1`, the largest representable value.
    pub fn mask(&self) -> u64 {
        mask_for(self.k)
    }

    pub fn is_invertible(&self) -> bool {
        self.a & 1 == 1
    }

    /// Width in bits of every value this generator emits.
    pub fn value_bits(&self) -> u32 {
        self.k
    }

    pub fn format_value(&self, value: u64) -> String {
        hexfmt::format_int(value, self.k)
    }

    /// `f_0(s) = a ^ (s mod 2^k)`.
    #[inline]
    pub fn init_value(&self, seed: u64) -> u64 {
        (self.a ^ (seed & self.mask())) & self.mask()
    }

    /// `a*x + c (mod 2^k)` with the full 128-bit product.
    #[inline]
    pub fn step_value(&self, x: u64) -> u64 {
        let full = (self.a as u128) * (x as u128) + self.c as u128;
        (full as u64) & self.mask()
    }

    /// Applies [`step_value`](Self::step_value) `n` times, one step at a time.
    pub fn walk_value(&self, mut x: u64, n: u64) -> u64 {
        for _ in 0..n {
            x = self.step_value(x);
        }
        x
    }

    /// Same result as [`walk_value`](Self::walk_value), in `O(log n)`
    /// multiplications.
    pub fn jump_value(&self, x: u64, n: u64) -> u64 {
        Affine::new(self.a, self.c, self.k).pow(n).apply(x)
    }

    /// `a^-1 mod 2^k`, or `None` when `a` is even.
    pub fn multiplier_inverse(&self) -> Option<u64> {
        if !self.is_invertible() {
            return None;
        }
        // Newton lifting: each round doubles the number of correct low bits,
        // and a*a == 1 (mod 8) for odd a gives three to start from.
        let a = self.a;
        let mut inv = a;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(inv)));
        }
        Some(inv & self.mask())
    }

    fn inverse_map(&self) -> Result<Affine> {
        let inv = self.multiplier_inverse().ok_or_else(|| self.even_multiplier())?;
        // x = a^-1 * (y - c) = a^-1 * y + (-a^-1 * c)
        let shift = mul_mod(inv, self.c, self.k).wrapping_neg() & self.mask();
        Ok(Affine::new(inv, shift, self.k))
    }

    /// One step backwards: `a^-1 * (y - c) (mod 2^k)`.
    pub fn step_back_value(&self, y: u64) -> Result<u64> {
        Ok(self.inverse_map()?.apply(y))
    }

    /// `n` steps backwards in `O(log n)`.
    pub fn jump_back_value(&self, y: u64, n: u64) -> Result<u64> {
        Ok(self.inverse_map()?.pow(n).apply(y))
    }

    fn even_multiplier(&self) -> Error {
        Error::UnsupportedParams(format!(
            "{}: multiplier {} is even and has no inverse mod 2^{}",
            self.name, self.a, self.k
        ))
    }

    /// Seeds a generator state from `seed` (reduced mod `2^k` first).
    pub fn seed(&self, seed: u64) -> LcgState<'_> {
        LcgState {
            value: self.init_value(seed),
            params: self,
            index: 0,
        }
    }

    /// Wraps an arbitrary value as a state of this generator.
    pub fn state(&self, value: u64) -> Result<LcgState<'_>> {
        if value > self.mask() {
            return Err(Error::Domain(format!(
                "{value:#x} does not fit in {} bits",
                self.k
            )));
        }
        Ok(LcgState {
            value,
            params: self,
            index: 0,
        })
    }
}

impl fmt::Display for LcgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (a={}, c={}, m=2^{})", self.name, self.a, self.c, self.k)
    }
}

#[inline]
fn mask_for(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

#[inline]
fn mul_mod(x: u64, y: u64, k: u32) -> u64 {
    (((x as u128) * (y as u128)) as u64) & mask_for(k)
}

/// The map `x -> mul*x + add (mod 2^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Affine {
    mul: u64,
    add: u64,
    k: u32,
}

impl Affine {
    fn new(mul: u64, add: u64, k: u32) -> Self {
        Affine { mul, add, k }
    }

    fn identity(k: u32) -> Self {
        Affine::new(1, 0, k)
    }

    fn apply(&self, x: u64) -> u64 {
        let full = (self.mul as u128) * (x as u128) + self.add as u128;
        (full as u64) & mask_for(self.k)
    }

    /// `self ∘ inner`: apply `inner` first.
    fn after(&self, inner: &Affine) -> Affine {
        Affine::new(
            mul_mod(self.mul, inner.mul, self.k),
            self.apply(inner.add),
            self.k,
        )
    }

    fn pow(&self, mut n: u64) -> Affine {
        let mut acc = Affine::identity(self.k);
        let mut base = *self;
        while n > 0 {
            if n & 1 == 1 {
                acc = base.after(&acc);
            }
            base = base.after(&base);
            n >>= 1;
        }
        acc
    }
}

/// A generator value `f_n(s)` paired with its parameters.
///
/// `index` counts steps since seeding and is only informational: equality
/// compares the value and parameters.
#[derive(Debug, Clone, Copy)]
pub struct LcgState<'p> {
    value: u64,
    params: &'p LcgParams,
    index: u64,
}

impl PartialEq for LcgState<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.params == other.params
    }
}

impl Eq for LcgState<'_> {}

impl<'p> LcgState<'p> {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn params(&self) -> &'p LcgParams {
        self.params
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    #[must_use]
    pub fn step(&self) -> Self {
        LcgState {
            value: self.params.step_value(self.value),
            params: self.params,
            index: self.index.wrapping_add(1),
        }
    }

    #[must_use]
    pub fn jump(&self, n: u64) -> Self {
        LcgState {
            value: self.params.jump_value(self.value, n),
            params: self.params,
            index: self.index.wrapping_add(n),
        }
    }

    pub fn step_inverse(&self) -> Result<Self> {
        Ok(LcgState {
            value: self.params.step_back_value(self.value)?,
            params: self.params,
            index: self.index.saturating_sub(1),
        })
    }

    pub fn jump_back(&self, n: u64) -> Result<Self> {
        Ok(LcgState {
            value: self.params.jump_back_value(self.value, n)?,
            params: self.params,
            index: self.index.saturating_sub(n),
        })
    }

    /// Iterator over the following values `f_{n+1}, f_{n+2}, ...`.
    pub fn iter(&self) -> impl Iterator<Item = u64> + 'p {
        let params = self.params;
        std::iter::successors(Some(self.value), move |&x| Some(params.step_value(x))).skip(1)
    }
}

impl fmt::Display for LcgState<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.params.format_value(self.value))
    }
}

/// Name-indexed parameter sets: the four built-ins plus anything registered.
///
/// Registration takes `&mut self`, so a registry shared across threads is
/// frozen once it is behind a shared reference.
#[derive(Debug, Clone)]
pub struct Registry {
    sets: BTreeMap<String, LcgParams>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Registry {
    pub fn builtin() -> Self {
        let sets = LcgParams::all_builtin()
            .into_iter()
            .map(|p| {
                assert!(p.is_invertible(), "built-in set {} has even a", p.name());
                (p.name().to_string(), p.clone())
            })
            .collect();
        Registry { sets }
    }

    pub fn register(&mut self, params: LcgParams) -> Result<()> {
        if self.sets.contains_key(params.name()) {
            return Err(Error::InvalidParams(format!(
                "parameter set `{}` already registered",
                params.name()
            )));
        }
        self.sets.insert(params.name().to_string(), params);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&LcgParams> {
        self.sets
            .get(name)
            .ok_or_else(|| Error::UnknownParamSet(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.sets.keys().map(String::as_str)
    }
}
