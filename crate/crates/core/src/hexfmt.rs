//! Canonical hex rendering.
//!
//! Integers print as `0x` followed by uppercase digits, zero-padded to
//! `ceil(k / 4)` digits for a `k`-bit value. Parsing is case-insensitive and
//! the `0x` prefix is optional.

use crate::error::{Error, Result};

/// Number of hex digits used for a `bits`-wide value.
pub fn digits_for_bits(bits: u32) -> usize {
    bits.div_ceil(4) as usize
}

pub fn format_int(value: u64, bits: u32) -> String {
    format!("0x{:0width$X}", value, width = digits_for_bits(bits))
}

fn strip_prefix(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s)
}

pub fn parse_int(s: &str) -> Result<u64> {
    let digits = strip_prefix(s);
    if digits.is_empty() {
        return Err(Error::Hex(s.to_string()));
    }
    // leading zeros beyond 16 digits are fine as long as the value fits
    let significant = digits.trim_start_matches('0');
    if significant.len() > 16 {
        return Err(Error::Hex(s.to_string()));
    }
    if significant.is_empty() {
        return if digits.chars().all(|c| c == '0') {
            Ok(0)
        } else {
            Err(Error::Hex(s.to_string()))
        };
    }
    u64::from_str_radix(significant, 16).map_err(|_| Error::Hex(s.to_string()))
}

pub fn format_bytes(bytes: &[u8]) -> String {
    format!("0x{}", hex::encode_upper(bytes))
}

pub fn parse_bytes(s: &str) -> Result<Vec<u8>> {
    hex::decode(strip_prefix(s)).map_err(|_| Error::Hex(s.to_string()))
}

/// Parses either a decimal integer or a `0x`-prefixed hex integer.
pub fn parse_dec_or_hex(s: &str) -> Result<u64> {
    let t = s.trim();
    if t.starts_with("0x") || t.starts_with("0X") {
        parse_int(t)
    } else {
        t.parse::<u64>().map_err(|_| Error::Hex(s.to_string()))
    }
}
