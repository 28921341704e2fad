//! Key and signature files, and durable one-time-use enforcement.
//!
//! Files are UTF-8, one `name=value` field per line, LF endings, `#` starts
//! a comment line. Fields appear in a fixed order. A private PRNG-OTS key:
//!
//! ```text
//! scheme=prng-ots
//! paramset=posix
//! w=24
//! p=0x000013579BDE
//! P=0xE9694A840B48
//! used=false
//! created=2026-01-01T00:00:00Z
//! ```
//!
//! WOTS keys use `r=`/`R=` and `paramset` names the digest. Public files
//! omit the private value and the `used` flag. Signature files carry
//! `scheme`, `paramset`, `w`, `t` (decimal) and `S=` or `zeta=`.
//!
//! The `used` flag lives in the private key file. Losing or rolling back
//! that file is as bad as leaking the key: the store can no longer tell
//! that a signature was already issued.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::lcg::Registry;
use crate::prngots::ChainMode;
use crate::scheme::{OtsValue, Scheme, SchemeParams, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    Private,
    Public,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyRecord {
    pub params: SchemeParams,
    /// `p` or `r`; `None` for public records.
    pub private: Option<OtsValue>,
    /// `P` or `R`.
    pub public: OtsValue,
    pub used: bool,
    /// ISO-8601, informational only.
    pub created: String,
}

pub fn now_iso8601() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

impl KeyRecord {
    /// Derives the public value from `private` and stamps the current time.
    pub fn from_private(params: SchemeParams, private: OtsValue) -> Result<Self> {
        let public = params.public_key(&private, ChainMode::Jump)?;
        Ok(KeyRecord {
            params,
            private: Some(private),
            public,
            used: false,
            created: now_iso8601(),
        })
    }

    pub fn generate(params: SchemeParams) -> Result<Self> {
        let private = params.random_private();
        Self::from_private(params, private)
    }

    pub fn visibility(&self) -> Visibility {
        if self.private.is_some() {
            Visibility::Private
        } else {
            Visibility::Public
        }
    }

    pub fn to_public(&self) -> KeyRecord {
        KeyRecord {
            private: None,
            used: false,
            ..self.clone()
        }
    }

    pub fn public_hex(&self) -> String {
        self.params.format_value(&self.public)
    }

    /// Fails when the stored public value is not the one `private` derives.
    pub fn check_consistency(&self) -> Result<()> {
        if let Some(private) = &self.private {
            let expected = self.params.public_key(private, ChainMode::Jump)?;
            if expected != self.public {
                return Err(Error::Consistency(format!(
                    "stored {}={} but the private value derives {}",
                    self.params.scheme().public_field(),
                    self.public_hex(),
                    self.params.format_value(&expected)
                )));
            }
        }
        Ok(())
    }

    pub fn to_text(&self, visibility: Visibility) -> String {
        let scheme = self.params.scheme();
        let mut out = String::new();
        push(&mut out, "scheme", scheme.name());
        push(&mut out, "paramset", self.params.paramset());
        push(&mut out, "w", &self.params.w().to_string());
        if visibility == Visibility::Private {
            if let Some(private) = &self.private {
                push(&mut out, scheme.private_field(), &self.params.format_value(private));
            }
        }
        push(&mut out, scheme.public_field(), &self.public_hex());
        if visibility == Visibility::Private && self.private.is_some() {
            push(&mut out, "used", if self.used { "true" } else { "false" });
        }
        push(&mut out, "created", &self.created);
        out
    }

    pub fn parse(text: &str, registry: &Registry) -> Result<Self> {
        let fields = Fields::parse(text)?;
        let scheme_line = fields.line_of("scheme");
        let scheme: Scheme = fields
            .require("scheme")?
            .parse()
            .map_err(|e: Error| parse_err(scheme_line, e.to_string()))?;
        let params = fields.scheme_params(scheme, registry)?;

        let private_field = scheme.private_field();
        let public_field = scheme.public_field();
        let is_private = fields.get(private_field).is_some();
        let order: &[&str] = if is_private {
            &["scheme", "paramset", "w", private_field, public_field, "used", "created"]
        } else {
            &["scheme", "paramset", "w", public_field, "created"]
        };
        fields.expect_order(order)?;

        let private = match fields.get(private_field) {
            Some(s) => Some(fields.value(&params, private_field, s)?),
            None => None,
        };
        let public = fields.value(&params, public_field, fields.require(public_field)?)?;
        let used = match fields.get("used") {
            Some("true") => true,
            Some("false") => false,
            Some(other) => {
                return Err(parse_err(
                    fields.line_of("used"),
                    format!("used must be true or false, got `{other}`"),
                ))
            }
            None => false,
        };
        let record = KeyRecord {
            params,
            private,
            public,
            used,
            created: fields.require("created")?.to_string(),
        };
        record.check_consistency()?;
        Ok(record)
    }
}

fn push(out: &mut String, key: &str, value: &str) {
    out.push_str(key);
    out.push('=');
    out.push_str(value);
    out.push('\n');
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Ordered `name=value` lines with their line numbers.
struct Fields<'a> {
    entries: Vec<(usize, &'a str, &'a str)>,
}

impl<'a> Fields<'a> {
    fn parse(text: &'a str) -> Result<Self> {
        let mut entries: Vec<(usize, &str, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(line_no, format!("expected name=value, got `{line}`")))?;
            let key = key.trim();
            if entries.iter().any(|(_, k, _)| *k == key) {
                return Err(parse_err(line_no, format!("duplicate field `{key}`")));
            }
            entries.push((line_no, key, value.trim()));
        }
        Ok(Fields { entries })
    }

    fn get(&self, key: &str) -> Option<&'a str> {
        self.entries
            .iter()
            .find(|(_, k, _)| *k == key)
            .map(|(_, _, v)| *v)
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries
            .iter()
            .find(|(_, k, _)| *k == key)
            .map(|(l, _, _)| *l)
            .unwrap_or(0)
    }

    fn last_line(&self) -> usize {
        self.entries.last().map(|(l, _, _)| *l).unwrap_or(0)
    }

    fn require(&self, key: &str) -> Result<&'a str> {
        self.get(key)
            .ok_or_else(|| parse_err(self.last_line(), format!("missing field `{key}`")))
    }

    fn expect_order(&self, order: &[&str]) -> Result<()> {
        for (i, (line, key, _)) in self.entries.iter().enumerate() {
            match order.get(i) {
                Some(expected) if expected == key => {}
                Some(expected) if order.contains(key) => {
                    return Err(parse_err(
                        *line,
                        format!("field `{key}` out of order, expected `{expected}`"),
                    ))
                }
                _ if order.contains(key) => {
                    return Err(parse_err(*line, format!("field `{key}` out of order")))
                }
                _ => return Err(parse_err(*line, format!("unknown field `{key}`"))),
            }
        }
        if let Some(missing) = order.get(self.entries.len()) {
            return Err(parse_err(self.last_line(), format!("missing field `{missing}`")));
        }
        Ok(())
    }

    fn scheme_params(&self, scheme: Scheme, registry: &Registry) -> Result<SchemeParams> {
        let w_line = self.line_of("w");
        let w: u32 = self
            .require("w")?
            .parse()
            .map_err(|_| parse_err(w_line, "w must be a decimal integer"))?;
        let paramset = self.require("paramset")?;
        SchemeParams::resolve(scheme, paramset, w, registry).map_err(|e| match e {
            Error::Domain(msg) => parse_err(w_line, msg),
            other => parse_err(self.line_of("paramset"), other.to_string()),
        })
    }

    fn value(&self, params: &SchemeParams, key: &str, s: &str) -> Result<OtsValue> {
        params
            .parse_value(s)
            .map_err(|e| parse_err(self.line_of(key), format!("{key}: {e}")))
    }
}

/// Writes `contents` to a temporary file beside `path` and renames it over
/// `path`, so readers see either the old or the new file.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn save_key(record: &KeyRecord, path: impl AsRef<Path>, visibility: Visibility) -> Result<()> {
    write_atomic(path.as_ref(), &record.to_text(visibility))
}

pub fn load_key(path: impl AsRef<Path>) -> Result<KeyRecord> {
    load_key_with(path, &Registry::builtin())
}

pub fn load_key_with(path: impl AsRef<Path>, registry: &Registry) -> Result<KeyRecord> {
    KeyRecord::parse(&fs::read_to_string(path)?, registry)
}

fn lock_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".lock");
    path.with_file_name(name)
}

/// Exclusive advisory lock on a sidecar `<key>.lock` file, held until drop.
/// The sidecar is left in place; deleting it would let a late opener lock a
/// different inode than an earlier one.
struct KeyLock(File);

impl KeyLock {
    fn acquire(path: &Path) -> Result<Self> {
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(lock_path(path))?;
        file.lock()?;
        Ok(KeyLock(file))
    }
}

impl Drop for KeyLock {
    fn drop(&mut self) {
        let _ = self.0.unlock();
    }
}

/// Flips `used` to true in the private key file at `path` and returns the
/// record as it was before the flip. Exactly one of any number of
/// concurrent callers succeeds; the rest get [`Error::KeyReused`].
pub fn mark_used(path: impl AsRef<Path>) -> Result<KeyRecord> {
    mark_used_with(path, &Registry::builtin())
}

pub fn mark_used_with(path: impl AsRef<Path>, registry: &Registry) -> Result<KeyRecord> {
    Ok(mark_used_checked(path.as_ref(), registry, |_| Ok(()))?.0)
}

/// `check` runs under the lock on the freshly loaded record; an error from
/// it leaves the key untouched.
fn mark_used_checked<T>(
    path: &Path,
    registry: &Registry,
    check: impl FnOnce(&KeyRecord) -> Result<T>,
) -> Result<(KeyRecord, T)> {
    let _lock = KeyLock::acquire(path)?;
    let mut record = load_key_with(path, registry)?;
    if record.private.is_none() {
        return Err(Error::Config(format!(
            "{} is a public key file; signing needs the private key",
            path.display()
        )));
    }
    if record.used {
        return Err(Error::KeyReused(path.to_path_buf()));
    }
    let checked = check(&record)?;
    record.used = true;
    save_key(&record, path, Visibility::Private)?;
    record.used = false;
    Ok((record, checked))
}

/// What a store-mediated signature signs.
#[derive(Debug, Clone, Copy)]
pub enum SignInput<'m> {
    /// An already normalized value.
    T(u64),
    /// Raw message bytes, normalized with the key's parameters.
    Message(&'m [u8]),
}

/// Signs `t` with the key stored at `path`. The key is marked used on disk
/// before the signature is computed.
pub fn sign_with_store(path: impl AsRef<Path>, t: u64) -> Result<Signature> {
    sign_with_store_in(path, SignInput::T(t), &Registry::builtin(), ChainMode::Jump)
}

pub fn sign_with_store_in(
    path: impl AsRef<Path>,
    input: SignInput<'_>,
    registry: &Registry,
    mode: ChainMode,
) -> Result<Signature> {
    let (record, t) = mark_used_checked(path.as_ref(), registry, |r| {
        let t = match input {
            SignInput::T(t) => t,
            SignInput::Message(m) => r.params.normalize(m)?,
        };
        r.params.check_t(t)?;
        Ok(t)
    })?;
    let private = record.private.as_ref().expect("mark_used checks for a private key");
    let value = record.params.sign(private, t, mode)?;
    Ok(Signature {
        params: record.params,
        t,
        value,
    })
}

/// Bit widths (private, public, signature) for a parameter set. LCG sets are
/// looked up in the built-in registry; for WOTS the paramset is a digest.
pub fn serialized_lengths(paramset: &str, scheme: Scheme) -> Result<(u32, u32, u32)> {
    Ok(SchemeParams::resolve(scheme, paramset, 1, &Registry::builtin())?.lengths())
}

impl Signature {
    pub fn to_text(&self) -> String {
        let scheme = self.params.scheme();
        let mut out = String::new();
        push(&mut out, "scheme", scheme.name());
        push(&mut out, "paramset", self.params.paramset());
        push(&mut out, "w", &self.params.w().to_string());
        push(&mut out, "t", &self.t.to_string());
        push(&mut out, scheme.signature_field(), &self.to_hex());
        out
    }

    pub fn parse(text: &str, registry: &Registry) -> Result<Self> {
        let fields = Fields::parse(text)?;
        let scheme_line = fields.line_of("scheme");
        let scheme: Scheme = fields
            .require("scheme")?
            .parse()
            .map_err(|e: Error| parse_err(scheme_line, e.to_string()))?;
        let params = fields.scheme_params(scheme, registry)?;
        let sig_field = scheme.signature_field();
        fields.expect_order(&["scheme", "paramset", "w", "t", sig_field])?;
        let t_line = fields.line_of("t");
        let t: u64 = fields
            .require("t")?
            .parse()
            .map_err(|_| parse_err(t_line, "t must be a decimal integer"))?;
        params
            .check_t(t)
            .map_err(|e| parse_err(t_line, e.to_string()))?;
        let value = fields.value(&params, sig_field, fields.require(sig_field)?)?;
        Ok(Signature { params, t, value })
    }
}

pub fn save_signature(sig: &Signature, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &sig.to_text())
}

pub fn load_signature(path: impl AsRef<Path>) -> Result<Signature> {
    load_signature_with(path, &Registry::builtin())
}

pub fn load_signature_with(path: impl AsRef<Path>, registry: &Registry) -> Result<Signature> {
    Signature::parse(&fs::read_to_string(path)?, registry)
}
