//! The `prng-ots` command line.
//!
//! Exit codes: 0 success or signature accepted, 1 signature rejected,
//! 2 usage error or malformed input, 3 refused because the one-time key was
//! already used.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit;
use crate::bench::{self, BenchConfig, ModeSelection, Operation};
use crate::error::{Error, Result};
use crate::hexfmt;
use crate::keystore::{self, KeyRecord, SignInput, Visibility};
use crate::lcg::{LcgParams, Registry};
use crate::prngots::ChainMode;
use crate::scheme::{OtsValue, Scheme, SchemeParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REUSE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "prng-ots", version, about = "LCG-based and hash-chain one-time signatures")]
struct Cli {
    /// Print intermediate chain values.
    #[arg(long, global = true)]
    verbose: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    #[value(name = "prng-ots")]
    PrngOts,
    Wots,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::PrngOts => Scheme::PrngOts,
            SchemeArg::Wots => Scheme::Wots,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Sequential,
    Jump,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a one-time key pair.
    Keygen(KeygenArgs),
    /// Sign with a private key file; the key is marked used.
    Sign(SignArgs),
    /// Verify a signature against a public key file.
    Verify(VerifyArgs),
    /// Print LCG outputs f_1..f_count for a seed.
    Rand(RandArgs),
    /// List the built-in LCG parameter sets and value widths.
    Params,
    /// Time keygen, sign and verify.
    Bench(BenchArgs),
    /// Forgery and key-recovery demonstrations.
    #[command(subcommand)]
    Audit(AuditCommand),
}

#[derive(Debug, Args)]
struct KeygenArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// LCG parameter set (prng-ots, default posix) or digest (wots, default sha224).
    #[arg(long)]
    params: Option<String>,
    /// Chain depth exponent; the chain has 2^w - 1 links.
    #[arg(long)]
    w: u32,
    /// Deterministic private value instead of OS randomness.
    #[arg(long)]
    seed_hex: Option<String>,
    /// Output stem: writes STEM.key (private) and STEM.pub.
    #[arg(long, default_value = "ots")]
    out: PathBuf,
    /// Walk the chain one step at a time.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("message").required(true).args(["t", "message_file"])))]
struct SignArgs {
    /// Private key file.
    #[arg(long)]
    key: PathBuf,
    /// Already-normalized message value, decimal.
    #[arg(long)]
    t: Option<u64>,
    /// Message to hash and normalize.
    #[arg(long)]
    message_file: Option<PathBuf>,
    /// Signature file to write (default: key path with extension `sig`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("signature").required(true).args(["sig_file", "sig"])))]
#[command(group(clap::ArgGroup::new("message").args(["t", "message_file"])))]
struct VerifyArgs {
    /// Public (or private) key file.
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long)]
    sig_file: Option<PathBuf>,
    /// Signature value in hex.
    #[arg(long)]
    sig: Option<String>,
    /// Defaults to the `t` stored in --sig-file.
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    message_file: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
struct RandArgs {
    #[arg(long)]
    params: String,
    /// Seed, decimal or 0x-prefixed hex.
    #[arg(long)]
    seed: String,
    #[arg(long)]
    count: u64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "prng-ots")]
    schemes: Vec<SchemeArg>,
    #[arg(long, value_delimiter = ',', default_value = "vb,gcc,posix,mmix")]
    params: Vec<String>,
    #[arg(long, default_value_t = 24)]
    w: u32,
    #[arg(long, default_value_t = bench::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Sequential)]
    mode: ModeArg,
    /// Write the summary CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write every timing record here.
    #[arg(long)]
    raw_csv: Option<PathBuf>,
    /// Time parameter groups on separate threads.
    #[arg(long)]
    parallel: bool,
    /// Seed for the trial RNG (keys and t values).
    #[arg(long)]
    rng_seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum AuditCommand {
    /// Derive a signature for a larger t from an existing one.
    ForgeForward(ForgeArgs),
    /// Walk an LCG chain backwards to the private seed.
    RecoverSeed(RecoverArgs),
}

#[derive(Debug, Args)]
struct ForgeArgs {
    #[arg(long)]
    sig_file: PathBuf,
    #[arg(long)]
    t_target: u64,
    /// Check the forgery against this public key.
    #[arg(long = "pub")]
    public: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["sig_file", "from_public"])))]
struct RecoverArgs {
    #[arg(long)]
    sig_file: Option<PathBuf>,
    /// Public key file; compared against the recovered seed, or used as
    /// the only input with --from-public.
    #[arg(long = "pub")]
    public: Option<PathBuf>,
    /// Recover from the public key alone.
    #[arg(long, requires = "public")]
    from_public: bool,
}

struct Ctx<'a> {
    verbose: bool,
    format: Format,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    registry: Registry,
}

fn mode(sequential: bool) -> ChainMode {
    if sequential {
        ChainMode::Sequential
    } else {
        ChainMode::Jump
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let mut ctx = Ctx {
        verbose: cli.verbose,
        format: cli.format,
        out,
        err,
        registry: Registry::builtin(),
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            match e {
                Error::KeyReused(_) => EXIT_REUSE,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(command: Command, ctx: &mut Ctx<'_>) -> Result<i32> {
    match command {
        Command::Keygen(a) => cmd_keygen(a, ctx),
        Command::Sign(a) => cmd_sign(a, ctx),
        Command::Verify(a) => cmd_verify(a, ctx),
        Command::Rand(a) => cmd_rand(a, ctx),
        Command::Params => cmd_params(ctx),
        Command::Bench(a) => cmd_bench(a, ctx),
        Command::Audit(AuditCommand::ForgeForward(a)) => cmd_forge(a, ctx),
        Command::Audit(AuditCommand::RecoverSeed(a)) => cmd_recover(a, ctx),
    }
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(ext);
    path.with_file_name(name)
}

fn cmd_keygen(a: KeygenArgs, ctx: &mut Ctx<'_>) -> Result<i32> {
    let scheme: Scheme = a.scheme.into();
    let paramset = a.params.unwrap_or_else(|| match scheme {
        Scheme::PrngOts => "posix".into(),
        Scheme::Wots => "sha224".into(),
    });
    let params = SchemeParams::resolve(scheme, &paramset, a.w, &ctx.registry)?;
    let private = match &a.seed_hex {
        Some(hex) => params.parse_value(hex)?,
        None => params.random_private(),
    };
    let public = params.public_key(&private, mode(a.sequential))?;
    let record = KeyRecord {
        params,
        private: Some(private),
        public,
        used: false,
        created: keystore::now_iso8601(),
    };
    let priv_path = with_extension(&a.out, "key");
    let pub_path = with_extension(&a.out, "pub");
    keystore::save_key(&record, &priv_path, Visibility::Private)?;
    keystore::save_key(&record, &pub_path, Visibility::Public)?;
    let field = scheme.public_field();
    if ctx.verbose {
        let p = record.private.as_ref().expect("just generated");
        writeln!(ctx.err, "{}={}", scheme.private_field(), record.params.format_value(p))?;
        if let SchemeParams::PrngOts { lcg, .. } = &record.params {
            let f0 = lcg.init_value(p.as_lcg().expect("lcg key"));
            writeln!(ctx.err, "f_0={}", lcg.format_value(f0))?;
        }
        writeln!(ctx.err, "private key: {}", priv_path.display())?;
        writeln!(ctx.err, "public key:  {}", pub_path.display())?;
    }
    writeln!(ctx.out, "{field}={}", record.public_hex())?;
    Ok(EXIT_OK)
}

fn read_message_t(params: &SchemeParams, path: &Path) -> Result<u64> {
    params.normalize(&fs::read(path)?)
}

fn cmd_sign(a: SignArgs, ctx: &mut Ctx<'_>) -> Result<i32> {
    let message;
    let input = match (a.t, &a.message_file) {
        (Some(t), _) => SignInput::T(t),
        (None, Some(path)) => {
            message = fs::read(path)?;
            SignInput::Message(&message)
        }
        (None, None) => unreachable!("clap enforces the message group"),
    };
    let sig = keystore::sign_with_store_in(&a.key, input, &ctx.registry, mode(a.sequential))?;
    let t = sig.t;
    let out_path = a.out.unwrap_or_else(|| a.key.with_extension("sig"));
    keystore::save_signature(&sig, &out_path)?;
    if t == 0 {
        writeln!(
            ctx.err,
            "WARNING: t = 0 makes the signature equal to the private key; \
             anyone can now forge signatures for every t"
        )?;
    }
    if ctx.verbose {
        writeln!(ctx.err, "t={t}")?;
        if let (SchemeParams::PrngOts { lcg, .. }, OtsValue::Lcg(s)) = (&sig.params, &sig.value) {
            writeln!(ctx.err, "f_t={}", lcg.format_value(lcg.init_value(*s)))?;
        }
        writeln!(ctx.err, "signature file: {}", out_path.display())?;
    }
    writeln!(ctx.out, "{}={}", sig.params.scheme().signature_field(), sig.to_hex())?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, ctx: &mut Ctx<'_>) -> Result<i32> {
    let key = keystore::load_key_with(&a.public, &ctx.registry)?;
    let params = key.params.clone();
    let (value, stored_t) = match (&a.sig_file, &a.sig) {
        (Some(path), _) => {
            let sig = keystore::load_signature_with(path, &ctx.registry)?;
            if sig.params != params {
                return Err(Error::Config(format!(
                    "signature is for {} {} w={}, key is {} {} w={}",
                    sig.params.scheme(),
                    sig.params.paramset(),
                    sig.params.w(),
                    params.scheme(),
                    params.paramset(),
                    params.w()
                )));
            }
            (sig.value, Some(sig.t))
        }
        (None, Some(hex)) => (params.parse_value(hex)?, None),
        (None, None) => unreachable!("clap enforces the signature group"),
    };
    let t = match (a.t, &a.message_file, stored_t) {
        (Some(t), _, _) => t,
        (None, Some(path), _) => read_message_t(&params, path)?,
        (None, None, Some(t)) => t,
        (None, None, None) => {
            return Err(Error::Config("--sig needs --t or --message-file".into()))
        }
    };
    let m = mode(a.sequential);
    let recomputed = params.recompute(&value, t, m)?;
    let accepted = recomputed == key.public;
    if ctx.verbose {
        let scheme = params.scheme();
        writeln!(ctx.out, "t={t}")?;
        match (&params, &value) {
            (SchemeParams::PrngOts { lcg, .. }, OtsValue::Lcg(s)) => {
                writeln!(ctx.out, "S={}", lcg.format_value(*s))?;
                writeln!(ctx.out, "f_0(S)={}", lcg.format_value(lcg.init_value(*s)))?;
                writeln!(ctx.out, "V={}", params.format_value(&recomputed))?;
            }
            _ => {
                writeln!(ctx.out, "zeta={}", params.format_value(&value))?;
                writeln!(ctx.out, "xi={}", params.format_value(&recomputed))?;
            }
        }
        writeln!(ctx.out, "{}={}", scheme.public_field(), key.public_hex())?;
    }
    if accepted {
        writeln!(ctx.out, "accept")?;
        Ok(EXIT_OK)
    } else {
        writeln!(ctx.out, "reject")?;
        Ok(EXIT_REJECT)
    }
}

fn cmd_rand(a: RandArgs, ctx: &mut Ctx<'_>) -> Result<i32> {
    let lcg = ctx.registry.get(&a.params)?.clone();
    let seed = hexfmt::parse_dec_or_hex(&a.seed)?;
    let state = lcg.seed(seed);
    if ctx.verbose {
        writeln!(ctx.err, "f_0={state}")?;
    }
    for v in state.iter().take(usize::try_from(a.count).unwrap_or(usize::MAX)) {
        writeln!(ctx.out, "{}", lcg.format_value(v))?;
    }
    Ok(EXIT_OK)
}

fn cmd_params(ctx: &mut Ctx<'_>) -> Result<i32> {
    let sets: Vec<LcgParams> = ctx
        .registry
        .names()
        .filter_map(|n| ctx.registry.get(n).ok().cloned())
        .collect();
    if ctx.format == Format::Csv {
        writeln!(ctx.out, "name,a,c,k,private_bits,public_bits,signature_bits")?;
    }
    for p in LcgParams::all_builtin()
        .into_iter()
        .cloned()
        .chain(sets.into_iter().filter(|p| LcgParams::builtin(p.name()).is_err()))
    {
        let (sk, pk, sig) = keystore::serialized_lengths(p.name(), Scheme::PrngOts)
            .unwrap_or_else(|_| (p.k(), p.k(), p.k()));
        match ctx.format {
            Format::Csv => writeln!(ctx.out, "{},{},{},{},{sk},{pk},{sig}", p.name(), p.a(), p.c(), p.k())?,
            Format::Text => writeln!(
                ctx.out,
                "{:<6} a={:<20} c={:<20} m=2^{:<3} key/sig bits={sk}/{pk}/{sig}",
                p.name(),
                p.a(),
                p.c(),
                p.k()
            )?,
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bench(a: BenchArgs, ctx: &mut Ctx<'_>) -> Result<i32> {
    let schemes: Vec<Scheme> = a.schemes.iter().map(|&s| s.into()).collect();
    let sets: Vec<&str> = a.params.iter().map(String::as_str).collect();
    let modes = match a.mode {
        ModeArg::Sequential => ModeSelection::Sequential,
        ModeArg::Jump => ModeSelection::Jump,
        ModeArg::Both => ModeSelection::Both,
    };
    let mut config = BenchConfig::with_registry(&schemes, &sets, a.w, a.trials, &ctx.registry)?
        .modes(modes)
        .parallel(a.parallel);
    if let Some(seed) = a.rng_seed {
        config = config.rng_seed(seed);
    }
    let records = bench::run_bench(&config)?;
    let summaries = bench::summarize(&records);
    for w in bench::missing_groups(&config, &summaries) {
        writeln!(ctx.err, "{w}")?;
    }
    if let Some(path) = &a.csv {
        fs::write(path, bench::summary_csv(&summaries))?;
    }
    if let Some(path) = &a.raw_csv {
        fs::write(path, bench::raw_csv(&records))?;
    }
    match ctx.format {
        Format::Csv => write!(ctx.out, "{}", bench::summary_csv(&summaries))?,
        Format::Text => {
            write!(ctx.out, "{}", bench::summary_table(&summaries))?;
            for m in modes.modes() {
                for op in Operation::ALL {
                    if let Some(best) = bench::fastest_paramset(&summaries, Scheme::PrngOts, op, m) {
                        writeln!(ctx.out, "fastest {op} median ({m}): {best}")?;
                    }
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_forge(a: ForgeArgs, ctx: &mut Ctx<'_>) -> Result<i32> {
    writeln!(ctx.err, "{}", audit::WARNING_BANNER)?;
    let sig = keystore::load_signature_with(&a.sig_file, &ctx.registry)?;
    let forged = audit::forge_forward(&sig, a.t_target)?;
    if ctx.verbose {
        writeln!(ctx.err, "from t={} to t={}", sig.t, forged.t)?;
    }
    if let Some(path) = &a.out {
        keystore::save_signature(&forged, path)?;
    }
    writeln!(ctx.out, "t={}", forged.t)?;
    writeln!(ctx.out, "{}={}", forged.params.scheme().signature_field(), forged.to_hex())?;
    if let Some(path) = &a.public {
        let key = keystore::load_key_with(path, &ctx.registry)?;
        let ok = key.params == forged.params && forged.verify(&key.public)?;
        writeln!(ctx.out, "forged signature {}", if ok { "verifies" } else { "does not verify" })?;
    }
    Ok(EXIT_OK)
}

fn cmd_recover(a: RecoverArgs, ctx: &mut Ctx<'_>) -> Result<i32> {
    writeln!(ctx.err, "{}", audit::WARNING_BANNER)?;
    let key = match &a.public {
        Some(path) => Some(keystore::load_key_with(path, &ctx.registry)?),
        None => None,
    };
    let (params, p) = if a.from_public {
        let key = key.as_ref().expect("clap requires --pub");
        let SchemeParams::PrngOts { lcg, w } = &key.params else {
            return Err(Error::UnsupportedParams(
                "seed recovery applies to prng-ots keys only".into(),
            ));
        };
        let public = key.public.as_lcg().expect("prng-ots key");
        (key.params.clone(), audit::recover_seed_from_public(lcg, public, *w)?)
    } else {
        let path = a.sig_file.as_ref().expect("clap requires a source");
        let sig = keystore::load_signature_with(path, &ctx.registry)?;
        let p = audit::recover_seed_from_signature(&sig)?;
        (sig.params, p)
    };
    writeln!(ctx.out, "p={}", params.format_value(&OtsValue::Lcg(p)))?;
    if let Some(key) = key {
        let derived = params.public_key(&OtsValue::Lcg(p), ChainMode::Jump)?;
        let matches = key.params == params && derived == key.public;
        writeln!(
            ctx.out,
            "recovered seed {} the public key",
            if matches { "reproduces" } else { "does not reproduce" }
        )?;
    }
    Ok(EXIT_OK)
}
