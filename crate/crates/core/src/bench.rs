//! Key generation, signing and verification timings.
//!
//! Each trial uses a fresh random key and a fresh random `t`. Timed sections
//! run on one thread against [`Instant`], after a few untimed warmup
//! iterations. Summaries are box-plot statistics: quartiles use linear
//! interpolation between order statistics.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::lcg::Registry;
use crate::prngots::ChainMode;
use crate::scheme::{Scheme, SchemeParams};

pub const DEFAULT_TRIALS: usize = 30;
pub const DEFAULT_WARMUP: usize = 3;

pub const SUMMARY_CSV_HEADER: &str =
    "scheme,paramset,operation,mode,min_ns,q1_ns,median_ns,q3_ns,max_ns,mean_ns,trials";
pub const RAW_CSV_HEADER: &str = "scheme,paramset,operation,mode,trial,duration_ns";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operation {
    Keygen,
    Sign,
    Verify,
}

impl Operation {
    pub const ALL: [Operation; 3] = [Operation::Keygen, Operation::Sign, Operation::Verify];

    pub fn name(self) -> &'static str {
        match self {
            Operation::Keygen => "keygen",
            Operation::Sign => "sign",
            Operation::Verify => "verify",
        }
    }
}

impl FromStr for Operation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Operation::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown operation `{s}`")))
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which chain modes to benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeSelection {
    #[default]
    Sequential,
    Jump,
    Both,
}

impl ModeSelection {
    pub fn modes(self) -> Vec<ChainMode> {
        match self {
            ModeSelection::Sequential => vec![ChainMode::Sequential],
            ModeSelection::Jump => vec![ChainMode::Jump],
            ModeSelection::Both => vec![ChainMode::Sequential, ChainMode::Jump],
        }
    }
}

impl FromStr for ModeSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(ModeSelection::Sequential),
            "jump" => Ok(ModeSelection::Jump),
            "both" => Ok(ModeSelection::Both),
            other => Err(Error::Config(format!(
                "mode must be sequential, jump or both, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimingRecord {
    pub scheme: Scheme,
    pub paramset: String,
    pub operation: Operation,
    pub mode: ChainMode,
    pub trial: usize,
    pub duration_ns: u64,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub groups: Vec<SchemeParams>,
    pub trials: usize,
    pub modes: ModeSelection,
    pub warmup: usize,
    /// Seeds the trial RNG; `None` draws from the OS.
    pub rng_seed: Option<u64>,
    /// Time groups on separate threads. Off by default.
    pub parallel: bool,
}

impl BenchConfig {
    /// Every `(scheme, paramset)` combination at depth `w`. A combination
    /// that does not fit together (e.g. `wots` with an LCG set) is an error.
    pub fn new(schemes: &[Scheme], paramsets: &[&str], w: u32, trials: usize) -> Result<Self> {
        Self::with_registry(schemes, paramsets, w, trials, &Registry::builtin())
    }

    pub fn with_registry(
        schemes: &[Scheme],
        paramsets: &[&str],
        w: u32,
        trials: usize,
        registry: &Registry,
    ) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if schemes.is_empty() || paramsets.is_empty() {
            return Err(Error::Config("need at least one scheme and one paramset".into()));
        }
        let mut groups = Vec::new();
        for &scheme in schemes {
            for &set in paramsets {
                let params = SchemeParams::resolve(scheme, set, w, registry).map_err(|e| match e {
                    Error::Domain(m) => Error::Config(m),
                    Error::Config(m) => Error::Config(format!("invalid combination: {m}")),
                    other => Error::Config(other.to_string()),
                })?;
                groups.push(params);
            }
        }
        Ok(BenchConfig {
            groups,
            trials,
            modes: ModeSelection::default(),
            warmup: DEFAULT_WARMUP,
            rng_seed: None,
            parallel: false,
        })
    }

    pub fn modes(mut self, modes: ModeSelection) -> Self {
        self.modes = modes;
        self
    }

    pub fn rng_seed(mut self, seed: u64) -> Self {
        self.rng_seed = Some(seed);
        self
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    /// `(group, mode)` pairs to time. Hash chains have no jump-ahead, so
    /// WOTS groups are timed once, sequentially.
    fn runs(&self) -> Vec<(usize, ChainMode)> {
        let mut runs = Vec::new();
        for (i, g) in self.groups.iter().enumerate() {
            match g.scheme() {
                Scheme::Wots => runs.push((i, ChainMode::Sequential)),
                Scheme::PrngOts => runs.extend(self.modes.modes().into_iter().map(|m| (i, m))),
            }
        }
        runs
    }
}

fn time<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = black_box(f());
    let ns = start.elapsed().as_nanos();
    (out, u64::try_from(ns).unwrap_or(u64::MAX))
}

fn run_group(
    params: &SchemeParams,
    mode: ChainMode,
    trials: usize,
    warmup: usize,
    rng: &mut StdRng,
) -> Result<Vec<TimingRecord>> {
    let chain = params.chain_len();
    let trial = |rng: &mut StdRng| -> Result<[u64; 3]> {
        let private = random_private(params, rng);
        let t = rng.gen_range(0..=chain);
        let (public, keygen_ns) = time(|| params.public_key(black_box(&private), mode));
        let public = public?;
        let (sig, sign_ns) = time(|| params.sign(black_box(&private), black_box(t), mode));
        let sig = sig?;
        let (ok, verify_ns) = time(|| params.verify(black_box(&public), &sig, t, mode));
        if !ok? {
            return Err(Error::Consistency(format!(
                "{} {} failed to verify its own signature",
                params.scheme(),
                params.paramset()
            )));
        }
        Ok([keygen_ns, sign_ns, verify_ns])
    };

    for _ in 0..warmup {
        trial(rng)?;
    }
    let mut records = Vec::with_capacity(trials * 3);
    for i in 0..trials {
        let ns = trial(rng)?;
        for (op, duration_ns) in Operation::ALL.into_iter().zip(ns) {
            records.push(TimingRecord {
                scheme: params.scheme(),
                paramset: params.paramset().to_string(),
                operation: op,
                mode,
                trial: i,
                duration_ns,
            });
        }
    }
    Ok(records)
}

fn random_private(params: &SchemeParams, rng: &mut StdRng) -> crate::scheme::OtsValue {
    use crate::hashchain::ChainValue;
    use crate::scheme::OtsValue;
    match params {
        SchemeParams::PrngOts { lcg, .. } => OtsValue::Lcg(rng.gen::<u64>() & lcg.mask()),
        SchemeParams::Wots(p) => {
            let mut bytes = vec![0u8; p.hash().output_len()];
            rng.fill(&mut bytes[..]);
            OtsValue::Chain(ChainValue::new(bytes, p.hash()).expect("digest-length buffer"))
        }
    }
}

/// Runs every configured group and returns the raw per-trial records.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<TimingRecord>> {
    if config.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let base_seed = config.rng_seed.unwrap_or_else(|| rand::rngs::OsRng.gen());
    let runs = config.runs();
    let rng_for = |idx: usize| StdRng::seed_from_u64(base_seed.wrapping_add(idx as u64));

    let results: Vec<Result<Vec<TimingRecord>>> = if config.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = runs
                .iter()
                .enumerate()
                .map(|(idx, &(g, mode))| {
                    let params = &config.groups[g];
                    scope.spawn(move || {
                        run_group(params, mode, config.trials, config.warmup, &mut rng_for(idx))
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("bench thread panicked"))
                .collect()
        })
    } else {
        runs.iter()
            .enumerate()
            .map(|(idx, &(g, mode))| {
                run_group(&config.groups[g], mode, config.trials, config.warmup, &mut rng_for(idx))
            })
            .collect()
    };

    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingSummary {
    pub scheme: Scheme,
    pub paramset: String,
    pub operation: Operation,
    pub mode: ChainMode,
    pub min: u64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: u64,
    pub mean: f64,
    pub trials: usize,
}

/// Linear interpolation between closest ranks on sorted data.
pub fn quantile(sorted: &[u64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] as f64 + (sorted[hi] as f64 - sorted[lo] as f64) * frac
}

impl TimingSummary {
    /// `None` for an empty slice.
    pub fn from_durations(
        scheme: Scheme,
        paramset: &str,
        operation: Operation,
        mode: ChainMode,
        durations: &[u64],
    ) -> Option<Self> {
        if durations.is_empty() {
            return None;
        }
        let mut sorted = durations.to_vec();
        sorted.sort_unstable();
        let sum: u128 = sorted.iter().map(|&d| d as u128).sum();
        Some(TimingSummary {
            scheme,
            paramset: paramset.to_string(),
            operation,
            mode,
            min: sorted[0],
            q1: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
            max: sorted[sorted.len() - 1],
            mean: sum as f64 / sorted.len() as f64,
            trials: sorted.len(),
        })
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.scheme,
            self.paramset,
            self.operation,
            self.mode,
            self.min,
            self.q1,
            self.median,
            self.q3,
            self.max,
            self.mean,
            self.trials
        )
    }
}

type GroupKey = (Scheme, String, Operation, ChainMode);

/// One summary per `(scheme, paramset, operation, mode)`, in order of first
/// appearance.
pub fn summarize(records: &[TimingRecord]) -> Vec<TimingSummary> {
    let mut order: Vec<GroupKey> = Vec::new();
    let mut groups: HashMap<GroupKey, Vec<u64>> = HashMap::new();
    for r in records {
        let key = (r.scheme, r.paramset.clone(), r.operation, r.mode);
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r.duration_ns);
    }
    order
        .into_iter()
        .filter_map(|key| {
            let (scheme, set, op, mode) = &key;
            TimingSummary::from_durations(*scheme, set, *op, *mode, &groups[&key])
        })
        .collect()
}

/// Warnings for configured groups that produced no records.
pub fn missing_groups(config: &BenchConfig, summaries: &[TimingSummary]) -> Vec<String> {
    let mut warnings = Vec::new();
    for (g, mode) in config.runs() {
        let params = &config.groups[g];
        for op in Operation::ALL {
            let present = summaries.iter().any(|s| {
                s.scheme == params.scheme()
                    && s.paramset == params.paramset()
                    && s.operation == op
                    && s.mode == mode
            });
            if !present {
                warnings.push(format!(
                    "warning: no records for {} {} {} {}; group omitted",
                    params.scheme(),
                    params.paramset(),
                    op,
                    mode
                ));
            }
        }
    }
    warnings
}

pub fn summary_csv(summaries: &[TimingSummary]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for s in summaries {
        out.push_str(&s.csv_row());
        out.push('\n');
    }
    out
}

pub fn raw_csv(records: &[TimingRecord]) -> String {
    let mut out = String::from(RAW_CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.scheme, r.paramset, r.operation, r.mode, r.trial, r.duration_ns
        );
    }
    out
}

/// Human-readable table in milliseconds.
pub fn summary_table(summaries: &[TimingSummary]) -> String {
    let ms = |ns: f64| ns / 1e6;
    let mut out = format!(
        "{:<9} {:<8} {:<7} {:<10} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>6}\n",
        "scheme", "paramset", "op", "mode", "min_ms", "q1_ms", "median_ms", "q3_ms", "max_ms",
        "mean_ms", "n"
    );
    for s in summaries {
        let _ = writeln!(
            out,
            "{:<9} {:<8} {:<7} {:<10} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>6}",
            s.scheme.name(),
            s.paramset,
            s.operation.name(),
            s.mode.name(),
            ms(s.min as f64),
            ms(s.q1),
            ms(s.median),
            ms(s.q3),
            ms(s.max as f64),
            ms(s.mean),
            s.trials
        );
    }
    out
}

/// The paramset with the lowest median for one scheme/operation/mode.
pub fn fastest_paramset<'s>(
    summaries: &'s [TimingSummary],
    scheme: Scheme,
    operation: Operation,
    mode: ChainMode,
) -> Option<&'s str> {
    summaries
        .iter()
        .filter(|s| s.scheme == scheme && s.operation == operation && s.mode == mode)
        .min_by(|a, b| a.median.total_cmp(&b.median))
        .map(|s| s.paramset.as_str())
}

pub fn find_summary<'s>(
    summaries: &'s [TimingSummary],
    paramset: &str,
    operation: Operation,
    mode: ChainMode,
) -> Option<&'s TimingSummary> {
    summaries
        .iter()
        .find(|s| s.paramset == paramset && s.operation == operation && s.mode == mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary_of(d: &[u64]) -> TimingSummary {
        TimingSummary::from_durations(
            Scheme::PrngOts,
            "vb",
            Operation::Sign,
            ChainMode::Sequential,
            d,
        )
        .unwrap()
    }

    #[test]
    fn single_record_is_degenerate() {
        let s = summary_of(&[42]);
        assert_eq!((s.min, s.max), (42, 42));
        assert_eq!((s.q1, s.median, s.q3, s.mean), (42.0, 42.0, 42.0, 42.0));
    }

    #[test]
    fn five_records() {
        let s = summary_of(&[5, 3, 1, 4, 2]);
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max), (1, 2.0, 3.0, 4.0, 5));
        assert_eq!(s.mean, 3.0);
    }

    #[test]
    fn interpolated_quartiles() {
        // positions 0.75, 1.5, 2.25 on [10, 20, 30, 40]
        let s = summary_of(&[40, 10, 30, 20]);
        assert_eq!((s.q1, s.median, s.q3), (17.5, 25.0, 32.5));
    }

    #[test]
    fn empty_is_none() {
        assert!(TimingSummary::from_durations(
            Scheme::Wots,
            "sha224",
            Operation::Keygen,
            ChainMode::Sequential,
            &[]
        )
        .is_none());
    }

    #[test]
    fn invalid_combination_is_config_error() {
        assert!(matches!(
            BenchConfig::new(&[Scheme::Wots], &["posix"], 8, 3),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            BenchConfig::new(&[Scheme::PrngOts], &["sha224"], 8, 3),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            BenchConfig::new(&[Scheme::PrngOts], &["vb"], 8, 0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            BenchConfig::new(&[Scheme::PrngOts], &["vb"], 0, 1),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn record_cardinality_and_grouping() {
        let cfg = BenchConfig::new(&[Scheme::PrngOts], &["vb", "gcc", "posix", "mmix"], 8, 30)
            .unwrap()
            .rng_seed(7);
        let records = run_bench(&cfg).unwrap();
        assert_eq!(records.len(), 360);
        let summaries = summarize(&records);
        assert_eq!(summaries.len(), 12);
        assert!(missing_groups(&cfg, &summaries).is_empty());
        for s in &summaries {
            assert_eq!(s.trials, 30);
            assert!(s.min as f64 <= s.q1 && s.q1 <= s.median && s.median <= s.q3);
            assert!(s.q3 <= s.max as f64);
        }
    }

    #[test]
    fn both_modes_and_wots() {
        let cfg = BenchConfig::new(&[Scheme::PrngOts], &["gcc"], 6, 4)
            .unwrap()
            .modes(ModeSelection::Both)
            .rng_seed(1);
        assert_eq!(run_bench(&cfg).unwrap().len(), 2 * 3 * 4);

        let cfg = BenchConfig::new(&[Scheme::Wots], &["sha224"], 6, 4)
            .unwrap()
            .modes(ModeSelection::Both)
            .parallel(true);
        let recs = run_bench(&cfg).unwrap();
        assert_eq!(recs.len(), 12);
        assert!(recs.iter().all(|r| r.mode == ChainMode::Sequential));
    }

    #[test]
    fn parallel_matches_serial_shape() {
        let base = BenchConfig::new(&[Scheme::PrngOts], &["vb", "mmix"], 6, 5)
            .unwrap()
            .rng_seed(3);
        let a = run_bench(&base.clone()).unwrap();
        let b = run_bench(&base.parallel(true)).unwrap();
        let key = |r: &TimingRecord| (r.paramset.clone(), r.operation, r.trial);
        assert_eq!(a.iter().map(key).collect::<Vec<_>>(), b.iter().map(key).collect::<Vec<_>>());
    }

    #[test]
    fn csv_shapes() {
        let recs = vec![TimingRecord {
            scheme: Scheme::PrngOts,
            paramset: "gcc".into(),
            operation: Operation::Verify,
            mode: ChainMode::Jump,
            trial: 0,
            duration_ns: 1500,
        }];
        assert_eq!(raw_csv(&recs), format!("{RAW_CSV_HEADER}\nprng-ots,gcc,verify,jump,0,1500\n"));
        assert_eq!(
            summary_csv(&summarize(&recs)),
            format!("{SUMMARY_CSV_HEADER}\nprng-ots,gcc,verify,jump,1500,1500,1500,1500,1500,1500,1\n")
        );
        assert!(summary_table(&summarize(&recs)).contains(" 0.001500 "));
    }
}
