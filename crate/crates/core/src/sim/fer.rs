//! Frame-error-rate simulation.
//!
//! Trial `t` draws its message and noise from [`trial_rng`]`(seed, t)`, so
//! results do not depend on how trials are split across worker threads, and
//! a longer run with the same seed extends a shorter one.

use std::io::Write;
use std::thread;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::list::{ListDecoder, ListOptions};
use crate::sc::{Mode, ScDecoder};
use crate::sim::channel::{random_bits, trial_rng, Channel};
use crate::transform::CodeSpec;

/// Which decoder a simulation runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderConfig {
    Sc(Mode),
    List { l: usize, opts: ListOptions },
}

impl DecoderConfig {
    /// List size reported in result tables (1 for SC).
    pub fn list_size(&self) -> usize {
        match self {
            DecoderConfig::Sc(_) => 1,
            DecoderConfig::List { l, .. } => *l,
        }
    }

    /// Short name reported in result tables.
    pub fn label(&self) -> String {
        match self {
            DecoderConfig::Sc(mode) => mode.to_string(),
            DecoderConfig::List { .. } => "list".into(),
        }
    }
}

enum Decoder {
    Sc(ScDecoder),
    List(ListDecoder, ListOptions),
}

impl Decoder {
    fn new(n: usize, config: DecoderConfig) -> Result<Self> {
        Ok(match config {
            DecoderConfig::Sc(mode) => Decoder::Sc(ScDecoder::new(n, mode)?),
            DecoderConfig::List { l, opts } => Decoder::List(ListDecoder::new(n, l)?, opts),
        })
    }

    /// Decoded message and counted operations.
    fn decode(&mut self, spec: &CodeSpec, y: &[f64]) -> Result<(Vec<u8>, u64)> {
        Ok(match self {
            Decoder::Sc(d) => {
                let out = d.decode(spec, y)?;
                (out.message, out.ops.total())
            }
            Decoder::List(d, opts) => {
                let out = d.decode(spec, y, *opts)?;
                (out.message, out.ops.total())
            }
        })
    }
}

/// Outcome of a simulation run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    pub errors: u64,
    pub fer: f64,
    /// Mean counted operations per decode.
    pub avg_ops: f64,
    pub wall_ms: f64,
    /// Indices of the trials that ended in a frame error, ascending.
    pub error_trials: Vec<u64>,
}

struct Shard {
    ops: u64,
    error_trials: Vec<u64>,
}

fn run_shard(
    spec: &CodeSpec,
    channel: Channel,
    config: DecoderConfig,
    trials: std::ops::Range<u64>,
    seed: u64,
) -> Result<Shard> {
    let mut decoder = Decoder::new(spec.n(), config)?;
    let mut shard = Shard {
        ops: 0,
        error_trials: Vec::new(),
    };
    for trial in trials {
        let mut rng = trial_rng(seed, trial);
        let message = random_bits(&mut rng, spec.k());
        let y = channel.transmit(&spec.encode_message(&message)?, &mut rng);
        let (decoded, ops) = decoder.decode(spec, &y)?;
        shard.ops += ops;
        if decoded != message {
            shard.error_trials.push(trial);
        }
    }
    Ok(shard)
}

/// Simulates `trials` frames on `workers` threads (0 picks the available
/// parallelism).
pub fn run_fer(
    spec: &CodeSpec,
    channel: Channel,
    config: DecoderConfig,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<SimResult> {
    let start = Instant::now();
    let workers = match workers {
        0 => thread::available_parallelism().map_or(1, |w| w.get()),
        w => w,
    }
    .clamp(1, trials.max(1) as usize) as u64;
    let per = trials.div_ceil(workers);
    let shards: Vec<Result<Shard>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let range = (w * per).min(trials)..((w + 1) * per).min(trials);
                scope.spawn(move || run_shard(spec, channel, config, range, seed))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)))
            .collect()
    });
    let mut ops = 0u64;
    let mut error_trials = Vec::new();
    for shard in shards {
        let shard = shard?;
        ops += shard.ops;
        error_trials.extend(shard.error_trials);
    }
    let errors = error_trials.len() as u64;
    let denom = trials.max(1) as f64;
    Ok(SimResult {
        trials,
        errors,
        fer: errors as f64 / denom,
        avg_ops: ops as f64 / denom,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        error_trials,
    })
}

/// One line of a simulation CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FerRow {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub mode: String,
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub fer: f64,
    pub avg_ops: f64,
    pub wall_ms: f64,
}

impl FerRow {
    /// Row for `result`; `wall_ms` is written as 0 unless `timing` is set,
    /// keeping the CSV reproducible byte for byte.
    pub fn new(
        spec: &CodeSpec,
        config: DecoderConfig,
        snr_db: f64,
        result: &SimResult,
        timing: bool,
    ) -> Self {
        Self {
            n: spec.n(),
            k: spec.k(),
            l: config.list_size(),
            mode: config.label(),
            snr_db,
            trials: result.trials,
            errors: result.errors,
            fer: result.fer,
            avg_ops: result.avg_ops,
            wall_ms: if timing { result.wall_ms } else { 0.0 },
        }
    }
}

/// Writes rows (with a header) as CSV.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(Error::from)
}
