use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cvpolar::bits::{format_binary, format_hex, parse_bits, parse_llrs};
use cvpolar::sim::channel::Channel;
use cvpolar::sim::construct::mc_construct;
use cvpolar::sim::fer::{run_fer, write_csv, DecoderConfig, FerRow};
use cvpolar::sim::frozen::{format_frozen, read_frozen};
use cvpolar::sim::report::opcount_report;
use cvpolar::{decode_list, decode_sc, encode, CodeSpec, Error, ListOptions, Mode, Result};

#[derive(Parser)]
#[command(
    name = "cvpolar",
    version,
    about = "Convolutional polar code encoder, decoders and simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CodeArgs {
    /// Frozen-set file ("n k" on line 1, frozen indices on line 2)
    #[arg(long)]
    frozen: PathBuf,
}

#[derive(Args)]
struct OutputArgs {
    /// Print bits as a 0/1 string instead of hex
    #[arg(long)]
    binary: bool,
}

impl OutputArgs {
    fn format(&self, bits: &[u8]) -> String {
        if self.binary {
            format_binary(bits)
        } else {
            format_hex(bits)
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Encode a message (with --frozen) or a full input vector
    Encode {
        /// Frozen-set file; without it BITS is the whole input vector
        #[arg(long)]
        frozen: Option<PathBuf>,
        /// Length of the input vector when no frozen-set file is given
        #[arg(long, required_unless_present = "frozen")]
        n: Option<usize>,
        /// Bits as a 0/1 string or 0x-prefixed hex
        bits: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decode channel LLRs with successive cancellation
    DecodeSc {
        #[command(flatten)]
        code: CodeArgs,
        /// Decoder schedule
        #[arg(long, default_value = "eff")]
        mode: Mode,
        /// LLR file (comma- or whitespace-separated); standard input if omitted
        llrs: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decode channel LLRs with the list decoder
    DecodeList {
        #[command(flatten)]
        code: CodeArgs,
        /// List size
        #[arg(short = 'l', long = "list", default_value_t = 8)]
        l: usize,
        /// Skip scoring of leading frozen phases
        #[arg(long)]
        skip_head: bool,
        /// Finish with SC decisions after the last frozen phase
        #[arg(long)]
        sc_tail: bool,
        /// LLR file (comma- or whitespace-separated); standard input if omitted
        llrs: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Frame-error-rate simulation over AWGN, one CSV row per (Eb/N0, list size)
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        /// Eb/N0 values in dB
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        snr: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// List sizes; SC decoding with --mode if omitted
        #[arg(short = 'l', long = "list", value_delimiter = ',')]
        l: Vec<usize>,
        /// SC schedule
        #[arg(long, default_value = "eff")]
        mode: Mode,
        #[arg(long)]
        skip_head: bool,
        #[arg(long)]
        sc_tail: bool,
        /// Worker threads (0 = all cores); results do not depend on it
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Report wall-clock time (makes the output non-reproducible)
        #[arg(long)]
        timing: bool,
    },
    /// Counted operations per SC decode for n = min-n, 2·min-n, ..., max-n
    Opcount {
        #[arg(long, default_value_t = 16)]
        min_n: usize,
        #[arg(long, default_value_t = 4096)]
        max_n: usize,
        #[arg(long, default_value = "eff")]
        mode: Mode,
    },
    /// Monte-Carlo code construction; prints a frozen-set file
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Design Eb/N0 in dB
        #[arg(long, allow_negative_numbers = true)]
        design_snr: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => Ok(fs::read_to_string(p)?),
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn read_llrs(path: Option<&Path>, n: usize) -> Result<Vec<f64>> {
    let y = parse_llrs(&read_input(path)?)?;
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: y.len(),
        });
    }
    Ok(y)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode {
            frozen,
            n,
            bits,
            output,
        } => {
            let codeword = match frozen {
                Some(path) => {
                    let spec = read_frozen(&path)?;
                    spec.encode_message(&parse_bits(&bits, spec.k())?)?
                }
                None => encode(&parse_bits(
                    &bits,
                    n.expect("clap requires n without frozen"),
                )?)?,
            };
            println!("{}", output.format(&codeword));
        }
        Command::DecodeSc {
            code,
            mode,
            llrs,
            output,
        } => {
            let spec = read_frozen(&code.frozen)?;
            let y = read_llrs(llrs.as_deref(), spec.n())?;
            let out = decode_sc(&spec, &y, mode)?;
            println!("{}", output.format(&out.message));
            eprintln!("ops={}", out.ops.total());
        }
        Command::DecodeList {
            code,
            l,
            skip_head,
            sc_tail,
            llrs,
            output,
        } => {
            let spec = read_frozen(&code.frozen)?;
            let y = read_llrs(llrs.as_deref(), spec.n())?;
            let out = decode_list(&spec, &y, l, ListOptions { skip_head, sc_tail })?;
            println!("{}", output.format(&out.message));
            eprintln!("score={} ops={}", out.score, out.ops.total());
        }
        Command::Simulate {
            code,
            snr,
            trials,
            seed,
            l,
            mode,
            skip_head,
            sc_tail,
            workers,
            timing,
        } => {
            let spec = read_frozen(&code.frozen)?;
            let rate = spec.k() as f64 / spec.n() as f64;
            let opts = ListOptions { skip_head, sc_tail };
            let configs: Vec<DecoderConfig> = if l.is_empty() {
                vec![DecoderConfig::Sc(mode)]
            } else {
                l.iter().map(|&l| DecoderConfig::List { l, opts }).collect()
            };
            let mut rows = Vec::new();
            for &snr_db in &snr {
                let channel = Channel::awgn_ebn0(snr_db, rate)?;
                for &config in &configs {
                    let result = run_fer(&spec, channel, config, trials, seed, workers)?;
                    rows.push(FerRow::new(&spec, config, snr_db, &result, timing));
                }
            }
            write_csv(io::stdout().lock(), &rows)?;
        }
        Command::Opcount { min_n, max_n, mode } => {
            write_csv(io::stdout().lock(), &opcount_report(min_n, max_n, mode)?)?;
        }
        Command::Construct {
            n,
            k,
            design_snr,
            trials,
            seed,
        } => {
            let Channel::Awgn { sigma } = Channel::awgn_ebn0(design_snr, k as f64 / n as f64)?
            else {
                unreachable!("awgn_ebn0 builds an AWGN channel")
            };
            let spec: CodeSpec = mc_construct(n, k, sigma, trials, seed)?;
            print!("{}", format_frozen(&spec));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
