//! Command-line parsing and validation into a [`CliConfig`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsdc_core::adversary::EveStrategy;
use qsdc_core::channel::{ChannelTopology, NoiseConfig, NoisePlacement};
use qsdc_core::qcore::Qubit;
use qsdc_core::session::{Message, SessionConfig};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qsdc-sim",
    version,
    about = "Simulate entanglement-based super dense coding direct communication"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Monte Carlo campaign over a message.
    Run(RunArgs),
    /// Compute exact success and error probabilities by enumeration.
    Oracle(OracleArgs),
    /// Print the carrier/block encoding tables generated by the codec.
    Tables,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EveArg {
    None,
    #[value(name = "single-1")]
    Single1,
    #[value(name = "single-2")]
    Single2,
    SynchronizedNaive,
    SynchronizedBellAware,
}

impl From<EveArg> for EveStrategy {
    fn from(arg: EveArg) -> Self {
        match arg {
            EveArg::None => EveStrategy::NoEve,
            EveArg::Single1 => EveStrategy::SingleChannel(Qubit::One),
            EveArg::Single2 => EveStrategy::SingleChannel(Qubit::Two),
            EveArg::SynchronizedNaive => EveStrategy::SynchronizedNaive,
            EveArg::SynchronizedBellAware => EveStrategy::SynchronizedBellAware,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

fn probability(raw: &str) -> Result<f64, String> {
    let p: f64 = raw.parse().map_err(|_| format!("'{raw}' is not a number"))?;
    if !(0.0..=1.0).contains(&p) {
        return Err(format!("probability {p} is outside [0, 1]"));
    }
    Ok(p)
}

#[derive(Debug, Args)]
struct NoiseArgs {
    /// Flip probability applied to all four flips unless overridden.
    #[arg(long, default_value_t = 0.0, value_parser = probability)]
    p: f64,
    /// Bit-flip probability on channel 1.
    #[arg(long, value_parser = probability)]
    px1: Option<f64>,
    /// Phase-flip probability on channel 1.
    #[arg(long, value_parser = probability)]
    pz1: Option<f64>,
    /// Bit-flip probability on channel 2.
    #[arg(long, value_parser = probability)]
    px2: Option<f64>,
    /// Phase-flip probability on channel 2.
    #[arg(long, value_parser = probability)]
    pz2: Option<f64>,
    /// Apply channel noise after Eve's taps instead of before.
    #[arg(long)]
    noise_after_taps: bool,
}

impl NoiseArgs {
    fn config(&self) -> Result<NoiseConfig, CliError> {
        NoiseConfig::new(
            self.px1.unwrap_or(self.p),
            self.pz1.unwrap_or(self.p),
            self.px2.unwrap_or(self.p),
            self.pz2.unwrap_or(self.p),
        )
        .map_err(|e| CliError::Usage(e.to_string()))
    }

    fn placement(&self) -> NoisePlacement {
        if self.noise_after_taps {
            NoisePlacement::AfterTaps
        } else {
            NoisePlacement::BeforeTaps
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the result document to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Message as a bit string ("0110") or hex ("0x6") together with --bits.
    #[arg(long)]
    message: String,
    /// Bit length of a hex message.
    #[arg(long)]
    bits: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long, value_enum, default_value_t = EveArg::None)]
    eve: EveArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, value_enum, default_value_t = EveArg::None)]
    eve: EveArg,
    /// Message to evaluate; block-specific rates are reported for it.
    #[arg(long, conflicts_with = "length")]
    message: Option<String>,
    /// Bit length of a hex message.
    #[arg(long, requires = "message")]
    bits: Option<usize>,
    /// Message length in bits for uniformly random messages.
    #[arg(long)]
    length: Option<usize>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub session: SessionConfig,
    pub output: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub topology: ChannelTopology,
    pub noise: NoiseConfig,
    /// A specific message, or `None` for uniformly random blocks.
    pub message: Option<Message>,
    pub message_bits: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliConfig {
    Run(RunConfig),
    Oracle(OracleConfig),
    Tables,
}

/// Parses a bit string, or a `0x` hex literal written as an `bits`-bit
/// big-endian value.
pub fn parse_message(text: &str, bits: Option<usize>) -> Result<Message, CliError> {
    let usage = |msg: String| CliError::Usage(msg);
    let message = if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        let n = bits.ok_or_else(|| usage("a hex message needs --bits <N>".into()))?;
        let mut all = Vec::with_capacity(hex.len() * 4);
        for ch in hex.chars() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| usage(format!("'{ch}' is not a hex digit")))?;
            all.extend((0..4).rev().map(|k| ((nibble >> k) & 1) as u8));
        }
        if n > all.len() {
            // left-pad with zeros up to the requested width
            let mut padded = vec![0u8; n - all.len()];
            padded.extend(all);
            all = padded;
        }
        let cut = all.len() - n;
        if all[..cut].contains(&1) {
            return Err(usage(format!("hex message {text} does not fit in {n} bits")));
        }
        Message::new(all.split_off(cut))
    } else {
        if bits.is_some_and(|n| n != text.len()) {
            return Err(usage(format!(
                "--bits {} does not match the {}-bit message",
                bits.unwrap_or_default(),
                text.len()
            )));
        }
        Message::from_bit_str(text)
    };
    message.map_err(|e| usage(e.to_string()))
}

/// Parses `argv` (including the program name). Help and version requests
/// come back as [`CliError::Clap`] with exit code 0.
pub fn parse_args<I, T>(argv: I) -> Result<CliConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    match cli.command {
        Command::Tables => Ok(CliConfig::Tables),
        Command::Run(args) => {
            let message = parse_message(&args.message, args.bits)?;
            let topology = ChannelTopology::new(args.eve.into(), args.noise.placement());
            let session = SessionConfig::new(message, args.noise.config()?, topology, args.seed, args.trials)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(CliConfig::Run(RunConfig {
                session,
                output: args.out.output,
                format: args.out.format,
            }))
        }
        Command::Oracle(args) => {
            let message = args
                .message
                .as_deref()
                .map(|m| parse_message(m, args.bits))
                .transpose()?;
            let message_bits = match (&message, args.length) {
                (Some(m), _) => m.len(),
                (None, Some(n)) if n % 2 != 0 => {
                    return Err(CliError::Usage(format!(
                        "message has odd length {n}; messages are sent in 2-bit blocks"
                    )))
                }
                (None, Some(n)) => n,
                (None, None) => 0,
            };
            Ok(CliConfig::Oracle(OracleConfig {
                topology: ChannelTopology::new(args.eve.into(), args.noise.placement()),
                noise: args.noise.config()?,
                message,
                message_bits,
                output: args.out.output,
                format: args.out.format,
            }))
        }
    }
}
