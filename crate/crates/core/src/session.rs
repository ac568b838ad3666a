//! Protocol orchestration and the Monte Carlo campaign runner.
//!
//! Every trial owns four ChaCha8 substreams keyed by `(master_seed,
//! trial_index)`: carrier choice, channel noise, Eve, and Bob's decoding
//! measurement. Switching Eve on or off therefore never shifts the carrier or
//! noise draws of a trial, and results do not depend on thread scheduling.

use std::ops::Add;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::adversary::{blind_guess, guess_distribution, intercept_branches, EveObservation};
use crate::channel::{
    enumerate_noise_outcomes, transmit, ChannelTopology, FlipRecord, NoiseConfig, NoisePlacement,
};
use crate::codec::{decode, decode_distribution, encode, select_encoding_op, BellKind, MessageBlock};
use crate::error::{Error, Result};
use crate::qcore::{GateLabel, TwoQubitState};

/// Published per-block success claim for the synchronized attack.
pub const PAPER_CLAIM_BLOCK_SUCCESS: f64 = 1.0 / 16.0;

/// Published whole-message claim `(1/4)^N` for an `N`-bit message.
pub fn paper_claim_message_success(message_bits: usize) -> f64 {
    0.25_f64.powi(message_bits as i32)
}

/// An even-length bit string.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Message {
    bits: Vec<u8>,
}

impl Message {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some((position, &value)) = bits.iter().enumerate().find(|(_, &b)| b > 1) {
            return Err(Error::InvalidBit { position, value });
        }
        if !bits.len().is_multiple_of(2) {
            return Err(Error::OddLength(bits.len()));
        }
        Ok(Message { bits })
    }

    /// Parses a string of `0` and `1` characters.
    pub fn from_bit_str(text: &str) -> Result<Self> {
        let bits = text
            .bytes()
            .enumerate()
            .map(|(position, ch)| match ch {
                b'0' => Ok(0),
                b'1' => Ok(1),
                other => Err(Error::InvalidBit {
                    position,
                    value: other,
                }),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn blocks(&self) -> Vec<MessageBlock> {
        self.bits
            .chunks_exact(2)
            .map(|pair| MessageBlock::from_bits(pair[0] == 1, pair[1] == 1))
            .collect()
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionConfig {
    pub message: Message,
    pub noise: NoiseConfig,
    pub topology: ChannelTopology,
    pub master_seed: u64,
    pub trials: u64,
}

impl SessionConfig {
    pub fn new(
        message: Message,
        noise: NoiseConfig,
        topology: ChannelTopology,
        master_seed: u64,
        trials: u64,
    ) -> Result<Self> {
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        Ok(SessionConfig {
            message,
            noise,
            topology,
            master_seed,
            trials,
        })
    }
}

/// Independent random substreams for one trial.
#[derive(Clone, Debug)]
pub struct TrialStreams {
    pub carrier: ChaCha8Rng,
    pub noise: ChaCha8Rng,
    pub eve: ChaCha8Rng,
    pub decode: ChaCha8Rng,
}

impl TrialStreams {
    pub fn new(master_seed: u64, trial: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&trial.to_le_bytes());
        let stream = |id: u64| {
            let mut rng = ChaCha8Rng::from_seed(key);
            rng.set_stream(id);
            rng
        };
        TrialStreams {
            carrier: stream(0),
            noise: stream(1),
            eve: stream(2),
            decode: stream(3),
        }
    }
}

/// Alice draws a uniform carrier and encodes `block` on it.
pub fn alice_send_block<R: Rng + ?Sized>(
    block: MessageBlock,
    rng: &mut R,
) -> (BellKind, TwoQubitState) {
    let carrier = BellKind::ALL[rng.random_range(0..4)];
    (carrier, encode(carrier, block))
}

/// Everything that happened to one block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockTrace {
    pub carrier: BellKind,
    pub block: MessageBlock,
    pub gate: GateLabel,
    pub flips: FlipRecord,
    pub eve_obs: EveObservation,
    /// Eve's guess; a uniform blind guess when she has no two-channel result.
    pub eve_guess: MessageBlock,
    /// State handed to Bob's decoder.
    pub delivered: TwoQubitState,
    pub decoded: MessageBlock,
}

pub fn run_block(
    block: MessageBlock,
    noise: &NoiseConfig,
    topology: &ChannelTopology,
    streams: &mut TrialStreams,
) -> BlockTrace {
    let (carrier, sent) = alice_send_block(block, &mut streams.carrier);
    let tx = transmit(&sent, topology, noise, &mut streams.noise, &mut streams.eve);
    let eve_guess = match tx.intercept.guess {
        Some(g) => g,
        None => blind_guess(&mut streams.eve),
    };
    BlockTrace {
        carrier,
        block,
        gate: select_encoding_op(carrier, block),
        flips: tx.flips,
        eve_obs: tx.intercept,
        eve_guess,
        delivered: tx.delivered,
        decoded: decode(&tx.delivered, &mut streams.decode),
    }
}

/// Full per-block traces of one trial.
pub fn trace_trial(cfg: &SessionConfig, trial: u64) -> Vec<BlockTrace> {
    let mut streams = TrialStreams::new(cfg.master_seed, trial);
    cfg.message
        .blocks()
        .into_iter()
        .map(|b| run_block(b, &cfg.noise, &cfg.topology, &mut streams))
        .collect()
}

/// Integer tallies; summing them is order-insensitive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrialCounts {
    pub trials: u64,
    pub blocks: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    pub eve_block_hits: u64,
    pub eve_message_hits: u64,
}

impl Add for TrialCounts {
    type Output = TrialCounts;

    fn add(self, rhs: TrialCounts) -> TrialCounts {
        TrialCounts {
            trials: self.trials + rhs.trials,
            blocks: self.blocks + rhs.blocks,
            block_errors: self.block_errors + rhs.block_errors,
            bit_errors: self.bit_errors + rhs.bit_errors,
            eve_block_hits: self.eve_block_hits + rhs.eve_block_hits,
            eve_message_hits: self.eve_message_hits + rhs.eve_message_hits,
        }
    }
}

pub fn count_trial(cfg: &SessionConfig, trial: u64) -> TrialCounts {
    let traces = trace_trial(cfg, trial);
    let mut counts = TrialCounts {
        trials: 1,
        blocks: traces.len() as u64,
        ..Default::default()
    };
    for t in &traces {
        counts.block_errors += (t.decoded != t.block) as u64;
        counts.bit_errors += t.decoded.bit_distance(t.block) as u64;
        counts.eve_block_hits += (t.eve_guess == t.block) as u64;
    }
    counts.eve_message_hits = (counts.eve_block_hits == counts.blocks) as u64;
    counts
}

/// Exact per-block rates for a noise configuration and topology, by
/// enumerating carriers, flips and measurement outcomes.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExactRates {
    pub block_error: f64,
    pub bit_error: f64,
    pub eve_block_success: f64,
}

/// Exact rates for one specific block, averaged over uniform carriers.
pub fn exact_rates_for_block(
    block: MessageBlock,
    noise: &NoiseConfig,
    topology: &ChannelTopology,
) -> ExactRates {
    let mut rates = ExactRates::default();
    let strat = topology.eve;
    let truth = block.value() as usize;
    let mut tally = |weight: f64, guess: [f64; 4], delivered: &TwoQubitState| {
        let decoded = decode_distribution(delivered);
        rates.eve_block_success += weight * guess[truth];
        rates.block_error += weight * (1.0 - decoded[truth]);
        for (k, p) in decoded.iter().enumerate() {
            let bits = block.bit_distance(MessageBlock::ALL[k]) as f64;
            rates.bit_error += weight * p * bits / 2.0;
        }
    };
    for carrier in BellKind::ALL {
        let sent = encode(carrier, block);
        match topology.placement {
            NoisePlacement::BeforeTaps => {
                for n in enumerate_noise_outcomes(&sent, noise) {
                    for br in intercept_branches(&n.state, strat) {
                        let w = n.probability * br.probability / 4.0;
                        tally(w, guess_distribution(strat, &br), &br.post);
                    }
                }
            }
            NoisePlacement::AfterTaps => {
                for br in intercept_branches(&sent, strat) {
                    for n in enumerate_noise_outcomes(&br.post, noise) {
                        let w = n.probability * br.probability / 4.0;
                        tally(w, guess_distribution(strat, &br), &n.state);
                    }
                }
            }
        }
    }
    // summation round-off can leave values a few ulps outside [0, 1]
    rates.block_error = rates.block_error.clamp(0.0, 1.0);
    rates.bit_error = rates.bit_error.clamp(0.0, 1.0);
    rates.eve_block_success = rates.eve_block_success.clamp(0.0, 1.0);
    rates
}

/// Exact rates averaged over uniform blocks.
pub fn exact_block_rates(noise: &NoiseConfig, topology: &ChannelTopology) -> ExactRates {
    average_rates(&MessageBlock::ALL, noise, topology)
}

fn average_rates(blocks: &[MessageBlock], noise: &NoiseConfig, topology: &ChannelTopology) -> ExactRates {
    let mut avg = ExactRates::default();
    if blocks.is_empty() {
        return avg;
    }
    let n = blocks.len() as f64;
    for &b in blocks {
        let r = exact_rates_for_block(b, noise, topology);
        avg.block_error += r.block_error / n;
        avg.bit_error += r.bit_error / n;
        avg.eve_block_success += r.eve_block_success / n;
    }
    avg
}

/// Exact probability that Eve recovers every block of this particular message.
pub fn exact_message_rates(
    message: &Message,
    noise: &NoiseConfig,
    topology: &ChannelTopology,
) -> (ExactRates, f64) {
    let blocks = message.blocks();
    let whole = blocks
        .iter()
        .map(|&b| exact_rates_for_block(b, noise, topology).eve_block_success)
        .product();
    (average_rates(&blocks, noise, topology), whole)
}

/// Aggregated Monte Carlo results with exact and published reference values.
#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub counts: TrialCounts,
    pub trials: u64,
    pub blocks_per_trial: u64,
    pub message_bits: u64,
    pub block_error_rate: f64,
    pub bit_error_rate: f64,
    pub eve_block_success_rate: f64,
    pub eve_message_success_rate: f64,
    pub oracle_block_error_rate: f64,
    pub oracle_bit_error_rate: f64,
    /// Exact Eve block success for this message's blocks under the
    /// configured noise and placement.
    pub oracle_block_success: f64,
    /// Exact probability that Eve recovers this whole message.
    pub oracle_message_success: f64,
    pub paper_claim_block_success: f64,
    pub paper_claim_message_success: f64,
}

impl RunStats {
    fn from_counts(cfg: &SessionConfig, counts: TrialCounts) -> Self {
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let (exact, whole_message) = exact_message_rates(&cfg.message, &cfg.noise, &cfg.topology);
        let blocks_per_trial = cfg.message.len() as u64 / 2;
        RunStats {
            counts,
            trials: counts.trials,
            blocks_per_trial,
            message_bits: cfg.message.len() as u64,
            block_error_rate: ratio(counts.block_errors, counts.blocks),
            bit_error_rate: ratio(counts.bit_errors, 2 * counts.blocks),
            eve_block_success_rate: ratio(counts.eve_block_hits, counts.blocks),
            eve_message_success_rate: ratio(counts.eve_message_hits, counts.trials),
            oracle_block_error_rate: exact.block_error,
            oracle_bit_error_rate: exact.bit_error,
            oracle_block_success: exact.eve_block_success,
            oracle_message_success: whole_message,
            paper_claim_block_success: PAPER_CLAIM_BLOCK_SUCCESS,
            paper_claim_message_success: paper_claim_message_success(cfg.message.len()),
        }
    }
}

/// Runs every trial on the global rayon pool.
pub fn run_monte_carlo(cfg: &SessionConfig) -> RunStats {
    let counts = (0..cfg.trials)
        .into_par_iter()
        .map(|t| count_trial(cfg, t))
        .reduce(TrialCounts::default, |a, b| a + b);
    RunStats::from_counts(cfg, counts)
}

/// Runs on a dedicated pool of `threads` workers (or rayon's default).
pub fn run_monte_carlo_with_threads(cfg: &SessionConfig, threads: Option<usize>) -> Result<RunStats> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    Ok(pool.install(|| run_monte_carlo(cfg)))
}
