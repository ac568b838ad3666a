//! Eavesdropper models and the exact enumeration oracle for her success.
//!
//! Eve measures in the computational basis only. A synchronized attack
//! measures both channels on the same transmission; the classical link is
//! only used to pair the two results.

use std::fmt;

use rand::Rng;

use crate::codec::{encode, BellKind, MessageBlock};
use crate::qcore::{measure_computational, measure_qubit, qubit_measurement_branches, Qubit, TwoQubitState};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EveStrategy {
    #[default]
    NoEve,
    SingleChannel(Qubit),
    /// Reports the measured bit pair verbatim as the block.
    SynchronizedNaive,
    /// Correlated results map to {00, 10}, anticorrelated to {01, 11};
    /// guesses uniformly within the pair.
    SynchronizedBellAware,
}

impl EveStrategy {
    pub const ALL: [EveStrategy; 5] = [
        EveStrategy::NoEve,
        EveStrategy::SingleChannel(Qubit::One),
        EveStrategy::SingleChannel(Qubit::Two),
        EveStrategy::SynchronizedNaive,
        EveStrategy::SynchronizedBellAware,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EveStrategy::NoEve => "none",
            EveStrategy::SingleChannel(Qubit::One) => "single-1",
            EveStrategy::SingleChannel(Qubit::Two) => "single-2",
            EveStrategy::SynchronizedNaive => "synchronized-naive",
            EveStrategy::SynchronizedBellAware => "synchronized-bell-aware",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for EveStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Eve's measured bits and, when she measured both channels, her guess.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EveObservation {
    pub bit1: Option<u8>,
    pub bit2: Option<u8>,
    pub guess: Option<MessageBlock>,
}

/// Guess a strategy makes from a two-channel result. `high_coin` supplies
/// the uniform bit the Bell-aware strategy needs.
fn synchronized_guess(strat: EveStrategy, bit1: u8, bit2: u8, high_coin: bool) -> MessageBlock {
    match strat {
        EveStrategy::SynchronizedBellAware => MessageBlock::from_bits(high_coin, bit1 != bit2),
        _ => MessageBlock::from_bits(bit1 == 1, bit2 == 1),
    }
}

/// Runs the strategy's measurements and returns what Eve saw together with
/// the collapsed state that continues to Bob.
pub fn eve_intercept<R: Rng + ?Sized>(
    s: &TwoQubitState,
    strat: EveStrategy,
    rng: &mut R,
) -> (EveObservation, TwoQubitState) {
    match strat {
        EveStrategy::NoEve => (EveObservation::default(), *s),
        EveStrategy::SingleChannel(q) => {
            let (bit, post) = measure_qubit(s, q, rng);
            let obs = match q {
                Qubit::One => EveObservation {
                    bit1: Some(bit),
                    ..Default::default()
                },
                Qubit::Two => EveObservation {
                    bit2: Some(bit),
                    ..Default::default()
                },
            };
            (obs, post)
        }
        EveStrategy::SynchronizedNaive | EveStrategy::SynchronizedBellAware => {
            let (k, post) = measure_computational(s, rng);
            let (bit1, bit2) = (k >> 1, k & 1);
            let coin = strat == EveStrategy::SynchronizedBellAware && rng.random::<bool>();
            let obs = EveObservation {
                bit1: Some(bit1),
                bit2: Some(bit2),
                guess: Some(synchronized_guess(strat, bit1, bit2, coin)),
            };
            (obs, post)
        }
    }
}

/// Uniform guess for an Eve who has no two-channel result.
pub fn blind_guess<R: Rng + ?Sized>(rng: &mut R) -> MessageBlock {
    MessageBlock::ALL[rng.random_range(0..4)]
}

/// One exact measurement branch of an interception.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterceptBranch {
    pub bit1: Option<u8>,
    pub bit2: Option<u8>,
    pub post: TwoQubitState,
    pub probability: f64,
}

/// Every outcome of the strategy's measurement with its Born probability.
pub fn intercept_branches(s: &TwoQubitState, strat: EveStrategy) -> Vec<InterceptBranch> {
    match strat {
        EveStrategy::NoEve => vec![InterceptBranch {
            bit1: None,
            bit2: None,
            post: *s,
            probability: 1.0,
        }],
        EveStrategy::SingleChannel(q) => qubit_measurement_branches(s, q)
            .into_iter()
            .map(|(bit, post, probability)| InterceptBranch {
                bit1: (q == Qubit::One).then_some(bit),
                bit2: (q == Qubit::Two).then_some(bit),
                post,
                probability,
            })
            .collect(),
        EveStrategy::SynchronizedNaive | EveStrategy::SynchronizedBellAware => s
            .probabilities()
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 1e-14)
            .map(|(k, &probability)| InterceptBranch {
                bit1: Some((k >> 1) as u8),
                bit2: Some((k & 1) as u8),
                post: TwoQubitState::basis(k),
                probability,
            })
            .collect(),
    }
}

/// Exact distribution over Eve's guess given a branch; blind guesses are uniform.
pub fn guess_distribution(strat: EveStrategy, branch: &InterceptBranch) -> [f64; 4] {
    let mut dist = [0.0; 4];
    match (branch.bit1, branch.bit2) {
        (Some(b1), Some(b2)) => {
            for coin in [false, true] {
                let g = synchronized_guess(strat, b1, b2, coin);
                dist[g.value() as usize] += 0.5;
            }
        }
        _ => dist = [0.25; 4],
    }
    dist
}

/// Exact probability that Eve's guess equals the true block, averaged over
/// uniform carriers and uniform blocks on noiseless channels.
pub fn exact_block_success(strat: EveStrategy) -> f64 {
    let mut success = 0.0;
    for carrier in BellKind::ALL {
        for block in MessageBlock::ALL {
            let s = encode(carrier, block);
            for branch in intercept_branches(&s, strat) {
                let dist = guess_distribution(strat, &branch);
                success += 0.0625 * branch.probability * dist[block.value() as usize];
            }
        }
    }
    success
}

/// Probability of recovering every block of an `n_blocks` message.
/// Blocks use independent carriers, so this is a plain power.
pub fn exact_message_success(strat: EveStrategy, n_blocks: u32) -> f64 {
    exact_block_success(strat).powi(n_blocks as i32)
}
