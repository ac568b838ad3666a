//! Sampled frequencies against exact enumeration, 3 binomial sigma.

use qsdc_core::adversary::{exact_block_success, EveStrategy};
use qsdc_core::channel::{apply_pauli_noise, ChannelTopology, FlipRecord, NoiseConfig, NoisePlacement};
use qsdc_core::codec::BellKind;
use qsdc_core::qcore::bell_state;
use qsdc_core::session::{exact_block_rates, run_monte_carlo, Message, SessionConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn within_3_sigma(observed: f64, expected: f64, n: u64) -> bool {
    let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
    (observed - expected).abs() <= 3.0 * sigma + 1e-12
}

#[test]
fn flip_record_frequencies() {
    let cfg = NoiseConfig::new(0.1, 0.25, 0.4, 0.05).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 100_000u64;
    let mut counts = [0u64; 16];
    let s = bell_state(BellKind::PhiPlus);
    for _ in 0..n {
        let (_, rec) = apply_pauli_noise(&s, &cfg, &mut rng);
        counts[rec.index()] += 1;
    }
    for rec in FlipRecord::all() {
        let freq = counts[rec.index()] as f64 / n as f64;
        let p = rec.probability(&cfg);
        assert!(within_3_sigma(freq, p, n), "{rec:?}: {freq} vs {p}");
    }
}

#[test]
fn noise_after_taps_matches_oracle() {
    let message = Message::from_bit_str("0011").unwrap();
    let topo = ChannelTopology::new(EveStrategy::SynchronizedBellAware, NoisePlacement::AfterTaps);
    let noise = NoiseConfig::uniform(0.1).unwrap();
    let cfg = SessionConfig::new(message, noise, topo, 31, 50_000).unwrap();
    let stats = run_monte_carlo(&cfg);
    let exact = exact_block_rates(&noise, &topo);
    let blocks = stats.counts.blocks;
    assert!(within_3_sigma(stats.block_error_rate, exact.block_error, blocks));
    assert!(within_3_sigma(stats.eve_block_success_rate, exact.eve_block_success, blocks));
    // Eve sees the clean codeword, so noise cannot hurt her
    assert!((exact.eve_block_success - exact_block_success(topo.eve)).abs() < 1e-12);
}

#[test]
fn naive_message_success_matches_oracle() {
    let message = Message::from_bit_str("01101100").unwrap();
    let topo = ChannelTopology::new(EveStrategy::SynchronizedNaive, NoisePlacement::BeforeTaps);
    let cfg = SessionConfig::new(message, NoiseConfig::noiseless(), topo, 8, 100_000).unwrap();
    let stats = run_monte_carlo(&cfg);
    // per-block naive success: 00 -> 1/2, 01 -> 1/2, 10 -> 0, 11 -> 0
    assert_eq!(stats.oracle_message_success, 0.0);
    assert_eq!(stats.counts.eve_message_hits, 0);
    assert!((stats.oracle_block_success - 0.25).abs() < 1e-12);
    assert!(within_3_sigma(stats.eve_block_success_rate, 0.25, stats.counts.blocks));
    assert!((stats.paper_claim_message_success - 0.25f64.powi(8)).abs() < 1e-18);
}

#[test]
fn naive_message_success_on_decodable_message() {
    // only 00 and 01 blocks: (1/2)^4
    let message = Message::from_bit_str("00010001").unwrap();
    let topo = ChannelTopology::new(EveStrategy::SynchronizedNaive, NoisePlacement::BeforeTaps);
    let cfg = SessionConfig::new(message, NoiseConfig::noiseless(), topo, 9, 100_000).unwrap();
    let stats = run_monte_carlo(&cfg);
    assert!((stats.oracle_message_success - 1.0 / 16.0).abs() < 1e-15);
    assert!(within_3_sigma(stats.eve_message_success_rate, stats.oracle_message_success, stats.trials));
}
