//! Dual quantum-channel transport with independent per-qubit Pauli noise
//! and optional eavesdropper taps.
//!
//! Qubit one travels on channel 1 and qubit two on channel 2. Each qubit
//! independently suffers a bit flip `X` and a phase flip `Z` with its own
//! probability. When both fire on the same qubit the applied matrix is
//! `X·Z` (phase flip first); the opposite order differs only by a global
//! phase.

use num_complex::Complex64;
use rand::Rng;

use crate::adversary::{eve_intercept, EveObservation, EveStrategy};
use crate::codec::classify_bell;
use crate::error::{Error, Result};
use crate::qcore::{
    apply, bell_state, matrix, mul2, BellKind, GateLabel, Matrix2, Qubit, TwoQubitOperator,
    TwoQubitState,
};

/// Per-qubit flip probabilities for both channels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseConfig {
    px1: f64,
    pz1: f64,
    px2: f64,
    pz2: f64,
}

impl NoiseConfig {
    pub fn new(px1: f64, pz1: f64, px2: f64, pz2: f64) -> Result<Self> {
        for (name, value) in [("px1", px1), ("pz1", pz1), ("px2", px2), ("pz2", pz2)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { name, value });
            }
        }
        Ok(NoiseConfig { px1, pz1, px2, pz2 })
    }

    /// The same probability `p` for all four flips.
    pub fn uniform(p: f64) -> Result<Self> {
        Self::new(p, p, p, p)
    }

    pub fn noiseless() -> Self {
        NoiseConfig {
            px1: 0.0,
            pz1: 0.0,
            px2: 0.0,
            pz2: 0.0,
        }
    }

    pub fn px1(&self) -> f64 {
        self.px1
    }

    pub fn pz1(&self) -> f64 {
        self.pz1
    }

    pub fn px2(&self) -> f64 {
        self.px2
    }

    pub fn pz2(&self) -> f64 {
        self.pz2
    }

    pub fn is_noiseless(&self) -> bool {
        self.px1 == 0.0 && self.pz1 == 0.0 && self.px2 == 0.0 && self.pz2 == 0.0
    }
}

/// Which flips fired on one transmission.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FlipRecord {
    pub x1: bool,
    pub z1: bool,
    pub x2: bool,
    pub z2: bool,
}

impl FlipRecord {
    pub const NONE: FlipRecord = FlipRecord {
        x1: false,
        z1: false,
        x2: false,
        z2: false,
    };

    /// All 16 combinations; bit 3..0 of the index are x1, z1, x2, z2.
    pub fn all() -> impl Iterator<Item = FlipRecord> {
        (0u8..16).map(|bits| FlipRecord {
            x1: bits & 8 != 0,
            z1: bits & 4 != 0,
            x2: bits & 2 != 0,
            z2: bits & 1 != 0,
        })
    }

    pub fn index(&self) -> usize {
        (self.x1 as usize) << 3 | (self.z1 as usize) << 2 | (self.x2 as usize) << 1 | self.z2 as usize
    }

    pub fn probability(&self, cfg: &NoiseConfig) -> f64 {
        let pick = |fired: bool, p: f64| if fired { p } else { 1.0 - p };
        pick(self.x1, cfg.px1) * pick(self.z1, cfg.pz1) * pick(self.x2, cfg.px2) * pick(self.z2, cfg.pz2)
    }

    /// The two-qubit operator these flips implement.
    pub fn operator(&self) -> TwoQubitOperator {
        TwoQubitOperator::tensor(&flip_matrix(self.x1, self.z1), &flip_matrix(self.x2, self.z2))
    }
}

fn flip_matrix(x: bool, z: bool) -> Matrix2 {
    let mut m = matrix(GateLabel::I);
    if z {
        m = mul2(&matrix(GateLabel::Z), &m);
    }
    if x {
        m = mul2(&matrix(GateLabel::X), &m);
    }
    m
}

/// Deterministically applies the flips in `record`.
pub fn apply_flips(s: &TwoQubitState, record: &FlipRecord) -> TwoQubitState {
    if *record == FlipRecord::NONE {
        return *s;
    }
    apply(&record.operator(), s).expect("Pauli flips are unitary")
}

/// Draws the four Bernoulli flips (always four uniforms, in the order
/// x1, z1, x2, z2) and applies them.
pub fn apply_pauli_noise<R: Rng + ?Sized>(
    s: &TwoQubitState,
    cfg: &NoiseConfig,
    rng: &mut R,
) -> (TwoQubitState, FlipRecord) {
    let mut fire = |p: f64| rng.random::<f64>() < p;
    let record = FlipRecord {
        x1: fire(cfg.px1),
        z1: fire(cfg.pz1),
        x2: fire(cfg.px2),
        z2: fire(cfg.pz2),
    };
    (apply_flips(s, &record), record)
}

/// One branch of the exact noise enumeration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseOutcome {
    pub flips: FlipRecord,
    pub state: TwoQubitState,
    pub probability: f64,
}

/// Every flip combination with nonzero probability, paired with its output.
pub fn enumerate_noise_outcomes(s: &TwoQubitState, cfg: &NoiseConfig) -> Vec<NoiseOutcome> {
    FlipRecord::all()
        .filter_map(|flips| {
            let probability = flips.probability(cfg);
            (probability > 0.0).then(|| NoiseOutcome {
                flips,
                state: apply_flips(s, &flips),
                probability,
            })
        })
        .collect()
}

/// Where noise acts relative to the eavesdropper's taps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum NoisePlacement {
    /// Noise on the Alice-to-tap segment; Eve sees the noisy state.
    #[default]
    BeforeTaps,
    /// Noise on the tap-to-Bob segment; Eve sees the clean codeword.
    AfterTaps,
}

impl NoisePlacement {
    pub fn name(self) -> &'static str {
        match self {
            NoisePlacement::BeforeTaps => "before-taps",
            NoisePlacement::AfterTaps => "after-taps",
        }
    }
}

/// Tap attachment points and noise placement. Taps are implied by the
/// eavesdropping strategy; synchronized strategies attach both.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChannelTopology {
    pub eve: EveStrategy,
    pub placement: NoisePlacement,
}

impl ChannelTopology {
    pub fn new(eve: EveStrategy, placement: NoisePlacement) -> Self {
        ChannelTopology { eve, placement }
    }

    pub fn is_tapped(&self, channel: Qubit) -> bool {
        match self.eve {
            EveStrategy::NoEve => false,
            EveStrategy::SingleChannel(q) => q == channel,
            EveStrategy::SynchronizedNaive | EveStrategy::SynchronizedBellAware => true,
        }
    }
}

/// What reached Bob and what happened on the way.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transmission {
    pub delivered: TwoQubitState,
    pub flips: FlipRecord,
    pub intercept: EveObservation,
}

/// Sends a two-qubit state over both channels. Noise and Eve draw from
/// separate streams so that attaching a tap never shifts the noise draws.
pub fn transmit<N, E>(
    s: &TwoQubitState,
    topo: &ChannelTopology,
    cfg: &NoiseConfig,
    noise_rng: &mut N,
    eve_rng: &mut E,
) -> Transmission
where
    N: Rng + ?Sized,
    E: Rng + ?Sized,
{
    match topo.placement {
        NoisePlacement::BeforeTaps => {
            let (noisy, flips) = apply_pauli_noise(s, cfg, noise_rng);
            let (intercept, delivered) = eve_intercept(&noisy, topo.eve, eve_rng);
            Transmission {
                delivered,
                flips,
                intercept,
            }
        }
        NoisePlacement::AfterTaps => {
            let (intercept, tapped) = eve_intercept(s, topo.eve, eve_rng);
            let (delivered, flips) = apply_pauli_noise(&tapped, cfg, noise_rng);
            Transmission {
                delivered,
                flips,
                intercept,
            }
        }
    }
}

/// A published mixed-flip outcome on `|phi+>`, kept for comparison with
/// what the simulator computes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceNoiseCase {
    pub case: &'static str,
    pub description: &'static str,
    pub flips: FlipRecord,
    pub printed_kind: BellKind,
    /// +1 or -1.
    pub printed_sign: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseCaseAudit {
    pub reference: ReferenceNoiseCase,
    pub computed_kind: BellKind,
    pub computed_phase: Complex64,
    pub kind_agrees: bool,
    /// Only meaningful when the kinds agree.
    pub sign_agrees: bool,
}

const fn flips(x1: bool, z1: bool, x2: bool, z2: bool) -> FlipRecord {
    FlipRecord { x1, z1, x2, z2 }
}

pub const REFERENCE_NOISE_CASES: [ReferenceNoiseCase; 7] = [
    ReferenceNoiseCase {
        case: "1",
        description: "qubit 1 bit and phase flip",
        flips: flips(true, true, false, false),
        printed_kind: BellKind::PsiPlus,
        printed_sign: -1.0,
    },
    ReferenceNoiseCase {
        case: "2",
        description: "qubit 2 bit and phase flip",
        flips: flips(false, false, true, true),
        printed_kind: BellKind::PsiPlus,
        printed_sign: -1.0,
    },
    ReferenceNoiseCase {
        case: "3a",
        description: "both bit flips, phase flip on qubit 1",
        flips: flips(true, true, true, false),
        printed_kind: BellKind::PhiPlus,
        printed_sign: -1.0,
    },
    ReferenceNoiseCase {
        case: "3b",
        description: "both bit flips, phase flip on qubit 2",
        flips: flips(true, false, true, true),
        printed_kind: BellKind::PhiPlus,
        printed_sign: -1.0,
    },
    ReferenceNoiseCase {
        case: "4",
        description: "bit and phase flips on both qubits",
        flips: flips(true, true, true, true),
        printed_kind: BellKind::PhiPlus,
        printed_sign: 1.0,
    },
    ReferenceNoiseCase {
        case: "5",
        description: "bit flip on qubit 1, phase flip on qubit 2",
        flips: flips(true, false, false, true),
        printed_kind: BellKind::PsiMinus,
        printed_sign: -1.0,
    },
    ReferenceNoiseCase {
        case: "6",
        description: "phase flip on qubit 1, bit flip on qubit 2",
        flips: flips(false, true, true, false),
        printed_kind: BellKind::PsiMinus,
        printed_sign: 1.0,
    },
];

/// Recomputes every reference case and reports agreement of kind and sign.
pub fn audit_reference_noise_cases() -> Vec<NoiseCaseAudit> {
    let phi_plus = bell_state(BellKind::PhiPlus);
    REFERENCE_NOISE_CASES
        .iter()
        .map(|reference| {
            let out = apply_flips(&phi_plus, &reference.flips);
            let (computed_kind, computed_phase) =
                classify_bell(&out).expect("Pauli noise keeps Bell states");
            let kind_agrees = computed_kind == reference.printed_kind;
            NoiseCaseAudit {
                reference: *reference,
                computed_kind,
                computed_phase,
                kind_agrees,
                sign_agrees: kind_agrees
                    && (computed_phase - Complex64::new(reference.printed_sign, 0.0)).norm() < 1e-9,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::equal_up_to_global_phase;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn config_validation() {
        assert!(NoiseConfig::uniform(0.5).is_ok());
        assert!(NoiseConfig::uniform(1.0).is_ok());
        assert_eq!(
            NoiseConfig::new(0.0, -0.1, 0.0, 0.0),
            Err(Error::InvalidProbability {
                name: "pz1",
                value: -0.1
            })
        );
        assert!(NoiseConfig::new(0.0, 0.0, 1.5, 0.0).is_err());
        assert!(NoiseConfig::new(0.0, 0.0, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn zero_noise_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = bell_state(BellKind::PsiMinus);
        for _ in 0..100 {
            let (out, rec) = apply_pauli_noise(&s, &NoiseConfig::noiseless(), &mut rng);
            assert_eq!(out, s);
            assert_eq!(rec, FlipRecord::NONE);
        }
    }

    #[test]
    fn forced_flips() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let phi = bell_state(BellKind::PhiPlus);
        let cfg = NoiseConfig::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let (out, rec) = apply_pauli_noise(&phi, &cfg, &mut rng);
        assert_eq!(rec, flips(true, false, false, false));
        assert!(out.max_abs_diff(&bell_state(BellKind::PsiPlus)) < 1e-15);

        let cfg = NoiseConfig::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let (out, _) = apply_pauli_noise(&phi, &cfg, &mut rng);
        assert!(equal_up_to_global_phase(&out, &bell_state(BellKind::PsiMinus), 1e-12));
    }

    #[test]
    fn flip_operator_order() {
        // X·Z on one qubit is [[0,-1],[1,0]]
        let m = flip_matrix(true, true);
        assert_eq!(m, matrix(GateLabel::XZ));
        assert_eq!(flip_matrix(false, false), matrix(GateLabel::I));
    }

    #[test]
    fn enumeration_examples() {
        let phi = bell_state(BellKind::PhiPlus);
        let out = enumerate_noise_outcomes(&phi, &NoiseConfig::noiseless());
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].state, phi);
        assert_eq!(out[0].probability, 1.0);

        let p = 0.1;
        let out = enumerate_noise_outcomes(&phi, &NoiseConfig::uniform(p).unwrap());
        assert_eq!(out.len(), 16);
        let total: f64 = out.iter().map(|o| o.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let all = out
            .iter()
            .find(|o| o.flips == flips(true, true, true, true))
            .unwrap();
        assert!((all.probability - p.powi(4)).abs() < 1e-18);
        assert!(equal_up_to_global_phase(&all.state, &phi, 1e-12));
    }

    #[test]
    fn flip_record_index_roundtrip() {
        for (k, rec) in FlipRecord::all().enumerate() {
            assert_eq!(rec.index(), k);
        }
    }

    #[test]
    fn reference_case_audit() {
        // hand-derived with X·Z per qubit:
        //   1: -psi-   2: +psi-   3a/3b: -phi-   4: +phi+   5: -psi-   6: +psi-
        let expected = [
            (BellKind::PsiMinus, -1.0),
            (BellKind::PsiMinus, 1.0),
            (BellKind::PhiMinus, -1.0),
            (BellKind::PhiMinus, -1.0),
            (BellKind::PhiPlus, 1.0),
            (BellKind::PsiMinus, -1.0),
            (BellKind::PsiMinus, 1.0),
        ];
        let audit = audit_reference_noise_cases();
        for (row, (kind, sign)) in audit.iter().zip(expected) {
            assert_eq!(row.computed_kind, kind, "case {}", row.reference.case);
            assert!((row.computed_phase - Complex64::new(sign, 0.0)).norm() < 1e-12);
        }
        let agreeing: Vec<&str> = audit
            .iter()
            .filter(|a| a.kind_agrees && a.sign_agrees)
            .map(|a| a.reference.case)
            .collect();
        assert_eq!(agreeing, ["4", "5", "6"]);
    }

    #[test]
    fn transmit_without_taps_or_noise_is_identity() {
        let mut n = ChaCha8Rng::seed_from_u64(7);
        let mut e = ChaCha8Rng::seed_from_u64(8);
        for kind in BellKind::ALL {
            let s = bell_state(kind);
            let t = transmit(&s, &ChannelTopology::default(), &NoiseConfig::noiseless(), &mut n, &mut e);
            assert_eq!(t.delivered.amplitudes(), s.amplitudes());
            assert_eq!(t.intercept, EveObservation::default());
        }
    }

    #[test]
    fn synchronized_taps_collapse_correlated() {
        let mut n = ChaCha8Rng::seed_from_u64(9);
        let mut e = ChaCha8Rng::seed_from_u64(10);
        let topo = ChannelTopology::new(EveStrategy::SynchronizedNaive, NoisePlacement::BeforeTaps);
        assert!(topo.is_tapped(Qubit::One) && topo.is_tapped(Qubit::Two));
        for _ in 0..200 {
            let t = transmit(
                &bell_state(BellKind::PhiPlus),
                &topo,
                &NoiseConfig::noiseless(),
                &mut n,
                &mut e,
            );
            let (b1, b2) = (t.intercept.bit1.unwrap(), t.intercept.bit2.unwrap());
            assert_eq!(b1, b2);
            let k = ((b1 << 1) | b2) as usize;
            assert_eq!(t.delivered, TwoQubitState::basis(k));
        }
    }

    #[test]
    fn single_tap_sees_fair_coin() {
        let mut n = ChaCha8Rng::seed_from_u64(11);
        let mut e = ChaCha8Rng::seed_from_u64(12);
        let topo = ChannelTopology::new(EveStrategy::SingleChannel(Qubit::One), NoisePlacement::BeforeTaps);
        assert!(!topo.is_tapped(Qubit::Two));
        let trials = 100_000;
        let mut ones = 0;
        for _ in 0..trials {
            let t = transmit(
                &bell_state(BellKind::PhiPlus),
                &topo,
                &NoiseConfig::noiseless(),
                &mut n,
                &mut e,
            );
            assert!(t.intercept.bit2.is_none());
            ones += t.intercept.bit1.unwrap() as usize;
        }
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.5).abs() <= 3.0 * (0.25 / trials as f64).sqrt(), "{freq}");
    }

    #[test]
    fn placement_changes_what_eve_sees() {
        // x1 forced: before taps Eve measures psi+ (anticorrelated), after
        // taps she measures phi+ (correlated) and Bob receives X on her collapse.
        let cfg = NoiseConfig::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let mut n = ChaCha8Rng::seed_from_u64(13);
        let mut e = ChaCha8Rng::seed_from_u64(14);
        let phi = bell_state(BellKind::PhiPlus);
        for placement in [NoisePlacement::BeforeTaps, NoisePlacement::AfterTaps] {
            let topo = ChannelTopology::new(EveStrategy::SynchronizedNaive, placement);
            let t = transmit(&phi, &topo, &cfg, &mut n, &mut e);
            let correlated = t.intercept.bit1 == t.intercept.bit2;
            assert_eq!(correlated, placement == NoisePlacement::AfterTaps);
        }
    }
}
