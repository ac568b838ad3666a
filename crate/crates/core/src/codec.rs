//! Super dense coding: carrier-dependent encoding gate selection and the
//! Bell-basis decoder `B = (H ⊗ I) · CNOT`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::qcore::{
    apply, bell_state, matrix, measure_computational, GateLabel, TwoQubitOperator, TwoQubitState,
    STATE_TOL,
};

pub use crate::qcore::BellKind;

/// A 2-bit message element. The left bit of the written pair is the most
/// significant, so `"10"` is value 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MessageBlock(u8);

impl MessageBlock {
    pub const ALL: [MessageBlock; 4] = [
        MessageBlock(0),
        MessageBlock(1),
        MessageBlock(2),
        MessageBlock(3),
    ];

    pub fn new(value: u8) -> Result<Self> {
        if value > 3 {
            return Err(Error::InvalidBlock(value));
        }
        Ok(MessageBlock(value))
    }

    pub fn from_bits(high: bool, low: bool) -> Self {
        MessageBlock(((high as u8) << 1) | low as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn high_bit(self) -> u8 {
        self.0 >> 1
    }

    pub fn low_bit(self) -> u8 {
        self.0 & 1
    }

    /// Number of differing bits between two blocks.
    pub fn bit_distance(self, other: MessageBlock) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    /// Bell state that every carrier encodes this block into.
    pub fn codeword(self) -> BellKind {
        match self.0 {
            0 => BellKind::PhiPlus,
            1 => BellKind::PsiPlus,
            2 => BellKind::PhiMinus,
            _ => BellKind::PsiMinus,
        }
    }
}

impl fmt::Display for MessageBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.high_bit(), self.low_bit())
    }
}

/// Gate Alice applies to her half of each carrier, indexed by carrier then block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingTable {
    gates: [[GateLabel; 4]; 4],
}

impl EncodingTable {
    pub fn standard() -> Self {
        use GateLabel::*;
        // rows follow BellKind::ALL, columns follow block values 00, 01, 10, 11
        EncodingTable {
            gates: [
                [I, X, Z, IY],    // phi+
                [Z, XZ, I, IYZ],  // phi-
                [X, I, IY, Z],    // psi+
                [XZ, Z, IYZ, I],  // psi-
            ],
        }
    }

    pub fn from_gates(gates: [[GateLabel; 4]; 4]) -> Self {
        EncodingTable { gates }
    }

    pub fn gate(&self, carrier: BellKind, block: MessageBlock) -> GateLabel {
        self.gates[carrier.index()][block.value() as usize]
    }

    /// Output of encoding `block` on `carrier` with this table's gate.
    pub fn encode(&self, carrier: BellKind, block: MessageBlock) -> TwoQubitState {
        let op = TwoQubitOperator::tensor(&matrix(self.gate(carrier, block)), &matrix(GateLabel::I));
        apply(&op, &bell_state(carrier)).expect("encoding gates are unitary")
    }

    /// Every carrier must send its four blocks to four distinct Bell states.
    pub fn is_decodable(&self) -> bool {
        BellKind::ALL.iter().all(|&carrier| {
            let mut seen = [false; 4];
            for block in MessageBlock::ALL {
                match classify_bell(&self.encode(carrier, block)) {
                    Some((kind, _)) if !seen[kind.index()] => seen[kind.index()] = true,
                    _ => return false,
                }
            }
            true
        })
    }
}

/// Gate Alice applies for `block` given the carrier she prepared.
pub fn select_encoding_op(carrier: BellKind, block: MessageBlock) -> GateLabel {
    EncodingTable::standard().gate(carrier, block)
}

/// `(U ⊗ I)` applied to the carrier, with `U` from the standard table.
pub fn encode(carrier: BellKind, block: MessageBlock) -> TwoQubitState {
    EncodingTable::standard().encode(carrier, block)
}

/// The decoder `B` as a literal matrix.
pub fn decoder_matrix() -> TwoQubitOperator {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    TwoQubitOperator::from_entries([
        [h, z, z, h],
        [z, h, h, z],
        [h, z, z, -h],
        [z, h, -h, z],
    ])
}

/// Exact distribution of the decoded block for an arbitrary input state.
pub fn decode_distribution(s: &TwoQubitState) -> [f64; 4] {
    apply(&decoder_matrix(), s)
        .expect("decoder is unitary")
        .probabilities()
}

/// Applies `B`, then measures both qubits; the outcome is the block.
pub fn decode<R: Rng + ?Sized>(s: &TwoQubitState, rng: &mut R) -> MessageBlock {
    let rotated = apply(&decoder_matrix(), s).expect("decoder is unitary");
    let (k, _) = measure_computational(&rotated, rng);
    MessageBlock(k)
}

/// Identifies `s` as a Bell state up to global phase. Returns the kind and
/// the phase `<b|s>`, or `None` when no Bell state overlaps within 1e-9.
pub fn classify_bell(s: &TwoQubitState) -> Option<(BellKind, Complex64)> {
    BellKind::ALL.iter().find_map(|&kind| {
        let overlap = bell_state(kind).inner(s);
        (overlap.norm() >= 1.0 - STATE_TOL).then_some((kind, overlap))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::equal_up_to_global_phase;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn block(v: u8) -> MessageBlock {
        MessageBlock::new(v).unwrap()
    }

    #[test]
    fn block_bit_order() {
        assert_eq!(MessageBlock::from_bits(true, false).value(), 2);
        assert_eq!(block(2).to_string(), "10");
        assert_eq!(block(1).to_string(), "01");
        assert_eq!(MessageBlock::new(4), Err(Error::InvalidBlock(4)));
        assert_eq!(block(1).bit_distance(block(2)), 2);
    }

    #[test]
    fn selection_examples() {
        assert_eq!(select_encoding_op(BellKind::PhiPlus, block(2)), GateLabel::Z);
        assert_eq!(select_encoding_op(BellKind::PhiMinus, block(3)), GateLabel::IYZ);
        assert_eq!(select_encoding_op(BellKind::PsiMinus, block(3)), GateLabel::I);
    }

    #[test]
    fn encode_examples() {
        let psi_plus = bell_state(BellKind::PsiPlus);
        assert!(encode(BellKind::PhiPlus, block(1)).max_abs_diff(&psi_plus) < 1e-15);
        assert!(encode(BellKind::PhiMinus, block(1)).max_abs_diff(&psi_plus) < 1e-15);
        assert_eq!(
            encode(BellKind::PsiMinus, block(3)),
            bell_state(BellKind::PsiMinus)
        );
    }

    #[test]
    fn every_pair_hits_its_codeword() {
        for carrier in BellKind::ALL {
            for b in MessageBlock::ALL {
                let s = encode(carrier, b);
                let (kind, phase) = classify_bell(&s).expect("Bell state");
                assert_eq!(kind, b.codeword(), "carrier {carrier} block {b}");
                assert!((phase.norm() - 1.0).abs() < 1e-12);
                assert!((s.norm() - 1.0).abs() < 1e-12);
            }
        }
        assert!(EncodingTable::standard().is_decodable());
    }

    #[test]
    fn broken_table_is_not_decodable() {
        let mut gates = [[GateLabel::I; 4]; 4];
        gates[0] = [GateLabel::I, GateLabel::X, GateLabel::Z, GateLabel::X];
        assert!(!EncodingTable::from_gates(gates).is_decodable());
    }

    #[test]
    fn decoder_equals_circuit() {
        let circuit = TwoQubitOperator::tensor(&matrix(GateLabel::H), &matrix(GateLabel::I))
            .mul(&TwoQubitOperator::cnot());
        assert!(circuit.max_abs_diff(&decoder_matrix()) < 1e-15);
        let b = decoder_matrix();
        assert!(b.mul(&b.adjoint()).max_abs_diff(&TwoQubitOperator::identity()) < 1e-12);
    }

    #[test]
    fn decoder_maps_bell_to_basis() {
        let expect = [
            (BellKind::PhiPlus, 0),
            (BellKind::PhiMinus, 2),
            (BellKind::PsiPlus, 1),
            (BellKind::PsiMinus, 3),
        ];
        for (kind, k) in expect {
            let out = apply(&decoder_matrix(), &bell_state(kind)).unwrap();
            assert!(out.max_abs_diff(&TwoQubitState::basis(k)) < 1e-12, "{kind}");
        }
    }

    #[test]
    fn decode_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            assert_eq!(decode(&bell_state(BellKind::PhiMinus), &mut rng), block(2));
            assert_eq!(
                decode(&bell_state(BellKind::PsiPlus).negated(), &mut rng),
                block(1)
            );
        }
        // B|00> = (|00> + |10>)/sqrt2
        let dist = decode_distribution(&TwoQubitState::basis(0));
        let expect = [0.5, 0.0, 0.5, 0.0];
        for k in 0..4 {
            assert!((dist[k] - expect[k]).abs() < 1e-15);
        }
        let mut seen = [0usize; 4];
        for _ in 0..2000 {
            seen[decode(&TwoQubitState::basis(0), &mut rng).value() as usize] += 1;
        }
        assert_eq!(seen[1] + seen[3], 0);
        assert!(seen[0] > 800 && seen[2] > 800);
    }

    #[test]
    fn classify_examples() {
        let (kind, phase) = classify_bell(&bell_state(BellKind::PsiMinus)).unwrap();
        assert_eq!(kind, BellKind::PsiMinus);
        assert!((phase - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let op = TwoQubitOperator::tensor(&matrix(GateLabel::XZ), &matrix(GateLabel::I));
        let s = apply(&op, &bell_state(BellKind::PhiPlus)).unwrap();
        let (kind, phase) = classify_bell(&s).unwrap();
        assert_eq!(kind, BellKind::PsiMinus);
        assert!((phase - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!(equal_up_to_global_phase(&s, &bell_state(kind), 1e-12));

        assert!(classify_bell(&TwoQubitState::basis(0)).is_none());
    }
}
