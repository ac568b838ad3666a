//! Exact complex linear algebra for one and two qubits.
//!
//! Two-qubit amplitudes are stored in the order `|00>, |01>, |10>, |11>`,
//! where the first symbol is qubit one (the qubit Alice operates on, carried
//! on channel 1) and the second symbol is qubit two (channel 2). Operators
//! built with [`TwoQubitOperator::tensor`] act with their first factor on
//! qubit one, so no reindexing is ever needed.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance for operator construction checks (unitarity).
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Tolerance for state-level invariants (norm, hermiticity, trace).
pub const STATE_TOL: f64 = 1e-9;

/// Born probabilities below this are treated as exactly zero when sampling.
const ZERO_PROBABILITY: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I_UNIT: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A 2x2 complex matrix, row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qubit {
    One,
    Two,
}

impl Qubit {
    pub fn other(self) -> Qubit {
        match self {
            Qubit::One => Qubit::Two,
            Qubit::Two => Qubit::One,
        }
    }

    /// Bit of this qubit inside a basis index `|q1 q2>`.
    fn bit_of(self, index: usize) -> usize {
        match self {
            Qubit::One => (index >> 1) & 1,
            Qubit::Two => index & 1,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Qubit::One => 1,
            Qubit::Two => 2,
        }
    }
}

/// Named single-qubit operators used for encoding, noise and decoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateLabel {
    I,
    X,
    Y,
    /// `i * Y`, the real matrix `[[0, 1], [-1, 0]]`.
    IY,
    Z,
    H,
    /// `X * Z`: Z acts first, then X.
    XZ,
    /// `iY * Z`: Z acts first, then iY.
    IYZ,
}

impl GateLabel {
    pub const ALL: [GateLabel; 8] = [
        GateLabel::I,
        GateLabel::X,
        GateLabel::Y,
        GateLabel::IY,
        GateLabel::Z,
        GateLabel::H,
        GateLabel::XZ,
        GateLabel::IYZ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateLabel::I => "I",
            GateLabel::X => "X",
            GateLabel::Y => "Y",
            GateLabel::IY => "iY",
            GateLabel::Z => "Z",
            GateLabel::H => "H",
            GateLabel::XZ => "XZ",
            GateLabel::IYZ => "iYZ",
        }
    }
}

impl fmt::Display for GateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn mul2(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (col, entry) in row.iter_mut().enumerate() {
            *entry = a[r][0] * b[0][col] + a[r][1] * b[1][col];
        }
    }
    out
}

pub fn adjoint2(a: &Matrix2) -> Matrix2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// Literal matrix of a gate label. Composite labels multiply right-to-left.
pub fn matrix(label: GateLabel) -> Matrix2 {
    match label {
        GateLabel::I => [[ONE, ZERO], [ZERO, ONE]],
        GateLabel::X => [[ZERO, ONE], [ONE, ZERO]],
        GateLabel::Y => [[ZERO, -I_UNIT], [I_UNIT, ZERO]],
        GateLabel::IY => [[ZERO, ONE], [-ONE, ZERO]],
        GateLabel::Z => [[ONE, ZERO], [ZERO, -ONE]],
        GateLabel::H => {
            let h = c(FRAC_1_SQRT_2);
            [[h, h], [h, -h]]
        }
        GateLabel::XZ => mul2(&matrix(GateLabel::X), &matrix(GateLabel::Z)),
        GateLabel::IYZ => mul2(&matrix(GateLabel::IY), &matrix(GateLabel::Z)),
    }
}

/// A 4x4 complex operator on two qubits, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitOperator {
    entries: [[Complex64; 4]; 4],
}

impl TwoQubitOperator {
    /// Wraps literal entries without checking unitarity; [`apply`] checks it.
    pub const fn from_entries(entries: [[Complex64; 4]; 4]) -> Self {
        TwoQubitOperator { entries }
    }

    pub fn identity() -> Self {
        let mut entries = [[ZERO; 4]; 4];
        for (k, row) in entries.iter_mut().enumerate() {
            row[k] = ONE;
        }
        TwoQubitOperator { entries }
    }

    /// Kronecker product `a ⊗ b`; `a` acts on qubit one.
    pub fn tensor(a: &Matrix2, b: &Matrix2) -> Self {
        let mut entries = [[ZERO; 4]; 4];
        for (r, row) in entries.iter_mut().enumerate() {
            for (col, entry) in row.iter_mut().enumerate() {
                *entry = a[r >> 1][col >> 1] * b[r & 1][col & 1];
            }
        }
        TwoQubitOperator { entries }
    }

    /// Controlled-NOT with qubit one as control.
    pub fn cnot() -> Self {
        let mut entries = [[ZERO; 4]; 4];
        entries[0][0] = ONE;
        entries[1][1] = ONE;
        entries[2][3] = ONE;
        entries[3][2] = ONE;
        TwoQubitOperator { entries }
    }

    /// Single-qubit operator lifted to act on `qubit` only.
    pub fn on_qubit(m: &Matrix2, qubit: Qubit) -> Self {
        let id = matrix(GateLabel::I);
        match qubit {
            Qubit::One => Self::tensor(m, &id),
            Qubit::Two => Self::tensor(&id, m),
        }
    }

    pub fn entries(&self) -> &[[Complex64; 4]; 4] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    /// Matrix product `self * rhs` (rhs acts first).
    pub fn mul(&self, rhs: &TwoQubitOperator) -> TwoQubitOperator {
        let mut entries = [[ZERO; 4]; 4];
        for (r, row) in entries.iter_mut().enumerate() {
            for (col, entry) in row.iter_mut().enumerate() {
                *entry = (0..4).map(|k| self.entries[r][k] * rhs.entries[k][col]).sum();
            }
        }
        TwoQubitOperator { entries }
    }

    pub fn adjoint(&self) -> TwoQubitOperator {
        let mut entries = [[ZERO; 4]; 4];
        for (r, row) in entries.iter_mut().enumerate() {
            for (col, entry) in row.iter_mut().enumerate() {
                *entry = self.entries[col][r].conj();
            }
        }
        TwoQubitOperator { entries }
    }

    pub fn max_abs_diff(&self, other: &TwoQubitOperator) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..4 {
            for col in 0..4 {
                worst = worst.max((self.entries[r][col] - other.entries[r][col]).norm());
            }
        }
        worst
    }

    /// Largest entry-wise deviation of `U†U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint().mul(self).max_abs_diff(&TwoQubitOperator::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }
}

/// The four maximally entangled Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn index(self) -> usize {
        match self {
            BellKind::PhiPlus => 0,
            BellKind::PhiMinus => 1,
            BellKind::PsiPlus => 2,
            BellKind::PsiMinus => 3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        }
    }

    /// Outcomes on the two qubits agree (phi) or disagree (psi).
    pub fn is_correlated(self) -> bool {
        matches!(self, BellKind::PhiPlus | BellKind::PhiMinus)
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A normalized two-qubit pure state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitState {
    amps: [Complex64; 4],
    renormalized: bool,
}

impl TwoQubitState {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = norm4(&amps);
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm, tol: STATE_TOL });
        }
        Ok(TwoQubitState {
            amps,
            renormalized: false,
        })
    }

    /// Computational basis state `|k>` for `k` in `0..4` (`|q1 q2>` read as binary).
    pub fn basis(k: usize) -> Self {
        assert!(k < 4, "basis index {k} out of range");
        let mut amps = [ZERO; 4];
        amps[k] = ONE;
        TwoQubitState {
            amps,
            renormalized: false,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amps[k]
    }

    pub fn norm(&self) -> f64 {
        norm4(&self.amps)
    }

    /// Set when an operation had to renormalize numeric drift above 1e-12.
    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &TwoQubitState) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        self.scaled(phase)
    }

    /// Exact negation, the global phase -1.
    pub fn negated(&self) -> Self {
        self.scaled(-ONE)
    }

    fn scaled(&self, factor: Complex64) -> Self {
        TwoQubitState {
            amps: self.amps.map(|a| a * factor),
            renormalized: self.renormalized,
        }
    }

    pub fn max_abs_diff(&self, other: &TwoQubitState) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Born probabilities `|amp_k|^2` of the four basis outcomes.
    pub fn probabilities(&self) -> [f64; 4] {
        self.amps.map(|a| a.norm_sqr())
    }
}

impl fmt::Display for TwoQubitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = ["00", "01", "10", "11"];
        let mut first = true;
        for (a, label) in self.amps.iter().zip(labels) {
            if a.norm() < CONSTRUCTION_TOL {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{label}>", a.re, a.im)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn norm4(amps: &[Complex64; 4]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Canonical Bell state with a positive leading amplitude.
pub fn bell_state(kind: BellKind) -> TwoQubitState {
    let h = c(FRAC_1_SQRT_2);
    let amps = match kind {
        BellKind::PhiPlus => [h, ZERO, ZERO, h],
        BellKind::PhiMinus => [h, ZERO, ZERO, -h],
        BellKind::PsiPlus => [ZERO, h, h, ZERO],
        BellKind::PsiMinus => [ZERO, h, -h, ZERO],
    };
    TwoQubitState {
        amps,
        renormalized: false,
    }
}

/// Matrix-vector product. Rejects operators that are not unitary within
/// [`CONSTRUCTION_TOL`]; renormalizes (and flags) drift above that bound.
pub fn apply(op: &TwoQubitOperator, s: &TwoQubitState) -> Result<TwoQubitState> {
    let deviation = op.unitarity_deviation();
    if deviation > CONSTRUCTION_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    let mut amps = [ZERO; 4];
    for (r, out) in amps.iter_mut().enumerate() {
        *out = (0..4).map(|k| op.entries[r][k] * s.amps[k]).sum();
    }
    let norm = norm4(&amps);
    let mut renormalized = s.renormalized;
    if (norm - 1.0).abs() > CONSTRUCTION_TOL {
        amps = amps.map(|a| a / norm);
        renormalized = true;
    }
    Ok(TwoQubitState { amps, renormalized })
}

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 4.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates hermiticity, trace and positivity on a fixed probe set.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::InvalidDensity("dimension must be 2 or 4"));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidDensity("entry count does not match dimension"));
        }
        if entries.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let rho = DensityMatrix { dim, entries };
        for r in 0..dim {
            for col in 0..dim {
                if (rho.get(r, col) - rho.get(col, r).conj()).norm() > STATE_TOL {
                    return Err(Error::InvalidDensity("not Hermitian"));
                }
            }
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidDensity("trace is not 1"));
        }
        if probe_vectors(dim)
            .iter()
            .any(|v| rho.expectation(v) < -STATE_TOL)
        {
            return Err(Error::InvalidDensity("negative expectation on a probe vector"));
        }
        Ok(rho)
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let mut entries = vec![ZERO; dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = c(1.0 / dim as f64);
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    /// `v† rho v`, real for Hermitian `rho`.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let mut acc = ZERO;
        for r in 0..self.dim {
            for col in 0..self.dim {
                acc += v[r].conj() * self.get(r, col) * v[col];
            }
        }
        acc.re
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn probe_vectors(dim: usize) -> Vec<Vec<Complex64>> {
    let h = c(FRAC_1_SQRT_2);
    let hi = Complex64::new(0.0, FRAC_1_SQRT_2);
    if dim == 2 {
        vec![
            vec![ONE, ZERO],
            vec![ZERO, ONE],
            vec![h, h],
            vec![h, -h],
            vec![h, hi],
            vec![h, -hi],
        ]
    } else {
        let mut probes: Vec<Vec<Complex64>> = (0..4)
            .map(|k| TwoQubitState::basis(k).amps.to_vec())
            .collect();
        probes.extend(BellKind::ALL.iter().map(|&b| bell_state(b).amps.to_vec()));
        probes
    }
}

/// Outer product `|s><s|`.
pub fn density(s: &TwoQubitState) -> DensityMatrix {
    let mut entries = Vec::with_capacity(16);
    for r in 0..4 {
        for col in 0..4 {
            entries.push(s.amps[r] * s.amps[col].conj());
        }
    }
    DensityMatrix { dim: 4, entries }
}

/// `Tr(rho^2)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let mut acc = ZERO;
    for r in 0..rho.dim {
        for col in 0..rho.dim {
            acc += rho.get(r, col) * rho.get(col, r);
        }
    }
    acc.re
}

/// Reduced state of `keep`, tracing out the other qubit.
pub fn partial_trace(rho: &DensityMatrix, keep: Qubit) -> Result<DensityMatrix> {
    if rho.dim != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim,
        });
    }
    let index = |kept: usize, traced: usize| match keep {
        Qubit::One => (kept << 1) | traced,
        Qubit::Two => (traced << 1) | kept,
    };
    let mut entries = vec![ZERO; 4];
    for a in 0..2 {
        for b in 0..2 {
            entries[a * 2 + b] = (0..2).map(|t| rho.get(index(a, t), index(b, t))).sum();
        }
    }
    DensityMatrix::new(2, entries)
}

/// Draws an index from unnormalized weights, ignoring numerically-zero entries.
fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let cleaned: Vec<f64> = weights
        .iter()
        .map(|&w| if w < ZERO_PROBABILITY { 0.0 } else { w })
        .collect();
    let total: f64 = cleaned.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (k, &w) in cleaned.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        last_nonzero = k;
        acc += w;
        if u < acc {
            return k;
        }
    }
    last_nonzero
}

/// Full two-qubit measurement in the computational basis. Returns the
/// outcome `k` (bits `q1 q2`) and the collapsed state `|k>`.
pub fn measure_computational<R: Rng + ?Sized>(
    s: &TwoQubitState,
    rng: &mut R,
) -> (u8, TwoQubitState) {
    let k = sample_index(&s.probabilities(), rng);
    (k as u8, TwoQubitState::basis(k))
}

/// Exact outcome branches of a single-qubit measurement: `(bit, post, probability)`
/// for every outcome with nonzero probability. The post-state keeps the other
/// qubit's superposition, renormalized.
pub fn qubit_measurement_branches(s: &TwoQubitState, qubit: Qubit) -> Vec<(u8, TwoQubitState, f64)> {
    let probs = s.probabilities();
    let mut branches = Vec::with_capacity(2);
    for bit in 0..2 {
        let p: f64 = (0..4).filter(|&k| qubit.bit_of(k) == bit).map(|k| probs[k]).sum();
        if p < ZERO_PROBABILITY {
            continue;
        }
        let scale = 1.0 / p.sqrt();
        let mut amps = [ZERO; 4];
        for (k, amp) in amps.iter_mut().enumerate() {
            if qubit.bit_of(k) == bit {
                *amp = s.amps[k] * scale;
            }
        }
        let post = TwoQubitState {
            amps,
            renormalized: s.renormalized,
        };
        branches.push((bit as u8, post, p));
    }
    branches
}

/// Measures one qubit in the computational basis and collapses the state.
pub fn measure_qubit<R: Rng + ?Sized>(
    s: &TwoQubitState,
    qubit: Qubit,
    rng: &mut R,
) -> (u8, TwoQubitState) {
    let mut branches = qubit_measurement_branches(s, qubit);
    let weights: Vec<f64> = branches.iter().map(|b| b.2).collect();
    let chosen = sample_index(&weights, rng);
    let (bit, post, _) = branches.swap_remove(chosen);
    (bit, post)
}

/// True iff `|<a|b>| >= 1 - tol`.
pub fn equal_up_to_global_phase(a: &TwoQubitState, b: &TwoQubitState, tol: f64) -> bool {
    a.inner(b).norm() >= 1.0 - tol
}
