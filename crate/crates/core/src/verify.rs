//! Dense checks of compiled sequences.
//!
//! Everything here works on the full product space: a sequence is composed
//! into a `2^n × 2^n` unitary and then projected onto coupling-tree states.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{cis, distance_up_to_phase, CMatrix, SquareUnitary, ONE, ZERO};
use crate::pulse::{compose, conservation_residuals, exchange_hamiltonian, PulseSequence};
use crate::spin::{build_state, orthonormality_deviation, CouplingTree, HalfInt, StateVector, ORTHO_TOL};
use crate::synthesis::{theta_range, u4_mirrored_sequence, u4_sequence, u4_tilde_sequence, U3Variant};
use crate::{wrap_angle, Error, Result, CHAIN_SITES, TWO_PI};

/// Off-diagonal magnitude below which a gate counts as diagonal.
pub const DIAGONAL_TOL: f64 = 1e-9;
/// Bound on `‖[U, S²]‖_F` and `‖[U, S_z]‖_F`.
pub const CONSERVATION_TOL: f64 = 1e-8;
/// Residual bound for an invariant span.
pub const INVARIANCE_TOL: f64 = 1e-9;

fn phase_of(z: Complex64) -> f64 {
    libm::atan2(z.im, z.re)
}

/// Signed angle in `(−π, π]`.
fn centered(x: f64) -> f64 {
    let w = wrap_angle(x);
    if w > PI {
        w - TWO_PI
    } else {
        w
    }
}

fn states_matrix(states: &[StateVector]) -> CMatrix {
    let cols: Vec<&[Complex64]> = states.iter().map(|s| s.amplitudes()).collect();
    CMatrix::from_columns(&cols)
}

/// The four encoded two-qubit states `|ab⟩` at total spin `g` and projection `M`,
/// ordered `00, 01, 10, 11`.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedBasis {
    g: u32,
    m: i32,
    trees: Vec<CouplingTree>,
    states: Vec<StateVector>,
}

impl EncodedBasis {
    pub fn new(g: u32, m: i32) -> Result<Self> {
        if g > 1 {
            return Err(Error::Triangle(format!("two spin-1/2 qubits cannot couple to {g}")));
        }
        if m.unsigned_abs() > g {
            return Err(Error::Triangle(format!("projection {m} exceeds total spin {g}")));
        }
        let mut trees = Vec::with_capacity(4);
        for a in 0..2 {
            for b in 0..2 {
                let text = format!("((0 (1 2)_{a})_1/2 ((3 4)_{b} 5)_1/2)_{g}");
                trees.push(CouplingTree::parse(&text, HalfInt::integer(m))?);
            }
        }
        let states: Vec<StateVector> = trees.iter().map(build_state).collect();
        let dev = orthonormality_deviation(&states);
        if dev > ORTHO_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { g, m, trees, states })
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn trees(&self) -> &[CouplingTree] {
        &self.trees
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// `64 × 4` isometry with the basis states as columns.
    pub fn isometry(&self) -> CMatrix {
        states_matrix(&self.states)
    }
}

/// What a six-site unitary does to the encoded qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct GateReport {
    pub g: u32,
    pub m: i32,
    /// `⟨ab|U|a'b'⟩`.
    pub gate: CMatrix,
    /// Largest singular value of the part of `U·P` that leaves the encoded span.
    pub leakage_norm: f64,
    pub off_diagonal: f64,
    /// `φ_ab = arg⟨ab|U|ab⟩` when the gate is diagonal.
    pub diagonal_phases: Option<[f64; 4]>,
    /// `φ₀₀ − φ₀₁ − φ₁₀ + φ₁₁` in `[0, 2π)`, when the gate is diagonal.
    pub entangling_phase: Option<f64>,
    /// Local invariants, when the gate is unitary.
    pub makhlin: Option<(Complex64, f64)>,
}

impl GateReport {
    pub fn is_diagonal(&self) -> bool {
        self.diagonal_phases.is_some()
    }
}

/// Project a six-site unitary onto the encoded basis `(g, M)`.
pub fn gate_report(u: &SquareUnitary, g: u32, m: i32) -> Result<GateReport> {
    if u.dim() != 1 << CHAIN_SITES {
        return Err(Error::Site(format!("expected a {CHAIN_SITES}-site unitary")));
    }
    let (s2, sz) = conservation_residuals(u.matrix(), CHAIN_SITES);
    if s2.max(sz) > CONSERVATION_TOL {
        return Err(Error::NotConserving(s2.max(sz)));
    }
    gate_report_unchecked(u.matrix(), g, m)
}

pub(crate) fn gate_report_unchecked(u: &CMatrix, g: u32, m: i32) -> Result<GateReport> {
    let basis = EncodedBasis::new(g, m)?;
    let v = basis.isometry();
    let w = u.matmul(&v);
    let gate = v.adjoint().matmul(&w);
    let leakage_norm = w.sub(&v.matmul(&gate)).spectral_norm();
    let off_diagonal = gate.max_off_diagonal();
    let diagonal_phases = (off_diagonal < DIAGONAL_TOL).then(|| {
        let d = gate.diagonal();
        [phase_of(d[0]), phase_of(d[1]), phase_of(d[2]), phase_of(d[3])]
    });
    let entangling_phase = diagonal_phases.map(|p| wrap_angle(p[0] - p[1] - p[2] + p[3]));
    let makhlin = makhlin_invariants(&gate).ok();
    Ok(GateReport { g, m, gate, leakage_norm, off_diagonal, diagonal_phases, entangling_phase, makhlin })
}

/// `diag(1, 1, 1, e^{−iφ})`.
pub fn cphase_target(phi: f64) -> CMatrix {
    CMatrix::from_diagonal(&[ONE, ONE, ONE, cis(-phi)])
}

/// Entrywise distance of `gate` from `CPhase(φ)` after removing global phase.
pub fn cphase_deviation(gate: &CMatrix, phi: f64) -> f64 {
    distance_up_to_phase(gate, &cphase_target(phi))
}

fn magic_basis() -> CMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let (r, i) = (Complex64::new(h, 0.0), Complex64::new(0.0, h));
    CMatrix::from_rows(
        4,
        4,
        alloc::vec![
            r, ZERO, ZERO, i, //
            ZERO, i, r, ZERO, //
            ZERO, i, -r, ZERO, //
            r, ZERO, ZERO, -i,
        ],
    )
}

/// Local invariants `(G1, G2)` of a two-qubit gate: with `m = U_Bᵀ U_B` in the
/// magic basis, `G1 = tr²(m) / (16 det U)` and `G2 = (tr²(m) − tr(m²)) / (4 det U)`.
pub fn makhlin_invariants(gate: &CMatrix) -> Result<(Complex64, f64)> {
    if gate.rows() != 4 || gate.cols() != 4 {
        return Err(Error::Domain("local invariants need a 4 × 4 gate".into()));
    }
    let dev = gate.unitarity_deviation();
    if dev > 1e-9 {
        return Err(Error::NonUnitary(dev));
    }
    let q = magic_basis();
    let ub = q.adjoint().matmul(gate).matmul(&q);
    let m = ub.transpose().matmul(&ub);
    let det = gate.determinant();
    let tr = m.trace();
    let tr2 = m.matmul(&m).trace();
    let g1 = tr * tr / (det * 16.0);
    let g2 = (tr * tr - tr2) / (det * 4.0);
    Ok((g1, g2.re))
}

/// The invariants of CNOT, `(0, 1)`.
pub const CNOT_MAKHLIN: (Complex64, f64) = (Complex64 { re: 0.0, im: 0.0 }, 1.0);

/// Distance between two invariant pairs.
pub fn makhlin_distance(a: (Complex64, f64), b: (Complex64, f64)) -> f64 {
    (a.0 - b.0).norm().max((a.1 - b.1).abs())
}

/// `⟨tree_i|U|tree_j⟩` over a basis that `U` maps into itself.
pub fn sector_matrix(u: &CMatrix, basis: &[CouplingTree]) -> Result<CMatrix> {
    let states: Vec<StateVector> = basis.iter().map(build_state).collect();
    sector_matrix_of_states(u, &states)
}

fn sector_matrix_of_states(u: &CMatrix, states: &[StateVector]) -> Result<CMatrix> {
    let Some(first) = states.first() else {
        return Err(Error::Domain("empty basis".into()));
    };
    if u.rows() != first.amplitudes().len() || !u.is_square() {
        return Err(Error::Domain(format!(
            "{}-dimensional operator on {}-site states",
            u.rows(),
            first.n_sites()
        )));
    }
    let dev = orthonormality_deviation(states);
    if dev > ORTHO_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    let v = states_matrix(states);
    let w = u.matmul(&v);
    let block = v.adjoint().matmul(&w);
    let residual = w.sub(&v.matmul(&block)).max_abs();
    if residual > INVARIANCE_TOL {
        return Err(Error::NotInvariant(residual));
    }
    Ok(block)
}

/// Outcome of comparing the `g = 0` and `g = 1` actions of a sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct GIndependence {
    pub holds: bool,
    /// Largest entrywise difference of `⟨(0 ψ_i)_g|U|(0 ψ_j)_g⟩` between the two
    /// sectors, where `ψ_ab = ((1 2)_a ((3 4)_b 5)_{1/2})_{1/2}`.
    pub projected_deviation: f64,
    /// Distance between the two encoded gates up to global phase; only
    /// computed when both are leakage-free.
    pub encoded_deviation: Option<f64>,
}

fn five_spin_states(g: u32) -> Result<Vec<StateVector>> {
    let mut out = Vec::with_capacity(4);
    for a in 0..2 {
        for b in 0..2 {
            let text = format!("(0 ((1 2)_{a} ((3 4)_{b} 5)_1/2)_1/2)_{g}");
            out.push(build_state(&CouplingTree::parse(&text, HalfInt::ZERO)?));
        }
    }
    Ok(out)
}

/// Check that a sequence on sites 1-5 acts identically whether the two qubits
/// couple to `g = 0` or `g = 1`.
///
/// Site 0 only enters through the final coupling, so the five-spin block with
/// total spin 1/2 must carry the same matrix in both sectors. When both encoded
/// gates are leakage-free they are compared as well, after fixing each basis
/// state's sign against its five-spin component.
pub fn g_independence_check(seq: &PulseSequence) -> Result<GIndependence> {
    if seq.n_sites() != CHAIN_SITES {
        return Err(Error::Site(format!("expected a {CHAIN_SITES}-site sequence")));
    }
    if seq.touches(0) {
        return Err(Error::TouchesSiteZero);
    }
    let u = compose(seq);
    let mut projected = Vec::with_capacity(2);
    let mut encoded = Vec::with_capacity(2);
    for g in 0..2 {
        let five = five_spin_states(g)?;
        let v = states_matrix(&five);
        projected.push(v.adjoint().matmul(&u.matrix().matmul(&v)));
        let report = gate_report_unchecked(u.matrix(), g, 0)?;
        let basis = EncodedBasis::new(g, 0)?;
        let signs: Vec<f64> = basis
            .states()
            .iter()
            .zip(&five)
            .map(|(e, f)| if f.inner(e).re < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let mut gate = report.gate.clone();
        for i in 0..4 {
            for j in 0..4 {
                gate[(i, j)] *= signs[i] * signs[j];
            }
        }
        encoded.push((gate, report.leakage_norm));
    }
    let projected_deviation = projected[0].max_distance(&projected[1]);
    let encoded_deviation = (encoded[0].1 < DIAGONAL_TOL && encoded[1].1 < DIAGONAL_TOL)
        .then(|| distance_up_to_phase(&encoded[1].0, &encoded[0].0));
    let holds = projected_deviation < 1e-9 && encoded_deviation.is_none_or(|d| d < 1e-9);
    Ok(GIndependence { holds, projected_deviation, encoded_deviation })
}

/// Largest difference between encoded gates and leakage norms across every `M`
/// of both `g` sectors. Returns `(holds at 1e-10, deviation)`.
pub fn sz_independence_check(seq: &PulseSequence) -> Result<(bool, f64)> {
    if seq.n_sites() != CHAIN_SITES {
        return Err(Error::Site(format!("expected a {CHAIN_SITES}-site sequence")));
    }
    let u = compose(seq);
    let mut worst: f64 = 0.0;
    for g in 0..2i32 {
        let reference = gate_report_unchecked(u.matrix(), g as u32, -g)?;
        for m in -g + 1..=g {
            let r = gate_report_unchecked(u.matrix(), g as u32, m)?;
            worst = worst
                .max(r.gate.max_distance(&reference.gate))
                .max((r.leakage_norm - reference.leakage_norm).abs());
        }
    }
    Ok((worst < 1e-10, worst))
}

/// Number of sites in the four-spin model.
const FOUR: usize = 4;

/// `((0 1)_a (2 3)_b)_d` at `M = 0` on a four-site space, grouped by `d`:
/// `d=0: 00, 11`, `d=1: 01, 10, 11`, `d=2: 11`.
pub fn four_spin_trees() -> Result<[Vec<CouplingTree>; 3]> {
    let labels: [&[(u32, u32)]; 3] = [&[(0, 0), (1, 1)], &[(0, 1), (1, 0), (1, 1)], &[(1, 1)]];
    let mut out: [Vec<CouplingTree>; 3] = Default::default();
    for (d, pairs) in labels.iter().enumerate() {
        for (a, b) in pairs.iter() {
            let text = format!("((0 1)_{a} (2 3)_{b})_{d}");
            out[d].push(CouplingTree::parse(&text, HalfInt::ZERO)?);
        }
    }
    Ok(out)
}

/// Traces of a Hamiltonian over the `d = 0, 1, 2` sectors of four spins and
/// their alternating sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceCheck {
    pub traces: [f64; 3],
    pub alternating_sum: f64,
}

/// Map a central pair of the six-site chain onto the four-spin model.
fn central_pair(i: usize, j: usize) -> Result<(usize, usize)> {
    if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i == j {
        return Err(Error::Site(format!("pair ({i}, {j}) is not within the central sites 1-4")));
    }
    Ok((i - 1, j - 1))
}

/// Sector traces of `S_i·S_j + 3/4` for a pair within chain sites 1-4.
pub fn four_spin_trace_check(i: usize, j: usize) -> Result<TraceCheck> {
    four_spin_trace_check_weighted(&[(i, j, 1.0)])
}

/// Sector traces of `Σ w·(S_i·S_j + 3/4)`.
pub fn four_spin_trace_check_weighted(terms: &[(usize, usize, f64)]) -> Result<TraceCheck> {
    let dim = 1 << FOUR;
    let mut h = CMatrix::zeros(dim, dim);
    for &(i, j, w) in terms {
        let (a, b) = central_pair(i, j)?;
        h = h.add(&exchange_hamiltonian(FOUR, a, b)?.scale(Complex64::new(w, 0.0)));
    }
    let sectors = four_spin_trees()?;
    let mut traces = [0.0; 3];
    for (d, trees) in sectors.iter().enumerate() {
        for tree in trees {
            let s = build_state(tree);
            let hs = h.apply(s.amplitudes());
            let e: Complex64 = s.amplitudes().iter().zip(&hs).map(|(x, y)| x.conj() * y).sum();
            traces[d] += e.re;
        }
    }
    Ok(TraceCheck { traces, alternating_sum: traces[0] - traces[1] + traces[2] })
}

/// Phases of a four-spin unitary that is diagonal in `((0 1)_a (2 3)_b)_d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourSpinPhases {
    /// `φ₀₀, φ₀₁, φ₁₀`.
    pub single: [f64; 3],
    /// `φ₁₁` in each of `d = 0, 1, 2`.
    pub both: [f64; 3],
}

impl FourSpinPhases {
    /// `φ₀₀ − φ₀₁ − φ₁₀ + φ₁₁^{(0)} − φ₁₁^{(1)} + φ₁₁^{(2)}`, centred on 0.
    ///
    /// When `φ₁₁` does not depend on `d` this is the usual entangling phase.
    pub fn entangling_phase(&self) -> f64 {
        let [p00, p01, p10] = self.single;
        let [q0, q1, q2] = self.both;
        centered(p00 - p01 - p10 + q0 - q1 + q2)
    }

    /// Spread of `φ₁₁` across `d`; zero iff the `11` block is proportional to
    /// the identity.
    pub fn d_spread(&self) -> f64 {
        let [q0, q1, q2] = self.both;
        crate::angle_distance(q0, q1).max(crate::angle_distance(q1, q2)).max(crate::angle_distance(q0, q2))
    }
}

/// Sector matrices of a four-spin unitary for `d = 0, 1, 2`.
pub fn four_spin_sectors(u: &CMatrix) -> Result<[CMatrix; 3]> {
    let trees = four_spin_trees()?;
    Ok([sector_matrix(u, &trees[0])?, sector_matrix(u, &trees[1])?, sector_matrix(u, &trees[2])?])
}

/// `det|_{d=0} · det|_{d=2} / det|_{d=1}`.
pub fn four_spin_determinant_ratio(u: &CMatrix) -> Result<Complex64> {
    let [s0, s1, s2] = four_spin_sectors(u)?;
    Ok(s0.determinant() * s2.determinant() / s1.determinant())
}

/// Phases of a four-spin unitary, or `NotDiagonal` with the offending weight.
pub fn four_spin_phases(u: &CMatrix) -> Result<FourSpinPhases> {
    let sectors = four_spin_sectors(u)?;
    let off = sectors.iter().map(CMatrix::max_off_diagonal).fold(0.0, f64::max);
    if off > DIAGONAL_TOL {
        return Err(Error::NotDiagonal(off));
    }
    let [s0, s1, s2] = sectors;
    Ok(FourSpinPhases {
        single: [phase_of(s0[(0, 0)]), phase_of(s1[(0, 0)]), phase_of(s1[(1, 1)])],
        both: [phase_of(s0[(1, 1)]), phase_of(s1[(2, 2)]), phase_of(s2[(0, 0)])],
    })
}

/// Settings for [`four_spin_nogo_demo`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NogoConfig {
    /// Fully random sequences for the determinant identity.
    pub random_trials: usize,
    /// Diagonal-by-construction sequences for the entangling phase.
    pub diagonal_trials: usize,
    /// Pulses per random sequence.
    pub pulses_per_trial: usize,
    /// Blocks per diagonal sequence.
    pub blocks_per_trial: usize,
    pub seed: u64,
}

impl Default for NogoConfig {
    fn default() -> Self {
        Self { random_trials: 200, diagonal_trials: 50, pulses_per_trial: 20, blocks_per_trial: 6, seed: 7 }
    }
}

/// Results of the four-spin no-go demonstration.
#[derive(Clone, Debug, PartialEq)]
pub struct NogoReport {
    pub seed: u64,
    /// Sector traces for each of the six central pairs, in chain numbering.
    pub pair_traces: Vec<((usize, usize), TraceCheck)>,
    /// Largest `|alternating sum|` over the pairs and random positive mixtures.
    pub max_trace_alternating: f64,
    pub random_trials: usize,
    /// Largest `|det₀·det₂/det₁ − 1|`.
    pub max_determinant_deviation: f64,
    pub diagonal_trials: usize,
    /// Diagonal-by-construction sequences that were not diagonal after all.
    pub non_diagonal: usize,
    /// Largest `|entangling phase|` over the diagonal sequences.
    pub max_entangling_phase: f64,
    /// Largest `φ₁₁` spread across `d` over the diagonal sequences.
    pub max_d_spread: f64,
    /// Entangling phase of the bare `U4(π)` block.
    pub u4_entangling_phase: f64,
}

impl NogoReport {
    /// Every identity within its tolerance.
    pub fn passed(&self) -> bool {
        self.max_trace_alternating < 1e-12
            && self.max_determinant_deviation < 1e-8
            && self.non_diagonal == 0
            && self.max_entangling_phase < 1e-8
            && self.u4_entangling_phase.abs() < 1e-8
    }
}

/// Deterministic per-trial generator: the seed picks the key, the trial the stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_duration(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(1e-6..TWO_PI - 1e-6)
}

fn random_four_spin_sequence(rng: &mut ChaCha8Rng, pulses: usize) -> Result<PulseSequence> {
    let mut seq = PulseSequence::new(FOUR);
    for _ in 0..pulses {
        let i = rng.random_range(0..FOUR - 1);
        seq.pulse(i, i + 1, random_duration(rng))?;
    }
    Ok(seq)
}

fn random_variants(rng: &mut ChaCha8Rng) -> [U3Variant; 3] {
    let mut pick = || if rng.random::<bool>() { U3Variant::Short } else { U3Variant::Long };
    [pick(), pick(), pick()]
}

/// A product of blocks that are each diagonal in `((0 1)_a (2 3)_b)_d`:
/// single-pair pulses on (0,1) and (2,3), `U4`, its mirror image and `Ũ4`.
fn diagonal_four_spin_sequence(rng: &mut ChaCha8Rng, blocks: usize) -> Result<PulseSequence> {
    let (_, theta_max) = theta_range();
    let mut seq = PulseSequence::new(FOUR);
    for _ in 0..blocks {
        match rng.random_range(0..5u32) {
            0 => seq.pulse(0, 1, random_duration(rng))?,
            1 => seq.pulse(2, 3, random_duration(rng))?,
            2 => {
                let v = random_variants(rng);
                seq.extend(&u4_sequence(random_duration(rng), v, 0, FOUR)?)?
            }
            3 => {
                let v = random_variants(rng);
                seq.extend(&u4_mirrored_sequence(random_duration(rng), v, 0, FOUR)?)?
            }
            _ => {
                let theta = rng.random_range(1e-3..theta_max - 1e-3);
                let theta = if rng.random::<bool>() { theta } else { TWO_PI - theta };
                let branch = rng.random_range(0..2usize);
                seq.extend(&u4_tilde_sequence(theta, branch, 0, FOUR)?)?
            }
        }
    }
    Ok(seq)
}

/// Numerical evidence that four spins cannot make a leakage-free entangling
/// gate: sector-trace alternation, the determinant identity on random
/// sequences, and vanishing entangling phase on diagonal ones.
pub fn four_spin_nogo_demo(config: &NogoConfig) -> Result<NogoReport> {
    if config.random_trials == 0 && config.diagonal_trials == 0 {
        return Err(Error::Domain("no trials requested".into()));
    }
    let mut pair_traces = Vec::new();
    let mut max_trace: f64 = 0.0;
    for i in 1..=4 {
        for j in i + 1..=4 {
            let t = four_spin_trace_check(i, j)?;
            max_trace = max_trace.max(t.alternating_sum.abs());
            pair_traces.push(((i, j), t));
        }
    }
    let mut mix_rng = trial_rng(config.seed, u64::MAX);
    for _ in 0..32 {
        let mut terms = Vec::new();
        for i in 1..=4 {
            for j in i + 1..=4 {
                terms.push((i, j, mix_rng.random_range(0.0..5.0)));
            }
        }
        let t = four_spin_trace_check_weighted(&terms)?;
        max_trace = max_trace.max(t.alternating_sum.abs());
    }

    let mut max_det: f64 = 0.0;
    for trial in 0..config.random_trials {
        let mut rng = trial_rng(config.seed, trial as u64);
        let seq = random_four_spin_sequence(&mut rng, config.pulses_per_trial)?;
        let ratio = four_spin_determinant_ratio(compose(&seq).matrix())?;
        max_det = max_det.max((ratio - ONE).norm());
    }

    let mut non_diagonal = 0;
    let mut max_phase: f64 = 0.0;
    let mut max_spread: f64 = 0.0;
    for trial in 0..config.diagonal_trials {
        let mut rng = trial_rng(config.seed, (config.random_trials + trial) as u64);
        let seq = diagonal_four_spin_sequence(&mut rng, config.blocks_per_trial)?;
        match four_spin_phases(compose(&seq).matrix()) {
            Ok(p) => {
                max_phase = max_phase.max(p.entangling_phase().abs());
                max_spread = max_spread.max(p.d_spread());
            }
            Err(Error::NotDiagonal(_)) => non_diagonal += 1,
            Err(e) => return Err(e),
        }
    }

    let u4 = u4_sequence(PI, [U3Variant::Short; 3], 0, FOUR)?;
    let u4_entangling_phase = four_spin_phases(compose(&u4).matrix())?.entangling_phase();

    Ok(NogoReport {
        seed: config.seed,
        pair_traces,
        max_trace_alternating: max_trace,
        random_trials: config.random_trials,
        max_determinant_deviation: max_det,
        diagonal_trials: config.diagonal_trials,
        non_diagonal,
        max_entangling_phase: max_phase,
        max_d_spread: max_spread,
        u4_entangling_phase,
    })
}
