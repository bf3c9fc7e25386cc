//! The analytic CPhase compiler.
//!
//! Building blocks, from the inside out (chain sites 0..5, left qubit = site 0
//! plus pair (1,2) with label `a`, right qubit = pair (3,4) with label `b`
//! plus site 5):
//!
//! - `U3(φ)`: three pulses `t, t̄, t` on three consecutive sites. It is
//!   diagonal in `((x y)_a z)_c` and puts a phase difference `φ` between the
//!   `a=1, c=1/2` and `c=3/2` states.
//! - `U4(φ) = U3(t₄) U2(t₄) U3(φ) U2(s₄) U3(s₄)` on sites 1-4, `t₄ = 2π/3`.
//! - `U5(φ) = U4(s₅) U3(t₅) U4(φ) U3(s₅) U4(t₅)` on sites 1-5,
//!   `t₅ = arccos(1/4)`; 39 pulses.
//! - one or two single-pair pulses on (1,2) and (3,4) that remove the
//!   remaining single-qubit phases, found numerically.
//!
//! The alternate form replaces each outer `U4` by a product of two
//! `Ũ4(θ) = U3(t) U2(t̄) U3(t)` blocks with `tan(t/2)tan(t̄/2) = −3`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::geometry::{conjugation_angle, n1_cosine, n2_cosine, three_rotation_companion};
use crate::pulse::{compose, invert_sequence, normalize_duration, PulseSequence, PulseSpec};
use crate::verify::{gate_report_unchecked, DIAGONAL_TOL};
use crate::{wrap_angle, Error, Result, CHAIN_SITES, TWO_PI};

/// Residual bound asserted on every solved block.
pub const SOLVE_TOL: f64 = 1e-9;

/// Which of the two `(t, t̄)` solutions realizes a `U3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum U3Variant {
    /// `0 ≤ t < π ≤ t̄ < 2π`; shorter total duration.
    Short,
    /// `t ↔ t̄` swapped.
    Long,
}

impl U3Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            U3Variant::Short => "short",
            U3Variant::Long => "long",
        }
    }

    pub fn letter(self) -> char {
        match self {
            U3Variant::Short => 's',
            U3Variant::Long => 'l',
        }
    }
}

/// Pulse times of one three-pulse block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct U3Solution {
    pub phi: f64,
    pub t: f64,
    pub t_bar: f64,
    pub variant: U3Variant,
}

impl U3Solution {
    /// `(|tan(t/2)tan(t̄/2) + 2|, |t + t̄ − π − φ| mod 2π)`.
    pub fn residuals(&self) -> (f64, f64) {
        let product = libm::tan(0.5 * self.t) * libm::tan(0.5 * self.t_bar) - 1.0 / n1_cosine();
        let phase = crate::angle_distance(self.t + self.t_bar - PI, self.phi);
        (product.abs(), phase)
    }
}

fn check_phase(phi: f64) -> Result<()> {
    if !(phi > 0.0 && phi < TWO_PI) {
        return Err(Error::Domain(format!("phase {phi} is not in (0, 2π)")));
    }
    Ok(())
}

/// The phase produced by the short block with first pulse `t ∈ [0, π]`:
/// `φ(t) = t + π − 2·atan(2·cot(t/2))`, rising monotonically from 0 to 2π.
pub fn u3_phase(t: f64) -> f64 {
    let k = -1.0 / n1_cosine();
    t + PI - 2.0 * libm::atan2(k * libm::cos(0.5 * t), libm::sin(0.5 * t))
}

/// Solve `tan(t/2)tan(t̄/2) = −2`, `t + t̄ − π = φ` for the requested variant.
///
/// `tan(t/2)` and `tan(t̄/2)` are the roots of `x² + 3·cot(φ/2)·x − 2 = 0`;
/// the positive root belongs to the pulse in `(0, π)`. If the closed form
/// misses the residual bound the monotone `φ(t)` is bisected instead.
pub fn solve_u3(phi: f64, variant: U3Variant) -> Result<U3Solution> {
    check_phase(phi)?;
    let (s, c) = (libm::sin(0.5 * phi), libm::cos(0.5 * phi));
    let r = libm::sqrt(9.0 * c * c + 8.0 * s * s);
    // Positive root of x² + (3c/s)x − 2, arranged to avoid cancellation.
    let x = if c >= 0.0 { 4.0 * s / (3.0 * c + r) } else { (r - 3.0 * c) / (2.0 * s) };
    let short_t = 2.0 * libm::atan(x);
    let short_tb = three_rotation_companion(n1_cosine(), short_t)?;
    let sol = arrange(phi, short_t, short_tb, variant);
    let (a, b) = sol.residuals();
    if a < SOLVE_TOL && b < SOLVE_TOL {
        return Ok(sol);
    }
    solve_u3_bisect(phi, variant)
}

/// Bisection on `φ(t)` over `t ∈ (0, π)`; independent of the closed form.
pub fn solve_u3_bisect(phi: f64, variant: U3Variant) -> Result<U3Solution> {
    check_phase(phi)?;
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if u3_phase(mid) < phi {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    let tb = three_rotation_companion(n1_cosine(), t)?;
    Ok(arrange(phi, t, tb, variant))
}

fn arrange(phi: f64, short_t: f64, short_tb: f64, variant: U3Variant) -> U3Solution {
    match variant {
        U3Variant::Short => U3Solution { phi, t: short_t, t_bar: short_tb, variant },
        U3Variant::Long => U3Solution { phi, t: short_tb, t_bar: short_t, variant },
    }
}

/// Three pulses realizing `sol` on consecutive sites `x, y, z` where `(x, y)`
/// is the labelled pair: `(y,z)` for `t`, `(x,y)` for `t̄`, `(y,z)` for `t`.
pub fn u3_sequence(sol: &U3Solution, sites: (usize, usize, usize), n_sites: usize) -> Result<PulseSequence> {
    let (x, y, z) = sites;
    if x.abs_diff(y) != 1 {
        return Err(Error::NonAdjacent(x, y));
    }
    if y.abs_diff(z) != 1 || x == z {
        return Err(Error::NonAdjacent(y, z));
    }
    let mut seq = PulseSequence::new(n_sites);
    seq.pulse(y, z, sol.t)?;
    seq.pulse(x, y, sol.t_bar)?;
    seq.pulse(y, z, sol.t)?;
    Ok(seq)
}

/// Number of `U3` blocks in the full construction.
pub const PROFILE_SLOTS: usize = 11;

/// One [`U3Variant`] per `U3` block, in emission order:
///
/// | slots | block |
/// |-------|-------|
/// | 0-2   | `U4(t₅)`: `U3(s₄)`, `U3(t₅)`, `U3(t₄)` |
/// | 3     | `U3(s₅)` on sites 3-5 |
/// | 4-6   | `U4(φ)`: `U3(s₄)`, `U3(φ)`, `U3(t₄)` |
/// | 7     | `U3(t₅)` on sites 3-5 |
/// | 8-10  | `U4(s₅)`: `U3(s₄)`, `U3(s₅)`, `U3(t₄)` |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VariantProfile {
    slots: [U3Variant; PROFILE_SLOTS],
}

impl VariantProfile {
    pub const CENTRAL_SLOT: usize = 5;

    pub fn new(slots: [U3Variant; PROFILE_SLOTS]) -> Self {
        Self { slots }
    }

    /// `t₄`/`t₅` blocks short, `s₄`/`s₅` blocks long, central block short.
    /// Everything but the central block cancels pairwise; one correction pulse.
    pub fn fig9a() -> Self {
        use U3Variant::{Long as L, Short as S};
        Self { slots: [L, S, S, L, L, S, S, S, L, L, S] }
    }

    /// Every block short; two correction pulses.
    pub fn fig9b() -> Self {
        Self { slots: [U3Variant::Short; PROFILE_SLOTS] }
    }

    pub fn uniform(v: U3Variant) -> Self {
        Self { slots: [v; PROFILE_SLOTS] }
    }

    /// Preset name (`fig9a`, `fig9b`) or eleven `s`/`l` letters.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "fig9a" => return Ok(Self::fig9a()),
            "fig9b" => return Ok(Self::fig9b()),
            _ => {}
        }
        let letters: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if letters.len() != PROFILE_SLOTS {
            return Err(Error::Parse(format!(
                "variant profile needs {PROFILE_SLOTS} letters, got {}",
                letters.len()
            )));
        }
        let mut slots = [U3Variant::Short; PROFILE_SLOTS];
        for (slot, ch) in slots.iter_mut().zip(letters) {
            *slot = match ch.to_ascii_lowercase() {
                's' => U3Variant::Short,
                'l' => U3Variant::Long,
                other => return Err(Error::Parse(format!("unknown variant letter {other:?}"))),
            };
        }
        Ok(Self { slots })
    }

    pub fn slots(&self) -> &[U3Variant; PROFILE_SLOTS] {
        &self.slots
    }

    pub fn central(&self) -> U3Variant {
        self.slots[Self::CENTRAL_SLOT]
    }

    fn u4_slice(&self, start: usize) -> [U3Variant; 3] {
        [self.slots[start], self.slots[start + 1], self.slots[start + 2]]
    }
}

impl fmt::Display for VariantProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.slots.iter().map(|v| v.letter()).collect();
        f.write_str(&s)
    }
}

/// `t₄ = arccos(c/(c+1))` with `c = ẑ·n̂₂`, i.e. 2π/3.
pub fn t4() -> f64 {
    conjugation_angle(n2_cosine(), 1).expect("n2 cosine is in range")
}

/// `t₅ = arccos(c/(c−1))` with `c = ẑ·n̂₂`, i.e. arccos(1/4).
pub fn t5() -> f64 {
    conjugation_angle(n2_cosine(), -1).expect("n2 cosine is in range")
}

fn u3_block(phi: f64, variant: U3Variant, sites: (usize, usize, usize), n_sites: usize) -> Result<PulseSequence> {
    u3_sequence(&solve_u3(phi, variant)?, sites, n_sites)
}

/// `U4(φ)` on sites `first..first+4`: `U3(s₄)`, `U2(s₄)`, `U3(φ)`, `U2(t₄)`, `U3(t₄)`
/// in order of application, with each `U3` on `(first, first+1, first+2)` and the
/// `U2` pulses on `(first+2, first+3)`. Eleven pulses.
pub fn u4_sequence(phi: f64, variants: [U3Variant; 3], first: usize, n_sites: usize) -> Result<PulseSequence> {
    check_phase(phi)?;
    let (t4, s4) = (t4(), TWO_PI - t4());
    let trio = (first, first + 1, first + 2);
    let mut seq = PulseSequence::new(n_sites);
    seq.extend(&u3_block(s4, variants[0], trio, n_sites)?)?;
    seq.pulse(first + 2, first + 3, s4)?;
    seq.extend(&u3_block(phi, variants[1], trio, n_sites)?)?;
    seq.pulse(first + 2, first + 3, t4)?;
    seq.extend(&u3_block(t4, variants[2], trio, n_sites)?)?;
    Ok(seq)
}

/// Mirror image of [`u4_sequence`]: the `U3` blocks act on
/// `(first+3, first+2, first+1)` with labelled pair `(first+2, first+3)` and the
/// `U2` pulses on `(first, first+1)`.
pub fn u4_mirrored_sequence(phi: f64, variants: [U3Variant; 3], first: usize, n_sites: usize) -> Result<PulseSequence> {
    check_phase(phi)?;
    let (t4, s4) = (t4(), TWO_PI - t4());
    let trio = (first + 3, first + 2, first + 1);
    let mut seq = PulseSequence::new(n_sites);
    seq.extend(&u3_block(s4, variants[0], trio, n_sites)?)?;
    seq.pulse(first, first + 1, s4)?;
    seq.extend(&u3_block(phi, variants[1], trio, n_sites)?)?;
    seq.pulse(first, first + 1, t4)?;
    seq.extend(&u3_block(t4, variants[2], trio, n_sites)?)?;
    Ok(seq)
}

const RIGHT_TRIO: (usize, usize, usize) = (3, 4, 5);

/// `U5(φ)` on the six-site chain: `U4(t₅)`, `U3(s₅)`, `U4(φ)`, `U3(t₅)`, `U4(s₅)`
/// in order of application. The standalone `U3` blocks act on sites 3-5 with
/// labelled pair (3,4). 39 pulses; site 0 is never touched.
pub fn u5_sequence(phi: f64, profile: &VariantProfile) -> Result<PulseSequence> {
    check_phase(phi)?;
    let (t5, s5) = (t5(), TWO_PI - t5());
    let slots = profile.slots();
    let n = CHAIN_SITES;
    let mut seq = PulseSequence::new(n);
    seq.extend(&u4_sequence(t5, profile.u4_slice(0), 1, n)?)?;
    seq.extend(&u3_block(s5, slots[3], RIGHT_TRIO, n)?)?;
    seq.extend(&u4_sequence(phi, profile.u4_slice(4), 1, n)?)?;
    seq.extend(&u3_block(t5, slots[7], RIGHT_TRIO, n)?)?;
    seq.extend(&u4_sequence(s5, profile.u4_slice(8), 1, n)?)?;
    Ok(seq)
}

/// Single-pair pulses on (1,2) and (3,4) that bring the encoded gate of `core`
/// to `diag(1, 1, 1, e^{iχ})` up to global phase, where `χ` is the entangling
/// phase of `core`.
///
/// The durations are read off the diagonal phases of the composed gate: a
/// pulse of length `s` on (1,2) multiplies every `a = 1` state by `e^{−is}`,
/// and likewise for (3,4) and `b`. Zero-length corrections are omitted.
pub fn correction_pulses(core: &PulseSequence) -> Result<Vec<PulseSpec>> {
    if core.n_sites() != CHAIN_SITES {
        return Err(Error::Site(format!("corrections need a {CHAIN_SITES}-site chain")));
    }
    if core.is_empty() {
        return Ok(Vec::new());
    }
    let u = compose(core);
    let report = gate_report_unchecked(u.matrix(), 1, 1)?;
    let worst = report.off_diagonal.max(report.leakage_norm);
    let Some(p) = report.diagonal_phases else {
        return Err(Error::NotDiagonal(worst));
    };
    if worst > DIAGONAL_TOL {
        return Err(Error::NotDiagonal(worst));
    }
    let mut out = Vec::new();
    if let Some(ta) = normalize_duration(p[2] - p[0], DIAGONAL_TOL) {
        out.push(PulseSpec::new(1, 2, ta)?);
    }
    if let Some(tb) = normalize_duration(p[1] - p[0], DIAGONAL_TOL) {
        out.push(PulseSpec::new(3, 4, tb)?);
    }
    Ok(out)
}

/// A compiled CPhase schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisResult {
    pub core: PulseSequence,
    pub corrections: Vec<PulseSpec>,
    pub phi: f64,
    pub profile: VariantProfile,
    /// `θ₁` of the alternate construction, when used.
    pub alt_theta1: Option<f64>,
}

impl SynthesisResult {
    /// Core followed by the correction pulses.
    pub fn full_sequence(&self) -> PulseSequence {
        let mut seq = self.core.clone();
        for p in &self.corrections {
            seq.push(*p).expect("corrections act inside the chain");
        }
        seq
    }
}

/// Compile `CPhase(φ) = diag(1, 1, 1, e^{−iφ})` with the given variant profile.
pub fn synthesize_cphase(phi: f64, profile: &VariantProfile) -> Result<SynthesisResult> {
    let core = u5_sequence(phi, profile)?;
    let corrections = correction_pulses(&core)?;
    Ok(SynthesisResult { core, corrections, phi, profile: *profile, alt_theta1: None })
}

/// Compile the alternate form with split `θ₁ + θ₂ = t₅` (all blocks short).
pub fn synthesize_cphase_alt(phi: f64, theta1: f64) -> Result<SynthesisResult> {
    let core = alt_u5_sequence(phi, theta1)?;
    let corrections = correction_pulses(&core)?;
    Ok(SynthesisResult {
        core,
        corrections,
        phi,
        profile: VariantProfile::fig9b(),
        alt_theta1: Some(theta1),
    })
}

/// `k = −1/(ẑ·n̂₂) = 3`.
fn tilde_k() -> f64 {
    -1.0 / n2_cosine()
}

/// `θ(t) = t − t̄ + π` of the three-operation block on the four-spin
/// pseudospin, with `t̄` the companion of `t` for axis cosine −1/3.
/// For `t ∈ [0, π]` this is `t − π + 2·atan(3·cot(t/2))`.
pub fn tilde_phase(t: f64) -> f64 {
    if t <= PI {
        t - PI + 2.0 * libm::atan2(tilde_k() * libm::cos(0.5 * t), libm::sin(0.5 * t))
    } else {
        TWO_PI - tilde_phase(TWO_PI - t)
    }
}

/// The maximum of `θ(t)` on `(0, π)` and where it is attained.
///
/// Stationarity of `t − π + 2·atan(k·cot(t/2))` gives `cot²(t/2) = 1/k`;
/// the reachable set is `(0, max] ∪ [2π − max, 2π)`.
pub fn theta_range() -> (f64, f64) {
    let k = tilde_k();
    let t_star = 2.0 * libm::atan(libm::sqrt(k));
    (t_star, tilde_phase(t_star))
}

/// Solve `tan(t/2)tan(t̄/2) = −3`, `t − t̄ + π ≡ θ` for `(t, t̄)`.
///
/// `θ(t)` is two-to-one on each half of its range; `branch` 0 selects the
/// smaller `t`, branch 1 the larger. With `x = tan(t/2)`,
/// `x² − 2·cot(θ/2)·x + 3 = 0`.
pub fn solve_u3_tilde(theta: f64, branch: usize) -> Result<(f64, f64)> {
    if branch > 1 {
        return Err(Error::Domain(format!("branch {branch} is not 0 or 1")));
    }
    let (_, max) = theta_range();
    let theta_w = wrap_angle(theta);
    if !theta.is_finite() || theta_w == 0.0 {
        return Err(Error::UnachievableTheta(theta));
    }
    if theta_w > PI {
        // Mirror t ↦ 2π − t maps θ ↦ 2π − θ and reverses the branch order.
        let (t, _) = solve_u3_tilde(TWO_PI - theta_w, 1 - branch)?;
        let t = TWO_PI - t;
        return Ok((t, three_rotation_companion(n2_cosine(), t)?));
    }
    if theta_w > max + 1e-12 {
        return Err(Error::UnachievableTheta(theta));
    }
    let k = tilde_k();
    let cot = 1.0 / libm::tan(0.5 * theta_w);
    let disc = (cot * cot - k).max(0.0);
    let root = libm::sqrt(disc);
    let x = if branch == 0 { k / (cot + root) } else { cot + root };
    let t = 2.0 * libm::atan(x);
    let tb = three_rotation_companion(n2_cosine(), t)?;
    Ok((t, tb))
}

/// `Ũ4(θ)` blocks: `U3(t)` on (1,2,3), `U2(t̄)` on (3,4), `U3(t)`.
pub fn u4_tilde_sequence(theta: f64, branch: usize, first: usize, n_sites: usize) -> Result<PulseSequence> {
    let (t, tb) = solve_u3_tilde(theta, branch)?;
    let trio = (first, first + 1, first + 2);
    let mut seq = PulseSequence::new(n_sites);
    seq.extend(&u3_block(t, U3Variant::Short, trio, n_sites)?)?;
    seq.pulse(first + 2, first + 3, tb)?;
    seq.extend(&u3_block(t, U3Variant::Short, trio, n_sites)?)?;
    Ok(seq)
}

/// `Ũ4(θ₂) Ũ4(θ₁)` with the two touching `U3` blocks merged into one:
/// `U3(t₁)`, `U2(t̄₁)`, `U3(t₁ + t₂)`, `U2(t̄₂)`, `U3(t₂)`. Eleven pulses.
pub fn u4_tilde_pair_sequence(theta1: f64, theta2: f64, first: usize, n_sites: usize) -> Result<PulseSequence> {
    let (t1, tb1) = solve_u3_tilde(theta1, 0)?;
    let (t2, tb2) = solve_u3_tilde(theta2, 0)?;
    let merged = wrap_angle(t1 + t2);
    let trio = (first, first + 1, first + 2);
    let mut seq = PulseSequence::new(n_sites);
    seq.extend(&u3_block(t1, U3Variant::Short, trio, n_sites)?)?;
    seq.pulse(first + 2, first + 3, tb1)?;
    seq.extend(&u3_block(merged, U3Variant::Short, trio, n_sites)?)?;
    seq.pulse(first + 2, first + 3, tb2)?;
    seq.extend(&u3_block(t2, U3Variant::Short, trio, n_sites)?)?;
    Ok(seq)
}

/// [`u5_sequence`] with the outer `U4(t₅)` replaced by `Ũ4(t₅ − θ₁) Ũ4(θ₁)` and
/// the outer `U4(s₅)` by its exact inverse. 39 pulses; all blocks short.
pub fn alt_u5_sequence(phi: f64, theta1: f64) -> Result<PulseSequence> {
    check_phase(phi)?;
    let (t5, s5) = (t5(), TWO_PI - t5());
    let theta2 = t5 - theta1;
    let (_, max) = theta_range();
    for th in [theta1, theta2] {
        if !(th > 0.0 && th <= max + 1e-12) {
            return Err(Error::UnachievableTheta(th));
        }
    }
    let n = CHAIN_SITES;
    let outer = u4_tilde_pair_sequence(theta1, theta2, 1, n)?;
    let mut seq = PulseSequence::new(n);
    seq.extend(&outer)?;
    seq.extend(&u3_block(s5, U3Variant::Short, RIGHT_TRIO, n)?)?;
    seq.extend(&u4_sequence(phi, [U3Variant::Short; 3], 1, n)?)?;
    seq.extend(&u3_block(t5, U3Variant::Short, RIGHT_TRIO, n)?)?;
    seq.extend(&invert_sequence(&outer))?;
    Ok(seq)
}
