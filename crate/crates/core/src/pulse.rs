//! Exchange pulses on a chain and their composition.
//!
//! A pulse of duration `t` on sites `(i, j)` is `exp(−i t (S_i·S_j + 3/4))`:
//! it leaves the pair singlet alone and multiplies the pair triplet by
//! `e^{−it}`. Durations are in units of `1/J` with `ħ = 1`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{cis, CMatrix, SquareUnitary, ONE};
use crate::{wrap_angle, Error, Result, TWO_PI};

/// One exchange pulse between nearest-neighbour sites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSpec {
    pair: (usize, usize),
    t: f64,
}

impl PulseSpec {
    /// Sites are stored in ascending order; they must be adjacent and the
    /// duration must lie in `(0, 2π)`.
    pub fn new(i: usize, j: usize, t: f64) -> Result<Self> {
        if i.abs_diff(j) != 1 {
            return Err(Error::NonAdjacent(i, j));
        }
        if !(t > 0.0 && t < TWO_PI) {
            return Err(Error::Duration(t));
        }
        Ok(Self { pair: (i.min(j), i.max(j)), t })
    }

    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The pulse that undoes this one: same pair, duration `2π − t`.
    pub fn inverse(&self) -> PulseSpec {
        PulseSpec { pair: self.pair, t: TWO_PI - self.t }
    }

    pub fn touches(&self, site: usize) -> bool {
        self.pair.0 == site || self.pair.1 == site
    }
}

/// Ordered pulses on an `n`-site chain; index 0 acts first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PulseSequence {
    n_sites: usize,
    pulses: Vec<PulseSpec>,
}

impl PulseSequence {
    pub fn new(n_sites: usize) -> Self {
        Self { n_sites, pulses: Vec::new() }
    }

    pub fn from_pulses(n_sites: usize, pulses: Vec<PulseSpec>) -> Result<Self> {
        let mut seq = Self::new(n_sites);
        for p in pulses {
            seq.push(p)?;
        }
        Ok(seq)
    }

    pub fn push(&mut self, p: PulseSpec) -> Result<()> {
        if p.pair.1 >= self.n_sites {
            return Err(Error::Site(alloc::format!(
                "pulse on ({}, {}) outside a {}-site chain",
                p.pair.0,
                p.pair.1,
                self.n_sites
            )));
        }
        self.pulses.push(p);
        Ok(())
    }

    /// Push a pulse given by sites and duration.
    pub fn pulse(&mut self, i: usize, j: usize, t: f64) -> Result<()> {
        self.push(PulseSpec::new(i, j, t)?)
    }

    /// Append all pulses of `other`, which then act after the current ones.
    pub fn extend(&mut self, other: &PulseSequence) -> Result<()> {
        for p in &other.pulses {
            self.push(*p)?;
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn pulses(&self) -> &[PulseSpec] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn touches(&self, site: usize) -> bool {
        self.pulses.iter().any(|p| p.touches(site))
    }

    /// Move every pulse by `offset` sites onto a chain of `n_sites`.
    pub fn relocate(&self, n_sites: usize, offset: isize) -> Result<PulseSequence> {
        let mut out = PulseSequence::new(n_sites);
        for p in &self.pulses {
            let shift = |s: usize| -> Result<usize> {
                let v = s as isize + offset;
                if v < 0 {
                    return Err(Error::Site(alloc::format!("site {s} shifted below 0")));
                }
                Ok(v as usize)
            };
            out.pulse(shift(p.pair.0)?, shift(p.pair.1)?, p.t)?;
        }
        Ok(out)
    }
}

/// `P_singlet(i,j) + e^{−it} P_triplet(i,j)` on `n_sites`, identity elsewhere.
///
/// Sites need not be adjacent here; `t` may be any value in `[0, 2π]`.
pub fn exchange_unitary(n_sites: usize, i: usize, j: usize, t: f64) -> Result<SquareUnitary> {
    check_pair(n_sites, i, j)?;
    if !(0.0..=TWO_PI).contains(&t) {
        return Err(Error::Duration(t));
    }
    let dim = 1usize << n_sites;
    let (alpha, beta) = pulse_coefficients(t);
    let mut m = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        m[(k, k)] += alpha;
        m[(swap_bits(k, i, j), k)] += beta;
    }
    Ok(SquareUnitary::from_trusted(m))
}

fn check_pair(n_sites: usize, i: usize, j: usize) -> Result<()> {
    if n_sites == 0 || n_sites > 16 {
        return Err(Error::Site(alloc::format!("unsupported chain length {n_sites}")));
    }
    if i >= n_sites || j >= n_sites || i == j {
        return Err(Error::Site(alloc::format!("pair ({i}, {j}) on a {n_sites}-site chain")));
    }
    Ok(())
}

/// With `SWAP = P_t − P_s`, the pulse is `α·1 + β·SWAP`.
fn pulse_coefficients(t: f64) -> (Complex64, Complex64) {
    let e = cis(-t);
    ((ONE + e) * 0.5, (e - ONE) * 0.5)
}

#[inline]
fn swap_bits(k: usize, i: usize, j: usize) -> usize {
    let bi = (k >> i) & 1;
    let bj = (k >> j) & 1;
    if bi == bj {
        k
    } else {
        k ^ ((1 << i) | (1 << j))
    }
}

/// Left-multiply `acc` in place by the pulse on `(i, j)`.
fn apply_pulse_left(acc: &mut CMatrix, i: usize, j: usize, t: f64) {
    let (alpha, beta) = pulse_coefficients(t);
    let dim = acc.rows();
    let cols = acc.cols();
    let src = acc.clone();
    for k in 0..dim {
        let sk = swap_bits(k, i, j);
        for c in 0..cols {
            acc[(k, c)] = alpha * src[(k, c)] + beta * src[(sk, c)];
        }
    }
}

/// The ordered product `U_N ⋯ U_2 U_1` of a sequence.
pub fn compose(seq: &PulseSequence) -> SquareUnitary {
    let dim = 1usize << seq.n_sites;
    let mut acc = CMatrix::identity(dim);
    for p in &seq.pulses {
        apply_pulse_left(&mut acc, p.pair.0, p.pair.1, p.t);
    }
    SquareUnitary::from_trusted(acc)
}

/// Apply a sequence to a single state vector.
pub fn apply_to_state(seq: &PulseSequence, state: &[Complex64]) -> Vec<Complex64> {
    let mut v = state.to_vec();
    for p in &seq.pulses {
        let (alpha, beta) = pulse_coefficients(p.t);
        let src = v.clone();
        for (k, x) in v.iter_mut().enumerate() {
            *x = alpha * src[k] + beta * src[swap_bits(k, p.pair.0, p.pair.1)];
        }
    }
    v
}

/// Reverse the order and complement every duration.
pub fn invert_sequence(seq: &PulseSequence) -> PulseSequence {
    PulseSequence {
        n_sites: seq.n_sites,
        pulses: seq.pulses.iter().rev().map(PulseSpec::inverse).collect(),
    }
}

/// Total pulse time when run one after another, and the makespan when
/// pulses on disjoint pairs overlap.
///
/// The parallel figure is an earliest-start list schedule: each pulse, in
/// sequence order, starts as soon as both of its sites are free, so pulses
/// sharing a site keep their relative order.
pub fn durations(seq: &PulseSequence) -> (f64, f64) {
    let serial = seq.pulses.iter().map(|p| p.t).sum();
    let mut free = alloc::vec![0.0f64; seq.n_sites];
    let mut makespan: f64 = 0.0;
    for p in &seq.pulses {
        let (i, j) = p.pair;
        let start = free[i].max(free[j]);
        let end = start + p.t;
        free[i] = end;
        free[j] = end;
        makespan = makespan.max(end);
    }
    (serial, makespan)
}

/// `S_i·S_j + 3/4` (the pair-triplet projector) on `n_sites`.
pub fn exchange_hamiltonian(n_sites: usize, i: usize, j: usize) -> Result<CMatrix> {
    check_pair(n_sites, i, j)?;
    let dim = 1usize << n_sites;
    let mut h = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        h[(k, k)] += Complex64::new(0.5, 0.0);
        h[(swap_bits(k, i, j), k)] += Complex64::new(0.5, 0.0);
    }
    Ok(h)
}

/// Total `S²` on `n_sites`: `Σ_{i<j} (SWAP_ij − 1/2) + 3n/4`.
pub fn total_spin_squared(n_sites: usize) -> CMatrix {
    let dim = 1usize << n_sites;
    let mut s2 = CMatrix::zeros(dim, dim);
    let pairs = (n_sites * (n_sites.saturating_sub(1))) / 2;
    let diag = 0.75 * n_sites as f64 - 0.5 * pairs as f64;
    for k in 0..dim {
        s2[(k, k)] += Complex64::new(diag, 0.0);
        for i in 0..n_sites {
            for j in i + 1..n_sites {
                s2[(swap_bits(k, i, j), k)] += ONE;
            }
        }
    }
    s2
}

/// Total `S_z` on `n_sites` (bit set means spin down).
pub fn total_sz(n_sites: usize) -> CMatrix {
    let dim = 1usize << n_sites;
    let mut sz = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        let down = k.count_ones() as f64;
        sz[(k, k)] = Complex64::new(0.5 * n_sites as f64 - down, 0.0);
    }
    sz
}

/// Commutator norms `(‖[U, S²]‖, ‖[U, S_z]‖)`.
pub fn conservation_residuals(u: &CMatrix, n_sites: usize) -> (f64, f64) {
    (u.commutator_norm(&total_spin_squared(n_sites)), u.commutator_norm(&total_sz(n_sites)))
}

/// Wrap a duration into `(0, 2π)`; returns `None` when it is a multiple of `2π`
/// within `tol`.
pub fn normalize_duration(t: f64, tol: f64) -> Option<f64> {
    let w = wrap_angle(t);
    if w < tol || TWO_PI - w < tol {
        None
    } else {
        Some(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{build_state, CouplingTree, HalfInt};

    #[test]
    fn zero_and_full_turn_are_identity() {
        for t in [0.0, TWO_PI] {
            let u = exchange_unitary(3, 0, 1, t).unwrap();
            assert!(u.matrix().max_distance(&CMatrix::identity(8)) < 1e-15);
        }
    }

    #[test]
    fn singlet_and_triplet_eigenphases() {
        let t = 0.77;
        let u = exchange_unitary(2, 0, 1, t).unwrap();
        let singlet = build_state(&CouplingTree::parse("(0 1)_0", HalfInt::ZERO).unwrap());
        let triplet = build_state(&CouplingTree::parse("(0 1)_1", HalfInt::ZERO).unwrap());
        let us = u.matrix().apply(singlet.amplitudes());
        let ut = u.matrix().apply(triplet.amplitudes());
        for (a, b) in us.iter().zip(singlet.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        for (a, b) in ut.iter().zip(triplet.amplitudes()) {
            assert!((a - b * cis(-t)).norm() < 1e-15);
        }
    }

    #[test]
    fn pulse_validation() {
        assert!(matches!(PulseSpec::new(0, 2, 1.0), Err(Error::NonAdjacent(0, 2))));
        assert!(matches!(PulseSpec::new(0, 1, 0.0), Err(Error::Duration(_))));
        assert!(matches!(PulseSpec::new(0, 1, TWO_PI), Err(Error::Duration(_))));
        let mut seq = PulseSequence::new(3);
        assert!(matches!(seq.pulse(2, 3, 1.0), Err(Error::Site(_))));
        assert!(matches!(exchange_unitary(3, 0, 3, 1.0), Err(Error::Site(_))));
        assert_eq!(PulseSpec::new(2, 1, 1.0).unwrap().pair(), (1, 2));
    }

    #[test]
    fn compose_empty_is_identity() {
        let u = compose(&PulseSequence::new(4));
        assert!(u.matrix().max_distance(&CMatrix::identity(16)) < 1e-15);
    }

    #[test]
    fn compose_matches_dense_product() {
        let mut seq = PulseSequence::new(4);
        seq.pulse(0, 1, 0.3).unwrap();
        seq.pulse(1, 2, 2.1).unwrap();
        seq.pulse(2, 3, 5.9).unwrap();
        let dense = exchange_unitary(4, 2, 3, 5.9)
            .unwrap()
            .then_after(&exchange_unitary(4, 1, 2, 2.1).unwrap())
            .then_after(&exchange_unitary(4, 0, 1, 0.3).unwrap());
        assert!(compose(&seq).matrix().max_distance(dense.matrix()) < 1e-14);
        let v = build_state(&CouplingTree::parse("((0 1)_1 (2 3)_0)_1", HalfInt::ZERO).unwrap());
        let direct = apply_to_state(&seq, v.amplitudes());
        let via = dense.matrix().apply(v.amplitudes());
        for (a, b) in direct.iter().zip(&via) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn inversion() {
        let mut seq = PulseSequence::new(3);
        seq.pulse(0, 1, 1.0).unwrap();
        seq.pulse(1, 2, 4.5).unwrap();
        let inv = invert_sequence(&seq);
        assert_eq!(inv.pulses()[0].pair(), (1, 2));
        assert!((inv.pulses()[0].t() - (TWO_PI - 4.5)).abs() < 1e-15);
        assert_eq!(invert_sequence(&inv), seq);
        let mut both = seq.clone();
        both.extend(&inv).unwrap();
        assert!(compose(&both).matrix().max_distance(&CMatrix::identity(8)) < 1e-12);
    }

    #[test]
    fn schedule_durations() {
        let mut one = PulseSequence::new(2);
        one.pulse(0, 1, 1.5).unwrap();
        assert_eq!(durations(&one), (1.5, 1.5));
        let mut two = PulseSequence::new(4);
        two.pulse(0, 1, 1.0).unwrap();
        two.pulse(2, 3, 2.0).unwrap();
        assert_eq!(durations(&two), (3.0, 2.0));
        // a pulse sharing a site waits
        two.pulse(1, 2, 0.5).unwrap();
        assert_eq!(durations(&two), (3.5, 2.5));
    }

    #[test]
    fn spin_operators() {
        // S² on two sites has eigenvalues 0 (singlet) and 2 (triplet)
        let ev = total_spin_squared(2).hermitian_eigenvalues();
        let expect = [0.0, 2.0, 2.0, 2.0];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        let u = exchange_unitary(3, 1, 2, 1.3).unwrap();
        let (a, b) = conservation_residuals(u.matrix(), 3);
        assert!(a < 1e-12 && b < 1e-12);
        let h = exchange_hamiltonian(2, 0, 1).unwrap();
        assert!((h.trace().re - 3.0).abs() < 1e-15);
    }

    #[test]
    fn duration_normalization() {
        assert_eq!(normalize_duration(TWO_PI + 1e-13, 1e-10), None);
        assert_eq!(normalize_duration(-1e-13, 1e-10), None);
        assert!((normalize_duration(-1.0, 1e-10).unwrap() - (TWO_PI - 1.0)).abs() < 1e-15);
    }
}
