use std::f64::consts::PI;

use proptest::prelude::*;
use xonly_core::geometry::{n1, n2, rotate_sequence, three_rotation_companion, AxisAngle, UnitVector3};
use xonly_core::linalg::CMatrix;
use xonly_core::pulse::{compose, conservation_residuals, invert_sequence};
use xonly_core::synthesis::{solve_u3, synthesize_cphase, u3_phase, U3Variant, PROFILE_SLOTS};
use xonly_core::verify::{cphase_deviation, g_independence_check, gate_report};
use xonly_core::{PulseSequence, VariantProfile, TWO_PI};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

fn duration() -> impl Strategy<Value = f64> {
    1e-3..TWO_PI - 1e-3
}

/// Random nearest-neighbour pulses on `n` sites, restricted to sites `first..n`.
fn sequence(n: usize, first: usize, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PulseSequence> {
    prop::collection::vec((first..n - 1, duration()), len).prop_map(move |ps| {
        let mut seq = PulseSequence::new(n);
        for (i, t) in ps {
            seq.pulse(i, i + 1, t).unwrap();
        }
        seq
    })
}

fn profile() -> impl Strategy<Value = VariantProfile> {
    prop::array::uniform11(any::<bool>()).prop_map(|bits| {
        let mut slots = [U3Variant::Short; PROFILE_SLOTS];
        for (s, long) in slots.iter_mut().zip(bits) {
            if long {
                *s = U3Variant::Long;
            }
        }
        VariantProfile::new(slots)
    })
}

proptest! {
    #![proptest_config(config())]

    /// ẑ goes out on the cone about the first axis and comes back to itself.
    #[test]
    fn cone_conditions(t in 1e-3..TWO_PI - 1e-3, second in any::<bool>()) {
        let n = if second { n2() } else { n1() };
        let tb = three_rotation_companion(n.z(), t).unwrap();
        let rots = [
            AxisAngle::new(n, t).unwrap(),
            AxisAngle::new(UnitVector3::Z, tb).unwrap(),
            AxisAngle::new(n, t).unwrap(),
        ];
        let out = rotate_sequence(UnitVector3::Z, &rots);
        prop_assert!(out.distance(&UnitVector3::Z) < 1e-9);
    }

    #[test]
    fn pulses_conserve_spin(seq in sequence(6, 0, 1..=12)) {
        let (s2, sz) = conservation_residuals(compose(&seq).matrix(), 6);
        prop_assert!(s2 < 1e-9 && sz < 1e-9, "{} {}", s2, sz);
    }

    #[test]
    fn inverse_round_trip(seq in sequence(5, 0, 1..=16)) {
        let u = compose(&seq);
        let v = compose(&invert_sequence(&seq));
        let dim = u.dim();
        prop_assert!(v.matrix().matmul(u.matrix()).max_distance(&CMatrix::identity(dim)) < 1e-10);
        let back = invert_sequence(&invert_sequence(&seq));
        for (a, b) in back.pulses().iter().zip(seq.pulses()) {
            prop_assert_eq!(a.pair(), b.pair());
            prop_assert!((a.t() - b.t()).abs() < 1e-12);
        }
    }

    #[test]
    fn corrected_gate_ignores_profile(p in profile(), phi in 0.05..TWO_PI - 0.05) {
        let res = synthesize_cphase(phi, &p).unwrap();
        let r = gate_report(&compose(&res.full_sequence()), 1, 1).unwrap();
        prop_assert!(cphase_deviation(&r.gate, phi) < 1e-9);
        prop_assert!(r.leakage_norm < 1e-10);
    }

    #[test]
    fn five_spin_sequences_ignore_g(seq in sequence(6, 1, 20..=20)) {
        let check = g_independence_check(&seq).unwrap();
        prop_assert!(check.holds, "{:?}", check);
    }

    #[test]
    fn u3_phase_increases(a in 0.0..PI, b in 0.0..PI) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(u3_phase(lo) < u3_phase(hi));
    }

    #[test]
    fn solutions_satisfy_both_equations(phi in 1e-3..TWO_PI - 1e-3, long in any::<bool>()) {
        let v = if long { U3Variant::Long } else { U3Variant::Short };
        let (prod, phase) = solve_u3(phi, v).unwrap().residuals();
        prop_assert!(prod < 1e-9 && phase < 1e-9);
    }
}

#[test]
fn u3_phase_grid_is_monotone() {
    let pts: Vec<f64> = (0..=256).map(|k| u3_phase(PI * k as f64 / 256.0)).collect();
    assert!(pts.windows(2).all(|w| w[0] < w[1]));
    assert!(pts[0].abs() < 1e-12 && (pts[256] - TWO_PI).abs() < 1e-12);
}
