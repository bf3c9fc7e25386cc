use std::f64::consts::PI;

use xonly_core::pulse::{compose, durations};
use xonly_core::synthesis::{solve_u3, synthesize_cphase, synthesize_cphase_alt, t5, SynthesisResult, U3Variant};
use xonly_core::verify::{cphase_deviation, g_independence_check, gate_report, sz_independence_check};
use xonly_core::{VariantProfile, TWO_PI};

fn check(res: &SynthesisResult) {
    assert_eq!(res.core.len(), 39);
    let seq = res.full_sequence();
    let u = compose(&seq);
    for (g, ms) in [(0u32, vec![0i32]), (1, vec![-1, 0, 1])] {
        for m in ms {
            let r = gate_report(&u, g, m).unwrap();
            let dev = cphase_deviation(&r.gate, res.phi);
            assert!(dev < 1e-9, "phi={} g={g} m={m} dev={dev:e}", res.phi);
            assert!(r.leakage_norm < 1e-10, "leak {:e}", r.leakage_norm);
        }
    }
    assert!(g_independence_check(&seq).unwrap().holds);
    assert!(sz_independence_check(&seq).unwrap().0);
}

#[test]
fn presets_compile_cphase() {
    for phi in [PI, PI / 2.0, 1.0, 2.0 * PI / 3.0, 5.0] {
        for profile in [VariantProfile::fig9a(), VariantProfile::fig9b()] {
            check(&synthesize_cphase(phi, &profile).unwrap());
        }
    }
}

#[test]
fn alternates_compile_cphase() {
    for phi in [PI, PI / 2.0, 1.0, 2.0 * PI / 3.0, 5.0] {
        for theta1 in [t5() / 2.0, t5() / 3.0, 0.9] {
            check(&synthesize_cphase_alt(phi, theta1).unwrap());
        }
    }
}

#[test]
fn corrections_at_pi() {
    let a = synthesize_cphase(PI, &VariantProfile::fig9a()).unwrap();
    let t_bar = solve_u3(PI, U3Variant::Short).unwrap().t_bar;
    assert_eq!(a.corrections.len(), 1);
    assert!((a.corrections[0].t() - t_bar).abs() < 5e-5);

    let b = synthesize_cphase(PI, &VariantProfile::fig9b()).unwrap();
    let pairs: Vec<_> = b.corrections.iter().map(|p| (p.pair(), p.t())).collect();
    assert_eq!(pairs.len(), 2);
    let ta = (4.11499 + 4.37255) % TWO_PI;
    assert!(pairs[0].0 == (1, 2) && (pairs[0].1 - ta).abs() < 5e-5, "{pairs:?}");
    assert!(pairs[1].0 == (3, 4) && (pairs[1].1 - 2.73045).abs() < 5e-5, "{pairs:?}");

    // two corrections, yet the all-short schedule is the shorter one
    let (serial_a, _) = durations(&a.full_sequence());
    let (serial_b, _) = durations(&b.full_sequence());
    assert!(serial_b < serial_a);
}

// With all short blocks the (1,2) correction tracks the central t_bar by a fixed offset
// and the (3,4) correction does not move at all.
#[test]
fn all_short_corrections_track_t_bar() {
    for phi in [0.3, 1.0, 2.0, PI, 4.0, 5.5] {
        let res = synthesize_cphase(phi, &VariantProfile::fig9b()).unwrap();
        let t_bar = solve_u3(phi, U3Variant::Short).unwrap().t_bar;
        let c: Vec<_> = res.corrections.iter().map(|p| (p.pair(), p.t())).collect();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].0, (1, 2));
        assert_eq!(c[1].0, (3, 4));
        assert!(((c[0].1 - t_bar).rem_euclid(TWO_PI) - 4.11499).abs() < 1e-5, "phi={phi} {c:?}");
        assert!((c[1].1 - 2.730455).abs() < 1e-6, "phi={phi} {c:?}");
    }
}
