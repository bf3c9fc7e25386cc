use std::f64::consts::PI;

use xonly_core::pulse::compose;
use xonly_core::spin::{CouplingTree, HalfInt};
use xonly_core::synthesis::{solve_u3_tilde, t5, theta_range, tilde_phase, u4_tilde_sequence};
use xonly_core::verify::sector_matrix;
use xonly_core::{angle_distance, Error};

/// Dense scan of θ(t) over (0, π) refined by golden-section search.
fn scanned_maximum() -> (f64, f64) {
    let n = 20_000;
    let (mut best_t, mut best) = (0.0, f64::MIN);
    for k in 1..n {
        let t = PI * k as f64 / n as f64;
        let th = tilde_phase(t);
        if th > best {
            best = th;
            best_t = t;
        }
    }
    let h = PI / n as f64;
    let (mut a, mut b) = (best_t - h, best_t + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if tilde_phase(c) > tilde_phase(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let t = 0.5 * (a + b);
    (t, tilde_phase(t))
}

#[test]
fn range_maximum_matches_scan() {
    let (t_star, max) = theta_range();
    let (t_scan, max_scan) = scanned_maximum();
    assert!((max - PI / 3.0).abs() < 1e-9);
    assert!((max - max_scan).abs() < 1e-9);
    assert!((t_star - t_scan).abs() < 1e-5);
}

#[test]
fn anchor_is_out_of_reach() {
    assert!(t5() > theta_range().1);
    for branch in 0..2 {
        assert!(matches!(solve_u3_tilde(t5(), branch), Err(Error::UnachievableTheta(_))));
    }
}

#[test]
fn half_anchor_solves() {
    for branch in 0..2 {
        let (t, tb) = solve_u3_tilde(t5() / 2.0, branch).unwrap();
        let product = (t / 2.0).tan() * (tb / 2.0).tan();
        assert!((product + 3.0).abs() < 1e-9);
        assert!(angle_distance(t - tb + PI, t5() / 2.0) < 1e-9);
    }
}

#[test]
fn block_phase_gap_is_theta() {
    let basis: Vec<CouplingTree> = ["((0 1)_1 (2 3)_1)_0", "((0 1)_1 (2 3)_0)_1", "((0 1)_1 (2 3)_1)_1", "((0 1)_1 (2 3)_1)_2"]
        .iter()
        .map(|t| CouplingTree::parse(t, HalfInt::ZERO).unwrap())
        .collect();
    for theta in [0.2, 0.6, 1.0, 2.0 * PI - 0.3] {
        for branch in 0..2 {
            let seq = u4_tilde_sequence(theta, branch, 0, 4).unwrap();
            let m = sector_matrix(compose(&seq).matrix(), &basis).unwrap();
            assert!(m.max_off_diagonal() < 1e-10);
            // bd = 10 against bd = 11
            let gap = (m[(0, 0)] / m[(2, 2)]).arg();
            assert!(angle_distance(gap, theta) < 1e-9, "theta={theta} branch={branch} gap={gap}");
        }
    }
}
