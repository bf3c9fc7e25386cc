//! CSV samples of the two phase curves.

use std::f64::consts::PI;
use std::fmt::Write;

use xonly_core::synthesis::{theta_range, tilde_phase, u3_phase};
use xonly_core::TWO_PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Curve {
    /// `φ(t)` of the short three-pulse block, `t ∈ [0, π]`.
    U3Phi,
    /// `θ(t)` of the four-spin block, `t ∈ [0, 2π]`.
    U4tildeTheta,
}

/// `t,phase` rows on an even grid, preceded by `#` comment lines.
pub fn sweep_csv(curve: Curve, points: usize) -> String {
    assert!(points >= 2, "a sweep needs at least two points");
    let mut out = String::new();
    let (end, f): (f64, fn(f64) -> f64) = match curve {
        Curve::U3Phi => {
            out.push_str("# phi(t) of the short three-pulse block; rises monotonically from 0 to 2pi\n");
            (PI, u3_phase)
        }
        Curve::U4tildeTheta => {
            let (t_star, max) = theta_range();
            out.push_str("# theta(t) of the four-spin block; reachable theta is (0, max] and [2pi - max, 2pi)\n");
            writeln!(out, "# max theta = {max} at t = {t_star}").unwrap();
            (TWO_PI, tilde_phase)
        }
    };
    out.push_str("t,phase\n");
    for k in 0..points {
        let t = end * k as f64 / (points - 1) as f64;
        writeln!(out, "{t},{}", f(t)).unwrap();
    }
    out
}
