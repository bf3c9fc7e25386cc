//! Analytic compiler and exact verifier for exchange-only two-qubit gates.
//!
//! Logical qubits are stored in three spin-1/2 particles with total spin 1/2.
//! Two such qubits occupy a six-site chain; the only physical resource is a
//! nearest-neighbour exchange pulse, which conserves total spin. This crate
//! builds CPhase pulse sequences from nested three-pulse blocks whose action
//! reduces, at every level, to a rotation of an effective spin-1/2 pseudospin,
//! and checks the result by dense simulation on the 64-dimensional product
//! space.
//!
//! Module map:
//!
//! - [`geometry`]: axis-angle rotations and the cone-intersection solvers.
//! - [`spin`]: Clebsch-Gordan coupling, coupling trees, recoupling matrices.
//! - [`linalg`]: small dense complex matrices.
//! - [`pulse`]: exchange unitaries, sequence composition and scheduling.
//! - [`synthesis`]: the U3 -> U4 -> U5 construction and its alternate form.
//! - [`verify`]: encoded-gate extraction, leakage and the four-spin no-go checks.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

mod error;
pub mod geometry;
pub mod linalg;
pub mod pulse;
pub mod spin;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{AxisAngle, UnitVector3};
pub use linalg::{CMatrix, SquareUnitary};
pub use pulse::{PulseSequence, PulseSpec};
pub use spin::{CouplingTree, HalfInt, Node, RecouplingMatrix, StateVector};
pub use synthesis::{SynthesisResult, U3Solution, U3Variant, VariantProfile};
pub use verify::{EncodedBasis, GateReport};

/// Number of sites in the two-qubit chain.
pub const CHAIN_SITES: usize = 6;

/// Full turn, the period of every pulse duration.
pub const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Reduce an angle into `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = libm::fmod(x, TWO_PI);
    let r = if r < 0.0 { r + TWO_PI } else { r };
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    if d > core::f64::consts::PI {
        TWO_PI - d
    } else {
        d
    }
}
