//! Verification of a whole schedule and its JSON rendering.

use std::thread;

use serde::Serialize;
use xonly_core::linalg::CMatrix;
use xonly_core::pulse::{compose, durations};
use xonly_core::verify::{
    cphase_deviation, g_independence_check, gate_report, makhlin_distance, GIndependence, CNOT_MAKHLIN,
};
use xonly_core::{GateReport, PulseSequence, CHAIN_SITES};

/// [`GateReport`] with complex numbers as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateReportJson {
    pub g: u32,
    pub m: i32,
    pub gate: Vec<Vec<[f64; 2]>>,
    pub leakage_norm: f64,
    pub off_diagonal: f64,
    pub diagonal_phases: Option<[f64; 4]>,
    pub entangling_phase: Option<f64>,
    pub makhlin: Option<MakhlinJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MakhlinJson {
    pub g1: [f64; 2],
    pub g2: f64,
}

fn matrix_json(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
}

impl From<&GateReport> for GateReportJson {
    fn from(r: &GateReport) -> Self {
        GateReportJson {
            g: r.g,
            m: r.m,
            gate: matrix_json(&r.gate),
            leakage_norm: r.leakage_norm,
            off_diagonal: r.off_diagonal,
            diagonal_phases: r.diagonal_phases,
            entangling_phase: r.entangling_phase,
            makhlin: r.makhlin.map(|(g1, g2)| MakhlinJson { g1: [g1.re, g1.im], g2 }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GIndependenceJson {
    pub holds: bool,
    pub projected_deviation: f64,
    pub encoded_deviation: Option<f64>,
}

impl From<&GIndependence> for GIndependenceJson {
    fn from(g: &GIndependence) -> Self {
        GIndependenceJson {
            holds: g.holds,
            projected_deviation: g.projected_deviation,
            encoded_deviation: g.encoded_deviation,
        }
    }
}

/// Everything the verifier found out about one schedule.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub tolerance: f64,
    pub pulses: usize,
    pub serial_duration: f64,
    pub parallel_duration: f64,
    /// One report per `(g, M)`: `(0,0), (1,−1), (1,0), (1,1)`.
    pub reports: Vec<GateReportJson>,
    pub max_leakage: f64,
    pub max_off_diagonal: f64,
    /// Largest gate difference across `M` within each `g`.
    pub sz_deviation: f64,
    /// `None` when the schedule pulses site 0.
    pub g_independence: Option<GIndependenceJson>,
    /// Distance from `CPhase(φ)` when the target phase is known.
    pub cphase_deviation: Option<f64>,
    pub cnot_equivalent: Option<bool>,
    pub passed: bool,
    pub warnings: Vec<String>,
}

const SECTORS: [(u32, i32); 4] = [(0, 0), (1, -1), (1, 0), (1, 1)];

/// Run every check on a six-site schedule. The `(g, M)` sectors are
/// projected in parallel.
pub fn verify_sequence(seq: &PulseSequence, phi: Option<f64>, tol: f64) -> Result<Verification, xonly_core::Error> {
    if seq.n_sites() != CHAIN_SITES {
        return Err(xonly_core::Error::Site(format!("expected {CHAIN_SITES} sites, got {}", seq.n_sites())));
    }
    let u = compose(seq);
    let u = &u;
    let reports: Vec<GateReport> = thread::scope(|s| {
        let handles: Vec<_> = SECTORS.iter().map(|&(g, m)| s.spawn(move || gate_report(u, g, m))).collect();
        handles.into_iter().map(|h| h.join().expect("verifier thread panicked")).collect::<Vec<_>>()
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let max_leakage = reports.iter().map(|r| r.leakage_norm).fold(0.0, f64::max);
    let max_off_diagonal = reports.iter().map(|r| r.off_diagonal).fold(0.0, f64::max);
    let sz_deviation = reports[1..]
        .iter()
        .map(|r| r.gate.max_distance(&reports[1].gate))
        .fold(0.0, f64::max);

    let mut warnings = Vec::new();
    let g_independence = if seq.touches(0) {
        warnings.push("schedule pulses site 0; g-independence check skipped".to_string());
        None
    } else {
        Some(g_independence_check(seq)?)
    };

    let cphase = phi.map(|p| reports.iter().map(|r| cphase_deviation(&r.gate, p)).fold(0.0, f64::max));
    let cnot_equivalent = reports[3].makhlin.map(|inv| makhlin_distance(inv, CNOT_MAKHLIN) < 1e-8);

    let passed = max_leakage < tol
        && max_off_diagonal < tol
        && sz_deviation < tol
        && g_independence.as_ref().is_none_or(|g| g.holds)
        && cphase.is_none_or(|d| d < tol);

    let (serial, parallel) = durations(seq);
    Ok(Verification {
        tolerance: tol,
        pulses: seq.len(),
        serial_duration: serial,
        parallel_duration: parallel,
        reports: reports.iter().map(GateReportJson::from).collect(),
        max_leakage,
        max_off_diagonal,
        sz_deviation,
        g_independence: g_independence.as_ref().map(GIndependenceJson::from),
        cphase_deviation: cphase,
        cnot_equivalent,
        passed,
        warnings,
    })
}

impl Verification {
    /// Human-readable summary, one fact per line.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("pulses: {}", self.pulses));
        line(format!("serial duration: {:.6}", self.serial_duration));
        line(format!("parallel duration: {:.6}", self.parallel_duration));
        line(format!("max leakage: {:.3e}", self.max_leakage));
        line(format!("max off-diagonal: {:.3e}", self.max_off_diagonal));
        line(format!("S_z deviation: {:.3e}", self.sz_deviation));
        match &self.g_independence {
            Some(g) => line(format!("g-independent: {} ({:.3e})", g.holds, g.projected_deviation)),
            None => line("g-independent: skipped".into()),
        }
        if let Some(d) = self.cphase_deviation {
            line(format!("cphase deviation: {d:.3e}"));
        }
        if let Some(c) = self.cnot_equivalent {
            line(format!("locally equivalent to CNOT: {c}"));
        }
        for w in &self.warnings {
            line(format!("warning: {w}"));
        }
        line(format!("verification: {}", if self.passed { "pass" } else { "FAIL" }));
        out
    }
}
