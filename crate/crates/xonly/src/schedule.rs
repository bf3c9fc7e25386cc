//! The pulse-schedule file format.
//!
//! ```json
//! {"n_sites": 6,
//!  "pulses": [{"pair": [2, 3], "t": 1.9106332362490186}, ...],
//!  "meta": {"phi": 3.141592653589793,
//!           "variant_profile": ["long", "short", ...],
//!           "corrections": [{"pair": [1, 2], "t": 4.372552070930567}]}}
//! ```
//!
//! `pulses` is the full schedule, corrections included; `meta.corrections`
//! repeats its trailing single-qubit pulses.

use serde::{Deserialize, Serialize};
use thiserror::Error;
use xonly_core::synthesis::SynthesisResult;
use xonly_core::{PulseSequence, PulseSpec, U3Variant};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub n_sites: usize,
    pub pulses: Vec<PulseEntry>,
    #[serde(default)]
    pub meta: Meta,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseEntry {
    pub pair: [usize; 2],
    pub t: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default)]
    pub variant_profile: Vec<Variant>,
    #[serde(default)]
    pub corrections: Vec<PulseEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alt_theta1: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Short,
    Long,
}

impl From<U3Variant> for Variant {
    fn from(v: U3Variant) -> Self {
        match v {
            U3Variant::Short => Variant::Short,
            U3Variant::Long => Variant::Long,
        }
    }
}

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("schedule is not valid JSON for this format: {0}")]
    Json(#[from] serde_path_to_error::Error<serde_json::Error>),
    #[error("invalid pulse at pulses[{index}]: {source}")]
    Pulse { index: usize, source: xonly_core::Error },
    #[error("meta.corrections does not match the trailing pulses")]
    Corrections,
}

impl From<&PulseSpec> for PulseEntry {
    fn from(p: &PulseSpec) -> Self {
        let (i, j) = p.pair();
        PulseEntry { pair: [i, j], t: p.t() }
    }
}

impl Schedule {
    pub fn from_result(res: &SynthesisResult) -> Self {
        let full = res.full_sequence();
        Schedule {
            n_sites: full.n_sites(),
            pulses: full.pulses().iter().map(PulseEntry::from).collect(),
            meta: Meta {
                phi: Some(res.phi),
                variant_profile: res.profile.slots().iter().map(|&v| v.into()).collect(),
                corrections: res.corrections.iter().map(PulseEntry::from).collect(),
                alt_theta1: res.alt_theta1,
            },
        }
    }

    /// Parse, reporting the JSON path of the first offending field.
    pub fn parse(text: &str) -> Result<Self, ScheduleError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let schedule: Schedule = serde_path_to_error::deserialize(de)?;
        schedule.to_sequence()?;
        Ok(schedule)
    }

    /// Validated pulse sequence: nearest-neighbour pairs inside the chain,
    /// durations in `(0, 2π)`, corrections consistent with the pulse list.
    pub fn to_sequence(&self) -> Result<PulseSequence, ScheduleError> {
        let mut seq = PulseSequence::new(self.n_sites);
        for (index, p) in self.pulses.iter().enumerate() {
            seq.pulse(p.pair[0], p.pair[1], p.t).map_err(|source| ScheduleError::Pulse { index, source })?;
        }
        let k = self.meta.corrections.len();
        if k > self.pulses.len() || self.pulses[self.pulses.len() - k..] != self.meta.corrections[..] {
            return Err(ScheduleError::Corrections);
        }
        Ok(seq)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schedule serializes");
        s.push('\n');
        s
    }
}
