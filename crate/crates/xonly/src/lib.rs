//! File formats and command-line front end for `xonly-core`.

pub mod angle;
pub mod cli;
pub mod report;
pub mod schedule;
pub mod sweep;

pub use angle::parse_angle;
pub use report::{verify_sequence, Verification};
pub use schedule::{Schedule, ScheduleError};
