//! Simulation harness for the noncoherent SIMO link primitives.
//!
//! This crate owns everything `nclink-core` deliberately avoids: files,
//! threads, and the command line. The pieces:
//!
//! * [`config`]: the sweep configuration, its key-value file format, and
//!   validation,
//! * [`profile`]: the per-user `P_dBm beta_dB` profile file,
//! * [`engine`]: the deterministic parallel Monte Carlo sweep,
//! * [`record`]: BER records and Wilson confidence intervals,
//! * [`output`]: CSV / manifest / plot-script persistence,
//! * [`report`]: human-readable design and KL reports.

pub mod config;
pub mod engine;
pub mod output;
pub mod profile;
pub mod record;
pub mod report;
