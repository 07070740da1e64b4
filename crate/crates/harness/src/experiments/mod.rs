//! Experiment recipes. Each returns its data together with the checks it
//! asserts, and knows how to write its datasets.

pub mod anyons;
pub mod oracle;
pub mod spectral;
pub mod transport;

pub use anyons::{run_anyon_suite, AnyonReport};
pub use oracle::run_oracles;
pub use spectral::{run_gap_scaling, run_gap_sweep, run_spectrum, ScalingResult, SpectrumResult, SweepResult};
pub use transport::{run_transport, TransportReport};
