//! Passive port-Hamiltonian identification from sampled input/output data.
//!
//! A designed multisine experiment ([`excitation`]) is turned into frequency
//! samples by least squares ([`freqest`]), realized as a descriptor model with
//! the Loewner framework ([`loewner`]), and converted to a certified
//! port-Hamiltonian model by interpolating at spectral zeros ([`phreal`]).
//! [`pipeline::run_pipeline`] chains all of it.

pub mod analysis;
pub mod error;
pub mod excitation;
pub mod freqest;
pub mod io;
pub mod linalg;
pub mod loewner;
pub mod lti;
pub mod model_io;
pub mod phreal;
pub mod pipeline;
pub mod realify;

pub use error::{Error, Result, Stage};
pub use excitation::{ExperimentPlan, SignalRecord};
pub use freqest::FrequencySample;
pub use lti::{Clock, DescriptorSystem, Discretization, PHForm};
pub use phreal::{PassivityReport, SpectralTriple};
pub use pipeline::{run_pipeline, PipelineOptions, PipelineOutput};
