//! The full identification chain from a time-domain record to a certified pH model.

use serde::Serialize;

use crate::error::{Result, Stage, StageExt};
use crate::excitation::{ExperimentPlan, SignalRecord};
use crate::freqest::{estimate_frequency_response, symmetrize_conjugates, FrequencySample};
use crate::linalg::C64;
use crate::loewner::{build_loewner, partition_samples, realize_discrete, to_continuous, OrderSelection};
use crate::lti::{DescriptorSystem, PHForm};
use crate::phreal::{
    certify_passivity, default_grid, extract_ph_form, interpolation_residual, realize_ph,
    spectral_zeros, PassivityReport,
};
use crate::realify::{realify, ConjugatePairing};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    /// Relative singular-value cutoff for the Loewner order.
    pub svd_tol: f64,
    /// Feedthrough added when lifting to continuous time.
    pub d_reg: f64,
    /// Fixed intermediate order; overrides `svd_tol` when set.
    pub order: Option<usize>,
    /// Frequencies (rad/s) for the Popov check.
    pub grid: Vec<f64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { svd_tol: 1e-10, d_reg: 1e-5, order: None, grid: default_grid() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexValue {
    fn from(z: C64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub intermediate_order: usize,
    /// Singular values of `[L, Ls]`, normalized by the largest.
    pub singular_values: Vec<f64>,
    pub spectral_zeros: Vec<ComplexValue>,
    pub ph_order: usize,
    /// Largest relative mismatch `|Ĥ(q̄) − conj Ĥ(q)|` before symmetrization.
    pub conjugate_asymmetry: f64,
    pub interpolation_residual: f64,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub ph: PHForm,
    pub report: PassivityReport,
    pub diagnostics: Diagnostics,
    /// Estimated frequency samples after symmetrization.
    pub samples: Vec<FrequencySample>,
    /// Continuous Loewner model before the pH step.
    pub intermediate: DescriptorSystem,
    /// Real descriptor form of the pH model (`E` symmetric positive definite).
    pub realization: DescriptorSystem,
}

/// Runs estimation, Loewner realization, the spectral-zero pH step and certification.
pub fn run_pipeline(
    record: &SignalRecord,
    plan: &ExperimentPlan,
    options: &PipelineOptions,
) -> Result<PipelineOutput> {
    let mut samples = estimate_frequency_response(record, plan).stage(Stage::Estimate)?;
    let conjugate_asymmetry = symmetrize_conjugates(&mut samples, plan);

    let (left, right) = partition_samples(&samples).stage(Stage::Partition)?;
    let pencil = build_loewner(&left, &right).stage(Stage::Loewner)?;
    let selection = match options.order {
        Some(k) => OrderSelection::Fixed(k),
        None => OrderSelection::Tolerance(options.svd_tol),
    };
    let disc = realize_discrete(&pencil, selection, record.ts).stage(Stage::Realize)?;
    let intermediate = to_continuous(&disc.system, options.d_reg).stage(Stage::ToContinuous)?;

    let triples = spectral_zeros(&intermediate).stage(Stage::SpectralZeros)?;
    let complex = realize_ph(&triples, &intermediate.d).stage(Stage::RealizePh)?;
    let residual = interpolation_residual(&complex, &triples).stage(Stage::RealizePh)?;
    let lambdas: Vec<C64> = triples.iter().map(|t| t.lambda).collect();
    let realization = ConjugatePairing::from_points(&lambdas)
        .and_then(|p| realify(&complex, &p, &p))
        .stage(Stage::Realify)?;
    let ph = extract_ph_form(&realization).stage(Stage::ExtractPh)?;
    let report = certify_passivity(&ph, &options.grid);

    let sigma_max = disc.singular_values.first().copied().unwrap_or(1.0);
    let diagnostics = Diagnostics {
        intermediate_order: intermediate.order(),
        singular_values: disc.singular_values.iter().map(|s| s / sigma_max).collect(),
        spectral_zeros: lambdas.iter().map(|&z| z.into()).collect(),
        ph_order: ph.order(),
        conjugate_asymmetry,
        interpolation_residual: residual,
    };
    Ok(PipelineOutput { ph, report, diagnostics, samples, intermediate, realization })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::excitation::{design_input, select_interpolation_points};
    use crate::linalg::CMat;
    use crate::lti::{build_rlc_ladder, Discretization};

    fn ladder_record(k: usize, m: usize) -> (SignalRecord, ExperimentPlan) {
        let plan = select_interpolation_points(k, m).unwrap();
        let sys = build_rlc_ladder(2, 1.0, 0.5, 0.5)
            .unwrap()
            .to_descriptor()
            .unwrap()
            .discretize(1e-2, Discretization::ImplicitEuler)
            .unwrap();
        let u = design_input(&plan);
        let y = sys.simulate(&CMat::from_row_slice(1, k, &u)).unwrap();
        (SignalRecord::siso(1e-2, &u, y.as_slice()).unwrap(), plan)
    }

    #[test]
    fn small_ladder_end_to_end() {
        let (rec, plan) = ladder_record(4096, 12);
        let out = run_pipeline(&rec, &plan, &PipelineOptions::default()).unwrap();
        assert_eq!(out.diagnostics.intermediate_order, 4);
        assert_eq!(out.ph.order(), 4);
        assert!(out.report.verdict, "{:?}", out.report);
        assert_eq!(out.diagnostics.spectral_zeros.len(), 4);
    }

    #[test]
    fn zero_output_is_degenerate() {
        let (rec, plan) = ladder_record(256, 8);
        let silent = SignalRecord { y: CMat::zeros(1, 256), ..rec };
        let err = run_pipeline(&silent, &plan, &PipelineOptions::default()).unwrap_err();
        assert_eq!(err.stage(), Some(Stage::Realize));
        assert!(matches!(err.root(), Error::DegenerateData { .. }));
    }
}
