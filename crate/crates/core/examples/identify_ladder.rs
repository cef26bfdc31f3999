//! Full identification: time-domain record in, certified pH model out.
//!
//! Runs the RLC ladder through the pipeline on noiseless implicit-Euler data,
//! then writes the model, its descriptor form and the diagnostics as JSON.
//!
//! ```bash
//! cargo run --release --example identify_ladder
//! ```

use std::time::Instant;

use phident::analysis::{default_metric_grid, error_report};
use phident::excitation::{design_input, select_interpolation_points};
use phident::io::write_json;
use phident::linalg::CMat;
use phident::lti::build_rlc_ladder;
use phident::model_io::{write_model, Model};
use phident::{run_pipeline, Discretization, PipelineOptions, SignalRecord};

fn main() -> phident::Result<()> {
    let (k, ts, m) = (4096, 1e-2, 16);
    let truth = build_rlc_ladder(3, 1.0, 0.5, 0.5)?.to_descriptor()?;
    let plan = select_interpolation_points(k, m)?.with_ts(ts)?;
    let u = design_input(&plan);
    let y = truth.discretize(ts, Discretization::ImplicitEuler)?.simulate(&CMat::from_row_slice(1, k, &u))?;
    let record = SignalRecord::siso(ts, &u, y.as_slice())?;

    let options = PipelineOptions::default();
    let start = Instant::now();
    let out = run_pipeline(&record, &plan, &options)?;
    println!("pipeline took {:.1} ms", start.elapsed().as_secs_f64() * 1e3);

    let d = &out.diagnostics;
    println!("intermediate order {}, pH order {}", d.intermediate_order, d.ph_order);
    println!("spectral zeros {:?}", d.spectral_zeros.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>());
    println!("interpolation residual {:.2e}", d.interpolation_residual);
    println!("certified: {} ({:?})", out.report.verdict, out.report);

    let report = error_report(&truth, &out.realization, &default_metric_grid(), options.d_reg)?;
    println!("relative H2 error {:.2e}, relative Hinf error {:.2e}", report.h2_rel.unwrap_or(f64::NAN), report.hinf_rel);

    let dir = std::env::temp_dir().join("phident-examples");
    std::fs::create_dir_all(&dir)?;
    write_model(dir.join("ladder3_ph.json"), &Model::Ph(out.ph.clone()))?;
    write_model(dir.join("ladder3_ss.json"), &Model::Descriptor(out.realization.clone()))?;
    write_json(dir.join("ladder3_diag.json"), &serde_json::json!({ "diagnostics": d, "passivity": out.report }))?;
    println!("models written to {}", dir.display());
    Ok(())
}
