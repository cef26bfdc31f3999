//! Identification error of a reduced order-4 model of the 50-section ladder as the
//! measurement noise grows. Median over seeds.

use phident::analysis::{default_metric_grid, error_report};
use phident::excitation::{add_noise, design_input, select_interpolation_points};
use phident::linalg::CMat;
use phident::lti::build_rlc_ladder;
use phident::{run_pipeline, Discretization, PipelineOptions, SignalRecord};

fn main() -> phident::Result<()> {
    let (k, ts, m, seeds) = (10_000, 1e-2, 100, 5);
    let truth = build_rlc_ladder(50, 1.0, 0.5, 0.5)?.to_descriptor()?;
    let plan = select_interpolation_points(k, m)?.with_ts(ts)?;
    let u = design_input(&plan);
    let y = truth.discretize(ts, Discretization::Zoh)?.simulate(&CMat::from_row_slice(1, k, &u))?;
    let clean = SignalRecord::siso(ts, &u, y.as_slice())?;
    let options = PipelineOptions { order: Some(4), ..PipelineOptions::default() };

    println!("{:>8} {:>10} {:>10} {:>9}", "sigma", "H2 rel", "Hinf rel", "passive");
    for sigma in [0.0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2] {
        let mut runs = Vec::new();
        let mut stopped = Vec::new();
        for seed in 0..seeds {
            let rec = SignalRecord { y: add_noise(&clean.y, sigma, seed)?, ..clean.clone() };
            match run_pipeline(&rec, &plan, &options) {
                Ok(out) => {
                    let rep = error_report(&truth, &out.realization, &default_metric_grid(), options.d_reg)?;
                    runs.push((rep.h2_rel.unwrap_or(f64::NAN), rep.hinf_rel, out.report.verdict));
                }
                // Heavy noise can leave the Loewner model non-passive; no pH model exists then.
                Err(e) => stopped.push(e.stage().map_or("?".to_string(), |s| s.to_string())),
            }
        }
        let passive = runs.iter().filter(|r| r.2).count();
        if runs.is_empty() {
            println!("{sigma:>8.0e} {:>10} {:>10} {passive:>6}/{seeds}  stopped at {stopped:?}", "-", "-");
            continue;
        }
        runs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (h2, hinf, _) = runs[runs.len() / 2];
        let note = if stopped.is_empty() { String::new() } else { format!("  stopped at {stopped:?}") };
        println!("{sigma:>8.0e} {h2:>10.3e} {hinf:>10.3e} {passive:>6}/{seeds}{note}");
    }
    Ok(())
}
