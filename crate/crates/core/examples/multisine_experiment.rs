//! Designs a multisine experiment, runs it on the discretized ladder and writes the
//! record (plus its metadata sidecar) as CSV.

use phident::excitation::{add_noise, design_input, select_interpolation_points, NOISE_RNG};
use phident::io::{sidecar_path, write_json, write_signal_csv};
use phident::linalg::CMat;
use phident::lti::build_rlc_ladder;
use phident::{Discretization, SignalRecord};

fn main() -> phident::Result<()> {
    let (k, ts, m, sigma, seed) = (4096, 1e-2, 16, 1e-4, 42);
    let plan = select_interpolation_points(k, m)?;
    println!("indices {:?}", plan.indices);
    println!("k_min {}; least squares over {} samples for {} unknowns", plan.k_min, k - plan.k_min, plan.len());

    let u = design_input(&plan);
    let peak = u.iter().map(|v| v.norm()).fold(0.0, f64::max);
    println!("input peak |u| = {peak:.3e}");

    let sys = build_rlc_ladder(3, 1.0, 0.5, 0.5)?.to_descriptor()?.discretize(ts, Discretization::Zoh)?;
    let y = add_noise(&sys.simulate(&CMat::from_row_slice(1, k, &u))?, sigma, seed)?;
    let record = SignalRecord::new(ts, CMat::from_row_slice(1, k, &u), y)?;

    let dir = std::env::temp_dir().join("phident-examples");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("ladder3_record.csv");
    write_signal_csv(&path, &record)?;
    write_json(
        sidecar_path(&path),
        &serde_json::json!({ "rng": NOISE_RNG, "seed": seed, "sigma": sigma, "K": k, "Ts": ts, "m": m }),
    )?;
    println!("wrote {}", path.display());
    Ok(())
}
