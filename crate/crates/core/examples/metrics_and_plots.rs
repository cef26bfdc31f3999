//! Error metrics, Bode data and a time-domain comparison between a model and a
//! reduced surrogate; writes plot-ready CSV files.

use phident::analysis::{bode_data, error_report, time_compare, InputKind, SineTerm};
use phident::io::{write_bode_csv, write_time_csv};
use phident::lti::{build_rlc_ladder, log_grid};

fn main() -> phident::Result<()> {
    let full = build_rlc_ladder(4, 1.0, 0.5, 0.5)?.to_descriptor()?;
    let coarse = build_rlc_ladder(2, 1.0, 0.5, 0.5)?.to_descriptor()?;
    let grid = log_grid(1e-2, 1e2, 200);

    let report = error_report(&full, &coarse, &grid, 0.0)?;
    println!("{}", serde_json::to_string_pretty(&serde_json::json!({
        "h2_abs": report.h2_abs, "h2_rel": report.h2_rel,
        "hinf_abs": report.hinf_abs, "hinf_rel": report.hinf_rel,
    }))?);

    let dir = std::env::temp_dir().join("phident-examples");
    std::fs::create_dir_all(&dir)?;
    write_bode_csv(dir.join("bode.csv"), &bode_data(&full, &grid), &bode_data(&coarse, &grid))?;

    let rows = time_compare(&full, &coarse, &InputKind::RlcMix, 50.0, 1e-2)?;
    write_time_csv(dir.join("time_rlc_mix.csv"), &rows)?;
    let burst = InputKind::Custom(vec![
        SineTerm { amplitude: 10.0, frequency: 1.0, decay: 0.1 },
        SineTerm { amplitude: 10.0, frequency: 0.25, decay: 0.1 },
    ]);
    write_time_csv(dir.join("time_burst.csv"), &time_compare(&full, &coarse, &burst, 50.0, 1e-2)?)?;

    let dev = rows.iter().map(|r| (r.y_ref - r.y_cand).abs()).fold(0.0, f64::max);
    println!("max deviation under sin(t)+sin(2t)+sin(t/2): {dev:.3e}");
    println!("CSV files in {}", dir.display());
    Ok(())
}
