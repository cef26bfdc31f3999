use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use phident::analysis::{bode_data, error_report};
use phident::excitation::{add_noise, design_input, select_interpolation_points, NOISE_RNG};
use phident::freqest::estimate_frequency_response;
use phident::io::{
    read_signal_csv, sidecar_path, write_bode_csv, write_frequency_csv, write_json, write_signal_csv,
};
use phident::linalg::CMat;
use phident::lti::{build_rlc_ladder, log_grid, Clock, Discretization};
use phident::model_io::{read_model, write_model, Model};
use phident::pipeline::{run_pipeline, PipelineOptions};
use phident::{Error, Result, SignalRecord, Stage};

#[derive(Parser)]
#[command(name = "phident", version, about = "Passive port-Hamiltonian identification from time-domain data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Disc {
    Zoh,
    ImplicitEuler,
}

#[derive(Subcommand)]
enum Command {
    /// Run a multisine experiment on a model and write the record as CSV.
    Simulate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "K")]
        k: usize,
        #[arg(long = "Ts")]
        ts: f64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "zoh")]
        disc: Disc,
    },
    /// Estimate frequency samples at the plan points from a record.
    Estimate {
        #[arg(long)]
        data: PathBuf,
        #[arg(long = "K")]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        kmin: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Identify a certified pH model from a record.
    Identify {
        #[arg(long)]
        data: PathBuf,
        #[arg(long = "Ts")]
        ts: f64,
        #[arg(long)]
        m: usize,
        #[arg(long = "svd-tol", default_value_t = 1e-10)]
        svd_tol: f64,
        #[arg(long, default_value_t = 1e-5)]
        dreg: f64,
        #[arg(long = "out-ph")]
        out_ph: PathBuf,
        #[arg(long = "out-ss")]
        out_ss: Option<PathBuf>,
        #[arg(long)]
        diag: Option<PathBuf>,
        /// Fixed intermediate order instead of the singular-value cutoff.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        kmin: Option<usize>,
        #[arg(long, default_value_t = 1e-3)]
        wmin: f64,
        #[arg(long, default_value_t = 1e3)]
        wmax: f64,
        #[arg(long, default_value_t = 100)]
        wpts: usize,
    },
    /// Compare a candidate model against a reference.
    Evaluate {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        cand: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        wmin: f64,
        #[arg(long, default_value_t = 1e3)]
        wmax: f64,
        #[arg(long, default_value_t = 400)]
        wpts: usize,
        /// Feedthrough removed from the candidate before the H2 error when the reference is strictly proper.
        #[arg(long, default_value_t = 1e-5)]
        dreg: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the RLC ladder benchmark as a pH model.
    Ladder {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = 0.5)]
        l: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { model, k, ts, m, sigma, seed, out, disc } => {
            let plan = select_interpolation_points(k, m)?;
            let sys = read_model(&model)?.to_descriptor()?;
            let sys = match sys.clock {
                Clock::Continuous => {
                    let method = match disc {
                        Disc::Zoh => Discretization::Zoh,
                        Disc::ImplicitEuler => Discretization::ImplicitEuler,
                    };
                    sys.discretize(ts, method)?
                }
                Clock::Discrete { .. } => sys,
            };
            let u = CMat::from_row_slice(1, k, &design_input(&plan));
            let y = add_noise(&sys.simulate(&u)?, sigma, seed)?;
            write_signal_csv(&out, &SignalRecord::new(ts, u, y)?)?;
            write_json(
                sidecar_path(&out),
                &json!({
                    "rng": NOISE_RNG,
                    "seed": seed,
                    "sigma": sigma,
                    "K": k,
                    "Ts": ts,
                    "m": m,
                    "k_min": plan.k_min,
                    "indices": plan.indices,
                    "disc": match disc { Disc::Zoh => "zoh", Disc::ImplicitEuler => "implicit-euler" },
                }),
            )?;
        }
        Command::Estimate { data, k, m, kmin, out } => {
            let samples = (|| {
                let record = read_signal_csv(&data)?;
                let mut plan = select_interpolation_points(k, m)?;
                if let Some(kmin) = kmin {
                    plan = plan.with_k_min(kmin)?;
                }
                estimate_frequency_response(&record, &plan)
            })()
            .map_err(|e| Error::Stage { stage: Stage::Estimate, source: Box::new(e) })?;
            write_frequency_csv(&out, &samples)?;
        }
        Command::Identify {
            data,
            ts,
            m,
            svd_tol,
            dreg,
            out_ph,
            out_ss,
            diag,
            order,
            kmin,
            wmin,
            wmax,
            wpts,
        } => {
            let record = read_signal_csv(&data)?;
            let record = SignalRecord { ts, ..record };
            let mut plan = select_interpolation_points(record.len(), m)?.with_ts(ts)?;
            if let Some(kmin) = kmin {
                plan = plan.with_k_min(kmin)?;
            }
            let options = PipelineOptions { svd_tol, d_reg: dreg, order, grid: log_grid(wmin, wmax, wpts) };
            let out = run_pipeline(&record, &plan, &options)?;
            write_model(&out_ph, &Model::Ph(out.ph.clone()))?;
            if let Some(path) = out_ss {
                write_model(path, &Model::Descriptor(out.realization.clone()))?;
            }
            if let Some(path) = diag {
                write_json(path, &json!({ "diagnostics": out.diagnostics, "passivity": out.report }))?;
            }
            if !out.report.verdict {
                eprintln!("warning: passivity certification failed: {:?}", out.report);
            }
        }
        Command::Evaluate { reference, cand, wmin, wmax, wpts, dreg, out } => {
            let reference = read_model(&reference)?.to_descriptor()?;
            let cand = read_model(&cand)?.to_descriptor()?;
            let grid = log_grid(wmin, wmax, wpts);
            let strip = if reference.d.iter().all(|v| v.norm() == 0.0) { dreg } else { 0.0 };
            let report = error_report(&reference, &cand, &grid, strip)?;
            let (bode_ref, bode_cand) = (bode_data(&reference, &grid), bode_data(&cand, &grid));
            if out.extension().is_some_and(|e| e == "csv") {
                write_bode_csv(&out, &bode_ref, &bode_cand)?;
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                write_json(
                    &out,
                    &json!({
                        "error_report": report,
                        "bode": { "reference": bode_ref, "candidate": bode_cand },
                    }),
                )?;
            }
        }
        Command::Ladder { n, r, c, l, out } => {
            write_model(&out, &Model::Ph(build_rlc_ladder(n, r, c, l)?))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.stage() {
            Some(stage) => {
                eprintln!("error[{stage}]: {}", e.root());
                ExitCode::from(2)
            }
            None => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
