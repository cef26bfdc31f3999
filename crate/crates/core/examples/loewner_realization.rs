//! Loewner realization from exact discrete samples: the singular values of the pencil
//! reveal the order, and the compressed model interpolates the data.

use phident::excitation::select_interpolation_points;
use phident::loewner::{build_loewner, partition_samples, realize_discrete, to_continuous, OrderSelection};
use phident::lti::build_rlc_ladder;
use phident::{Discretization, FrequencySample};

fn main() -> phident::Result<()> {
    let ts = 1e-2;
    let truth = build_rlc_ladder(2, 1.0, 0.5, 0.5)?.to_descriptor()?;
    let disc = truth.discretize(ts, Discretization::ImplicitEuler)?;
    let plan = select_interpolation_points(4096, 12)?;
    let samples = plan
        .points
        .iter()
        .map(|&q| Ok(FrequencySample::scalar(q, disc.eval_transfer(q)?[(0, 0)])))
        .collect::<phident::Result<Vec<_>>>()?;

    let (left, right) = partition_samples(&samples)?;
    let pencil = build_loewner(&left, &right)?;
    let real = realize_discrete(&pencil, OrderSelection::Tolerance(1e-10), ts)?;
    let s0 = real.singular_values[0];
    for (i, s) in real.singular_values.iter().enumerate() {
        println!("sigma_{i} / sigma_0 = {:.3e}", s / s0);
    }
    println!("retained order {} (real coordinates: {})", real.system.order(), real.real);

    let worst = samples
        .iter()
        .map(|s| (real.system.eval_transfer(s.point).unwrap()[(0, 0)] - s.h()).norm() / s.h().norm())
        .fold(0.0, f64::max);
    println!("interpolation error {worst:.2e}");

    // Implicit-Euler data lift back to the continuous model exactly.
    let cont = to_continuous(&real.system, 0.0)?;
    let mut poles = cont.poles()?;
    poles.sort_by(|a, b| a.im.total_cmp(&b.im));
    for p in &poles {
        println!("continuous pole {:+.4} {:+.4}j", p.re, p.im);
    }
    Ok(())
}
