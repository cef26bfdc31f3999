//! Least-squares frequency samples from a time record, compared with the true
//! discrete transfer function at every plan point.

use phident::excitation::{design_input, select_interpolation_points};
use phident::freqest::{estimate_frequency_response, symmetrize_conjugates};
use phident::linalg::CMat;
use phident::lti::build_rlc_ladder;
use phident::{Discretization, SignalRecord};

fn main() -> phident::Result<()> {
    let (k, ts, m) = (4096, 1e-2, 16);
    let sys = build_rlc_ladder(3, 1.0, 0.5, 0.5)?.to_descriptor()?.discretize(ts, Discretization::Zoh)?;

    for k_min in [k / 8, k / 4, k / 2] {
        let plan = select_interpolation_points(k, m)?.with_k_min(k_min)?;
        let u = design_input(&plan);
        let y = sys.simulate(&CMat::from_row_slice(1, k, &u))?;
        let record = SignalRecord::siso(ts, &u, y.as_slice())?;
        let mut samples = estimate_frequency_response(&record, &plan)?;
        let asym = symmetrize_conjugates(&mut samples, &plan);

        let worst = samples
            .iter()
            .map(|s| {
                let truth = sys.eval_transfer(s.point).map(|h| h[(0, 0)]).unwrap();
                (s.h() - truth).norm() / truth.norm()
            })
            .fold(0.0, f64::max);
        println!("k_min {k_min:>5}: worst relative error {worst:.2e}, conjugate asymmetry {asym:.1e}");
    }
    Ok(())
}
