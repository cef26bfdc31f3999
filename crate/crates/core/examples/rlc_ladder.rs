//! Builds the RLC ladder benchmark, checks its pH structure and prints poles and norms.
//!
//! ```bash
//! cargo run --example rlc_ladder -- 5
//! ```

use phident::analysis::{default_metric_grid, h2_norm, hinf_norm};
use phident::lti::build_rlc_ladder;
use phident::model_io::{model_to_json, Model};

fn main() -> phident::Result<()> {
    let sections: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let ph = build_rlc_ladder(sections, 1.0, 0.5, 0.5)?;
    ph.validate()?;
    let res = ph.residuals();
    println!("order {} with {} port", ph.order(), ph.ports());
    println!("structure residuals: {res:?}");

    let sys = ph.to_descriptor()?;
    let mut poles = sys.poles()?;
    poles.sort_by(|a, b| a.im.total_cmp(&b.im));
    for p in &poles {
        println!("pole {:+.4} {:+.4}j", p.re, p.im);
    }
    println!("H2 = {:.6}", h2_norm(&sys)?);
    println!("Hinf = {:.6}", hinf_norm(&sys, &default_metric_grid())?);

    if sections <= 2 {
        println!("{}", model_to_json(&Model::Ph(ph))?);
    }
    Ok(())
}
