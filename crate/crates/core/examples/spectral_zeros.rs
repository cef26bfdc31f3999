//! Spectral zeros of a passive model and the pH realization that interpolates there.

use nalgebra::DMatrix;
use phident::phreal::{certify_passivity, default_grid, extract_ph_form, interpolation_residual, realize_ph, spectral_zeros};
use phident::realify::{realify, ConjugatePairing};
use phident::{Clock, DescriptorSystem};

fn main() -> phident::Result<()> {
    // H(s) = 1/(s + 1) + 1 has a single spectral zero at √2.
    let one = |v: f64| DMatrix::from_element(1, 1, v);
    let scalar = DescriptorSystem::from_real(&one(1.0), &one(-1.0), &one(1.0), &one(1.0), &one(1.0), Clock::Continuous)?;
    println!("scalar example: {:?}", spectral_zeros(&scalar)?.iter().map(|t| t.lambda).collect::<Vec<_>>());

    // A lightly damped second-order resonator with a small feedthrough.
    let sys = DescriptorSystem::from_real(
        &DMatrix::identity(2, 2),
        &DMatrix::from_row_slice(2, 2, &[-0.1, -2.0, 2.0, -0.1]),
        &DMatrix::from_row_slice(2, 1, &[1.0, 0.0]),
        &DMatrix::from_row_slice(1, 2, &[1.0, 0.0]),
        &one(0.05),
        Clock::Continuous,
    )?;
    let triples = spectral_zeros(&sys)?;
    for t in &triples {
        println!("lambda = {:.6}", t.lambda);
    }

    let complex = realize_ph(&triples, &sys.d)?;
    println!("interpolation residual {:.2e}", interpolation_residual(&complex, &triples)?);
    let lambdas: Vec<_> = triples.iter().map(|t| t.lambda).collect();
    let pairing = ConjugatePairing::from_points(&lambdas)?;
    let real = realify(&complex, &pairing, &pairing)?;
    let ph = extract_ph_form(&real)?;
    let report = certify_passivity(&ph, &default_grid());
    println!("{}", serde_json::to_string_pretty(&report)?);

    let s = phident::linalg::I * 1.5;
    let gap = (ph.to_descriptor()?.eval_transfer(s)? - sys.eval_transfer(s)?).norm();
    println!("|H_ph(1.5j) - H(1.5j)| = {gap:.2e}");
    Ok(())
}
