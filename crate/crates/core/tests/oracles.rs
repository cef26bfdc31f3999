mod common;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use phident::analysis::h2_norm;
use phident::phreal::spectral_zeros;
use phident::{Clock, DescriptorSystem};

use common::*;

#[test]
fn quadrature_oracle_on_first_order_lag() {
    let sys = DescriptorSystem::from_real(
        &DMatrix::from_element(1, 1, 1.0),
        &DMatrix::from_element(1, 1, -3.0),
        &DMatrix::from_element(1, 1, 2.0),
        &DMatrix::from_element(1, 1, 1.0),
        &DMatrix::zeros(1, 1),
        Clock::Continuous,
    )
    .unwrap();
    // |2/(iω+3)|² integrates to 4π/3 over the real line
    let want = (4.0 / 6.0f64).sqrt();
    assert!((h2_quadrature(&sys) - want).abs() < 1e-12);
}

#[test]
fn root_finder_on_known_polynomial() {
    // (s − 1)(s + 2)(s² + 2s + 5)
    let p = poly_mul(&poly_mul(&[-1.0, 1.0], &[2.0, 1.0]), &[5.0, 2.0, 1.0]);
    let roots = poly_roots(&p);
    assert_eq!(roots.len(), 4);
    for w in [C64::new(-2.0, 0.0), C64::new(-1.0, -2.0), C64::new(-1.0, 2.0), C64::new(1.0, 0.0)] {
        let near = roots.iter().map(|r| (r - w).norm()).fold(f64::INFINITY, f64::min);
        assert!(near < 1e-12, "{w}: {near:e}");
    }
}

#[test]
fn leverrier_matches_transfer() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sys = random_stable(&mut rng, 4);
    let (a, b) = sys.standard_form().unwrap();
    let (a, b, c) = (a.map(|v| v.re), b.map(|v| v.re), sys.c.map(|v| v.re));
    let (num, den) = siso_rational(&a, &b, &c, 0.0);
    let s = C64::new(0.3, 1.7);
    let eval = |p: &[f64]| p.iter().rev().fold(C64::new(0.0, 0.0), |acc, &v| acc * s + v);
    let direct = transfer(&sys, s)[(0, 0)];
    assert!((eval(&num) / eval(&den) - direct).norm() < 1e-10 * direct.norm());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn h2_agrees_with_quadrature(seed in any::<u64>(), n in 1usize..7) {
        let sys = random_stable(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let exact = h2_norm(&sys).unwrap();
        let quad = h2_quadrature(&sys);
        prop_assert!((exact - quad).abs() <= 1e-6 * quad, "{exact} vs {quad}");
    }

    #[test]
    fn spectral_zeros_agree_with_popov_roots(seed in any::<u64>(), n in 1usize..5) {
        let ph = random_passive(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let (a, b, c, d) = ph_standard(&ph);
        let (num, den) = siso_rational(&a, &b, &c, d[(0, 0)]);
        let oracle: Vec<C64> = poly_roots(&popov_numerator(&num, &den))
            .into_iter()
            .filter(|z| z.re > 1e-8)
            .collect();
        let sys = DescriptorSystem::from_real(&DMatrix::identity(n, n), &a, &b, &c, &d, Clock::Continuous).unwrap();
        let zeros = spectral_zeros(&sys).unwrap();
        prop_assert_eq!(zeros.len(), oracle.len());
        for z in &oracle {
            let near = zeros.iter().map(|t| (t.lambda - z).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(near < 1e-6 * (1.0 + z.norm()), "{z}: {near}");
        }
    }
}
