//! Spectral zeros, the spectral-zero Loewner realization, explicit pH form and
//! passivity certification.

use nalgebra::{Cholesky, DMatrix};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, real_part, CMat, CVec, C64};
use crate::lti::{log_grid, popov_min_eig, Clock, DescriptorSystem, PHForm};

/// Spectral zeros with real part at or below this are treated as imaginary-axis zeros.
pub const TOL_RHP: f64 = 1e-8;
/// Relative tolerance of the tangential interpolation contract.
pub const TOL_INTERP: f64 = 1e-8;

/// Spectral zero `λ`, unit direction `r` with `Φ(λ) r = 0`, and `w = H(λ) r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTriple {
    pub lambda: C64,
    pub r: CVec,
    pub w: CVec,
}

fn structured_pencil(sys: &DescriptorSystem) -> (CMat, CMat) {
    let (n, m) = (sys.order(), sys.inputs());
    let size = 2 * n + m;
    let mut mm = CMat::zeros(size, size);
    let mut nn = CMat::zeros(size, size);
    mm.view_mut((0, n), (n, n)).copy_from(&sys.a);
    mm.view_mut((0, 2 * n), (n, m)).copy_from(&sys.b);
    mm.view_mut((n, 0), (n, n)).copy_from(&sys.a.adjoint());
    mm.view_mut((n, 2 * n), (n, m)).copy_from(&sys.c.adjoint());
    mm.view_mut((2 * n, 0), (m, n)).copy_from(&sys.b.adjoint());
    mm.view_mut((2 * n, n), (m, n)).copy_from(&sys.c);
    mm.view_mut((2 * n, 2 * n), (m, m)).copy_from(&(&sys.d + sys.d.adjoint()));
    nn.view_mut((0, n), (n, n)).copy_from(&sys.e);
    nn.view_mut((n, 0), (n, n)).copy_from(&(-sys.e.adjoint()));
    (mm, nn)
}

/// All finite eigenvalues of the spectral-zero pencil, including those off the RHP.
pub fn spectral_zero_candidates(sys: &DescriptorSystem) -> Result<Vec<(C64, CVec)>> {
    if sys.clock != Clock::Continuous {
        return Err(Error::InvalidParameter("spectral zeros need a continuous system".into()));
    }
    if sys.inputs() != sys.outputs() {
        return Err(Error::DimensionMismatch("spectral zeros need a square system".into()));
    }
    let (mm, nn) = structured_pencil(sys);
    let (m_norm, n_norm) = (mm.norm(), nn.norm().max(f64::MIN_POSITIVE));
    let pairs = linalg::generalized_eigen(&mm, &nn)?;
    let (n, m) = (sys.order(), sys.inputs());
    Ok(pairs
        .into_iter()
        .filter(|p| {
            let (a, b) = (p.alpha.norm(), p.beta.norm());
            let indeterminate = a <= 1e-10 * m_norm && b <= 1e-10 * n_norm;
            let infinite = b == 0.0 || a * n_norm > 1e12 * m_norm * b;
            !indeterminate && !infinite
        })
        .map(|p| (p.alpha / p.beta, p.vector.rows(2 * n, m).into_owned()))
        .collect())
}

fn normalize_direction(mut r: CVec) -> Option<CVec> {
    let norm = r.norm();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    r /= C64::new(norm, 0.0);
    if let Some(first) = r.iter().copied().find(|v| v.norm() > 1e-12) {
        let phase = first.conj() / first.norm();
        r *= phase;
    }
    Some(r)
}

/// Right-half-plane spectral zeros with unit-norm directions, sorted by imaginary part.
pub fn spectral_zeros(sys: &DescriptorSystem) -> Result<Vec<SpectralTriple>> {
    let mut triples = Vec::new();
    for (lambda, r) in spectral_zero_candidates(sys)? {
        if !(lambda.re > TOL_RHP) {
            continue;
        }
        let Some(r) = normalize_direction(r) else { continue };
        let w = sys.eval_transfer(lambda)? * &r;
        triples.push(SpectralTriple { lambda, r, w: w.column(0).into_owned() });
    }
    if triples.is_empty() {
        return Err(Error::NoRhpZeros);
    }
    triples.sort_by(|a, b| {
        a.lambda
            .im
            .total_cmp(&b.lambda.im)
            .then(a.lambda.re.total_cmp(&b.lambda.re))
    });
    Ok(triples)
}

fn stack(triples: &[SpectralTriple]) -> (Vec<C64>, CMat, CMat) {
    let lam: Vec<C64> = triples.iter().map(|t| t.lambda).collect();
    let r = CMat::from_columns(&triples.iter().map(|t| t.r.clone()).collect::<Vec<_>>());
    let w = CMat::from_columns(&triples.iter().map(|t| t.w.clone()).collect::<Vec<_>>());
    (lam, r, w)
}

/// Pick matrix `L` (Hermitian) and shifted matrix `Ls` (skew-Hermitian).
///
/// `L_ij = (r_iᴴw_j + w_iᴴr_j)/(λ_j + λ̄_i)`,
/// `Ls_ij = (λ_j r_iᴴw_j − λ̄_i w_iᴴr_j)/(λ_j + λ̄_i)`.
pub fn build_spectral_loewner(triples: &[SpectralTriple]) -> Result<(CMat, CMat)> {
    if triples.is_empty() {
        return Err(Error::InvalidParameter("no spectral triples".into()));
    }
    let (lam, r, w) = stack(triples);
    let rw = r.adjoint() * &w;
    let wr = w.adjoint() * &r;
    let n = lam.len();
    let l = CMat::from_fn(n, n, |i, j| (rw[(i, j)] + wr[(i, j)]) / (lam[j] + lam[i].conj()));
    let ls = CMat::from_fn(n, n, |i, j| {
        (lam[j] * rw[(i, j)] - lam[i].conj() * wr[(i, j)]) / (lam[j] + lam[i].conj())
    });
    Ok((l, ls))
}

/// Largest relative tangential interpolation error `‖H(λ_j) r_j − w_j‖ / ‖w_j‖`.
pub fn interpolation_residual(sys: &DescriptorSystem, triples: &[SpectralTriple]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in triples {
        let got = sys.eval_transfer(t.lambda)? * &t.r;
        let err = (got.column(0) - &t.w).norm() / t.w.norm().max(f64::MIN_POSITIVE);
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Complex realization `E = L, A = Ls − RᴴDR, B = Wᴴ + RᴴD, C = W − DR`.
///
/// `E` is flipped to positive definite together with `A, B, C` when needed;
/// the result is checked against the tangential interpolation contract.
pub fn realize_ph(triples: &[SpectralTriple], d: &CMat) -> Result<DescriptorSystem> {
    let (l, ls) = build_spectral_loewner(triples)?;
    let (_, r, w) = stack(triples);
    if d.nrows() != w.nrows() || d.ncols() != r.nrows() || !d.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "feedthrough {:?} for {}-dimensional directions",
            d.shape(),
            r.nrows()
        )));
    }
    let rh = r.adjoint();
    let mut e = l;
    let mut a = ls - &rh * d * &r;
    let mut b = w.adjoint() + &rh * d;
    let mut c = &w - d * &r;
    let ev = linalg::hermitian_eigenvalues(&e);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if hi < 0.0 {
        e = -e;
        a = -a;
        b = -b;
        c = -c;
    } else if lo <= 0.0 {
        return Err(Error::IndefiniteE { min: lo, max: hi });
    }
    let sys = DescriptorSystem::new(e, a, b, c, d.clone(), Clock::Continuous)?;
    let residual = interpolation_residual(&sys, triples)?;
    if !(residual <= TOL_INTERP) {
        return Err(Error::InterpolationFailure { residual });
    }
    Ok(sys)
}

/// Cholesky-based similarity to `Q = I` coordinates, then split into pH parts.
pub fn extract_ph_form(sys: &DescriptorSystem) -> Result<PHForm> {
    if sys.max_imag() > 0.0 {
        return Err(Error::ConjugacyViolation("pH extraction needs a real system".into()));
    }
    let e = real_part(&sys.e);
    let asym = (&e - e.transpose()).norm();
    if asym > 1e-8 * (1.0 + e.norm()) {
        return Err(Error::NotSpd);
    }
    let esym = (&e + e.transpose()).scale(0.5);
    let chol = Cholesky::new(esym).ok_or(Error::NotSpd)?;
    let t = chol.l();
    let (a, b, c, d) = (
        real_part(&sys.a),
        real_part(&sys.b),
        real_part(&sys.c),
        real_part(&sys.d),
    );
    let solve_l = |m: &DMatrix<f64>| t.solve_lower_triangular(m).ok_or(Error::NotSpd);
    // T⁻¹ A T⁻ᵀ = T⁻¹ (T⁻¹ Aᵀ)ᵀ
    let at = solve_l(&solve_l(&a.transpose())?.transpose())?;
    let bt = solve_l(&b)?;
    let ct = solve_l(&c.transpose())?;
    let n = sys.order();
    let ph = PHForm {
        j: (&at - at.transpose()).scale(0.5),
        r: -(&at + at.transpose()).scale(0.5),
        q: DMatrix::identity(n, n),
        f: (&bt + &ct).scale(0.5),
        p: (&ct - &bt).scale(0.5),
        s: (&d + d.transpose()).scale(0.5),
        n: (&d - d.transpose()).scale(0.5),
    };
    let min_eig = ph.residuals().block_min_eig;
    if min_eig < -1e-6 {
        return Err(Error::StructureFailure { min_eig });
    }
    Ok(ph)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PassivityReport {
    pub popov_min_eig: f64,
    pub block_min_eig: f64,
    pub q_min_eig: f64,
    pub j_skew_residual: f64,
    pub verdict: bool,
}

/// Default certification grid: 100 log points on `[1e−3, 1e3]` rad/s.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 100)
}

pub fn certify_passivity(ph: &PHForm, grid: &[f64]) -> PassivityReport {
    let res = ph.residuals();
    let block_norm = res.block_max_eig.abs().max(res.block_min_eig.abs());
    let j_norm = ph.j.norm();
    let popov = ph
        .to_descriptor()
        .and_then(|sys| popov_min_eig(&sys, grid))
        .unwrap_or(f64::NAN);
    let verdict = res.j_skew <= 1e-8 * (1.0 + j_norm)
        && res.q_min_eig >= -1e-8
        && res.block_min_eig >= -1e-8 * (1.0 + block_norm)
        && popov >= -1e-6;
    PassivityReport {
        popov_min_eig: popov,
        block_min_eig: res.block_min_eig,
        q_min_eig: res.q_min_eig,
        j_skew_residual: res.j_skew,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lti::build_rlc_ladder;
    use crate::realify::{realify, ConjugatePairing};
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn scalar(e: f64, a: f64, b: f64, cc: f64, d: f64) -> DescriptorSystem {
        let m = |v| DMatrix::from_element(1, 1, v);
        DescriptorSystem::from_real(&m(e), &m(a), &m(b), &m(cc), &m(d), Clock::Continuous).unwrap()
    }

    fn sqrt2_triple() -> SpectralTriple {
        let s2 = 2f64.sqrt();
        SpectralTriple {
            lambda: c(s2),
            r: CVec::from_element(1, c(1.0)),
            w: CVec::from_element(1, c(s2)),
        }
    }

    #[test]
    fn scalar_spectral_zero() {
        let sys = scalar(1.0, -1.0, 1.0, 1.0, 1.0);
        let z = spectral_zeros(&sys).unwrap();
        assert_eq!(z.len(), 1);
        let s2 = 2f64.sqrt();
        assert!((z[0].lambda - c(s2)).norm() < 1e-10);
        assert!((z[0].r[0] - c(1.0)).norm() < 1e-14);
        assert!((z[0].w[0] - c(s2)).norm() < 1e-10);
    }

    #[test]
    fn lossless_system_has_no_rhp_zeros() {
        let ph = PHForm {
            r: DMatrix::zeros(2, 2),
            ..build_rlc_ladder(1, 1.0, 1.0, 1.0).unwrap()
        };
        let sys = ph.to_descriptor().unwrap();
        assert!(matches!(spectral_zeros(&sys), Err(Error::NoRhpZeros)));
    }

    #[test]
    fn scalar_spectral_loewner() {
        let (l, ls) = build_spectral_loewner(&[sqrt2_triple()]).unwrap();
        assert!((l[(0, 0)] - c(1.0)).norm() < 1e-15);
        assert!(ls[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn scalar_realization_is_the_original_system() {
        // Regression for the sign convention: E = L, A = Ls − RᴴDR, B = Wᴴ + RᴴD, C = W − DR.
        let sys = realize_ph(&[sqrt2_triple()], &CMat::from_element(1, 1, c(1.0))).unwrap();
        let s2 = 2f64.sqrt();
        assert!((sys.e[(0, 0)] - c(1.0)).norm() < 1e-15);
        assert!((sys.a[(0, 0)] - c(-1.0)).norm() < 1e-15);
        assert!((sys.b[(0, 0)] - c(s2 + 1.0)).norm() < 1e-15);
        assert!((sys.c[(0, 0)] - c(s2 - 1.0)).norm() < 1e-15);
        let h = sys.eval_transfer(c(s2)).unwrap();
        assert!((h[(0, 0)] - c(s2)).norm() < 1e-14);
    }

    #[test]
    fn empty_triples_are_rejected() {
        assert!(realize_ph(&[], &CMat::from_element(1, 1, c(1.0))).is_err());
    }

    fn ladder_intermediate(n_sections: usize, d_reg: f64) -> DescriptorSystem {
        let mut sys = build_rlc_ladder(n_sections, 1.0, 0.5, 0.5).unwrap().to_descriptor().unwrap();
        sys.d = CMat::from_element(1, 1, c(d_reg));
        sys
    }

    #[test]
    fn order_two_pick_matrix_is_definite() {
        let sys = ladder_intermediate(1, 1e-2);
        let z = spectral_zeros(&sys).unwrap();
        assert_eq!(z.len(), 2);
        let (l, ls) = build_spectral_loewner(&z).unwrap();
        assert!(linalg::hermitian_eigenvalues(&l)[0] > 0.0);
        assert!((&l - l.adjoint()).norm() <= 1e-12 * l.norm());
        assert!((&ls + ls.adjoint()).norm() <= 1e-12 * ls.norm());
    }

    #[test]
    fn ladder_round_trip_is_passive() {
        let sys = ladder_intermediate(2, 1e-5);
        let z = spectral_zeros(&sys).unwrap();
        assert_eq!(z.len(), 4);
        let lam: Vec<C64> = z.iter().map(|t| t.lambda).collect();
        let complex = realize_ph(&z, &sys.d).unwrap();
        assert!(interpolation_residual(&complex, &z).unwrap() <= 1e-8);
        let pairing = ConjugatePairing::from_points(&lam).unwrap();
        let real = realify(&complex, &pairing, &pairing).unwrap();
        assert!(popov_min_eig(&real, &default_grid()).unwrap() >= -1e-8);
        let ph = extract_ph_form(&real).unwrap();
        let report = certify_passivity(&ph, &default_grid());
        assert!(report.verdict, "{report:?}");
        for s in [C64::new(0.1, 0.5), C64::new(1.0, -3.0), C64::new(0.0, 20.0)] {
            let a = sys.eval_transfer(s).unwrap();
            let b = ph.to_descriptor().unwrap().eval_transfer(s).unwrap();
            assert!((a - &b).norm() <= 1e-8 * b.norm());
        }
    }

    #[test]
    fn extract_scalar_examples() {
        let ph = extract_ph_form(&scalar(1.0, -1.0, 1.0, 1.0, 1.0)).unwrap();
        let one = DMatrix::from_element(1, 1, 1.0);
        let zero = DMatrix::<f64>::zeros(1, 1);
        assert_eq!((&ph.j, &ph.r, &ph.q, &ph.f, &ph.p, &ph.s, &ph.n), (&zero, &one, &one, &one, &zero, &one, &zero));

        let ph = extract_ph_form(&scalar(4.0, -4.0, 2.0, 2.0, 0.0)).unwrap();
        assert_eq!((ph.j[(0, 0)], ph.r[(0, 0)], ph.f[(0, 0)], ph.p[(0, 0)]), (0.0, 1.0, 1.0, 0.0));

        let bad = scalar(-1.0, -1.0, 1.0, 1.0, 0.0);
        assert!(matches!(extract_ph_form(&bad), Err(Error::NotSpd)));
    }

    #[test]
    fn certification_examples() {
        let ladder = build_rlc_ladder(3, 1.0, 0.5, 0.5).unwrap();
        let report = certify_passivity(&ladder, &default_grid());
        assert!(report.verdict);
        assert!(report.j_skew_residual <= 1e-12);
        let flipped = PHForm { r: -&ladder.r, ..ladder };
        let report = certify_passivity(&flipped, &default_grid());
        assert!(!report.verdict);
        assert!(report.block_min_eig < 0.0);
    }

    #[test]
    fn pipeline_of_structure_preserves_transfer() {
        let sys = ladder_intermediate(3, 1e-5);
        let z = spectral_zeros(&sys).unwrap();
        let lam: Vec<C64> = z.iter().map(|t| t.lambda).collect();
        let pairing = ConjugatePairing::from_points(&lam).unwrap();
        let complex = realize_ph(&z, &sys.d).unwrap();
        let real = realify(&complex, &pairing, &pairing).unwrap();
        let ph_sys = extract_ph_form(&real).unwrap().to_descriptor().unwrap();
        for k in 0..20 {
            let s = C64::new(0.05 * k as f64, 0.3 * k as f64 - 2.0);
            let h0 = complex.eval_transfer(s).unwrap();
            let h1 = real.eval_transfer(s).unwrap();
            let h2 = ph_sys.eval_transfer(s).unwrap();
            assert!((&h0 - &h1).norm() <= 1e-10 * h0.norm());
            assert!((&h1 - &h2).norm() <= 1e-10 * h1.norm());
        }
    }

    /// Random passive SISO system of order `n` in pH coordinates with `D > 0`.
    fn random_passive(n: usize, v: &[f64]) -> DescriptorSystem {
        let mut it = v.iter().cycle().copied();
        let mut take = |r: usize, c: usize| DMatrix::from_fn(r, c, |_, _| it.next().unwrap());
        let g = take(n + 1, n + 1);
        let block = &g * g.transpose() + DMatrix::identity(n + 1, n + 1).scale(0.05);
        let h = take(n, n);
        let qf = take(n, n);
        let f = take(n, 1);
        PHForm {
            j: &h - h.transpose(),
            r: block.view((0, 0), (n, n)).into_owned(),
            q: &qf * qf.transpose() + DMatrix::identity(n, n).scale(0.2),
            f,
            p: block.view((0, n), (n, 1)).into_owned(),
            s: block.view((n, n), (1, 1)).into_owned(),
            n: DMatrix::zeros(1, 1),
        }
        .to_descriptor()
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn spectral_zeros_annihilate_popov(n in 1usize..5, v in prop::collection::vec(-1.0f64..1.0, 30)) {
            let sys = random_passive(n, &v);
            let z = spectral_zeros(&sys).unwrap();
            prop_assert!(z.len() <= n);
            for t in &z {
                prop_assert!(t.lambda.re > 0.0);
                let phi = sys.popov(t.lambda).unwrap();
                let scale = phi.norm().max(sys.d.norm());
                prop_assert!((phi * &t.r).norm() <= 1e-8 * scale.max(1.0));
            }
        }

        #[test]
        fn spectral_loewner_symmetries(n in 1usize..5, v in prop::collection::vec(-1.0f64..1.0, 30)) {
            let sys = random_passive(n, &v);
            let z = spectral_zeros(&sys).unwrap();
            let (l, ls) = build_spectral_loewner(&z).unwrap();
            prop_assert!((&l - l.adjoint()).norm() <= 1e-12 * l.norm());
            prop_assert!((&ls + ls.adjoint()).norm() <= 1e-12 * ls.norm().max(l.norm()));
        }

        #[test]
        fn realization_meets_contract_and_structure(n in 1usize..5, v in prop::collection::vec(-1.0f64..1.0, 30)) {
            let sys = random_passive(n, &v);
            let z = spectral_zeros(&sys).unwrap();
            let complex = realize_ph(&z, &sys.d).unwrap();
            prop_assert!(interpolation_residual(&complex, &z).unwrap() <= 1e-8);
            let lam: Vec<C64> = z.iter().map(|t| t.lambda).collect();
            let pairing = ConjugatePairing::from_points(&lam).unwrap();
            let ph = extract_ph_form(&realify(&complex, &pairing, &pairing).unwrap()).unwrap();
            let res = ph.residuals();
            prop_assert!(res.j_skew <= 1e-8);
            prop_assert!(res.q_min_eig >= -1e-8);
            prop_assert!(res.block_min_eig >= -1e-8 * (1.0 + res.block_max_eig));
        }
    }
}
