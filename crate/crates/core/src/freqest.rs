//! Least-squares frequency-response estimation from a single multisine record.

use nalgebra::DVector;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::excitation::{unit_roots, ExperimentPlan, SignalRecord};
use crate::linalg::{CMat, C64};

/// Off-plan share of input energy above which the record is rejected.
pub const SUPPORT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySample {
    pub point: C64,
    pub value: CMat,
}

impl FrequencySample {
    pub fn scalar(point: C64, value: C64) -> Self {
        FrequencySample { point, value: CMat::from_element(1, 1, value) }
    }

    /// First entry of the response, the whole value for SISO data.
    pub fn h(&self) -> C64 {
        self.value[(0, 0)]
    }
}

/// `U_i = (1/K) Σ_k u_k e^{−2πj·i·k/K}`.
pub fn dft_coefficients(u: &[C64]) -> Vec<C64> {
    let k = u.len();
    if k == 0 {
        return Vec::new();
    }
    let mut buf = u.to_vec();
    FftPlanner::new().plan_fft_forward(k).process(&mut buf);
    let scale = 1.0 / k as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// Rows `t = k_min..K`, columns `U_{i_l} q_{i_l}^t`.
pub fn build_regressor(plan: &ExperimentPlan, spectrum: &[C64]) -> Result<CMat> {
    let k = plan.k;
    if spectrum.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "spectrum has {} bins, plan expects {k}",
            spectrum.len()
        )));
    }
    let total: f64 = spectrum.iter().map(|v| v.norm_sqr()).sum();
    let on: f64 = plan.indices.iter().map(|&i| spectrum[i].norm_sqr()).sum();
    if total > 0.0 {
        let ratio = (total - on).max(0.0) / total;
        if ratio > SUPPORT_TOL {
            return Err(Error::SupportMismatch { ratio });
        }
    }
    let roots = unit_roots(k);
    let rows = k - plan.k_min;
    Ok(CMat::from_fn(rows, plan.len(), |t, l| {
        let i = plan.indices[l];
        spectrum[i] * roots[(i * (t + plan.k_min)) % k]
    }))
}

/// Minimum-norm least squares via column-pivoted QR; returns the solution and numerical rank.
pub(crate) fn pivoted_least_squares(f: &CMat, y: &DVector<C64>) -> (DVector<C64>, usize) {
    let (rows, cols) = f.shape();
    let qr = f.clone().col_piv_qr();
    let r = qr.r();
    let diag_max = (0..cols.min(rows)).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
    let tol = rows.max(cols) as f64 * f64::EPSILON * diag_max;
    let rank = (0..cols.min(rows))
        .take_while(|&i| r[(i, i)].norm() > tol)
        .count();
    let q = qr.q();
    let qty = q.adjoint() * y;
    let mut x = DVector::<C64>::zeros(cols);
    if rank > 0 {
        let r11 = r.view((0, 0), (rank, rank)).into_owned();
        let sol = r11
            .solve_upper_triangular(&qty.rows(0, rank).into_owned())
            .unwrap_or_else(|| DVector::zeros(rank));
        x.rows_mut(0, rank).copy_from(&sol);
    }
    qr.p().inv_permute_rows(&mut x);
    (x, rank)
}

/// Solves `min ‖F·Ĥ − ȳ‖₂` for the response at every plan point (SISO).
pub fn estimate_frequency_response(
    record: &SignalRecord,
    plan: &ExperimentPlan,
) -> Result<Vec<FrequencySample>> {
    if record.u.nrows() != 1 || record.y.nrows() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "only SISO records are supported (got {} inputs, {} outputs)",
            record.u.nrows(),
            record.y.nrows()
        )));
    }
    if record.len() != plan.k {
        return Err(Error::DimensionMismatch(format!(
            "record has {} samples, plan expects {}",
            record.len(),
            plan.k
        )));
    }
    let u: Vec<C64> = record.u.row(0).iter().copied().collect();
    let f = build_regressor(plan, &dft_coefficients(&u))?;
    let r = plan.len();
    if f.nrows() < r {
        return Err(Error::RankDeficient { rank: f.nrows(), expected: r });
    }
    let ybar = DVector::from_iterator(
        plan.k - plan.k_min,
        record.y.row(0).iter().skip(plan.k_min).copied(),
    );
    let (h, rank) = pivoted_least_squares(&f, &ybar);
    if rank < r {
        return Err(Error::RankDeficient { rank, expected: r });
    }
    Ok(plan
        .points
        .iter()
        .zip(h.iter())
        .map(|(&q, &v)| FrequencySample::scalar(q, v))
        .collect())
}

/// Averages each plan pair so that `Ĥ(q̄) = conj Ĥ(q)` holds exactly.
///
/// Returns the largest relative asymmetry seen before averaging.
pub fn symmetrize_conjugates(samples: &mut [FrequencySample], plan: &ExperimentPlan) -> f64 {
    let half = plan.len() / 2;
    let mut worst: f64 = 0.0;
    for l in 0..half.min(samples.len() / 2) {
        let (a, b) = (samples[l].h(), samples[l + half].h());
        let scale = a.norm().max(b.norm());
        if scale > 0.0 {
            worst = worst.max((a - b.conj()).norm() / scale);
        }
        let avg = (a + b.conj()) * 0.5;
        samples[l].value[(0, 0)] = avg;
        samples[l + half].value[(0, 0)] = avg.conj();
    }
    worst
}
