//! Loewner pencil from frequency samples, compressed discrete realization,
//! and the map to continuous time.

use crate::error::{Error, Result};
use crate::freqest::FrequencySample;
use crate::linalg::{CMat, C64};
use crate::lti::{Clock, DescriptorSystem};
use crate::realify::{realify, Block, ConjugatePairing};

/// Singular values below this absolute floor mean there is nothing to realize.
pub const DEGENERATE_FLOOR: f64 = 1e-14;

/// `L`, `Ls` and the value stacks. Rows follow `left_points`, columns `right_points`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoewnerPencil {
    pub l: CMat,
    pub ls: CMat,
    /// Left values as an n×1 column (the realization's input map).
    pub left_values: CMat,
    /// Right values as a 1×n row (the realization's output map).
    pub right_values: CMat,
    pub left_points: Vec<C64>,
    pub right_points: Vec<C64>,
}

impl LoewnerPencil {
    pub fn size(&self) -> usize {
        self.l.nrows()
    }
}

/// Splits samples into two conjugate-closed halves, alternating conjugate pairs.
pub fn partition_samples(
    samples: &[FrequencySample],
) -> Result<(Vec<FrequencySample>, Vec<FrequencySample>)> {
    if samples.len() % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "{} samples cannot be split into equal halves",
            samples.len()
        )));
    }
    let points: Vec<C64> = samples.iter().map(|s| s.point).collect();
    let pairing = ConjugatePairing::from_points(&points)
        .map_err(|e| Error::InvalidParameter(format!("samples are not conjugate-closed: {e}")))?;
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (k, block) in pairing.blocks().iter().enumerate() {
        let side = if k % 2 == 0 { &mut left } else { &mut right };
        match *block {
            Block::Real(i) => side.push(samples[i].clone()),
            Block::Pair(i, j) => {
                side.push(samples[i].clone());
                side.push(samples[j].clone());
            }
        }
    }
    if left.len() != right.len() {
        return Err(Error::InvalidParameter(format!(
            "conjugate-closed halves have sizes {} and {}",
            left.len(),
            right.len()
        )));
    }
    Ok((left, right))
}

/// `L_kl = (v_k − w_l)/(μ_k − λ_l)`, `Ls_kl = (μ_k v_k − λ_l w_l)/(μ_k − λ_l)`.
pub fn build_loewner(left: &[FrequencySample], right: &[FrequencySample]) -> Result<LoewnerPencil> {
    if left.len() != right.len() || left.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} left and {} right samples",
            left.len(),
            right.len()
        )));
    }
    if left.iter().chain(right).any(|s| s.value.shape() != (1, 1)) {
        return Err(Error::DimensionMismatch("Loewner data must be scalar".into()));
    }
    let scale = left
        .iter()
        .chain(right)
        .map(|s| s.point.norm())
        .fold(0.0, f64::max);
    for a in left {
        for b in right {
            if (a.point - b.point).norm() < 1e-14 * scale {
                return Err(Error::PointCollision { left: a.point, right: b.point });
            }
        }
    }
    let n = left.len();
    let l = CMat::from_fn(n, n, |k, j| {
        (left[k].h() - right[j].h()) / (left[k].point - right[j].point)
    });
    let ls = CMat::from_fn(n, n, |k, j| {
        let (mu, lam) = (left[k].point, right[j].point);
        (mu * left[k].h() - lam * right[j].h()) / (mu - lam)
    });
    Ok(LoewnerPencil {
        l,
        ls,
        left_values: CMat::from_fn(n, 1, |k, _| left[k].h()),
        right_values: CMat::from_fn(1, n, |_, j| right[j].h()),
        left_points: left.iter().map(|s| s.point).collect(),
        right_points: right.iter().map(|s| s.point).collect(),
    })
}

/// How [`realize_discrete`] picks the retained order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderSelection {
    /// Count singular values above `tol · σ_max`.
    Tolerance(f64),
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteRealization {
    pub system: DescriptorSystem,
    /// Singular values of `[L, Ls]`, descending.
    pub singular_values: Vec<f64>,
    /// Whether the pencil was moved to real coordinates before compression.
    pub real: bool,
}

/// Projects the Loewner pencil onto its dominant row/column spaces.
///
/// With `Y` the leading left singular vectors of `[L, Ls]` and `X` the leading
/// right singular vectors of `[L; Ls]`, returns
/// `(−YᴴLX, −YᴴLsX, YᴴV, WX, 0)` on a discrete clock.
/// Conjugate-closed data are first mapped to real coordinates.
pub fn realize_discrete(
    pencil: &LoewnerPencil,
    order: OrderSelection,
    ts: f64,
) -> Result<DiscreteRealization> {
    let n = pencil.size();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty Loewner pencil".into()));
    }
    let clock = Clock::Discrete { ts };
    let raw = DescriptorSystem::new(
        -&pencil.l,
        -&pencil.ls,
        pencil.left_values.clone(),
        pencil.right_values.clone(),
        CMat::zeros(1, 1),
        clock,
    )?;
    let (work, real) = match (
        ConjugatePairing::from_points(&pencil.left_points),
        ConjugatePairing::from_points(&pencil.right_points),
    ) {
        (Ok(rows), Ok(cols)) => match realify(&raw, &rows, &cols) {
            Ok(sys) => (sys, true),
            Err(_) => (raw, false),
        },
        _ => (raw, false),
    };

    let mut wide = CMat::zeros(n, 2 * n);
    wide.view_mut((0, 0), (n, n)).copy_from(&work.e);
    wide.view_mut((0, n), (n, n)).copy_from(&work.a);
    let mut tall = CMat::zeros(2 * n, n);
    tall.view_mut((0, 0), (n, n)).copy_from(&work.e);
    tall.view_mut((n, 0), (n, n)).copy_from(&work.a);

    let svd_wide = wide.svd(true, false);
    let svd_tall = tall.svd(false, true);
    let sv: Vec<f64> = svd_wide.singular_values.iter().copied().collect();
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    if !(sigma_max >= DEGENERATE_FLOOR) {
        return Err(Error::DegenerateData { sigma_max });
    }
    let k = match order {
        OrderSelection::Tolerance(tol) => sv.iter().filter(|&&s| s > tol * sigma_max).count(),
        OrderSelection::Fixed(k) => {
            if k == 0 || k > n {
                return Err(Error::InvalidParameter(format!(
                    "order {k} outside [1, {n}]"
                )));
            }
            k
        }
    };
    let y = svd_wide.u.expect("left vectors requested").columns(0, k).into_owned();
    let x = svd_tall
        .v_t
        .expect("right vectors requested")
        .rows(0, k)
        .adjoint();
    let yh = y.adjoint();
    let system = DescriptorSystem::new(
        &yh * &work.e * &x,
        &yh * &work.a * &x,
        &yh * &work.b,
        &work.c * &x,
        CMat::zeros(1, 1),
        clock,
    )?;
    Ok(DiscreteRealization { system, singular_values: sv, real })
}

/// `E_c = Ê, A_c = (Â − Ê)/Ts, B_c = B̂/Ts, C_c = Ĉ, D_c = d_reg·I`.
///
/// The result satisfies `H_c(s) = H_d(1 + s·Ts) − D̂ + d_reg·I`.
pub fn to_continuous(disc: &DescriptorSystem, d_reg: f64) -> Result<DescriptorSystem> {
    let ts = match disc.clock {
        Clock::Discrete { ts } => ts,
        Clock::Continuous => {
            return Err(Error::InvalidParameter("to_continuous needs a discrete system".into()))
        }
    };
    let inv = 1.0 / ts;
    let (p, m) = (disc.outputs(), disc.inputs());
    DescriptorSystem::new(
        disc.e.clone(),
        (&disc.a - &disc.e).scale(inv),
        disc.b.scale(inv),
        disc.c.clone(),
        CMat::from_fn(p, m, |i, j| if i == j { C64::new(d_reg, 0.0) } else { C64::new(0.0, 0.0) }),
        Clock::Continuous,
    )
}
