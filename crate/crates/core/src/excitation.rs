//! Experiment design: interpolation points, multisine input, measurement noise.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};

/// Generator behind [`add_noise`], recorded next to generated data.
pub const NOISE_RNG: &str = "ChaCha8Rng (rand_chacha 0.9) + StandardNormal (rand_distr 0.5)";

/// DFT bins probed by one multisine experiment.
///
/// `indices` holds the `r/2` base bins followed by their partners `K − i`
/// in the same order, so entry `l` pairs with entry `l + r/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub k: usize,
    pub ts: f64,
    pub indices: Vec<usize>,
    pub points: Vec<C64>,
    pub k_min: usize,
}

/// `e^{2πj·i/K}` for `i = 0..K`.
pub(crate) fn unit_roots(k: usize) -> Vec<C64> {
    (0..k)
        .map(|i| C64::from_polar(1.0, 2.0 * PI * i as f64 / k as f64))
        .collect()
}

impl ExperimentPlan {
    /// Plan for explicit base bins; partners are appended automatically.
    pub fn from_base_indices(k: usize, base: &[usize], k_min: usize) -> Result<Self> {
        if k < 4 {
            return Err(Error::InvalidParameter(format!("K = {k} < 4")));
        }
        let mut indices = base.to_vec();
        indices.extend(base.iter().map(|&i| k - i));
        let roots = unit_roots(k);
        let plan = ExperimentPlan {
            k,
            ts: 1.0,
            points: indices.iter().map(|&i| roots[i % k]).collect(),
            indices,
            k_min,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        let (k, r) = (self.k, self.indices.len());
        let half = r / 2;
        for (l, &i) in self.indices.iter().enumerate() {
            if i == 0 || i >= k {
                return Err(Error::InvalidParameter(format!("index {i} outside [1, {}]", k - 1)));
            }
            if l < half && self.indices[l + half] != k - i {
                return Err(Error::InvalidParameter(format!(
                    "index {i} is not followed by its partner {}",
                    k - i
                )));
            }
        }
        let mut sorted = self.indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != r || r % 2 != 0 {
            return Err(Error::InvalidParameter("indices must be distinct and paired".into()));
        }
        if self.k_min >= k || k - self.k_min < r {
            return Err(Error::InvalidParameter(format!(
                "k_min = {} leaves {} steady-state samples for {r} unknowns",
                self.k_min,
                k.saturating_sub(self.k_min)
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Position of the conjugate partner of entry `l`.
    pub fn partner(&self, l: usize) -> usize {
        let half = self.len() / 2;
        if l < half {
            l + half
        } else {
            l - half
        }
    }

    pub fn with_k_min(mut self, k_min: usize) -> Result<Self> {
        self.k_min = k_min;
        self.validate()?;
        Ok(self)
    }

    pub fn with_ts(mut self, ts: f64) -> Result<Self> {
        if !(ts > 0.0 && ts.is_finite()) {
            return Err(Error::InvalidParameter(format!("sampling period {ts}")));
        }
        self.ts = ts;
        Ok(self)
    }
}

/// Log-equidistant bins in `[1, ⌊K/2⌋ − 1]` plus their conjugate partners.
///
/// Rounded indices closer than `⌈K / (K − k_min)⌉` (the bin resolution of the
/// steady-state window) to their predecessor are pushed upward to that gap.
pub fn select_interpolation_points(k: usize, m: usize) -> Result<ExperimentPlan> {
    if k < 4 {
        return Err(Error::InvalidParameter(format!("K = {k} < 4")));
    }
    if m == 0 || m % 2 != 0 || m > k - 2 {
        return Err(Error::InvalidParameter(format!("m = {m} must be even in [2, K − 2]")));
    }
    let hi = k / 2 - 1;
    let half = m / 2;
    let k_min = k / 4;
    let gap = k.div_ceil(k - k_min);
    let ln_hi = (hi as f64).ln();
    let mut base: Vec<usize> = Vec::with_capacity(half);
    for l in 0..half {
        let frac = if half > 1 { l as f64 / (half - 1) as f64 } else { 0.0 };
        let mut v = (frac * ln_hi).exp().round() as usize;
        if let Some(&prev) = base.last() {
            v = v.max(prev + gap);
        }
        if v > hi {
            return Err(Error::InvalidParameter(format!(
                "{half} indices do not fit in [1, {hi}] at spacing {gap}"
            )));
        }
        base.push(v);
    }
    ExperimentPlan::from_base_indices(k, &base, k_min)
}

/// Multisine `u_k = (1/K) Σ_l (1+j) e^{2πj·i_l·k/K}`.
pub fn design_input(plan: &ExperimentPlan) -> Vec<C64> {
    let k = plan.k;
    let roots = unit_roots(k);
    let amp = C64::new(1.0, 1.0) / k as f64;
    (0..k)
        .map(|t| {
            plan.indices
                .iter()
                .map(|&i| roots[(i * t) % k])
                .sum::<C64>()
                * amp
        })
        .collect()
}

/// Multiplicative Gaussian noise `ỹ = y·(1 + σξ)`, one draw per entry.
pub fn add_noise(y: &CMat, sigma: f64, seed: u64) -> Result<CMat> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma = {sigma} must be ≥ 0")));
    }
    if sigma == 0.0 {
        return Ok(y.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = y.clone();
    for k in 0..out.ncols() {
        for i in 0..out.nrows() {
            let xi: f64 = StandardNormal.sample(&mut rng);
            out[(i, k)] *= 1.0 + sigma * xi;
        }
    }
    Ok(out)
}

/// One experiment: m×K input, p×K output, sampling period.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalRecord {
    pub ts: f64,
    pub u: CMat,
    pub y: CMat,
}

impl SignalRecord {
    pub fn new(ts: f64, u: CMat, y: CMat) -> Result<Self> {
        if !(ts > 0.0 && ts.is_finite()) {
            return Err(Error::InvalidParameter(format!("sampling period {ts}")));
        }
        if u.ncols() != y.ncols() || u.ncols() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "u has {} samples, y has {}",
                u.ncols(),
                y.ncols()
            )));
        }
        Ok(SignalRecord { ts, u, y })
    }

    pub fn siso(ts: f64, u: &[C64], y: &[C64]) -> Result<Self> {
        Self::new(
            ts,
            CMat::from_row_slice(1, u.len(), u),
            CMat::from_row_slice(1, y.len(), y),
        )
    }

    pub fn len(&self) -> usize {
        self.u.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.u.ncols() == 0
    }
}
