//! Error metrics and comparison data: H2, sampled H∞, Bode and time traces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, norm2, CMat, C64};
use crate::lti::{log_grid, Clock, DescriptorSystem, Discretization};

/// Default H∞ / Bode grid: 400 log points on `[1e−3, 1e3]` rad/s.
pub fn default_metric_grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 400)
}

fn require_stable(sys: &DescriptorSystem) -> Result<()> {
    if sys.clock != Clock::Continuous {
        return Err(Error::InvalidParameter("norms need a continuous system".into()));
    }
    let max_re = sys
        .poles()?
        .iter()
        .map(|p| p.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_re >= -1e-12 {
        return Err(Error::Unstable { max_re });
    }
    Ok(())
}

/// `sqrt(trace(C P Cᴴ))` with `P` the controllability Gramian of `(E⁻¹A, E⁻¹B)`.
pub fn h2_norm(sys: &DescriptorSystem) -> Result<f64> {
    let d_norm = norm2(&sys.d);
    if d_norm > 1e-12 {
        return Err(Error::NonzeroD { norm: d_norm });
    }
    if sys.order() == 0 {
        return Ok(0.0);
    }
    require_stable(sys)?;
    let (a, b) = sys.standard_form()?;
    let gram = linalg::solve_lyapunov(&a, &(&b * b.adjoint()))?;
    let tr = (&sys.c * gram * sys.c.adjoint()).trace().re;
    Ok(tr.max(0.0).sqrt())
}

fn gain(sys: &DescriptorSystem, w: f64) -> Result<f64> {
    Ok(norm2(&sys.eval_transfer(C64::new(0.0, w))?))
}

/// Largest singular value of `H(iω)` over `grid`, refined by golden-section search
/// around the best grid point. A lower bound on the true H∞ norm.
pub fn hinf_norm(sys: &DescriptorSystem, grid: &[f64]) -> Result<f64> {
    if sys.order() > 0 {
        require_stable(sys)?;
    }
    if grid.is_empty() {
        return Ok(norm2(&sys.d));
    }
    let gains = grid.iter().map(|&w| gain(sys, w)).collect::<Result<Vec<_>>>()?;
    let (k, &best) = gains
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let lo = if k > 0 { grid[k - 1] } else { grid[k] };
    let hi = if k + 1 < grid.len() { grid[k + 1] } else { grid[k] };
    if lo <= 0.0 || hi <= lo {
        return Ok(best);
    }
    let f = |x: f64| gain(sys, x.exp()).unwrap_or(0.0);
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut top = best.max(f1).max(f2);
    for _ in 0..80 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
            top = top.max(f1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
            top = top.max(f2);
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    Ok(top)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub h2_abs: Option<f64>,
    pub h2_rel: Option<f64>,
    pub hinf_abs: f64,
    pub hinf_rel: f64,
    pub order: usize,
    pub grid: Vec<f64>,
    /// Why the H2 fields are missing, when they are.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h2_note: Option<String>,
}

/// Compares `candidate` against `reference` through their difference system.
///
/// `d_reg` is subtracted from the candidate's feedthrough before the H2 error,
/// removing the regularizing term the identification adds.
pub fn error_report(
    reference: &DescriptorSystem,
    candidate: &DescriptorSystem,
    grid: &[f64],
    d_reg: f64,
) -> Result<ErrorReport> {
    let err = reference.difference(candidate)?;
    let hinf_abs = hinf_norm(&err, grid)?;
    let hinf_ref = hinf_norm(reference, grid)?;
    let mut stripped = candidate.clone();
    for i in 0..stripped.outputs().min(stripped.inputs()) {
        stripped.d[(i, i)] -= C64::new(d_reg, 0.0);
    }
    let h2 = reference
        .difference(&stripped)
        .and_then(|e| h2_norm(&e))
        .and_then(|abs| Ok((abs, h2_norm(reference)?)));
    let (h2_abs, h2_rel, h2_note) = match h2 {
        Ok((abs, rel_base)) => (Some(abs), Some(rel(abs, rel_base)), None),
        Err(e @ Error::NonzeroD { .. }) => (None, None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(ErrorReport {
        h2_abs,
        h2_rel,
        hinf_abs,
        hinf_rel: rel(hinf_abs, hinf_ref),
        order: candidate.order(),
        grid: grid.to_vec(),
        h2_note,
    })
}

fn rel(abs: f64, base: f64) -> f64 {
    if abs == 0.0 {
        0.0
    } else {
        abs / base
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BodeRow {
    pub omega: f64,
    pub magnitude_db: f64,
    pub phase_deg: f64,
}

/// Magnitude (dB) and unwrapped phase (degrees) of the first transfer entry.
///
/// Points where evaluation fails yield NaN rows.
pub fn bode_data(sys: &DescriptorSystem, grid: &[f64]) -> Vec<BodeRow> {
    let mut rows = Vec::with_capacity(grid.len());
    let mut prev: Option<f64> = None;
    for &w in grid {
        let row = match sys.eval_transfer(C64::new(0.0, w)) {
            Ok(h) => {
                let h = h[(0, 0)];
                let mut phase = h.arg().to_degrees();
                if let Some(p) = prev {
                    phase += 360.0 * ((p - phase) / 360.0).round();
                }
                prev = Some(phase);
                BodeRow { omega: w, magnitude_db: 20.0 * h.norm().log10(), phase_deg: phase }
            }
            Err(_) => BodeRow { omega: w, magnitude_db: f64::NAN, phase_deg: f64::NAN },
        };
        rows.push(row);
    }
    rows
}

/// `amplitude · sin(frequency · t) · e^{−decay · t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineTerm {
    pub amplitude: f64,
    pub frequency: f64,
    pub decay: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputKind {
    /// `sin(t) + sin(2t) + sin(t/2)`.
    RlcMix,
    Custom(Vec<SineTerm>),
}

impl InputKind {
    pub fn terms(&self) -> Vec<SineTerm> {
        match self {
            InputKind::RlcMix => [1.0, 2.0, 0.5]
                .iter()
                .map(|&frequency| SineTerm { amplitude: 1.0, frequency, decay: 0.0 })
                .collect(),
            InputKind::Custom(t) => t.clone(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms()
            .iter()
            .map(|s| s.amplitude * (s.frequency * t).sin() * (-s.decay * t).exp())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeRow {
    pub t: f64,
    pub y_ref: f64,
    pub y_cand: f64,
}

/// ZOH simulation of both systems on the sampled analytic input over `[0, t_end]`.
pub fn time_compare(
    reference: &DescriptorSystem,
    candidate: &DescriptorSystem,
    input: &InputKind,
    t_end: f64,
    ts: f64,
) -> Result<Vec<TimeRow>> {
    if !(ts > 0.0) {
        return Err(Error::InvalidParameter(format!("sampling period {ts}")));
    }
    if !(t_end > 0.0) {
        return Ok(Vec::new());
    }
    let steps = (t_end / ts + 1e-9).floor() as usize + 1;
    let u = CMat::from_fn(1, steps, |_, k| C64::new(input.eval(k as f64 * ts), 0.0));
    let y_ref = reference.discretize(ts, Discretization::Zoh)?.simulate(&u)?;
    let y_cand = candidate.discretize(ts, Discretization::Zoh)?.simulate(&u)?;
    Ok((0..steps)
        .map(|k| TimeRow { t: k as f64 * ts, y_ref: y_ref[(0, k)].re, y_cand: y_cand[(0, k)].re })
        .collect())
}
