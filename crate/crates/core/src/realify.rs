//! Conjugate pairings of coordinates and the block-unitary map to real coordinates.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_imag, CMat, C64};
use crate::lti::DescriptorSystem;

/// Residual imaginary part tolerated after the transform, relative to matrix scale.
pub const REALIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Real(usize),
    /// `(i, j)` with the point at `j` the conjugate of the point at `i`.
    Pair(usize, usize),
}

/// How the coordinates of a complex realization group into conjugate pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatePairing {
    len: usize,
    blocks: Vec<Block>,
}

impl ConjugatePairing {
    /// Pairs each point with the nearest unused conjugate; points on the real axis stay alone.
    pub fn from_points(points: &[C64]) -> Result<Self> {
        let n = points.len();
        let mut used = vec![false; n];
        let mut blocks = Vec::new();
        for i in 0..n {
            if used[i] {
                continue;
            }
            used[i] = true;
            let p = points[i];
            let tol = 1e-8 * (1.0 + p.norm());
            if p.im.abs() <= tol {
                blocks.push(Block::Real(i));
                continue;
            }
            let partner = (0..n)
                .filter(|&j| !used[j])
                .map(|j| (j, (points[j] - p.conj()).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match partner {
                Some((j, dist)) if dist <= 1e-6 * (1.0 + p.norm()) => {
                    used[j] = true;
                    blocks.push(Block::Pair(i, j));
                }
                _ => {
                    return Err(Error::ConjugacyViolation(format!(
                        "point {p} has no conjugate partner"
                    )))
                }
            }
        }
        Ok(ConjugatePairing { len: n, blocks })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Unitary `T` with rows `(e_i + e_j)/√2` and `j(e_i − e_j)/√2` for each pair.
    ///
    /// For a vector with `x_j = conj x_i`, `T x` holds `√2·Re x_i` and `−√2·Im x_i`.
    pub fn unitary(&self) -> CMat {
        let mut t = CMat::zeros(self.len, self.len);
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let jh = C64::new(0.0, FRAC_1_SQRT_2);
        for b in &self.blocks {
            match *b {
                Block::Real(i) => t[(i, i)] = C64::new(1.0, 0.0),
                Block::Pair(i, j) => {
                    t[(i, i)] = h;
                    t[(i, j)] = h;
                    t[(j, i)] = jh;
                    t[(j, j)] = -jh;
                }
            }
        }
        t
    }
}

fn check_real(name: &str, m: &CMat) -> Result<()> {
    let imag = max_abs_imag(m);
    if imag > REALIFY_TOL * max_abs(m).max(1.0) {
        return Err(Error::ConjugacyViolation(format!(
            "{name} keeps imaginary part {imag:.3e} after realification"
        )));
    }
    Ok(())
}

/// Applies `E ← T_r E T_cᴴ, A ← T_r A T_cᴴ, B ← T_r B, C ← C T_cᴴ` and drops the
/// (checked) imaginary residue. The transfer function is unchanged.
pub fn realify(
    sys: &DescriptorSystem,
    rows: &ConjugatePairing,
    cols: &ConjugatePairing,
) -> Result<DescriptorSystem> {
    let n = sys.order();
    if rows.len() != n || cols.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "pairings of size {}/{} for an order-{n} system",
            rows.len(),
            cols.len()
        )));
    }
    let tr = rows.unitary();
    let tc = cols.unitary().adjoint();
    let out = DescriptorSystem {
        e: &tr * &sys.e * &tc,
        a: &tr * &sys.a * &tc,
        b: &tr * &sys.b,
        c: &sys.c * &tc,
        d: sys.d.clone(),
        clock: sys.clock,
    };
    for (name, m) in [("E", &out.e), ("A", &out.a), ("B", &out.b), ("C", &out.c), ("D", &out.d)] {
        check_real(name, m)?;
    }
    Ok(out.real_projection())
}
