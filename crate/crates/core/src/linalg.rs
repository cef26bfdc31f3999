//! Dense complex linear-algebra helpers shared by the identification stages.
//!
//! Factorizations come from `nalgebra`; the QZ generalized eigensolver comes
//! from `faer`. What lives here is glue: condition estimation for LU factors,
//! a Bartels–Stewart Lyapunov solver on the complex Schur form, and
//! conversions between the two matrix types.

use faer::linalg::solvers::GeneralizedEigen;
use nalgebra::{DMatrix, DVector, Dyn, PermutationSequence, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn complexify(m: &DMatrix<f64>) -> CMat {
    m.map(|v| C64::new(v, 0.0))
}

pub fn real_part(m: &CMat) -> DMatrix<f64> {
    m.map(|v| v.re)
}

pub fn max_abs_imag(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.im.abs()))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.norm()))
}

/// Largest absolute column sum.
pub fn norm1(m: &CMat) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Spectral norm (largest singular value).
pub fn norm2(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut ev: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// LU factorization with partial pivoting plus a 1-norm reciprocal
/// condition estimate (Hager/Higham).
pub struct LuFactor {
    l: CMat,
    u: CMat,
    perm: PermutationSequence<Dyn>,
    rcond: f64,
}

impl LuFactor {
    pub fn new(m: &CMat) -> Self {
        assert!(m.is_square(), "LU of a non-square matrix");
        let n = m.nrows();
        let lu = m.clone().lu();
        let mut fac = LuFactor {
            l: lu.l(),
            u: lu.u(),
            perm: lu.p().clone(),
            rcond: 0.0,
        };
        if n == 0 {
            fac.rcond = 1.0;
            return fac;
        }
        if (0..n).any(|i| fac.u[(i, i)].norm() == 0.0) {
            return fac;
        }
        let anorm = norm1(m);
        let inv = fac.inv_norm1_estimate();
        fac.rcond = if anorm == 0.0 || !inv.is_finite() || inv == 0.0 {
            0.0
        } else {
            1.0 / (anorm * inv)
        };
        fac
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn solve(&self, b: &CMat) -> CMat {
        let mut x = b.clone();
        self.perm.permute_rows(&mut x);
        self.l.solve_lower_triangular_unchecked_mut(&mut x);
        self.u.solve_upper_triangular_unchecked_mut(&mut x);
        x
    }

    pub fn solve_vec(&self, b: &CVec) -> CVec {
        let mut x = b.clone();
        self.perm.permute_rows(&mut x);
        self.l.solve_lower_triangular_unchecked_mut(&mut x);
        self.u.solve_upper_triangular_unchecked_mut(&mut x);
        x
    }

    fn solve_adjoint_vec(&self, b: &CVec) -> CVec {
        let mut x = b.clone();
        self.u.ad_solve_upper_triangular_unchecked_mut(&mut x);
        self.l.ad_solve_lower_triangular_unchecked_mut(&mut x);
        self.perm.inv_permute_rows(&mut x);
        x
    }

    fn inv_norm1_estimate(&self) -> f64 {
        let n = self.dim();
        let l1 = |v: &CVec| v.iter().map(|c| c.norm()).sum::<f64>();
        let mut x = CVec::from_element(n, C64::new(1.0 / n as f64, 0.0));
        let mut est = 0.0_f64;
        for iter in 0..5 {
            let y = self.solve_vec(&x);
            let est_new = l1(&y);
            if iter > 0 && est_new <= est {
                break;
            }
            est = est_new;
            let sign = y.map(|v| if v.norm() > 0.0 { v / v.norm() } else { ONE });
            let z = self.solve_adjoint_vec(&sign);
            let (jmax, zmax) = z
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.norm()))
                .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            let ztx = z.dotc(&x).re;
            if iter > 0 && zmax <= ztx {
                break;
            }
            x = CVec::zeros(n);
            x[jmax] = ONE;
        }
        // Higham's alternating vector guards against the estimator stalling.
        let alt = CVec::from_fn(n, |i, _| {
            let sgn = if i % 2 == 0 { 1.0 } else { -1.0 };
            let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
            C64::new(sgn * (1.0 + i as f64 / denom), 0.0)
        });
        let alt_est = 2.0 * l1(&self.solve_vec(&alt)) / (3.0 * n as f64);
        est.max(alt_est)
    }
}

/// Eigenvalues via the complex Schur form.
pub fn eigenvalues(a: &CMat) -> Result<Vec<C64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::PencilFailure("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Solves `A X + X Aᴴ + Q = 0` by Bartels–Stewart on the complex Schur form of A.
pub fn solve_lyapunov(a: &CMat, q: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if !a.is_square() || q.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "Lyapunov: A is {:?}, Q is {:?}",
            a.shape(),
            q.shape()
        )));
    }
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::PencilFailure("Schur iteration did not converge".into()))?;
    let (u, t) = schur.unpack();
    let m = -(u.adjoint() * q * &u);
    let mut y = CMat::zeros(n, n);
    for i in (0..n).rev() {
        for j in (0..n).rev() {
            let mut s = m[(i, j)];
            for k in (i + 1)..n {
                s -= t[(i, k)] * y[(k, j)];
            }
            for k in (j + 1)..n {
                s -= y[(i, k)] * t[(j, k)].conj();
            }
            let denom = t[(i, i)] + t[(j, j)].conj();
            if denom.norm() == 0.0 {
                return Err(Error::Unstable { max_re: 0.0 });
            }
            y[(i, j)] = s / denom;
        }
    }
    Ok(&u * y * u.adjoint())
}

/// One generalized eigenpair `A v = (alpha / beta) B v`.
#[derive(Debug, Clone)]
pub struct GenEigenpair {
    pub alpha: C64,
    pub beta: C64,
    pub vector: CVec,
}

impl GenEigenpair {
    pub fn value(&self) -> Option<C64> {
        if self.beta.norm() == 0.0 {
            None
        } else {
            Some(self.alpha / self.beta)
        }
    }
}

/// QZ-based generalized eigendecomposition of the pencil (A, B).
pub fn generalized_eigen(a: &CMat, b: &CMat) -> Result<Vec<GenEigenpair>> {
    let n = a.nrows();
    if !a.is_square() || b.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "pencil: A is {:?}, B is {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if a.iter().chain(b.iter()).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::PencilFailure("non-finite pencil entries".into()));
    }
    let fa = faer::Mat::<faer::c64>::from_fn(n, n, |i, j| a[(i, j)]);
    let fb = faer::Mat::<faer::c64>::from_fn(n, n, |i, j| b[(i, j)]);
    let gevd = GeneralizedEigen::new(fa.as_ref(), fb.as_ref())
        .map_err(|e| Error::PencilFailure(format!("{e:?}")))?;
    let (sa, sb, u) = (gevd.S_a(), gevd.S_b(), gevd.U());
    Ok((0..n)
        .map(|k| GenEigenpair {
            alpha: sa[k],
            beta: sb[k],
            vector: CVec::from_fn(n, |i, _| u[(i, k)]),
        })
        .collect())
}
