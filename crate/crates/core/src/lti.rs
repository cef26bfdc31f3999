//! Descriptor systems, port-Hamiltonian models and the RLC ladder benchmark.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, complexify, max_abs_imag, real_part, CMat, LuFactor, C64};

/// Relative reciprocal-condition floor below which a pencil counts as singular.
pub const EPS_PENCIL: f64 = 1e-12;
/// Tolerance on skew/symmetry residuals of pH structure matrices.
pub const TOL_STRUCT: f64 = 1e-10;

/// PSD test used for Q and the dissipation block.
pub fn psd_within_tol(min_eig: f64, max_eig: f64) -> bool {
    min_eig >= -1e-8 * (1.0 + max_eig.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Clock {
    Continuous,
    Discrete { ts: f64 },
}

impl Clock {
    pub fn sampling_period(self) -> Option<f64> {
        match self {
            Clock::Continuous => None,
            Clock::Discrete { ts } => Some(ts),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discretization {
    /// `Ê = E, Â = E + Ts·A, B̂ = Ts·B`; the exact inverse of [`crate::loewner::to_continuous`].
    ImplicitEuler,
    /// Sample-and-hold via the matrix exponential of `E⁻¹A`.
    Zoh,
}

/// `E x' = A x + B u, y = C x + D u` (or the shifted-difference analogue).
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorSystem {
    pub e: CMat,
    pub a: CMat,
    pub b: CMat,
    pub c: CMat,
    pub d: CMat,
    pub clock: Clock,
}

impl DescriptorSystem {
    pub fn new(e: CMat, a: CMat, b: CMat, c: CMat, d: CMat, clock: Clock) -> Result<Self> {
        let n = a.nrows();
        let (m, p) = (b.ncols(), c.nrows());
        if a.shape() != (n, n)
            || e.shape() != (n, n)
            || b.nrows() != n
            || c.ncols() != n
            || d.shape() != (p, m)
        {
            return Err(Error::DimensionMismatch(format!(
                "E {:?}, A {:?}, B {:?}, C {:?}, D {:?}",
                e.shape(),
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        if let Clock::Discrete { ts } = clock {
            if !(ts > 0.0 && ts.is_finite()) {
                return Err(Error::InvalidParameter(format!("sampling period {ts}")));
            }
        }
        Ok(DescriptorSystem { e, a, b, c, d, clock })
    }

    pub fn from_real(
        e: &DMatrix<f64>,
        a: &DMatrix<f64>,
        b: &DMatrix<f64>,
        c: &DMatrix<f64>,
        d: &DMatrix<f64>,
        clock: Clock,
    ) -> Result<Self> {
        Self::new(
            complexify(e),
            complexify(a),
            complexify(b),
            complexify(c),
            complexify(d),
            clock,
        )
    }

    /// Standard state space (`E = I`).
    pub fn standard(a: CMat, b: CMat, c: CMat, d: CMat, clock: Clock) -> Result<Self> {
        let n = a.nrows();
        Self::new(CMat::identity(n, n), a, b, c, d, clock)
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }

    /// Largest imaginary entry over all five matrices.
    pub fn max_imag(&self) -> f64 {
        [&self.e, &self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|m| max_abs_imag(m))
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.max_imag() == 0.0
    }

    /// Drops imaginary parts.
    pub fn real_projection(&self) -> Self {
        let re = |m: &CMat| complexify(&real_part(m));
        DescriptorSystem {
            e: re(&self.e),
            a: re(&self.a),
            b: re(&self.b),
            c: re(&self.c),
            d: re(&self.d),
            clock: self.clock,
        }
    }

    fn pencil_at(&self, s: C64) -> Result<LuFactor> {
        let pencil = self.e.map(|v| v * s) - &self.a;
        let lu = LuFactor::new(&pencil);
        if lu.rcond() < EPS_PENCIL {
            return Err(Error::SingularPencil { s, rcond: lu.rcond() });
        }
        Ok(lu)
    }

    /// `C (sE − A)⁻¹ B + D`; for a discrete clock `s` is the z-plane point.
    pub fn eval_transfer(&self, s: C64) -> Result<CMat> {
        if self.order() == 0 {
            return Ok(self.d.clone());
        }
        let lu = self.pencil_at(s)?;
        Ok(&self.c * lu.solve(&self.b) + &self.d)
    }

    /// Popov function `H(−s̄)ᴴ + H(s)`.
    pub fn popov(&self, s: C64) -> Result<CMat> {
        let mirrored = self.eval_transfer(-s.conj())?;
        Ok(mirrored.adjoint() + self.eval_transfer(s)?)
    }

    fn solve_e(&self) -> Result<LuFactor> {
        let lu = LuFactor::new(&self.e);
        if lu.rcond() < EPS_PENCIL {
            return Err(Error::SingularE { rcond: lu.rcond() });
        }
        Ok(lu)
    }

    /// `(E⁻¹A, E⁻¹B)`.
    pub fn standard_form(&self) -> Result<(CMat, CMat)> {
        let lu = self.solve_e()?;
        Ok((lu.solve(&self.a), lu.solve(&self.b)))
    }

    /// Finite poles, i.e. eigenvalues of `E⁻¹A`.
    pub fn poles(&self) -> Result<Vec<C64>> {
        let (a, _) = self.standard_form()?;
        linalg::eigenvalues(&a)
    }

    pub fn discretize(&self, ts: f64, method: Discretization) -> Result<Self> {
        if self.clock != Clock::Continuous {
            return Err(Error::InvalidParameter("discretize needs a continuous system".into()));
        }
        if !(ts > 0.0 && ts.is_finite()) {
            return Err(Error::InvalidParameter(format!("sampling period {ts}")));
        }
        let clock = Clock::Discrete { ts };
        match method {
            Discretization::ImplicitEuler => Self::new(
                self.e.clone(),
                &self.e + self.a.scale(ts),
                self.b.scale(ts),
                self.c.clone(),
                self.d.clone(),
                clock,
            ),
            Discretization::Zoh => {
                let (ai, bi) = self.standard_form()?;
                let (n, m) = (self.order(), self.inputs());
                let (ad, bd) = if self.is_real() {
                    let mut blk = DMatrix::<f64>::zeros(n + m, n + m);
                    blk.view_mut((0, 0), (n, n)).copy_from(&real_part(&ai).scale(ts));
                    blk.view_mut((0, n), (n, m)).copy_from(&real_part(&bi).scale(ts));
                    let x = blk.exp();
                    (
                        complexify(&x.view((0, 0), (n, n)).into_owned()),
                        complexify(&x.view((0, n), (n, m)).into_owned()),
                    )
                } else {
                    let mut blk = CMat::zeros(n + m, n + m);
                    blk.view_mut((0, 0), (n, n)).copy_from(&ai.scale(ts));
                    blk.view_mut((0, n), (n, m)).copy_from(&bi.scale(ts));
                    let x = blk.exp();
                    (
                        x.view((0, 0), (n, n)).into_owned(),
                        x.view((0, n), (n, m)).into_owned(),
                    )
                };
                Self::new(
                    CMat::identity(n, n),
                    ad,
                    bd,
                    self.c.clone(),
                    self.d.clone(),
                    clock,
                )
            }
        }
    }

    /// Runs `E x_{k+1} = A x_k + B u_k, y_k = C x_k + D u_k` from `x_0 = 0`.
    ///
    /// `u` is m×K (one column per sample); returns p×K.
    pub fn simulate(&self, u: &CMat) -> Result<CMat> {
        if !matches!(self.clock, Clock::Discrete { .. }) {
            return Err(Error::InvalidParameter("simulate needs a discrete system".into()));
        }
        if u.nrows() != self.inputs() {
            return Err(Error::DimensionMismatch(format!(
                "input has {} channels, system has {}",
                u.nrows(),
                self.inputs()
            )));
        }
        let k_len = u.ncols();
        let p = self.outputs();
        if self.order() == 0 {
            return Ok(&self.d * u);
        }
        let (ai, bi) = self.standard_form()?;
        if self.is_real() {
            // Real and imaginary input parts propagate independently.
            let (a, b, c, d) = (
                real_part(&ai),
                real_part(&bi),
                real_part(&self.c),
                real_part(&self.d),
            );
            let mut y = CMat::zeros(p, k_len);
            for (part, is_im) in [(real_part(u), false), (u.map(|v| v.im), true)] {
                let yp = simulate_real(&a, &b, &c, &d, &part);
                for (dst, src) in y.iter_mut().zip(yp.iter()) {
                    if is_im {
                        dst.im += *src;
                    } else {
                        dst.re += *src;
                    }
                }
            }
            return Ok(y);
        }
        let n = self.order();
        let mut x = CMat::zeros(n, 1);
        let mut next = CMat::zeros(n, 1);
        let mut y = CMat::zeros(p, k_len);
        for k in 0..k_len {
            let uk = u.column(k);
            let yk = &self.c * &x + &self.d * uk;
            y.set_column(k, &yk.column(0));
            next.gemm(linalg::ONE, &ai, &x, linalg::ZERO);
            next.gemm(linalg::ONE, &bi, &uk, linalg::ONE);
            std::mem::swap(&mut x, &mut next);
        }
        Ok(y)
    }

    /// Parallel difference `self − other`, the usual error system.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.clock != other.clock {
            return Err(Error::DimensionMismatch("systems run on different clocks".into()));
        }
        if self.inputs() != other.inputs() || self.outputs() != other.outputs() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{} transfer functions",
                self.outputs(),
                self.inputs(),
                other.outputs(),
                other.inputs()
            )));
        }
        let (n1, n2) = (self.order(), other.order());
        let n = n1 + n2;
        let blkdiag = |x: &CMat, y: &CMat| {
            let mut out = CMat::zeros(n, n);
            out.view_mut((0, 0), (n1, n1)).copy_from(x);
            out.view_mut((n1, n1), (n2, n2)).copy_from(y);
            out
        };
        let mut b = CMat::zeros(n, self.inputs());
        b.view_mut((0, 0), (n1, self.inputs())).copy_from(&self.b);
        b.view_mut((n1, 0), (n2, self.inputs())).copy_from(&other.b);
        let mut c = CMat::zeros(self.outputs(), n);
        c.view_mut((0, 0), (self.outputs(), n1)).copy_from(&self.c);
        c.view_mut((0, n1), (self.outputs(), n2)).copy_from(&(-&other.c));
        Self::new(
            blkdiag(&self.e, &other.e),
            blkdiag(&self.a, &other.a),
            b,
            c,
            &self.d - &other.d,
            self.clock,
        )
    }
}

fn simulate_real(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
    u: &DMatrix<f64>,
) -> DMatrix<f64> {
    let n = a.nrows();
    let mut x = nalgebra::DVector::<f64>::zeros(n);
    let mut next = nalgebra::DVector::<f64>::zeros(n);
    let mut y = DMatrix::<f64>::zeros(c.nrows(), u.ncols());
    for k in 0..u.ncols() {
        let uk = u.column(k);
        let mut yk = y.column_mut(k);
        yk.gemv(1.0, c, &x, 0.0);
        yk.gemv(1.0, d, &uk, 1.0);
        next.gemv(1.0, a, &x, 0.0);
        next.gemv(1.0, b, &uk, 1.0);
        std::mem::swap(&mut x, &mut next);
    }
    y
}

/// `ẋ = (J − R) Q x + (F − P) u, y = (F + P)ᵀ Q x + (S + N) u`.
#[derive(Debug, Clone, PartialEq)]
pub struct PHForm {
    pub j: DMatrix<f64>,
    pub r: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub f: DMatrix<f64>,
    pub p: DMatrix<f64>,
    pub s: DMatrix<f64>,
    pub n: DMatrix<f64>,
}

/// Residuals behind the pH type invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureResiduals {
    pub j_skew: f64,
    pub s_sym: f64,
    pub n_skew: f64,
    pub q_sym: f64,
    pub q_min_eig: f64,
    pub q_max_eig: f64,
    pub block_min_eig: f64,
    pub block_max_eig: f64,
}

fn sym_eigs(m: &DMatrix<f64>) -> (f64, f64) {
    if m.is_empty() {
        return (0.0, 0.0);
    }
    let sym = (m + m.transpose()).scale(0.5);
    let ev = sym.symmetric_eigenvalues();
    (ev.min(), ev.max())
}

impl PHForm {
    pub fn order(&self) -> usize {
        self.j.nrows()
    }

    pub fn ports(&self) -> usize {
        self.f.ncols()
    }

    pub fn check_dimensions(&self) -> Result<()> {
        let (n, m) = (self.order(), self.ports());
        let ok = self.j.shape() == (n, n)
            && self.r.shape() == (n, n)
            && self.q.shape() == (n, n)
            && self.f.shape() == (n, m)
            && self.p.shape() == (n, m)
            && self.s.shape() == (m, m)
            && self.n.shape() == (m, m);
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "pH matrices J {:?} R {:?} Q {:?} F {:?} P {:?} S {:?} N {:?}",
                self.j.shape(),
                self.r.shape(),
                self.q.shape(),
                self.f.shape(),
                self.p.shape(),
                self.s.shape(),
                self.n.shape()
            )))
        }
    }

    /// The dissipation block `[[R, P], [Pᵀ, S]]`.
    pub fn dissipation_block(&self) -> DMatrix<f64> {
        let (n, m) = (self.order(), self.ports());
        let mut k = DMatrix::zeros(n + m, n + m);
        k.view_mut((0, 0), (n, n)).copy_from(&self.r);
        k.view_mut((0, n), (n, m)).copy_from(&self.p);
        k.view_mut((n, 0), (m, n)).copy_from(&self.p.transpose());
        k.view_mut((n, n), (m, m)).copy_from(&self.s);
        k
    }

    pub fn residuals(&self) -> StructureResiduals {
        let (q_min_eig, q_max_eig) = sym_eigs(&self.q);
        let block = self.dissipation_block();
        let (block_min_eig, block_max_eig) = sym_eigs(&block);
        StructureResiduals {
            j_skew: (&self.j + self.j.transpose()).norm(),
            s_sym: (&self.s - self.s.transpose()).norm(),
            n_skew: (&self.n + self.n.transpose()).norm(),
            q_sym: (&self.q - self.q.transpose()).norm(),
            q_min_eig,
            q_max_eig,
            block_min_eig,
            block_max_eig,
        }
    }

    /// Checks the pH type invariants at `TOL_STRUCT` and the PSD tolerance.
    pub fn validate(&self) -> Result<()> {
        self.check_dimensions()?;
        let res = self.residuals();
        for (name, v) in [
            ("J + Jᵀ", res.j_skew),
            ("S − Sᵀ", res.s_sym),
            ("N + Nᵀ", res.n_skew),
            ("Q − Qᵀ", res.q_sym),
        ] {
            if v > TOL_STRUCT {
                return Err(Error::InvalidParameter(format!("‖{name}‖ = {v:.3e}")));
            }
        }
        if !psd_within_tol(res.q_min_eig, res.q_max_eig) {
            return Err(Error::InvalidParameter(format!(
                "Q has eigenvalue {:.3e}",
                res.q_min_eig
            )));
        }
        if !psd_within_tol(res.block_min_eig, res.block_max_eig) {
            return Err(Error::StructureFailure { min_eig: res.block_min_eig });
        }
        Ok(())
    }

    pub fn to_descriptor(&self) -> Result<DescriptorSystem> {
        self.check_dimensions()?;
        let n = self.order();
        let a = (&self.j - &self.r) * &self.q;
        let b = &self.f - &self.p;
        let c = (&self.f + &self.p).transpose() * &self.q;
        let d = &self.s + &self.n;
        DescriptorSystem::from_real(
            &DMatrix::identity(n, n),
            &a,
            &b,
            &c,
            &d,
            Clock::Continuous,
        )
    }
}

/// SISO RLC ladder with `n_sections` capacitor/inductor pairs.
///
/// States alternate capacitor charge and inductor flux, so `Q = diag(1/c, 1/l, …)`
/// and `J` couples neighbours. Every element carries a loss `r`
/// (shunt conductance at capacitors, series resistance at inductors),
/// which keeps all modes damped.
pub fn build_rlc_ladder(n_sections: usize, r: f64, c: f64, l: f64) -> Result<PHForm> {
    if n_sections == 0 {
        return Err(Error::InvalidParameter("ladder needs at least one section".into()));
    }
    for (name, v) in [("r", r), ("c", c), ("l", l)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
        }
    }
    let n = 2 * n_sections;
    let mut j = DMatrix::zeros(n, n);
    for i in 0..n - 1 {
        j[(i, i + 1)] = -1.0;
        j[(i + 1, i)] = 1.0;
    }
    let q = DMatrix::from_fn(n, n, |i, k| {
        match (i == k, i % 2) {
            (false, _) => 0.0,
            (true, 0) => 1.0 / c,
            (true, _) => 1.0 / l,
        }
    });
    let mut f = DMatrix::zeros(n, 1);
    f[(0, 0)] = 1.0;
    Ok(PHForm {
        j,
        r: DMatrix::identity(n, n).scale(r),
        q,
        f,
        p: DMatrix::zeros(n, 1),
        s: DMatrix::zeros(1, 1),
        n: DMatrix::zeros(1, 1),
    })
}

/// Logarithmically spaced grid of `n` points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

/// Smallest eigenvalue of the Popov function along `iω` over `grid`.
pub fn popov_min_eig(sys: &DescriptorSystem, grid: &[f64]) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for &w in grid {
        let phi = sys.popov(C64::new(0.0, w))?;
        worst = worst.min(linalg::min_hermitian_eigenvalue(&phi));
    }
    Ok(worst)
}
