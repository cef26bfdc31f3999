#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use phident::linalg::CMat;
use phident::{Clock, DescriptorSystem, PHForm};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| gauss(rng))
}

// 15-point Kronrod rule with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gs = WG[3] * fc;
    for i in 0..7 {
        let (f1, f2) = (f(c - h * XGK[i]), f(c + h * XGK[i]));
        kron += WGK[i] * (f1 + f2);
        if i % 2 == 1 {
            gs += WG[i / 2] * (f1 + f2);
        }
    }
    (kron * h, ((kron - gs) * h).abs())
}

/// Adaptive Gauss–Kronrod quadrature of `f` over `[a, b]` to `max(rel_tol·|I|, abs_tol)`.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth - 1) + rec(f, m, b, 0.5 * tol, depth - 1)
    }
    let coarse = gk15(f, a, b).0.abs();
    rec(f, a, b, (rel_tol * coarse).max(abs_tol).max(1e-300), 30)
}

/// `C(sE − A)⁻¹B + D` by a direct dense solve.
pub fn transfer(sys: &DescriptorSystem, s: C64) -> CMat {
    let pencil = sys.e.map(|v| v * s) - &sys.a;
    let x = pencil.lu().solve(&sys.b).expect("regular pencil");
    &sys.c * x + &sys.d
}

/// H2 norm from `(1/2π)∫ ‖H(iω)‖²_F dω` with `ω = tan θ`.
pub fn h2_quadrature(sys: &DescriptorSystem) -> f64 {
    h2_quadrature_floor(sys, 0.0)
}

/// As [`h2_quadrature`], accepting an absolute error `floor` on the squared norm.
/// Needed when the integrand sits at the rounding level, as for an error system.
pub fn h2_quadrature_floor(sys: &DescriptorSystem, floor: f64) -> f64 {
    let f = |th: f64| {
        let w = th.tan();
        let sec2 = 1.0 + w * w;
        transfer(sys, C64::new(0.0, w)).norm_squared() * sec2
    };
    let pieces = 64;
    let h = PI / pieces as f64;
    let total: f64 = (0..pieces)
        .map(|k| {
            let a = -FRAC_PI_2 + k as f64 * h;
            integrate(&f, a, a + h, 1e-11, 2.0 * PI * floor / pieces as f64)
        })
        .sum();
    (total / (2.0 * PI)).sqrt()
}

/// Characteristic polynomial (ascending coefficients) and the matrix
/// coefficients `M_k` of `adj(sI − A) = Σ M_k s^{k−1}`.
pub fn faddeev_leverrier(a: &DMatrix<f64>) -> (Vec<f64>, Vec<DMatrix<f64>>) {
    let n = a.nrows();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut mats = Vec::with_capacity(n);
    let mut m = DMatrix::zeros(n, n);
    for k in 1..=n {
        m = a * &m + DMatrix::identity(n, n) * c[n - k + 1];
        c[n - k] = -(a * &m).trace() / k as f64;
        mats.push(m.clone());
    }
    // built highest power first; reversed so that index j multiplies s^j
    mats.reverse();
    (c, mats)
}

/// Numerator and denominator of a real SISO `C(sI − A)⁻¹B + D`.
pub fn siso_rational(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>, d: f64) -> (Vec<f64>, Vec<f64>) {
    let (den, adj) = faddeev_leverrier(a);
    let mut num: Vec<f64> = den.iter().map(|v| v * d).collect();
    for (k, m) in adj.iter().enumerate() {
        num[k] += (c * m * b)[(0, 0)];
    }
    (num, den)
}

pub fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

pub fn poly_reflect(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().map(|(k, v)| if k % 2 == 1 { -v } else { *v }).collect()
}

/// `n(s)d(−s) + n(−s)d(s)`, whose roots are the spectral zeros.
pub fn popov_numerator(num: &[f64], den: &[f64]) -> Vec<f64> {
    let a = poly_mul(num, &poly_reflect(den));
    let b = poly_mul(&poly_reflect(num), den);
    a.iter().zip(&b).map(|(x, y)| x + y).collect()
}

fn horner(p: &[C64], z: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// All roots by Durand–Kerner iteration followed by Newton polishing.
pub fn poly_roots(p: &[f64]) -> Vec<C64> {
    let mut p: Vec<f64> = p.to_vec();
    let scale = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    while p.len() > 1 && p.last().unwrap().abs() <= 1e-14 * scale {
        p.pop();
    }
    let deg = p.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = p[deg];
    let monic: Vec<C64> = p.iter().map(|v| C64::new(v / lead, 0.0)).collect();
    let bound = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..deg).map(|k| seed.powu(k as u32) * bound / seed.norm().powi(k as i32)).collect();
    for _ in 0..5000 {
        let mut change = 0.0f64;
        for i in 0..deg {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(&monic, z[i]) / den;
            z[i] -= step;
            change = change.max(step.norm() / (1.0 + z[i].norm()));
        }
        if change < 1e-15 {
            break;
        }
    }
    let deriv: Vec<C64> = (1..=deg).map(|k| monic[k] * k as f64).collect();
    for r in &mut z {
        for _ in 0..3 {
            let d = horner(&deriv, *r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= horner(&monic, *r) / d;
        }
    }
    z
}

/// Random passive SISO pH model of order `n` with `S ≻ 0`.
pub fn random_passive(rng: &mut ChaCha8Rng, n: usize) -> PHForm {
    let g = random_matrix(rng, n, n);
    let h = random_matrix(rng, n, n);
    let v = random_matrix(rng, n + 1, n + 1);
    let block = &v * v.transpose() + DMatrix::identity(n + 1, n + 1) * 0.1;
    PHForm {
        j: &g - g.transpose(),
        r: block.view((0, 0), (n, n)).into_owned(),
        q: &h * h.transpose() + DMatrix::identity(n, n) * 0.5,
        f: random_matrix(rng, n, 1),
        p: block.view((0, n), (n, 1)).into_owned(),
        s: block.view((n, n), (1, 1)).into_owned(),
        n: DMatrix::zeros(1, 1),
    }
}

/// `(J − R)Q, F − P, (F + P)ᵀQ, S + N`.
pub fn ph_standard(ph: &PHForm) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    (
        (&ph.j - &ph.r) * &ph.q,
        &ph.f - &ph.p,
        (&ph.f + &ph.p).transpose() * &ph.q,
        &ph.s + &ph.n,
    )
}

/// Random strictly proper continuous system with a nontrivial SPD `E`.
pub fn random_stable(rng: &mut ChaCha8Rng, n: usize) -> DescriptorSystem {
    let g = random_matrix(rng, n, n);
    let k = random_matrix(rng, n, n);
    let h = random_matrix(rng, n, n) * 0.3;
    let e = &h * h.transpose() + DMatrix::identity(n, n);
    let a = -(&g * g.transpose() * 0.5 + DMatrix::identity(n, n) * 0.2) + (&k - k.transpose());
    DescriptorSystem::from_real(
        &e,
        &a,
        &random_matrix(rng, n, 1),
        &random_matrix(rng, 1, n),
        &DMatrix::zeros(1, 1),
        Clock::Continuous,
    )
    .unwrap()
}

/// Real discrete plant with spectral radius at most `rho`: rotation blocks
/// (and one real pole for odd `n`) under a well-conditioned similarity.
pub fn random_schur_stable(rng: &mut ChaCha8Rng, n: usize, rho: f64, ts: f64) -> DescriptorSystem {
    let mut core = DMatrix::zeros(n, n);
    let mut i = 0;
    while i + 1 < n {
        let r = rho * rng.random_range(0.2..1.0f64);
        let th: f64 = rng.random_range(0.05..3.0);
        core[(i, i)] = r * th.cos();
        core[(i, i + 1)] = -r * th.sin();
        core[(i + 1, i)] = r * th.sin();
        core[(i + 1, i + 1)] = r * th.cos();
        i += 2;
    }
    if i < n {
        core[(i, i)] = rho * rng.random_range(-1.0..1.0f64);
    }
    let t = DMatrix::identity(n, n) + random_matrix(rng, n, n) * 0.3;
    let a = &t * core * t.clone().try_inverse().expect("invertible similarity");
    DescriptorSystem::from_real(
        &DMatrix::identity(n, n),
        &a,
        &random_matrix(rng, n, 1),
        &random_matrix(rng, 1, n),
        &DMatrix::from_element(1, 1, gauss(rng)),
        Clock::Discrete { ts },
    )
    .unwrap()
}

/// Smallest eigenvalue of the Popov function on `iω` over a grid, from a direct solve.
pub fn popov_min_on_grid(sys: &DescriptorSystem, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&w| {
            let h = transfer(sys, C64::new(0.0, w));
            let phi = h.adjoint() + &h;
            phi.symmetric_eigenvalues().iter().fold(f64::INFINITY, |m, &v| m.min(v))
        })
        .fold(f64::INFINITY, f64::min)
}

/// `2n` conjugate-closed points spread evenly on the unit circle, ordered so that
/// alternating conjugate blocks split them into equal halves (`±1` join for odd `n`).
pub fn uniform_circle_points(n: usize) -> Vec<C64> {
    let pairs = n - n % 2;
    let mut blocks: Vec<Vec<C64>> = (0..pairs)
        .map(|k| {
            let z = C64::from_polar(1.0, PI * (k as f64 + 0.5) / pairs as f64);
            vec![z, z.conj()]
        })
        .collect();
    if n % 2 == 1 {
        blocks.insert(0, vec![C64::new(1.0, 0.0)]);
        blocks.insert(1, vec![C64::new(-1.0, 0.0)]);
    }
    blocks.concat()
}
