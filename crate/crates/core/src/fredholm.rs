//! Fredholm determinants of kernels on index sets `{n, n+1, ...}`: the
//! discrete Bessel kernel, the double-contour kernel of a general potential
//! and the ratio kernel relating discrete and continuous Toeplitz
//! determinants.

use crate::error::{Error, Result};
use crate::linalg::{log_det_complex, log_det_real};
use crate::potential::{weight_expanded, CouplingVector, WeightFunction};
use crate::special::bessel_j_table;
use crate::toeplitz::{szego_family, DiscreteDomain, MomentTable, SzegoPolynomial};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

const MAX_BLOCK: usize = 4096;

/// A kernel `K(k, l)` on `{start, start + 1, ...}`.
pub trait DiscreteKernel: Sync {
    fn start(&self) -> i64;
    /// `K(start + i, start + j)` for `i, j < size`.
    fn block(&self, size: usize) -> Result<DMatrix<f64>>;
}

/// A kernel given entrywise by a closure.
pub struct FnKernel<F: Fn(i64, i64) -> f64 + Sync> {
    pub start: i64,
    pub f: F,
}

impl<F: Fn(i64, i64) -> f64 + Sync> DiscreteKernel for FnKernel<F> {
    fn start(&self) -> i64 {
        self.start
    }
    fn block(&self, size: usize) -> Result<DMatrix<f64>> {
        let s = self.start;
        Ok(DMatrix::from_fn(size, size, |i, j| (self.f)(s + i as i64, s + j as i64)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FredholmDet {
    pub value: f64,
    pub ln_abs: f64,
    /// Size of the truncated index block used.
    pub size: usize,
}

/// `det(I - K)` on the index block `[n, n + M)`, doubling `M` from 16 until
/// the determinant changes by less than `1e-10` and `|K(M, M)| < 1e-16`.
pub fn fredholm_det_indexed(k: &dyn DiscreteKernel) -> Result<FredholmDet> {
    let eval = |m: usize| -> Result<(f64, f64, f64)> {
        let kb = k.block(m)?;
        let tail = kb[(m - 1, m - 1)].abs();
        let (ln, sign) = log_det_real(DMatrix::identity(m, m) - kb);
        Ok((sign * ln.exp(), ln, tail))
    };
    let mut m = 16;
    let (mut prev, _, _) = eval(m)?;
    while m < MAX_BLOCK {
        m *= 2;
        let (cur, ln, tail) = eval(m)?;
        if (cur - prev).abs() < 1e-10 && tail < 1e-16 {
            return Ok(FredholmDet { value: cur, ln_abs: ln, size: m });
        }
        prev = cur;
    }
    Err(Error::NonConvergence { what: "fredholm_det_indexed", detail: format!("block size {MAX_BLOCK}") })
}

/// Discrete Bessel kernel `sum_{n>=1} J_{k+n}(2t) J_{l+n}(2t)` on `{start, ...}`.
pub struct BesselKernel {
    pub t: f64,
    pub start: i64,
}

fn bessel_terms(t: f64, kmax: usize) -> Vec<f64> {
    // Orders beyond 2t + 60 contribute below 1e-40.
    let top = kmax + (2.0 * t) as usize + 80;
    bessel_j_table(top, 2.0 * t)
}

fn bessel_series_from_table(j: &[f64], k: usize, l: usize) -> f64 {
    let mut s = 0.0;
    let mut n = 1;
    while k.max(l) + n < j.len() {
        let term = j[k + n] * j[l + n];
        s += term;
        if term.abs() < 1e-18 * s.abs().max(1e-300) && k.max(l) + n > 2 * j.len() / 3 {
            break;
        }
        n += 1;
    }
    s
}

impl DiscreteKernel for BesselKernel {
    fn start(&self) -> i64 {
        self.start
    }
    fn block(&self, size: usize) -> Result<DMatrix<f64>> {
        if self.start < 0 {
            return Err(Error::invalid("Bessel kernel needs nonnegative indices"));
        }
        let s = self.start as usize;
        let j = bessel_terms(self.t, s + size);
        // Suffix recursion: K(k, l) = K(k+1, l+1) + J_{k+1} J_{l+1}.
        let mut m = DMatrix::zeros(size, size);
        for i in (0..size).rev() {
            for c in (0..size).rev() {
                let below = if i + 1 < size && c + 1 < size {
                    m[(i + 1, c + 1)]
                } else {
                    bessel_series_from_table(&j, s + i + 1, s + c + 1)
                };
                m[(i, c)] = below + j[s + i + 1] * j[s + c + 1];
            }
        }
        Ok(m)
    }
}

/// `G_Be(k, l) = sum_{n>=1} J_{k+n}(2t) J_{l+n}(2t)`.
pub fn bessel_kernel(k: usize, l: usize, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let j = bessel_terms(t, k.max(l));
    bessel_series_from_table(&j, k, l)
}

/// Ratio form `t (J_k J_{l+1} - J_{k+1} J_l) / (k - l)` of the same kernel,
/// valid off the diagonal.
pub fn bessel_kernel_ratio(k: usize, l: usize, t: f64) -> f64 {
    assert!(k != l, "ratio form is undefined on the diagonal");
    let j = bessel_j_table(k.max(l) + 2, 2.0 * t);
    t * (j[k] * j[l + 1] - j[k + 1] * j[l]) / (k as f64 - l as f64)
}

/// Double-contour kernel
/// `G(k, l) = (2 pi i)^{-2} oint oint z^{-k-1} w^l e^{V(z) - V(w)} / (z - w) dz dw`
/// with `|w| = rho < 1 < |z| = 1/rho` and
/// `V(z) = sum_m (b_m z^{-m} - a_m z^m)` built from the log-coefficients of
/// the weight (`t Delta_m (z^{-m} - z^m)` for symmetric couplings).
pub struct ContourKernel {
    neg: Vec<f64>,
    pos: Vec<f64>,
    rho: f64,
    pub start: i64,
}

impl ContourKernel {
    pub fn new(f: &WeightFunction, rho: f64, start: i64) -> Result<Self> {
        if !(0.3..=0.9).contains(&rho) {
            return Err(Error::invalid("contour radius rho must lie in [0.3, 0.9]"));
        }
        if start < 0 {
            return Err(Error::invalid("contour kernel needs nonnegative indices"));
        }
        Ok(ContourKernel { neg: f.log_negative().to_vec(), pos: f.log_positive().to_vec(), rho, start })
    }

    fn v(&self, z: Complex64) -> Complex64 {
        let zi = z.inv();
        let mut s = Complex64::new(0.0, 0.0);
        let (mut zp, mut zq) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        for m in 0..self.pos.len().max(self.neg.len()) {
            zp *= z;
            zq *= zi;
            s += zq * self.neg.get(m).copied().unwrap_or(0.0) - zp * self.pos.get(m).copied().unwrap_or(0.0);
        }
        s
    }

    /// Complex block at `m` nodes per circle.
    fn block_at(&self, size: usize, m: usize) -> DMatrix<Complex64> {
        let s = self.start;
        let zs: Vec<Complex64> = (0..m).map(|a| Complex64::from_polar(1.0 / self.rho, 2.0 * PI * a as f64 / m as f64)).collect();
        let ws: Vec<Complex64> = (0..m).map(|b| Complex64::from_polar(self.rho, 2.0 * PI * (b as f64 + 0.5) / m as f64)).collect();
        let ez: Vec<Complex64> = zs.iter().map(|&z| self.v(z).exp()).collect();
        let ew: Vec<Complex64> = ws.iter().map(|&w| (-self.v(w)).exp()).collect();
        let norm = (m * m) as f64;
        let c = DMatrix::from_fn(m, m, |a, b| ez[a] * ew[b] / (zs[a] - ws[b]) / norm);
        let zmat = DMatrix::from_fn(size, m, |k, a| zs[a].powi(-(s as i32 + k as i32)));
        let wmat = DMatrix::from_fn(m, size, |b, l| ws[b].powi(s as i32 + l as i32 + 1));
        zmat * c * wmat
    }

    /// Block with node doubling to `1e-9`; returns the real part and the
    /// largest imaginary residual.
    pub fn block_checked(&self, size: usize) -> Result<(DMatrix<f64>, f64)> {
        let mut m = 64;
        let mut prev = self.block_at(size, m);
        while m < 4096 {
            m *= 2;
            let cur = self.block_at(size, m);
            let diff = (&cur - &prev).iter().map(|d| d.norm()).fold(0.0, f64::max);
            if diff < 1e-9 {
                let im = cur.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
                return Ok((cur.map(|c| c.re), im));
            }
            prev = cur;
        }
        Err(Error::NonConvergence { what: "general_kernel_G", detail: "4096 nodes per circle".into() })
    }
}

impl DiscreteKernel for ContourKernel {
    fn start(&self) -> i64 {
        self.start
    }
    fn block(&self, size: usize) -> Result<DMatrix<f64>> {
        let (b, im) = self.block_checked(size)?;
        if im > 1e-8 {
            return Err(Error::ImaginaryResidual { what: "general_kernel_G", residual: im });
        }
        Ok(b)
    }
}

/// Single entry `G(k, l)` of the double-contour kernel for couplings `cv`.
pub fn general_kernel_g(k: usize, l: usize, cv: &CouplingVector, t: f64, rho: f64) -> Result<f64> {
    let g = ContourKernel::new(&weight_expanded(cv, t), rho, 0)?;
    let n = k.max(l) + 1;
    Ok(g.block(n)?[(k, l)])
}

/// Kernel of `D^d_{N_f}(f) / D_{N_f}(f) = det(I - K)` on the two circles
/// `|z| = 1 -+ eps`:
/// `K(z, w) = -CD(z, w) f(w) v(w)`, `CD(z, w) = sum_{k<N_f} phi_k(w) phi_k(1/z)`
/// with orthonormal Szego polynomials `phi_k`, and `v(w) = s/(w^N - s)` on
/// the outer circle, `w^N/(s - w^N)` on the inner one.
pub struct RatioKernel {
    f: WeightFunction,
    n: usize,
    d: DiscreteDomain,
    pub eps: f64,
    polys: Vec<SzegoPolynomial>,
}

/// Default contour offset; see [`RatioKernel`].
pub const RATIO_DEFAULT_EPS: f64 = 0.25;

impl RatioKernel {
    pub fn new(f: &WeightFunction, n: usize, d: &DiscreteDomain, eps: f64) -> Result<Self> {
        if !f.is_real_on_circle() {
            return Err(Error::invalid("ratio kernel needs a weight that is real on the circle"));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid("eps must lie in (0, 1)"));
        }
        let table = MomentTable::continuous(f, n + 1)?;
        let polys = szego_family(&table, n)?;
        for p in &polys {
            if p.coeffs.iter().any(|c| c.im.abs() > 1e-10 * c.norm().max(1.0)) {
                return Err(Error::invalid("ratio kernel needs real Szego coefficients"));
            }
        }
        Ok(RatioKernel { f: f.clone(), n, d: *d, eps, polys })
    }

    fn phi(&self, k: usize, z: Complex64) -> Complex64 {
        self.polys[k].eval(z) * self.polys[k].orthonormal_scale()
    }

    fn phi_star(&self, k: usize, z: Complex64) -> Complex64 {
        self.polys[k].eval_reversed(z) * self.polys[k].orthonormal_scale()
    }

    /// Christoffel-Darboux sum `sum_{k<N_f} phi_k(w) phi_k(1/z)`.
    pub fn christoffel_darboux(&self, z: Complex64, w: Complex64) -> Complex64 {
        let zi = z.inv();
        let den = Complex64::new(1.0, 0.0) - w * zi;
        if den.norm() < 1e-6 {
            return self.christoffel_darboux_direct(z, w);
        }
        let n = self.n;
        (self.phi_star(n, w) * self.phi_star(n, zi) - self.phi(n, w) * self.phi(n, zi)) / den
    }

    pub fn christoffel_darboux_direct(&self, z: Complex64, w: Complex64) -> Complex64 {
        let zi = z.inv();
        (0..self.n).map(|k| self.phi(k, w) * self.phi(k, zi)).sum()
    }

    fn v(&self, w: Complex64) -> Complex64 {
        let wn = w.powi(self.d.size as i32);
        let s = self.d.rotation;
        if w.norm() > 1.0 {
            s / (wn - s)
        } else {
            wn / (s - wn)
        }
    }

    /// `K(z, w)`.
    pub fn kernel(&self, z: Complex64, w: Complex64) -> Complex64 {
        -self.christoffel_darboux(z, w) * self.f.eval(w) * self.v(w)
    }

    fn nodes(&self, m: usize) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(2 * m);
        for r in [1.0 + self.eps, 1.0 - self.eps] {
            for a in 0..m {
                pts.push(Complex64::from_polar(r, 2.0 * PI * (a as f64 + 0.5) / m as f64));
            }
        }
        pts
    }

    /// Nystrom `det(I - K)` with `m` nodes per circle (`dw/(2 pi i w)` rule).
    pub fn det_at(&self, m: usize) -> Complex64 {
        let pts = self.nodes(m);
        let size = pts.len();
        let rows: Vec<Vec<Complex64>> = (0..size)
            .into_par_iter()
            .map(|a| (0..size).map(|b| self.kernel(pts[a], pts[b]) / m as f64).collect())
            .collect();
        let mat = DMatrix::from_fn(size, size, |a, b| {
            let id = if a == b { 1.0 } else { 0.0 };
            Complex64::new(id, 0.0) - rows[a][b]
        });
        let (ln, ph) = log_det_complex(mat);
        ph * ln.exp()
    }

    /// `det(I - K)` with node doubling from 32 per circle until the change
    /// is below `1e-10`.
    pub fn fredholm_det(&self) -> Result<Complex64> {
        let mut m = 32;
        let mut prev = self.det_at(m);
        while m < 1024 {
            m *= 2;
            let cur = self.det_at(m);
            if (cur - prev).norm() < 1e-10 * cur.norm().max(1.0) {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::NonConvergence { what: "ratio kernel determinant", detail: "1024 nodes per circle".into() })
    }
}

/// `K(z, w)` for the weight `f`, `N_f` and domain `d` at the default offset.
pub fn ratio_kernel_k(z: Complex64, w: Complex64, f: &WeightFunction, n: usize, d: &DiscreteDomain) -> Result<Complex64> {
    Ok(RatioKernel::new(f, n, d, RATIO_DEFAULT_EPS)?.kernel(z, w))
}

/// `e^{N_f c_0} E(f) det(I - G) det(I - K)`, the discrete Toeplitz
/// determinant assembled from its two Fredholm factors (`E` is the strong
/// Szego constant and `c_0` the constant log-coefficient).
pub fn z_discrete_via_fd(f: &WeightFunction, n: usize, d: &DiscreteDomain) -> Result<f64> {
    let g = ContourKernel::new(f, 0.5, n as i64)?;
    let dg = fredholm_det_indexed(&g)?.value;
    let dk = RatioKernel::new(f, n, d, RATIO_DEFAULT_EPS)?.fredholm_det()?;
    let pref = (n as f64 * f.log_constant() + f.log_szego_constant()).exp();
    if dk.im.abs() > 1e-8 * dk.norm().max(1.0) {
        return Err(Error::ImaginaryResidual { what: "ratio kernel determinant", residual: dk.im.abs() });
    }
    Ok(pref * dg * dk.re)
}
