//! Fourier moments of circle weights, continuous and discrete Toeplitz
//! determinants (optionally with Schur-function insertions), the direct
//! Heine-Szego sum used as an oracle, and Szego polynomials.

use crate::error::{Error, Result};
use crate::linalg::log_det_complex;
use crate::potential::WeightFunction;
use crate::symfun::{schur_eval, Partition};
use crate::value::LogValue;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

const MAX_NODES: usize = 1 << 16;
const MOMENT_TOL: f64 = 1e-12;

/// Rotated roots of unity `{z : z^N = s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteDomain {
    pub size: usize,
    pub rotation: Complex64,
}

impl DiscreteDomain {
    pub fn new(size: usize, rotation: Complex64) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("discrete domain needs at least one root"));
        }
        if (rotation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("domain rotation must have unit modulus"));
        }
        Ok(DiscreteDomain { size, rotation })
    }

    /// Plain roots of unity.
    pub fn unrotated(size: usize) -> Self {
        DiscreteDomain { size, rotation: Complex64::new(1.0, 0.0) }
    }

    /// The roots, starting from the principal `N`-th root of `s`.
    pub fn roots(&self) -> Vec<Complex64> {
        let base = self.rotation.arg() / self.size as f64;
        (0..self.size)
            .map(|j| Complex64::from_polar(1.0, base + 2.0 * PI * j as f64 / self.size as f64))
            .collect()
    }
}

/// Continuous circle or a discrete root-of-unity set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Continuous,
    Discrete(DiscreteDomain),
}

/// Quadrature nodes and weights on the circle for the weight `f`.
///
/// Smooth weights use the trapezoid rule. A weight with a singular point
/// gets a periodizing change of variables `th = th_s + 2 pi w(u)` with
/// `w' = (8/3) sin^4(pi u)`, which flattens the singularity by five orders.
fn circle_rule(f: &WeightFunction, m: usize) -> Vec<(Complex64, f64)> {
    match f.singularity() {
        None => (0..m)
            .map(|j| (Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64), 1.0 / m as f64))
            .collect(),
        Some(s) => {
            let th0 = s.arg();
            (0..m)
                .map(|j| {
                    let u = (j as f64 + 0.5) / m as f64;
                    let w = u - (2.0 / 3.0) * (2.0 * PI * u).sin() / PI + (4.0 * PI * u).sin() / (12.0 * PI);
                    let dw = (8.0 / 3.0) * (PI * u).sin().powi(4);
                    (Complex64::from_polar(1.0, th0 + 2.0 * PI * w), dw / m as f64)
                })
                .collect()
        }
    }
}

fn moments_on_rule(samples: &[(Complex64, Complex64)], kmax: usize) -> Vec<Complex64> {
    // Returns f_k for k in -kmax..=kmax, index k + kmax.
    let ks: Vec<i64> = (-(kmax as i64)..=kmax as i64).collect();
    ks.par_iter()
        .map(|&k| samples.iter().map(|&(z, fw)| fw * z.powi(-k as i32)).sum())
        .collect()
}

fn initial_nodes(f: &WeightFunction, k: usize, nodes: usize) -> usize {
    nodes.max(4 * (k + f.bandwidth())).max(16).next_power_of_two()
}

/// `f_k = (1/2pi) int z^{-k} f(z) dth` by the trapezoid rule with node
/// doubling.
pub fn fourier_moment(f: &WeightFunction, k: i64, nodes: usize) -> Result<Complex64> {
    let mut m = initial_nodes(f, k.unsigned_abs() as usize, nodes);
    let eval = |m: usize| -> Complex64 {
        circle_rule(f, m).iter().map(|&(z, w)| f.eval(z) * z.powi(-k as i32) * w).sum()
    };
    let mut prev = eval(m);
    while m < MAX_NODES {
        m *= 2;
        let cur = eval(m);
        if (cur - prev).norm() <= MOMENT_TOL * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence { what: "fourier_moment", detail: format!("k = {k} at {MAX_NODES} nodes") })
}

/// Fourier coefficients `f_k`, `|k| <= K`, of a weight, either on the
/// continuous circle or averaged over a discrete domain.
#[derive(Debug, Clone)]
pub struct MomentTable {
    kmax: usize,
    values: Vec<Complex64>,
    pub nodes: usize,
    pub domain: Option<DiscreteDomain>,
}

impl MomentTable {
    pub fn continuous(f: &WeightFunction, kmax: usize) -> Result<Self> {
        let mut m = initial_nodes(f, kmax, 0);
        let sample = |m: usize| -> Vec<(Complex64, Complex64)> {
            circle_rule(f, m).into_iter().map(|(z, w)| (z, f.eval(z) * w)).collect()
        };
        let mut prev = moments_on_rule(&sample(m), kmax);
        while m < MAX_NODES {
            m *= 2;
            let cur = moments_on_rule(&sample(m), kmax);
            let scale = cur.iter().map(|c| c.norm()).fold(1.0, f64::max);
            let diff = cur.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if diff <= MOMENT_TOL * scale {
                return Ok(MomentTable { kmax, values: cur, nodes: m, domain: None });
            }
            prev = cur;
        }
        Err(Error::NonConvergence { what: "moment table", detail: format!("K = {kmax} at {MAX_NODES} nodes") })
    }

    pub fn discrete(f: &WeightFunction, kmax: usize, d: &DiscreteDomain) -> Result<Self> {
        let n = d.size as f64;
        let mut samples = Vec::with_capacity(d.size);
        for z in d.roots() {
            let v = f.eval(z);
            if !v.is_finite() {
                return Err(Error::Singular(format!("weight is not finite at the root {z}")));
            }
            samples.push((z, v / n));
        }
        let values = moments_on_rule(&samples, kmax);
        Ok(MomentTable { kmax, values, nodes: d.size, domain: Some(*d) })
    }

    pub fn build(f: &WeightFunction, kmax: usize, domain: &Domain) -> Result<Self> {
        match domain {
            Domain::Continuous => Self::continuous(f, kmax),
            Domain::Discrete(d) => Self::discrete(f, kmax, d),
        }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn get(&self, k: i64) -> Complex64 {
        assert!(k.unsigned_abs() as usize <= self.kmax, "moment index {k} outside table");
        self.values[(k + self.kmax as i64) as usize]
    }
}

/// Determinant in log form: `exp(ln_abs) * phase`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToeplitzDet {
    pub ln_abs: f64,
    pub phase: Complex64,
    /// `|det| < 1e-300`.
    pub singular: bool,
}

impl ToeplitzDet {
    fn from_matrix(m: DMatrix<Complex64>) -> Self {
        let (ln_abs, phase) = log_det_complex(m);
        ToeplitzDet { ln_abs, phase, singular: ln_abs < (1e-300f64).ln() }
    }

    pub fn complex(&self) -> Complex64 {
        self.phase * self.ln_abs.exp()
    }

    /// Real part of the determinant.
    pub fn value(&self) -> f64 {
        self.complex().re
    }

    /// Log-magnitude with the sign of the real part of the phase.
    pub fn log_value(&self) -> LogValue {
        if self.phase.norm() == 0.0 {
            return LogValue::ZERO;
        }
        LogValue::new(self.ln_abs, if self.phase.re >= 0.0 { 1 } else { -1 })
    }

    /// `|Im phase|`, zero for a real determinant.
    pub fn imag_residual(&self) -> f64 {
        self.phase.im.abs()
    }
}

/// `det[f_{(mu_i - i) - (lambda_j - j)}]`, the Toeplitz minor equal to the
/// Heine-Szego integral with `s_lambda(z) s_mu(1/z)` inserted. With empty
/// partitions this is the plain Toeplitz determinant.
pub fn toeplitz_minor(table: &MomentTable, n: usize, lambda: &Partition, mu: &Partition) -> Result<ToeplitzDet> {
    if lambda.len() > n || mu.len() > n {
        return Ok(ToeplitzDet { ln_abs: f64::NEG_INFINITY, phase: Complex64::new(0.0, 0.0), singular: true });
    }
    let idx = |i: usize, j: usize| (mu.part(i) as i64 - i as i64) - (lambda.part(j) as i64 - j as i64);
    let need = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| idx(i, j).unsigned_abs()).max().unwrap_or(0);
    if need as usize > table.kmax() {
        return Err(Error::invalid(format!("moment table too short: need |k| <= {need}")));
    }
    let m = DMatrix::from_fn(n, n, |i, j| table.get(idx(i, j)));
    Ok(ToeplitzDet::from_matrix(m))
}

fn table_for(f: &WeightFunction, n: usize, lambda: &Partition, mu: &Partition, domain: &Domain) -> Result<MomentTable> {
    let k = n + lambda.part(0).max(mu.part(0));
    MomentTable::build(f, k, domain)
}

/// `D_n(f) = det[f_{j-l}]`.
pub fn toeplitz_det_continuous(f: &WeightFunction, n: usize) -> Result<ToeplitzDet> {
    toeplitz_det(f, n, &Domain::Continuous)
}

/// `D_n^d(f) = det[(1/N) sum_{z in d} z^{-j+l} f(z)]`.
pub fn toeplitz_det_discrete(f: &WeightFunction, n: usize, d: &DiscreteDomain) -> Result<ToeplitzDet> {
    toeplitz_det(f, n, &Domain::Discrete(*d))
}

pub fn toeplitz_det(f: &WeightFunction, n: usize, domain: &Domain) -> Result<ToeplitzDet> {
    let e = Partition::empty();
    toeplitz_minor_det(f, n, &e, &e, domain)
}

/// Toeplitz minor with Schur insertions, building its own moment table.
pub fn toeplitz_minor_det(
    f: &WeightFunction,
    n: usize,
    lambda: &Partition,
    mu: &Partition,
    domain: &Domain,
) -> Result<ToeplitzDet> {
    if n == 0 {
        return Err(Error::invalid("N_f must be positive"));
    }
    let table = table_for(f, n, lambda, mu, domain)?;
    toeplitz_minor(&table, n, lambda, mu)
}

/// Direct evaluation of the `n`-fold sum or integral
/// `c sum prod f(z_i) |Delta(z)|^2 s_lambda(z) s_mu(1/z)` for `n <= 3`.
///
/// Discrete: sum over strictly ordered distinct roots, `c = 1/N^n`.
/// Continuous: tensor trapezoid (256 nodes per axis for `n <= 2`, 64 for
/// `n = 3`), divided by `n!`.
pub fn heine_szego_oracle(
    f: &WeightFunction,
    n: usize,
    domain: &Domain,
    lambda: &Partition,
    mu: &Partition,
) -> Result<Complex64> {
    if n == 0 || n > 3 {
        return Err(Error::SizeGuard(format!("Heine-Szego oracle supports 1 <= N_f <= 3, got {n}")));
    }
    let integrand = |zs: &[Complex64]| -> Result<Complex64> {
        let mut v = Complex64::new(1.0, 0.0);
        for &z in zs {
            v *= f.eval(z);
        }
        for i in 0..zs.len() {
            for j in i + 1..zs.len() {
                v *= (zs[i] - zs[j]).norm_sqr();
            }
        }
        let inv: Vec<Complex64> = zs.iter().map(|z| z.inv()).collect();
        Ok(v * schur_eval(lambda, zs)? * schur_eval(mu, &inv)?)
    };
    match domain {
        Domain::Discrete(d) => {
            let roots = d.roots();
            let nn = roots.len();
            let c = (nn as f64).powi(n as i32).recip();
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = vec![0usize; n];
            // Strictly decreasing index tuples.
            fn rec(
                pos: usize,
                upper: usize,
                idx: &mut Vec<usize>,
                roots: &[Complex64],
                acc: &mut Complex64,
                g: &dyn Fn(&[Complex64]) -> Result<Complex64>,
            ) -> Result<()> {
                if pos == idx.len() {
                    let zs: Vec<Complex64> = idx.iter().map(|&i| roots[i]).collect();
                    *acc += g(&zs)?;
                    return Ok(());
                }
                for s in (0..upper).rev() {
                    idx[pos] = s;
                    rec(pos + 1, s, idx, roots, acc, g)?;
                }
                Ok(())
            }
            rec(0, nn, &mut idx, &roots, &mut acc, &integrand)?;
            Ok(acc * c)
        }
        Domain::Continuous => {
            let m: usize = if n <= 2 { 256 } else { 64 };
            let pts: Vec<Complex64> = (0..m).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)).collect();
            let fact = [1.0, 1.0, 2.0, 6.0][n];
            let norm = (m as f64).powi(n as i32) * fact;
            let total: Result<Vec<Complex64>> = (0..m.pow(n as u32))
                .into_par_iter()
                .map(|flat| {
                    let mut rem = flat;
                    let mut zs = Vec::with_capacity(n);
                    for _ in 0..n {
                        zs.push(pts[rem % m]);
                        rem /= m;
                    }
                    integrand(&zs)
                })
                .collect();
            Ok(total?.iter().sum::<Complex64>() / norm)
        }
    }
}

/// Monic Szego polynomial `p_n` (ascending coefficients) and its norm
/// `h_n = D_{n+1}/D_n`.
#[derive(Debug, Clone)]
pub struct SzegoPolynomial {
    pub coeffs: Vec<Complex64>,
    pub norm_sq: f64,
}

impl SzegoPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `p*_n(z) = z^n conj(p_n(1/conj z))`.
    pub fn reversed(&self) -> Vec<Complex64> {
        self.coeffs.iter().rev().map(|c| c.conj()).collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }

    pub fn eval_reversed(&self, z: Complex64) -> Complex64 {
        horner(&self.reversed(), z)
    }

    /// `p_n / sqrt(h_n)`.
    pub fn orthonormal_scale(&self) -> f64 {
        self.norm_sq.sqrt().recip()
    }
}

pub fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Szego polynomials of degrees `0..=n` from one moment table.
pub fn szego_family(table: &MomentTable, n: usize) -> Result<Vec<SzegoPolynomial>> {
    if table.kmax() < n {
        return Err(Error::invalid("moment table too short for the requested degree"));
    }
    (0..=n)
        .map(|deg| {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
            coeffs[deg] = Complex64::new(1.0, 0.0);
            if deg > 0 {
                // sum_i c_i f_{k-i} = -f_{k-deg}, k < deg
                let a = DMatrix::from_fn(deg, deg, |k, i| table.get(k as i64 - i as i64));
                let b = nalgebra::DVector::from_fn(deg, |k, _| -table.get(k as i64 - deg as i64));
                let sol = a
                    .lu()
                    .solve(&b)
                    .ok_or_else(|| Error::Singular(format!("moment matrix of size {deg}")))?;
                coeffs[..deg].copy_from_slice(sol.as_slice());
            }
            let h: Complex64 = (0..=deg).map(|i| coeffs[i] * table.get(deg as i64 - i as i64)).sum();
            if !(h.re > 0.0) {
                return Err(Error::Singular(format!("nonpositive Szego norm at degree {deg}")));
            }
            Ok(SzegoPolynomial { coeffs, norm_sq: h.re })
        })
        .collect()
}

/// Monic `p_n` for the weight `f` on the circle.
pub fn szego_polynomials(f: &WeightFunction, n: usize) -> Result<SzegoPolynomial> {
    let table = MomentTable::continuous(f, n + 1)?;
    Ok(szego_family(&table, n)?.pop().expect("nonempty family"))
}

/// `<p, z^k>_f = sum_i c_i f_{k-i}`.
pub fn orthogonality_residual(table: &MomentTable, p: &SzegoPolynomial, k: usize) -> Complex64 {
    p.coeffs.iter().enumerate().map(|(i, &c)| c * table.get(k as i64 - i as i64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::bessel_i;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn moments_of_constant_and_gw() {
        let one = WeightFunction::one();
        assert!((fourier_moment(&one, 0, 8).unwrap() - 1.0).norm() < 1e-15);
        assert!(fourier_moment(&one, 3, 8).unwrap().norm() < 1e-15);
        let gw = WeightFunction::gw(1.2);
        for k in -6..=6i64 {
            let m = fourier_moment(&gw, k, 0).unwrap();
            assert!((m.re - bessel_i(k.unsigned_abs() as u32, 2.4)).abs() < 1e-13 && m.im.abs() < 1e-14);
        }
    }

    #[test]
    fn moments_of_singular_selberg_weight() {
        // (2+2cos th)^t has central moment Gamma(1+2t)/Gamma(1+t)^2.
        use crate::special::log_gamma;
        for &t in &[0.5, 1.5, 0.3] {
            let want = (log_gamma(1.0 + 2.0 * t).unwrap().0 - 2.0 * log_gamma(1.0 + t).unwrap().0).exp();
            let got = fourier_moment(&WeightFunction::selberg(t), 0, 0).unwrap();
            assert!((got.re - want).abs() < 1e-11, "t={t}: {} vs {want}", got.re);
        }
    }

    #[test]
    fn determinant_examples() {
        let one = WeightFunction::one();
        for n in 1..6 {
            assert!((toeplitz_det_continuous(&one, n).unwrap().value() - 1.0).abs() < 1e-13);
        }
        let t = 0.8;
        let d = toeplitz_det_continuous(&WeightFunction::gw(t), 1).unwrap().value();
        assert!((d - bessel_i(0, 2.0 * t)).abs() < 1e-13);
        let s = toeplitz_det_continuous(&WeightFunction::selberg(1.0), 1).unwrap().value();
        assert!((s - 2.0).abs() < 1e-13);
    }

    #[test]
    fn discrete_examples() {
        let one = WeightFunction::one();
        let d = DiscreteDomain::new(7, Complex64::from_polar(1.0, 0.4)).unwrap();
        for n in 1..=7 {
            assert!((toeplitz_det_discrete(&one, n, &d).unwrap().value() - 1.0).abs() < 1e-12);
        }
        let gw = WeightFunction::gw(1.0);
        let avg: Complex64 = d.roots().iter().map(|&z| gw.eval(z)).sum::<Complex64>() / 7.0;
        assert!((toeplitz_det_discrete(&gw, 1, &d).unwrap().complex() - avg).norm() < 1e-13);
        let dd = toeplitz_det_discrete(&gw, 4, &DiscreteDomain::unrotated(64)).unwrap().value();
        let dc = toeplitz_det_continuous(&gw, 4).unwrap().value();
        assert!((dd - dc).abs() < 1e-10);
    }

    #[test]
    fn discrete_converges_geometrically() {
        let gw = WeightFunction::gw(1.0);
        let dc = toeplitz_det_continuous(&gw, 3).unwrap().value();
        let errs: Vec<f64> = [6usize, 8, 10, 12]
            .iter()
            .map(|&n| (toeplitz_det_discrete(&gw, 3, &DiscreteDomain::unrotated(n)).unwrap().value() - dc).abs())
            .collect();
        for w in errs.windows(2) {
            assert!(w[1] < 0.2 * w[0], "{errs:?}");
        }
        for &n in &[16usize, 32, 64] {
            let dd = toeplitz_det_discrete(&gw, 3, &DiscreteDomain::unrotated(n)).unwrap().value();
            assert!((dd - dc).abs() < 1e-9, "N={n}: {}", (dd - dc).abs());
        }
    }

    #[test]
    fn discrete_singular_weight_is_reported() {
        let f = WeightFunction::selberg(-0.5);
        let d = DiscreteDomain::unrotated(4);
        assert!(matches!(toeplitz_det_discrete(&f, 1, &d), Err(Error::Singular(_))));
    }

    #[test]
    fn rotation_leaves_modulus_invariant() {
        // Rotating the domain is the same as rotating the weight on the
        // plain roots of unity.
        let gw = WeightFunction::gw(0.7);
        let s = Complex64::from_polar(1.0, 1.1);
        let rot = s.powf(1.0 / 9.0);
        let d = DiscreteDomain::new(9, s).unwrap();
        let shifted: Vec<Complex64> = DiscreteDomain::unrotated(9).roots().iter().map(|z| z * rot).collect();
        for (p, q) in d.roots().iter().zip(&shifted) {
            assert!((p - q).norm() < 1e-14);
        }
        let table = MomentTable::discrete(&gw, 4, &d).unwrap();
        let e = Partition::empty();
        let m1 = toeplitz_minor(&table, 3, &e, &e).unwrap();
        let mom = |k: i64| -> Complex64 {
            DiscreteDomain::unrotated(9).roots().iter().map(|&z| gw.eval(rot * z) * z.powi(-k as i32)).sum::<Complex64>() / 9.0
        };
        let m = DMatrix::from_fn(3, 3, |i, j| mom(i as i64 - j as i64));
        let (ln, _) = log_det_complex(m);
        assert!((ln - m1.ln_abs).abs() < 1e-10);
    }

    #[test]
    fn heine_szego_discrete_examples() {
        let one = WeightFunction::one();
        let e = Partition::empty();
        let v = heine_szego_oracle(&one, 1, &Domain::Discrete(DiscreteDomain::unrotated(5)), &e, &e).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        let d = DiscreteDomain::unrotated(6);
        let v = heine_szego_oracle(&one, 2, &Domain::Discrete(d), &e, &e).unwrap();
        let w = toeplitz_det_discrete(&one, 2, &d).unwrap().complex();
        assert!((v - w).norm() < 1e-13);
        assert!(heine_szego_oracle(&one, 4, &Domain::Continuous, &e, &e).is_err());
    }

    #[test]
    fn heine_szego_with_insertions() {
        let gw = WeightFunction::gw(0.5);
        let cases = [(part(&[1]), Partition::empty()), (part(&[2, 1]), part(&[1])), (part(&[2]), part(&[2]))];
        for (l, m) in &cases {
            let oracle = heine_szego_oracle(&gw, 2, &Domain::Continuous, l, m).unwrap();
            let det = toeplitz_minor_det(&gw, 2, l, m, &Domain::Continuous).unwrap().complex();
            assert!((oracle - det).norm() < 1e-8, "{l} {m}: {oracle} vs {det}");
            let d = Domain::Discrete(DiscreteDomain::new(11, Complex64::from_polar(1.0, 0.3)).unwrap());
            let oracle = heine_szego_oracle(&gw, 3, &d, l, m).unwrap();
            let det = toeplitz_minor_det(&gw, 3, l, m, &d).unwrap().complex();
            assert!((oracle - det).norm() < 1e-8 * det.norm().max(1.0));
        }
    }

    #[test]
    fn szego_polynomials_examples() {
        let p = szego_polynomials(&WeightFunction::one(), 3).unwrap();
        assert!((p.coeffs[3] - 1.0).norm() < 1e-15);
        assert!(p.coeffs[..3].iter().all(|c| c.norm() < 1e-14));
        let p0 = szego_polynomials(&WeightFunction::gw(1.0), 0).unwrap();
        assert_eq!(p0.coeffs, vec![Complex64::new(1.0, 0.0)]);
        let gw = WeightFunction::gw(1.0);
        let table = MomentTable::continuous(&gw, 6).unwrap();
        let fam = szego_family(&table, 5).unwrap();
        for p in &fam {
            for k in 0..p.degree() {
                assert!(orthogonality_residual(&table, p, k).norm() < 1e-9);
            }
        }
        // h_n = D_{n+1}/D_n
        let d3 = toeplitz_det_continuous(&gw, 3).unwrap().value();
        let d2 = toeplitz_det_continuous(&gw, 2).unwrap().value();
        assert!((fam[2].norm_sq - d3 / d2).abs() < 1e-12);
        // Reversal: p*(z) = z^n conj(p(1/conj z)).
        let z = Complex64::new(0.3, 0.8);
        let lhs = fam[3].eval_reversed(z);
        let rhs = z.powi(3) * fam[3].eval((z.conj()).inv()).conj();
        assert!((lhs - rhs).norm() < 1e-13);
    }
}
