//! Coupling vectors `Delta_m`, the potentials they define and the weights
//! `f = e^{tV}` on the unit circle.

use crate::special::ln_factorial;
use num_complex::Complex64;
use std::f64::consts::LN_2;

/// Default truncation standing in for an infinite Selberg expansion.
pub const SELBERG_DEFAULT_N: usize = 161;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingKind {
    Zero,
    Gw,
    Quadratic,
    Single(usize),
    Selberg(usize),
    Custom,
}

/// Couplings of `V(z) = c + sum_m Delta_m (z^m + z^{-m})`.
///
/// One-sided vectors (the quadratic model) drop the `z^{-m}` half.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingVector {
    deltas: Vec<f64>,
    kind: CouplingKind,
    constant_offset: f64,
    expansion_constant: f64,
    one_sided: bool,
}

impl CouplingVector {
    pub fn zero() -> Self {
        Self::raw(Vec::new(), CouplingKind::Zero, 0.0, 0.0, false)
    }

    pub fn gw() -> Self {
        Self::raw(vec![1.0], CouplingKind::Gw, 0.0, 0.0, false)
    }

    /// `V(z) = z^2 / 2`.
    pub fn quadratic() -> Self {
        Self::raw(vec![0.0, 0.5], CouplingKind::Quadratic, 0.0, 0.0, true)
    }

    pub fn single(n: usize, delta: f64) -> Self {
        assert!(n >= 1, "interaction length must be positive");
        let mut d = vec![0.0; n];
        d[n - 1] = delta;
        Self::raw(d, CouplingKind::Single(n), 0.0, 0.0, false)
    }

    pub fn custom(deltas: Vec<f64>, constant_offset: f64) -> Self {
        assert!(deltas.iter().all(|d| d.is_finite()), "couplings must be finite");
        Self::raw(deltas, CouplingKind::Custom, constant_offset, 0.0, false)
    }

    /// Truncated expansion of `log(2 + z + 1/z)`; see [`selberg_couplings`].
    pub fn selberg(n: usize) -> Self {
        selberg_couplings(n)
    }

    fn raw(deltas: Vec<f64>, kind: CouplingKind, off: f64, exp: f64, one_sided: bool) -> Self {
        CouplingVector { deltas, kind, constant_offset: off, expansion_constant: exp, one_sided }
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    /// `Delta_m` for `m >= 1`, zero beyond the stored range.
    pub fn delta(&self, m: usize) -> f64 {
        if m == 0 {
            return 0.0;
        }
        self.deltas.get(m - 1).copied().unwrap_or(0.0)
    }

    pub fn kind(&self) -> CouplingKind {
        self.kind
    }

    pub fn constant_offset(&self) -> f64 {
        self.constant_offset
    }

    /// Constant Fourier mode produced by the expansion itself (nonzero only
    /// for Selberg couplings).
    pub fn expansion_constant(&self) -> f64 {
        self.expansion_constant
    }

    /// Full constant term of `V`.
    pub fn constant(&self) -> f64 {
        self.constant_offset + self.expansion_constant
    }

    pub fn is_one_sided(&self) -> bool {
        self.one_sided
    }
}

/// `B_j C(j, i) = (-1)^{j-1} C(j, i) / (j 2^j)`.
fn b_binom(j: usize, i: usize) -> f64 {
    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
    if j <= 1000 {
        let mut c = 1.0f64;
        for r in 0..i {
            c = c * (j - r) as f64 / (r + 1) as f64;
        }
        sign * c / (j as f64 * 2f64.powi(j as i32))
    } else {
        let lc = ln_factorial(j as u64) - ln_factorial(i as u64) - ln_factorial((j - i) as u64);
        sign * (lc - (j as f64).ln() - j as f64 * LN_2).exp()
    }
}

/// Couplings of the Selberg potential `log(2 + z + 1/z)` truncated at order
/// `n`: `Delta_m = sum_i B_{2i+m} C(2i+m, i)`, `B_j = (-1)^{j-1}/(j 2^j)`.
///
/// The constant offset is `log 2`; the even-order terms `B_{2i} C(2i, i)`
/// also feed the constant mode and are kept as the expansion constant.
pub fn selberg_couplings(n: usize) -> CouplingVector {
    assert!(n >= 1 && n % 2 == 1, "Selberg truncation must be odd and positive");
    let deltas = (1..=n)
        .map(|m| (0..=(n - m) / 2).map(|i| b_binom(2 * i + m, i)).sum())
        .collect();
    let zeroth = (1..=n / 2).map(|i| b_binom(2 * i, i)).sum();
    CouplingVector::raw(deltas, CouplingKind::Selberg(n), LN_2, zeroth, false)
}

fn bessel_partial(x: f64, j: usize, n: usize) -> f64 {
    // sum_{i <= (n-j)/2} x^{2i+j} / (i! (i+j)!), x >= 0
    if j > n {
        return 0.0;
    }
    if x == 0.0 {
        return if j == 0 { 1.0 } else { 0.0 };
    }
    let lx = x.ln();
    (0..=(n - j) / 2)
        .map(|i| {
            let e = (2 * i + j) as f64 * lx - ln_factorial(i as u64) - ln_factorial((i + j) as u64);
            e.exp()
        })
        .sum()
}

/// `L_0..=L_n` with `e^{t(z+1/z)} ~ L_0 + sum_{j>=1} L_j (z^j + z^{-j})`.
pub fn gw_weight_coefficients(t: f64, n: usize) -> Vec<f64> {
    assert!(t >= 0.0, "t must be nonnegative");
    (0..=n).map(|j| bessel_partial(t, j, n)).collect()
}

/// `L_{n,a}` for `a = 0..=cutoff`: coefficients of `z^{na} + z^{-na}` in
/// `e^{t Delta_n (z^n + z^{-n})}`.
pub fn single_term_coefficients(n: usize, delta: f64, t: f64, cutoff: usize) -> Vec<f64> {
    assert!(n >= 1, "interaction length must be positive");
    let x = t * delta;
    (0..=cutoff)
        .map(|a| {
            let v = bessel_partial(x.abs(), a, cutoff);
            if x < 0.0 && a % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// `V(z)`. Real on the circle for symmetric couplings; complex for
/// one-sided ones.
pub fn potential_eval(cv: &CouplingVector, z: Complex64) -> Complex64 {
    let zi = z.inv();
    let mut v = Complex64::new(cv.constant(), 0.0);
    let (mut zp, mut zq) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    for &d in &cv.deltas {
        zp *= z;
        zq *= zi;
        v += if cv.one_sided { zp * d } else { (zp + zq) * d };
    }
    v
}

/// Coefficients `h_0..=h_kmax` of `exp(sum_{m>=1} c_m z^m)`.
pub fn exp_series(c: &[f64], kmax: usize) -> Vec<f64> {
    let mut h = vec![0.0; kmax + 1];
    h[0] = 1.0;
    for k in 1..=kmax {
        let s: f64 = (1..=k.min(c.len())).map(|m| m as f64 * c[m - 1] * h[k - m]).sum();
        h[k] = s / k as f64;
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ClosedForm {
    /// `z^{-t}(1+z)^{2t}`, i.e. `(2 + z + 1/z)^t` on the circle.
    Selberg(f64),
}

/// A weight `f(z) = exp(c + sum_m a_m z^m + sum_m b_m z^{-m})`, optionally
/// with an exact closed form that takes precedence in evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    t: f64,
    log_const: f64,
    pos: Vec<f64>,
    neg: Vec<f64>,
    closed: Option<ClosedForm>,
}

impl WeightFunction {
    pub fn one() -> Self {
        weight_on_circle(&CouplingVector::zero(), 0.0)
    }

    pub fn gw(t: f64) -> Self {
        weight_on_circle(&CouplingVector::gw(), t)
    }

    pub fn quadratic(t: f64) -> Self {
        weight_on_circle(&CouplingVector::quadratic(), t)
    }

    /// Exact Selberg weight `(2 + z + 1/z)^t`, with the default expansion
    /// attached for the Fourier-side routines.
    pub fn selberg(t: f64) -> Self {
        weight_on_circle(&selberg_couplings(SELBERG_DEFAULT_N), t)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn log_constant(&self) -> f64 {
        self.log_const
    }

    /// Coefficients of `z^m`, `m >= 1`, in `log f`.
    pub fn log_positive(&self) -> &[f64] {
        &self.pos
    }

    /// Coefficients of `z^{-m}`, `m >= 1`, in `log f`.
    pub fn log_negative(&self) -> &[f64] {
        &self.neg
    }

    pub fn has_closed_form(&self) -> bool {
        self.closed.is_some()
    }

    /// Selberg exponent when the weight is a Selberg weight.
    pub fn selberg_exponent(&self) -> Option<f64> {
        self.closed.map(|ClosedForm::Selberg(t)| t)
    }

    /// Whether `f` is real on `|z| = 1`.
    pub fn is_real_on_circle(&self) -> bool {
        self.closed.is_some() || self.pos == self.neg
    }

    /// Point on the circle where `f` fails to be smooth, if any.
    pub fn singularity(&self) -> Option<Complex64> {
        match self.closed {
            Some(ClosedForm::Selberg(t)) if t.fract() != 0.0 || t < 0.0 => Some(Complex64::new(-1.0, 0.0)),
            _ => None,
        }
    }

    /// True when the weight is a Laurent polynomial of known degree.
    pub fn laurent_degree(&self) -> Option<usize> {
        match self.closed {
            Some(ClosedForm::Selberg(t)) if t >= 0.0 && t.fract() == 0.0 => Some(t as usize),
            _ if self.pos.iter().chain(&self.neg).all(|&c| c == 0.0) => Some(0),
            _ => None,
        }
    }

    /// Rough Fourier bandwidth used to seed quadrature node counts.
    pub fn bandwidth(&self) -> usize {
        if let Some(d) = self.laurent_degree() {
            return d;
        }
        let m = self.pos.len().max(self.neg.len());
        let amp: f64 = self.pos.iter().chain(&self.neg).map(|c| c.abs()).sum();
        m * (8 + (3.0 * amp).ceil() as usize)
    }

    /// `f(z)`, using the closed form when there is one.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self.closed {
            Some(ClosedForm::Selberg(t)) => {
                let base = z + z.inv() + 2.0;
                if t.fract() == 0.0 && t.abs() < 1e9 {
                    base.powi(t as i32)
                } else if (z.norm() - 1.0).abs() < 1e-12 {
                    Complex64::new(base.re.max(0.0).powf(t), 0.0)
                } else {
                    base.powf(t)
                }
            }
            None => self.eval_expanded(z),
        }
    }

    /// `f(z)` from the log-coefficients, ignoring any closed form.
    pub fn eval_expanded(&self, z: Complex64) -> Complex64 {
        let zi = z.inv();
        let mut e = Complex64::new(self.log_const, 0.0);
        let mut zp = Complex64::new(1.0, 0.0);
        for &c in &self.pos {
            zp *= z;
            e += zp * c;
        }
        let mut zq = Complex64::new(1.0, 0.0);
        for &c in &self.neg {
            zq *= zi;
            e += zq * c;
        }
        e.exp()
    }

    /// `sum_k k a_k b_k`, the log of the strong Szego limit constant.
    pub fn log_szego_constant(&self) -> f64 {
        self.pos.iter().zip(&self.neg).enumerate().map(|(k, (a, b))| (k + 1) as f64 * a * b).sum()
    }
}

/// `f = e^{tV}` from the expansion alone, never the Selberg closed form.
pub fn weight_expanded(cv: &CouplingVector, t: f64) -> WeightFunction {
    let mut w = weight_on_circle(cv, t);
    w.closed = None;
    w
}

/// `f = e^{tV}` for the couplings `cv`.
pub fn weight_on_circle(cv: &CouplingVector, t: f64) -> WeightFunction {
    let pos: Vec<f64> = cv.deltas.iter().map(|d| t * d).collect();
    let neg = if cv.one_sided { vec![0.0; pos.len()] } else { pos.clone() };
    let closed = match cv.kind {
        CouplingKind::Selberg(_) => Some(ClosedForm::Selberg(t)),
        _ => None,
    };
    WeightFunction { t, log_const: t * cv.constant(), pos, neg, closed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn on_circle(th: f64) -> Complex64 {
        Complex64::from_polar(1.0, th)
    }

    #[test]
    fn selberg_small_orders_are_exact() {
        assert_eq!(selberg_couplings(1).delta(1), 0.5);
        assert_eq!(selberg_couplings(3).delta(1), 0.625);
        assert_eq!(selberg_couplings(3).delta(3), 1.0 / 24.0);
    }

    #[test]
    fn selberg_couplings_approach_log_coefficients_slowly() {
        let cv = selberg_couplings(4001);
        for m in 1..5 {
            let want = if m % 2 == 1 { 1.0 } else { -1.0 } / m as f64;
            let err = (cv.delta(m) - want).abs();
            assert!(err < 2.0 / (4001f64).sqrt(), "m={m}: err {err}");
        }
        assert!((cv.expansion_constant() + LN_2).abs() < 0.05);
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential_eval(&CouplingVector::zero(), on_circle(0.7)), Complex64::new(0.0, 0.0));
        let v = potential_eval(&selberg_couplings(81), on_circle(PI / 3.0)).re;
        assert!((v - 3f64.ln()).abs() < 1e-6, "{v}");
        let n = 161;
        let v = potential_eval(&selberg_couplings(n), on_circle(0.0)).re;
        assert!((v - 4f64.ln()).abs() < 1.0 / n as f64, "{v}");
    }

    #[test]
    fn selberg_reconstruction_error_follows_truncation_envelope() {
        // The expansion is the partial sum of log(1 + cos th) to order N, so
        // the error is about |cos th|^{N+1}/(N+1): tiny near |th| = 2.8, but
        // 1/(2N) at th = 0 where the series converges only conditionally.
        // For cos th < 0 the tail does not alternate and picks up 1/(1 - |u|).
        let n = 161;
        let cv = selberg_couplings(n);
        for i in 0..=280 {
            let th = -2.8 + 0.02 * f64::from(i);
            let v = potential_eval(&cv, on_circle(th));
            assert!(v.im.abs() < 1e-12);
            let err = (v.re - (2.0 + 2.0 * th.cos()).ln()).abs();
            let u = th.cos();
            let mut envelope = u.abs().powi(n as i32 + 1) / (n + 1) as f64;
            if u < 0.0 {
                // Same-sign tail: geometric factor.
                envelope /= 1.0 + u;
            }
            assert!(err <= 1.01 * envelope + 1e-13, "th={th}: {err} vs {envelope}");
            if (0.3..=2.8).contains(&th.abs()) {
                assert!(err < 1e-5);
            }
        }
        let at_zero = potential_eval(&cv, on_circle(0.0)).re - 4f64.ln();
        assert!((at_zero - 0.5 / n as f64).abs() < 1e-4, "{at_zero}");
    }

    fn fourier_of_potential(cv: &CouplingVector, k: i32) -> Complex64 {
        let m = 4096;
        (0..m)
            .map(|j| {
                let z = on_circle(2.0 * PI * j as f64 / m as f64);
                potential_eval(cv, z) * z.powi(-k)
            })
            .sum::<Complex64>()
            / m as f64
    }

    #[test]
    fn fourier_consistency_for_named_kinds() {
        let kinds = [
            CouplingVector::gw(),
            CouplingVector::quadratic(),
            CouplingVector::single(3, -0.7),
            CouplingVector::custom(vec![0.3, -0.2, 0.1], 0.25),
            selberg_couplings(81),
        ];
        for cv in &kinds {
            for k in 1..=6 {
                let c = fourier_of_potential(cv, k);
                assert!((c.re - cv.delta(k as usize)).abs() < 1e-8, "{:?} k={k}", cv.kind());
                let back = fourier_of_potential(cv, -k);
                let want = if cv.is_one_sided() { 0.0 } else { cv.delta(k as usize) };
                assert!((back.re - want).abs() < 1e-8);
            }
            assert!((fourier_of_potential(cv, 0).re - cv.constant()).abs() < 1e-8);
        }
    }

    #[test]
    fn gw_coefficients_match_bessel() {
        use crate::special::bessel_i;
        let t = 1.3;
        let l = gw_weight_coefficients(t, 60);
        for (j, lj) in l.iter().enumerate().take(12) {
            assert!((lj - bessel_i(j as u32, 2.0 * t)).abs() < 1e-13);
        }
        assert_eq!(gw_weight_coefficients(0.0, 5)[0], 1.0);
        assert_eq!(gw_weight_coefficients(0.7, 3).get(5), None);
        assert_eq!(bessel_partial(0.7, 5, 3), 0.0);
    }

    #[test]
    fn gw_weight_reconstruction() {
        for &t in &[0.3, 1.0, 2.0] {
            let l = gw_weight_coefficients(t, 60);
            for i in 0..16 {
                let z = on_circle(0.4 * f64::from(i));
                let mut s = Complex64::new(l[0], 0.0);
                for (j, lj) in l.iter().enumerate().skip(1) {
                    s += (z.powi(j as i32) + z.powi(-(j as i32))) * *lj;
                }
                let want = (t * (z + z.inv())).exp();
                assert!((s - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn single_term_reductions() {
        let t = 0.8;
        let a = single_term_coefficients(1, 1.0, t, 30);
        let b = gw_weight_coefficients(t, 30);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-15);
        }
        let z = single_term_coefficients(4, 0.0, t, 10);
        assert_eq!(z[0], 1.0);
        assert!(z[1..].iter().all(|&v| v == 0.0));
        let neg = single_term_coefficients(2, -0.5, 2.0, 40);
        assert!((neg[1] + crate::special::bessel_i(1, 2.0)).abs() < 1e-13);
    }

    #[test]
    fn weights() {
        let one = WeightFunction::one();
        assert_eq!(one.eval(on_circle(1.1)), Complex64::new(1.0, 0.0));
        let gw = WeightFunction::gw(0.9);
        let f = gw.eval(on_circle(2.0));
        assert!(f.im.abs() < 1e-15 && f.re > 0.0);
        let s = WeightFunction::selberg(1.0);
        assert!((s.eval(on_circle(0.0)).re - 4.0).abs() < 1e-15);
        assert_eq!(WeightFunction::selberg(-0.5).singularity(), Some(Complex64::new(-1.0, 0.0)));
        assert_eq!(WeightFunction::selberg(2.0).laurent_degree(), Some(2));
        // Closed form and expansion agree away from z = -1.
        let z = on_circle(1.0);
        let s = WeightFunction::selberg(1.5);
        assert!((s.eval(z) - s.eval_expanded(z)).norm() < 1e-8);
        assert!((gw.log_szego_constant() - 0.81).abs() < 1e-15);
        let q = WeightFunction::quadratic(2.0);
        assert!((q.eval(on_circle(0.3)) - (on_circle(0.6)).exp()).norm() < 1e-14);
    }

    #[test]
    fn exp_series_matches_exponential() {
        let h = exp_series(&[0.7], 10);
        let mut f = 1.0;
        for (k, hk) in h.iter().enumerate() {
            if k > 0 {
                f *= k as f64;
            }
            assert!((hk - 0.7f64.powi(k as i32) / f).abs() < 1e-15);
        }
        let h = exp_series(&[0.0, 0.5], 6);
        assert_eq!(h[1], 0.0);
        assert!((h[4] - 0.125).abs() < 1e-16);
    }
}
