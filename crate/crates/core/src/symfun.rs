//! Integer partitions, Schur polynomials, hook and content products, and the
//! truncated hypergeometric series of partition argument.

use crate::error::{Error, Result};
use crate::linalg::{det_complex, det_real};
use crate::special::pochhammer_partition;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::fmt;

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

/// Arm, leg and content of one cell `(i, j)` (zero-based row and column).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellStats {
    pub row: usize,
    pub col: usize,
    pub arm: usize,
    pub leg: usize,
    pub content: i64,
}

impl CellStats {
    pub fn hook(&self) -> usize {
        self.arm + self.leg + 1
    }
}

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Validates weak decrease; trailing zeros are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::invalid(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts.retain(|&p| p > 0);
        Partition(parts)
    }

    /// Parses `"2,1"` (or `""` for the empty partition).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| Error::invalid(format!("bad part {p:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// `lambda_i` with zero padding.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.part(0);
        Partition((0..w).map(|j| self.0.iter().take_while(|&&p| p > j).count()).collect())
    }

    pub fn cells(&self) -> Vec<CellStats> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.weight());
        for (i, &li) in self.0.iter().enumerate() {
            for j in 0..li {
                out.push(CellStats {
                    row: i,
                    col: j,
                    arm: li - j - 1,
                    leg: conj.part(j) - i - 1,
                    content: j as i64 - i as i64,
                });
            }
        }
        out
    }

    /// Whether the diagram of `other` fits inside this one.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Partitions of `n` with at most `max_len` parts, reverse-lexicographic.
    pub fn of_weight(n: usize, max_len: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rem: usize, max_part: usize, max_len: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            if cur.len() == max_len {
                return;
            }
            for p in (1..=rem.min(max_part)).rev() {
                cur.push(p);
                rec(rem - p, p, max_len, cur, out);
                cur.pop();
            }
        }
        rec(n, n, max_len, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Complete homogeneous symmetric polynomials `h_0..=h_kmax` of `xs`.
pub fn complete_homogeneous(xs: &[Complex64], kmax: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); kmax + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for &x in xs {
        for k in 1..=kmax {
            let prev = h[k - 1];
            h[k] += x * prev;
        }
    }
    h
}

fn jacobi_trudi_complex(lambda: &Partition, h: &[Complex64]) -> Complex64 {
    let n = lambda.len();
    let at = |k: i64| {
        if k < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            h.get(k as usize).copied().unwrap_or_default()
        }
    };
    let m = DMatrix::from_fn(n, n, |i, j| at(lambda.part(i) as i64 - i as i64 + j as i64));
    det_complex(m)
}

/// Schur polynomial `s_lambda(xs)`.
///
/// Bialternant formula for well-separated nodes, Jacobi-Trudi otherwise.
pub fn schur_eval(lambda: &Partition, xs: &[Complex64]) -> Result<Complex64> {
    let n = xs.len();
    if lambda.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if lambda.len() > n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let scale = xs.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
    let coincident = (0..n).any(|i| (i + 1..n).any(|j| (xs[i] - xs[j]).norm() < 1e-9 * scale.max(1.0)));
    if !coincident {
        let num = DMatrix::from_fn(n, n, |i, j| xs[i].powu((lambda.part(j) + n - j - 1) as u32));
        let den = DMatrix::from_fn(n, n, |i, j| xs[i].powu((n - j - 1) as u32));
        let d = det_complex(den);
        if d.norm() > 0.0 {
            let v = det_complex(num) / d;
            if v.is_finite() {
                return Ok(v);
            }
        }
    }
    let h = complete_homogeneous(xs, lambda.part(0) + lambda.len());
    let v = jacobi_trudi_complex(lambda, &h);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Singular("Schur evaluation: both bialternant and Jacobi-Trudi failed".into()))
    }
}

/// Schur polynomial at real arguments.
pub fn schur_eval_real(lambda: &Partition, xs: &[f64]) -> Result<f64> {
    let zs: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Ok(schur_eval(lambda, &zs)?.re)
}

/// Skew Schur function `s_{nu/lambda}` of a specialisation given by its
/// complete homogeneous values `h_0 = 1, h_1, ...` (Jacobi-Trudi).
pub fn skew_schur_from_h(nu: &Partition, lambda: &Partition, h: &[f64]) -> f64 {
    if !nu.contains(lambda) {
        return 0.0;
    }
    let n = nu.len();
    if n == 0 {
        return 1.0;
    }
    let at = |k: i64| if k < 0 { 0.0 } else { h.get(k as usize).copied().unwrap_or(0.0) };
    let m = DMatrix::from_fn(n, n, |i, j| {
        at(nu.part(i) as i64 - lambda.part(j) as i64 - i as i64 + j as i64)
    });
    det_real(m)
}

/// Exact principal specialisation `s_lambda(1^n)` as an integer, if it fits.
pub fn schur_principal_exact(lambda: &Partition, n: usize) -> Option<u128> {
    if lambda.len() > n {
        return Some(0);
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for c in lambda.cells() {
        num = num.checked_mul((n as i64 + c.content) as u128)?;
        den = den.checked_mul(c.hook() as u128)?;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    (den == 1).then_some(num)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Hook-content formula `prod (n + c(s)) / h(s)`.
pub fn schur_principal(lambda: &Partition, n: usize) -> f64 {
    if let Some(v) = schur_principal_exact(lambda, n) {
        return v as f64;
    }
    let ln: f64 = lambda
        .cells()
        .iter()
        .map(|c| ((n as i64 + c.content) as f64).ln() - (c.hook() as f64).ln())
        .sum();
    ln.exp()
}

/// Product of hook lengths.
pub fn c_lambda(lambda: &Partition) -> u128 {
    lambda.cells().iter().map(|c| c.hook() as u128).product()
}

/// Result of a truncated partition series.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperSeries {
    pub value: f64,
    /// Magnitude of the last weight shell summed.
    pub tail: f64,
    pub terms: usize,
    pub warning: Option<String>,
}

/// `sum_{|lambda| <= max_weight} prod[a]_lambda / prod[b]_lambda * s_lambda(xs) / c_lambda`.
pub fn hyper_pq_truncated(a: &[f64], b: &[f64], xs: &[f64], max_weight: usize) -> Result<HyperSeries> {
    let mut value = 0.0;
    let mut terms = 0;
    let mut shells = Vec::with_capacity(max_weight + 1);
    for w in 0..=max_weight {
        let mut shell = 0.0;
        for lam in Partition::of_weight(w, xs.len()) {
            let den: f64 = b.iter().map(|&bb| pochhammer_partition(bb, &lam)).product();
            if den == 0.0 {
                return Err(Error::DenominatorZero(format!("[b]_lambda vanishes at lambda = {lam}")));
            }
            let num: f64 = a.iter().map(|&aa| pochhammer_partition(aa, &lam)).product();
            if num == 0.0 {
                continue;
            }
            let s = schur_eval_real(&lam, xs)?;
            shell += num / den * s / c_lambda(&lam) as f64;
            terms += 1;
        }
        value += shell;
        shells.push(shell.abs());
    }
    let tail = *shells.last().unwrap_or(&0.0);
    let n = shells.len();
    let warning = (n >= 3 && shells[n - 1] > shells[n - 2] && shells[n - 1] > 0.0)
        .then(|| "weight shells are not decreasing; series may not have converged".to_string());
    Ok(HyperSeries { value, tail, terms, warning })
}
