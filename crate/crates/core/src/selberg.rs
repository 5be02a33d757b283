//! Morris/Selberg closed forms and series for partition and correlation
//! functions.
//!
//! Normalisation: `morris` and `one_schur_expectation` return the raw
//! circle integrals `int prod_i (1+z_i)^a (1+1/z_i)^b |Delta|^2`, which
//! carry a factor `N_f!` relative to Toeplitz determinants. Everything named
//! after a partition function or correlator (`z_selberg`, `c_star_selberg`,
//! `z_series`, `c_series`) is divided by `N_f!` and equals the corresponding
//! Toeplitz determinant or minor.

use crate::error::{Error, Result};
use crate::potential::{
    gw_weight_coefficients, single_term_coefficients, weight_expanded, CouplingVector, WeightFunction,
    exp_series,
};
use crate::special::{ln_factorial, log_gamma, pochhammer_partition};
use crate::symfun::{schur_principal, skew_schur_from_h, Partition};
use crate::value::LogValue;
use num_complex::Complex64;

/// `Gamma(c + s eps)^power` in a product evaluated as `eps -> 0`.
#[derive(Debug, Clone, Copy)]
struct GammaTerm {
    c: f64,
    slope: f64,
    power: i32,
}

fn gamma_product(terms: &[GammaTerm]) -> Result<LogValue> {
    let mut ln = 0.0;
    let mut sign = 1i8;
    let mut order = 0i32;
    for &GammaTerm { c, slope, power } in terms {
        let pole = c <= 0.0 && c == c.floor();
        if !pole {
            let (lg, s) = log_gamma(c)?;
            ln += f64::from(power) * lg;
            if s < 0.0 && power % 2 != 0 {
                sign = -sign;
            }
            continue;
        }
        // Gamma(-n + s eps) ~ (-1)^n / (n! s eps). Exact parameters (slope 0)
        // count pole orders the same way, so a pole/pole Pochhammer ratio
        // stays finite; a surviving numerator pole is reported below.
        let n = (-c) as u64;
        let s = if slope == 0.0 { 1.0 } else { slope };
        order -= power;
        ln += f64::from(power) * (-ln_factorial(n) - s.abs().ln());
        let neg = (n % 2 == 1) != (s < 0.0);
        if neg && power % 2 != 0 {
            sign = -sign;
        }
    }
    match order {
        o if o > 0 => Ok(LogValue::ZERO),
        o if o < 0 => Err(Error::Pole(terms.iter().find(|t| t.power > 0 && t.c <= 0.0 && t.c == t.c.floor()).map_or(f64::NAN, |t| t.c))),
        _ => Ok(LogValue::new(ln, sign)),
    }
}

/// Parameters of the Morris integral `M_{N_f}(a, b, gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorrisParams {
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub n: usize,
}

impl MorrisParams {
    pub fn new(a: f64, b: f64, gamma: f64, n: usize) -> Result<Self> {
        let p = MorrisParams { a, b, gamma, n };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("N_f must be positive"));
        }
        if !(self.a + self.b + 1.0 > 0.0) {
            return Err(Error::invalid("Morris integral needs a + b + 1 > 0"));
        }
        let mut bound = 1.0 / self.n as f64;
        if self.n > 1 {
            bound = bound.min((self.a + self.b + 1.0) / (self.n - 1) as f64);
        }
        if !(self.gamma > -bound) {
            return Err(Error::invalid("Morris integral needs gamma > -min(1/N_f, (a+b+1)/(N_f-1))"));
        }
        Ok(())
    }
}

fn morris_terms(a: f64, b: f64, sa: f64, sb: f64, gamma: f64, n: usize, out: &mut Vec<GammaTerm>) {
    for j in 0..n {
        let jg = j as f64 * gamma;
        out.push(GammaTerm { c: 1.0 + a + b + jg, slope: sa + sb, power: 1 });
        out.push(GammaTerm { c: 1.0 + (j + 1) as f64 * gamma, slope: 0.0, power: 1 });
        out.push(GammaTerm { c: 1.0 + a + jg, slope: sa, power: -1 });
        out.push(GammaTerm { c: 1.0 + b + jg, slope: sb, power: -1 });
        out.push(GammaTerm { c: 1.0 + gamma, slope: 0.0, power: -1 });
    }
}

/// `M_{N_f}(a, b, gamma) = prod_j Gamma(1+a+b+j g) Gamma(1+(j+1) g) /
/// (Gamma(1+a+j g) Gamma(1+b+j g) Gamma(1+g))`.
///
/// A pole in a denominator gives an exact zero; one in a numerator is an
/// error.
pub fn morris(p: &MorrisParams) -> Result<LogValue> {
    p.validate()?;
    let mut terms = Vec::with_capacity(5 * p.n);
    morris_terms(p.a, p.b, 0.0, 0.0, p.gamma, p.n, &mut terms);
    gamma_product(&terms)
}

/// Selberg partition function `M_{N_f}(t, t, 1) / N_f!`, equal to the
/// Toeplitz determinant of `(2 + z + 1/z)^t`.
pub fn z_selberg(t: f64, n: usize) -> Result<LogValue> {
    if !(t >= 0.0) {
        return Err(Error::invalid("t must be nonnegative"));
    }
    let m = morris(&MorrisParams::new(t, t, 1.0, n)?)?;
    Ok(m / LogValue::new(ln_factorial(n as u64), 1))
}

fn pochhammer_terms(x: f64, slope: f64, lambda: &Partition, power: i32, out: &mut Vec<GammaTerm>) {
    // [x]_lambda = prod_i Gamma(x - i + lambda_i) / Gamma(x - i)
    for (i, &li) in lambda.parts().iter().enumerate() {
        let base = x - i as f64;
        out.push(GammaTerm { c: base + li as f64, slope, power });
        out.push(GammaTerm { c: base, slope, power: -power });
    }
}

/// `<s_lambda(-z)>` with the Morris weight, as the limit along
/// `a + sa eps`, `b + sb eps`.
fn one_schur_limit(lambda: &Partition, a: f64, b: f64, sa: f64, sb: f64, n: usize) -> Result<LogValue> {
    let mut terms = Vec::new();
    pochhammer_terms(-b, -sb, lambda, 1, &mut terms);
    pochhammer_terms(a + n as f64, sa, lambda, -1, &mut terms);
    morris_terms(a, b, sa, sb, 1.0, n, &mut terms);
    let s = LogValue::from_f64(schur_principal(lambda, n));
    Ok(gamma_product(&terms)? * s)
}

/// `[-b]_lambda / [a + N_f]_lambda * s_lambda(1^{N_f}) * M_{N_f}(a, b, 1)`,
/// the Morris-weighted average of `s_lambda(-z)` (raw normalisation).
pub fn one_schur_expectation(lambda: &Partition, a: f64, b: f64, n: usize) -> Result<LogValue> {
    MorrisParams::new(a, b, 1.0, n)?;
    if pochhammer_partition(a + n as f64, lambda) == 0.0 {
        return Err(Error::DenominatorZero(format!("[a + N_f]_lambda vanishes for lambda = {lambda}")));
    }
    one_schur_limit(lambda, a, b, 0.0, 0.0, n)
}

/// `(-1)^{|lambda|} [-t]_lambda / [t + N_f]_lambda * s_lambda(1^{N_f}) *
/// z_selberg(t, N_f)`: the Selberg-weight average of `s_lambda(z)`.
pub fn c_star_selberg(lambda: &Partition, t: f64, n: usize) -> Result<LogValue> {
    let den = pochhammer_partition(t + n as f64, lambda);
    if den == 0.0 {
        return Err(Error::DenominatorZero(format!("[t + N_f]_lambda vanishes for lambda = {lambda}")));
    }
    let num = pochhammer_partition(-t, lambda);
    let sign = if lambda.weight() % 2 == 1 { -1.0 } else { 1.0 };
    let f = LogValue::from_f64(sign * num / den * schur_principal(lambda, n));
    Ok(f * z_selberg(t, n)?)
}

/// Value of the two-Schur factor, or a divergence marker when one of its
/// denominators vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KFactor {
    Finite(f64),
    Divergent,
}

/// `prod_i 1/(a + lambda_i - mu_i)!^2 * prod_{i,j} 1/((j-i)^2 - (a + lambda_i - mu_j)^2)`
/// with partitions padded to length `N_f`.
pub fn k_factor(a: i64, mu: &Partition, lambda: &Partition, n: usize) -> Result<KFactor> {
    if mu.len() > n || lambda.len() > n {
        return Err(Error::invalid("partitions longer than N_f"));
    }
    let mut ln = 0.0;
    let mut sign = 1.0;
    for i in 0..n {
        let d = a + lambda.part(i) as i64 - mu.part(i) as i64;
        if d < 0 {
            return Err(Error::invalid(format!("a + lambda_{i} - mu_{i} = {d} is negative")));
        }
        ln -= 2.0 * ln_factorial(d as u64);
    }
    for i in 0..n {
        for j in 0..n {
            let x = a + lambda.part(i) as i64 - mu.part(j) as i64;
            let f = (j as i64 - i as i64).pow(2) - x * x;
            if f == 0 {
                return Ok(KFactor::Divergent);
            }
            ln -= (f.abs() as f64).ln();
            if f < 0 {
                sign = -sign;
            }
        }
    }
    Ok(KFactor::Finite(sign * ln.exp()))
}

/// Models with a series representation.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesModel {
    /// `f = e^{t z^2/2}`.
    Quadratic,
    /// `f = e^{t(z + 1/z)}`.
    Gw,
    /// `f = e^{t Delta (z^n + z^{-n})}`.
    Single { n: usize, delta: f64 },
    /// Arbitrary symmetric couplings (experimental).
    General(CouplingVector),
}

impl SeriesModel {
    pub fn couplings(&self) -> CouplingVector {
        match self {
            SeriesModel::Quadratic => CouplingVector::quadratic(),
            SeriesModel::Gw => CouplingVector::gw(),
            SeriesModel::Single { n, delta } => CouplingVector::single(*n, *delta),
            SeriesModel::General(cv) => cv.clone(),
        }
    }

    /// The weight the series expands (never a closed form).
    pub fn weight(&self, t: f64) -> WeightFunction {
        weight_expanded(&self.couplings(), t)
    }
}

/// How a series is organised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesRoute {
    /// Cauchy identity: `sum_nu s_{nu/mu}(rho-) s_{nu/lambda}(rho+)` over
    /// `l(nu) <= N_f`. Exact for every `N_f`.
    Cauchy,
    /// Expand the weight in monomials `z^a` and apply the one- or two-Schur
    /// Morris evaluation per term. Exact at `N_f = 1` only, because the
    /// expansion of a product of weights is not the product of expansions.
    Termwise,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub value: LogValue,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub warning: Option<String>,
    /// Set for two-Schur termwise sums, which hold only up to a constant.
    pub up_to_factor: bool,
}

impl SeriesResult {
    fn from_sum(sum: f64, terms_used: usize, shells: &[f64], up_to_factor: bool) -> Self {
        let tail_estimate = shells.last().copied().unwrap_or(0.0);
        let n = shells.len();
        let warning = (n >= 3 && shells[n - 1] > shells[n - 2] && shells[n - 1] > 1e-300)
            .then(|| "series terms are not decreasing at the cutoff".to_string());
        SeriesResult { value: LogValue::from_f64(sum), terms_used, tail_estimate, warning, up_to_factor }
    }
}

/// Partition function by the default (Cauchy) route.
pub fn z_series(model: &SeriesModel, t: f64, n: usize, cutoff: usize) -> Result<SeriesResult> {
    c_series(model, &Partition::empty(), None, t, n, cutoff, SeriesRoute::Cauchy)
}

/// Partition function by the termwise route.
pub fn z_series_termwise(model: &SeriesModel, t: f64, n: usize, cutoff: usize) -> Result<SeriesResult> {
    c_series(model, &Partition::empty(), None, t, n, cutoff, SeriesRoute::Termwise)
}

/// Correlator `<s_lambda(z) s_mu(1/z)>`, or the starred `<s_lambda(z)>` when
/// `mu` is `None`, normalised like a Toeplitz minor.
pub fn c_series(
    model: &SeriesModel,
    lambda: &Partition,
    mu: Option<&Partition>,
    t: f64,
    n: usize,
    cutoff: usize,
    route: SeriesRoute,
) -> Result<SeriesResult> {
    if cutoff == 0 {
        return Err(Error::invalid("cutoff must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid("N_f must be positive"));
    }
    match route {
        SeriesRoute::Cauchy => cauchy_series(model, lambda, mu.cloned().unwrap_or_default(), t, n, cutoff),
        SeriesRoute::Termwise => termwise_series(model, lambda, mu, t, n, cutoff),
    }
}

fn cauchy_series(
    model: &SeriesModel,
    lambda: &Partition,
    mu: Partition,
    t: f64,
    n: usize,
    cutoff: usize,
) -> Result<SeriesResult> {
    let f = model.weight(t);
    let base = lambda.weight().max(mu.weight());
    let kmax = base + cutoff + 1;
    let hp = exp_series(f.log_positive(), kmax);
    let hm = exp_series(f.log_negative(), kmax);
    let mut sum = 0.0;
    let mut shells = Vec::new();
    let mut terms = 0;
    let mut quiet = 0;
    // Shells can vanish for structural reasons (couplings z^m only fill
    // every m-th shell), so demand a run longer than the coupling range.
    let patience = 2 * f.log_positive().len().max(f.log_negative().len()) + 2;
    for w in base..=base + cutoff {
        let mut shell = 0.0;
        let mut mag = 0.0;
        for nu in Partition::of_weight(w, n) {
            if !nu.contains(lambda) || !nu.contains(&mu) {
                continue;
            }
            let a = skew_schur_from_h(&nu, &mu, &hm);
            if a == 0.0 {
                continue;
            }
            let v = a * skew_schur_from_h(&nu, lambda, &hp);
            shell += v;
            mag += v.abs();
            terms += 1;
        }
        sum += shell;
        shells.push(mag);
        // Both specialisations decay factorially for entire weights.
        quiet = if mag <= 1e-18 * sum.abs() { quiet + 1 } else { 0 };
        if quiet >= patience && w > base + 2 {
            break;
        }
    }
    let scale = (n as f64 * f.log_constant()).exp();
    let mut r = SeriesResult::from_sum(sum * scale, terms, &shells, false);
    r.tail_estimate *= scale;
    Ok(r)
}

/// `(coefficient, exponent)` pairs with `f = sum coefficient * z^exponent`.
fn monomial_expansion(model: &SeriesModel, t: f64, cutoff: usize) -> Result<Vec<(f64, i64)>> {
    let mut out = Vec::new();
    match model {
        SeriesModel::Quadratic => {
            for a in 0..=cutoff {
                let c = (a as f64 * (t / 2.0).abs().ln() - ln_factorial(a as u64)).exp();
                let c = if t < 0.0 && a % 2 == 1 { -c } else { c };
                out.push((if a == 0 { 1.0 } else { c }, 2 * a as i64));
            }
        }
        SeriesModel::Gw | SeriesModel::Single { .. } => {
            let (step, l) = match model {
                SeriesModel::Gw => (1, gw_weight_coefficients(t, cutoff)),
                SeriesModel::Single { n, delta } => (*n as i64, single_term_coefficients(*n, *delta, t, cutoff)),
                _ => unreachable!(),
            };
            out.push((l[0], 0));
            for (a, &la) in l.iter().enumerate().skip(1) {
                out.push((la, step * a as i64));
                out.push((la, -step * a as i64));
            }
        }
        SeriesModel::General(_) => {
            return Err(Error::invalid(
                "the termwise route is not defined for general couplings; use the Cauchy route",
            ))
        }
    }
    Ok(out)
}

fn termwise_series(
    model: &SeriesModel,
    lambda: &Partition,
    mu: Option<&Partition>,
    t: f64,
    n: usize,
    cutoff: usize,
) -> Result<SeriesResult> {
    let nfact = ln_factorial(n as u64).exp();
    let mut sum = 0.0;
    let mut shells = Vec::new();
    let mut terms = 0;
    let mut skipped = 0;
    let two_schur = mu.is_some_and(|m| !m.is_empty());
    for (coef, e) in monomial_expansion(model, t, cutoff)? {
        if coef == 0.0 {
            continue;
        }
        let v = if two_schur {
            match k_factor(e, mu.expect("two-Schur"), lambda, n) {
                Ok(KFactor::Finite(k)) => coef * k,
                _ => {
                    skipped += 1;
                    continue;
                }
            }
        } else {
            // Weight z^e = (1+z)^e (1+1/z)^{-e}; approach along a + b = 0.
            let sign = if lambda.weight() % 2 == 1 { -1.0 } else { 1.0 };
            let m = one_schur_limit(lambda, e as f64, -(e as f64), 1.0, -1.0, n)?;
            coef * sign * m.value() / nfact
        };
        sum += v;
        terms += 1;
        if e >= 0 {
            shells.push(v.abs());
        }
    }
    let mut r = SeriesResult::from_sum(sum, terms, &shells, two_schur);
    if skipped > 0 {
        r.warning = Some(format!("{skipped} terms dropped where the two-Schur factor is undefined"));
    }
    Ok(r)
}

/// `(x; q)_n = prod_{j<n} (1 - x q^j)`.
pub fn q_pochhammer(x: Complex64, q: Complex64, n: usize) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    let mut qj = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        p *= Complex64::new(1.0, 0.0) - x * qj;
        qj *= q;
    }
    p
}
