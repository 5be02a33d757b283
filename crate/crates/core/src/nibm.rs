//! Non-intersecting simple random-walk bridges and their width
//! `W = max_t' (X_{N_f-1}(t') - X_0(t'))`: an exact rejection sampler, the
//! exact width distribution as a contour integral of discrete-to-continuous
//! Toeplitz ratios, and an enumeration oracle.

use crate::error::{Error, Result};
use crate::linalg::det_bareiss;
use crate::potential::WeightFunction;
use crate::toeplitz::{toeplitz_det_continuous, toeplitz_det_discrete, DiscreteDomain};
use crate::tracy_widom::tracy_widom_cdf;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Proposal budget per sample.
pub const REJECTION_BUDGET: u64 = 10_000_000;
const CHUNK: usize = 1024;

/// `N_f` walkers over `2t` steps, from and back to `(0, 2, ..., 2N_f - 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkerEnsemble {
    pub t: usize,
    /// `paths[i][s]` is walker `i` after `s` steps.
    pub paths: Vec<Vec<i64>>,
}

impl WalkerEnsemble {
    pub fn n_f(&self) -> usize {
        self.paths.len()
    }

    /// Bridge endpoints, unit steps and strict ordering at every time.
    pub fn is_valid(&self) -> bool {
        let len = 2 * self.t + 1;
        self.paths.iter().enumerate().all(|(i, p)| {
            p.len() == len
                && p[0] == 2 * i as i64
                && p[len - 1] == 2 * i as i64
                && p.windows(2).all(|w| (w[1] - w[0]).abs() == 1)
        }) && (0..len).all(|s| self.paths.windows(2).all(|w| w[0][s] < w[1][s]))
    }

    /// The ensemble `-X` with walkers relabelled in increasing order and
    /// shifted back onto the standard starting points.
    pub fn reflected(&self) -> WalkerEnsemble {
        let top = 2 * (self.n_f() as i64 - 1);
        let paths = self.paths.iter().rev().map(|p| p.iter().map(|x| top - x).collect()).collect();
        WalkerEnsemble { t: self.t, paths }
    }
}

fn propose(n_f: usize, t: usize, rng: &mut ChaCha8Rng) -> Option<WalkerEnsemble> {
    let steps = 2 * t;
    let mut paths: Vec<Vec<i64>> = (0..n_f).map(|i| Vec::from([2 * i as i64])).collect();
    let mut ups = vec![t; n_f];
    for s in 0..steps {
        let remaining = (steps - s) as u64;
        for i in 0..n_f {
            // Up with probability (remaining ups)/(remaining steps): a uniform bridge.
            let up = rng.random_range(0..remaining) < ups[i] as u64;
            let x = *paths[i].last().unwrap();
            if up {
                ups[i] -= 1;
            }
            paths[i].push(if up { x + 1 } else { x - 1 });
        }
        if paths.windows(2).any(|w| w[0][s + 1] >= w[1][s + 1]) {
            return None;
        }
    }
    Some(WalkerEnsemble { t, paths })
}

fn sample_with(n_f: usize, t: usize, rng: &mut ChaCha8Rng) -> Result<WalkerEnsemble> {
    for _ in 0..REJECTION_BUDGET {
        if let Some(e) = propose(n_f, t, rng) {
            return Ok(e);
        }
    }
    Err(Error::RejectionBudget { budget: REJECTION_BUDGET })
}

fn check_sizes(n_f: usize, t: usize) -> Result<()> {
    if n_f == 0 {
        return Err(Error::invalid("need at least one walker"));
    }
    if t == 0 {
        return Err(Error::invalid("need t >= 1"));
    }
    Ok(())
}

/// One exact sample: independent uniform bridges, rejected as soon as two
/// walkers meet.
pub fn sample_bridge(n_f: usize, t: usize, seed: u64) -> Result<WalkerEnsemble> {
    check_sizes(n_f, t)?;
    sample_with(n_f, t, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `count` samples mapped through `f`; chunk `c` uses stream `c` of the
/// seeded generator, so the output does not depend on the thread count.
pub fn sample_map<T: Send>(
    n_f: usize,
    t: usize,
    count: usize,
    seed: u64,
    f: impl Fn(&WalkerEnsemble) -> T + Sync,
) -> Result<Vec<T>> {
    check_sizes(n_f, t)?;
    let chunks = count.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<T>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let n = CHUNK.min(count - c * CHUNK);
            (0..n).map(|_| sample_with(n_f, t, &mut rng).map(|e| f(&e))).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Width of an ensemble (0 for a single walker).
pub fn width_of(e: &WalkerEnsemble) -> i64 {
    let (first, last) = (&e.paths[0], &e.paths[e.n_f() - 1]);
    first.iter().zip(last).map(|(a, b)| b - a).max().unwrap_or(0)
}

/// Estimate of `P(W < 2N)` with its binomial standard error and 95% Wilson
/// interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfEstimate {
    pub n: usize,
    pub estimate: f64,
    pub sigma: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = k as f64 / n;
    let den = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / den;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / den;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Thresholds `N` for which `P(W < 2N)` is reported: from the hard floor
/// `N_f - 1` (probability 0) to `N_f + t` (probability 1).
pub fn thresholds(n_f: usize, t: usize) -> std::ops::RangeInclusive<usize> {
    n_f.saturating_sub(1).max(1)..=n_f + t
}

/// Empirical CDF of the width from `samples` exact samples.
pub fn width_cdf_mc(n_f: usize, t: usize, samples: usize, seed: u64) -> Result<Vec<CdfEstimate>> {
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let widths = sample_map(n_f, t, samples, seed, width_of)?;
    Ok(cdf_from_widths(&widths, thresholds(n_f, t)))
}

pub fn cdf_from_widths(widths: &[i64], ns: impl Iterator<Item = usize>) -> Vec<CdfEstimate> {
    let total = widths.len() as u64;
    ns.map(|n| {
        let k = widths.iter().filter(|&&w| w < 2 * n as i64).count() as u64;
        let p = k as f64 / total as f64;
        let (lo, hi) = wilson_interval(k, total, 1.96);
        CdfEstimate { n, estimate: p, sigma: (p * (1.0 - p) / total as f64).sqrt(), wilson_lo: lo, wilson_hi: hi }
    })
    .collect()
}

/// Number of trapezoid nodes in `s`: the discrete determinant is a Laurent
/// polynomial in `s` of degree at most `N_f (t + N_f)/N`.
pub fn s_nodes(n_f: usize, t: usize, n: usize) -> usize {
    (4 * n).max(n_f * (t + n_f) / n + 2)
}

/// Largest imaginary part tolerated in [`width_cdf_exact`].
pub const IMAG_TOL: f64 = 1e-9;

/// `P(W < 2N) = oint D^{d_s}_{N_f}(f) / D_{N_f}(f) ds/(2 pi i s)` with
/// `f(z) = z^{-t} (1 + z)^{2t}` and `d_s = {z : z^N = s}`.
pub fn width_cdf_exact(n_f: usize, t: usize, n: usize) -> Result<f64> {
    check_sizes(n_f, t)?;
    if n == 0 {
        return Err(Error::invalid("threshold N must be positive"));
    }
    if n_f * t > 4096 || n_f > 16 {
        return Err(Error::SizeGuard(format!("width_cdf_exact with N_f = {n_f}, t = {t}")));
    }
    if n + 1 <= n_f {
        // Fewer sites than walkers: every discrete determinant vanishes.
        return Ok(0.0);
    }
    let f = WeightFunction::selberg(t as f64);
    let dc = toeplitz_det_continuous(&f, n_f)?;
    let m = s_nodes(n_f, t, n);
    let vals: Vec<Result<Complex64>> = (0..m)
        .into_par_iter()
        .map(|k| {
            let s = Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / m as f64);
            let dd = toeplitz_det_discrete(&f, n_f, &DiscreteDomain::new(n, s)?)?;
            Ok(Complex64::from_polar((dd.ln_abs - dc.ln_abs).exp(), dd.phase.arg() - dc.phase.arg()))
        })
        .collect();
    let mut sum = Complex64::new(0.0, 0.0);
    for v in vals {
        sum += v?;
    }
    let p = sum / m as f64;
    // LU rounding in the discrete determinants reaches ~1e-10 at N_f = 8, t = 16.
    if p.im.abs() > IMAG_TOL {
        return Err(Error::ImaginaryResidual { what: "width_cdf_exact", residual: p.im.abs() });
    }
    Ok(p.re)
}

fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Number of non-intersecting configurations, `det[C(2t, t + (b_j - a_i)/2)]`
/// by Lindstrom-Gessel-Viennot with `a = b = (0, 2, ..., 2N_f - 2)`.
pub fn lgv_count(n_f: usize, t: usize) -> i128 {
    let m = (0..n_f)
        .map(|i| (0..n_f).map(|j| binom(2 * t as i64, t as i64 + j as i64 - i as i64)).collect())
        .collect();
    det_bareiss(m)
}

/// Histogram of `W` over all non-intersecting configurations, indexed by
/// `W`; found by depth-first enumeration.
pub fn enumerate_widths(n_f: usize, t: usize) -> Result<Vec<u64>> {
    check_sizes(n_f, t)?;
    let total = lgv_count(n_f, t);
    if total > 50_000_000 {
        return Err(Error::SizeGuard(format!("{total} configurations to enumerate")));
    }
    let mut hist = vec![0u64; 2 * (n_f + t)];
    let start: Vec<i64> = (0..n_f as i64).map(|i| 2 * i).collect();
    let w0 = start[n_f - 1] - start[0];
    enumerate_rec(&start, &start, 2 * t, w0, &mut hist);
    Ok(hist)
}

fn enumerate_rec(pos: &[i64], home: &[i64], left: usize, w: i64, hist: &mut [u64]) {
    if left == 0 {
        hist[w as usize] += 1;
        return;
    }
    let n = pos.len();
    let rem = (left - 1) as i64;
    let mut next = vec![0i64; n];
    for mask in 0u32..(1 << n) {
        let mut ok = true;
        for i in 0..n {
            next[i] = pos[i] + if mask >> i & 1 == 1 { 1 } else { -1 };
            if (next[i] - home[i]).abs() > rem || (i > 0 && next[i] <= next[i - 1]) {
                ok = false;
                break;
            }
        }
        if ok {
            let spread = next[n - 1] - next[0];
            enumerate_rec(&next, home, left - 1, w.max(spread), hist);
        }
    }
}

/// `P(W < 2N)` from the enumeration, as an exact fraction.
pub fn width_cdf_enumerated(n_f: usize, t: usize, n: usize) -> Result<(u64, u64)> {
    let hist = enumerate_widths(n_f, t)?;
    let total: u64 = hist.iter().sum();
    let below: u64 = hist.iter().take((2 * n).min(hist.len())).sum();
    Ok((below, total))
}

/// One row of the Tracy-Widom limit check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwLimitRow {
    pub n_f: usize,
    pub t: usize,
    /// Threshold `N` with `P(W < 2N) = P(W <= w*)`.
    pub n: usize,
    pub exact: f64,
    pub tw: f64,
    pub gap: f64,
}

/// Compares `P((W - 2 sqrt(a)) / (a^{-1/6} t^{2/3}) <= x)`, `a = N_f^2 + 2 N_f t`,
/// with `F_2(x)` along a schedule of `(N_f, t)`.
pub fn tw_limit_check(schedule: &[(usize, usize)], x: f64) -> Result<Vec<TwLimitRow>> {
    let tw = tracy_widom_cdf(x)?;
    schedule
        .iter()
        .map(|&(n_f, t)| {
            let a = (n_f * n_f + 2 * n_f * t) as f64;
            let w_star = 2.0 * a.sqrt() + x * a.powf(-1.0 / 6.0) * (t as f64).powf(2.0 / 3.0);
            // W is even: W <= w* iff W < 2(floor(w*/2) + 1).
            let n = ((w_star / 2.0).floor() + 1.0).max(1.0) as usize;
            let exact = width_cdf_exact(n_f, t, n)?;
            Ok(TwLimitRow { n_f, t, n, exact, tw, gap: (exact - tw).abs() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn single_walker_one_step() {
        let ups = sample_map(1, 1, 20_000, 7, |e| e.paths[0][1] == 1).unwrap();
        let frac = ups.iter().filter(|&&u| u).count() as f64 / ups.len() as f64;
        assert!((frac - 0.5).abs() < 3.0 * (0.25f64 / 20_000.0).sqrt());
        for seed in 0..20 {
            let e = sample_bridge(1, 5, seed).unwrap();
            assert!(e.is_valid());
            assert_eq!(width_of(&e), 0);
            assert_eq!(e.paths[0][10], 0);
        }
    }

    #[test]
    fn samples_are_valid_and_deterministic() {
        let a = sample_bridge(3, 4, 11).unwrap();
        assert_eq!(a, sample_bridge(3, 4, 11).unwrap());
        let all = sample_map(3, 5, 3000, 5, |e| e.clone()).unwrap();
        for e in &all {
            assert!(e.is_valid());
            let r = e.reflected();
            assert!(r.is_valid());
            assert_eq!(width_of(&r), width_of(e));
            let w = width_of(e);
            assert!(w >= 4 && w <= 4 + 10 && w % 2 == 0);
        }
        let b = sample_map(3, 5, 3000, 5, width_of).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| sample_map(3, 5, 3000, 5, width_of).unwrap());
        assert_eq!(b, c);
    }

    #[test]
    fn widths_of_fixed_ensembles() {
        let frozen = WalkerEnsemble { t: 1, paths: vec![vec![0, 1, 0], vec![2, 3, 2]] };
        assert!(frozen.is_valid());
        assert_eq!(width_of(&frozen), 2);
        let wide = WalkerEnsemble { t: 1, paths: vec![vec![0, -1, 0], vec![2, 3, 2]] };
        assert_eq!(width_of(&wide), 4);
        let degenerate = WalkerEnsemble { t: 0, paths: vec![vec![0], vec![2], vec![4]] };
        assert_eq!(width_of(&degenerate), 4);
    }

    #[test]
    fn configuration_frequencies_match_enumeration() {
        // N_f = 2, t = 2: every valid pair is equally likely.
        let samples = 100_000;
        let got = sample_map(2, 2, samples, 3, |e| e.paths.clone()).unwrap();
        let mut counts: HashMap<Vec<Vec<i64>>, u64> = HashMap::new();
        for p in got {
            *counts.entry(p).or_default() += 1;
        }
        let total = lgv_count(2, 2) as u64;
        assert_eq!(counts.len() as u64, total);
        let p = 1.0 / total as f64;
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        for (_, c) in counts {
            assert!((c as f64 / samples as f64 - p).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn enumeration_matches_lgv() {
        for (n_f, t) in [(1, 3), (2, 2), (2, 4), (3, 3)] {
            let hist = enumerate_widths(n_f, t).unwrap();
            assert_eq!(hist.iter().sum::<u64>() as i128, lgv_count(n_f, t));
        }
        assert_eq!(lgv_count(1, 4), 70);
    }

    #[test]
    fn exact_cdf_against_enumeration() {
        let want = [0.0, 0.0396825, 0.6275510, 0.9648526, 0.9994331, 1.0, 1.0, 1.0];
        for n in 1..=8 {
            let (k, m) = width_cdf_enumerated(2, 4, n).unwrap();
            let p = width_cdf_exact(2, 4, n).unwrap();
            assert!((p - k as f64 / m as f64).abs() < 1e-12, "N={n}");
            assert!((p - want[n - 1]).abs() < 1e-7);
        }
        assert_eq!(width_cdf_exact(3, 2, 1).unwrap(), 0.0);
        assert!((width_cdf_exact(3, 2, 2).unwrap()).abs() < 1e-9);
        assert!((width_cdf_exact(2, 3, 40).unwrap() - 1.0).abs() < 1e-10);
        for (n_f, t) in [(3, 3), (1, 5)] {
            let mut prev = 0.0;
            for n in thresholds(n_f, t) {
                let (k, m) = width_cdf_enumerated(n_f, t, n).unwrap();
                let p = width_cdf_exact(n_f, t, n).unwrap();
                assert!((p - k as f64 / m as f64).abs() < 1e-12);
                assert!(p >= prev - 1e-12);
                prev = p;
            }
            assert!((prev - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn monte_carlo_matches_exact() {
        let est = width_cdf_mc(2, 10, 100_000, 42).unwrap();
        for e in est {
            let p = width_cdf_exact(2, 10, e.n).unwrap();
            let sigma = (p * (1.0 - p) / 100_000.0).max(0.0).sqrt();
            assert!((e.estimate - p).abs() <= 3.0 * sigma + 1e-12, "N={} {} {}", e.n, e.estimate, p);
            assert!(e.wilson_lo <= e.estimate && e.estimate <= e.wilson_hi);
        }
        let first = width_cdf_mc(2, 3, 1000, 1).unwrap();
        assert_eq!(first[0].estimate, 0.0);
        assert_eq!(first.last().unwrap().estimate, 1.0);
    }

    #[test]
    fn tw_limit_tails() {
        let rows = tw_limit_check(&[(4, 8), (6, 12)], 4.0).unwrap();
        for r in &rows {
            assert!(r.exact > 0.99 && r.tw > 0.99);
        }
        let rows = tw_limit_check(&[(4, 8), (6, 12)], -6.0).unwrap();
        for r in &rows {
            assert!(r.exact < 0.05 && r.tw < 0.05);
        }
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 100, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && hi > 0.5 && (0.5 - lo - (hi - 0.5)).abs() < 1e-12);
    }
}
