//! Conditional law of `T_l = (X_1 + .. + X_l)(X_{l+1} + .. + X_m)` given
//! `B = X_1 + .. + X_m = b` for i.i.d. Bernoulli `X_i`.
//!
//! Conditionally on `B = b` the ones are a uniform `b`-subset of the `m`
//! positions, so the law does not depend on the Bernoulli rate.

use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::sampling::seed;

pub type Exact = Ratio<u128>;

pub const MAX_M: usize = 64;

/// `C(a, b)` with `C(a, b) = 0` for `b < 0` or `b > a`. Exact for `a <= 64`.
pub fn binomial(a: i64, b: i64) -> u128 {
    if b < 0 || a < 0 || b > a {
        return 0;
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc * (a - i) stays below 2^128 for a <= 64 since acc <= C(64, 32) * 64
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

fn check(m: usize, l: usize, b: usize) -> Result<()> {
    if m > MAX_M {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds {MAX_M}")));
    }
    if l < 1 || l > m / 2 {
        return Err(Error::InvalidArgument(format!("l = {l} is not in 1..={}", m / 2)));
    }
    if b > m {
        return Err(Error::InvalidArgument(format!("b = {b} exceeds m = {m}")));
    }
    Ok(())
}

/// `P(T_l > t | B = b)` as an exact fraction.
///
/// For `t < 0` the value is 1 and for `b <= 1` it is 0. For `0 <= t < b - 1`
/// it is `(C(m,b) - C(m-l,b) - C(l,b)) / C(m,b)`. For `t >= b - 1` and
/// `l >= 2`, `T_l` can still exceed `t`, so the general hypergeometric sum
/// over `{i : i (b - i) > t}` is used; it is 0 for `l = 1`.
pub fn cut_prob_exact(m: usize, l: usize, b: usize, t: i64) -> Result<Exact> {
    check(m, l, b)?;
    let zero = Exact::from_integer(0);
    if t < 0 {
        return Ok(Exact::from_integer(1));
    }
    if b <= 1 {
        return Ok(zero);
    }
    let (mi, li, bi) = (m as i64, l as i64, b as i64);
    let total = binomial(mi, bi);
    if t < bi - 1 {
        let numer = total - binomial(mi - li, bi) - binomial(li, bi);
        return Ok(Exact::new(numer, total));
    }
    let numer: u128 = (0..=bi)
        .filter(|&i| i * (bi - i) > t)
        .map(|i| binomial(li, i) * binomial(mi - li, bi - i))
        .sum();
    Ok(Exact::new(numer, total))
}

pub fn cut_prob(m: usize, l: usize, b: usize, t: i64) -> Result<f64> {
    let r = cut_prob_exact(m, l, b, t)?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

/// Reference value by enumerating all `2^m` bit strings with `b` ones.
pub fn cut_prob_enumerated(m: usize, l: usize, b: usize, t: i64) -> Exact {
    assert!(m <= 24, "enumeration is exponential in m");
    let low: u32 = (1u32 << l) - 1;
    let (mut hits, mut total) = (0u128, 0u128);
    for bits in 0u32..(1u32 << m) {
        if bits.count_ones() as usize != b {
            continue;
        }
        total += 1;
        let left = (bits & low).count_ones() as i64;
        let right = (bits & !low).count_ones() as i64;
        if left * right > t {
            hits += 1;
        }
    }
    if total == 0 {
        return Exact::from_integer(0);
    }
    Exact::new(hits, total)
}

/// Whether `P(T_l > t | B = b)` is non-decreasing in `l` over `1..=m/2` for
/// every `t` in `-1..=m * m / 4`.
pub fn dominance_check(m: usize, b: usize) -> Result<bool> {
    let t_max = (m * m / 4) as i64;
    for t in -1..=t_max {
        let mut prev = Exact::from_integer(0);
        for l in 1..=m / 2 {
            let cur = cut_prob_exact(m, l, b, t)?;
            if cur < prev {
                return Ok(false);
            }
            prev = cur;
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    pub v: usize,
    pub parent_degree: usize,
    pub l1: usize,
    pub l2: usize,
    pub samples: usize,
    /// Thresholds `t` at which survival functions were compared.
    pub thresholds: Vec<u64>,
    pub survival_l1: Vec<f64>,
    pub survival_l2: Vec<f64>,
    /// Standard error of `survival_l1 - survival_l2` at each threshold.
    pub std_err: Vec<f64>,
    /// Largest `(survival_l1 - survival_l2) / std_err` over thresholds where
    /// the error is positive; `None` when every difference is exactly zero.
    pub max_z: Option<f64>,
    /// `(m^2 / 4)(k + 2 / alpha)` when `k` and `alpha` are supplied.
    pub r: Option<f64>,
    pub holds: bool,
}

/// `c~_v(U_l) = sum_{i < l} sum_{j >= l} deg_{G'_i ∧ G'_j}(v)` for the cut
/// `U_l = {0, .., l-1}`, computed from per-edge inclusion bits.
fn cut_cost(bits: &[u64], l: usize) -> u64 {
    let low = (1u64 << l) - 1;
    bits.iter()
        .map(|&b| ((b & low).count_ones() as u64) * ((b & !low).count_ones() as u64))
        .sum()
}

/// Resamples the child inclusion bits on the parent edges at `v` and compares
/// the empirical survival functions of `c~_v(U_l1)` and `c~_v(U_l2)`. The
/// ordering holds when `S_l1(t) <= S_l2(t) + z * std_err(t)` at every `t`.
#[allow(clippy::too_many_arguments)]
pub fn empirical_dominance(
    parent: &Graph,
    m: usize,
    s: f64,
    v: usize,
    l1: usize,
    l2: usize,
    samples: usize,
    z: f64,
    seed_base: u64,
    k_alpha: Option<(usize, f64)>,
) -> Result<DominanceReport> {
    if !(1 <= l1 && l1 <= l2 && l2 <= m / 2) || m > 64 {
        return Err(Error::InvalidArgument(format!("need 1 <= l1 <= l2 <= {} and m <= 64", m / 2)));
    }
    let deg = parent.degree(v);
    // one stream per cut size, so equal cut sizes see identical samples
    let draw = |l: usize| -> Vec<u64> {
        let mut rng = seed::stream(seed_base, seed::AUX_BASE + l as u64);
        let mut bits = vec![0u64; deg];
        (0..samples)
            .map(|_| {
                for b in bits.iter_mut() {
                    *b = (0..m).fold(0u64, |acc, k| acc | (u64::from(rng.random::<f64>() < s) << k));
                }
                cut_cost(&bits, l)
            })
            .collect()
    };
    let a = draw(l1);
    let b = draw(l2);
    let t_max = a.iter().chain(&b).copied().max().unwrap_or(0);
    let nf = samples as f64;
    let mut report = DominanceReport {
        v,
        parent_degree: deg,
        l1,
        l2,
        samples,
        thresholds: Vec::new(),
        survival_l1: Vec::new(),
        survival_l2: Vec::new(),
        std_err: Vec::new(),
        max_z: None,
        r: k_alpha.map(|(k, alpha)| (m * m) as f64 / 4.0 * (k as f64 + 2.0 / alpha)),
        holds: true,
    };
    for t in 0..=t_max {
        let s1 = a.iter().filter(|&&x| x > t).count() as f64 / nf;
        let s2 = b.iter().filter(|&&x| x > t).count() as f64 / nf;
        let se = ((s1 * (1.0 - s1) + s2 * (1.0 - s2)) / nf).sqrt();
        if s1 - s2 > z * se {
            report.holds = false;
        }
        if se > 0.0 {
            let zt = (s1 - s2) / se;
            report.max_z = Some(report.max_z.map_or(zt, |cur: f64| cur.max(zt)));
        }
        report.thresholds.push(t);
        report.survival_l1.push(s1);
        report.survival_l2.push(s2);
        report.std_err.push(se);
    }
    Ok(report)
}
