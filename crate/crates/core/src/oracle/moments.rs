//! Isolated-node pairs and the second-moment lower bound on their existence.

use serde::Serialize;

use crate::graphs::Graph;

/// `(K, N)`: number of isolated nodes and `N = C(K, 2)`.
pub fn isolated_stats(g: &Graph) -> (usize, usize) {
    let k = (0..g.n()).filter(|&v| g.degree(v) == 0).count();
    (k, k * k.saturating_sub(1) / 2)
}

#[derive(Debug, Clone)]
pub struct SecondMomentInputs {
    pub n: usize,
    /// Expected degrees `d_i`.
    pub degrees: Vec<f64>,
    pub p_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondMomentBound {
    /// Uses the `(4n - 2) p_max^2` exponent; the smaller of the two variants.
    pub primary: f64,
    /// Uses the `(2n - 4) p_max^2` exponent.
    pub statement_variant: f64,
    pub mu: f64,
}

/// `max(0, exp(-c p_max^2 - 6 p_max) (mu^2 - 2 mu max_i e^{-d_i}) / (4 (mu^2 + mu + 1)))`
/// with `mu = sum_i e^{-d_i}`, for `c = 4n - 2` and `c = 2n - 4`.
pub fn second_moment_bound(inp: &SecondMomentInputs) -> SecondMomentBound {
    let terms: Vec<f64> = inp.degrees.iter().map(|&d| (-d).exp()).collect();
    let mu: f64 = terms.iter().sum();
    let top = terms.iter().copied().fold(0.0, f64::max);
    let ratio = ((mu * mu - 2.0 * mu * top) / (4.0 * (mu * mu + mu + 1.0))).max(0.0);
    let n = inp.n as f64;
    let p = inp.p_max;
    let with = |c: f64| (-(c * p * p) - 6.0 * p).exp() * ratio;
    SecondMomentBound {
        primary: with(4.0 * n - 2.0),
        statement_variant: with(2.0 * n - 4.0),
        mu,
    }
}
