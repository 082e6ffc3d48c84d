//! Tail bounds for sums of independent Bernoulli variables and the MGF
//! ordering Bernoulli <= Poisson <= doubled half-rate Poisson.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChernoffForm {
    /// `P(X >= (1+d) np) <= (e^d / (1+d)^(1+d))^np`, any `d > 0`.
    Upper,
    /// `P(X >= (1+d) np) <= (e / (1+d))^((1+d) np)`, any `d > 0`.
    UpperLoose,
    /// `P(X >= (1+d) np) <= 2^(-(1+d) np)`, `d > 5`.
    UpperLarge,
    /// `P(X <= (1-d) np) <= (e^-d / (1-d)^(1-d))^np`, `0 < d < 1`.
    Lower,
}

pub fn chernoff_upper(np: f64, delta: f64, form: ChernoffForm) -> Result<f64> {
    if !(np >= 0.0 && np.is_finite()) {
        return Err(Error::InvalidArgument(format!("np = {np} must be finite and >= 0")));
    }
    let domain = match form {
        ChernoffForm::Upper | ChernoffForm::UpperLoose => delta > 0.0,
        ChernoffForm::UpperLarge => delta > 5.0,
        ChernoffForm::Lower => delta > 0.0 && delta < 1.0,
    };
    if !domain {
        return Err(Error::InvalidArgument(format!("delta = {delta} outside the domain of {form:?}")));
    }
    let log = match form {
        ChernoffForm::Upper => np * (delta - (1.0 + delta) * (1.0 + delta).ln()),
        ChernoffForm::UpperLoose => (1.0 + delta) * np * (1.0 - (1.0 + delta).ln()),
        ChernoffForm::UpperLarge => -(1.0 + delta) * np * std::f64::consts::LN_2,
        ChernoffForm::Lower => np * (-delta - (1.0 - delta) * (1.0 - delta).ln()),
    };
    Ok(log.exp())
}

/// Bound on `P(X <= t)` for `X = sum X_i + sum 2 X_j` with independent
/// Bernoulli terms: `exp(-EX/2 + (t/2) log(e EX / t))`, `0 <= t < EX`. At
/// `t = 0` the second term is taken as its limit 0.
pub fn poissonized_lower_tail(ex: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t < ex && ex.is_finite()) {
        return Err(Error::InvalidArgument(format!("need 0 <= t < EX, got t = {t}, EX = {ex}")));
    }
    let tail = if t == 0.0 { 0.0 } else { t / 2.0 * (std::f64::consts::E * ex / t).ln() };
    Ok((-ex / 2.0 + tail).exp())
}

/// `(M_X(t), M_Y(t), M_Z(t))` for `X ~ Bern(p)`, `Y ~ Pois(p)`,
/// `Z ~ 2 Pois(p/2)`.
pub fn mgf_triple(p: f64, t: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=1.0).contains(&p) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("need p in [0, 1] and finite t, got p = {p}, t = {t}")));
    }
    let x = 1.0 + p * t.exp_m1();
    let y = (p * t.exp_m1()).exp();
    let z = (p * (2.0 * t).exp_m1() / 2.0).exp();
    Ok((x, y, z))
}
