//! Exact-recovery conditions and the homogeneous phase regions.
//!
//! Exponentials `e^{-x}` with large `x` underflow to 0 in f64; sums of such
//! terms are then reported as 0.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sampling::{build_parameter_matrix, Latent, ModelKind, ModelSpec, SbmProbs, SpatialGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProfile {
    pub d: Vec<f64>,
    pub p_max: f64,
    pub n: usize,
    pub s: f64,
    pub m: usize,
}

impl DegreeProfile {
    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        let pm = build_parameter_matrix(spec)?;
        Ok(DegreeProfile {
            d: pm.degrees().to_vec(),
            p_max: pm.p_max(),
            n: spec.n,
            s: spec.s,
            m: spec.m,
        })
    }

    pub fn homogeneous(n: usize, d: f64, p_max: f64, s: f64, m: usize) -> Self {
        DegreeProfile {
            d: vec![d; n],
            p_max,
            n,
            s,
            m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub effective_rate: f64,
    /// `sum_i exp(-d_i * effective_rate)`.
    pub sum_suff: f64,
    /// `sum_suff` minus its largest term.
    pub sum_strong: f64,
    /// `sum_i exp(-d_i s^2)`.
    pub sum_pairwise: f64,
    /// `sum_i exp(-d_i s)` minus its largest term.
    pub sum_necessary: f64,
    /// `C` with `d_i = C log n` when the degrees are constant.
    pub homogeneous_c: Option<f64>,
    pub alpha: Option<f64>,
    /// `sum_suff * n^alpha` when `alpha` is supplied.
    pub scaled_suff: Option<f64>,
}

/// `s (1 - (1 - s)^(m - 1))`.
pub fn effective_rate(s: f64, m: usize) -> f64 {
    s * (1.0 - (1.0 - s).powi(m as i32 - 1))
}

fn exp_sum(d: &[f64], rate: f64) -> (f64, f64) {
    d.iter().fold((0.0, 0.0), |(sum, top), &di| {
        let t = (-di * rate).exp();
        (sum + t, f64::max(top, t))
    })
}

const HOMOGENEOUS_RTOL: f64 = 1e-9;

pub fn threshold_report(profile: &DegreeProfile, alpha: Option<f64>) -> Result<ThresholdReport> {
    let (s, m) = (profile.s, profile.m);
    if !(s > 0.0 && s <= 1.0) || m < 2 {
        return Err(Error::InvalidArgument(format!("need s in (0, 1] and m >= 2, got s = {s}, m = {m}")));
    }
    let rate = effective_rate(s, m);
    let (sum_suff, top_suff) = exp_sum(&profile.d, rate);
    let (sum_pairwise, _) = exp_sum(&profile.d, s * s);
    let (sum_s, top_s) = exp_sum(&profile.d, s);
    let homogeneous_c = match profile.d.first() {
        Some(&d0) if profile.n >= 2 => {
            let tol = HOMOGENEOUS_RTOL * d0.abs().max(f64::MIN_POSITIVE);
            profile
                .d
                .iter()
                .all(|&d| (d - d0).abs() <= tol)
                .then(|| d0 / (profile.n as f64).ln())
        }
        _ => None,
    };
    Ok(ThresholdReport {
        effective_rate: rate,
        sum_suff,
        sum_strong: sum_suff - top_suff,
        sum_pairwise,
        sum_necessary: sum_s - top_s,
        homogeneous_c,
        alpha,
        scaled_suff: alpha.map(|a| sum_suff * (profile.n as f64).powf(a)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Impossible,
    MultiOnly,
    PairwisePossible,
    Boundary,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::Impossible => "impossible",
            Region::MultiOnly => "multi_only",
            Region::PairwisePossible => "pairwise_possible",
            Region::Boundary => "boundary",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

pub const BOUNDARY_TOL: f64 = 1e-12;

/// Region of the homogeneous point `p = C log n / n`. Points with `C = 0` or
/// `s = 0` are labeled impossible.
pub fn homogeneous_classify(c: f64, s: f64, m: usize) -> Region {
    if c <= 0.0 || s <= 0.0 {
        return Region::Impossible;
    }
    let multi = c * effective_rate(s, m);
    let pair = c * s * s;
    if (multi - 1.0).abs() <= BOUNDARY_TOL || (pair - 1.0).abs() <= BOUNDARY_TOL {
        Region::Boundary
    } else if multi < 1.0 {
        Region::Impossible
    } else if pair > 1.0 {
        Region::PairwisePossible
    } else {
        Region::MultiOnly
    }
}

/// Model-specific form of the sufficient-condition sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelCondition {
    pub sum: f64,
    pub scaled: Option<f64>,
}

/// SBM: `sum_a |V_a| exp(-rate sum_b |V_b| q_ab)`; RGG: `sum_i exp(-rate p N_r(i))`
/// with `N_r(i)` counting `i` itself; CLG: `sum_i exp(-rate w_i)`.
pub fn model_condition(spec: &ModelSpec, alpha: Option<f64>) -> Result<ModelCondition> {
    let rate = effective_rate(spec.s, spec.m);
    let sum = match &spec.kind {
        ModelKind::Sbm(sbm) => {
            let pm = build_parameter_matrix(spec)?;
            let Latent::Communities { sizes, .. } = pm.latent() else {
                unreachable!("SBM latent data holds communities")
            };
            let c = sbm.communities;
            let q = |a: usize, b: usize| match &sbm.probs {
                SbmProbs::Planted { p, q } => {
                    if a == b {
                        *p
                    } else {
                        *q
                    }
                }
                SbmProbs::Table { q_table } => q_table[a][b],
            };
            (0..c)
                .map(|a| {
                    let row: f64 = (0..c).map(|b| sizes[b] as f64 * q(a, b)).sum();
                    sizes[a] as f64 * (-rate * row).exp()
                })
                .sum()
        }
        ModelKind::Rgg(rgg) => {
            let pm = build_parameter_matrix(spec)?;
            let Latent::Points(points) = pm.latent() else {
                unreachable!("RGG latent data holds points")
            };
            let grid = SpatialGrid::new(&points, rgg.r);
            (0..points.len())
                .map(|i| (-rate * rgg.p * grid.count_within(i) as f64).exp())
                .sum()
        }
        ModelKind::Clg { weights } => {
            spec.validate()?;
            weights.iter().map(|&w| (-rate * w).exp()).sum()
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "no model-specific condition for kind {}",
                serde_json::to_value(other).map_or_else(|_| "?".into(), |v| v["kind"].to_string())
            )))
        }
    };
    Ok(ModelCondition {
        sum,
        scaled: alpha.map(|a| sum * (spec.n as f64).powf(a)),
    })
}

/// Inclusive arithmetic range `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl std::str::FromStr for Range {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Error::InvalidArgument(format!("range `{text}` is not start:stop:step"));
        let [a, b, c] = parts[..] else { return Err(bad()) };
        let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
        let r = Range {
            start: parse(a)?,
            stop: parse(b)?,
            step: parse(c)?,
        };
        if !(r.step > 0.0 && r.start.is_finite() && r.stop.is_finite() && r.stop >= r.start) {
            return Err(Error::InvalidArgument(format!(
                "range `{text}` needs finite start <= stop and step > 0"
            )));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub m: usize,
    pub c: Vec<f64>,
    pub s: Vec<f64>,
    /// `regions[ci][si]`.
    pub regions: Vec<Vec<Region>>,
}

pub fn phase_grid(c_range: Range, s_range: Range, m: usize, exec: Execution) -> PhaseGrid {
    let c = c_range.values();
    let s = s_range.values();
    let regions = exec.map_slice(&c, |&ci| s.iter().map(|&si| homogeneous_classify(ci, si, m)).collect());
    PhaseGrid { m, c, s, regions }
}

impl PhaseGrid {
    pub fn count(&self, region: Region) -> usize {
        self.regions.iter().flatten().filter(|&&r| r == region).count()
    }

    /// CSV with columns `C,s,m,region`, rows ordered by `C` then `s`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "C,s,m,region")?;
        for (ci, row) in self.c.iter().zip(&self.regions) {
            for (si, region) in self.s.iter().zip(row) {
                writeln!(w, "{},{},{},{}", fmt_num(*ci), fmt_num(*si), self.m, region)?;
            }
        }
        w.flush()
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(f)).map_err(|e| Error::io(path, e))
    }
}

/// Grid coordinates rounded to 12 significant decimals to hide step
/// accumulation noise.
fn fmt_num(x: f64) -> String {
    let r = (x * 1e12).round() / 1e12;
    format!("{r}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::RggParams;

    #[test]
    fn two_graphs_reduce_to_s_squared() {
        for &s in &[0.1, 0.5, 0.9] {
            assert!((effective_rate(s, 2) - s * s).abs() < 1e-15);
            let p = DegreeProfile::homogeneous(100, 7.0, 0.1, s, 2);
            let r = threshold_report(&p, None).unwrap();
            assert_eq!(r.sum_suff, r.sum_pairwise);
        }
        for m in 2..10 {
            assert_eq!(effective_rate(1.0, m), 1.0);
        }
    }

    #[test]
    fn er_reference_values() {
        let spec = ModelSpec::er(10_000, 0.003, 0.8, 3, 0);
        let r = threshold_report(&DegreeProfile::from_spec(&spec).unwrap(), Some(1.0)).unwrap();
        assert!((r.effective_rate - 0.768).abs() < 1e-15);
        // high-precision evaluations of 10^4 e^{-23.037696}, 10^4 e^{-29.997 * 0.64},
        // 10^4 e^{-23.9976}
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(r.sum_suff, 9.882248066126679e-7) < 1e-9);
        assert!(rel(r.sum_strong, 9.882248066126679e-7 * 0.9999) < 1e-9);
        assert!(rel(r.sum_pairwise, 4.595997596108338e-5) < 1e-9);
        assert!(rel(r.sum_necessary, 3.784205748275986e-7 * 0.9999) < 1e-9);
        assert!((r.homogeneous_c.unwrap() - 29.997 / 10_000f64.ln()).abs() < 1e-12);
        assert!(rel(r.scaled_suff.unwrap(), 9.882248066126679e-3) < 1e-9);
    }

    #[test]
    fn heterogeneous_degrees_have_no_c() {
        let p = DegreeProfile {
            d: vec![1.0, 2.0],
            p_max: 0.5,
            n: 2,
            s: 0.5,
            m: 3,
        };
        let r = threshold_report(&p, None).unwrap();
        assert_eq!(r.homogeneous_c, None);
        assert!(r.sum_strong <= r.sum_suff);
        assert!(threshold_report(&DegreeProfile { s: 0.0, ..p }, None).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(homogeneous_classify(5.0, 0.4, 3), Region::MultiOnly);
        assert_eq!(homogeneous_classify(8.0, 0.5, 2), Region::PairwisePossible);
        assert_eq!(homogeneous_classify(3.0, 0.5, 3), Region::MultiOnly);
        assert_eq!(homogeneous_classify(3.0, 0.5, 2), Region::Impossible);
        assert_eq!(homogeneous_classify(4.0, 0.5, 2), Region::Boundary);
        assert_eq!(homogeneous_classify(0.0, 0.5, 2), Region::Impossible);
    }

    #[test]
    fn grids() {
        let c: Range = "0:10:0.05".parse().unwrap();
        let s: Range = "0:1:0.005".parse().unwrap();
        assert_eq!(c.values().len(), 201);
        assert_eq!(s.values().len(), 201);
        let g2 = phase_grid(c, s, 2, Execution::default());
        assert_eq!(g2.count(Region::MultiOnly), 0);
        let g3 = phase_grid(c, s, 3, Execution::default());
        assert!(g3.count(Region::MultiOnly) > 0);
        let ci = g3.c.iter().position(|&x| (x - 5.0).abs() < 1e-9).unwrap();
        let si = g3.s.iter().position(|&x| (x - 0.4).abs() < 1e-9).unwrap();
        assert_eq!(g3.regions[ci][si], Region::MultiOnly);
        for (cv, row) in g3.c.iter().zip(&g3.regions) {
            for (sv, r) in g3.s.iter().zip(row) {
                if *r == Region::Impossible {
                    assert!(cv * effective_rate(*sv, 3) < 1.0);
                }
            }
        }
        let mut buf = Vec::new();
        g3.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("C,s,m,region\n0,0,3,impossible\n"));
        assert_eq!(text.lines().count(), 1 + 201 * 201);
        assert!("1:0:1".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
    }

    #[test]
    fn model_condition_examples() {
        let one_block = ModelSpec::sbm_balanced(500, 1, 0.02, 0.5, 0.6, 3, 0);
        let rate = effective_rate(0.6, 3);
        let got = model_condition(&one_block, None).unwrap().sum;
        assert!((got - 500.0 * (-rate * 500.0 * 0.02).exp()).abs() < 1e-12);

        let rgg = ModelSpec {
            n: 50,
            kind: ModelKind::Rgg(RggParams {
                p: 0.3,
                r: 1.5,
                points: None,
            }),
            s: 0.5,
            m: 3,
            seed: 4,
        };
        let got = model_condition(&rgg, Some(0.5)).unwrap();
        let rate = effective_rate(0.5, 3);
        assert!((got.sum - 50.0 * (-rate * 0.3 * 50.0).exp()).abs() < 1e-12);
        assert!((got.scaled.unwrap() - got.sum * 50f64.sqrt()).abs() < 1e-12);

        let mut clg = ModelSpec::er(20, 0.0, 0.7, 4, 0);
        clg.kind = ModelKind::Clg { weights: vec![3.0; 20] };
        let got = model_condition(&clg, None).unwrap().sum;
        assert!((got - 20.0 * (-3.0 * effective_rate(0.7, 4)).exp()).abs() < 1e-12);

        assert!(model_condition(&ModelSpec::er(10, 0.1, 0.5, 2, 0), None).is_err());
    }

    #[test]
    fn sums_are_ordered_and_monotone_in_m() {
        let d: Vec<f64> = (0..200).map(|i| 1.0 + i as f64 * 0.05).collect();
        for &s in &[0.2, 0.5, 0.8] {
            let mut prev = f64::INFINITY;
            for m in 2..10 {
                let p = DegreeProfile {
                    d: d.clone(),
                    p_max: 0.1,
                    n: 200,
                    s,
                    m,
                };
                let r = threshold_report(&p, None).unwrap();
                assert!(r.sum_pairwise >= r.sum_suff);
                assert!(r.sum_suff <= prev);
                assert!((0.0..=s).contains(&r.effective_rate));
                prev = r.sum_suff;
            }
        }
    }
}
