use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Declarative description of a parameter matrix and subsampling setup.
///
/// JSON layout: `{"n": .., "kind": .., "params": {..}, "s": .., "m": .., "seed": ..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub n: usize,
    #[serde(flatten)]
    pub kind: ModelKind,
    pub s: f64,
    /// Defaults to 2 when absent, as in experiment templates that sweep `m`.
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_m() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum ModelKind {
    /// `p_ij = p` for all `i != j`.
    Er { p: f64 },
    Sbm(SbmParams),
    Rgg(RggParams),
    /// Chung-Lu: `p_ij = w_i w_j / sum(w)`.
    Clg { weights: Vec<f64> },
    /// Explicit symmetric matrix with zero diagonal.
    Dense { p: Vec<Vec<f64>> },
    /// `P = p_max * adjacency(G_anchor)` with `G_anchor ~ ER(n, q)`.
    Anchor { p_max: f64, q: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmParams {
    pub communities: usize,
    /// Community sizes in id order. Balanced (sizes differ by at most one)
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(flatten)]
    pub probs: SbmProbs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SbmProbs {
    /// Intra-community `p`, inter-community `q`.
    Planted { p: f64, q: f64 },
    /// Full symmetric `q_ab` table.
    Table { q_table: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RggParams {
    pub p: f64,
    pub r: f64,
    /// Latent positions; sampled uniformly on the unit square when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
}

fn check_prob(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidSpec(format!("{name} = {x} is not in [0, 1]")));
    }
    Ok(())
}

impl ModelSpec {
    pub fn er(n: usize, p: f64, s: f64, m: usize, seed: u64) -> Self {
        ModelSpec {
            n,
            kind: ModelKind::Er { p },
            s,
            m,
            seed,
        }
    }

    /// Balanced planted-partition SBM.
    pub fn sbm_balanced(n: usize, communities: usize, p: f64, q: f64, s: f64, m: usize, seed: u64) -> Self {
        ModelSpec {
            n,
            kind: ModelKind::Sbm(SbmParams {
                communities,
                sizes: None,
                probs: SbmProbs::Planted { p, q },
            }),
            s,
            m,
            seed,
        }
    }

    pub fn rgg(n: usize, p: f64, r: f64, s: f64, m: usize, seed: u64) -> Self {
        ModelSpec {
            n,
            kind: ModelKind::Rgg(RggParams { p, r, points: None }),
            s,
            m,
            seed,
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let spec: ModelSpec = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.into(),
            source,
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_m(&self, m: usize) -> Self {
        ModelSpec { m, ..self.clone() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ModelSpec { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if !(self.s > 0.0 && self.s <= 1.0) {
            return Err(Error::InvalidSpec(format!("s = {} is not in (0, 1]", self.s)));
        }
        if self.m < 2 {
            return Err(Error::InvalidSpec(format!("m = {} must be at least 2", self.m)));
        }
        if self.m > 64 {
            return Err(Error::InvalidSpec(format!("m = {} exceeds the supported 64 graphs", self.m)));
        }
        match &self.kind {
            ModelKind::Er { p } => check_prob("p", *p)?,
            ModelKind::Sbm(sbm) => {
                if sbm.communities == 0 || sbm.communities > n.max(1) {
                    return Err(Error::InvalidSpec(format!(
                        "communities = {} must be in 1..={n}",
                        sbm.communities
                    )));
                }
                if let Some(sizes) = &sbm.sizes {
                    if sizes.len() != sbm.communities || sizes.iter().sum::<usize>() != n {
                        return Err(Error::InvalidSpec(format!(
                            "sizes must have {} entries summing to n = {n}",
                            sbm.communities
                        )));
                    }
                }
                match &sbm.probs {
                    SbmProbs::Planted { p, q } => {
                        check_prob("p", *p)?;
                        check_prob("q", *q)?;
                    }
                    SbmProbs::Table { q_table } => {
                        let c = sbm.communities;
                        if q_table.len() != c || q_table.iter().any(|row| row.len() != c) {
                            return Err(Error::InvalidSpec(format!("q_table must be {c} x {c}")));
                        }
                        for a in 0..c {
                            for b in 0..c {
                                check_prob("q_ab", q_table[a][b])?;
                                if q_table[a][b] != q_table[b][a] {
                                    return Err(Error::InvalidSpec("q_table must be symmetric".into()));
                                }
                            }
                        }
                    }
                }
            }
            ModelKind::Rgg(rgg) => {
                check_prob("p", rgg.p)?;
                if !(rgg.r >= 0.0 && rgg.r.is_finite()) {
                    return Err(Error::InvalidSpec(format!("r = {} must be finite and >= 0", rgg.r)));
                }
                if let Some(points) = &rgg.points {
                    if points.len() != n {
                        return Err(Error::InvalidSpec(format!(
                            "{} points given for n = {n}",
                            points.len()
                        )));
                    }
                    if points.iter().flatten().any(|x| !x.is_finite()) {
                        return Err(Error::InvalidSpec("points must be finite".into()));
                    }
                }
            }
            ModelKind::Clg { weights } => {
                if weights.len() != n {
                    return Err(Error::InvalidSpec(format!(
                        "{} weights given for n = {n}",
                        weights.len()
                    )));
                }
                if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
                    return Err(Error::InvalidSpec("CLG weights must be positive and finite".into()));
                }
                let bound = weights.iter().sum::<f64>().sqrt();
                if let Some(w) = weights.iter().find(|&&w| w > bound) {
                    return Err(Error::InvalidSpec(format!(
                        "CLG weight {w} exceeds sqrt(sum of weights) = {bound}"
                    )));
                }
            }
            ModelKind::Dense { p } => {
                if p.len() != n || p.iter().any(|row| row.len() != n) {
                    return Err(Error::InvalidSpec(format!("dense P must be {n} x {n}")));
                }
                for i in 0..n {
                    if p[i][i] != 0.0 {
                        return Err(Error::InvalidSpec(format!("P[{i}][{i}] must be zero")));
                    }
                    for j in 0..n {
                        check_prob("p_ij", p[i][j])?;
                        if p[i][j] != p[j][i] {
                            return Err(Error::InvalidSpec(format!("P not symmetric at ({i}, {j})")));
                        }
                    }
                }
            }
            ModelKind::Anchor { p_max, q } => {
                check_prob("p_max", *p_max)?;
                check_prob("q", *q)?;
            }
        }
        Ok(())
    }
}
