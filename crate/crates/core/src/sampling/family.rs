use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graphs::{save_edge_list, Graph, NodeId, Permutation};
use crate::sampling::params::{build_parameter_matrix, subsample, Latent, ParameterMatrix};
use crate::sampling::seed;
use crate::sampling::spec::ModelSpec;

/// Parent graph, `m` subsampled children and their hidden relabelings.
///
/// Graph indices are 0-based: graph `0` is the reference whose labels equal
/// the parent's, and `truth[k - 1]` maps parent labels to the labels of
/// graph `k` for `k >= 1`.
#[derive(Debug, Clone)]
pub struct CorrelatedFamily {
    pub spec: ModelSpec,
    pub parent: Graph,
    pub children_aligned: Vec<Graph>,
    pub truth: Vec<Permutation>,
    pub observed: Vec<Graph>,
    pub latent: Latent,
}

impl CorrelatedFamily {
    pub fn n(&self) -> usize {
        self.parent.n()
    }

    pub fn m(&self) -> usize {
        self.observed.len()
    }

    /// Label of parent node `v` in graph `k`.
    pub fn label_in(&self, k: usize, v: usize) -> NodeId {
        if k == 0 {
            v as NodeId
        } else {
            self.truth[k - 1].apply(v)
        }
    }

    /// Parent node carrying label `x` in graph `k`.
    pub fn parent_of(&self, k: usize, x: usize) -> NodeId {
        if k == 0 {
            x as NodeId
        } else {
            self.truth[k - 1].inverse().apply(x)
        }
    }

    /// True correspondence from graph `i` labels to graph `j` labels.
    pub fn truth_between(&self, i: usize, j: usize) -> Permutation {
        let n = self.n();
        let to_parent = if i == 0 {
            Permutation::identity(n)
        } else {
            self.truth[i - 1].inverse()
        };
        if j == 0 {
            return to_parent;
        }
        to_parent.then(&self.truth[j - 1]).expect("family permutations share n")
    }

    /// Writes `parent.edges`, `graph_<k>.edges` (observed graphs, numbered
    /// from 1) and `truth.json`, which maps each child index `k >= 2` to the
    /// permutation array from graph 1 labels to graph `k` labels.
    pub fn export(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        save_edge_list(&self.parent, &dir.join("parent.edges"))?;
        for (k, g) in self.observed.iter().enumerate() {
            save_edge_list(g, &dir.join(format!("graph_{}.edges", k + 1)))?;
        }
        let truth: BTreeMap<String, &[NodeId]> = self
            .truth
            .iter()
            .enumerate()
            .map(|(k, pi)| ((k + 2).to_string(), pi.as_slice()))
            .collect();
        let doc = serde_json::json!({
            "spec": self.spec,
            "truth": truth,
            "latent": self.latent,
        });
        let path = dir.join("truth.json");
        let text = serde_json::to_string_pretty(&doc).map_err(|source| Error::Json {
            path: path.clone(),
            source,
        })?;
        std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
    }
}

/// Samples a family; every stream is derived from `spec.seed`.
pub fn sample_family(spec: &ModelSpec) -> Result<CorrelatedFamily> {
    let pm = build_parameter_matrix(spec)?;
    Ok(sample_family_with(spec, &pm))
}

/// Samples a family from a prebuilt parameter matrix.
pub fn sample_family_with(spec: &ModelSpec, pm: &ParameterMatrix) -> CorrelatedFamily {
    let mut rng = seed::stream(spec.seed, seed::PARENT);
    let parent = pm.sample(&mut rng);
    let children_aligned: Vec<Graph> = (0..spec.m)
        .map(|k| subsample(&parent, spec.s, &mut seed::child_stream(spec.seed, k)))
        .collect();
    let truth: Vec<Permutation> = (1..spec.m)
        .map(|k| Permutation::random(spec.n, &mut seed::perm_stream(spec.seed, k)))
        .collect();
    let observed = children_aligned
        .iter()
        .enumerate()
        .map(|(k, g)| {
            if k == 0 {
                g.clone()
            } else {
                g.relabel(&truth[k - 1]).expect("permutation sized to n")
            }
        })
        .collect();
    CorrelatedFamily {
        spec: spec.clone(),
        parent,
        children_aligned,
        truth,
        observed,
        latent: pm.latent(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::load_edge_list;

    fn edge_subset(a: &Graph, b: &Graph) -> bool {
        a.edges().all(|(i, j)| b.has_edge(i, j))
    }

    #[test]
    fn full_subsampling_copies_the_parent() {
        let fam = sample_family(&ModelSpec::er(300, 0.05, 1.0, 4, 3)).unwrap();
        for child in &fam.children_aligned {
            assert_eq!(child, &fam.parent);
        }
    }

    #[test]
    fn zero_probability_gives_empty_graphs() {
        let fam = sample_family(&ModelSpec::er(100, 0.0, 0.5, 3, 3)).unwrap();
        assert_eq!(fam.parent.edge_count(), 0);
        assert!(fam.observed.iter().all(|g| g.edge_count() == 0));
    }

    #[test]
    fn observed_graphs_are_relabeled_children() {
        let fam = sample_family(&ModelSpec::er(200, 0.05, 0.6, 4, 11)).unwrap();
        assert_eq!(fam.observed[0], fam.children_aligned[0]);
        for k in 0..4 {
            assert!(edge_subset(&fam.children_aligned[k], &fam.parent));
            for (u, v) in fam.children_aligned[k].edges() {
                assert!(fam.observed[k].has_edge(fam.label_in(k, u) as usize, fam.label_in(k, v) as usize));
            }
            assert_eq!(fam.observed[k].edge_count(), fam.children_aligned[k].edge_count());
        }
        for i in 0..4 {
            for j in 0..4 {
                let t = fam.truth_between(i, j);
                for v in 0..200 {
                    assert_eq!(t.apply(fam.label_in(i, v) as usize), fam.label_in(j, v));
                }
            }
        }
    }

    #[test]
    fn child_counts_are_binomial() {
        let fam = sample_family(&ModelSpec::er(2000, 0.01, 0.5, 3, 5)).unwrap();
        let e = fam.parent.edge_count() as f64;
        let sd = (e * 0.25).sqrt();
        for c in &fam.children_aligned {
            assert!((c.edge_count() as f64 - e * 0.5).abs() < 4.0 * sd);
        }
        let sd2 = (e * 0.25 * 0.75).sqrt();
        for i in 0..3 {
            for j in i + 1..3 {
                let both = fam.children_aligned[i].intersect(&fam.children_aligned[j]).unwrap();
                assert!((both.edge_count() as f64 - e * 0.25).abs() < 4.0 * sd2);
            }
        }
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let spec = ModelSpec::sbm_balanced(500, 3, 0.05, 0.01, 0.5, 3, 99);
        let a = sample_family(&spec).unwrap();
        let b = sample_family(&spec).unwrap();
        assert_eq!(a.parent, b.parent);
        assert_eq!(a.observed, b.observed);
        assert_eq!(a.truth, b.truth);
        let c = sample_family(&spec.with_seed(100)).unwrap();
        assert_ne!(a.parent, c.parent);
    }

    #[test]
    fn anchor_family_lives_on_the_anchor() {
        let mut spec = ModelSpec::er(150, 0.0, 0.7, 3, 8);
        spec.kind = crate::sampling::ModelKind::Anchor { p_max: 0.6, q: 0.2 };
        let fam = sample_family(&spec).unwrap();
        let Latent::Anchor(anchor) = &fam.latent else { panic!() };
        assert!(edge_subset(&fam.parent, anchor));
        let e = anchor.edge_count() as f64;
        assert!((fam.parent.edge_count() as f64 - 0.6 * e).abs() < 4.0 * (e * 0.24).sqrt());
    }

    #[test]
    fn export_round_trips() {
        let fam = sample_family(&ModelSpec::er(40, 0.2, 0.7, 3, 1)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        fam.export(dir.path()).unwrap();
        assert_eq!(load_edge_list(&dir.path().join("graph_2.edges")).unwrap(), fam.observed[1]);
        assert_eq!(load_edge_list(&dir.path().join("parent.edges")).unwrap(), fam.parent);
        let doc: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("truth.json")).unwrap()).unwrap();
        let arr: Vec<NodeId> = serde_json::from_value(doc["truth"]["3"].clone()).unwrap();
        assert_eq!(arr, fam.truth[1].as_slice());
        assert_eq!(doc["spec"]["kind"], "er");
    }
}
