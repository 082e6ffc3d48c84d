//! Pairwise matchings, transitive-closure boosting and scoring.
//!
//! Graph indices are 0-based; a matching stored for the pair `(i, j)` with
//! `i < j` maps graph `i` labels to graph `j` labels.

use std::collections::VecDeque;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graphs::{MatchProfile, NodeId, PartialMatching};
use crate::kcore::{core_mask, simulated_kcore_match};
use crate::oracle::{kcore_estimator_bruteforce, CapPolicy};
use crate::sampling::CorrelatedFamily;

fn pair_slot(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

/// One matching per unordered pair of graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseMatchings {
    n: usize,
    m: usize,
    table: Vec<PartialMatching>,
}

impl PairwiseMatchings {
    pub fn empty(n: usize, m: usize) -> Self {
        PairwiseMatchings {
            n,
            m,
            table: vec![PartialMatching::new(n); m * (m - 1) / 2],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let m = self.m;
        (0..m).flat_map(move |i| (i + 1..m).map(move |j| (i, j)))
    }

    /// Matching from graph `i` to graph `j`, `i < j`.
    pub fn get(&self, i: usize, j: usize) -> &PartialMatching {
        &self.table[pair_slot(self.m, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, matching: PartialMatching) -> Result<()> {
        if matching.n() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: matching.n(),
            });
        }
        if !(i < j && j < self.m) {
            return Err(Error::InvalidArgument(format!("pair ({i}, {j}) needs i < j < {}", self.m)));
        }
        self.table[pair_slot(self.m, i, j)] = matching;
        Ok(())
    }

    /// Image of label `x` of graph `from` in graph `to`, in either direction.
    #[inline]
    pub fn follow(&self, from: usize, to: usize, x: usize) -> Option<NodeId> {
        if from < to {
            self.get(from, to).get(x)
        } else {
            self.get(to, from).preimage(x)
        }
    }

    /// Matching from graph `i` to graph `j` for any `i != j`.
    pub fn directed(&self, i: usize, j: usize) -> PartialMatching {
        if i < j {
            self.get(i, j).clone()
        } else {
            self.get(j, i).inverse()
        }
    }

    /// Applies the single forced completion to every pair; returns the number
    /// of pairs completed.
    pub fn complete_by_elimination(&mut self) -> usize {
        self.table.iter_mut().map(|t| t.complete_by_elimination() as usize).sum()
    }

    pub fn profile(&self) -> MatchProfile {
        MatchProfile {
            matchings: (1..self.m).map(|j| self.get(0, j).clone()).collect(),
        }
    }
}

/// Pairwise estimator used in the first step of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matcher {
    /// SIMULATION ONLY: matches the true intersection k-core using the
    /// ground truth.
    Simulated,
    /// Exhaustive k-core estimator over all `n!` bijections, `n <= cap`.
    BruteForce { cap: usize },
}

pub fn pairwise_match_all(
    family: &CorrelatedFamily,
    matcher: Matcher,
    k: usize,
    exec: Execution,
) -> Result<PairwiseMatchings> {
    let (n, m) = (family.n(), family.m());
    if let Matcher::BruteForce { cap } = matcher {
        if n > cap {
            return Err(Error::CapExceeded {
                what: "nodes for brute-force matching",
                limit: cap,
                got: n,
            });
        }
    }
    let mut out = PairwiseMatchings::empty(n, m);
    let pairs: Vec<(usize, usize)> = out.pairs().collect();
    let results = exec.map_slice(&pairs, |&(i, j)| match matcher {
        Matcher::Simulated => simulated_kcore_match(family, i, j, k),
        Matcher::BruteForce { .. } => kcore_estimator_bruteforce(
            &family.observed[i],
            &family.observed[j],
            k,
            CapPolicy::IUnderstandTheCost,
            Execution::Sequential,
        )
        .map(|est| est.matching),
    });
    for (&(i, j), r) in pairs.iter().zip(results) {
        out.set(i, j, r?)?;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ClosureOutput {
    pub before: PairwiseMatchings,
    pub pair_extended: PairwiseMatchings,
    /// `(pi_12, .., pi_1m)` anchored at graph 0.
    pub profile: MatchProfile,
    /// Traversals that reached a graph with a second, different label, plus
    /// extensions skipped because their target was already taken.
    pub conflicts: usize,
}

/// Labels reached from `(source, x)` by breadth-first traversal over graphs,
/// neighbors in index order, following matchings in both directions. The
/// first label found for a graph wins; later disagreeing labels count as
/// conflicts.
fn traverse(pm: &PairwiseMatchings, source: usize, x: usize, labels: &mut [Option<NodeId>]) -> usize {
    let m = pm.m();
    labels.fill(None);
    labels[source] = Some(x as NodeId);
    let mut queue = VecDeque::with_capacity(m);
    queue.push_back(source);
    let mut conflicts = 0;
    while let Some(g) = queue.pop_front() {
        let here = labels[g].expect("queued graphs are labeled") as usize;
        for h in 0..m {
            if h == g {
                continue;
            }
            if let Some(y) = pm.follow(g, h, here) {
                match labels[h] {
                    None => {
                        labels[h] = Some(y);
                        queue.push_back(h);
                    }
                    Some(prev) if prev != y => conflicts += 1,
                    Some(_) => {}
                }
            }
        }
    }
    conflicts
}

/// Extends every pair `(i, j)` by the labels reachable from graph `i`.
pub fn transitive_close(pm: &PairwiseMatchings, exec: Execution) -> ClosureOutput {
    let (n, m) = (pm.n(), pm.m());
    let mut extended = pm.clone();
    let mut conflicts = 0;
    for i in 0..m - 1 {
        let reached: Vec<(Vec<Option<NodeId>>, usize)> = exec.map_range(n, |x| {
            let mut labels = vec![None; m];
            let c = traverse(pm, i, x, &mut labels);
            (labels, c)
        });
        for (x, (labels, c)) in reached.iter().enumerate() {
            conflicts += c;
            for j in i + 1..m {
                if let Some(y) = labels[j] {
                    let slot = pair_slot(m, i, j);
                    if extended.table[slot].insert(x, y as usize).is_err() {
                        conflicts += 1;
                    }
                }
            }
        }
    }
    let profile = extended.profile();
    ClosureOutput {
        before: pm.clone(),
        pair_extended: extended,
        profile,
        conflicts,
    }
}

/// Per-node `m`-vertex graph over graph indices as adjacency bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityGraph {
    adjacency: Vec<u64>,
}

impl TransitivityGraph {
    pub fn empty(m: usize) -> Self {
        assert!(m <= 64, "at most 64 graphs");
        TransitivityGraph { adjacency: vec![0; m] }
    }

    pub fn m(&self) -> usize {
        self.adjacency.len()
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        self.adjacency[i] |= 1 << j;
        self.adjacency[j] |= 1 << i;
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i] >> j & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Bitmask of graphs reachable from `g`.
    pub fn component(&self, g: usize) -> u64 {
        let mut seen = 1u64 << g;
        let mut frontier = seen;
        while frontier != 0 {
            let h = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adjacency[h] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    pub fn same_component(&self, i: usize, j: usize) -> bool {
        self.component(i) >> j & 1 == 1
    }

    pub fn is_connected(&self) -> bool {
        let m = self.m();
        m == 0 || self.component(0).count_ones() as usize == m
    }

    /// Number of edges with exactly one endpoint in the set `u` (a bitmask).
    pub fn cut_count(&self, u: u64) -> usize {
        (0..self.m())
            .filter(|&i| u >> i & 1 == 1)
            .map(|i| (self.adjacency[i] & !u).count_ones() as usize)
            .sum()
    }

    /// Ground-truth variant for every parent node: `{i, j}` is an edge of
    /// `H(v)` iff `v` is in `core_k(G'_i ∧ G'_j)`.
    pub fn ground_truth_all(family: &CorrelatedFamily, k: usize, exec: Execution) -> Result<Vec<TransitivityGraph>> {
        let m = family.m();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        let masks = exec.map_slice(&pairs, |&(i, j)| {
            family.children_aligned[i]
                .intersect(&family.children_aligned[j])
                .map(|g| core_mask(&g, k))
        });
        let mut out = vec![TransitivityGraph::empty(m); family.n()];
        for (&(i, j), mask) in pairs.iter().zip(masks) {
            for (v, _) in mask?.iter().enumerate().filter(|(_, &a)| a) {
                out[v].add_edge(i, j);
            }
        }
        Ok(out)
    }

    /// Observed variant for parent node `v`: `{i, j}` is an edge iff the
    /// label of `v` in graph `i` lies in the domain of the `(i, j)` matching.
    pub fn observed(pm: &PairwiseMatchings, family: &CorrelatedFamily, v: usize) -> TransitivityGraph {
        let mut h = TransitivityGraph::empty(pm.m());
        for (i, j) in pm.pairs() {
            if pm.get(i, j).get(family.label_in(i, v) as usize).is_some() {
                h.add_edge(i, j);
            }
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairScore {
    pub i: usize,
    pub j: usize,
    pub matched_pre: f64,
    pub matched_post: f64,
    /// `None` when nothing is matched.
    pub correct_pre: Option<f64>,
    pub correct_post: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Score {
    pub pairs: Vec<PairScore>,
    pub exact_all: bool,
    pub conflicts: usize,
}

impl Score {
    pub fn mean_matched(&self, post: bool) -> f64 {
        let total: f64 = self
            .pairs
            .iter()
            .map(|p| if post { p.matched_post } else { p.matched_pre })
            .sum();
        total / self.pairs.len().max(1) as f64
    }
}

fn correct_fraction(matching: &PartialMatching, truth: &crate::graphs::Permutation) -> Option<f64> {
    if matching.is_empty() {
        None
    } else {
        Some(matching.count_agreeing(truth) as f64 / matching.len() as f64)
    }
}

pub fn score(out: &ClosureOutput, family: &CorrelatedFamily) -> Score {
    let n = out.before.n().max(1) as f64;
    let pairs = out
        .before
        .pairs()
        .map(|(i, j)| {
            let truth = family.truth_between(i, j);
            let (pre, post) = (out.before.get(i, j), out.pair_extended.get(i, j));
            PairScore {
                i,
                j,
                matched_pre: pre.len() as f64 / n,
                matched_post: post.len() as f64 / n,
                correct_pre: correct_fraction(pre, &truth),
                correct_post: correct_fraction(post, &truth),
            }
        })
        .collect();
    let exact_all = out.profile.matchings.iter().enumerate().all(|(idx, mu)| {
        mu.is_complete() && mu.count_agreeing(&family.truth_between(0, idx + 1)) == mu.len()
    });
    Score {
        pairs,
        exact_all,
        conflicts: out.conflicts,
    }
}

/// Completes each profile entry missing exactly one node.
pub fn complete_by_elimination(profile: &MatchProfile) -> MatchProfile {
    let mut out = profile.clone();
    out.complete_by_elimination();
    out
}

#[derive(Serialize)]
struct PairExport<'a> {
    i: usize,
    j: usize,
    pairs: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<&'a PairScore>,
}

/// Writes the profile as JSON: `{"n", "m", "profile": [{"i", "j", "pairs"}],
/// "stats": {..}}` with 1-based graph indices.
pub fn export_profile(out: &ClosureOutput, stats: Option<&Score>, path: &Path) -> Result<()> {
    let entries: Vec<PairExport> = out
        .profile
        .matchings
        .iter()
        .enumerate()
        .map(|(idx, mu)| PairExport {
            i: 1,
            j: idx + 2,
            pairs: mu.pairs().map(|(s, t)| [s, t]).collect(),
            stats: stats.and_then(|s| s.pairs.iter().find(|p| p.i == 0 && p.j == idx + 1)),
        })
        .collect();
    let doc = serde_json::json!({
        "n": out.before.n(),
        "m": out.before.m(),
        "profile": entries,
        "stats": stats.map(|s| serde_json::json!({
            "exact_all": s.exact_all,
            "conflicts": s.conflicts,
            "mean_matched_pre": s.mean_matched(false),
            "mean_matched_post": s.mean_matched(true),
        })),
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|source| Error::Json {
        path: path.into(),
        source,
    })?;
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::graphs::Permutation;
    use crate::kcore::core_peel;
    use crate::sampling::{sample_family, ModelSpec};

    fn table(n: usize, m: usize, entries: &[(usize, usize, &[(usize, usize)])]) -> PairwiseMatchings {
        let mut pm = PairwiseMatchings::empty(n, m);
        for &(i, j, pairs) in entries {
            pm.set(i, j, PartialMatching::from_pairs(n, pairs.iter().copied()).unwrap()).unwrap();
        }
        pm
    }

    #[test]
    fn single_composition() {
        let pm = table(4, 3, &[(0, 1, &[(2, 3)]), (1, 2, &[(3, 0)])]);
        let out = transitive_close(&pm, Execution::Sequential);
        assert_eq!(out.pair_extended.get(0, 2).get(2), Some(0));
        assert_eq!(out.conflicts, 0);
    }

    #[test]
    fn empty_tables_stay_empty() {
        let pm = PairwiseMatchings::empty(5, 4);
        let out = transitive_close(&pm, Execution::default());
        assert_eq!(out.pair_extended, pm);
        assert!(out.profile.matchings.iter().all(PartialMatching::is_empty));
    }

    #[test]
    fn star_reaches_every_pair() {
        let m = 5;
        let entries: Vec<(usize, usize, Vec<(usize, usize)>)> = (1..m).map(|j| (0, j, vec![(0, j)])).collect();
        let refs: Vec<(usize, usize, &[(usize, usize)])> =
            entries.iter().map(|(i, j, p)| (*i, *j, p.as_slice())).collect();
        let pm = table(6, m, &refs);
        let out = transitive_close(&pm, Execution::Sequential);
        for (i, j) in pm.pairs() {
            if i > 0 {
                assert_eq!(out.pair_extended.get(i, j).get(i), Some(j as NodeId));
            }
            assert_eq!(out.pair_extended.get(i, j).len(), 1);
        }
    }

    #[test]
    fn conflicting_paths_are_counted() {
        // 0 -> 1 -> 2 gives 0 -> 2, but the direct entry says 0 -> 1
        let pm = table(3, 3, &[(0, 1, &[(0, 0)]), (1, 2, &[(0, 2)]), (0, 2, &[(0, 1)])]);
        let out = transitive_close(&pm, Execution::Sequential);
        assert!(out.conflicts > 0);
        assert_eq!(out.pair_extended.get(0, 2).get(0), Some(1));
    }

    #[test]
    fn matcher_examples() {
        let fam = sample_family(&ModelSpec::er(300, 0.05, 1.0, 2, 1)).unwrap();
        let pm = pairwise_match_all(&fam, Matcher::Simulated, 3, Execution::default()).unwrap();
        assert_eq!(pm.get(0, 1), &simulated_kcore_match(&fam, 0, 1, 3).unwrap());
        assert!(pairwise_match_all(&fam, Matcher::BruteForce { cap: 8 }, 3, Execution::default()).is_err());

        let tiny = sample_family(&ModelSpec::er(6, 0.6, 0.9, 3, 2)).unwrap();
        let bf = pairwise_match_all(&tiny, Matcher::BruteForce { cap: 8 }, 1, Execution::Sequential).unwrap();
        for (i, j) in bf.pairs() {
            let est = kcore_estimator_bruteforce(
                &tiny.observed[i],
                &tiny.observed[j],
                1,
                CapPolicy::Enforce,
                Execution::Sequential,
            )
            .unwrap();
            assert_eq!(bf.get(i, j), &est.matching);
        }
    }

    #[test]
    fn simulated_domains_are_intersection_cores() {
        let fam = sample_family(&ModelSpec::er(2000, 0.01, 0.7, 4, 6)).unwrap();
        let pm = pairwise_match_all(&fam, Matcher::Simulated, 4, Execution::default()).unwrap();
        assert_eq!(pm.pairs().count(), 6);
        for (i, j) in pm.pairs() {
            let both = fam.children_aligned[i].intersect(&fam.children_aligned[j]).unwrap();
            assert_eq!(pm.get(i, j).len(), core_peel(&both, 4).len());
            assert_eq!(pm.get(i, j).count_agreeing(&fam.truth_between(i, j)), pm.get(i, j).len());
        }
    }

    #[test]
    fn closure_matches_transitivity_connectivity() {
        let fam = sample_family(&ModelSpec::er(1500, 0.004, 0.7, 5, 12)).unwrap();
        let pm = pairwise_match_all(&fam, Matcher::Simulated, 2, Execution::default()).unwrap();
        let out = transitive_close(&pm, Execution::default());
        assert_eq!(out.conflicts, 0);
        let truth_h = TransitivityGraph::ground_truth_all(&fam, 2, Execution::default()).unwrap();
        let mut partial = 0;
        for v in 0..fam.n() {
            let h = TransitivityGraph::observed(&pm, &fam, v);
            assert_eq!(h, truth_h[v]);
            let full = pm
                .pairs()
                .all(|(i, j)| out.pair_extended.get(i, j).get(fam.label_in(i, v) as usize).is_some());
            assert_eq!(full, h.is_connected());
            for (i, j) in pm.pairs() {
                let hit = out.pair_extended.get(i, j).get(fam.label_in(i, v) as usize).is_some();
                assert_eq!(hit, h.same_component(i, j));
            }
            partial += usize::from(!h.is_connected() && h.edge_count() > 0);
        }
        assert!(partial > 0, "instance should exercise partially connected H(v)");
        let sc = score(&out, &fam);
        for p in &sc.pairs {
            assert!(p.matched_post >= p.matched_pre);
            assert!(p.correct_post.is_none_or(|c| c == 1.0));
        }
    }

    #[test]
    fn full_subsampling_zero_core_is_exact() {
        let fam = sample_family(&ModelSpec::er(100, 0.1, 1.0, 4, 3)).unwrap();
        let h = TransitivityGraph::ground_truth_all(&fam, 0, Execution::Sequential).unwrap();
        assert!(h.iter().all(|t| t.edge_count() == 6));
        let pm = pairwise_match_all(&fam, Matcher::Simulated, 0, Execution::Sequential).unwrap();
        let out = transitive_close(&pm, Execution::Sequential);
        let sc = score(&out, &fam);
        assert!(sc.exact_all);
        assert!(sc.pairs.iter().all(|p| p.matched_post == 1.0 && p.correct_post == Some(1.0)));
    }

    #[test]
    fn empty_profile_scores_zero() {
        let fam = sample_family(&ModelSpec::er(50, 0.0, 0.5, 3, 3)).unwrap();
        let out = transitive_close(&PairwiseMatchings::empty(50, 3), Execution::Sequential);
        let sc = score(&out, &fam);
        assert!(!sc.exact_all);
        assert!(sc.pairs.iter().all(|p| p.matched_post == 0.0 && p.correct_post.is_none()));
        assert_eq!(TransitivityGraph::observed(&out.before, &fam, 4).edge_count(), 0);
    }

    #[test]
    fn elimination_examples() {
        let n = 5;
        let pi = Permutation::from_vec(vec![1, 2, 3, 4, 0]).unwrap();
        let missing_one = PartialMatching::from_pairs(n, (0..4).map(|v| (v, pi.apply(v) as usize))).unwrap();
        let missing_two = PartialMatching::from_pairs(n, (0..3).map(|v| (v, pi.apply(v) as usize))).unwrap();
        let full = PartialMatching::from_permutation(&pi);
        let profile = MatchProfile {
            matchings: vec![missing_one, missing_two.clone(), full.clone()],
        };
        let done = complete_by_elimination(&profile);
        assert_eq!(done.matchings[0], full);
        assert_eq!(done.matchings[1], missing_two);
        assert_eq!(done.matchings[2], full);
    }

    #[test]
    fn cut_counts() {
        let mut h = TransitivityGraph::empty(4);
        h.add_edge(0, 1);
        h.add_edge(1, 2);
        h.add_edge(2, 3);
        assert!(h.is_connected());
        assert_eq!(h.cut_count(0b0011), 1);
        assert_eq!(h.cut_count(0b0101), 3);
        assert_eq!(h.cut_count(0), 0);
    }

    #[test]
    fn export_writes_one_based_pairs() {
        let fam = sample_family(&ModelSpec::er(60, 0.2, 0.8, 3, 3)).unwrap();
        let pm = pairwise_match_all(&fam, Matcher::Simulated, 2, Execution::default()).unwrap();
        let out = transitive_close(&pm, Execution::default());
        let sc = score(&out, &fam);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("profile.json");
        export_profile(&out, Some(&sc), &path).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(doc["profile"][1]["j"], 3);
        assert_eq!(doc["profile"][0]["pairs"].as_array().unwrap().len(), out.profile.matchings[0].len());
    }

    /// Random correct (truth-consistent) pairwise tables.
    fn arb_consistent() -> impl Strategy<Value = (PairwiseMatchings, Vec<Permutation>)> {
        (3usize..6, 4usize..12, any::<u64>(), 0.0f64..1.0).prop_map(|(m, n, seed, keep)| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let labels: Vec<Permutation> = (0..m).map(|_| Permutation::random(n, &mut rng)).collect();
            let mut pm = PairwiseMatchings::empty(n, m);
            for i in 0..m {
                for j in i + 1..m {
                    let mut mu = PartialMatching::new(n);
                    for v in 0..n {
                        if rng.random::<f64>() < keep {
                            mu.insert(labels[i].apply(v) as usize, labels[j].apply(v) as usize).unwrap();
                        }
                    }
                    pm.set(i, j, mu).unwrap();
                }
            }
            (pm, labels)
        })
    }

    proptest! {
        #[test]
        fn closure_properties((pm, labels) in arb_consistent()) {
            let out = transitive_close(&pm, Execution::Sequential);
            prop_assert_eq!(out.conflicts, 0);
            for (i, j) in pm.pairs() {
                let ext = out.pair_extended.get(i, j);
                prop_assert!(pm.get(i, j).pairs().all(|(s, t)| ext.get(s) == Some(t as NodeId)));
                for (s, t) in ext.pairs() {
                    let v = labels[i].inverse().apply(s);
                    prop_assert_eq!(labels[j].apply(v as usize) as usize, t);
                }
                // the reverse traversal reaches exactly the inverse pairs
                let mut buf = vec![None; pm.m()];
                for (s, t) in ext.pairs() {
                    traverse(&pm, j, t, &mut buf);
                    prop_assert_eq!(buf[i], Some(s as NodeId));
                }
            }
            let again = transitive_close(&out.pair_extended, Execution::Sequential);
            prop_assert_eq!(again.pair_extended, out.pair_extended);
        }

        #[test]
        fn strategies_agree((pm, _) in arb_consistent()) {
            prop_assert_eq!(
                transitive_close(&pm, Execution::Sequential).pair_extended,
                transitive_close(&pm, Execution::Parallel).pair_extended
            );
        }
    }
}
