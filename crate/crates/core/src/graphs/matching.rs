use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{NodeId, Permutation};

const UNMAPPED: NodeId = NodeId::MAX;

/// Injective partial map from source labels `0..n` to target labels `0..n`.
///
/// Both directions are stored densely so that closure traversal can follow a
/// matching or its inverse in O(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMatching {
    forward: Vec<NodeId>,
    backward: Vec<NodeId>,
    len: usize,
}

impl PartialMatching {
    pub fn new(n: usize) -> Self {
        PartialMatching {
            forward: vec![UNMAPPED; n],
            backward: vec![UNMAPPED; n],
            len: 0,
        }
    }

    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = PartialMatching::new(n);
        for (s, t) in pairs {
            m.insert(s, t)?;
        }
        Ok(m)
    }

    pub fn from_permutation(pi: &Permutation) -> Self {
        let n = pi.len();
        let mut m = PartialMatching::new(n);
        for v in 0..n {
            m.forward[v] = pi.apply(v);
            m.backward[pi.apply(v) as usize] = v as NodeId;
        }
        m.len = n;
        m
    }

    /// Size of the label universe.
    pub fn n(&self) -> usize {
        self.forward.len()
    }

    /// Number of matched pairs.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_complete(&self) -> bool {
        self.len == self.n()
    }

    /// Adds `source -> target`. Re-inserting an existing pair is a no-op;
    /// anything that would break injectivity or functionality is an error.
    pub fn insert(&mut self, source: usize, target: usize) -> Result<()> {
        let n = self.n();
        if source >= n {
            return Err(Error::NodeOutOfRange { node: source, n });
        }
        if target >= n {
            return Err(Error::NodeOutOfRange { node: target, n });
        }
        match (self.forward[source], self.backward[target]) {
            (UNMAPPED, UNMAPPED) => {
                self.forward[source] = target as NodeId;
                self.backward[target] = source as NodeId;
                self.len += 1;
                Ok(())
            }
            (t, _) if t as usize == target => Ok(()),
            (UNMAPPED, s) => Err(Error::NotInjective(format!(
                "target {target} already matched from {s}, cannot match from {source}"
            ))),
            (t, _) => Err(Error::NotInjective(format!(
                "source {source} already matched to {t}, cannot match to {target}"
            ))),
        }
    }

    #[inline]
    pub fn get(&self, source: usize) -> Option<NodeId> {
        match self.forward.get(source) {
            Some(&t) if t != UNMAPPED => Some(t),
            _ => None,
        }
    }

    #[inline]
    pub fn preimage(&self, target: usize) -> Option<NodeId> {
        match self.backward.get(target) {
            Some(&s) if s != UNMAPPED => Some(s),
            _ => None,
        }
    }

    /// Matched pairs in ascending source order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != UNMAPPED)
            .map(|(s, &t)| (s, t as usize))
    }

    pub fn domain(&self) -> Vec<usize> {
        self.pairs().map(|(s, _)| s).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        self.backward
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != UNMAPPED)
            .map(|(t, _)| t)
            .collect()
    }

    pub fn inverse(&self) -> PartialMatching {
        PartialMatching {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
            len: self.len,
        }
    }

    /// `then ∘ self`, defined exactly where `self(v)` is defined and `then`
    /// is defined at `self(v)`.
    pub fn then(&self, then: &PartialMatching) -> PartialMatching {
        let mut out = PartialMatching::new(self.n());
        for (s, t) in self.pairs() {
            if let Some(u) = then.get(t) {
                if (u as usize) < out.n() {
                    // injective ∘ injective is injective
                    out.insert(s, u as usize).expect("composition of injective maps");
                }
            }
        }
        out
    }

    /// Number of matched pairs that agree with `truth`.
    pub fn count_agreeing(&self, truth: &Permutation) -> usize {
        self.pairs()
            .filter(|&(s, t)| s < truth.len() && truth.apply(s) as usize == t)
            .count()
    }

    /// The complete matching as a permutation, if every source is matched.
    pub fn to_permutation(&self) -> Option<Permutation> {
        if !self.is_complete() {
            return None;
        }
        Permutation::from_vec(self.forward.clone()).ok()
    }

    /// Adds the forced pair when exactly one source is unmatched (and hence
    /// exactly one target is unused). Returns whether a pair was added.
    pub fn complete_by_elimination(&mut self) -> bool {
        if self.len + 1 != self.n() {
            return false;
        }
        let source = self.forward.iter().position(|&t| t == UNMAPPED);
        let target = self.backward.iter().position(|&s| s == UNMAPPED);
        match (source, target) {
            (Some(s), Some(t)) => self.insert(s, t).is_ok(),
            _ => false,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatchingRepr {
    n: usize,
    pairs: Vec<[usize; 2]>,
}

impl Serialize for PartialMatching {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatchingRepr {
            n: self.n(),
            pairs: self.pairs().map(|(s, t)| [s, t]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PartialMatching {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatchingRepr::deserialize(deserializer)?;
        PartialMatching::from_pairs(repr.n, repr.pairs.into_iter().map(|[s, t]| (s, t)))
            .map_err(serde::de::Error::custom)
    }
}

/// The reference-anchored output `(pi_12, ..., pi_1m)`: entry `j - 1` maps
/// labels of graph 0 to labels of graph `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchProfile {
    pub matchings: Vec<PartialMatching>,
}

impl MatchProfile {
    /// Matching from graph 0 to graph `j` (`j >= 1`).
    pub fn to_graph(&self, j: usize) -> &PartialMatching {
        &self.matchings[j - 1]
    }

    /// Number of graphs covered, including the reference.
    pub fn graph_count(&self) -> usize {
        self.matchings.len() + 1
    }

    pub fn is_complete(&self) -> bool {
        self.matchings.iter().all(PartialMatching::is_complete)
    }

    pub fn complete_by_elimination(&mut self) -> usize {
        self.matchings
            .iter_mut()
            .map(|m| m.complete_by_elimination() as usize)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn identity_on(n: usize, dom: &[usize]) -> PartialMatching {
        PartialMatching::from_pairs(n, dom.iter().map(|&v| (v, v))).unwrap()
    }

    #[test]
    fn insert_enforces_injectivity() {
        let mut m = PartialMatching::new(4);
        m.insert(0, 1).unwrap();
        m.insert(0, 1).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m.insert(0, 2).is_err());
        assert!(m.insert(3, 1).is_err());
        assert!(m.insert(4, 0).is_err());
        assert_eq!(m.preimage(1), Some(0));
        assert_eq!(m.get(2), None);
    }

    #[test]
    fn compose_examples() {
        let a = identity_on(3, &[0, 1]);
        let b = identity_on(3, &[1, 2]);
        assert_eq!(a.then(&b), identity_on(3, &[1]));

        let f = PartialMatching::from_pairs(5, [(0, 3), (2, 4), (4, 0)]).unwrap();
        assert_eq!(f.then(&f.inverse()), identity_on(5, &[0, 2, 4]));
    }

    #[test]
    fn elimination_fills_only_forced_pairs() {
        let mut m = PartialMatching::from_pairs(3, [(0, 2), (2, 1)]).unwrap();
        assert!(m.complete_by_elimination());
        assert_eq!(m.get(1), Some(0));
        assert!(m.is_complete());
        assert!(!m.complete_by_elimination());

        let mut two_missing = PartialMatching::from_pairs(3, [(0, 0)]).unwrap();
        let before = two_missing.clone();
        assert!(!two_missing.complete_by_elimination());
        assert_eq!(two_missing, before);
    }

    #[test]
    fn serde_round_trip_rejects_non_injective() {
        let m = PartialMatching::from_pairs(4, [(0, 3), (1, 2)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n":4,"pairs":[[0,3],[1,2]]}"#);
        assert_eq!(serde_json::from_str::<PartialMatching>(&s).unwrap(), m);
        assert!(serde_json::from_str::<PartialMatching>(r#"{"n":4,"pairs":[[0,3],[1,3]]}"#).is_err());
    }

    fn arb_matching(n: usize) -> impl Strategy<Value = PartialMatching> {
        (
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(targets, keep)| {
                PartialMatching::from_pairs(
                    n,
                    targets
                        .into_iter()
                        .enumerate()
                        .zip(keep)
                        .filter(|(_, k)| *k)
                        .map(|(p, _)| p),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn compose_matches_pointwise_evaluation(a in arb_matching(12), b in arb_matching(12)) {
            let c = a.then(&b);
            for v in 0..12 {
                let expected = a.get(v).and_then(|x| b.get(x as usize));
                prop_assert_eq!(c.get(v), expected);
            }
        }

        #[test]
        fn compose_is_associative(a in arb_matching(10), b in arb_matching(10), c in arb_matching(10)) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        }
    }
}
