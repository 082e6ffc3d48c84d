use crate::error::{Error, Result};
use crate::graphs::{NodeId, Permutation};

/// Undirected simple graph on nodes `0..n`.
///
/// Neighbor lists are sorted ascending with no duplicates and no self-loops,
/// which lets intersection and union run as linear merges. Graphs are never
/// mutated after construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).map(|j| j as NodeId).collect())
            .collect();
        Graph {
            adjacency,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) collapse into one; self-loops and out-of-range endpoints
    /// are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::NodeOutOfRange { node: u, n });
            }
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v as NodeId);
            adjacency[v].push(u as NodeId);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph::from_adjacency(adjacency))
    }

    /// Wraps adjacency lists that already satisfy the sortedness and symmetry
    /// invariants.
    pub(crate) fn from_adjacency(adjacency: Vec<Vec<NodeId>>) -> Self {
        let total: usize = adjacency.iter().map(Vec::len).sum();
        debug_assert!(total.is_multiple_of(2), "asymmetric adjacency");
        Graph {
            adjacency,
            edge_count: total / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edge query by binary search on the sorted neighbor list of the
    /// lower-degree endpoint.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() || u == v {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].binary_search(&(b as NodeId)).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, list)| {
            let start = list.partition_point(|&j| (j as usize) <= i);
            list[start..].iter().map(move |&j| (i, j as usize))
        })
    }

    /// Graph with the edges present in both `self` and `other`.
    pub fn intersect(&self, other: &Graph) -> Result<Graph> {
        self.check_same_size(other)?;
        let adjacency = self
            .adjacency
            .iter()
            .zip(&other.adjacency)
            .map(|(a, b)| merge_intersection(a, b))
            .collect();
        Ok(Graph::from_adjacency(adjacency))
    }

    /// Graph with the edges present in either `self` or `other`.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        self.check_same_size(other)?;
        let adjacency = self
            .adjacency
            .iter()
            .zip(&other.adjacency)
            .map(|(a, b)| merge_union(a, b))
            .collect();
        Ok(Graph::from_adjacency(adjacency))
    }

    /// The relabeled graph `G^pi`: `{i, j}` is an edge of `self` iff
    /// `{pi(i), pi(j)}` is an edge of the result.
    pub fn relabel(&self, pi: &Permutation) -> Result<Graph> {
        if pi.len() != self.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: pi.len(),
            });
        }
        let mut adjacency = vec![Vec::new(); self.n()];
        for (v, list) in self.adjacency.iter().enumerate() {
            let mut mapped: Vec<NodeId> = list.iter().map(|&u| pi.apply(u as usize)).collect();
            mapped.sort_unstable();
            adjacency[pi.apply(v) as usize] = mapped;
        }
        Ok(Graph::from_adjacency(adjacency))
    }

    /// Verifies every structural invariant. Meant for tests and debug checks.
    pub fn is_well_formed(&self) -> bool {
        let n = self.n();
        let mut total = 0;
        for (i, list) in self.adjacency.iter().enumerate() {
            total += list.len();
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &j in list {
                let j = j as usize;
                if j >= n || j == i || self.adjacency[j].binary_search(&(i as NodeId)).is_err() {
                    return false;
                }
            }
        }
        total == 2 * self.edge_count
    }

    fn check_same_size(&self, other: &Graph) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }
}

fn merge_intersection(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn merge_union(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    fn edge_set(g: &Graph) -> HashSet<(usize, usize)> {
        g.edges().collect()
    }

    #[test]
    fn construction_normalizes_and_rejects_bad_input() {
        let g = Graph::from_edges(4, [(1, 0), (0, 1), (3, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(0), &[1]);
        assert!(g.is_well_formed());
        assert!(matches!(Graph::from_edges(3, [(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::NodeOutOfRange { node: 3, n: 3 })
        ));
        assert_eq!(Graph::complete(5).edge_count(), 10);
        assert!(Graph::complete(5).is_well_formed());
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(triangle().intersect(&triangle()).unwrap(), triangle());
        let a = Graph::path(3);
        let b = Graph::from_edges(3, [(1, 2)]).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert!(matches!(
            a.intersect(&Graph::empty(4)),
            Err(Error::SizeMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn union_examples() {
        let g = triangle();
        assert_eq!(g.union(&Graph::empty(3)).unwrap(), g);
        let a = Graph::from_edges(3, [(0, 1)]).unwrap();
        let b = Graph::from_edges(3, [(1, 2)]).unwrap();
        assert_eq!(a.union(&b).unwrap(), Graph::path(3));
        assert!(a.union(&Graph::empty(2)).is_err());
    }

    #[test]
    fn set_operations_match_hash_set_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_graph(10, 0.4, &mut rng);
            let b = random_graph(10, 0.4, &mut rng);
            let (ea, eb) = (edge_set(&a), edge_set(&b));
            let inter = a.intersect(&b).unwrap();
            let uni = a.union(&b).unwrap();
            assert!(inter.is_well_formed() && uni.is_well_formed());
            assert_eq!(edge_set(&inter), ea.intersection(&eb).copied().collect());
            assert_eq!(edge_set(&uni), ea.union(&eb).copied().collect());
        }
    }

    #[test]
    fn relabel_examples() {
        let g = triangle();
        assert_eq!(g.relabel(&Permutation::identity(3)).unwrap(), g);
        let one_edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        let swap = Permutation::from_vec(vec![1, 0]).unwrap();
        assert_eq!(one_edge.relabel(&swap).unwrap(), one_edge);
        assert!(g.relabel(&Permutation::identity(4)).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_graph(30, 0.2, &mut rng);
            let pi = Permutation::random(30, &mut rng);
            let h = g.relabel(&pi).unwrap();
            let mut d1 = g.degrees();
            let mut d2 = h.degrees();
            d1.sort_unstable();
            d2.sort_unstable();
            assert_eq!(d1, d2);
            for (i, j) in g.edges() {
                assert!(h.has_edge(pi.apply(i) as usize, pi.apply(j) as usize));
            }
        }
    }

    fn arb_pair() -> impl Strategy<Value = (Graph, Graph, Permutation)> {
        (1usize..14).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                proptest::collection::vec(any::<bool>(), pairs),
                proptest::collection::vec(any::<bool>(), pairs),
                Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle(),
            )
                .prop_map(move |(ma, mb, perm)| {
                    let all: Vec<(usize, usize)> =
                        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
                    let pick = |mask: &[bool]| {
                        all.iter()
                            .zip(mask)
                            .filter(|(_, &keep)| keep)
                            .map(|(&e, _)| e)
                            .collect::<Vec<_>>()
                    };
                    (
                        Graph::from_edges(n, pick(&ma)).unwrap(),
                        Graph::from_edges(n, pick(&mb)).unwrap(),
                        Permutation::from_vec(perm).unwrap(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn containment_and_inclusion_exclusion((a, b, _pi) in arb_pair()) {
            let inter = a.intersect(&b).unwrap();
            let uni = a.union(&b).unwrap();
            for (i, j) in inter.edges() {
                prop_assert!(a.has_edge(i, j));
            }
            for (i, j) in a.edges() {
                prop_assert!(uni.has_edge(i, j));
            }
            prop_assert_eq!(
                uni.edge_count() + inter.edge_count(),
                a.edge_count() + b.edge_count()
            );
        }

        #[test]
        fn relabel_round_trips((a, _b, pi) in arb_pair()) {
            let h = a.relabel(&pi).unwrap();
            prop_assert!(h.is_well_formed());
            prop_assert_eq!(h.edge_count(), a.edge_count());
            prop_assert_eq!(h.relabel(&pi.inverse()).unwrap(), a);
        }
    }
}
