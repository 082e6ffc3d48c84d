//! k-cores, low-degree sets, Łuczak expansion and the simulated k-core
//! pairwise estimator.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graphs::{write_id_list, Graph, PartialMatching};
use crate::sampling::CorrelatedFamily;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreResult {
    /// Sorted ascending.
    pub members: Vec<usize>,
    pub k: usize,
}

impl CoreResult {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Writes the companion id-list file for the graph the core came from.
    pub fn save(&self, n: usize, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        write_id_list(n, &self.members, std::io::BufWriter::new(f)).map_err(|e| Error::io(path, e))
    }
}

/// Membership mask of the k-core by peeling every node whose current degree
/// drops below `k`. O(n + |E|).
pub fn core_mask(g: &Graph, k: usize) -> Vec<bool> {
    let n = g.n();
    let mut deg = g.degrees();
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] < k).collect();
    for &v in &stack {
        alive[v] = false;
    }
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            let u = u as usize;
            if alive[u] {
                deg[u] -= 1;
                if deg[u] < k {
                    alive[u] = false;
                    stack.push(u);
                }
            }
        }
    }
    alive
}

pub fn core_peel(g: &Graph, k: usize) -> CoreResult {
    let members = core_mask(g, k)
        .iter()
        .enumerate()
        .filter(|(_, &a)| a)
        .map(|(v, _)| v)
        .collect();
    CoreResult { members, k }
}

/// Core number of every node by bucket-queue decomposition (nodes leave in
/// order of current degree, ties by smallest id).
pub fn core_numbers(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg = g.degrees();
    let max = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); max + 1];
    for v in 0..n {
        buckets[deg[v]].insert(v);
    }
    let mut core = vec![0; n];
    let mut done = vec![false; n];
    let mut current = 0;
    for _ in 0..n {
        let mut d = 0;
        while buckets[d].is_empty() {
            d += 1;
        }
        let v = buckets[d].pop_first().expect("non-empty bucket");
        current = current.max(d);
        core[v] = current;
        done[v] = true;
        for &u in g.neighbors(v) {
            let u = u as usize;
            if !done[u] && deg[u] > 0 {
                buckets[deg[u]].remove(&u);
                deg[u] -= 1;
                buckets[deg[u]].insert(u);
            }
        }
    }
    core
}

/// `Z_r`: nodes of degree at most `r`, ascending.
pub fn low_degree_set(g: &Graph, r: usize) -> Vec<usize> {
    (0..g.n()).filter(|&v| g.degree(v) <= r).collect()
}

/// Fixed point of absorbing any outside node with at least three neighbors
/// inside the set. Candidates are absorbed smallest id first.
pub fn luczak_expand(g: &Graph, u0: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut inside = vec![false; n];
    let mut count = vec![0u32; n];
    let mut heap = BinaryHeap::new();
    let absorb = |v: usize, inside: &mut Vec<bool>, count: &mut Vec<u32>, heap: &mut BinaryHeap<Reverse<usize>>| {
        inside[v] = true;
        for &u in g.neighbors(v) {
            let u = u as usize;
            count[u] += 1;
            if count[u] == 3 && !inside[u] {
                heap.push(Reverse(u));
            }
        }
    };
    for &v in u0 {
        if !inside[v] {
            absorb(v, &mut inside, &mut count, &mut heap);
        }
    }
    while let Some(Reverse(v)) = heap.pop() {
        if !inside[v] {
            absorb(v, &mut inside, &mut count, &mut heap);
        }
    }
    (0..n).filter(|&v| inside[v]).collect()
}

/// SIMULATION ONLY: uses the ground truth. Matches every node of
/// `core_k(G'_i ∧ G'_j)` to its true counterpart, expressed in the observed
/// labels of graphs `i` and `j`. Correct on its domain by construction.
pub fn simulated_kcore_match(family: &CorrelatedFamily, i: usize, j: usize, k: usize) -> Result<PartialMatching> {
    let m = family.m();
    if i == j || i >= m || j >= m {
        return Err(Error::InvalidArgument(format!(
            "graph pair ({i}, {j}) is not a pair of distinct indices below {m}"
        )));
    }
    let both = family.children_aligned[i].intersect(&family.children_aligned[j])?;
    let mask = core_mask(&both, k);
    let mut out = PartialMatching::new(family.n());
    for (v, _) in mask.iter().enumerate().filter(|(_, &a)| a) {
        out.insert(family.label_in(i, v) as usize, family.label_in(j, v) as usize)?;
    }
    Ok(out)
}
