//! Exhaustive references at desk scale: subset search for k-cores, the
//! union-minimizing MLE, intersection maximizers and the exact k-core
//! estimator.
//!
//! A profile `(pi_12, .., pi_1m)` maps graph 0 labels to graph `j` labels;
//! edge `{u, v}` of graph `j` pulled back along `pi` is `{pi^-1(u), pi^-1(v)}`.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graphs::{Graph, NodeId, PartialMatching, Permutation};

pub const MLE_MAX_N: usize = 7;
pub const MLE_MAX_M: usize = 3;
pub const ESTIMATOR_MAX_N: usize = 8;
pub const SUBSET_MAX_N: usize = 20;

/// Whether the factorial enumeration caps are enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CapPolicy {
    #[default]
    Enforce,
    /// Lifts the caps; enumeration cost grows as `(n!)^(m-1)`.
    IUnderstandTheCost,
}

fn check_cap(policy: CapPolicy, what: &'static str, limit: usize, got: usize) -> Result<()> {
    if policy == CapPolicy::Enforce && got > limit {
        return Err(Error::CapExceeded { what, limit, got });
    }
    Ok(())
}

/// The maximum-cardinality subset whose induced subgraph has minimum degree
/// at least `k`, by enumerating all `2^n` subsets.
pub fn exhaustive_core(g: &Graph, k: usize) -> Result<Vec<usize>> {
    let n = g.n();
    check_cap(CapPolicy::Enforce, "nodes for subset enumeration", SUBSET_MAX_N, n)?;
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &u| acc | (1 << u)))
        .collect();
    let mut best: u32 = 0;
    for set in 1u32..(1u32 << n) {
        if set.count_ones() <= best.count_ones() {
            continue;
        }
        let ok = (0..n)
            .filter(|&v| set >> v & 1 == 1)
            .all(|v| (adj[v] & set).count_ones() as usize >= k);
        if ok {
            best = set;
        }
    }
    Ok((0..n).filter(|&v| best >> v & 1 == 1).collect())
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    (0..n as NodeId)
        .permutations(n)
        .map(|p| Permutation::from_vec(p).expect("itertools yields permutations"))
        .collect()
}

fn pair_bit(n: usize, u: usize, v: usize) -> u64 {
    let (a, b) = (u.min(v), u.max(v));
    1u64 << (a * (2 * n - a - 1) / 2 + (b - a - 1))
}

fn pulled_back_mask(g: &Graph, pi: &Permutation) -> u64 {
    let inv = pi.inverse();
    g.edges()
        .fold(0, |acc, (a, b)| acc | pair_bit(g.n(), inv.apply(a) as usize, inv.apply(b) as usize))
}

fn check_same_n(graphs: &[&Graph]) -> Result<usize> {
    let n = graphs.first().map_or(0, |g| g.n());
    for g in graphs {
        if g.n() != n {
            return Err(Error::SizeMismatch { left: n, right: g.n() });
        }
    }
    Ok(n)
}

#[derive(Debug, Clone)]
pub struct MleResult {
    pub min_union: usize,
    perms: Vec<Permutation>,
    graphs: usize,
    /// Minimizing profiles as ordinals in lexicographic profile order.
    minimizers: Vec<u64>,
}

impl MleResult {
    pub fn count(&self) -> usize {
        self.minimizers.len()
    }

    /// The `idx`-th minimizing profile `(pi_12, .., pi_1m)`.
    pub fn profile(&self, idx: usize) -> Vec<Permutation> {
        let base = self.perms.len() as u64;
        let mut ord = self.minimizers[idx];
        let mut out = vec![Permutation::identity(0); self.graphs - 1];
        for slot in out.iter_mut().rev() {
            *slot = self.perms[(ord % base) as usize].clone();
            ord /= base;
        }
        out
    }

    pub fn profiles(&self) -> impl Iterator<Item = Vec<Permutation>> + '_ {
        (0..self.count()).map(|i| self.profile(i))
    }

    pub fn contains(&self, profile: &[Permutation]) -> bool {
        let ord = profile.iter().fold(0u64, |acc, pi| {
            let idx = self.perms.iter().position(|p| p == pi).expect("profile entries have the right size");
            acc * self.perms.len() as u64 + idx as u64
        });
        self.minimizers.binary_search(&ord).is_ok()
    }
}

/// All profiles minimizing `|E(G_1 ∨ G_2^.. ∨ .. ∨ G_m^..)|`.
pub fn mle_bruteforce(graphs: &[Graph], policy: CapPolicy, exec: Execution) -> Result<MleResult> {
    let refs: Vec<&Graph> = graphs.iter().collect();
    let n = check_same_n(&refs)?;
    let m = graphs.len();
    if m < 2 {
        return Err(Error::InvalidArgument("need at least two graphs".into()));
    }
    check_cap(policy, "nodes for MLE enumeration", MLE_MAX_N, n)?;
    check_cap(policy, "graphs for MLE enumeration", MLE_MAX_M, m)?;
    if n * n.saturating_sub(1) / 2 > 64 {
        return Err(Error::CapExceeded {
            what: "nodes for 64-bit edge masks",
            limit: 11,
            got: n,
        });
    }
    let perms = all_permutations(n);
    let base = perms.len() as u64;
    let g0 = pulled_back_mask(&graphs[0], &Permutation::identity(n));
    let masks: Vec<Vec<u64>> = graphs[1..]
        .iter()
        .map(|g| perms.iter().map(|pi| pulled_back_mask(g, pi)).collect())
        .collect();
    let inner: u64 = base.pow((m - 2) as u32);
    let per_first = exec.map_range(perms.len(), |first| {
        let start = g0 | masks[0][first];
        let mut best = u32::MAX;
        let mut hits = Vec::new();
        for rest in 0..inner {
            let mut union = start;
            let mut r = rest;
            for slot in (1..m - 1).rev() {
                union |= masks[slot][(r % base) as usize];
                r /= base;
            }
            let c = union.count_ones();
            if c < best {
                best = c;
                hits.clear();
            }
            if c == best {
                hits.push(first as u64 * inner + rest);
            }
        }
        (best, hits)
    });
    let min = per_first.iter().map(|(b, _)| *b).min().unwrap_or(0);
    let minimizers = per_first
        .into_iter()
        .filter(|(b, _)| *b == min)
        .flat_map(|(_, h)| h)
        .collect();
    Ok(MleResult {
        min_union: min as usize,
        perms,
        graphs: m,
        minimizers,
    })
}

/// All `pi` maximizing `|E(G_1 ∧ G_2^pi)|`, counted edge by edge through
/// adjacency queries, in lexicographic order.
pub fn intersection_maximizers(g1: &Graph, g2: &Graph) -> Result<(usize, Vec<Permutation>)> {
    let n = check_same_n(&[g1, g2])?;
    check_cap(CapPolicy::Enforce, "nodes for intersection enumeration", ESTIMATOR_MAX_N, n)?;
    let mut best = 0;
    let mut out = Vec::new();
    for pi in all_permutations(n) {
        let c = g1
            .edges()
            .filter(|&(u, v)| g2.has_edge(pi.apply(u) as usize, pi.apply(v) as usize))
            .count();
        if c > best {
            best = c;
            out.clear();
        }
        if c == best {
            out.push(pi);
        }
    }
    Ok((best, out))
}

#[derive(Debug, Clone)]
pub struct KcoreEstimate {
    pub core_size: usize,
    /// Lexicographically smallest maximizer.
    pub sigma: Permutation,
    /// `sigma` restricted to `core_k(G_1 ∧ G_2^sigma)`.
    pub matching: PartialMatching,
}

fn bit_core(adj: &[u16], k: usize) -> u16 {
    let mut alive: u16 = if adj.is_empty() { 0 } else { (((1u32) << adj.len()) - 1) as u16 };
    loop {
        let mut next = alive;
        for (v, &a) in adj.iter().enumerate() {
            if alive >> v & 1 == 1 && ((a & alive).count_ones() as usize) < k {
                next &= !(1 << v);
            }
        }
        if next == alive {
            return alive;
        }
        alive = next;
    }
}

/// Exact k-core estimator: maximizes `|core_k(G_1 ∧ G_2^sigma)|` over all
/// `n!` bijections, partitioned by first element.
pub fn kcore_estimator_bruteforce(
    g1: &Graph,
    g2: &Graph,
    k: usize,
    policy: CapPolicy,
    exec: Execution,
) -> Result<KcoreEstimate> {
    let n = check_same_n(&[g1, g2])?;
    check_cap(policy, "nodes for k-core estimator enumeration", ESTIMATOR_MAX_N, n)?;
    if n > 16 {
        return Err(Error::CapExceeded {
            what: "nodes for 16-bit adjacency masks",
            limit: 16,
            got: n,
        });
    }
    let mask = |g: &Graph, v: usize| g.neighbors(v).iter().fold(0u16, |acc, &u| acc | (1 << u));
    let a1: Vec<u16> = (0..n).map(|v| mask(g1, v)).collect();
    let a2: Vec<u16> = (0..n).map(|v| mask(g2, v)).collect();
    let evaluate = |sigma: &[NodeId]| -> (usize, u16) {
        let adj: Vec<u16> = (0..n)
            .map(|u| {
                let row = a2[sigma[u] as usize];
                (0..n)
                    .filter(|&v| a1[u] >> v & 1 == 1 && row >> sigma[v] & 1 == 1)
                    .fold(0u16, |acc, v| acc | (1 << v))
            })
            .collect();
        let core = bit_core(&adj, k);
        (core.count_ones() as usize, core)
    };
    let per_first = exec.map_range(n.max(1), |first| {
        if n == 0 {
            return (0, Vec::new(), 0);
        }
        let mut best: Option<(usize, Vec<NodeId>, u16)> = None;
        for rest in (0..n as NodeId).filter(|&x| x != first as NodeId).permutations(n - 1) {
            let mut sigma = Vec::with_capacity(n);
            sigma.push(first as NodeId);
            sigma.extend(rest);
            let (size, core) = evaluate(&sigma);
            if best.as_ref().is_none_or(|b| size > b.0) {
                best = Some((size, sigma, core));
            }
        }
        best.expect("at least one permutation")
    });
    let mut best = per_first[0].clone();
    for cand in per_first.into_iter().skip(1) {
        if cand.0 > best.0 {
            best = cand;
        }
    }
    let (core_size, sigma, core) = best;
    let sigma = Permutation::from_vec(sigma)?;
    let mut matching = PartialMatching::new(n);
    for v in (0..n).filter(|&v| core >> v & 1 == 1) {
        matching.insert(v, sigma.apply(v) as usize)?;
    }
    Ok(KcoreEstimate {
        core_size,
        sigma,
        matching,
    })
}
