use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graphs::{Graph, NodeId};
use crate::sampling::grid::SpatialGrid;
use crate::sampling::seed;
use crate::sampling::spec::{ModelKind, ModelSpec, SbmProbs};

/// Model-specific latent data retained alongside a sampled family.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Latent {
    None,
    /// Community of each node plus community sizes (contiguous id blocks).
    Communities { assignment: Vec<u32>, sizes: Vec<usize> },
    Points(Vec<[f64; 2]>),
    Weights(Vec<f64>),
    /// The anchor graph whose scaled adjacency is `P`.
    Anchor(#[serde(skip)] Graph),
}

#[derive(Debug, Clone)]
enum Kind {
    Er { p: f64 },
    Sbm { starts: Vec<usize>, sizes: Vec<usize>, assignment: Vec<u32>, q: Vec<Vec<f64>> },
    Rgg { p: f64, r: f64, points: Vec<[f64; 2]> },
    Clg { weights: Vec<f64>, total: f64 },
    Dense { p: Vec<Vec<f64>> },
    Anchor { p_max: f64, anchor: Graph },
}

/// Implicit parameter matrix: answers `p_ij` queries and carries the expected
/// degrees `d_i = sum_{j != i} p_ij` and `p_max` without materializing `P`.
#[derive(Debug, Clone)]
pub struct ParameterMatrix {
    n: usize,
    kind: Kind,
    degrees: Vec<f64>,
    p_max: f64,
}

/// Builds the implicit `P` for a validated spec. RGG points missing from the
/// spec are drawn uniformly on the unit square from the latent stream.
pub fn build_parameter_matrix(spec: &ModelSpec) -> Result<ParameterMatrix> {
    spec.validate()?;
    let n = spec.n;
    let pm = match &spec.kind {
        ModelKind::Er { p } => ParameterMatrix {
            n,
            kind: Kind::Er { p: *p },
            degrees: vec![n.saturating_sub(1) as f64 * p; n],
            p_max: if n >= 2 { *p } else { 0.0 },
        },
        ModelKind::Sbm(sbm) => {
            let c = sbm.communities;
            let sizes = sbm.sizes.clone().unwrap_or_else(|| balanced_sizes(n, c));
            let q: Vec<Vec<f64>> = match &sbm.probs {
                SbmProbs::Planted { p, q } => (0..c)
                    .map(|a| (0..c).map(|b| if a == b { *p } else { *q }).collect())
                    .collect(),
                SbmProbs::Table { q_table } => q_table.clone(),
            };
            let mut starts = Vec::with_capacity(c);
            let mut assignment = Vec::with_capacity(n);
            let mut acc = 0;
            for (a, &size) in sizes.iter().enumerate() {
                starts.push(acc);
                acc += size;
                assignment.extend(std::iter::repeat_n(a as u32, size));
            }
            let block_degree: Vec<f64> = (0..c)
                .map(|a| (0..c).map(|b| sizes[b] as f64 * q[a][b]).sum::<f64>() - q[a][a])
                .collect();
            let degrees = assignment.iter().map(|&a| block_degree[a as usize]).collect();
            let mut p_max: f64 = 0.0;
            for a in 0..c {
                for b in 0..c {
                    let has_pair = if a == b { sizes[a] >= 2 } else { sizes[a] > 0 && sizes[b] > 0 };
                    if has_pair {
                        p_max = p_max.max(q[a][b]);
                    }
                }
            }
            ParameterMatrix {
                n,
                kind: Kind::Sbm {
                    starts,
                    sizes,
                    assignment,
                    q,
                },
                degrees,
                p_max,
            }
        }
        ModelKind::Rgg(rgg) => {
            let points = match &rgg.points {
                Some(points) => points.clone(),
                None => {
                    let mut rng = seed::stream(spec.seed, seed::LATENT);
                    (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect()
                }
            };
            let neighborhood = neighborhood_sizes(&points, rgg.r);
            let degrees = neighborhood
                .iter()
                .map(|&c| (c - 1) as f64 * rgg.p)
                .collect();
            let p_max = if neighborhood.iter().any(|&c| c > 1) { rgg.p } else { 0.0 };
            ParameterMatrix {
                n,
                kind: Kind::Rgg {
                    p: rgg.p,
                    r: rgg.r,
                    points,
                },
                degrees,
                p_max,
            }
        }
        ModelKind::Clg { weights } => {
            let total: f64 = weights.iter().sum();
            let degrees = weights.iter().map(|&w| w * (total - w) / total).collect();
            let mut top = weights.clone();
            top.sort_by(|a, b| b.total_cmp(a));
            let p_max = if n >= 2 { (top[0] * top[1] / total).min(1.0) } else { 0.0 };
            ParameterMatrix {
                n,
                kind: Kind::Clg {
                    weights: weights.clone(),
                    total,
                },
                degrees,
                p_max,
            }
        }
        ModelKind::Dense { p } => {
            let degrees = p.iter().map(|row| row.iter().sum()).collect();
            let p_max = p.iter().flatten().copied().fold(0.0, f64::max);
            ParameterMatrix {
                n,
                kind: Kind::Dense { p: p.clone() },
                degrees,
                p_max,
            }
        }
        ModelKind::Anchor { p_max, q } => {
            build_anchor_matrix(n, *p_max, *q, seed::mix(spec.seed, seed::LATENT))
        }
    };
    Ok(pm)
}

/// Random anchored matrix: samples `G_anchor ~ ER(n, q)` and returns
/// `P = p_max * adjacency(G_anchor)`. The anchor graph is available through
/// [`ParameterMatrix::latent`].
pub fn build_anchor_matrix(n: usize, p_max: f64, q: f64, seed: u64) -> ParameterMatrix {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let anchor = sample_er(n, q, &mut rng);
    let degrees = anchor.degrees().iter().map(|&d| d as f64 * p_max).collect();
    let p_max_eff = if anchor.edge_count() > 0 { p_max } else { 0.0 };
    ParameterMatrix {
        n,
        kind: Kind::Anchor { p_max, anchor },
        degrees,
        p_max: p_max_eff,
    }
}

use rand::SeedableRng;

/// Choice of the anchor density used in the existence construction:
/// `q = (1 + 2 eps') / (s log n)`.
pub fn anchor_density(n: usize, s: f64, eps_prime: f64) -> f64 {
    ((1.0 + 2.0 * eps_prime) / (s * (n as f64).ln())).min(1.0)
}

impl ParameterMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        match &self.kind {
            Kind::Er { p } => *p,
            Kind::Sbm { assignment, q, .. } => q[assignment[i] as usize][assignment[j] as usize],
            Kind::Rgg { p, r, points } => {
                let (dx, dy) = (points[i][0] - points[j][0], points[i][1] - points[j][1]);
                if dx * dx + dy * dy <= r * r {
                    *p
                } else {
                    0.0
                }
            }
            Kind::Clg { weights, total } => (weights[i] * weights[j] / total).min(1.0),
            Kind::Dense { p } => p[i][j],
            Kind::Anchor { p_max, anchor } => {
                if anchor.has_edge(i, j) {
                    *p_max
                } else {
                    0.0
                }
            }
        }
    }

    /// Expected degrees `d_i`.
    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn latent(&self) -> Latent {
        match &self.kind {
            Kind::Er { .. } | Kind::Dense { .. } => Latent::None,
            Kind::Sbm { assignment, sizes, .. } => Latent::Communities {
                assignment: assignment.clone(),
                sizes: sizes.clone(),
            },
            Kind::Rgg { points, .. } => Latent::Points(points.clone()),
            Kind::Clg { weights, .. } => Latent::Weights(weights.clone()),
            Kind::Anchor { anchor, .. } => Latent::Anchor(anchor.clone()),
        }
    }

    /// Draws a parent graph `G ~ RG(n, P)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Graph {
        let n = self.n;
        match &self.kind {
            Kind::Er { p } => sample_er(n, *p, rng),
            Kind::Sbm { starts, sizes, q, .. } => sample_sbm(n, starts, sizes, q, rng),
            Kind::Rgg { p, r, points } => sample_rgg(points, *p, *r, rng),
            Kind::Clg { weights, total } => sample_clg(weights, *total, rng),
            Kind::Dense { p } => {
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if p[i][j] > 0.0 && rng.random::<f64>() < p[i][j] {
                            edges.push((i, j));
                        }
                    }
                }
                Graph::from_lex_sorted_edges(n, edges)
            }
            Kind::Anchor { p_max, anchor } => subsample(anchor, *p_max, rng),
        }
    }
}

pub(crate) fn balanced_sizes(n: usize, c: usize) -> Vec<usize> {
    (0..c).map(|a| n / c + usize::from(a < n % c)).collect()
}

fn neighborhood_sizes(points: &[[f64; 2]], r: f64) -> Vec<usize> {
    let grid = SpatialGrid::new(points, r);
    (0..points.len()).map(|i| grid.count_within(i)).collect()
}

/// Calls `f(idx)` for each index in `0..len` independently with probability
/// `p`, in increasing order, drawing one geometric skip per hit.
pub(crate) fn bernoulli_indices<R: Rng + ?Sized>(len: u64, p: f64, rng: &mut R, mut f: impl FnMut(u64)) {
    if p <= 0.0 || len == 0 {
        return;
    }
    if p >= 1.0 {
        (0..len).for_each(f);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut next: u64 = 0;
    loop {
        let u: f64 = rng.random();
        let skip = ((1.0 - u).ln() / log_q).floor();
        if skip >= (len - next) as f64 {
            return;
        }
        next += skip as u64;
        f(next);
        next += 1;
        if next >= len {
            return;
        }
    }
}

/// Maps increasing lexicographic indices over pairs `i < j` of `0..n` to the
/// pairs themselves.
struct PairCursor {
    n: usize,
    row: usize,
    row_start: u64,
}

impl PairCursor {
    fn new(n: usize) -> Self {
        PairCursor { n, row: 0, row_start: 0 }
    }

    fn advance_to(&mut self, idx: u64) -> (usize, usize) {
        loop {
            let row_len = (self.n - 1 - self.row) as u64;
            if idx < self.row_start + row_len {
                return (self.row, self.row + 1 + (idx - self.row_start) as usize);
            }
            self.row_start += row_len;
            self.row += 1;
        }
    }
}

fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

pub(crate) fn sample_er<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut cursor = PairCursor::new(n);
    let mut edges = Vec::new();
    bernoulli_indices(pair_count(n), p, rng, |idx| edges.push(cursor.advance_to(idx)));
    Graph::from_lex_sorted_edges(n, edges)
}

fn sample_sbm<R: Rng + ?Sized>(n: usize, starts: &[usize], sizes: &[usize], q: &[Vec<f64>], rng: &mut R) -> Graph {
    let c = sizes.len();
    let mut edges = Vec::new();
    for a in 0..c {
        for b in a..c {
            let (sa, sb) = (starts[a], starts[b]);
            if a == b {
                let mut cursor = PairCursor::new(sizes[a]);
                bernoulli_indices(pair_count(sizes[a]), q[a][a], rng, |idx| {
                    let (i, j) = cursor.advance_to(idx);
                    edges.push((sa + i, sa + j));
                });
            } else {
                let cols = sizes[b] as u64;
                bernoulli_indices(sizes[a] as u64 * cols, q[a][b], rng, |idx| {
                    edges.push((sa + (idx / cols) as usize, sb + (idx % cols) as usize));
                });
            }
        }
    }
    Graph::from_edges(n, edges).expect("block pairs are in range")
}

fn sample_rgg<R: Rng + ?Sized>(points: &[[f64; 2]], p: f64, r: f64, rng: &mut R) -> Graph {
    let n = points.len();
    let grid = SpatialGrid::new(points, r);
    let mut edges = Vec::new();
    let mut candidates = Vec::new();
    for i in 0..n {
        candidates.clear();
        grid.for_each_within(i, |j| {
            if j > i {
                candidates.push(j);
            }
        });
        candidates.sort_unstable();
        for &j in &candidates {
            if p >= 1.0 || rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_lex_sorted_edges(n, edges)
}

/// Chung-Lu sampling in expected O(n + |E|): nodes are visited in decreasing
/// weight order, skipping geometrically under the current (upper-bound)
/// probability and thinning by the true/upper ratio.
fn sample_clg<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> Graph {
    let n = weights.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let w = |k: usize| weights[order[k]];
    let mut edges = Vec::new();
    for u in 0..n.saturating_sub(1) {
        let mut v = u + 1;
        let mut p = (w(u) * w(v) / total).min(1.0);
        while v < n && p > 0.0 {
            if p < 1.0 {
                let x: f64 = rng.random();
                let skip = ((1.0 - x).ln() / (1.0 - p).ln()).floor();
                if skip >= (n - v) as f64 {
                    break;
                }
                v += skip as usize;
            }
            let q = (w(u) * w(v) / total).min(1.0);
            if rng.random::<f64>() < q / p {
                edges.push((order[u], order[v]));
            }
            p = q;
            v += 1;
        }
    }
    Graph::from_edges(n, edges).expect("weights index valid nodes")
}

/// Keeps each edge of `g` independently with probability `s`.
pub fn subsample<R: Rng + ?Sized>(g: &Graph, s: f64, rng: &mut R) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut kept = Vec::with_capacity((edges.len() as f64 * s) as usize + 1);
    bernoulli_indices(edges.len() as u64, s, rng, |idx| kept.push(edges[idx as usize]));
    Graph::from_lex_sorted_edges(g.n(), kept)
}

impl Graph {
    /// Builds from edges `(i, j)`, `i < j`, already in lexicographic order,
    /// which yields sorted adjacency lists without a sort pass.
    pub(crate) fn from_lex_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut deg = vec![0usize; n];
        for &(i, j) in &edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        let mut adjacency: Vec<Vec<NodeId>> = deg.iter().map(|&d| Vec::with_capacity(d)).collect();
        for &(i, j) in &edges {
            debug_assert!(i < j);
            adjacency[i].push(j as NodeId);
            adjacency[j].push(i as NodeId);
        }
        debug_assert!(adjacency.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        Graph::from_adjacency(adjacency)
    }
}
