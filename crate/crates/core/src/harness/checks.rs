//! Deterministic oracle checks shared by the `oracle-suite` command and the
//! acceptance tests. Every check uses fixed seeds.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::exec::Execution;
use crate::graphs::{Graph, NodeId};
use crate::kcore::{core_peel, low_degree_set, luczak_expand};
use crate::oracle::{
    chernoff_upper, cut_prob_enumerated, cut_prob_exact, dominance_check, empirical_dominance, exhaustive_core,
    intersection_maximizers, isolated_stats, kcore_estimator_bruteforce, mgf_triple, mle_bruteforce,
    poissonized_lower_tail, second_moment_bound, CapPolicy, ChernoffForm, SecondMomentInputs,
};
use crate::sampling::{build_parameter_matrix, sample_family, ModelSpec};
use crate::thresholds::{homogeneous_classify, phase_grid, Range, Region};

/// `Quick` shrinks sample counts for a smoke run; `Full` uses the sizes the
/// acceptance criteria call for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteScale {
    Quick,
    Full,
}

impl SuiteScale {
    fn pick(self, quick: usize, full: usize) -> usize {
        match self {
            SuiteScale::Quick => quick,
            SuiteScale::Full => full,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
}

/// Monte Carlo tolerance: `z` binomial standard errors.
const Z: f64 = 3.0;

fn std_err(freq: f64, samples: usize) -> f64 {
    (freq * (1.0 - freq) / samples as f64).sqrt()
}

fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).expect("edges are in range")
}

fn timed(name: &'static str, f: impl FnOnce() -> (bool, String)) -> CheckOutcome {
    let start = Instant::now();
    let (passed, detail) = f();
    CheckOutcome {
        name,
        passed,
        detail,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// `core_peel` against exhaustive subset search on random graphs with
/// `n <= 8`, every `k` in `0..=4`.
pub fn check_kcore_equivalence(graphs: usize) -> CheckOutcome {
    timed("kcore_equivalence", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b63);
        let mut bad = 0;
        for _ in 0..graphs {
            let n = rng.random_range(1..=8);
            let g = random_graph(n, rng.random_range(0.1..0.9), &mut rng);
            for k in 0..=4 {
                if core_peel(&g, k).members != exhaustive_core(&g, k).expect("n within cap") {
                    bad += 1;
                }
            }
        }
        (bad == 0, format!("{graphs} graphs x 5 values of k, {bad} mismatches"))
    })
}

/// `V \ luczak_expand(g, Z_{k+1})` inside `core_k(g)` for `G(60, 0.1)`, `k = 3`.
pub fn check_luczak_containment(graphs: usize) -> CheckOutcome {
    timed("luczak_containment", || {
        let (n, p, k) = (60, 0.1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(0x1c2a);
        let mut violations = 0;
        for _ in 0..graphs {
            let g = random_graph(n, p, &mut rng);
            let uf = luczak_expand(&g, &low_degree_set(&g, k + 1));
            let core = core_peel(&g, k);
            let mut inside = vec![false; n];
            for v in uf {
                inside[v] = true;
            }
            violations += (0..n).filter(|&v| !inside[v] && !core.contains(v)).count();
        }
        (violations == 0, format!("{graphs} graphs, {violations} violating nodes"))
    })
}

/// Exact agreement with bit-string enumeration, and monotonicity in the cut
/// size, for every `m <= max_m`, `b`, `t`.
pub fn check_cut_distribution(max_m: usize) -> CheckOutcome {
    timed("cut_exactness_dominance", || {
        let (mut cases, mut mismatches, mut non_monotone) = (0usize, 0usize, 0usize);
        for m in 2..=max_m {
            let t_max = (m * m / 4) as i64 + 1;
            for b in 0..=m {
                for l in 1..=m / 2 {
                    for t in -1..=t_max {
                        cases += 1;
                        if cut_prob_exact(m, l, b, t).expect("valid arguments") != cut_prob_enumerated(m, l, b, t) {
                            mismatches += 1;
                        }
                    }
                }
                if !dominance_check(m, b).expect("valid arguments") {
                    non_monotone += 1;
                }
            }
        }
        (
            mismatches == 0 && non_monotone == 0,
            format!("{cases} (m, l, b, t) cases, {mismatches} mismatches, {non_monotone} non-monotone (m, b)"),
        )
    })
}

/// For `m = 2`: union-edge minimizers equal intersection-edge maximizers.
pub fn check_mle_duality(instances: usize, exec: Execution) -> CheckOutcome {
    timed("mle_duality", || {
        let mut bad = 0;
        for idx in 0..instances {
            let n = 3 + idx % 4;
            let spec = ModelSpec::er(n, 0.5, 0.7, 2, 0x3e1e + idx as u64);
            let fam = sample_family(&spec).expect("valid spec");
            let mle = mle_bruteforce(&fam.observed, CapPolicy::Enforce, exec).expect("within caps");
            let mut min: Vec<Vec<NodeId>> = mle.profiles().map(|p| p[0].as_slice().to_vec()).collect();
            let (_, maxi) = intersection_maximizers(&fam.observed[0], &fam.observed[1]).expect("same n");
            let mut max: Vec<Vec<NodeId>> = maxi.iter().map(|p| p.as_slice().to_vec()).collect();
            min.sort();
            max.sort();
            if min != max || min.is_empty() {
                bad += 1;
            }
        }
        (bad == 0, format!("{instances} instances with n in 3..=6, {bad} disagreements"))
    })
}

/// The exhaustive estimator's optimum is at least the core of the true
/// intersection, and isomorphic copies align to the original core size.
pub fn check_estimator(instances: usize, exec: Execution) -> CheckOutcome {
    timed("kcore_estimator", || {
        let mut bad = 0;
        for idx in 0..instances {
            let k = 1 + idx % 3;
            let spec = ModelSpec::er(7, 0.6, 0.8, 2, 0xe57 + idx as u64);
            let fam = sample_family(&spec).expect("valid spec");
            let est = kcore_estimator_bruteforce(&fam.observed[0], &fam.observed[1], k, CapPolicy::Enforce, exec)
                .expect("within caps");
            let truth = core_peel(&fam.children_aligned[0].intersect(&fam.children_aligned[1]).expect("same n"), k);
            if est.core_size < truth.len() {
                bad += 1;
            }
            let iso = kcore_estimator_bruteforce(&fam.parent, &fam.parent.relabel(&fam.truth[0]).expect("sized"), k, CapPolicy::Enforce, exec)
                .expect("within caps");
            if iso.core_size != core_peel(&fam.parent, k).len() {
                bad += 1;
            }
        }
        (bad == 0, format!("{instances} instances with n = 7, {bad} failures"))
    })
}

/// Fixed classifier examples, no `multi_only` cell for `m = 2`, some for `m = 3`.
pub fn check_classifier(exec: Execution) -> CheckOutcome {
    timed("phase_classifier", || {
        let examples = [
            ((5.0, 0.4, 3), Region::MultiOnly),
            ((8.0, 0.5, 2), Region::PairwisePossible),
            ((3.0, 0.5, 2), Region::Impossible),
        ];
        let wrong = examples
            .iter()
            .filter(|((c, s, m), want)| homogeneous_classify(*c, *s, *m) != *want)
            .count();
        let c: Range = "0:10:0.05".parse().expect("valid range");
        let s: Range = "0:1:0.005".parse().expect("valid range");
        let two = phase_grid(c, s, 2, exec).count(Region::MultiOnly);
        let three = phase_grid(c, s, 3, exec).count(Region::MultiOnly);
        (
            wrong == 0 && two == 0 && three > 0,
            format!("{wrong} wrong examples, multi_only cells: {two} for m = 2, {three} for m = 3"),
        )
    })
}

/// Monte Carlo tail frequencies of `Binomial(n, p)` against the Chernoff
/// forms, and of `Bin(n/2, p) + 2 Bin(n/2, p)` against the poissonized lower
/// tail at `t = EX / 2`, on the grid `n x p x delta`.
pub fn check_tail_bounds(draws: usize) -> CheckOutcome {
    timed("tail_bounds", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xb0d5);
        let mut worst = 0.0f64;
        let (mut points, mut comparisons, mut failures) = (0, 0, Vec::new());
        let mut compare = |label: String, hits: usize, bound: f64, failures: &mut Vec<String>| {
            let f = hits as f64 / draws as f64;
            let slack = f - bound - Z * std_err(f, draws);
            comparisons += 1;
            if bound > 0.0 {
                worst = worst.max(f / bound);
            }
            if slack > 0.0 {
                failures.push(format!("{label}: freq {f} > bound {bound}"));
            }
        };
        for n in [50u64, 200, 1000] {
            for p in [0.02, 0.1] {
                let bin = Binomial::new(n, p).expect("valid binomial");
                let xs: Vec<u64> = (0..draws).map(|_| bin.sample(&mut rng)).collect();
                let np = n as f64 * p;
                for delta in [0.5, 6.0] {
                    points += 1;
                    let above = xs.iter().filter(|&&x| x as f64 >= (1.0 + delta) * np).count();
                    let mut forms = vec![ChernoffForm::Upper, ChernoffForm::UpperLoose];
                    forms.push(if delta > 5.0 { ChernoffForm::UpperLarge } else { ChernoffForm::Lower });
                    for form in forms {
                        let bound = chernoff_upper(np, delta, form).expect("in domain");
                        let hits = if form == ChernoffForm::Lower {
                            xs.iter().filter(|&&x| x as f64 <= (1.0 - delta) * np).count()
                        } else {
                            above
                        };
                        compare(format!("n={n} p={p} delta={delta} {form:?}"), hits, bound, &mut failures);
                    }
                }
                let half = Binomial::new(n / 2, p).expect("valid binomial");
                let ex = 3.0 * (n / 2) as f64 * p;
                let t = ex / 2.0;
                let hits = (0..draws)
                    .filter(|_| (half.sample(&mut rng) + 2 * half.sample(&mut rng)) as f64 <= t)
                    .count();
                let bound = poissonized_lower_tail(ex, t).expect("t < EX");
                compare(format!("n={n} p={p} poissonized"), hits, bound, &mut failures);
            }
        }
        let detail = if failures.is_empty() {
            format!("{points} grid points x {draws} draws, {comparisons} comparisons, max freq / bound = {worst:.3}")
        } else {
            failures.join("; ")
        };
        (failures.is_empty(), detail)
    })
}

/// `M_X <= M_Y <= M_Z` for `p` in `0.01..=0.99` and `t` in `[-3, 3]`.
pub fn check_mgf_ordering() -> CheckOutcome {
    timed("mgf_ordering", || {
        let mut bad = 0;
        let mut cases = 0;
        for pi in 1..=99 {
            let p = pi as f64 / 100.0;
            for ti in -300..=300 {
                let t = ti as f64 / 100.0;
                let (x, y, z) = mgf_triple(p, t).expect("in domain");
                cases += 1;
                // equality at t = 0, so allow rounding
                if x > y * (1.0 + 1e-12) || y > z * (1.0 + 1e-12) {
                    bad += 1;
                }
            }
        }
        (bad == 0, format!("{cases} (p, t) points, {bad} violations"))
    })
}

/// Second-moment lower bound on `P(N >= 1)` against Monte Carlo frequency
/// for homogeneous `G(300, d / 299)` with `d = ln(n / mu)`.
pub fn check_second_moment(samples: usize) -> CheckOutcome {
    timed("second_moment", || {
        let n = 300usize;
        let mut lines = Vec::new();
        let mut ok = true;
        for (idx, mu) in [0.5, 1.0, 2.0, 3.0, 4.0].into_iter().enumerate() {
            let d = (n as f64 / mu).ln();
            let p = d / (n - 1) as f64;
            let pm = build_parameter_matrix(&ModelSpec::er(n, p, 1.0, 2, 0)).expect("valid spec");
            let mut rng = ChaCha8Rng::seed_from_u64(0x2d30 + idx as u64);
            let hits = (0..samples).filter(|_| isolated_stats(&pm.sample(&mut rng)).1 >= 1).count();
            let f = hits as f64 / samples as f64;
            let bound = second_moment_bound(&SecondMomentInputs {
                n,
                degrees: vec![d; n],
                p_max: p,
            });
            let pass = bound.primary <= f + Z * std_err(f, samples);
            ok &= pass;
            lines.push(format!("mu={mu}: bound {:.4} vs freq {f:.4}", bound.primary));
        }
        (ok, lines.join(", "))
    })
}

/// Cut-cost survival of `U_1` below that of `U_3` (ER `n = 500`, `m = 6`).
pub fn check_empirical_dominance(samples: usize) -> CheckOutcome {
    timed("empirical_dominance", || {
        let fam = sample_family(&ModelSpec::er(500, 0.02, 0.5, 6, 0xd0)).expect("valid spec");
        let v = (0..fam.n()).max_by_key(|&v| (fam.parent.degree(v), std::cmp::Reverse(v))).unwrap_or(0);
        let rep = empirical_dominance(&fam.parent, 6, 0.5, v, 1, 3, samples, Z, 0xd1, None).expect("valid cut sizes");
        (
            rep.holds,
            format!("node {v} of degree {}, {samples} resamples, max z = {:?}", rep.parent_degree, rep.max_z),
        )
    })
}

/// Runs every check in a fixed order.
pub fn oracle_suite(scale: SuiteScale, exec: Execution) -> Vec<CheckOutcome> {
    vec![
        check_kcore_equivalence(scale.pick(50, 200)),
        check_luczak_containment(scale.pick(200, 1000)),
        check_cut_distribution(scale.pick(8, 12)),
        check_mle_duality(scale.pick(10, 50), exec),
        check_estimator(scale.pick(3, 12), exec),
        check_classifier(exec),
        check_tail_bounds(scale.pick(10_000, 100_000)),
        check_mgf_ordering(),
        check_second_moment(scale.pick(300, 2000)),
        check_empirical_dominance(scale.pick(1000, 5000)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for c in oracle_suite(SuiteScale::Quick, Execution::default()) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
