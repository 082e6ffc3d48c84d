use multialign::sampling::{build_parameter_matrix, sample_family_with, Latent, ModelSpec};

/// Exact `P(|X - reps * rate| >= z * sd)` for `X ~ Binomial(reps, rate)`.
fn two_sided_tail(reps: usize, rate: f64, z: f64) -> f64 {
    let (mean, sd) = (reps as f64 * rate, (reps as f64 * rate * (1.0 - rate)).sqrt());
    let mut pmf = (1.0 - rate).powi(reps as i32);
    let mut tail = 0.0;
    for x in 0..=reps {
        if (x as f64 - mean).abs() >= z * sd {
            tail += pmf;
        }
        pmf *= (reps - x) as f64 / (x + 1) as f64 * rate / (1.0 - rate);
    }
    tail
}

// Each of the ~4 * 10^4 pair frequencies is compared at 4 sd. With that many
// comparisons a handful of exceedances is expected even from an exact
// sampler, so the count of exceedances is checked against its exact binomial
// expectation, and pooled per-block frequencies are checked at 4 sd.
#[test]
fn child_edge_frequencies_match_marginal_rates() {
    let (n, reps, m) = (200, 1000, 2);
    let base = ModelSpec::sbm_balanced(n, 2, 0.3, 0.05, 0.6, m, 0);
    let pm = build_parameter_matrix(&base).unwrap();
    let mut counts = vec![vec![0u32; n * n]; m];
    for rep in 0..reps {
        let fam = sample_family_with(&base.with_seed(1000 + rep as u64), &pm);
        for (k, child) in fam.children_aligned.iter().enumerate() {
            for (i, j) in child.edges() {
                counts[k][i * n + j] += 1;
            }
        }
    }
    let (mut exceed, mut expected) = (0usize, 0.0f64);
    // pooled (observed, trials, rate) per distinct rate
    let mut pooled: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let rate = pm.prob(i, j) * base.s;
            let sd = (reps as f64 * rate * (1.0 - rate)).sqrt();
            let tail = two_sided_tail(reps, rate, 4.0);
            for c in &counts {
                let x = c[i * n + j] as f64;
                if (x - reps as f64 * rate).abs() >= 4.0 * sd {
                    exceed += 1;
                }
                expected += tail;
                match pooled.iter_mut().find(|p| p.2 == rate) {
                    Some(p) => {
                        p.0 += x;
                        p.1 += reps as f64;
                    }
                    None => pooled.push((x, reps as f64, rate)),
                }
            }
        }
    }
    assert_eq!(pooled.len(), 2);
    assert!(
        (exceed as f64) <= expected + 4.0 * expected.sqrt(),
        "{exceed} pairs beyond 4 sd, {expected:.2} expected"
    );
    for (x, trials, rate) in pooled {
        let z = (x - trials * rate) / (trials * rate * (1.0 - rate)).sqrt();
        assert!(z.abs() < 4.0, "pooled rate {rate}: z = {z}");
    }
}

#[test]
fn geometric_edges_respect_the_radius() {
    let spec = ModelSpec::rgg(3000, 0.5, 0.05, 0.7, 3, 44);
    let pm = build_parameter_matrix(&spec).unwrap();
    let fam = sample_family_with(&spec, &pm);
    let Latent::Points(points) = &fam.latent else {
        panic!("geometric family must record its points")
    };
    assert_eq!(points.len(), 3000);
    assert!(fam.parent.edge_count() > 0);
    for (i, j) in fam.parent.edges() {
        let (a, b) = (points[i], points[j]);
        assert!(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() <= 0.05);
    }
    // pairs beyond the radius have zero probability
    for i in (0..3000).step_by(97) {
        for j in (0..3000).step_by(89) {
            let (a, b) = (points[i], points[j]);
            if i != j && ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() > 0.05 {
                assert_eq!(pm.prob(i, j), 0.0);
            }
        }
    }
}
