//! Brute-force references and closed-form evaluators for desk-scale checks.

mod bounds;
mod bruteforce;
mod cut;
mod moments;

pub use bounds::{chernoff_upper, mgf_triple, poissonized_lower_tail, ChernoffForm};
pub use bruteforce::{
    exhaustive_core, intersection_maximizers, kcore_estimator_bruteforce, mle_bruteforce, CapPolicy, KcoreEstimate,
    MleResult, ESTIMATOR_MAX_N, MLE_MAX_M, MLE_MAX_N, SUBSET_MAX_N,
};
pub use cut::{
    binomial, cut_prob, cut_prob_enumerated, cut_prob_exact, dominance_check, empirical_dominance, DominanceReport,
    Exact,
};
pub use moments::{isolated_stats, second_moment_bound, SecondMomentBound, SecondMomentInputs};
