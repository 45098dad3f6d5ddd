// Temporary dev probe; removed before finalizing.
use pareto_core::distributions::DistributionSpec;
use pareto_core::exact_continuous::p_recurrence;
use pareto_core::monte_carlo::{
    estimate_p, generate_sample, replication_rng, strong_front, strong_front_fast, FrontKind,
};
use std::time::Instant;

fn main() {
    // MC check of the recurrence at the Hwang transition point.
    let t = Instant::now();
    let est = estimate_p(&DistributionSpec::uniform01(), 14, 1_000_000, 400, 7, FrontKind::Strong)
        .unwrap();
    let exact = p_recurrence(14, 1_000_000).unwrap().log_p.prob();
    println!(
        "estimate_p(14, 1e6, 400 reps) = {:.4} +- {:.4}; recurrence {:.4}; z = {:.2} [{:?}]",
        est.estimate,
        est.std_error,
        exact,
        (est.estimate - exact) / est.std_error,
        t.elapsed()
    );

    // criterion 4 timing: continuous k=3 n=100 reps 1e5
    let t = Instant::now();
    let est = estimate_p(&DistributionSpec::uniform01(), 3, 100, 100_000, 11, FrontKind::Strong)
        .unwrap();
    let exact = p_recurrence(3, 100).unwrap().log_p.prob();
    println!
        ("criterion4 cont: {:.5} vs {:.5}, z={:.2} [{:?}]",
        est.estimate, exact, (est.estimate - exact) / est.std_error, t.elapsed());

    // criterion 10: fast front at n=1e6, k=4
    let d = DistributionSpec::uniform01();
    let t = Instant::now();
    let m = generate_sample(&d, 4, 1_000_000, &mut replication_rng(3, 0)).unwrap();
    let gen_t = t.elapsed();
    let t = Instant::now();
    let fast = strong_front_fast(&m);
    println!(
        "strong_front_fast(1e6 x 4): |front| = {} in {:?} (gen {:?})",
        fast.len(),
        t.elapsed(),
        gen_t
    );
    // subsampled verification cost
    let t = Instant::now();
    let msub = generate_sample(&d, 4, 20_000, &mut replication_rng(3, 1)).unwrap();
    assert_eq!(strong_front_fast(&msub), strong_front(&msub));
    println!("subsample verification (2e4): {:?}", t.elapsed());
}
