//! Medium-scale smoke runs: separated blobs, auto gammas, reduction on
//! and off.

mod common;

use common::rng;
use rand::Rng;

use mssc::clustering::mssc_objective;
use mssc::dataset::DataSet;
use mssc::params::ControlParams;
use mssc::verify::{verify_local, Classification};
use mssc::{incremental, CentroidSystem};

/// Three well-separated blobs of 100 points each.
fn blobs() -> DataSet {
    let mut r = rng(1717);
    let centers = [[0.0, 0.0], [10.0, 10.0], [20.0, 0.0]];
    let mut points = Vec::new();
    for c in centers {
        for _ in 0..100 {
            points.push(vec![
                c[0] + r.random_range(-1.0..1.0),
                c[1] + r.random_range(-1.0..1.0),
            ]);
        }
    }
    DataSet::new(points).unwrap()
}

#[test]
fn blobs_recovered_with_auto_gammas() {
    let data = blobs();
    let params = ControlParams::recommended(data.len());
    assert_eq!(
        (params.gamma1(), params.gamma2(), params.gamma3()),
        (0.5, 0.8, 1.5)
    );
    let (x, assignment, trace) = incremental::version2(&data, 3, &params).unwrap();

    // Each centroid sits near one blob center and each cluster holds one
    // blob.
    let centers = [[0.0, 0.0], [10.0, 10.0], [20.0, 0.0]];
    for c in centers {
        let close = x
            .centroids()
            .iter()
            .any(|b| (b[0] - c[0]).abs() < 0.5 && (b[1] - c[1]).abs() < 0.5);
        assert!(close, "no centroid near blob center {c:?}");
    }
    let mut sizes: Vec<usize> = assignment.clusters.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![100, 100, 100]);

    // Far below the single-centroid variance.
    let single = CentroidSystem::new(vec![data.barycenter()]).unwrap();
    assert!(trace.final_objective < 0.05 * mssc_objective(&data, &single));

    let report = verify_local(&data, &x, 1e-9);
    assert_eq!(
        report.classification,
        Classification::NontrivialLocalSolution
    );
}

#[test]
fn reduction_shrinks_the_pool_and_keeps_the_answer() {
    let data = blobs();
    let base = ControlParams::recommended(data.len());
    let reduced = base.clone().with_reduction(true);

    let (_, _, plain) = incremental::version2(&data, 3, &base).unwrap();
    let (x, _, fast) = incremental::version2(&data, 3, &reduced).unwrap();

    // The reduced pool was actually applied and is smaller than the data.
    let pools: Vec<usize> = fast
        .levels
        .iter()
        .filter_map(|l| l.cascade.reduced_pool)
        .collect();
    assert!(!pools.is_empty(), "reduction never engaged");
    for pool in &pools {
        assert!(*pool < data.len());
    }
    assert!(x.is_pairwise_distinct());
    // Same blobs, same answer on this landscape.
    assert!((fast.final_objective - plain.final_objective).abs() <= 1e-9);
}

#[test]
fn both_drivers_agree_on_separated_blobs() {
    let data = blobs();
    let params = ControlParams::recommended(data.len());
    let (_, t1) = incremental::version1(&data, 3, &params).unwrap();
    let (_, _, t2) = incremental::version2(&data, 3, &params).unwrap();
    assert!((t1.final_objective - t2.final_objective).abs() <= 1e-9);
}

#[test]
fn literal_threshold_variant_still_solves() {
    let data = blobs();
    let params = ControlParams::recommended(data.len())
        .with_reduction(true)
        .with_reduction_literal_eta1(true);
    let (x, _, trace) = incremental::version2(&data, 3, &params).unwrap();
    assert!(x.is_pairwise_distinct());
    let seq = trace.objective_sequence();
    for w in seq.windows(2) {
        assert!(w[1] < w[0] + 1e-12);
    }
}
