//! Cross-module properties: the dynamic program against exhaustive search,
//! invariances of the similarity, and consistency of the reconstruction.

use etw::hellinger::hellinger_affinity;
use etw::io::{parse_similarity_csv, write_similarity_csv};
use etw::oracle::brute_force_similarity;
use etw::synth::{random_instance, random_series};
use etw::{
    build_similarity_matrix, elastic_similarity, evaluate_objective, exp_kernel,
    PiecewiseLinearDiffeo, ValueMetric,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn dynamic_program_equals_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..60 {
        let (f, g, c) = random_instance(&mut rng, 5, 5, 0.05);
        let dp = elastic_similarity(&f, &g, &c).unwrap();
        let (bf, bf_path) = brute_force_similarity(&f, &g, &c).unwrap();
        assert!(
            (dp.value - bf).abs() <= 1e-9,
            "dp {} vs exhaustive {bf}",
            dp.value
        );
        assert_eq!(dp.path.moves(), bf_path.moves());
    }
}

#[test]
fn aligning_a_series_with_itself_is_perfect() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for metric in [ValueMetric::Euclidean, ValueMetric::Manhattan] {
        for _ in 0..20 {
            let len = rng.gen_range(1..30);
            let dim = rng.gen_range(1..4);
            let f = random_series(&mut rng, len, dim);
            let c = build_similarity_matrix(&f, &f, |x, y| exp_kernel(x, y, metric)).unwrap();
            let r = elastic_similarity(&f, &f, &c).unwrap();
            assert!((r.value - 1.0).abs() <= 1e-12, "value {}", r.value);
            assert_eq!(r.alpha, PiecewiseLinearDiffeo::identity());
        }
    }
}

#[test]
fn transposing_the_instance_swaps_the_roles() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..30 {
        let (f, g, c) = random_instance(&mut rng, 12, 12, 0.05);
        let a = elastic_similarity(&f, &g, &c).unwrap().value;
        let b = elastic_similarity(&g, &f, &c.transpose()).unwrap().value;
        assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }
}

#[test]
fn reconstruction_attains_the_optimal_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for _ in 0..30 {
        let (f, g, c) = random_instance(&mut rng, 12, 12, 0.05);
        let r = elastic_similarity(&f, &g, &c).unwrap();
        let obj = evaluate_objective(&f, &g, &c, &r.alpha).unwrap();
        assert!((obj - r.value).abs() <= 1e-12, "obj {obj} vs {}", r.value);
        // The reconstructed warp is a full citizen of the warp space.
        assert_eq!(hellinger_affinity(&r.alpha, &r.alpha), 1.0);
    }
}

#[test]
fn values_stay_strictly_inside_the_unit_interval() {
    // Every similarity is below 1, so no alignment can reach 1 either.
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    for _ in 0..30 {
        let (f, g, c) = random_instance(&mut rng, 10, 10, 0.05);
        let r = elastic_similarity(&f, &g, &c).unwrap();
        assert!(r.value > 0.0 && r.value < 1.0, "value {}", r.value);
    }
}

#[test]
fn similarity_grids_survive_the_csv_format() {
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    for _ in 0..10 {
        let (f, g, c) = random_instance(&mut rng, 9, 9, 0.05);
        let before = elastic_similarity(&f, &g, &c).unwrap().value;
        let parsed =
            parse_similarity_csv(&write_similarity_csv(&c), c.rows(), c.cols()).unwrap();
        assert_eq!(c.entries(), parsed.entries());
        let after = elastic_similarity(&f, &g, &parsed).unwrap().value;
        assert_eq!(before, after);
    }
}
