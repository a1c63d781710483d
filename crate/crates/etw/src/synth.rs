//! Seeded generators for tests and benchmarks.
//!
//! Gap and slope ratios are bounded away from zero, so the instances stay
//! clear of the degenerate regimes that the library rejects on purpose
//! (slopes at the admissibility floor, similarities at the clamp).

use crate::diffeo::PiecewiseLinearDiffeo;
use crate::series::{SimilarityMatrix, TimeSeries};
use rand::Rng;

/// Strictly increasing timestamps starting at 0 with the last one below 1,
/// with consecutive gaps within a factor five of each other.
pub fn random_grid(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    assert!(len > 0, "a grid needs at least one instant");
    // One gap per instant; the last gap runs from the final instant to 1.
    let gaps: Vec<f64> = (0..len).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = gaps.iter().sum();
    let mut ts = Vec::with_capacity(len);
    let mut x = 0.0;
    for gap in &gaps[..len - 1] {
        ts.push(x);
        x += gap / total;
    }
    ts.push(x);
    ts
}

/// A series on a random grid with values uniform in `(-1, 1)` per coordinate.
pub fn random_series(rng: &mut impl Rng, len: usize, dim: usize) -> TimeSeries {
    let ts = random_grid(rng, len);
    let values = (0..len)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    TimeSeries::new(ts, values).expect("generated grids satisfy the series invariants")
}

/// A similarity grid with entries uniform in `[lo, 1)`.
pub fn random_similarity(rng: &mut impl Rng, n: usize, m: usize, lo: f64) -> SimilarityMatrix {
    let entries = (0..n * m).map(|_| rng.gen_range(lo..1.0)).collect();
    SimilarityMatrix::new(n, m, entries).expect("generated entries lie in (0, 1]")
}

/// A full alignment instance: two scalar series of sizes up to the given
/// bounds and a similarity grid with entries in `[lo, 1)`.
pub fn random_instance(
    rng: &mut impl Rng,
    max_n: usize,
    max_m: usize,
    lo: f64,
) -> (TimeSeries, TimeSeries, SimilarityMatrix) {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let f = random_series(rng, n, 1);
    let g = random_series(rng, m, 1);
    let c = random_similarity(rng, n, m, lo);
    (f, g, c)
}

/// A piecewise linear warp with up to `max_interior` interior breakpoints
/// and slopes bounded within a few orders of magnitude of 1.
pub fn random_diffeo(rng: &mut impl Rng, max_interior: usize) -> PiecewiseLinearDiffeo {
    let k = rng.gen_range(0..=max_interior);
    let xg: Vec<f64> = (0..=k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let yg: Vec<f64> = (0..=k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let (xt, yt) = (xg.iter().sum::<f64>(), yg.iter().sum::<f64>());
    let mut pts = vec![(0.0, 0.0)];
    let (mut x, mut y) = (0.0, 0.0);
    for l in 0..k {
        x += xg[l] / xt;
        y += yg[l] / yt;
        pts.push((x, y));
    }
    pts.push((1.0, 1.0));
    PiecewiseLinearDiffeo::new(pts).expect("generated breakpoints form a warp")
}
