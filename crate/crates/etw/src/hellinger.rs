//! The Hellinger affinity and its distance variants on time warps.
//!
//! For increasing bijections `α`, `β` of `[0, 1]`, the affinity
//! \[
//! C(\alpha, \beta) = \int_0^1 \sqrt{\alpha'(t)}\,\sqrt{\beta'(t)}\,dt
//! \]
//! is the inner product of the unit vectors `√α'`, `√β'` in the space of
//! square-integrable functions: both have norm `∫ α' = 1`. Hence
//! `0 < C ≤ 1`, with 1 exactly on equal maps, and three distances follow:
//! the sphere angle `θ = arccos C`, its sine `S = √(1 − C²)`, and the chord
//! `H = √(1 − C)`. All three are genuine metrics, and all are invariant
//! under composing both arguments on the right with the same warp, because
//! that is just a change of variables under the integral.
//!
//! On piecewise-linear warps the derivative is a step function, so the
//! integral is a finite sum over the merged breakpoint grid and needs no
//! quadrature; everything here is exact up to rounding.

use crate::diffeo::PiecewiseLinearDiffeo;
use crate::error::Result;

/// Breakpoint abscissae closer than this are treated as one cut when merging
/// grids, so zero-width segments never arise.
const COINCIDENCE_TOL: f64 = 1e-14;

/// The Hellinger affinity `C(a, b) = ∫ √a' √b' dt`, in `(0, 1]`.
///
/// Equal canonical representations short-circuit to exactly 1: they denote
/// the same function, whose affinity is 1 by definition, and summing the
/// segments instead would land within an ulp of 1 where `arccos` then
/// amplifies the rounding into ~1e-8 of spurious distance.
pub fn hellinger_affinity(a: &PiecewiseLinearDiffeo, b: &PiecewiseLinearDiffeo) -> f64 {
    if a.breakpoints() == b.breakpoints() {
        return 1.0;
    }
    let cuts = merged_cuts(a, b);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (l, r) = (w[0], w[1]);
        let mid = l + (r - l) / 2.0;
        total += (r - l) * (a.slope_at(mid) * b.slope_at(mid)).sqrt();
    }
    // Cauchy-Schwarz bounds the exact value by 1; only rounding can exceed it.
    total.min(1.0)
}

/// Sorted union of both breakpoint grids, deduplicated at
/// [`COINCIDENCE_TOL`], starting at 0 and ending at 1.
fn merged_cuts(a: &PiecewiseLinearDiffeo, b: &PiecewiseLinearDiffeo) -> Vec<f64> {
    let mut xs: Vec<f64> = a
        .breakpoints()
        .iter()
        .chain(b.breakpoints())
        .map(|&(x, _)| x)
        .collect();
    xs.sort_by(f64::total_cmp);
    let mut cuts = Vec::with_capacity(xs.len());
    for x in xs {
        match cuts.last() {
            Some(&last) if x - last <= COINCIDENCE_TOL => {}
            _ => cuts.push(x),
        }
    }
    // Both grids contain 0 and 1; deduplication may only have eaten the
    // final 1 into a cut just below it.
    *cuts.last_mut().unwrap() = 1.0;
    cuts
}

/// The sphere angle `θ(a, b) = arccos C(a, b)`, in `[0, π/2)`.
pub fn theta_distance(a: &PiecewiseLinearDiffeo, b: &PiecewiseLinearDiffeo) -> f64 {
    hellinger_affinity(a, b).clamp(-1.0, 1.0).acos()
}

/// The sine distance `S(a, b) = sin θ(a, b) = √(1 − C²)`, in `[0, 1)`.
pub fn sine_distance(a: &PiecewiseLinearDiffeo, b: &PiecewiseLinearDiffeo) -> f64 {
    let c = hellinger_affinity(a, b);
    (1.0 - c * c).max(0.0).sqrt()
}

/// The chord distance `H(a, b) = √(1 − C)`, in `[0, 1)`; satisfies
/// `H² = 2 sin²(θ/2)`.
pub fn hellinger_distance(a: &PiecewiseLinearDiffeo, b: &PiecewiseLinearDiffeo) -> f64 {
    (1.0 - hellinger_affinity(a, b)).max(0.0).sqrt()
}

/// The exact composition `x ↦ outer(inner(x))` as a piecewise-linear warp.
///
/// Breakpoints are the breakpoints of `inner` together with the preimages
/// under `inner` of the breakpoints of `outer`; between those cuts the
/// composition is linear.
///
/// # Errors
///
/// Composition of valid warps is a valid warp mathematically, but the
/// product of two extreme slopes can leave the admissible slope range, in
/// which case construction refuses.
pub fn compose(
    outer: &PiecewiseLinearDiffeo,
    inner: &PiecewiseLinearDiffeo,
) -> Result<PiecewiseLinearDiffeo> {
    let mut xs: Vec<f64> = inner.breakpoints().iter().map(|&(x, _)| x).collect();
    xs.extend(
        outer
            .breakpoints()
            .iter()
            .map(|&(x, _)| inner.eval_inverse(x)),
    );
    xs.sort_by(f64::total_cmp);
    let mut cuts = Vec::with_capacity(xs.len());
    for x in xs {
        match cuts.last() {
            Some(&last) if x - last <= COINCIDENCE_TOL => {}
            _ => cuts.push(x),
        }
    }
    *cuts.last_mut().unwrap() = 1.0;
    let bps: Vec<(f64, f64)> = cuts
        .into_iter()
        .map(|x| (x, outer.eval(inner.eval(x))))
        .collect();
    PiecewiseLinearDiffeo::new(bps)
}

/// The exact inverse warp: every breakpoint `(x, y)` becomes `(y, x)`.
pub fn invert(a: &PiecewiseLinearDiffeo) -> PiecewiseLinearDiffeo {
    let swapped: Vec<(f64, f64)> = a.breakpoints().iter().map(|&(x, y)| (y, x)).collect();
    PiecewiseLinearDiffeo::new(swapped)
        .expect("inverse of a valid warp stays within the admissible slope range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::random_diffeo;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn kinked() -> PiecewiseLinearDiffeo {
        PiecewiseLinearDiffeo::new(vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]).unwrap()
    }

    #[test]
    fn affinity_of_equal_maps_is_exactly_one() {
        let id = PiecewiseLinearDiffeo::identity();
        assert_eq!(hellinger_affinity(&id, &id), 1.0);
        // Same function, redundant representation: canonicalization makes the
        // short-circuit fire.
        let also_id =
            PiecewiseLinearDiffeo::new(vec![(0.0, 0.0), (0.3, 0.3), (1.0, 1.0)]).unwrap();
        assert_eq!(hellinger_affinity(&id, &also_id), 1.0);
        assert_eq!(theta_distance(&id, &also_id), 0.0);
        assert_eq!(sine_distance(&id, &also_id), 0.0);
        assert_eq!(hellinger_distance(&id, &also_id), 0.0);
    }

    #[test]
    fn affinity_matches_the_closed_form_example() {
        // Slopes 1/2 then 3/2 against the identity:
        // C = 0.5·√0.5 + 0.5·√1.5.
        let c = hellinger_affinity(&kinked(), &PiecewiseLinearDiffeo::identity());
        assert_relative_eq!(c, 0.9659258262890682, max_relative = 1e-15);
        assert_relative_eq!(
            theta_distance(&kinked(), &PiecewiseLinearDiffeo::identity()),
            0.26179938779914974,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            sine_distance(&kinked(), &PiecewiseLinearDiffeo::identity()),
            0.258819045102521,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            hellinger_distance(&kinked(), &PiecewiseLinearDiffeo::identity()),
            0.18459191128251476,
            max_relative = 1e-14
        );
    }

    #[test]
    fn affinity_agrees_with_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3 {
            let a = random_diffeo(&mut rng, 6);
            let b = random_diffeo(&mut rng, 6);
            let exact = hellinger_affinity(&a, &b);
            let steps = 1_000_000;
            let h = 1.0 / steps as f64;
            let quad: f64 = (0..steps)
                .map(|k| {
                    let mid = (k as f64 + 0.5) * h;
                    (a.slope_at(mid) * b.slope_at(mid)).sqrt() * h
                })
                .sum();
            assert_relative_eq!(exact, quad, max_relative = 1e-4);
        }
    }

    #[test]
    fn distances_are_symmetric_and_ordered() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let a = random_diffeo(&mut rng, 6);
            let b = random_diffeo(&mut rng, 6);
            assert_eq!(hellinger_affinity(&a, &b), hellinger_affinity(&b, &a));
            let th = theta_distance(&a, &b);
            let s = sine_distance(&a, &b);
            let h = hellinger_distance(&a, &b);
            // sin x ≤ x on [0, π/2].
            assert!(s <= th + 1e-15);
            assert!(th < std::f64::consts::FRAC_PI_2);
            // H² = 2 sin²(θ/2).
            let half = (th / 2.0).sin();
            assert_relative_eq!(h * h, 2.0 * half * half, epsilon = 1e-12);
        }
    }

    #[test]
    fn affinity_is_below_one_for_separated_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut checked = 0;
        while checked < 200 {
            let a = random_diffeo(&mut rng, 6);
            let b = random_diffeo(&mut rng, 6);
            let sup = (0..=1000)
                .map(|k| {
                    let x = k as f64 / 1000.0;
                    (a.eval(x) - b.eval(x)).abs()
                })
                .fold(0.0, f64::max);
            if sup >= 1e-6 {
                assert!(hellinger_affinity(&a, &b) < 1.0);
                checked += 1;
            }
        }
    }

    #[test]
    fn triangle_inequality_holds_for_all_three_distances() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..2000 {
            let a = random_diffeo(&mut rng, 5);
            let b = random_diffeo(&mut rng, 5);
            let c = random_diffeo(&mut rng, 5);
            for d in [theta_distance, sine_distance, hellinger_distance] {
                assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
            }
        }
    }

    #[test]
    fn sine_is_subadditive_on_the_quarter_period() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10_000 {
            let a = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
            let b = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
            assert!((a + b).sin() <= a.sin() + b.sin() + 1e-15);
        }
    }

    #[test]
    fn compose_with_identity_is_identity() {
        let id = PiecewiseLinearDiffeo::identity();
        let a = kinked();
        assert_eq!(compose(&a, &id).unwrap(), a);
        assert_eq!(compose(&id, &a).unwrap(), a);
    }

    #[test]
    fn compose_with_inverse_cancels() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..100 {
            let a = random_diffeo(&mut rng, 6);
            let round = compose(&a, &invert(&a)).unwrap();
            for &(x, y) in round.breakpoints() {
                assert!((y - x).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn invert_swaps_coordinates() {
        let id = PiecewiseLinearDiffeo::identity();
        assert_eq!(invert(&id), id);
        let a = kinked();
        assert_eq!(invert(&a).breakpoints(), &[(0.0, 0.0), (0.25, 0.5), (1.0, 1.0)]);
        assert_eq!(invert(&invert(&a)), a);
    }

    #[test]
    fn affinity_is_right_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..200 {
            let a = random_diffeo(&mut rng, 5);
            let b = random_diffeo(&mut rng, 5);
            let g = random_diffeo(&mut rng, 5);
            let lhs = hellinger_affinity(&compose(&a, &g).unwrap(), &compose(&b, &g).unwrap());
            assert!((lhs - hellinger_affinity(&a, &b)).abs() <= 1e-10);
        }
    }

    #[test]
    fn hop_identities_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let id = PiecewiseLinearDiffeo::identity();
        for _ in 0..200 {
            let a = random_diffeo(&mut rng, 5);
            let b = random_diffeo(&mut rng, 5);
            let hop = hellinger_affinity(&compose(&a, &invert(&b)).unwrap(), &id);
            assert!((hop - hellinger_affinity(&a, &b)).abs() <= 1e-10);
            let mirrored = hellinger_affinity(&invert(&a), &id);
            assert!((mirrored - hellinger_affinity(&a, &id)).abs() <= 1e-10);
        }
    }
}
