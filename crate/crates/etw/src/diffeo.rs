//! Piecewise-linear increasing bijections of `[0, 1]`.
//!
//! These stand in for smooth reparametrizations of time: every optimal warp
//! produced by the alignment program is piecewise linear, and the restriction
//! to piecewise-linear maps lets the Hellinger affinity be evaluated in
//! closed form instead of by quadrature. A map is stored as its breakpoint
//! list `(τ, α(τ))`, strictly increasing in both coordinates, running from
//! `(0, 0)` to `(1, 1)`.

use crate::error::{Error, Result};

/// A strictly increasing piecewise-linear bijection of `[0, 1]`.
///
/// The stored representation is canonical: interior breakpoints that are
/// exactly collinear with their neighbours are removed at construction, so
/// two values compare equal precisely when they were built from breakpoints
/// describing the same function with the same floating-point coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearDiffeo {
    breakpoints: Vec<(f64, f64)>,
}

impl PiecewiseLinearDiffeo {
    /// Flattest admissible segment slope. Below this, `√slope` and the
    /// inverse map lose all precision; construction refuses instead.
    pub const MIN_SLOPE: f64 = 1e-13;

    /// Steepest admissible segment slope, the reciprocal of [`Self::MIN_SLOPE`],
    /// so that the class is closed under inversion.
    pub const MAX_SLOPE: f64 = 1e13;

    /// Validates breakpoints and builds the canonical representation.
    ///
    /// # Errors
    ///
    /// Rejects fewer than two breakpoints, non-finite coordinates, endpoints
    /// other than exactly `(0, 0)` and `(1, 1)`, coordinates that fail to
    /// increase strictly, and segment slopes outside
    /// `[MIN_SLOPE, MAX_SLOPE]`.
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::TooFewBreakpoints(breakpoints.len()));
        }
        if breakpoints
            .iter()
            .any(|&(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::NonFinite {
                context: "warp breakpoints",
            });
        }
        let first = breakpoints[0];
        if first != (0.0, 0.0) {
            return Err(Error::BadEndpoint {
                x: first.0,
                y: first.1,
            });
        }
        let last = breakpoints[breakpoints.len() - 1];
        if last != (1.0, 1.0) {
            return Err(Error::BadEndpoint {
                x: last.0,
                y: last.1,
            });
        }
        for i in 1..breakpoints.len() {
            if breakpoints[i].0 <= breakpoints[i - 1].0 {
                return Err(Error::NotStrictlyIncreasing {
                    what: "breakpoint abscissae",
                    index: i,
                });
            }
            if breakpoints[i].1 <= breakpoints[i - 1].1 {
                return Err(Error::NotStrictlyIncreasing {
                    what: "breakpoint ordinates",
                    index: i,
                });
            }
        }

        // Canonical form: drop interior points exactly collinear with their
        // neighbours. The test is exact, so only representation redundancy
        // is removed, never geometry.
        let mut canon: Vec<(f64, f64)> = Vec::with_capacity(breakpoints.len());
        for p in breakpoints {
            canon.push(p);
            while canon.len() >= 3 {
                let a = canon[canon.len() - 3];
                let b = canon[canon.len() - 2];
                let c = canon[canon.len() - 1];
                if (b.0 - a.0) * (c.1 - a.1) == (c.0 - a.0) * (b.1 - a.1) {
                    canon.remove(canon.len() - 2);
                } else {
                    break;
                }
            }
        }

        for i in 1..canon.len() {
            let (x0, y0) = canon[i - 1];
            let (x1, y1) = canon[i];
            let slope = (y1 - y0) / (x1 - x0);
            if !(Self::MIN_SLOPE..=Self::MAX_SLOPE).contains(&slope) {
                return Err(Error::SlopeOutOfRange {
                    index: i - 1,
                    slope,
                    min: Self::MIN_SLOPE,
                    max: Self::MAX_SLOPE,
                });
            }
        }
        Ok(PiecewiseLinearDiffeo { breakpoints: canon })
    }

    /// The identity map `τ ↦ τ`.
    pub fn identity() -> Self {
        PiecewiseLinearDiffeo {
            breakpoints: vec![(0.0, 0.0), (1.0, 1.0)],
        }
    }

    /// Canonical breakpoints, from `(0, 0)` to `(1, 1)`.
    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    /// Index of the segment whose x-range contains `x` (the last segment for
    /// `x = 1`).
    fn segment_at(&self, x: f64) -> usize {
        let k = self.breakpoints.partition_point(|&(bx, _)| bx <= x);
        k.clamp(1, self.breakpoints.len() - 1) - 1
    }

    /// Index of the segment whose y-range contains `y`.
    fn segment_at_value(&self, y: f64) -> usize {
        let k = self.breakpoints.partition_point(|&(_, by)| by <= y);
        k.clamp(1, self.breakpoints.len() - 1) - 1
    }

    /// Evaluates the map at `x`, clamping `x` into `[0, 1]`. The endpoint
    /// values are exact: `eval(0) = 0` and `eval(1) = 1`.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let s = self.segment_at(x);
        let (x0, y0) = self.breakpoints[s];
        let (x1, y1) = self.breakpoints[s + 1];
        y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
    }

    /// Evaluates the inverse map at `y`, clamping `y` into `[0, 1]`.
    pub fn eval_inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y >= 1.0 {
            return 1.0;
        }
        let s = self.segment_at_value(y);
        let (x0, y0) = self.breakpoints[s];
        let (x1, y1) = self.breakpoints[s + 1];
        x0 + (x1 - x0) * ((y - y0) / (y1 - y0))
    }

    /// Slope of the segment containing `x` (taking the left segment at a
    /// breakpoint, the first segment at 0).
    pub fn slope_at(&self, x: f64) -> f64 {
        let s = if x <= 0.0 { 0 } else { self.segment_at(x) };
        let (x0, y0) = self.breakpoints[s];
        let (x1, y1) = self.breakpoints[s + 1];
        (y1 - y0) / (x1 - x0)
    }
}
