//! Monotone piecewise-cubic interpolation (Fritsch-Carlson slope limiting).
//!
//! Used to extend step-function margin estimates across the full support of a
//! variable. The curve passes through every knot exactly and is nondecreasing
//! whenever the knot ordinates are nondecreasing.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// Fit through knots with strictly increasing abscissae and nondecreasing
    /// ordinates.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Domain(format!(
                "interpolant needs >= 2 matched knots, got {} x {}",
                xs.len(),
                ys.len()
            )));
        }
        for w in xs.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Domain(format!(
                    "knot abscissae must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for w in ys.windows(2) {
            if w[0] > w[1] {
                return Err(Error::Domain(format!(
                    "knot ordinates must be nondecreasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }

        let n = xs.len();
        let secants: Vec<f64> = (0..n - 1)
            .map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]))
            .collect();

        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            if secants[i - 1] * secants[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                slopes[i] = 0.5 * (secants[i - 1] + secants[i]);
            }
        }

        // Fritsch-Carlson limiter keeps each segment monotone.
        for i in 0..n - 1 {
            if secants[i] == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
            } else {
                let alpha = slopes[i] / secants[i];
                let beta = slopes[i + 1] / secants[i];
                let norm2 = alpha * alpha + beta * beta;
                if norm2 > 9.0 {
                    let t = 3.0 / norm2.sqrt();
                    slopes[i] = t * alpha * secants[i];
                    slopes[i + 1] = t * beta * secants[i];
                }
            }
        }

        Ok(MonotoneCubic { xs, ys, slopes })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// Evaluate at x, clamping outside the knot range.
    pub fn evaluate(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return self.ys[0];
        }
        let n = self.xs.len();
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let seg = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            idx => idx - 1,
        };
        let h = self.xs[seg + 1] - self.xs[seg];
        let t = (x - self.xs[seg]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[seg]
            + h10 * h * self.slopes[seg]
            + h01 * self.ys[seg + 1]
            + h11 * h * self.slopes[seg + 1]
    }

    /// Smallest x with evaluate(x) >= u. Values outside the ordinate range
    /// clamp to the domain edges.
    pub fn inverse_left(&self, u: f64) -> f64 {
        let n = self.xs.len();
        if self.ys[0] >= u {
            return self.xs[0];
        }
        if self.ys[n - 1] < u {
            return self.xs[n - 1];
        }
        // Bracket to the first segment whose right ordinate reaches u, then
        // bisect with the invariant evaluate(hi) >= u > evaluate(lo).
        let seg = self.ys.partition_point(|&y| y < u).max(1) - 1;
        let mut lo = self.xs[seg];
        let mut hi = self.xs[seg + 1];
        if self.evaluate(lo) >= u {
            return lo;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.evaluate(mid) >= u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}
