//! Standard-normal helpers shared across the crate.
//!
//! CDF values are computed through the complementary error function so the
//! tails do not cancel.

use statrs::function::erf;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erf::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal survival function 1 - Phi(x).
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * erf::erfc(x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal quantile, p in (0, 1).
pub fn std_normal_quantile(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    std::f64::consts::SQRT_2 * erf::erf_inv(2.0 * p - 1.0)
}

/// CDF of N(mean, sd^2) evaluated at x.
pub fn normal_cdf(x: f64, mean: f64, sd: f64) -> f64 {
    std_normal_cdf((x - mean) / sd)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance (divide by n).
pub fn pop_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// Sample variance (divide by n - 1).
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Type-1 (inverse-ECDF) sample quantile.
pub fn quantile_type1(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&q));
    let n = sorted.len();
    let rank = (q * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_matches_known_values() {
        assert!((std_normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((std_normal_cdf(1.959963985) - 0.975).abs() < 1e-9);
        // far tail stays meaningful through erfc
        let tail = std_normal_sf(10.0);
        assert!(tail > 7.6e-24 && tail < 7.7e-24);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for &p in &[1e-6, 0.01, 0.3, 0.5, 0.9, 1.0 - 1e-6] {
            let z = std_normal_quantile(p);
            assert!((std_normal_cdf(z) - p).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn type1_quantile_definition() {
        let xs: Vec<f64> = (0..=30).map(f64::from).collect();
        assert_eq!(quantile_type1(&xs, 0.9), 27.0);
        assert_eq!(quantile_type1(&xs, 0.0), 0.0);
        assert_eq!(quantile_type1(&xs, 1.0), 30.0);
    }
}
