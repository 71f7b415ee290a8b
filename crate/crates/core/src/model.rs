//! Gaussian mixture copula parameterization: hyperparameters and priors, the
//! per-draw state, and the induced marginal CDF and its inverse.
//!
//! The latent model places a truncated stick-breaking mixture on k-dimensional
//! factors eta, with z | eta ~ N(Lambda eta, Sigma). Marginalizing the factors
//! gives a p*-dimensional Gaussian mixture with component means Lambda mu_h and
//! covariances Lambda Delta_h Lambda' + Sigma, whose j-th marginal drives both
//! the margin adjustment and imputation.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats;

/// Prior and truncation constants for the mixture-of-factor-models copula.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hyperparams {
    /// Stick-breaking truncation level H.
    pub truncation: usize,
    /// Latent factor dimension k.
    pub factor_dim: usize,
    /// NIW scale delta; prior scale matrix is delta^2 I_k.
    pub niw_scale: f64,
    /// NIW concentration kappa_0.
    pub niw_kappa: f64,
    /// NIW degrees of freedom nu_0.
    pub niw_dof: f64,
    /// NIW mean mu_0 (length k).
    pub niw_mean: Vec<f64>,
    /// Gamma(a, b) prior on the stick concentration alpha_pi.
    pub a_alpha: f64,
    pub b_alpha: f64,
    /// Gamma(a, b) prior on the idiosyncratic precisions 1/sigma_j^2.
    pub a_sigma: f64,
    pub b_sigma: f64,
    /// Column-shrinkage prior on the loadings: Gamma(a1, 1) first increment,
    /// Gamma(a2, 1) later increments, Gamma(nu_phi/2, nu_phi/2) local scales.
    pub a1: f64,
    pub a2: f64,
    pub nu_phi: f64,
    /// Ranked latent columns with more unique observed values than this skip
    /// rank resampling and keep their pseudo-data latents fixed.
    pub resample_threshold: usize,
}

/// Default hyperparameters for a latent dimension of `p_star`:
/// k = ceil(0.7 p*), delta = 10, kappa0 = 0.001, nu0 = k + 2, mu0 = 0,
/// a1 = 2, a2 = 3, nu_phi = 3, resample threshold 350, H = 20, and unit
/// Gamma priors on alpha_pi and the idiosyncratic precisions.
pub fn default_hyperparams(p_star: usize) -> Hyperparams {
    assert!(p_star >= 1, "p_star must be at least 1");
    let k = (0.7 * p_star as f64).ceil() as usize;
    Hyperparams {
        truncation: 20,
        factor_dim: k,
        niw_scale: 10.0,
        niw_kappa: 0.001,
        niw_dof: (k + 2) as f64,
        niw_mean: vec![0.0; k],
        a_alpha: 1.0,
        b_alpha: 1.0,
        a_sigma: 1.0,
        b_sigma: 1.0,
        a1: 2.0,
        a2: 3.0,
        nu_phi: 3.0,
        resample_threshold: 350,
    }
}

impl Hyperparams {
    /// Change the factor dimension, keeping nu_0 = k + 2 and resizing mu_0.
    pub fn with_factor_dim(mut self, k: usize) -> Self {
        self.factor_dim = k;
        self.niw_dof = (k + 2) as f64;
        self.niw_mean = vec![0.0; k];
        self
    }

    pub fn validate(&self, p_star: usize) -> Result<()> {
        if self.truncation < 1 {
            return Err(Error::Config("truncation level H must be >= 1".into()));
        }
        if self.factor_dim < 1 || self.factor_dim > p_star {
            return Err(Error::Config(format!(
                "factor dimension k = {} must satisfy 1 <= k <= p* = {p_star}",
                self.factor_dim
            )));
        }
        if self.niw_dof < self.factor_dim as f64 + 2.0 {
            return Err(Error::Config(format!(
                "nu0 = {} must be >= k + 2 = {}",
                self.niw_dof,
                self.factor_dim + 2
            )));
        }
        if self.niw_mean.len() != self.factor_dim {
            return Err(Error::Config(format!(
                "mu0 has length {}, expected k = {}",
                self.niw_mean.len(),
                self.factor_dim
            )));
        }
        let positives = [
            ("delta", self.niw_scale),
            ("kappa0", self.niw_kappa),
            ("a_alpha", self.a_alpha),
            ("b_alpha", self.b_alpha),
            ("a_sigma", self.a_sigma),
            ("b_sigma", self.b_sigma),
            ("a1", self.a1),
            ("a2", self.a2),
            ("nu_phi", self.nu_phi),
        ];
        for (name, v) in positives {
            if !(v > 0.0) {
                return Err(Error::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Stick-breaking weights pi_h = V_h prod_{l<h} (1 - V_l).
///
/// The truncation closes the stick: the final fraction must equal 1.
pub fn stick_break(sticks: &[f64]) -> Result<Vec<f64>> {
    if sticks.is_empty() {
        return Err(Error::Domain("empty stick vector".into()));
    }
    for &v in sticks {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("stick fraction {v} outside [0, 1]")));
        }
    }
    if *sticks.last().unwrap() != 1.0 {
        return Err(Error::Domain("final stick fraction must equal 1".into()));
    }
    let mut weights = Vec::with_capacity(sticks.len());
    let mut remaining = 1.0;
    for &v in sticks {
        weights.push(v * remaining);
        remaining *= 1.0 - v;
    }
    Ok(weights)
}

/// One posterior draw of the mixture-copula parameters and latent data.
#[derive(Debug, Clone, PartialEq)]
pub struct GmcState {
    /// Loadings Lambda, p* x k.
    pub loadings: DMatrix<f64>,
    /// Idiosyncratic variances sigma_j^2, length p*.
    pub idio_var: DVector<f64>,
    /// Stick fractions V, length H, last entry 1.
    pub sticks: Vec<f64>,
    /// Mixture weights pi, length H.
    pub weights: Vec<f64>,
    /// Component means mu_h, H vectors of length k.
    pub cluster_means: Vec<DVector<f64>>,
    /// Component covariances Delta_h, H SPD matrices k x k.
    pub cluster_covs: Vec<DMatrix<f64>>,
    /// Cluster labels c_i, length n.
    pub labels: Vec<usize>,
    /// Latent factors eta, n x k.
    pub factors: DMatrix<f64>,
    /// Latent data Z, n x p*.
    pub latent: DMatrix<f64>,
    /// Stick concentration alpha_pi.
    pub alpha_pi: f64,
    /// Local shrinkage scales phi, p* x k.
    pub local_scales: DMatrix<f64>,
    /// Global shrinkage increments delta^tau, length k.
    pub shrink_increments: DVector<f64>,
    /// Cumulative shrinkage tau_h = prod_{l<=h} delta^tau_l, length k.
    pub shrink_tau: DVector<f64>,
}

impl GmcState {
    pub fn n_rows(&self) -> usize {
        self.latent.nrows()
    }

    pub fn p_star(&self) -> usize {
        self.latent.ncols()
    }

    pub fn factor_dim(&self) -> usize {
        self.loadings.ncols()
    }

    pub fn truncation(&self) -> usize {
        self.weights.len()
    }

    /// Conditional mean of latent column j for row i: lambda_j' eta_i.
    pub fn cell_mean(&self, row: usize, col: usize) -> f64 {
        let k = self.factor_dim();
        let mut acc = 0.0;
        for t in 0..k {
            acc += self.loadings[(col, t)] * self.factors[(row, t)];
        }
        acc
    }

    /// Check the structural invariants of a draw; used by tests and after
    /// deserialization.
    pub fn check_invariants(&self) -> Result<()> {
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Numeric(format!("mixture weights sum to {sum}")));
        }
        for (h, cov) in self.cluster_covs.iter().enumerate() {
            if cov.clone().cholesky().is_none() {
                return Err(Error::Numeric(format!("Delta_{h} is not positive definite")));
            }
        }
        let mut prod = 1.0;
        for h in 0..self.shrink_tau.len() {
            prod *= self.shrink_increments[h];
            if (self.shrink_tau[h] - prod).abs() > 1e-9 * prod.max(1.0) {
                return Err(Error::Numeric(format!(
                    "tau_{h} = {} is not the cumulative product {prod}",
                    self.shrink_tau[h]
                )));
            }
        }
        if self.idio_var.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Numeric("non-positive idiosyncratic variance".into()));
        }
        Ok(())
    }

    /// Per-component marginal means and standard deviations of each latent
    /// column under the current draw.
    pub fn component_marginals(&self) -> ComponentMarginal {
        ComponentMarginal::from_state(self)
    }

    /// Marginal CDF psi_j of latent column j.
    pub fn marginal_cdf(&self, col: usize, z: f64) -> f64 {
        self.component_marginals().cdf(col, z)
    }

    /// Inverse of the marginal CDF psi_j.
    pub fn marginal_quantile(&self, col: usize, u: f64) -> Result<f64> {
        self.component_marginals().quantile(col, u)
    }
}

/// Marginal mean and standard deviation of every latent column under each
/// mixture component: m_hj = (Lambda mu_h)_j and
/// s_hj^2 = (Lambda Delta_h Lambda' + Sigma)_jj.
#[derive(Debug, Clone)]
pub struct ComponentMarginal {
    /// H x p* means.
    means: DMatrix<f64>,
    /// H x p* standard deviations.
    sds: DMatrix<f64>,
    weights: Vec<f64>,
}

impl ComponentMarginal {
    pub fn from_state(state: &GmcState) -> Self {
        let h_total = state.truncation();
        let p = state.p_star();
        let mut means = DMatrix::zeros(h_total, p);
        let mut sds = DMatrix::zeros(h_total, p);
        for h in 0..h_total {
            let mu = &state.cluster_means[h];
            let delta = &state.cluster_covs[h];
            for j in 0..p {
                let lam_j = state.loadings.row(j).transpose();
                means[(h, j)] = lam_j.dot(mu);
                let var = (delta * &lam_j).dot(&lam_j) + state.idio_var[j];
                sds[(h, j)] = var.sqrt();
            }
        }
        ComponentMarginal {
            means,
            sds,
            weights: state.weights.clone(),
        }
    }

    /// Build directly from per-component marginals; weights must sum to 1.
    pub fn from_parts(means: DMatrix<f64>, sds: DMatrix<f64>, weights: Vec<f64>) -> Self {
        assert_eq!(means.nrows(), weights.len());
        assert_eq!(means.shape(), sds.shape());
        ComponentMarginal { means, sds, weights }
    }

    pub fn n_components(&self) -> usize {
        self.weights.len()
    }

    pub fn mean(&self, h: usize, col: usize) -> f64 {
        self.means[(h, col)]
    }

    pub fn sd(&self, h: usize, col: usize) -> f64 {
        self.sds[(h, col)]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// psi_j(z) = sum_h pi_h Phi((z - m_hj) / s_hj).
    pub fn cdf(&self, col: usize, z: f64) -> f64 {
        let mut acc = 0.0;
        for h in 0..self.weights.len() {
            if self.weights[h] == 0.0 {
                continue;
            }
            acc += self.weights[h] * stats::normal_cdf(z, self.means[(h, col)], self.sds[(h, col)]);
        }
        acc
    }

    /// Generalized inverse of psi_j by bracketing bisection.
    ///
    /// The bracket starts at the component means extended by ten times the
    /// largest component standard deviation and grows geometrically until it
    /// straddles u; bisection then runs to |psi(z) - u| <= 1e-10 with a
    /// 200-iteration cap.
    pub fn quantile(&self, col: usize, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile level {u} outside (0, 1)")));
        }
        let mut m_lo = f64::INFINITY;
        let mut m_hi = f64::NEG_INFINITY;
        let mut s_max: f64 = 0.0;
        for h in 0..self.weights.len() {
            if self.weights[h] == 0.0 {
                continue;
            }
            m_lo = m_lo.min(self.means[(h, col)]);
            m_hi = m_hi.max(self.means[(h, col)]);
            s_max = s_max.max(self.sds[(h, col)]);
        }
        let mut lo = m_lo - 10.0 * s_max;
        let mut hi = m_hi + 10.0 * s_max;
        let mut span = hi - lo;
        while self.cdf(col, lo) > u {
            lo -= span;
            span *= 2.0;
        }
        span = hi - lo;
        while self.cdf(col, hi) < u {
            hi += span;
            span *= 2.0;
        }

        let mut mid = 0.5 * (lo + hi);
        for _ in 0..200 {
            mid = 0.5 * (lo + hi);
            let f = self.cdf(col, mid);
            if (f - u).abs() <= 1e-10 {
                return Ok(mid);
            }
            if f < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(mid)
    }
}

/// Marginal CDF of latent column j under a posterior draw.
pub fn mixture_marginal_cdf(col: usize, z: f64, state: &GmcState) -> f64 {
    state.marginal_cdf(col, z)
}

/// Inverse marginal CDF of latent column j under a posterior draw.
pub fn mixture_marginal_quantile(col: usize, u: f64, state: &GmcState) -> Result<f64> {
    state.marginal_quantile(col, u)
}

/// Predictive level probabilities for an orthant-coded variable with k >= 3
/// latent columns: P(level m) is proportional to
/// [1 - Phi(0; mean_m, sd_m^2)] prod_{l != m} Phi(0; mean_l, sd_l^2),
/// normalized over levels. Computed in log space.
pub fn orthant_level_probs(means: &[f64], sds: &[f64]) -> Vec<f64> {
    debug_assert_eq!(means.len(), sds.len());
    let kc = means.len();
    let ln_pos: Vec<f64> = (0..kc)
        .map(|m| stats::std_normal_cdf(means[m] / sds[m]).max(1e-300).ln())
        .collect();
    let ln_neg: Vec<f64> = (0..kc)
        .map(|m| stats::std_normal_sf(means[m] / sds[m]).max(1e-300).ln())
        .collect();
    let ln_neg_total: f64 = ln_neg.iter().sum();
    let ln_raw: Vec<f64> = (0..kc)
        .map(|m| ln_pos[m] + ln_neg_total - ln_neg[m])
        .collect();
    let max = ln_raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = ln_raw.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    probs
}

/// Predictive probability of the positive level of a sign-coded binary
/// variable: P(z > 0) = 1 - Phi(0; mean, sd^2).
pub fn binary_positive_prob(mean: f64, sd: f64) -> f64 {
    stats::std_normal_cdf(mean / sd)
}

/// Serialization mirror of [`GmcState`] with row-major nested matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GmcStateRecord {
    pub loadings: Vec<Vec<f64>>,
    pub idio_var: Vec<f64>,
    pub sticks: Vec<f64>,
    pub weights: Vec<f64>,
    pub cluster_means: Vec<Vec<f64>>,
    pub cluster_covs: Vec<Vec<Vec<f64>>>,
    pub labels: Vec<usize>,
    pub factors: Vec<Vec<f64>>,
    pub latent: Vec<Vec<f64>>,
    pub alpha_pi: f64,
    pub local_scales: Vec<Vec<f64>>,
    pub shrink_increments: Vec<f64>,
    pub shrink_tau: Vec<f64>,
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn from_rows(rows: &[Vec<f64>], ncols_if_empty: usize) -> DMatrix<f64> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(ncols_if_empty, |r| r.len());
    DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j])
}

impl From<&GmcState> for GmcStateRecord {
    fn from(s: &GmcState) -> Self {
        GmcStateRecord {
            loadings: to_rows(&s.loadings),
            idio_var: s.idio_var.iter().cloned().collect(),
            sticks: s.sticks.clone(),
            weights: s.weights.clone(),
            cluster_means: s.cluster_means.iter().map(|m| m.iter().cloned().collect()).collect(),
            cluster_covs: s.cluster_covs.iter().map(to_rows).collect(),
            labels: s.labels.clone(),
            factors: to_rows(&s.factors),
            latent: to_rows(&s.latent),
            alpha_pi: s.alpha_pi,
            local_scales: to_rows(&s.local_scales),
            shrink_increments: s.shrink_increments.iter().cloned().collect(),
            shrink_tau: s.shrink_tau.iter().cloned().collect(),
        }
    }
}

impl From<&GmcStateRecord> for GmcState {
    fn from(r: &GmcStateRecord) -> Self {
        let k = r.shrink_tau.len();
        GmcState {
            loadings: from_rows(&r.loadings, k),
            idio_var: DVector::from_vec(r.idio_var.clone()),
            sticks: r.sticks.clone(),
            weights: r.weights.clone(),
            cluster_means: r.cluster_means.iter().map(|m| DVector::from_vec(m.clone())).collect(),
            cluster_covs: r.cluster_covs.iter().map(|m| from_rows(m, k)).collect(),
            labels: r.labels.clone(),
            factors: from_rows(&r.factors, k),
            latent: from_rows(&r.latent, r.loadings.len()),
            alpha_pi: r.alpha_pi,
            local_scales: from_rows(&r.local_scales, k),
            shrink_increments: DVector::from_vec(r.shrink_increments.clone()),
            shrink_tau: DVector::from_vec(r.shrink_tau.clone()),
        }
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    /// Hand-assembled state for marginal tests: one latent column, explicit
    /// component means/sds/weights realized through a diagonal construction.
    pub fn single_column_state(means: &[f64], sds: &[f64], weights: &[f64]) -> ComponentMarginal {
        let h = weights.len();
        let means = DMatrix::from_fn(h, 1, |i, _| means[i]);
        let sds = DMatrix::from_fn(h, 1, |i, _| sds[i]);
        ComponentMarginal::from_parts(means, sds, weights.to_vec())
    }
}
