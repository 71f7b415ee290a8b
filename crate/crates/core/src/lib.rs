//! Bayesian Gaussian-mixture copula modeling and imputation for mixed-type
//! data with values missing at random.
//!
//! The model couples a rank-probit likelihood (ranks for numeric variables,
//! diagonal-orthant probit events for unordered categoricals) with a latent
//! mixture of factor models, sampled by Gibbs. Marginal distributions are
//! recovered per posterior draw through the margin adjustment, which maps
//! ordered latent values through the mixture marginal CDF and remains
//! consistent under MAR, unlike the observed-data ECDF.
//!
//! Crate layout:
//! - [`data`]: typed mixed datasets, CSV/schema ingestion, latent-column
//!   expansion for categorical variables.
//! - [`model`]: mixture-copula state, hyperparameters, marginal CDF/quantile.
//! - [`sampler`]: truncation bounds, truncated-normal draws, the Gibbs sweep
//!   and chain driver.
//! - [`margins`]: per-draw marginal CDF estimates and their inverses.
//! - [`imputation`]: multiple imputation, posterior-predictive datasets,
//!   Rubin pooling, stratified summaries.
//! - [`simbench`]: simulation-study generators and the benchmark harness.

pub mod data;
pub mod error;
pub mod imputation;
pub mod interp;
pub mod margins;
pub mod model;
pub mod sampler;
pub mod simbench;
pub(crate) mod stats;

pub use error::{Error, Result};
