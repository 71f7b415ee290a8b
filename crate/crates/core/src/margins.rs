//! The margin adjustment: per-draw marginal CDF estimates built from ordered
//! latent values, their monotone interpolation across the variable support,
//! generalized inverses, and the ECDF baseline.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::data::{AugmentedView, MixedDataset, VarKind};
use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::model::{ComponentMarginal, GmcState};

/// How a marginal estimate was formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginKind {
    MarginAdjust,
    Ecdf,
}

/// A monotone CDF estimate for one numeric variable: knots at unique observed
/// values, anchored at pre-specified support bounds where the curve reaches 0
/// and 1 exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginEstimate {
    pub variable: String,
    /// Index of the source variable in the dataset schema.
    pub var_index: usize,
    pub kind: MarginKind,
    /// (x, cumulative probability) at unique observed values, u in (0, 1].
    pub knots: Vec<(f64, f64)>,
    /// Anchor bounds (lo, hi): interpolant(lo) = 0, interpolant(hi) = 1.
    pub support: (f64, f64),
    /// Whether inverse values snap to integer support points.
    pub integral: bool,
    /// Valid value range for inverse output (schema support).
    pub value_lo: f64,
    pub value_hi: f64,
    #[serde(skip)]
    interp: OnceLock<MonotoneCubic>,
}

impl PartialEq for MarginEstimate {
    fn eq(&self, other: &Self) -> bool {
        self.variable == other.variable
            && self.var_index == other.var_index
            && self.kind == other.kind
            && self.knots == other.knots
            && self.support == other.support
            && self.integral == other.integral
            && self.value_lo == other.value_lo
            && self.value_hi == other.value_hi
    }
}

impl MarginEstimate {
    fn interpolant(&self) -> &MonotoneCubic {
        self.interp.get_or_init(|| {
            let mut xs = Vec::with_capacity(self.knots.len() + 2);
            let mut ys = Vec::with_capacity(self.knots.len() + 2);
            xs.push(self.support.0);
            ys.push(0.0);
            for &(x, u) in &self.knots {
                xs.push(x);
                ys.push(u.min(1.0));
            }
            xs.push(self.support.1);
            ys.push(1.0);
            MonotoneCubic::new(xs, ys).expect("anchored knots are valid by construction")
        })
    }

    /// Evaluate the fitted CDF estimate at x.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.interpolant().evaluate(x)
    }
}

/// The latent cut point Z_j^n(x): the largest observed latent whose data value
/// is at most x, kept non-empty below the observed minimum by the minimum's
/// own latent set.
///
/// `y[i]` is the observed cell (None = missing) and `z[i]` the current latent
/// value of the same row.
pub fn latent_cutpoint(y: &[Option<f64>], z: &[f64], x: f64) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut min_z = f64::NEG_INFINITY;
    let mut seen = false;
    for (yi, &zi) in y.iter().zip(z) {
        let Some(yi) = *yi else { continue };
        seen = true;
        if yi < min_y {
            min_y = yi;
            min_z = zi;
        } else if yi == min_y {
            min_z = min_z.max(zi);
        }
        if yi <= x && zi > best {
            best = zi;
        }
    }
    if !seen {
        return Err(Error::Degenerate(
            "<column>".into(),
            "no observed values for margin cut point".into(),
        ));
    }
    Ok(best.max(min_z))
}

/// Knot latents for a numeric column: (x, Z_j^n(x)) at each unique observed x,
/// ascending. The cut points are nondecreasing in x by construction.
pub fn margin_knot_latents(y: &[Option<f64>], z: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut pairs: Vec<(f64, f64)> = y
        .iter()
        .zip(z)
        .filter_map(|(yi, &zi)| yi.map(|v| (v, zi)))
        .collect();
    if pairs.is_empty() {
        return Err(Error::Degenerate(
            "<column>".into(),
            "no observed values for margin knots".into(),
        ));
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut knots: Vec<(f64, f64)> = Vec::new();
    let mut running_max = f64::NEG_INFINITY;
    for (x, zi) in pairs {
        running_max = running_max.max(zi);
        match knots.last_mut() {
            Some(last) if last.0 == x => last.1 = running_max,
            _ => knots.push((x, running_max)),
        }
    }
    Ok(knots)
}

fn anchors_for(
    spec: &crate::data::ColumnSpec,
    x_first: f64,
    x_last: f64,
) -> ((f64, f64), bool, f64, f64) {
    let range = x_last - x_first;
    let (decl_lo, decl_hi) = spec.support_bounds();
    match spec.kind {
        VarKind::Continuous => {
            let pad = if range > 0.0 {
                0.1 * range
            } else {
                (0.1 * x_first.abs()).max(1.0)
            };
            let mut lo = decl_lo.unwrap_or(x_first - pad);
            let mut hi = decl_hi.unwrap_or(x_last + pad);
            if lo >= x_first {
                lo = x_first - pad;
            }
            if hi <= x_last {
                hi = x_last + pad;
            }
            (
                (lo, hi),
                false,
                decl_lo.unwrap_or(f64::NEG_INFINITY),
                decl_hi.unwrap_or(f64::INFINITY),
            )
        }
        VarKind::Count => {
            let pad = (0.1 * range).ceil().max(1.0);
            let mut lo = decl_lo.unwrap_or_else(|| x_first.min(0.0));
            let mut hi = decl_hi.unwrap_or(x_last + pad);
            if lo >= x_first {
                lo = x_first - 1.0;
            }
            if hi <= x_last {
                hi = x_last + pad;
            }
            (
                (lo, hi),
                true,
                decl_lo.map_or(0.0, f64::ceil),
                decl_hi.map_or(f64::INFINITY, f64::floor),
            )
        }
        VarKind::Ordinal => {
            let top = (spec.levels.len() - 1) as f64;
            let lo = if x_first > 0.0 { 0.0 } else { -1.0 };
            let hi = x_last + (0.1 * range).ceil().max(1.0);
            ((lo, hi), true, 0.0, top)
        }
        VarKind::Categorical => unreachable!("categorical variables carry no margin"),
    }
}

fn build_estimate(
    data: &MixedDataset,
    var: usize,
    kind: MarginKind,
    knots: Vec<(f64, f64)>,
) -> MarginEstimate {
    let spec = &data.schema()[var];
    let x_first = knots.first().map(|k| k.0).unwrap();
    let x_last = knots.last().map(|k| k.0).unwrap();
    let (support, integral, value_lo, value_hi) = anchors_for(spec, x_first, x_last);
    MarginEstimate {
        variable: spec.name.clone(),
        var_index: var,
        kind,
        knots,
        support,
        integral,
        value_lo,
        value_hi,
        interp: OnceLock::new(),
    }
}

fn ranked_var_check(data: &MixedDataset, var: usize) -> Result<()> {
    let spec = &data.schema()[var];
    if !spec.is_ranked() {
        return Err(Error::Domain(format!(
            "variable '{}' carries no marginal estimate; its predictive law is categorical",
            spec.name
        )));
    }
    Ok(())
}

/// Margin adjustment for a numeric variable under one posterior draw:
/// u_x = psi_j(Z_j^n(x)) at each unique observed x, interpolated monotonically
/// between support anchors.
pub fn margin_adjust(
    var: usize,
    state: &GmcState,
    data: &MixedDataset,
    view: &AugmentedView,
) -> Result<MarginEstimate> {
    let marg = state.component_marginals();
    margin_adjust_with(var, data, view, &state.latent_column(view, var), &marg)
}

/// Margin adjustment with precomputed component marginals and latent column,
/// for callers evaluating many variables per draw.
pub fn margin_adjust_with(
    var: usize,
    data: &MixedDataset,
    view: &AugmentedView,
    z_col: &[f64],
    marg: &ComponentMarginal,
) -> Result<MarginEstimate> {
    ranked_var_check(data, var)?;
    let latent_col = view.columns_of(var)[0];
    let y = data.column(var);
    let latents = margin_knot_latents(&y, z_col).map_err(|e| match e {
        Error::Degenerate(_, msg) => Error::Degenerate(data.schema()[var].name.clone(), msg),
        other => other,
    })?;
    let knots = latents
        .into_iter()
        .map(|(x, zn)| (x, marg.cdf(latent_col, zn).clamp(1e-15, 1.0)))
        .collect();
    Ok(build_estimate(data, var, MarginKind::MarginAdjust, knots))
}

impl GmcState {
    /// Latent column of a numeric variable as a plain vector.
    pub fn latent_column(&self, view: &AugmentedView, var: usize) -> Vec<f64> {
        let j = view.columns_of(var)[0];
        (0..self.n_rows()).map(|i| self.latent[(i, j)]).collect()
    }
}

/// Observed-data ECDF baseline with the n/(n+1) convention, wrapped in the
/// same interpolation and anchoring machinery as the margin adjustment.
pub fn ecdf(var: usize, data: &MixedDataset) -> Result<MarginEstimate> {
    ranked_var_check(data, var)?;
    let mut observed = data.observed(var);
    if observed.is_empty() {
        return Err(Error::Degenerate(
            data.schema()[var].name.clone(),
            "no observed values for ECDF".into(),
        ));
    }
    observed.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = observed.len() as f64;
    let mut knots: Vec<(f64, f64)> = Vec::new();
    for (idx, &x) in observed.iter().enumerate() {
        let u = (idx + 1) as f64 / (n + 1.0);
        match knots.last_mut() {
            Some(last) if last.0 == x => last.1 = u,
            _ => knots.push((x, u)),
        }
    }
    Ok(build_estimate(data, var, MarginKind::Ecdf, knots))
}

/// Generalized inverse of a margin estimate: the smallest x with
/// interpolant(x) >= u. Count/ordinal results snap to the nearest valid
/// support point no smaller than the pre-image.
pub fn margin_inverse(est: &MarginEstimate, u: f64) -> f64 {
    let u = u.clamp(1e-12, 1.0 - 1e-12);
    let x = est.interpolant().inverse_left(u);
    if est.integral {
        let snapped = (x - 1e-9).ceil();
        snapped.clamp(est.value_lo, est.value_hi)
    } else {
        x.clamp(est.value_lo, est.value_hi)
    }
}
