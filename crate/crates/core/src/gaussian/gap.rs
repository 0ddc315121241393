//! Constant-gap certificates at matched correlation parameters.

use crate::channel::{CorrelationParam, CovarianceParam, GaussianChannel};
use crate::error::Result;
use crate::region::{constraintwise_gap, GapReport, MatchedParams, ParamDescriptor};
use crate::scalar::Real;
use crate::subset::Subset;

use super::{inner_region, outer_region_cov, outer_region_scalar};

const SLACK: f64 = 1e-9;

/// Two-transmitter gap at a common ρ.
///
/// Besides the one-bit per-transmitter bound, checks `δ_m <= log2(1+ρ)` and
/// `|δ_12| <= 1e-9`.
pub fn gap_report_2tx<T: Real>(ch: &GaussianChannel<T>, rho: CorrelationParam<T>) -> Result<GapReport<T>> {
    let outer = outer_region_scalar(ch, rho)?;
    let inner = inner_region(ch, rho);
    let mut report = constraintwise_gap(&outer, &inner, T::one())?;
    report.matched = Some(MatchedParams { outer: ParamDescriptor::Rho(rho), inner: ParamDescriptor::Rho(rho) });

    let slack = T::lit(SLACK);
    let single_limit = (T::one() + rho.value()).log2();
    for m in 0..2 {
        let d = report.deltas[&Subset::singleton(m)];
        report.record(d <= single_limit + slack, || {
            format!("delta_{} = {d} exceeds log2(1+rho) = {single_limit}", m + 1)
        });
    }
    let d12 = report.delta_sum;
    report.record(d12.abs() <= slack, || format!("delta_12 = {d12} is not zero"));
    Ok(report)
}

/// M-transmitter gap between the outer bound at `K_X` and the inner bound at
/// `ρ = min_{m≠n} |[K_X]_mn|`.
///
/// Checks, at slack 1e-9: `δ_S <= |S| log2((1+ρ)|S|)` for proper `S`,
/// `δ_sum <= log2 M`, and `δ_S / |S| <= log2(2(M-1))` for every `S`.
pub fn gap_report_mtx<T: Real>(ch: &GaussianChannel<T>, kx: &CovarianceParam<T>) -> Result<GapReport<T>> {
    let m = ch.num_tx();
    let rho = kx.min_rho();
    let outer = outer_region_cov(ch, kx)?;
    let inner = inner_region(ch, rho);
    let delta = (T::lit(2.0) * T::from_count(m - 1)).log2();
    let mut report = constraintwise_gap(&outer, &inner, delta)?;
    report.matched = Some(MatchedParams {
        outer: ParamDescriptor::Covariance(kx.clone()),
        inner: ParamDescriptor::Rho(rho),
    });

    let slack = T::lit(SLACK);
    for s in Subset::proper(m) {
        let size = T::from_count(s.len());
        let limit = size * ((T::one() + rho.value()) * size).log2();
        let d = report.deltas[&s];
        report.record(d <= limit + slack, || format!("delta_{s} = {d} exceeds |S| log2((1+rho)|S|) = {limit}"));
    }
    let sum_limit = T::from_count(m).log2();
    let ds = report.delta_sum;
    report.record(ds <= sum_limit + slack, || format!("delta_sum = {ds} exceeds log2 M = {sum_limit}"));
    Ok(report)
}
