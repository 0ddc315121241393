//! Symmetric-rate capacities for two transmitters.
//!
//! The symmetric capacity of a bound is `sup_ρ sym_rate(region(ρ))`. It is
//! located by a uniform ρ grid followed by golden-section refinement in the
//! bracket around the grid argmax.

use rayon::prelude::*;

use crate::channel::{CorrelationParam, GaussianChannel};
use crate::error::{Error, Result};
use crate::region::{family_sym_capacity, ParamDescriptor, RateRegion, RegionFamily};
use crate::scalar::Real;

use super::{inner_region, outer_region_scalar, rho_grid};

/// Target bracket width for the refinement step.
pub const REFINE_TOL: f64 = 1e-6;

/// Default grid step.
pub const DEFAULT_RHO_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymCapacity<T> {
    pub inner: T,
    pub outer: T,
    pub gap: T,
    pub rho_inner: T,
    pub rho_outer: T,
}

/// Maximizes `f` on `[lo, hi]` assuming unimodality; returns `(x, f(x))`.
pub fn golden_section_max<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = (lo + hi) / T::lit(2.0);
    (x, f(x))
}

/// Grid search plus refinement of `sym_rate(region(ρ))` over `ρ ∈ [0,1]`.
/// Returns `(capacity, argmax ρ)`; ties keep the smaller ρ.
pub fn maximize_sym_rate<T: Real>(
    region: impl Fn(CorrelationParam<T>) -> RateRegion<T> + Sync,
    step: f64,
) -> Result<(T, T)> {
    let grid = rho_grid::<T>(step)?;
    let members: Vec<_> = grid.par_iter().map(|&r| (ParamDescriptor::Rho(r), region(r))).collect();
    let family = RegionFamily::new(members)?;
    let (best, param) = family_sym_capacity(&family);
    let best_rho = param.rho();

    let step_t = T::lit(step);
    let lo = if best_rho > step_t { best_rho - step_t } else { T::zero() };
    let hi = if best_rho + step_t < T::one() { best_rho + step_t } else { T::one() };
    let (x, fx) = golden_section_max(
        |r| region(CorrelationParam::clamped(r)).sym_rate(),
        lo,
        hi,
        T::lit(REFINE_TOL),
    );
    Ok(if fx > best { (fx, x) } else { (best, best_rho) })
}

/// Symmetric capacities of the two-transmitter inner and outer bounds.
/// `step` is the ρ-grid resolution.
pub fn sym_capacity_bounds<T: Real>(ch: &GaussianChannel<T>, step: f64) -> Result<SymCapacity<T>> {
    if ch.num_tx() != 2 {
        return Err(Error::Unsupported(format!("exactly two transmitters (channel has {})", ch.num_tx())));
    }
    let (inner, rho_inner) = maximize_sym_rate(|r| inner_region(ch, r), step)?;
    let (outer, rho_outer) =
        maximize_sym_rate(|r| outer_region_scalar(ch, r).expect("two transmitters"), step)?;
    Ok(SymCapacity { inner, outer, gap: outer - inner, rho_inner, rho_outer })
}

fn require_positive<T: Real>(snr1: T, snr2: T) -> Result<()> {
    if snr1 > T::zero() && snr2 > T::zero() && snr1.is_finite_value() && snr2.is_finite_value() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("SNRs must be positive and finite, got ({snr1}, {snr2})")))
    }
}

/// High-SNR symmetric capacity `½ log2(SNR1 + SNR2 + 2√(SNR1·SNR2))` of the
/// two-receiver symmetric channel.
pub fn asymptotic_sym_capacity<T: Real>(snr1: T, snr2: T) -> Result<T> {
    require_positive(snr1, snr2)?;
    Ok((snr1 + snr2 + T::lit(2.0) * (snr1 * snr2).sqrt()).log2() / T::lit(2.0))
}

/// High-SNR optimal correlations `(ρ*_in, ρ*_out)` with
/// `ρ*_in = 1 - √(SNR1 + SNR2 + 2√(SNR1·SNR2)) / (SNR1 + SNR2)` clamped into
/// `[0, 1]` and `ρ*_out = √ρ*_in`.
pub fn optimal_rho_asymptotic<T: Real>(snr1: T, snr2: T) -> Result<(T, T)> {
    require_positive(snr1, snr2)?;
    let total = snr1 + snr2;
    let raw = T::one() - (total + T::lit(2.0) * (snr1 * snr2).sqrt()).sqrt() / total;
    let rho_in = CorrelationParam::clamped(raw).value();
    Ok((rho_in, rho_in.sqrt()))
}

/// Symmetric nonfeedback capacity of the two-receiver symmetric channel:
/// `min{log2(1+SNR1), log2(1+SNR2), ½ log2(1+SNR1+SNR2)}`. Inputs must be
/// nonnegative.
pub fn nonfeedback_sym_capacity<T: Real>(snr1: T, snr2: T) -> T {
    let single = (T::one() + snr1).log2().min((T::one() + snr2).log2());
    single.min(mac_sym_capacity_rx1(snr1, snr2))
}

/// Symmetric capacity of the MAC seen by receiver 1: `½ log2(1+SNR1+SNR2)`.
pub fn mac_sym_capacity_rx1<T: Real>(snr1: T, snr2: T) -> T {
    (T::one() + snr1 + snr2).log2() / T::lit(2.0)
}
