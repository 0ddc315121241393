//! Gaussian multicast channel bounds.
//!
//! Every function here evaluates one region at one correlation parameter;
//! the inner and outer bounds are unions of these over ρ (or over `K_X`).
//! Capacities are in bits per channel use (log base 2).

pub mod gap;
pub mod linalg;
pub mod sampling;
pub mod symmetric;

use std::collections::BTreeMap;

use crate::channel::{CorrelationParam, CovarianceParam, GaussianChannel};
use crate::error::{Error, Result};
use crate::region::{Provenance, RateRegion};
use crate::scalar::Real;
use crate::subset::Subset;

use linalg::{c, conditional_covariance, log2_det_gain, CMatrix};

pub use gap::{gap_report_2tx, gap_report_mtx};
pub use linalg::{claim1_check, det_identity_check};
pub use symmetric::{
    asymptotic_sym_capacity, mac_sym_capacity_rx1, maximize_sym_rate, nonfeedback_sym_capacity,
    optimal_rho_asymptotic, sym_capacity_bounds, SymCapacity, DEFAULT_RHO_STEP,
};

/// Columns of the gain matrix indexed by a transmitter subset (K×|S|).
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetGainMatrix<T: Real> {
    subset: Subset,
    matrix: CMatrix<T>,
}

impl<T: Real> SubsetGainMatrix<T> {
    pub fn new(ch: &GaussianChannel<T>, subset: Subset) -> Result<Self> {
        if subset.is_empty() || !subset.is_subset_of(Subset::full(ch.num_tx())) {
            return Err(Error::InvalidSubset(subset.bits()));
        }
        let cols: Vec<usize> = subset.members().collect();
        let matrix = CMatrix::from_fn(ch.num_rx(), cols.len(), |k, j| ch.gain(cols[j], k));
        Ok(Self { subset, matrix })
    }

    /// The complementary columns `G_{S^c}`; `None` when `S` is the full set.
    pub fn complement(ch: &GaussianChannel<T>, subset: Subset) -> Option<Self> {
        let sc = subset.complement(ch.num_tx());
        Self::new(ch, sc).ok()
    }

    pub fn subset(&self) -> Subset {
        self.subset
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }
}

fn require_two_tx<T: Real>(ch: &GaussianChannel<T>) -> Result<()> {
    if ch.num_tx() == 2 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("exactly two transmitters (channel has {})", ch.num_tx())))
    }
}

/// `log2(1 + Σ_m SNR_mk + Σ_{m≠n} w(m,n) √(SNR_mk SNR_nk))` for receiver
/// `k`, summing over ordered pairs.
fn sum_rate_bound<T: Real>(ch: &GaussianChannel<T>, k: usize, weight: impl Fn(usize, usize) -> T) -> T {
    let m = ch.num_tx();
    let mut total = T::one();
    for i in 0..m {
        total += ch.snr(i, k);
        for j in 0..m {
            if i != j {
                total += weight(i, j) * (ch.snr(i, k) * ch.snr(j, k)).sqrt();
            }
        }
    }
    total.log2()
}

fn per_receiver_sums<T: Real>(ch: &GaussianChannel<T>, weight: impl Fn(usize, usize) -> T) -> Vec<T> {
    (0..ch.num_rx()).map(|k| sum_rate_bound(ch, k, &weight)).collect()
}

/// Generalized Cover-Leung inner bound at correlation ρ.
///
/// Proper subsets: `log2 det(I_K + (1-ρ) G_S G_S*)`. Full set, per receiver:
/// `log2(1 + Σ SNR_mk + ρ Σ_{m≠n} √(SNR_mk SNR_nk))`.
pub fn inner_region<T: Real>(ch: &GaussianChannel<T>, rho: CorrelationParam<T>) -> RateRegion<T> {
    let m = ch.num_tx();
    let r = rho.value();
    let mut proper = BTreeMap::new();
    for s in Subset::proper(m) {
        let g = SubsetGainMatrix::new(ch, s).expect("proper subset");
        let w = CMatrix::identity(s.len(), s.len()) * c(T::one() - r);
        proper.insert(s, log2_det_gain(g.matrix(), &w).max(T::zero()));
    }
    RateRegion::from_parts(m, proper, per_receiver_sums(ch, |_, _| r), Provenance::Inner)
        .expect("bounds are finite and nonnegative")
}

/// Two-transmitter inner bound written with the scalar closed forms
/// `log2(1 + (1-ρ) Σ_k SNR_mk)`; agrees with [`inner_region`] for `M = 2`.
pub fn inner_region_scalar<T: Real>(ch: &GaussianChannel<T>, rho: CorrelationParam<T>) -> Result<RateRegion<T>> {
    require_two_tx(ch)?;
    let r = rho.value();
    let proper = BTreeMap::from([
        (Subset::singleton(0), (T::one() + (T::one() - r) * ch.total_snr(0)).log2()),
        (Subset::singleton(1), (T::one() + (T::one() - r) * ch.total_snr(1)).log2()),
    ]);
    RateRegion::from_parts(2, proper, per_receiver_sums(ch, |_, _| r), Provenance::Inner)
}

/// Two-transmitter cutset outer bound at correlation ρ.
pub fn outer_region_scalar<T: Real>(ch: &GaussianChannel<T>, rho: CorrelationParam<T>) -> Result<RateRegion<T>> {
    require_two_tx(ch)?;
    let r = rho.value();
    let scale = T::one() - r * r;
    let proper = BTreeMap::from([
        (Subset::singleton(0), (T::one() + scale * ch.total_snr(0)).log2()),
        (Subset::singleton(1), (T::one() + scale * ch.total_snr(1)).log2()),
    ]);
    RateRegion::from_parts(2, proper, per_receiver_sums(ch, |_, _| r), Provenance::Outer)
}

/// M-transmitter cutset outer bound for one input covariance `K_X`.
///
/// Proper subsets: `log2 det(I_K + G_S K_{S|S^c} G_S*)`. Full set, per
/// receiver: the sum-rate bound with `ρ_mn = |[K_X]_mn|` on ordered pairs.
pub fn outer_region_cov<T: Real>(ch: &GaussianChannel<T>, kx: &CovarianceParam<T>) -> Result<RateRegion<T>> {
    let m = ch.num_tx();
    if kx.dim() != m {
        return Err(Error::Dimension { expected: m, found: kx.dim() });
    }
    let mut proper = BTreeMap::new();
    for s in Subset::proper(m) {
        let g = SubsetGainMatrix::new(ch, s)?;
        let cond = conditional_covariance(kx, s)?;
        proper.insert(s, log2_det_gain(g.matrix(), &cond).max(T::zero()));
    }
    RateRegion::from_parts(m, proper, per_receiver_sums(ch, |i, j| kx.rho(i, j)), Provenance::Outer)
}

/// Intersection over receivers of the per-receiver two-user MAC feedback
/// regions at a shared ρ (Ozarow form).
pub fn naive_feedback_region<T: Real>(ch: &GaussianChannel<T>, rho: CorrelationParam<T>) -> Result<RateRegion<T>> {
    require_two_tx(ch)?;
    let r = rho.value();
    let scale = T::one() - r * r;
    let single = |m: usize| {
        (0..ch.num_rx())
            .map(|k| (T::one() + scale * ch.snr(m, k)).log2())
            .reduce(|a, b| a.min(b))
            .expect("at least one receiver")
    };
    let proper = BTreeMap::from([(Subset::singleton(0), single(0)), (Subset::singleton(1), single(1))]);
    RateRegion::from_parts(2, proper, per_receiver_sums(ch, |_, _| r), Provenance::Naive)
}

/// Evenly spaced ρ values `0, step, ..., 1` (1 always included).
pub fn rho_grid<T: Real>(step: f64) -> Result<Vec<CorrelationParam<T>>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidParameter(format!("rho step {step} must lie in (0, 1]")));
    }
    let n = (1.0 / step).round() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| (i as f64 * step).min(1.0)).collect();
    if *grid.last().unwrap() < 1.0 {
        grid.push(1.0);
    }
    grid.dedup();
    Ok(grid.into_iter().map(|r| CorrelationParam::clamped(T::lit(r))).collect())
}
