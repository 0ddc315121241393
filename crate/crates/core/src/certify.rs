//! Seeded randomized certification of the gap results and their lemmas.
//!
//! Trials run in parallel; each owns an RNG stream keyed by `(seed, trial)`
//! and results are reduced in trial order, so output is independent of the
//! thread count.

use rand::Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::gaussian::sampling::{random_channel, random_complex_matrix, random_correlation, trial_rng};
use crate::gaussian::{claim1_check, det_identity_check, gap_report_2tx, gap_report_mtx, linalg, rho_grid};
use crate::gf2::{span_rank, Gf2Matrix};
use crate::subset::Subset;

/// Per-link SNR range for random channels, in dB.
pub const DB_RANGE: (f64, f64) = (-20.0, 60.0);
pub const MAX_RECEIVERS: usize = 4;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CertSummary {
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
    /// Largest observed `value - limit` over all checks (negative: slack).
    pub worst_margin: f64,
    /// Largest per-transmitter gap observed, where applicable.
    pub max_per_transmitter: f64,
    pub first_failure: Option<String>,
}

impl CertSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn merge(mut self, other: CertSummary) -> CertSummary {
        self.trials += other.trials;
        self.checks += other.checks;
        self.failures += other.failures;
        self.worst_margin = self.worst_margin.max(other.worst_margin);
        self.max_per_transmitter = self.max_per_transmitter.max(other.max_per_transmitter);
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self
    }

    fn empty() -> Self {
        Self { worst_margin: f64::NEG_INFINITY, max_per_transmitter: f64::NEG_INFINITY, ..Self::default() }
    }

    fn observe(&mut self, value: f64, limit: f64, slack: f64, label: impl FnOnce() -> String) {
        self.checks += 1;
        self.worst_margin = self.worst_margin.max(value - limit);
        // NaN counts as a failure
        let holds = value <= limit + slack;
        if !holds {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(label());
            }
        }
    }
}

fn run_trials(trials: usize, f: impl Fn(u64) -> Result<CertSummary> + Sync) -> Result<CertSummary> {
    let per_trial: Vec<CertSummary> = (0..trials as u64).into_par_iter().map(&f).collect::<Result<_>>()?;
    Ok(per_trial.into_iter().fold(CertSummary::empty(), CertSummary::merge))
}

/// Two-transmitter one-bit gap over random channels (`K` in `1..=4`) and a
/// ρ grid: `δ_m <= log2(1+ρ)` and `|δ_12| <= 1e-9`.
pub fn certify_two_tx_gap(trials: usize, seed: u64, rho_step: f64) -> Result<CertSummary> {
    let grid = rho_grid::<f64>(rho_step)?;
    run_trials(trials, |t| {
        let mut rng = trial_rng(seed, t);
        let k = rng.random_range(1..=MAX_RECEIVERS);
        let ch = random_channel::<f64, _>(&mut rng, 2, k, DB_RANGE);
        let mut s = CertSummary { trials: 1, ..CertSummary::empty() };
        for &rho in &grid {
            let report = gap_report_2tx(&ch, rho)?;
            let r = rho.value();
            for m in 0..2 {
                let d = report.deltas[&Subset::singleton(m)];
                s.observe(d, (1.0 + r).log2(), 1e-9, || format!("trial {t}, rho {r}: delta_{} = {d}", m + 1));
            }
            s.observe(report.delta_sum.abs(), 0.0, 1e-9, || {
                format!("trial {t}, rho {r}: delta_12 = {}", report.delta_sum)
            });
            s.max_per_transmitter = s.max_per_transmitter.max(report.max_per_transmitter());
        }
        Ok(s)
    })
}

/// M-transmitter constant gap over random channels and random correlation
/// matrices, checking every link of the chain: `δ_S <= |S| log2((1+ρ)|S|)`,
/// `δ_sum <= log2 M`, and `δ_S/|S| <= log2(2(M-1))`.
pub fn certify_m_tx_gap(m: usize, trials: usize, seed: u64) -> Result<CertSummary> {
    let delta = (2.0 * (m as f64 - 1.0)).log2();
    run_trials(trials, |t| {
        let mut rng = trial_rng(seed, t);
        let k = rng.random_range(1..=MAX_RECEIVERS);
        let ch = random_channel::<f64, _>(&mut rng, m, k, DB_RANGE);
        let kx = random_correlation::<f64, _>(&mut rng, m);
        let report = gap_report_mtx(&ch, &kx)?;
        let rho = kx.min_rho().value();
        let mut s = CertSummary { trials: 1, ..CertSummary::empty() };
        for (&subset, &d) in &report.deltas {
            let size = subset.len() as f64;
            s.observe(d / size, delta, 1e-9, || format!("trial {t}: per-transmitter gap on {subset} = {}", d / size));
            if subset.is_proper(m) {
                let limit = size * ((1.0 + rho) * size).log2();
                s.observe(d, limit, 1e-9, || format!("trial {t}: delta_{subset} = {d} > {limit}"));
            }
        }
        s.observe(report.delta_sum, (m as f64).log2(), 1e-9, || {
            format!("trial {t}: delta_sum = {}", report.delta_sum)
        });
        s.max_per_transmitter = report.max_per_transmitter();
        Ok(s)
    })
}

/// `K_{S|S^c} ⪯ |S|(1-ρ²) I` for random correlation matrices with `M` drawn
/// from `2..=max_m`, over every proper subset.
pub fn certify_claim1(max_m: usize, trials: usize, seed: u64) -> Result<CertSummary> {
    run_trials(trials, |t| {
        let mut rng = trial_rng(seed, t);
        let m = rng.random_range(2..=max_m.max(2));
        let kx = random_correlation::<f64, _>(&mut rng, m);
        let rho = kx.min_rho().value();
        let mut s = CertSummary { trials: 1, ..CertSummary::empty() };
        for subset in Subset::proper(m) {
            let top = linalg::max_eigenvalue(&linalg::conditional_covariance(&kx, subset)?);
            let limit = subset.len() as f64 * (1.0 - rho * rho);
            let holds = claim1_check(&kx, subset)?;
            s.observe(top, limit, 1e-9, || format!("trial {t}: lambda_max on {subset} = {top} > {limit}"));
            if !holds && top <= limit + 1e-9 {
                s.failures += 1;
            }
        }
        Ok(s)
    })
}

/// `det(I_m + AB) = det(I_n + BA)` for random complex `A` (m×n), `B` (n×m)
/// with `m, n` in `1..=max_dim`.
pub fn certify_det_identity(max_dim: usize, trials: usize, seed: u64) -> Result<CertSummary> {
    run_trials(trials, |t| {
        let mut rng = trial_rng(seed, t);
        let rows = rng.random_range(1..=max_dim);
        let cols = rng.random_range(1..=max_dim);
        let a = random_complex_matrix::<f64, _>(&mut rng, rows, cols);
        let b = random_complex_matrix::<f64, _>(&mut rng, cols, rows);
        let mut s = CertSummary { trials: 1, ..CertSummary::empty() };
        let ok = det_identity_check(&a, &b)?;
        s.observe(if ok { 0.0 } else { 1.0 }, 0.0, 0.0, || format!("trial {t}: {rows}x{cols} identity failed"));
        Ok(s)
    })
}

/// Elimination rank against span enumeration on every GF(2) matrix with
/// both dimensions in `1..=max_dim`.
pub fn certify_rank_exhaustive(max_dim: usize) -> CertSummary {
    assert!(max_dim <= 4, "exhaustive sweep beyond 4x4 is too large");
    let shapes: Vec<(usize, usize)> = (1..=max_dim).flat_map(|r| (1..=max_dim).map(move |c| (r, c))).collect();
    shapes
        .into_iter()
        .map(|(rows, cols)| {
            let per_shape: Vec<CertSummary> = (0u32..(1 << (rows * cols)))
                .into_par_iter()
                .map(|bits| {
                    let m = Gf2Matrix::from_fn(rows, cols, |i, j| bits >> (i * cols + j) & 1 == 1);
                    let mut s = CertSummary { trials: 1, ..CertSummary::empty() };
                    let (fast, slow) = (m.rank(), span_rank(&m));
                    s.observe(if fast == slow { 0.0 } else { 1.0 }, 0.0, 0.0, || {
                        format!("{rows}x{cols} pattern {bits:#x}: elimination {fast}, span {slow}")
                    });
                    s
                })
                .collect();
            per_shape.into_iter().fold(CertSummary::empty(), CertSummary::merge)
        })
        .fold(CertSummary::empty(), CertSummary::merge)
}
