//! Parameter sweeps over the symmetric two-transmitter channel with CSV output.
//!
//! Grid points are evaluated in parallel and collected in grid order, so the
//! CSV text depends only on the sweep specification.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{db_to_linear, GaussianChannel};
use crate::error::{Error, Result};
use crate::gaussian::{mac_sym_capacity_rx1, nonfeedback_sym_capacity, sym_capacity_bounds, DEFAULT_RHO_STEP};

/// Inclusive arithmetic range `start:stop:step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidParameter("axis bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::InvalidParameter(format!("axis step must be positive, got {step}")));
        }
        if stop < start {
            return Err(Error::InvalidParameter(format!("empty axis {start}:{stop}")));
        }
        Ok(Self { start, stop, step })
    }

    pub fn point(start: f64) -> Self {
        Self { start, stop: start, step: 1.0 }
    }

    /// Grid points; `stop` is included when it lies on the grid up to
    /// rounding. Points are `start + i·step`, not accumulated sums.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `start:stop:step`, or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| {
            t.parse::<f64>().map_err(|_| Error::InvalidParameter(format!("bad number {t:?} in axis {s:?}")))
        };
        match parts.as_slice() {
            [v] => Ok(Axis::point(num(v)?)),
            [a, b, c] => Axis::new(num(a)?, num(b)?, num(c)?),
            _ => Err(Error::InvalidParameter(format!("axis must be start:stop:step, got {s:?}"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// Direct-link SNR axis in dB.
    pub snr1_db: Axis,
    /// Cross-link SNR axis in dB.
    pub snr2_db: Axis,
    /// α values for gain sweeps, each in `(0, 1]`.
    pub alpha: Axis,
    /// Larger SNR in dB for gain sweeps.
    pub base_db: f64,
    pub rho_step: f64,
    pub seed: u64,
    pub trials: usize,
    pub out: Option<PathBuf>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            snr1_db: Axis { start: 0.0, stop: 50.0, step: 5.0 },
            snr2_db: Axis { start: 0.0, stop: 50.0, step: 5.0 },
            alpha: Axis { start: 0.1, stop: 1.0, step: 0.1 },
            base_db: 80.0,
            rho_step: DEFAULT_RHO_STEP,
            seed: 0,
            trials: 1000,
            out: None,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for axis in [&self.snr1_db, &self.snr2_db, &self.alpha] {
            Axis::new(axis.start, axis.stop, axis.step)?;
        }
        if self.alpha.start <= 0.0 || self.alpha.stop > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        if !(self.rho_step > 0.0 && self.rho_step <= 1.0) {
            return Err(Error::InvalidParameter(format!("rho step must lie in (0, 1], got {}", self.rho_step)));
        }
        if !self.base_db.is_finite() {
            return Err(Error::InvalidParameter("base SNR must be finite".into()));
        }
        Ok(())
    }
}

/// Fixed-point rendering with six significant digits.
pub fn fmt_sig6(x: f64) -> String {
    if x.abs() < 1e-12 {
        return "0.00000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).clamp(0, 12) as usize;
    format!("{x:.decimals$}")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapRow {
    pub snr1_db: f64,
    pub snr2_db: f64,
    pub c_sym_inner: f64,
    pub c_sym_outer: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapSweep {
    pub spec: SweepSpec,
    pub rows: Vec<GapRow>,
}

impl GapSweep {
    /// Row with the largest gap; the first one on ties.
    pub fn max_gap(&self) -> GapRow {
        *self
            .rows
            .iter()
            .reduce(|a, b| if b.gap > a.gap { b } else { a })
            .expect("sweeps have at least one row")
    }

    /// Rows whose gap leaves `[-1e-9, 1 + 1e-9]`.
    pub fn violations(&self) -> Vec<GapRow> {
        self.rows.iter().filter(|r| !(r.gap >= -1e-9 && r.gap <= 1.0 + 1e-9)).copied().collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "# snr1_db={} snr2_db={} rho_step={}",
            self.spec.snr1_db, self.spec.snr2_db, self.spec.rho_step
        )
        .unwrap();
        out.push_str("snr1_db,snr2_db,c_sym_inner,c_sym_outer,gap\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_sig6(r.snr1_db),
                fmt_sig6(r.snr2_db),
                fmt_sig6(r.c_sym_inner),
                fmt_sig6(r.c_sym_outer),
                fmt_sig6(r.gap)
            )
            .unwrap();
        }
        let worst = self.max_gap();
        writeln!(
            out,
            "# max gap {} at snr1_db={} snr2_db={}",
            fmt_sig6(worst.gap),
            fmt_sig6(worst.snr1_db),
            fmt_sig6(worst.snr2_db)
        )
        .unwrap();
        out
    }
}

/// Symmetric inner/outer capacities on the grid `snr1_db × snr2_db`, where
/// SNR1 is the direct-link and SNR2 the cross-link SNR.
pub fn sweep_gap(spec: &SweepSpec) -> Result<GapSweep> {
    spec.validate()?;
    let grid: Vec<(f64, f64)> = spec
        .snr1_db
        .points()
        .into_iter()
        .flat_map(|a| spec.snr2_db.points().into_iter().map(move |b| (a, b)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(a, b)| {
            let ch = GaussianChannel::<f64>::symmetric(db_to_linear(a), db_to_linear(b))?;
            let cap = sym_capacity_bounds(&ch, spec.rho_step)?;
            Ok(GapRow { snr1_db: a, snr2_db: b, c_sym_inner: cap.inner, c_sym_outer: cap.outer, gap: cap.gap })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GapSweep { spec: spec.clone(), rows })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GainRow {
    pub alpha: f64,
    /// Feedback symmetric capacity over the receiver-1 MAC symmetric capacity.
    pub c_sym_fb_norm: f64,
    /// Nonfeedback symmetric capacity over the same normalizer.
    pub c_sym_no_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GainSweep {
    pub spec: SweepSpec,
    pub rows: Vec<GainRow>,
}

impl GainSweep {
    pub fn row(&self, alpha: f64) -> Option<&GainRow> {
        self.rows.iter().find(|r| (r.alpha - alpha).abs() < 1e-9)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# base_db={} alpha={} rho_step={}", self.spec.base_db, self.spec.alpha, self.spec.rho_step)
            .unwrap();
        out.push_str("alpha,c_sym_fb_norm,c_sym_no_norm\n");
        for r in &self.rows {
            writeln!(out, "{},{},{}", fmt_sig6(r.alpha), fmt_sig6(r.c_sym_fb_norm), fmt_sig6(r.c_sym_no_norm)).unwrap();
        }
        out
    }
}

/// Normalized feedback and nonfeedback symmetric capacities against α, with
/// the larger SNR at `base_db` and the smaller at `α·base_db`.
///
/// The feedback value is the inner-bound symmetric capacity, which is within
/// one bit of the true feedback capacity.
pub fn sweep_gain(spec: &SweepSpec) -> Result<GainSweep> {
    spec.validate()?;
    let rows = spec
        .alpha
        .points()
        .par_iter()
        .map(|&alpha| {
            let strong = db_to_linear(spec.base_db);
            let weak = db_to_linear(alpha * spec.base_db);
            let ch = GaussianChannel::<f64>::symmetric(strong, weak)?;
            let fb = sym_capacity_bounds(&ch, spec.rho_step)?.inner;
            let mac = mac_sym_capacity_rx1(strong, weak);
            Ok(GainRow {
                alpha,
                c_sym_fb_norm: fb / mac,
                c_sym_no_norm: nonfeedback_sym_capacity(strong, weak) / mac,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GainSweep { spec: spec.clone(), rows })
}
