//! Channel descriptions and configuration ingestion.
//!
//! Gains are stored receiver-major: row `k`, column `m` holds `g_mk`, the
//! amplitude gain from transmitter `m` to receiver `k`. Transmit powers and
//! noise variances are normalized to one, so `snr(m, k) = |g_mk|^2`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianChannel<T: Real> {
    gains: DMatrix<Complex<T>>,
}

impl<T: Real> GaussianChannel<T> {
    /// Builds a channel from a K×M gain matrix.
    pub fn new(gains: DMatrix<Complex<T>>) -> Result<Self> {
        if gains.ncols() < 2 {
            return Err(Error::TooFewTransmitters { required: 2, found: gains.ncols() });
        }
        if gains.nrows() < 1 {
            return Err(Error::NoReceivers);
        }
        for k in 0..gains.nrows() {
            for m in 0..gains.ncols() {
                let g = gains[(k, m)];
                if !g.re.is_finite_value() || !g.im.is_finite_value() {
                    return Err(Error::NonFinite { row: k, col: m });
                }
            }
        }
        Ok(Self { gains })
    }

    /// Real nonnegative gains `sqrt(snr)` from a K×M matrix of linear SNRs.
    pub fn from_snr(snr: &[Vec<f64>]) -> Result<Self> {
        let (rows, cols) = rectangular(snr)?;
        let mut gains = DMatrix::from_element(rows, cols, Complex::new(T::zero(), T::zero()));
        for (k, row) in snr.iter().enumerate() {
            for (m, &s) in row.iter().enumerate() {
                if !s.is_finite() || s < 0.0 {
                    return Err(Error::NonFinite { row: k, col: m });
                }
                gains[(k, m)] = Complex::new(T::lit(s.sqrt()), T::zero());
            }
        }
        Self::new(gains)
    }

    /// Two-receiver symmetric convention: `SNR_11 = SNR_22 = snr_direct`,
    /// `SNR_12 = SNR_21 = snr_cross`.
    pub fn symmetric(snr_direct: f64, snr_cross: f64) -> Result<Self> {
        Self::from_snr(&[vec![snr_direct, snr_cross], vec![snr_cross, snr_direct]])
    }

    pub fn num_tx(&self) -> usize {
        self.gains.ncols()
    }

    pub fn num_rx(&self) -> usize {
        self.gains.nrows()
    }

    pub fn gains(&self) -> &DMatrix<Complex<T>> {
        &self.gains
    }

    /// Gain from transmitter `m` to receiver `k` (both 0-based).
    pub fn gain(&self, m: usize, k: usize) -> Complex<T> {
        self.gains[(k, m)]
    }

    pub fn snr(&self, m: usize, k: usize) -> T {
        self.gains[(k, m)].norm_sqr()
    }

    /// Sum over receivers of `SNR_mk`.
    pub fn total_snr(&self, m: usize) -> T {
        (0..self.num_rx()).fold(T::zero(), |acc, k| acc + self.snr(m, k))
    }

    /// Serializes to the `{"gains": ...}` document form.
    pub fn to_json(&self) -> String {
        let gains = (0..self.num_rx())
            .map(|k| {
                (0..self.num_tx())
                    .map(|m| {
                        let g = self.gain(m, k);
                        GainEntry { re: g.re.as_f64(), im: g.im.as_f64() }
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string(&ChannelDocument { gains: Some(gains), snr_db: None })
            .expect("finite gains serialize")
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GainEntry {
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    gains: Option<Vec<Vec<GainEntry>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    snr_db: Option<Vec<Vec<f64>>>,
}

fn rectangular<E>(rows: &[Vec<E>]) -> Result<(usize, usize)> {
    let cols = rows.first().map_or(0, Vec::len);
    for (row, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(Error::Ragged { row, found: r.len(), expected: cols });
        }
    }
    if rows.is_empty() {
        return Err(Error::NoReceivers);
    }
    Ok((rows.len(), cols))
}

/// Parses a JSON channel document holding exactly one of `"gains"` (complex
/// `{re, im}` entries) or `"snr_db"` (zero-phase, amplitude `sqrt(10^(dB/10))`).
pub fn load_gaussian_channel<T: Real>(document: &str) -> Result<GaussianChannel<T>> {
    let doc: ChannelDocument =
        serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
    match (doc.gains, doc.snr_db) {
        (Some(gains), None) => {
            let (rows, cols) = rectangular(&gains)?;
            let mut matrix = DMatrix::from_element(rows, cols, Complex::new(T::zero(), T::zero()));
            for (k, row) in gains.iter().enumerate() {
                for (m, g) in row.iter().enumerate() {
                    if !g.re.is_finite() || !g.im.is_finite() {
                        return Err(Error::NonFinite { row: k, col: m });
                    }
                    matrix[(k, m)] = Complex::new(T::lit(g.re), T::lit(g.im));
                }
            }
            GaussianChannel::new(matrix)
        }
        (None, Some(db)) => {
            let (_, cols) = rectangular(&db)?;
            if cols < 2 {
                return Err(Error::TooFewTransmitters { required: 2, found: cols });
            }
            let linear = db
                .iter()
                .enumerate()
                .map(|(k, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(m, &d)| {
                            let s = db_to_linear(d);
                            if s.is_finite() {
                                Ok(s)
                            } else {
                                Err(Error::NonFinite { row: k, col: m })
                            }
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            GaussianChannel::from_snr(&linear)
        }
        (Some(_), Some(_)) => Err(Error::Malformed("\"gains\" and \"snr_db\" are mutually exclusive".into())),
        (None, None) => Err(Error::Malformed("expected a \"gains\" or \"snr_db\" key".into())),
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Integer-level deterministic channel.
///
/// `levels[k][m]` is the number of signal bit levels from transmitter `m` to
/// receiver `k`; every input and output is a `q`-bit vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdtChannel {
    levels: Vec<Vec<u32>>,
    q: u32,
}

impl AdtChannel {
    /// Uses `q = max level`, or 1 when every level is zero.
    pub fn new(levels: Vec<Vec<u32>>) -> Result<Self> {
        let q = levels.iter().flatten().copied().max().unwrap_or(0).max(1);
        Self::with_width(levels, q)
    }

    pub fn with_width(levels: Vec<Vec<u32>>, q: u32) -> Result<Self> {
        let (_, cols) = rectangular(&levels)?;
        if cols == 0 {
            return Err(Error::TooFewTransmitters { required: 1, found: 0 });
        }
        let max = levels.iter().flatten().copied().max().unwrap_or(0);
        if q < max.max(1) {
            return Err(Error::InvalidParameter(format!("bit width {q} is below max level {max}")));
        }
        Ok(Self { levels, q })
    }

    pub fn num_tx(&self) -> usize {
        self.levels[0].len()
    }

    pub fn num_rx(&self) -> usize {
        self.levels.len()
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Level from transmitter `m` to receiver `k` (0-based).
    pub fn level(&self, m: usize, k: usize) -> u32 {
        self.levels[k][m]
    }

    pub fn levels(&self) -> &[Vec<u32>] {
        &self.levels
    }
}

impl FromStr for AdtChannel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        load_adt_channel(s)
    }
}

impl fmt::Display for AdtChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .levels
            .iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&rows.join(";"))
    }
}

/// Parses `"r1c1,r1c2,...;r2c1,..."`: rows are receivers, columns transmitters.
pub fn load_adt_channel(spec: &str) -> Result<AdtChannel> {
    let levels = parse_matrix(spec, |row, col, tok| {
        tok.parse::<u32>().map_err(|_| Error::InvalidLevel { row, col, value: tok.to_string() })
    })?;
    AdtChannel::new(levels)
}

/// Parses a `;`-separated list of `,`-separated entries.
pub fn parse_matrix<E>(
    spec: &str,
    mut entry: impl FnMut(usize, usize, &str) -> Result<E>,
) -> Result<Vec<Vec<E>>> {
    if spec.trim().is_empty() {
        return Err(Error::Malformed("empty matrix".into()));
    }
    spec.split(';')
        .enumerate()
        .map(|(row, r)| {
            r.split(',')
                .enumerate()
                .map(|(col, tok)| entry(row, col, tok.trim()))
                .collect()
        })
        .collect()
}

/// `n_mk = floor(log2 SNR_mk)`, clamped below at zero.
pub fn adt_from_gaussian<T: Real>(ch: &GaussianChannel<T>) -> AdtChannel {
    let levels = (0..ch.num_rx())
        .map(|k| {
            (0..ch.num_tx())
                .map(|m| {
                    let snr = ch.snr(m, k).as_f64();
                    if snr <= 1.0 {
                        0
                    } else {
                        snr.log2().floor() as u32
                    }
                })
                .collect()
        })
        .collect();
    AdtChannel::new(levels).expect("levels derived from a valid channel")
}

/// Nonnegative finite rate vector, one entry per transmitter.
#[derive(Clone, Debug, PartialEq)]
pub struct RateVector<T>(Vec<T>);

impl<T: crate::RateScalar> RateVector<T> {
    pub fn new(rates: Vec<T>) -> Result<Self> {
        for r in &rates {
            if !r.is_finite_value() || *r < T::zero() {
                return Err(Error::InvalidParameter(format!("rate {r} must be finite and nonnegative")));
            }
        }
        Ok(Self(rates))
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![T::zero(); m])
    }

    pub fn symmetric(m: usize, r: T) -> Result<Self> {
        Self::new(vec![r; m])
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<T: fmt::Display> fmt::Display for RateVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Scalar correlation coefficient in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct CorrelationParam<T>(T);

impl<T: Real> CorrelationParam<T> {
    pub fn new(rho: T) -> Result<Self> {
        if rho.is_finite_value() && rho >= T::zero() && rho <= T::one() {
            Ok(Self(rho))
        } else {
            Err(Error::InvalidParameter(format!("rho = {rho} outside [0, 1]")))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to 0.
    pub fn clamped(rho: T) -> Self {
        if rho.is_finite_value() {
            Self(rho.clamp(T::zero(), T::one()))
        } else {
            Self(T::zero())
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// Validation slack for Hermitian/PSD/unit-diagonal checks.
pub(crate) fn validation_tol<T: Real>() -> T {
    let floor = T::default_epsilon() * T::lit(1e3);
    if floor > T::lit(1e-9) {
        floor
    } else {
        T::lit(1e-9)
    }
}

/// Normalized input covariance: Hermitian PSD with unit diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceParam<T: Real> {
    matrix: DMatrix<Complex<T>>,
}

impl<T: Real> CovarianceParam<T> {
    pub fn new(matrix: DMatrix<Complex<T>>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::Dimension { expected: n, found: matrix.ncols() });
        }
        let tol = validation_tol::<T>();
        for i in 0..n {
            let d = matrix[(i, i)];
            if (d.re - T::one()).abs() > tol || d.im.abs() > tol {
                return Err(Error::InvalidParameter(format!("diagonal entry {i} is not 1")));
            }
            for j in 0..n {
                let a = matrix[(i, j)];
                if !a.re.is_finite_value() || !a.im.is_finite_value() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if (a - matrix[(j, i)].conj()).modulus() > tol {
                    return Err(Error::InvalidParameter("matrix is not Hermitian".into()));
                }
                if a.modulus() > T::one() + tol {
                    return Err(Error::InvalidParameter(format!("|K[{i},{j}]| exceeds 1")));
                }
            }
        }
        let min_eig = matrix.clone().symmetric_eigenvalues().min();
        if min_eig < -tol {
            return Err(Error::InvalidParameter(format!("smallest eigenvalue {min_eig} is negative")));
        }
        Ok(Self { matrix })
    }

    pub fn identity(m: usize) -> Self {
        Self { matrix: DMatrix::identity(m, m) }
    }

    /// Every off-diagonal entry equal to `rho`.
    pub fn exchangeable(m: usize, rho: CorrelationParam<T>) -> Self {
        let r = Complex::new(rho.value(), T::zero());
        let matrix = DMatrix::from_fn(m, m, |i, j| if i == j { Complex::new(T::one(), T::zero()) } else { r });
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    /// `|K_mn|`, capped at 1.
    pub fn rho(&self, m: usize, n: usize) -> T {
        let r = self.matrix[(m, n)].modulus();
        if r > T::one() {
            T::one()
        } else {
            r
        }
    }

    /// Minimum of `rho(m, n)` over `m != n`.
    pub fn min_rho(&self) -> CorrelationParam<T> {
        let n = self.dim();
        let mut best = T::one();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.rho(i, j) < best {
                    best = self.rho(i, j);
                }
            }
        }
        CorrelationParam::clamped(best)
    }
}
