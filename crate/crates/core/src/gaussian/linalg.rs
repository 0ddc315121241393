//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::{Cholesky, ComplexField, DMatrix};
use num_complex::Complex;

use crate::channel::CovarianceParam;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::subset::Subset;

pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Singular values below this fraction of the largest are treated as zero.
pub const PINV_RELATIVE_CUTOFF: f64 = 1e-12;

pub(crate) fn c<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `(A + A*) / 2`.
pub fn hermitian_part<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    (a + a.adjoint()) * c(T::lit(0.5))
}

/// `log2 det(H)` for Hermitian positive-definite `H`.
pub fn log2_det_hpd<T: Real>(h: &CMatrix<T>) -> T {
    if let Some(chol) = Cholesky::new(h.clone()) {
        let l = chol.l_dirty();
        (0..l.nrows()).fold(T::zero(), |acc, i| acc + l[(i, i)].re.log2()) * T::lit(2.0)
    } else {
        hermitian_part(h)
            .symmetric_eigenvalues()
            .iter()
            .fold(T::zero(), |acc, &l| acc + l.max(T::lit(1e-30)).log2())
    }
}

/// `log2 det(I_K + G W G*)` for PSD `W`. When `G` has fewer columns than
/// rows the equal determinant `det(I + W^½ G* G W^½)` is evaluated instead,
/// which keeps a strong single link from swamping the unit eigenvalues.
pub fn log2_det_gain<T: Real>(g: &CMatrix<T>, w: &CMatrix<T>) -> T {
    let (k, s) = g.shape();
    let h = if s < k {
        let root = psd_sqrt(w);
        CMatrix::<T>::identity(s, s) + &root * g.adjoint() * g * &root
    } else {
        CMatrix::<T>::identity(k, k) + g * w * g.adjoint()
    };
    log2_det_hpd(&hermitian_part(&h))
}

/// Hermitian square root of a PSD matrix; negative rounding noise in the
/// spectrum is clamped to zero.
fn psd_sqrt<T: Real>(w: &CMatrix<T>) -> CMatrix<T> {
    let eig = hermitian_part(w).symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| c(l.max(T::zero()).sqrt()));
    &eig.eigenvectors * CMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

/// Moore-Penrose inverse with a relative singular-value cutoff.
pub fn pseudo_inverse<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    if a.is_empty() {
        return a.transpose();
    }
    let svd = a.clone().svd(true, true);
    let largest = svd.singular_values.max();
    let eps = largest * T::lit(PINV_RELATIVE_CUTOFF);
    svd.pseudo_inverse(eps).expect("nonnegative cutoff")
}

/// Pseudo-inverse of a Hermitian matrix through its eigendecomposition,
/// dropping eigenvalues at or below `PINV_RELATIVE_CUTOFF` times the largest
/// magnitude. More reliable than the SVD route on rank-deficient blocks.
pub fn pseudo_inverse_hermitian<T: Real>(h: &CMatrix<T>) -> CMatrix<T> {
    if h.is_empty() {
        return h.clone();
    }
    let eig = hermitian_part(h).symmetric_eigen();
    let largest = eig.eigenvalues.iter().fold(T::zero(), |acc, l| acc.max(l.abs()));
    let cutoff = largest * T::lit(PINV_RELATIVE_CUTOFF);
    let inv = eig.eigenvalues.map(|l| if l > cutoff { c(T::one() / l) } else { c(T::zero()) });
    &eig.eigenvectors * CMatrix::from_diagonal(&inv) * eig.eigenvectors.adjoint()
}

fn select<T: Real>(a: &CMatrix<T>, rows: Subset, cols: Subset) -> CMatrix<T> {
    let r: Vec<usize> = rows.members().collect();
    let cl: Vec<usize> = cols.members().collect();
    CMatrix::from_fn(r.len(), cl.len(), |i, j| a[(r[i], cl[j])])
}

/// Covariance of `X_S` given `X_{S^c}`: the Schur complement
/// `K_S - K_{S,S^c} pinv(K_{S^c}) K_{S^c,S}`, symmetrized.
pub fn conditional_covariance<T: Real>(kx: &CovarianceParam<T>, s: Subset) -> Result<CMatrix<T>> {
    let m = kx.dim();
    if !s.is_proper(m) {
        return Err(Error::InvalidSubset(s.bits()));
    }
    let sc = s.complement(m);
    let k = kx.matrix();
    let kss = select(k, s, s);
    let ksc = select(k, s, sc);
    let kcc = select(k, sc, sc);
    let schur = kss - &ksc * pseudo_inverse_hermitian(&kcc) * ksc.adjoint();
    Ok(hermitian_part(&schur))
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn max_eigenvalue<T: Real>(h: &CMatrix<T>) -> T {
    hermitian_part(h).symmetric_eigenvalues().max()
}

/// Checks `K_{S|S^c} ⪯ |S|(1-ρ²) I` with `ρ` the smallest off-diagonal
/// magnitude of `K_X`, at slack 1e-9.
pub fn claim1_check<T: Real>(kx: &CovarianceParam<T>, s: Subset) -> Result<bool> {
    let cond = conditional_covariance(kx, s)?;
    let rho = kx.min_rho().value();
    let limit = T::from_count(s.len()) * (T::one() - rho * rho);
    Ok(max_eigenvalue(&cond) <= limit + T::lit(1e-9))
}

/// Checks `det(I_m + AB) = det(I_n + BA)` to relative tolerance 1e-6.
pub fn det_identity_check<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<bool> {
    let (m, n) = a.shape();
    if b.shape() != (n, m) {
        return Err(Error::Dimension { expected: n, found: b.nrows() });
    }
    let left = (CMatrix::<T>::identity(m, m) + a * b).determinant();
    let right = (CMatrix::<T>::identity(n, n) + b * a).determinant();
    Ok((left - right).modulus() <= T::lit(1e-6) * (T::one() + left.modulus()))
}
