//! Dense real matrix kernels: orthonormalization, numerical rank, null spaces
//! and principal angles.
//!
//! Every rank decision in the crate goes through [`Tolerance::rank_cutoff`],
//! which is applied to singular values from a full singular value
//! decomposition.

use nalgebra::{DMatrix, DVector, SVD};

use crate::error::{Error, Result};

/// Dense real matrix. Rows and columns may be zero.
pub type Matrix = DMatrix<f64>;
/// Dense real column vector.
pub type Vector = DVector<f64>;

/// Thresholds used for rank decisions and for subspace/operator equality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value cutoff.
    pub rank_rel: f64,
    /// Absolute threshold for subspace and operator equality.
    pub eq_abs: f64,
}

/// Default relative rank cutoff. Bases produced by one lattice operation
/// carry span errors of a few ulps into the next, so a bare machine-epsilon
/// cutoff misreads them as extra rank.
pub const DEFAULT_RANK_REL: f64 = 1e-12;

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rel: DEFAULT_RANK_REL,
            eq_abs: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64, eq_abs: f64) -> Result<Self> {
        if !(rank_rel > 0.0 && rank_rel.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "rank_rel must be positive and finite, got {rank_rel}"
            )));
        }
        if !(eq_abs > 0.0 && eq_abs.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "eq_abs must be positive and finite, got {eq_abs}"
            )));
        }
        Ok(Tolerance { rank_rel, eq_abs })
    }

    /// Same rank cutoff, different equality threshold.
    pub fn with_eq_abs(self, eq_abs: f64) -> Self {
        Tolerance { eq_abs, ..self }
    }

    /// Singular values at or below this value count as zero for a
    /// `rows × cols` matrix whose largest singular value is `sigma_max`.
    pub fn rank_cutoff(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        self.rank_rel * sigma_max * rows.max(cols) as f64
    }
}

pub(crate) fn ensure_finite(m: &Matrix) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub(crate) fn ensure_finite_slice(v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Full SVD of `a` padded with zero rows so that `V` is square.
fn full_svd(a: &Matrix) -> SVD<f64, nalgebra::Dyn, nalgebra::Dyn> {
    let (rows, cols) = a.shape();
    let padded = if rows < cols {
        let mut p = Matrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    SVD::new(padded, true, true)
}

/// Numerical rank of `a`.
pub fn rank(a: &Matrix, tol: &Tolerance) -> Result<usize> {
    ensure_finite(a)?;
    if a.is_empty() {
        return Ok(0);
    }
    let sv = a.singular_values();
    let sigma_max = sv.max();
    let cutoff = tol.rank_cutoff(sigma_max, a.nrows(), a.ncols());
    Ok(sv.iter().filter(|&&s| s > cutoff && s > 0.0).count())
}

/// Largest singular value (spectral norm); 0 for an empty matrix.
pub fn spectral_norm(a: &Matrix) -> f64 {
    if a.is_empty() {
        0.0
    } else {
        a.singular_values().max()
    }
}

/// Orthonormal basis (as columns) of the span of `vectors` in ℝ^`ambient`.
///
/// The number of columns is the numerical rank of the input. An empty input
/// yields an `ambient × 0` matrix.
pub fn orthonormal_basis(ambient: usize, vectors: &[Vector], tol: &Tolerance) -> Result<Matrix> {
    if ambient == 0 {
        return Err(Error::InvalidArgument(
            "ambient dimension must be at least 1".into(),
        ));
    }
    for v in vectors {
        if v.len() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
    }
    if vectors.is_empty() {
        return Ok(Matrix::zeros(ambient, 0));
    }
    orthonormal_columns(&Matrix::from_columns(vectors), tol)
}

/// Orthonormal basis of the column space of `a`.
pub fn orthonormal_columns(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    orthonormal_columns_scaled(a, 0.0, tol)
}

/// Like [`orthonormal_columns`], with the rank cutoff measured against
/// `max(σ_max(a), scale)`.
///
/// `scale` is the magnitude of the operands `a` was computed from, so that a
/// matrix consisting of rounding noise is recognized as zero.
pub fn orthonormal_columns_scaled(a: &Matrix, scale: f64, tol: &Tolerance) -> Result<Matrix> {
    ensure_finite(a)?;
    let (rows, cols) = a.shape();
    if cols == 0 || rows == 0 {
        return Ok(Matrix::zeros(rows, 0));
    }
    let svd = SVD::new(a.clone(), true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let sigma_max = svd.singular_values.max().max(scale);
    let cutoff = tol.rank_cutoff(sigma_max, rows, cols);
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > cutoff && s > 0.0)
        .map(|(i, _)| i)
        .collect();
    Ok(Matrix::from_fn(rows, keep.len(), |r, c| u[(r, keep[c])]))
}

/// Orthonormal basis of the kernel of `a`, as columns.
///
/// The column count is `cols(a) − rank(a)`.
pub fn null_space(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    null_space_scaled(a, 0.0, tol)
}

/// Like [`null_space`], with the rank cutoff measured against
/// `max(σ_max(a), scale)`. For `a = T − I` the natural scale is
/// `max(‖T‖, 1)`.
pub fn null_space_scaled(a: &Matrix, scale: f64, tol: &Tolerance) -> Result<Matrix> {
    ensure_finite(a)?;
    let cols = a.ncols();
    if cols == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    if a.nrows() == 0 {
        return Ok(Matrix::identity(cols, cols));
    }
    let svd = full_svd(a);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sigma_max = svd.singular_values.max().max(scale);
    let cutoff = tol.rank_cutoff(sigma_max, a.nrows(), cols);
    // v_t is cols × cols because of the padding.
    let null: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| !(s > cutoff && s > 0.0))
        .map(|(i, _)| i)
        .collect();
    Ok(Matrix::from_fn(cols, null.len(), |r, c| v_t[(null[c], r)]))
}

/// Principal angles between the column spaces of two orthonormal bases,
/// sorted ascending, in `[0, π/2]`.
///
/// Angles below π/4 come from the sines (singular values of the part of the
/// smaller basis orthogonal to the larger one); `acos` near 1 would lose
/// about half the digits.
pub fn principal_angles_of_bases(qu: &Matrix, qv: &Matrix) -> Result<Vec<f64>> {
    if qu.nrows() != qv.nrows() {
        return Err(Error::DimensionMismatch {
            expected: qu.nrows(),
            found: qv.nrows(),
        });
    }
    if qu.ncols() == 0 || qv.ncols() == 0 {
        return Err(Error::ZeroSubspace);
    }
    let (small, large) = if qu.ncols() <= qv.ncols() {
        (qu, qv)
    } else {
        (qv, qu)
    };
    let cross = large.transpose() * small;
    let mut cosines: Vec<f64> = cross
        .singular_values()
        .iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    cosines.sort_by(|a, b| b.total_cmp(a));
    let residual = small - large * &cross;
    let mut sines: Vec<f64> = residual
        .singular_values()
        .iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    sines.sort_by(|a, b| a.total_cmp(b));
    let mut angles: Vec<f64> = cosines
        .iter()
        .zip(&sines)
        .map(|(&c, &s)| if c * c >= 0.5 { s.asin() } else { c.acos() })
        .collect();
    angles.sort_by(|a, b| a.total_cmp(b));
    Ok(angles)
}

/// Largest absolute entry of `a − b`.
pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest absolute entry of `qᵀq − I`.
pub fn orthonormality_defect(q: &Matrix) -> f64 {
    let k = q.ncols();
    max_abs_diff(&(q.transpose() * q), &Matrix::identity(k, k))
}
