//! Linear subspaces of ℝⁿ and their lattice operations.
//!
//! A [`Subspace`] is stored as an orthonormal basis. Bases are not
//! canonicalized, so two subspaces are compared through their projectors,
//! never entrywise.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Tolerance, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Span of `vectors` in ℝ^`ambient`.
    pub fn span(ambient: usize, vectors: &[Vector], tol: &Tolerance) -> Result<Self> {
        Ok(Subspace {
            basis: linalg::orthonormal_basis(ambient, vectors, tol)?,
        })
    }

    /// Span of the columns of `m` (not required to be orthonormal).
    pub fn column_span(m: &Matrix, tol: &Tolerance) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::InvalidArgument(
                "ambient dimension must be at least 1".into(),
            ));
        }
        Ok(Subspace {
            basis: linalg::orthonormal_columns(m, tol)?,
        })
    }

    /// Wraps a basis that is already orthonormal. Rejects bases whose
    /// orthonormality defect exceeds `tol.eq_abs`.
    pub fn from_orthonormal(basis: Matrix, tol: &Tolerance) -> Result<Self> {
        linalg::ensure_finite(&basis)?;
        if basis.nrows() == 0 {
            return Err(Error::InvalidArgument(
                "ambient dimension must be at least 1".into(),
            ));
        }
        let defect = linalg::orthonormality_defect(&basis);
        if defect > tol.eq_abs {
            return Err(Error::InvalidArgument(format!(
                "basis is not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(Subspace { basis })
    }

    /// For bases that come straight out of an SVD inside the crate.
    pub(crate) fn from_svd_basis(basis: Matrix) -> Self {
        debug_assert!(linalg::orthonormality_defect(&basis) <= 1e-10);
        Subspace { basis }
    }

    /// The trivial subspace {0} of ℝⁿ.
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(ambient, 0),
        }
    }

    /// All of ℝⁿ.
    pub fn full(ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(ambient, ambient),
        }
    }

    /// The line ℝ·`direction`.
    pub fn line(direction: &[f64]) -> Result<Self> {
        linalg::ensure_finite_slice(direction)?;
        let v = Vector::from_row_slice(direction);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::ZeroSubspace);
        }
        Ok(Subspace {
            basis: Matrix::from_column_slice(direction.len(), 1, (v / norm).as_slice()),
        })
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Orthogonal projector `Q·Qᵀ`.
    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.transpose()
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient() != other.ambient() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient(),
                found: other.ambient(),
            });
        }
        Ok(())
    }

    /// Orthogonal complement.
    pub fn complement(&self, tol: &Tolerance) -> Self {
        let n = self.ambient();
        if self.is_zero() {
            return Subspace::full(n);
        }
        let basis = linalg::null_space_scaled(&self.basis.transpose(), 1.0, tol)
            .expect("basis entries are finite by construction");
        Subspace { basis }
    }

    /// Intersection, computed as the kernel of `[I − P_U ; I − P_V]`.
    pub fn intersect(&self, other: &Subspace, tol: &Tolerance) -> Result<Self> {
        self.same_ambient(other)?;
        let n = self.ambient();
        let id = Matrix::identity(n, n);
        let mut stacked = Matrix::zeros(2 * n, n);
        stacked
            .view_mut((0, 0), (n, n))
            .copy_from(&(&id - self.projector()));
        stacked
            .view_mut((n, 0), (n, n))
            .copy_from(&(&id - other.projector()));
        Ok(Subspace {
            basis: linalg::null_space_scaled(&stacked, 1.0, tol)?,
        })
    }

    /// `U + V`: span of the union of both bases.
    pub fn sum(&self, other: &Subspace, tol: &Tolerance) -> Result<Self> {
        self.same_ambient(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let n = self.ambient();
        let mut joined = Matrix::zeros(n, self.dim() + other.dim());
        joined
            .view_mut((0, 0), (n, self.dim()))
            .copy_from(&self.basis);
        joined
            .view_mut((0, self.dim()), (n, other.dim()))
            .copy_from(&other.basis);
        Ok(Subspace {
            basis: linalg::orthonormal_columns_scaled(&joined, 1.0, tol)?,
        })
    }

    /// Orthogonal direct sum `U ⊕ V`; fails unless `max |Q_Uᵀ Q_V| ≤ tol.eq_abs`.
    pub fn direct_sum(&self, other: &Subspace, tol: &Tolerance) -> Result<Self> {
        self.same_ambient(other)?;
        if !self.is_zero() && !other.is_zero() {
            let overlap = (self.basis.transpose() * &other.basis).amax();
            if overlap > tol.eq_abs {
                return Err(Error::NotOrthogonal { overlap });
            }
        }
        self.sum(other, tol)
    }

    /// Frobenius distance between the two projectors.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        self.same_ambient(other)?;
        Ok((self.projector() - other.projector()).norm())
    }

    /// `‖P_U − P_V‖_F ≤ tol.eq_abs`.
    pub fn equals(&self, other: &Subspace, tol: &Tolerance) -> Result<bool> {
        Ok(self.distance(other)? <= tol.eq_abs)
    }

    /// Largest column residual `‖P_U q − q‖` over the basis columns `q` of `other`.
    pub fn containment_residual(&self, other: &Subspace) -> Result<f64> {
        self.same_ambient(other)?;
        if other.is_zero() {
            return Ok(0.0);
        }
        let r = self.projector() * &other.basis - &other.basis;
        Ok(r.column_iter().map(|c| c.norm()).fold(0.0, f64::max))
    }

    /// Whether `other ⊆ self` at tolerance `tol.eq_abs`.
    pub fn contains(&self, other: &Subspace, tol: &Tolerance) -> Result<bool> {
        Ok(self.containment_residual(other)? <= tol.eq_abs)
    }

    /// Image `{T x : x ∈ U}` of the subspace under a square matrix.
    pub fn image(&self, t: &Matrix, tol: &Tolerance) -> Result<Self> {
        if t.nrows() != t.ncols() || t.ncols() != self.ambient() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient(),
                found: t.ncols(),
            });
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let scale = linalg::spectral_norm(t);
        Ok(Subspace {
            basis: linalg::orthonormal_columns_scaled(&(t * &self.basis), scale, tol)?,
        })
    }

    /// Principal angles to `other`, ascending, in `[0, π/2]`.
    pub fn principal_angles(&self, other: &Subspace) -> Result<Vec<f64>> {
        self.same_ambient(other)?;
        linalg::principal_angles_of_bases(&self.basis, &other.basis)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "subspace of dim {} in R^{}", self.dim(), self.ambient())
    }
}
