//! Projectors, reflectors, operator chains and fixed-point subspaces.
//!
//! Chains are always listed in application order: `[R1, R2, ..., Rm]`
//! denotes the matrix product `Rm ⋯ R2 R1`.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Tolerance, Vector};
use crate::subspace::Subspace;

/// Orthogonal projector onto `u`.
pub fn projector(u: &Subspace) -> Matrix {
    u.projector()
}

/// Reflector `2 P_U − I`.
pub fn reflector(u: &Subspace) -> Matrix {
    let n = u.ambient();
    u.projector() * 2.0 - Matrix::identity(n, n)
}

/// Classical reflector across the hyperplane with the given normal:
/// `I − 2 n nᵀ / ‖n‖²`.
pub fn hyperplane_reflector(normal: &[f64]) -> Result<Matrix> {
    linalg::ensure_finite_slice(normal)?;
    let v = Vector::from_row_slice(normal);
    let sq = v.norm_squared();
    if sq == 0.0 {
        return Err(Error::ZeroNormal);
    }
    let n = normal.len();
    Ok(Matrix::identity(n, n) - (&v * v.transpose()) * (2.0 / sq))
}

/// An ordered list of square operators, first element applied first.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorChain {
    ambient: usize,
    factors: Vec<Matrix>,
}

impl OperatorChain {
    pub fn new(factors: Vec<Matrix>) -> Result<Self> {
        let first = factors.first().ok_or(Error::EmptyChain)?;
        let ambient = first.nrows();
        for f in &factors {
            if f.nrows() != ambient || f.ncols() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: if f.nrows() != ambient {
                        f.nrows()
                    } else {
                        f.ncols()
                    },
                });
            }
            linalg::ensure_finite(f)?;
        }
        Ok(OperatorChain { ambient, factors })
    }

    /// Chain of reflectors onto `subspaces`, in application order.
    pub fn reflectors(subspaces: &[Subspace]) -> Result<Self> {
        let first = subspaces.first().ok_or(Error::EmptyChain)?;
        for s in subspaces {
            if s.ambient() != first.ambient() {
                return Err(Error::DimensionMismatch {
                    expected: first.ambient(),
                    found: s.ambient(),
                });
            }
        }
        OperatorChain::new(subspaces.iter().map(reflector).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[Matrix] {
        &self.factors
    }

    /// Same factors, reverse application order.
    pub fn reversed(&self) -> Self {
        let mut factors = self.factors.clone();
        factors.reverse();
        OperatorChain {
            ambient: self.ambient,
            factors,
        }
    }

    /// Cyclic shift by `k`: the chain `[R_{k+1}, ..., R_m, R_1, ..., R_k]`.
    pub fn rotated(&self, k: usize) -> Self {
        let mut factors = self.factors.clone();
        factors.rotate_left(k % self.len());
        OperatorChain {
            ambient: self.ambient,
            factors,
        }
    }

    /// The matrix product with the first factor applied first.
    pub fn compose(&self) -> Matrix {
        compose_factors(&self.factors, self.ambient)
    }
}

/// Product of `factors` in application order; the identity for an empty slice.
pub(crate) fn compose_factors(factors: &[Matrix], ambient: usize) -> Matrix {
    factors
        .iter()
        .fold(Matrix::identity(ambient, ambient), |acc, f| f * acc)
}

/// `R_m ⋯ R_1` for `chain = [R_1, ..., R_m]`.
pub fn compose(chain: &OperatorChain) -> Matrix {
    chain.compose()
}

/// Fixed-point subspace of a linear map plus diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedSetReport {
    pub subspace: Subspace,
    /// `‖T q − q‖` for every basis column `q`.
    pub residuals: Vec<f64>,
    /// Largest singular value of `T`.
    pub operator_norm: f64,
}

impl FixedSetReport {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn worst_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Whether `‖T‖ ≤ 1 + slack`.
    pub fn is_nonexpansive(&self, slack: f64) -> bool {
        self.operator_norm <= 1.0 + slack
    }
}

/// `Fix T = ker(T − I)`. Nonexpansiveness is reported, not required.
pub fn fixed_subspace(t: &Matrix, tol: &Tolerance) -> Result<FixedSetReport> {
    let n = t.nrows();
    if n != t.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: t.ncols(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "ambient dimension must be at least 1".into(),
        ));
    }
    linalg::ensure_finite(t)?;
    let shifted = t - Matrix::identity(n, n);
    let operator_norm = linalg::spectral_norm(t);
    let basis = linalg::null_space_scaled(&shifted, operator_norm.max(1.0), tol)?;
    let residuals = basis.column_iter().map(|q| (&shifted * q).norm()).collect();
    Ok(FixedSetReport {
        subspace: Subspace::from_svd_basis(basis),
        residuals,
        operator_norm,
    })
}

fn same_ambient(subspaces: &[&Subspace]) -> Result<usize> {
    let n = subspaces[0].ambient();
    for s in subspaces {
        if s.ambient() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.ambient(),
            });
        }
    }
    Ok(n)
}

/// `4 P_W P_V P_U − 2 (P_W P_V + P_W P_U + P_V P_U) + P_W + P_V + P_U`.
///
/// Satisfies `R_W R_V R_U = 2M − I`, so `Fix(R_W R_V R_U) = Fix M`.
pub fn expanded_three_reflector(u: &Subspace, v: &Subspace, w: &Subspace) -> Result<Matrix> {
    same_ambient(&[u, v, w])?;
    let (pu, pv, pw) = (u.projector(), v.projector(), w.projector());
    let pairs = &pw * &pv + &pw * &pu + &pv * &pu;
    Ok(&pw * &pv * &pu * 4.0 - pairs * 2.0 + pw + pv + pu)
}

/// Douglas–Rachford operator `½ (I + R_{U2} R_{U1})`.
pub fn douglas_rachford_operator(u1: &Subspace, u2: &Subspace) -> Result<Matrix> {
    let n = same_ambient(&[u1, u2])?;
    Ok((Matrix::identity(n, n) + reflector(u2) * reflector(u1)) * 0.5)
}

/// One row of a Douglas–Rachford run.
#[derive(Debug, Clone, PartialEq)]
pub struct DrStep {
    pub k: usize,
    pub iterate: Vector,
    /// `P_{U1} x_k`.
    pub shadow: Vector,
    /// `‖P_{U1} x_k − P_{U1∩U2} x_0‖`.
    pub shadow_error: f64,
    /// `‖T x_k − x_k‖`.
    pub step_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrTrace {
    pub steps: Vec<DrStep>,
    pub converged: bool,
    /// Cosine of the smallest nonzero principal angle between U1 and U2;
    /// `None` when no such angle exists.
    pub predicted_rate: Option<f64>,
    /// `P_{U1∩U2} x_0`.
    pub target: Vector,
}

impl DrTrace {
    pub fn iterations(&self) -> usize {
        self.steps.last().map_or(0, |s| s.k)
    }

    pub fn final_error(&self) -> f64 {
        self.steps.last().map_or(f64::NAN, |s| s.shadow_error)
    }

    /// Per-step contraction factor of the shadow error, fitted by least
    /// squares to `ln e_k` over steps `k > burn_in` with
    /// `e_k > rel_floor · max_k e_k`.
    ///
    /// The shadow error of a rotation-like iteration oscillates, so single
    /// step ratios are meaningless; the fitted slope is not.
    pub fn observed_rate(&self, burn_in: usize, rel_floor: f64) -> Option<f64> {
        let floor = rel_floor
            * self
                .steps
                .iter()
                .map(|s| s.shadow_error)
                .fold(0.0, f64::max);
        let pts: Vec<(f64, f64)> = self
            .steps
            .iter()
            .filter(|s| s.k > burn_in && s.shadow_error > floor)
            .map(|s| (s.k as f64, s.shadow_error.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some((sxy / sxx).exp())
    }
}

/// Runs `x_{k+1} = T x_k` for the Douglas–Rachford operator of `(u1, u2)`.
///
/// Stops at the first `k` with shadow error `≤ eps` and `‖T x_k − x_k‖ ≤ eps`,
/// or after `max_iter` steps.
pub fn dr_iterate(
    u1: &Subspace,
    u2: &Subspace,
    x0: &[f64],
    max_iter: usize,
    eps: f64,
    tol: &Tolerance,
) -> Result<DrTrace> {
    let n = same_ambient(&[u1, u2])?;
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x0.len(),
        });
    }
    linalg::ensure_finite_slice(x0)?;
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let t = douglas_rachford_operator(u1, u2)?;
    let p1 = u1.projector();
    let meet = u1.intersect(u2, tol)?;
    let x0 = Vector::from_row_slice(x0);
    let target = meet.projector() * &x0;

    let predicted_rate = if u1.is_zero() || u2.is_zero() {
        None
    } else {
        u1.principal_angles(u2)?
            .into_iter()
            .find(|&a| a > 1e-8)
            .map(f64::cos)
    };

    let mut steps = Vec::new();
    let mut x = x0;
    let mut converged = false;
    for k in 0..=max_iter {
        let next = &t * &x;
        let shadow = &p1 * &x;
        let shadow_error = (&shadow - &target).norm();
        let step_residual = (&next - &x).norm();
        steps.push(DrStep {
            k,
            iterate: x,
            shadow,
            shadow_error,
            step_residual,
        });
        if shadow_error <= eps && step_residual <= eps {
            converged = true;
            break;
        }
        x = next;
    }
    Ok(DrTrace {
        steps,
        converged,
        predicted_rate,
        target,
    })
}
