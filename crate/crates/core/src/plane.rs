//! Exact calculus for the planar isometry group O(2).
//!
//! `Refl(α)` reflects across the line at axis angle `α` and has period `π`;
//! `Rot(θ)` rotates counterclockwise by `θ` and has period `2π`. Products of
//! these are closed in the group and can be computed on angles alone.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::subspace::Subspace;

/// Values this close to the end of a fundamental domain snap to 0.
pub const ANGLE_SNAP: f64 = 1e-9;

/// Default threshold for deciding `β ∈ ℤπ`.
pub const DEFAULT_BETA_TOL: f64 = 1e-9;

fn canonical(angle: f64, period: f64) -> f64 {
    let r = angle.rem_euclid(period);
    if period - r <= ANGLE_SNAP || r <= ANGLE_SNAP {
        0.0
    } else {
        r
    }
}

fn finite(angle: f64) -> Result<f64> {
    if angle.is_finite() {
        Ok(angle)
    } else {
        Err(Error::NonFinite)
    }
}

/// `[[cos 2α, sin 2α], [sin 2α, −cos 2α]]`.
pub fn refl_matrix(alpha: f64) -> Result<Matrix> {
    let (s, c) = (2.0 * finite(alpha)?).sin_cos();
    Ok(Matrix::from_row_slice(2, 2, &[c, s, s, -c]))
}

/// `[[cos α, −sin α], [sin α, cos α]]`.
pub fn rot_matrix(alpha: f64) -> Result<Matrix> {
    let (s, c) = finite(alpha)?.sin_cos();
    Ok(Matrix::from_row_slice(2, 2, &[c, -s, s, c]))
}

/// The line `ℝ(cos α, sin α)`.
pub fn line_subspace(alpha: f64) -> Result<Subspace> {
    let (s, c) = finite(alpha)?.sin_cos();
    Subspace::line(&[c, s])
}

/// Axis angle in `[0, π)` of a line in ℝ².
pub fn axis_angle(line: &Subspace) -> Result<f64> {
    if line.ambient() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: line.ambient(),
        });
    }
    if line.dim() != 1 {
        return Err(Error::InvalidArgument(format!(
            "axis angle needs a line, got dimension {}",
            line.dim()
        )));
    }
    let b = line.basis();
    Ok(canonical(b[(1, 0)].atan2(b[(0, 0)]), PI))
}

/// An element of O(2) in canonical form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlaneIsometry {
    /// Counterclockwise rotation, angle in `[0, 2π)`.
    Rotation(f64),
    /// Reflection across the line at this axis angle, in `[0, π)`.
    Reflection(f64),
}

impl PlaneIsometry {
    pub fn rotation(theta: f64) -> Result<Self> {
        Ok(PlaneIsometry::Rotation(canonical(finite(theta)?, TAU)))
    }

    pub fn reflection(alpha: f64) -> Result<Self> {
        Ok(PlaneIsometry::Reflection(canonical(finite(alpha)?, PI)))
    }

    pub fn identity() -> Self {
        PlaneIsometry::Rotation(0.0)
    }

    /// The reflector onto a subspace of ℝ² as an isometry: a line gives a
    /// reflection, `{0}` gives `Rot(π) = −I`, ℝ² gives the identity.
    pub fn reflector_of(u: &Subspace) -> Result<Self> {
        if u.ambient() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: u.ambient(),
            });
        }
        match u.dim() {
            0 => Ok(PlaneIsometry::Rotation(PI)),
            1 => Ok(PlaneIsometry::Reflection(axis_angle(u)?)),
            _ => Ok(PlaneIsometry::identity()),
        }
    }

    pub fn angle(&self) -> f64 {
        match *self {
            PlaneIsometry::Rotation(a) | PlaneIsometry::Reflection(a) => a,
        }
    }

    pub fn is_reflection(&self) -> bool {
        matches!(self, PlaneIsometry::Reflection(_))
    }

    pub fn matrix(&self) -> Matrix {
        match *self {
            PlaneIsometry::Rotation(t) => rot_matrix(t),
            PlaneIsometry::Reflection(a) => refl_matrix(a),
        }
        .expect("canonical angles are finite")
    }

    /// Whether this is the identity, i.e. a rotation by `2β` with `β`
    /// within `beta_tol` of a multiple of `π`.
    pub fn is_identity(&self, beta_tol: f64) -> bool {
        match *self {
            PlaneIsometry::Rotation(t) => t.min(TAU - t) / 2.0 <= beta_tol,
            PlaneIsometry::Reflection(_) => false,
        }
    }

    /// Fixed-point set: the axis for a reflection, ℝ² for the identity,
    /// `{0}` for any other rotation.
    pub fn fixed_set(&self, beta_tol: f64) -> Subspace {
        match *self {
            PlaneIsometry::Reflection(a) => line_subspace(a).expect("canonical angles are finite"),
            PlaneIsometry::Rotation(_) if self.is_identity(beta_tol) => Subspace::full(2),
            PlaneIsometry::Rotation(_) => Subspace::zero(2),
        }
    }

    /// `second ∘ self`.
    pub fn then(self, second: PlaneIsometry) -> Self {
        compose_symbolic(second, self)
    }
}

impl fmt::Display for PlaneIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PlaneIsometry::Rotation(t) => write!(f, "Rot({t:.12})"),
            PlaneIsometry::Reflection(a) => write!(f, "Refl({a:.12})"),
        }
    }
}

/// `second ∘ first` by the four composition rules of O(2).
pub fn compose_symbolic(second: PlaneIsometry, first: PlaneIsometry) -> PlaneIsometry {
    use PlaneIsometry::{Reflection, Rotation};
    let out = match (second, first) {
        (Rotation(b), Rotation(a)) => PlaneIsometry::rotation(a + b),
        (Reflection(b), Reflection(a)) => PlaneIsometry::rotation(2.0 * (b - a)),
        (Rotation(b), Reflection(a)) => PlaneIsometry::reflection(a + b / 2.0),
        (Reflection(b), Rotation(a)) => PlaneIsometry::reflection(b - a / 2.0),
    };
    out.expect("canonical angles are finite")
}

/// Result of composing the reflections `Refl(α_m) ⋯ Refl(α_1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionProduct {
    pub isometry: PlaneIsometry,
    /// Alternating sum `α_m − α_{m−1} + ⋯ ± α_1`, not reduced.
    pub beta: f64,
}

impl ReflectionProduct {
    /// Fixed-point set, deciding `β ∈ ℤπ` at `beta_tol`.
    pub fn fixed_set(&self, beta_tol: f64) -> Subspace {
        self.isometry.fixed_set(beta_tol)
    }
}

/// Closed form for the composition of reflections with axis angles given in
/// application order: `Refl(β)` for an odd count, `Rot(2β)` for an even one.
pub fn compose_reflection_angles(angles: &[f64]) -> Result<ReflectionProduct> {
    if angles.is_empty() {
        return Err(Error::EmptyChain);
    }
    let mut beta = 0.0;
    for &a in angles {
        beta = finite(a)? - beta;
    }
    let isometry = if angles.len() % 2 == 1 {
        PlaneIsometry::reflection(beta)?
    } else {
        PlaneIsometry::rotation(2.0 * beta)?
    };
    Ok(ReflectionProduct { isometry, beta })
}

/// Three lines near 120° apart around the axis angle `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbedTriple {
    /// `γ + π/6 + ε₁`, `γ + ε₂`, `γ − π/6 + ε₃`, in application order.
    pub angles: [f64; 3],
    /// `ε₁ − ε₂ + ε₃`.
    pub epsilon: f64,
    /// Axis angle `γ + ε` of the fixed line of the composition.
    pub fixed_axis: f64,
}

pub fn perturbed_triple(gamma: f64, eps1: f64, eps2: f64, eps3: f64) -> Result<PerturbedTriple> {
    for v in [gamma, eps1, eps2, eps3] {
        finite(v)?;
    }
    let epsilon = eps1 - eps2 + eps3;
    Ok(PerturbedTriple {
        angles: [
            gamma + PI / 6.0 + eps1,
            gamma + eps2,
            gamma - PI / 6.0 + eps3,
        ],
        epsilon,
        fixed_axis: gamma + epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Tolerance;
    use crate::operators::{fixed_subspace, reflector};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn refl_matrix_examples() {
        assert_abs_diff_eq!(
            refl_matrix(0.0).unwrap(),
            Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
        );
        assert_abs_diff_eq!(
            refl_matrix(FRAC_PI_2).unwrap(),
            Matrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]),
            epsilon = 1e-15
        );
        assert!(refl_matrix(f64::NAN).is_err());
    }

    #[test]
    fn refl_matrix_is_the_line_reflector() {
        for &a in &[0.3, -1.1, 2.5, 7.0] {
            let r = reflector(&line_subspace(a).unwrap());
            assert_abs_diff_eq!(refl_matrix(a).unwrap(), r, epsilon = 1e-14);
        }
    }

    #[test]
    fn rot_matrix_examples() {
        assert_abs_diff_eq!(rot_matrix(0.0).unwrap(), Matrix::identity(2, 2));
        assert_abs_diff_eq!(
            rot_matrix(PI).unwrap(),
            -Matrix::identity(2, 2),
            epsilon = 1e-15
        );
        let (a, b) = (0.7, -2.3);
        assert_abs_diff_eq!(
            rot_matrix(b).unwrap() * rot_matrix(a).unwrap(),
            rot_matrix(a + b).unwrap(),
            epsilon = 1e-14
        );
        assert!(rot_matrix(f64::INFINITY).is_err());
    }

    #[test]
    fn line_subspace_examples() {
        let t = tol();
        assert!(line_subspace(0.0)
            .unwrap()
            .equals(&Subspace::line(&[1.0, 0.0]).unwrap(), &t)
            .unwrap());
        assert!(line_subspace(FRAC_PI_4)
            .unwrap()
            .equals(&Subspace::line(&[1.0, 1.0]).unwrap(), &t)
            .unwrap());
        assert!(line_subspace(1.2)
            .unwrap()
            .equals(&line_subspace(1.2 + PI).unwrap(), &t)
            .unwrap());
    }

    #[test]
    fn canonicalization_snaps_to_zero() {
        assert_eq!(
            PlaneIsometry::reflection(PI - 1e-12).unwrap(),
            PlaneIsometry::Reflection(0.0)
        );
        assert_eq!(
            PlaneIsometry::rotation(-1e-12).unwrap(),
            PlaneIsometry::Rotation(0.0)
        );
        assert_eq!(
            PlaneIsometry::rotation(TAU).unwrap(),
            PlaneIsometry::Rotation(0.0)
        );
        let PlaneIsometry::Reflection(a) = PlaneIsometry::reflection(-FRAC_PI_4).unwrap() else {
            panic!()
        };
        assert_abs_diff_eq!(a, 3.0 * FRAC_PI_4, epsilon = 1e-15);
    }

    #[test]
    fn perpendicular_reflections_give_half_turn() {
        let r = compose_symbolic(
            PlaneIsometry::Reflection(FRAC_PI_2),
            PlaneIsometry::Reflection(0.0),
        );
        let PlaneIsometry::Rotation(t) = r else {
            panic!("expected rotation")
        };
        assert_abs_diff_eq!(t, PI, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix(), -Matrix::identity(2, 2), epsilon = 1e-15);
    }

    #[test]
    fn inverse_rotations_cancel() {
        let th = 1.234;
        let r = compose_symbolic(
            PlaneIsometry::rotation(th).unwrap(),
            PlaneIsometry::rotation(TAU - th).unwrap(),
        );
        assert_eq!(r, PlaneIsometry::Rotation(0.0));
    }

    #[test]
    fn base_case_single_reflection() {
        let p = compose_reflection_angles(&[0.4]).unwrap();
        assert_eq!(p.isometry, PlaneIsometry::Reflection(0.4));
        assert_eq!(p.beta, 0.4);
        assert!(matches!(
            compose_reflection_angles(&[]),
            Err(Error::EmptyChain)
        ));
    }

    #[test]
    fn alternating_sum_sign_convention() {
        // β = α3 − α2 + α1 for three, α2 − α1 for two.
        let p = compose_reflection_angles(&[0.1, 0.5, 0.9]).unwrap();
        assert_abs_diff_eq!(p.beta, 0.9 - 0.5 + 0.1, epsilon = 1e-15);
        let p = compose_reflection_angles(&[0.1, 0.5]).unwrap();
        assert_abs_diff_eq!(p.beta, 0.4, epsilon = 1e-15);
        assert!(matches!(p.isometry, PlaneIsometry::Rotation(t) if (t - 0.8).abs() < 1e-15));
    }

    #[test]
    fn conjugated_reflection_fixes_the_diagonal() {
        // R_{U⊥} R_V R_U with U = ℝ(1,0), V = ℝ(1,1)
        let p = compose_reflection_angles(&[0.0, FRAC_PI_4, FRAC_PI_2]).unwrap();
        let PlaneIsometry::Reflection(a) = p.isometry else {
            panic!()
        };
        assert_abs_diff_eq!(a, FRAC_PI_4, epsilon = 1e-15);
        assert!(p
            .fixed_set(DEFAULT_BETA_TOL)
            .equals(&Subspace::line(&[1.0, 1.0]).unwrap(), &tol())
            .unwrap());
    }

    #[test]
    fn three_lines_at_120_degrees() {
        let p = compose_reflection_angles(&[FRAC_PI_2, FRAC_PI_6, 5.0 * FRAC_PI_6]).unwrap();
        let PlaneIsometry::Reflection(a) = p.isometry else {
            panic!()
        };
        assert_abs_diff_eq!(a, FRAC_PI_6, epsilon = 1e-14);
        let fix = p.fixed_set(DEFAULT_BETA_TOL);
        let s3 = 3f64.sqrt();
        assert!(fix
            .contains(&Subspace::line(&[-s3, -1.0]).unwrap(), &tol())
            .unwrap());
    }

    #[test]
    fn fixed_sets_of_isometries() {
        let t = tol();
        let f = PlaneIsometry::Reflection(FRAC_PI_4).fixed_set(DEFAULT_BETA_TOL);
        assert!(f.equals(&Subspace::line(&[1.0, 1.0]).unwrap(), &t).unwrap());
        assert_eq!(
            PlaneIsometry::Rotation(0.0)
                .fixed_set(DEFAULT_BETA_TOL)
                .dim(),
            2
        );
        assert_eq!(
            PlaneIsometry::Rotation(PI)
                .fixed_set(DEFAULT_BETA_TOL)
                .dim(),
            0
        );
    }

    #[test]
    fn perturbed_triple_examples() {
        let t = tol();
        let p = perturbed_triple(0.8, 0.0, 0.0, 0.0).unwrap();
        let prod = compose_reflection_angles(&p.angles).unwrap();
        assert!(prod
            .fixed_set(DEFAULT_BETA_TOL)
            .equals(&line_subspace(0.8).unwrap(), &t)
            .unwrap());

        // γ = π/6: the middle line is ℝ(√3,1), which is also the fixed line
        let p = perturbed_triple(FRAC_PI_6, 0.0, 0.0, 0.0).unwrap();
        let s3 = 3f64.sqrt();
        let middle = Subspace::line(&[s3, 1.0]).unwrap();
        assert!(line_subspace(p.angles[1])
            .unwrap()
            .equals(&middle, &t)
            .unwrap());
        let prod = compose_reflection_angles(&p.angles).unwrap();
        assert!(prod
            .fixed_set(DEFAULT_BETA_TOL)
            .equals(&middle, &t)
            .unwrap());

        // numeric oracle: fixed line of the literal 2×2 product
        let p = perturbed_triple(0.0, 0.01, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(p.fixed_axis, 0.01, epsilon = 1e-15);
        let m = p.angles.iter().fold(Matrix::identity(2, 2), |acc, &a| {
            refl_matrix(a).unwrap() * acc
        });
        let fix = fixed_subspace(&m, &t).unwrap().subspace;
        assert_eq!(fix.dim(), 1);
        assert_abs_diff_eq!(axis_angle(&fix).unwrap(), 0.01, epsilon = 1e-12);
    }

    #[test]
    fn reflector_of_subspaces() {
        assert_eq!(
            PlaneIsometry::reflector_of(&Subspace::zero(2)).unwrap(),
            PlaneIsometry::Rotation(PI)
        );
        assert_eq!(
            PlaneIsometry::reflector_of(&Subspace::full(2)).unwrap(),
            PlaneIsometry::identity()
        );
        let r = PlaneIsometry::reflector_of(&Subspace::line(&[-1.0, -1.0]).unwrap()).unwrap();
        assert!(matches!(r, PlaneIsometry::Reflection(a) if (a - FRAC_PI_4).abs() < 1e-15));
    }
}
