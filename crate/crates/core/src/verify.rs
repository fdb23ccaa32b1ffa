//! Executable checks for structural results about compositions of linear
//! reflectors, plus seeded generators of random instances.
//!
//! Every check reduces its claims to a list of nonnegative residuals
//! (matrix entry differences, projector distances, containment defects or
//! dimension mismatches). A check passes iff its worst residual is at most
//! the tolerance it was run with; there are no other pass conditions.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Tolerance};
use crate::operators::{self, fixed_subspace, reflector, OperatorChain};
use crate::plane::{self, PlaneIsometry};
use crate::subspace::Subspace;

/// Default check tolerance for ambient dimension `n`: `1e-8`, scaled by
/// `√n` above `n = 16`.
pub fn check_tolerance(n: usize) -> f64 {
    if n > 16 {
        1e-8 * (n as f64).sqrt()
    } else {
        1e-8
    }
}

/// One named residual inside a [`CheckReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub label: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check_name: String,
    pub instance: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub details: Vec<Assertion>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] worst residual {:.3e} (tol {:.1e}) {}",
            self.check_name,
            self.instance,
            self.worst_residual,
            self.tolerance,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

struct Recorder {
    name: &'static str,
    instance: String,
    tolerance: f64,
    details: Vec<Assertion>,
}

impl Recorder {
    fn new(check: Check, instance: impl Into<String>, tol: &Tolerance) -> Self {
        Recorder {
            name: check.name(),
            instance: instance.into(),
            tolerance: tol.eq_abs,
            details: Vec::new(),
        }
    }

    fn residual(&mut self, label: impl Into<String>, residual: f64) {
        // NaN must never pass
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        self.details.push(Assertion {
            label: label.into(),
            residual,
        });
    }

    fn matrices(&mut self, label: impl Into<String>, a: &Matrix, b: &Matrix) {
        self.residual(label, linalg::max_abs_diff(a, b));
    }

    fn subspaces(&mut self, label: impl Into<String>, a: &Subspace, b: &Subspace) -> Result<()> {
        self.residual(label, a.distance(b)?);
        Ok(())
    }

    fn finish(self) -> CheckReport {
        let worst = self.details.iter().map(|a| a.residual).fold(0.0, f64::max);
        CheckReport {
            check_name: self.name.to_string(),
            instance: self.instance,
            passed: worst <= self.tolerance,
            worst_residual: worst,
            tolerance: self.tolerance,
            details: self.details,
        }
    }
}

fn dims_of(subspaces: &[Subspace]) -> String {
    let dims: Vec<String> = subspaces.iter().map(|s| s.dim().to_string()).collect();
    format!(
        "n={} dims=[{}]",
        subspaces.first().map_or(0, |s| s.ambient()),
        dims.join(",")
    )
}

fn same_ambient(subspaces: &[&Subspace]) -> Result<usize> {
    let n = subspaces.first().ok_or(Error::EmptyChain)?.ambient();
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

fn chain_fix(chain: &[Subspace], tol: &Tolerance) -> Result<(Matrix, Subspace)> {
    let t = OperatorChain::reflectors(chain)?.compose();
    let fix = fixed_subspace(&t, tol)?.subspace;
    Ok((t, fix))
}

fn sum_all(chain: &[Subspace], tol: &Tolerance) -> Result<Subspace> {
    let n = chain.first().ok_or(Error::EmptyChain)?.ambient();
    chain
        .iter()
        .try_fold(Subspace::zero(n), |acc, u| acc.sum(u, tol))
}

/// `Fix(R_{U2} R_{U1}) = (U1∩U2) ⊕ (U1⊥∩U2⊥)` and `P_{U1} Fix = U1∩U2`.
pub fn check_fact_two_reflectors(
    u1: &Subspace,
    u2: &Subspace,
    tol: &Tolerance,
) -> Result<CheckReport> {
    same_ambient(&[u1, u2])?;
    let mut rec = Recorder::new(
        Check::FactTwoReflectors,
        dims_of(&[u1.clone(), u2.clone()]),
        tol,
    );
    let (_, fix) = chain_fix(&[u1.clone(), u2.clone()], tol)?;
    let meet = u1.intersect(u2, tol)?;
    let meet_perp = u1.complement(tol).intersect(&u2.complement(tol), tol)?;
    let predicted = meet.direct_sum(&meet_perp, tol)?;
    rec.subspaces("Fix(R2 R1) = (U1∩U2) ⊕ (U1⊥∩U2⊥)", &fix, &predicted)?;
    let shadow = fix.image(&u1.projector(), tol)?;
    rec.subspaces("P_U1 Fix(R2 R1) = U1∩U2", &shadow, &meet)?;
    Ok(rec.finish())
}

/// `R_{U⊥}R_U = R_U R_{U⊥} = −I`, `−R_U = R_U(−I) = R_{U⊥}`,
/// `Fix(−R_U) = Fix R_{U⊥} = U⊥`.
pub fn check_lemma_easy(u: &Subspace, tol: &Tolerance) -> Result<CheckReport> {
    let n = u.ambient();
    let mut rec = Recorder::new(Check::LemmaEasy, dims_of(std::slice::from_ref(u)), tol);
    let up = u.complement(tol);
    let (ru, rp) = (reflector(u), reflector(&up));
    let minus_id = -Matrix::identity(n, n);
    rec.matrices("R_U⊥ R_U = -I", &(&rp * &ru), &minus_id);
    rec.matrices("R_U R_U⊥ = -I", &(&ru * &rp), &minus_id);
    rec.matrices("-R_U = R_U⊥", &(-&ru), &rp);
    rec.matrices("R_U (-I) = R_U⊥", &(&ru * &minus_id), &rp);
    rec.subspaces(
        "Fix(-R_U) = U⊥",
        &fixed_subspace(&(-&ru), tol)?.subspace,
        &up,
    )?;
    rec.subspaces("Fix(R_U⊥) = U⊥", &fixed_subspace(&rp, tol)?.subspace, &up)?;
    Ok(rec.finish())
}

/// The four products of `R_U`, `R_{U⊥}`, `R_V` with the `U`-pair adjacent
/// equal `−R_V = R_{V⊥}`, and each has fixed set `V⊥`.
pub fn check_prop_triple_perp(u: &Subspace, v: &Subspace, tol: &Tolerance) -> Result<CheckReport> {
    same_ambient(&[u, v])?;
    let mut rec = Recorder::new(Check::PropTriplePerp, dims_of(&[u.clone(), v.clone()]), tol);
    let up = u.complement(tol);
    let vp = v.complement(tol);
    let rv = reflector(v);
    let rvp = reflector(&vp);
    let orders: [(&str, [&Subspace; 3]); 4] = [
        ("R_V R_U⊥ R_U", [u, &up, v]),
        ("R_V R_U R_U⊥", [&up, u, v]),
        ("R_U⊥ R_U R_V", [v, u, &up]),
        ("R_U R_U⊥ R_V", [v, &up, u]),
    ];
    for (label, chain) in orders {
        let chain: Vec<Subspace> = chain.iter().map(|s| (*s).clone()).collect();
        let (t, fix) = chain_fix(&chain, tol)?;
        rec.matrices(format!("{label} = -R_V"), &t, &(-&rv));
        rec.matrices(format!("{label} = R_V⊥"), &t, &rvp);
        rec.subspaces(format!("Fix({label}) = V⊥"), &fix, &vp)?;
    }
    Ok(rec.finish())
}

/// `Fix(R_{U⊥} R_V R_U) = Fix(R_U R_V R_{U⊥}) = R_U(V⊥)`.
pub fn check_prop_conjugate(u: &Subspace, v: &Subspace, tol: &Tolerance) -> Result<CheckReport> {
    same_ambient(&[u, v])?;
    let mut rec = Recorder::new(Check::PropConjugate, dims_of(&[u.clone(), v.clone()]), tol);
    let up = u.complement(tol);
    let image = v.complement(tol).image(&reflector(u), tol)?;
    let (_, fix_a) = chain_fix(&[u.clone(), v.clone(), up.clone()], tol)?;
    let (_, fix_b) = chain_fix(&[up, v.clone(), u.clone()], tol)?;
    rec.subspaces("Fix(R_U⊥ R_V R_U) = R_U(V⊥)", &fix_a, &image)?;
    rec.subspaces("Fix(R_U R_V R_U⊥) = R_U(V⊥)", &fix_b, &image)?;
    Ok(rec.finish())
}

/// For every cyclic shift `k`:
/// `Fix(R_m⋯R_1) = (R_m⋯R_{k+1})(Fix(R_k⋯R_1 R_m⋯R_{k+1}))`.
pub fn check_cyclic_shift(chain: &[Subspace], tol: &Tolerance) -> Result<CheckReport> {
    let refs: Vec<&Subspace> = chain.iter().collect();
    let n = same_ambient(&refs)?;
    let mut rec = Recorder::new(Check::CyclicShift, dims_of(chain), tol);
    let ops = OperatorChain::reflectors(chain)?;
    let fix = fixed_subspace(&ops.compose(), tol)?.subspace;
    for k in 0..chain.len() {
        let shifted_fix = fixed_subspace(&ops.rotated(k).compose(), tol)?.subspace;
        let tail = operators::compose_factors(&ops.factors()[k..], n);
        let image = shifted_fix.image(&tail, tol)?;
        rec.subspaces(format!("shift {k}"), &fix, &image)?;
    }
    Ok(rec.finish())
}

/// `Fix(R_m⋯R_1) = Fix(R_1⋯R_m)` and `Fix T = Fix Tᵀ` for `T = R_m⋯R_1`.
pub fn check_reversal(chain: &[Subspace], tol: &Tolerance) -> Result<CheckReport> {
    let refs: Vec<&Subspace> = chain.iter().collect();
    same_ambient(&refs)?;
    let mut rec = Recorder::new(Check::Reversal, dims_of(chain), tol);
    let ops = OperatorChain::reflectors(chain)?;
    let t = ops.compose();
    let fix = fixed_subspace(&t, tol)?.subspace;
    let fix_rev = fixed_subspace(&ops.reversed().compose(), tol)?.subspace;
    let fix_adj = fixed_subspace(&t.transpose(), tol)?.subspace;
    rec.subspaces("Fix(forward) = Fix(reversed)", &fix, &fix_rev)?;
    rec.subspaces("Fix T = Fix T^T", &fix, &fix_adj)?;
    Ok(rec.finish())
}

/// `Fix(R_{U_m}⋯R_{U_1}) ⊆ U_1+⋯+U_m` for an odd number of subspaces. For
/// three subspaces the expanded form `2M − I` and `Fix M` are checked as well.
pub fn check_odd_sum_bound(chain: &[Subspace], tol: &Tolerance) -> Result<CheckReport> {
    if chain.len().is_multiple_of(2) {
        return Err(Error::EvenChain(chain.len()));
    }
    let refs: Vec<&Subspace> = chain.iter().collect();
    let n = same_ambient(&refs)?;
    let mut rec = Recorder::new(Check::OddSumBound, dims_of(chain), tol);
    let (t, fix) = chain_fix(chain, tol)?;
    let total = sum_all(chain, tol)?;
    rec.residual("Fix ⊆ U1+...+Um", total.containment_residual(&fix)?);
    if let [u, v, w] = chain {
        let m = operators::expanded_three_reflector(u, v, w)?;
        rec.matrices(
            "R_W R_V R_U = 2M - I",
            &t,
            &(&m * 2.0 - Matrix::identity(n, n)),
        );
        rec.subspaces(
            "Fix(R_W R_V R_U) = Fix M",
            &fix,
            &fixed_subspace(&m, tol)?.subspace,
        )?;
    }
    Ok(rec.finish())
}

/// Just the identity `R_W R_V R_U = 2M − I` for the expanded three-term form.
pub fn check_expansion_identity(
    u: &Subspace,
    v: &Subspace,
    w: &Subspace,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let n = same_ambient(&[u, v, w])?;
    let mut rec = Recorder::new(
        Check::ExpansionIdentity,
        dims_of(&[u.clone(), v.clone(), w.clone()]),
        tol,
    );
    let t = OperatorChain::reflectors(&[u.clone(), v.clone(), w.clone()])?.compose();
    let m = operators::expanded_three_reflector(u, v, w)?;
    rec.matrices(
        "R_W R_V R_U = 2M - I",
        &t,
        &(m * 2.0 - Matrix::identity(n, n)),
    );
    Ok(rec.finish())
}

/// For pairwise orthogonal subspaces: `Fix(R_m⋯R_1) = ΣU_i` when `m` is odd,
/// `Fix(−R_m⋯R_1) = ΣU_i` when `m` is even.
pub fn check_orthogonal_sharpness(chain: &[Subspace], tol: &Tolerance) -> Result<CheckReport> {
    let refs: Vec<&Subspace> = chain.iter().collect();
    same_ambient(&refs)?;
    for (i, a) in chain.iter().enumerate() {
        for b in &chain[i + 1..] {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let overlap = (a.basis().transpose() * b.basis()).amax();
            if overlap > tol.eq_abs {
                return Err(Error::NotOrthogonal { overlap });
            }
        }
    }
    let mut rec = Recorder::new(Check::OrthogonalSharpness, dims_of(chain), tol);
    let (t, _) = chain_fix(chain, tol)?;
    let total = sum_all(chain, tol)?;
    if chain.len() % 2 == 1 {
        let fix = fixed_subspace(&t, tol)?.subspace;
        rec.subspaces("odd m: Fix(R_m...R_1) = sum", &fix, &total)?;
    } else {
        let fix = fixed_subspace(&(-t), tol)?.subspace;
        rec.subspaces("even m: Fix(-R_m...R_1) = sum", &fix, &total)?;
    }
    Ok(rec.finish())
}

/// `(m + n) mod 2 = dim Fix(R_m⋯R_1) mod 2` for classical reflectors with the
/// given hyperplane normals. The residual is 1 on a parity mismatch.
pub fn check_parity(normals: &[Vec<f64>], tol: &Tolerance) -> Result<CheckReport> {
    let n = normals.first().ok_or(Error::EmptyChain)?.len();
    let mut factors = Vec::with_capacity(normals.len());
    for normal in normals {
        if normal.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: normal.len(),
            });
        }
        factors.push(operators::hyperplane_reflector(normal)?);
    }
    let m = normals.len();
    let t = OperatorChain::new(factors)?.compose();
    let dim = fixed_subspace(&t, tol)?.dim();
    let mut rec = Recorder::new(Check::Parity, format!("n={n} m={m} dim Fix={dim}"), tol);
    let mismatch = ((m + n) % 2 != dim % 2) as u8;
    rec.residual("(m + n) mod 2 = dim Fix mod 2", f64::from(mismatch));
    Ok(rec.finish())
}

/// Closed-form classification of `Refl(α_m)⋯Refl(α_1)` against the literal
/// 2×2 product and its numerically computed fixed set.
pub fn check_plane_classification(
    angles: &[f64],
    beta_tol: f64,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let product = plane::compose_reflection_angles(angles)?;
    let literal = angles.iter().try_fold(Matrix::identity(2, 2), |acc, &a| {
        plane::refl_matrix(a).map(|r| r * acc)
    })?;
    let list: Vec<String> = angles.iter().map(|a| format!("{a:.6}")).collect();
    let mut rec = Recorder::new(
        Check::PlaneClassification,
        format!("angles=[{}]", list.join(",")),
        tol,
    );
    rec.matrices(
        "symbolic = literal product",
        &product.isometry.matrix(),
        &literal,
    );
    let numeric = fixed_subspace(&literal, tol)?.subspace;
    rec.subspaces(
        "symbolic Fix = numeric Fix",
        &product.fixed_set(beta_tol),
        &numeric,
    )?;
    Ok(rec.finish())
}

/// `matrix(second ∘ first) = matrix(second) · matrix(first)`.
pub fn check_plane_calculus(
    second: PlaneIsometry,
    first: PlaneIsometry,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let mut rec = Recorder::new(Check::PlaneCalculus, format!("{second} after {first}"), tol);
    let symbolic = plane::compose_symbolic(second, first).matrix();
    rec.matrices(
        "composition rule = matrix product",
        &symbolic,
        &(second.matrix() * first.matrix()),
    );
    Ok(rec.finish())
}

/// Named checks runnable by [`run_suite`] and [`Check::run_on`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    FactTwoReflectors,
    LemmaEasy,
    PropTriplePerp,
    PropConjugate,
    CyclicShift,
    Reversal,
    OddSumBound,
    ExpansionIdentity,
    OrthogonalSharpness,
    Parity,
    PlaneClassification,
    PlaneCalculus,
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::FactTwoReflectors,
        Check::LemmaEasy,
        Check::PropTriplePerp,
        Check::PropConjugate,
        Check::CyclicShift,
        Check::Reversal,
        Check::OddSumBound,
        Check::ExpansionIdentity,
        Check::OrthogonalSharpness,
        Check::Parity,
        Check::PlaneClassification,
        Check::PlaneCalculus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::FactTwoReflectors => "fact_two_reflectors",
            Check::LemmaEasy => "lemma_easy",
            Check::PropTriplePerp => "prop_triple_perp",
            Check::PropConjugate => "prop_conjugate",
            Check::CyclicShift => "cyclic_shift",
            Check::Reversal => "reversal",
            Check::OddSumBound => "odd_sum_bound",
            Check::ExpansionIdentity => "expansion_identity",
            Check::OrthogonalSharpness => "orthogonal_sharpness",
            Check::Parity => "parity",
            Check::PlaneClassification => "plane_classification",
            Check::PlaneCalculus => "plane_calculus",
        }
    }

    /// Runs the check on explicitly given subspaces.
    ///
    /// Fixed-arity checks use the leading subspaces; chain checks use all of
    /// them. `parity` needs hyperplanes and the plane checks need subspaces
    /// of ℝ².
    pub fn run_on(self, subspaces: &[Subspace], tol: &Tolerance) -> Result<CheckReport> {
        let need = |k: usize| -> Result<()> {
            if subspaces.len() < k {
                Err(Error::InvalidArgument(format!(
                    "{} needs at least {k} subspaces, got {}",
                    self.name(),
                    subspaces.len()
                )))
            } else {
                Ok(())
            }
        };
        match self {
            Check::FactTwoReflectors => {
                need(2)?;
                check_fact_two_reflectors(&subspaces[0], &subspaces[1], tol)
            }
            Check::LemmaEasy => {
                need(1)?;
                check_lemma_easy(&subspaces[0], tol)
            }
            Check::PropTriplePerp => {
                need(2)?;
                check_prop_triple_perp(&subspaces[0], &subspaces[1], tol)
            }
            Check::PropConjugate => {
                need(2)?;
                check_prop_conjugate(&subspaces[0], &subspaces[1], tol)
            }
            Check::CyclicShift => {
                need(1)?;
                check_cyclic_shift(subspaces, tol)
            }
            Check::Reversal => {
                need(1)?;
                check_reversal(subspaces, tol)
            }
            Check::OddSumBound => {
                need(1)?;
                check_odd_sum_bound(subspaces, tol)
            }
            Check::ExpansionIdentity => {
                need(3)?;
                check_expansion_identity(&subspaces[0], &subspaces[1], &subspaces[2], tol)
            }
            Check::OrthogonalSharpness => {
                need(1)?;
                check_orthogonal_sharpness(subspaces, tol)
            }
            Check::Parity => {
                need(1)?;
                let normals = subspaces
                    .iter()
                    .map(|s| {
                        let c = s.complement(tol);
                        if c.dim() != 1 {
                            return Err(Error::InvalidArgument(format!(
                                "parity needs hyperplanes, got a subspace of dimension {} in R^{}",
                                s.dim(),
                                s.ambient()
                            )));
                        }
                        Ok(c.basis().column(0).iter().copied().collect())
                    })
                    .collect::<Result<Vec<Vec<f64>>>>()?;
                check_parity(&normals, tol)
            }
            Check::PlaneClassification => {
                need(1)?;
                let angles = subspaces
                    .iter()
                    .map(plane::axis_angle)
                    .collect::<Result<Vec<f64>>>()?;
                check_plane_classification(&angles, plane::DEFAULT_BETA_TOL, tol)
            }
            Check::PlaneCalculus => {
                need(2)?;
                let first = PlaneIsometry::reflector_of(&subspaces[0])?;
                let second = PlaneIsometry::reflector_of(&subspaces[1])?;
                check_plane_calculus(second, first, tol)
            }
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

/// Parameters for randomly generated instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub ambient: usize,
    /// Subspace dimensions, cycled over the subspaces of each instance.
    /// Empty means a uniformly random dimension in `0..=ambient` each time.
    pub dims: Vec<usize>,
    pub seed: u64,
    pub trials: usize,
}

impl RandomSpec {
    pub fn new(ambient: usize, dims: Vec<usize>, seed: u64, trials: usize) -> Result<Self> {
        let spec = RandomSpec {
            ambient,
            dims,
            seed,
            trials,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses `"n=6 dims=2,3"`. Keys are whitespace separated; `dims` is
    /// optional.
    pub fn parse(text: &str, seed: u64, trials: usize) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(format!("random spec {text:?}: {msg}"));
        let mut ambient = None;
        let mut dims = Vec::new();
        for tok in text.split_whitespace() {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {tok:?}")))?;
            match key {
                "n" => {
                    ambient = Some(value.parse::<usize>().map_err(|e| bad(format!("n: {e}")))?);
                }
                "dims" => {
                    dims = value
                        .split(',')
                        .filter(|s| !s.is_empty())
                        .map(|s| s.trim().parse::<usize>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|e| bad(format!("dims: {e}")))?;
                }
                _ => return Err(bad(format!("unknown key {key:?}"))),
            }
        }
        let ambient = ambient.ok_or_else(|| bad("missing n".into()))?;
        RandomSpec::new(ambient, dims, seed, trials)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ambient == 0 {
            return Err(Error::InvalidArgument(
                "ambient dimension must be at least 1".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        for &d in &self.dims {
            if d > self.ambient {
                return Err(Error::OutOfRange {
                    what: "subspace dimension",
                    value: d,
                    lo: 0,
                    hi: self.ambient,
                });
            }
        }
        Ok(())
    }
}

fn standard_normal_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Rotation-invariant random `k`-dimensional subspace of ℝⁿ drawn from `rng`.
pub fn random_subspace_from(
    rng: &mut impl Rng,
    n: usize,
    k: usize,
    tol: &Tolerance,
) -> Result<Subspace> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "ambient dimension must be at least 1".into(),
        ));
    }
    if k > n {
        return Err(Error::OutOfRange {
            what: "subspace dimension",
            value: k,
            lo: 0,
            hi: n,
        });
    }
    if k == 0 {
        return Ok(Subspace::zero(n));
    }
    // Gaussian columns are independent with probability one; retry on the
    // measure-zero event that the rank comes out short.
    loop {
        let s = Subspace::column_span(&standard_normal_matrix(rng, n, k), tol)?;
        if s.dim() == k {
            return Ok(s);
        }
    }
}

/// Deterministic random subspace for a seed.
pub fn random_subspace(n: usize, k: usize, seed: u64) -> Result<Subspace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_subspace_from(&mut rng, n, k, &Tolerance::default())
}

/// Pairwise orthogonal subspaces with the given dimensions, obtained by
/// partitioning the columns of a random orthonormal basis of ℝⁿ.
pub fn random_orthogonal_chain(
    rng: &mut impl Rng,
    n: usize,
    dims: &[usize],
    tol: &Tolerance,
) -> Result<Vec<Subspace>> {
    let total: usize = dims.iter().sum();
    if total > n {
        return Err(Error::OutOfRange {
            what: "total dimension",
            value: total,
            lo: 0,
            hi: n,
        });
    }
    let frame = random_subspace_from(rng, n, n, tol)?;
    let mut start = 0;
    let mut out = Vec::with_capacity(dims.len());
    for &d in dims {
        let cols = frame.basis().columns(start, d).into_owned();
        out.push(Subspace::from_svd_basis(cols));
        start += d;
    }
    Ok(out)
}

/// A chain of odd length `m` with `U_i = {0}` at position `zero_at` and
/// `U_j = u` elsewhere. Its composition is `−I`.
pub fn zero_in_odd_chain(u: &Subspace, m: usize, zero_at: usize) -> Result<Vec<Subspace>> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenChain(m));
    }
    if zero_at >= m {
        return Err(Error::OutOfRange {
            what: "zero position",
            value: zero_at,
            lo: 0,
            hi: m - 1,
        });
    }
    Ok((0..m)
        .map(|j| {
            if j == zero_at {
                Subspace::zero(u.ambient())
            } else {
                u.clone()
            }
        })
        .collect())
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn trial_seed(seed: u64, check: Check, trial: usize) -> u64 {
    splitmix(splitmix(seed ^ splitmix(check as u64 + 1)) ^ trial as u64)
}

struct Generator<'a> {
    spec: &'a RandomSpec,
    rng: ChaCha8Rng,
    tol: &'a Tolerance,
    drawn: usize,
}

impl Generator<'_> {
    fn next_dim(&mut self) -> usize {
        let d = if self.spec.dims.is_empty() {
            self.rng.random_range(0..=self.spec.ambient)
        } else {
            self.spec.dims[self.drawn % self.spec.dims.len()]
        };
        self.drawn += 1;
        d
    }

    fn subspace(&mut self) -> Result<Subspace> {
        let k = self.next_dim();
        random_subspace_from(&mut self.rng, self.spec.ambient, k, self.tol)
    }

    fn subspaces(&mut self, m: usize) -> Result<Vec<Subspace>> {
        (0..m).map(|_| self.subspace()).collect()
    }
}

fn run_random_instance(
    check: Check,
    spec: &RandomSpec,
    trial: usize,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let seed = trial_seed(spec.seed, check, trial);
    let mut g = Generator {
        spec,
        rng: ChaCha8Rng::seed_from_u64(seed),
        tol,
        drawn: 0,
    };
    let n = spec.ambient;
    let mut report = match check {
        Check::FactTwoReflectors | Check::PropTriplePerp | Check::PropConjugate => {
            let s = g.subspaces(2)?;
            check.run_on(&s, tol)?
        }
        Check::LemmaEasy => check_lemma_easy(&g.subspace()?, tol)?,
        Check::ExpansionIdentity => {
            let s = g.subspaces(3)?;
            check.run_on(&s, tol)?
        }
        Check::CyclicShift | Check::Reversal => {
            let m = g.rng.random_range(2..=5);
            let s = g.subspaces(m)?;
            check.run_on(&s, tol)?
        }
        Check::OddSumBound => {
            let m = if g.rng.random_bool(0.5) { 3 } else { 5 };
            let s = g.subspaces(m)?;
            check_odd_sum_bound(&s, tol)?
        }
        Check::OrthogonalSharpness => {
            let m = g.rng.random_range(1..=5);
            // each basis vector goes to one of the m subspaces or is left out
            let mut dims = vec![0usize; m];
            for _ in 0..n {
                let bin = g.rng.random_range(0..=m);
                if bin < m {
                    dims[bin] += 1;
                }
            }
            let chain = random_orthogonal_chain(&mut g.rng, n, &dims, tol)?;
            check_orthogonal_sharpness(&chain, tol)?
        }
        Check::Parity => {
            let m = g.rng.random_range(1..=5);
            let normals: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..n).map(|_| g.rng.sample(StandardNormal)).collect())
                .collect();
            check_parity(&normals, tol)?
        }
        Check::PlaneClassification => {
            let m = g.rng.random_range(1..=6);
            let angles: Vec<f64> = (0..m)
                .map(|_| {
                    g.rng
                        .random_range(-std::f64::consts::TAU..std::f64::consts::TAU)
                })
                .collect();
            check_plane_classification(&angles, plane::DEFAULT_BETA_TOL, tol)?
        }
        Check::PlaneCalculus => {
            let iso = |rng: &mut ChaCha8Rng| {
                let a = rng.random_range(-10.0..10.0);
                if rng.random_bool(0.5) {
                    PlaneIsometry::rotation(a)
                } else {
                    PlaneIsometry::reflection(a)
                }
            };
            let first = iso(&mut g.rng)?;
            let second = iso(&mut g.rng)?;
            check_plane_calculus(second, first, tol)?
        }
    };
    report.instance = format!("trial={trial} seed={seed:#018x} {}", report.instance);
    Ok(report)
}

/// Runs every requested check on `spec.trials` random instances.
///
/// Instances depend only on `(spec, check, trial)`, so results are identical
/// across runs and independent of the order of `checks`. Reports come back
/// in request order (check-major, then trial).
pub fn run_suite(spec: &RandomSpec, checks: &[Check], tol: &Tolerance) -> Result<Vec<CheckReport>> {
    spec.validate()?;
    let tasks: Vec<(Check, usize)> = checks
        .iter()
        .flat_map(|&c| (0..spec.trials).map(move |t| (c, t)))
        .collect();
    tasks
        .par_iter()
        .map(|&(c, t)| run_random_instance(c, spec, t, tol))
        .collect()
}

/// Like [`run_suite`] with check names resolved first.
pub fn run_suite_by_name(
    spec: &RandomSpec,
    names: &[&str],
    tol: &Tolerance,
) -> Result<Vec<CheckReport>> {
    let checks = names
        .iter()
        .map(|n| n.parse())
        .collect::<Result<Vec<Check>>>()?;
    run_suite(spec, &checks, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn line(xs: &[f64]) -> Subspace {
        Subspace::line(xs).unwrap()
    }

    #[test]
    fn random_subspace_edge_dimensions() {
        assert_eq!(random_subspace(4, 0, 1).unwrap().dim(), 0);
        let full = random_subspace(4, 4, 1).unwrap();
        assert!(full.equals(&Subspace::full(4), &tol()).unwrap());
        assert!(matches!(
            random_subspace(3, 4, 1),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn random_subspace_is_deterministic() {
        let a = random_subspace(6, 3, 99).unwrap();
        let b = random_subspace(6, 3, 99).unwrap();
        assert_eq!(a.basis(), b.basis());
        assert!(linalg::orthonormality_defect(a.basis()) < 1e-14);
    }

    #[test]
    fn two_trivial_subspaces_fix_everything() {
        let z = Subspace::zero(3);
        let r = check_fact_two_reflectors(&z, &z, &tol()).unwrap();
        assert!(r.passed, "{r}");
        let (_, fix) = chain_fix(&[z.clone(), z], &tol()).unwrap();
        assert_eq!(fix.dim(), 3);
    }

    #[test]
    fn perpendicular_lines_fix_only_origin() {
        let (x, y) = (line(&[1.0, 0.0]), line(&[0.0, 1.0]));
        let r = check_fact_two_reflectors(&x, &y, &tol()).unwrap();
        assert!(r.passed);
        let (_, fix) = chain_fix(&[x, y], &tol()).unwrap();
        assert_eq!(fix.dim(), 0);
    }

    #[test]
    fn lemma_easy_on_edge_cases() {
        for u in [
            line(&[1.0, 0.0]),
            Subspace::zero(3),
            Subspace::full(2),
            random_subspace(5, 2, 7).unwrap(),
        ] {
            let r = check_lemma_easy(&u, &tol()).unwrap();
            assert!(r.passed, "{r}");
            assert_eq!(r.details.len(), 6);
        }
    }

    #[test]
    fn triple_perp_on_the_diagonal_example() {
        let u = line(&[1.0, 0.0]);
        let v = line(&[1.0, 1.0]);
        let r = check_prop_triple_perp(&u, &v, &tol()).unwrap();
        assert!(r.passed, "{r}");
        let (_, fix) = chain_fix(&[u.clone(), u.complement(&tol()), v], &tol()).unwrap();
        assert!(fix.equals(&line(&[1.0, -1.0]), &tol()).unwrap());
        // V = {0}
        let r = check_prop_triple_perp(&u, &Subspace::zero(2), &tol()).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn conjugate_on_the_diagonal_example() {
        let u = line(&[1.0, 0.0]);
        let v = line(&[1.0, 1.0]);
        let r = check_prop_conjugate(&u, &v, &tol()).unwrap();
        assert!(r.passed, "{r}");
        let (_, fix) = chain_fix(&[u.clone(), v.clone(), u.complement(&tol())], &tol()).unwrap();
        assert!(fix.equals(&v, &tol()).unwrap());
        // V = U: R_U(U⊥) = U⊥
        let img = u.complement(&tol()).image(&reflector(&u), &tol()).unwrap();
        assert!(img.equals(&u.complement(&tol()), &tol()).unwrap());
        assert!(check_prop_conjugate(&u, &u, &tol()).unwrap().passed);
    }

    #[test]
    fn cyclic_shift_single_and_diagonal_triple() {
        let u = line(&[1.0, 0.0]);
        let r = check_cyclic_shift(std::slice::from_ref(&u), &tol()).unwrap();
        assert!(r.passed);
        assert_eq!(r.details.len(), 1);
        let up = u.complement(&tol());
        let v = line(&[1.0, 1.0]);
        let r = check_cyclic_shift(&[u, v, up], &tol()).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(r.details.len(), 3);
    }

    #[test]
    fn reversal_examples() {
        let a = random_subspace(4, 2, 3).unwrap();
        let b = random_subspace(4, 1, 4).unwrap();
        assert!(check_reversal(&[a, b], &tol()).unwrap().passed);
        let u = line(&[1.0, 0.0]);
        let v = line(&[1.0, 1.0]);
        let up = u.complement(&tol());
        assert!(check_reversal(&[u, v, up], &tol()).unwrap().passed);
    }

    #[test]
    fn odd_sum_bound_rejects_even_chains() {
        let u = line(&[1.0, 0.0]);
        assert!(matches!(
            check_odd_sum_bound(&[u.clone(), u], &tol()),
            Err(Error::EvenChain(2))
        ));
    }

    #[test]
    fn bound_not_attained_with_a_zero_factor() {
        let u = random_subspace(4, 2, 11).unwrap();
        for (m, i) in [(3, 0), (3, 2), (5, 1)] {
            let chain = zero_in_odd_chain(&u, m, i).unwrap();
            let (t, fix) = chain_fix(&chain, &tol()).unwrap();
            assert!(linalg::max_abs_diff(&t, &-Matrix::identity(4, 4)) < 1e-14);
            assert_eq!(fix.dim(), 0);
            assert!(check_odd_sum_bound(&chain, &tol()).unwrap().passed);
            assert_eq!(sum_all(&chain, &tol()).unwrap().dim(), 2);
        }
        assert!(zero_in_odd_chain(&u, 4, 0).is_err());
    }

    #[test]
    fn coordinate_axes_sharpness() {
        let e = |i: usize| {
            let mut v = vec![0.0; 3];
            v[i] = 1.0;
            line(&v)
        };
        let r = check_orthogonal_sharpness(&[e(0), e(1), e(2)], &tol()).unwrap();
        assert!(r.passed, "{r}");
        // two axes: Fix(-R2 R1) = span{e1, e2}
        let (t, _) = chain_fix(&[e(0), e(1)], &tol()).unwrap();
        let fix = fixed_subspace(&-t, &tol()).unwrap().subspace;
        assert!(fix
            .equals(&e(0).sum(&e(1), &tol()).unwrap(), &tol())
            .unwrap());
        assert!(
            check_orthogonal_sharpness(&[e(0), e(1)], &tol())
                .unwrap()
                .passed
        );
        let r = check_orthogonal_sharpness(&[e(0), line(&[1.0, 1.0, 0.0])], &tol());
        assert!(matches!(r, Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn parity_examples() {
        let r = check_parity(&[vec![0.0, 0.0, 1.0]], &tol()).unwrap();
        assert!(r.passed);
        assert!(r.instance.contains("dim Fix=2"));
        let r = check_parity(&[vec![1.0, 2.0], vec![1.0, 2.0]], &tol()).unwrap();
        assert!(r.passed);
        assert!(r.instance.contains("dim Fix=2"));
        assert!(check_parity(&[vec![0.0, 0.0]], &tol()).is_err());
        assert!(check_parity(&[], &tol()).is_err());
    }

    #[test]
    fn plane_checks() {
        let r = check_plane_classification(&[0.0, FRAC_PI_4, FRAC_PI_2], 1e-9, &tol()).unwrap();
        assert!(r.passed, "{r}");
        let r = check_plane_calculus(
            PlaneIsometry::Reflection(FRAC_PI_2),
            PlaneIsometry::Rotation(1.0),
            &tol(),
        )
        .unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn failing_residuals_fail() {
        let mut rec = Recorder::new(Check::LemmaEasy, "x", &tol());
        rec.residual("a", 0.0);
        rec.residual("b", f64::NAN);
        let r = rec.finish();
        assert!(!r.passed);
        assert_eq!(r.worst_residual, f64::INFINITY);
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!(matches!(
            "nope".parse::<Check>(),
            Err(Error::UnknownCheck(_))
        ));
    }

    #[test]
    fn empty_check_list_gives_no_reports() {
        let spec = RandomSpec::new(3, vec![], 1, 5).unwrap();
        assert!(run_suite(&spec, &[], &tol()).unwrap().is_empty());
    }

    #[test]
    fn suite_is_deterministic_and_order_independent() {
        let spec = RandomSpec::new(5, vec![], 42, 4).unwrap();
        let a = run_suite(&spec, &[Check::Reversal, Check::Parity], &tol()).unwrap();
        let b = run_suite(&spec, &[Check::Reversal, Check::Parity], &tol()).unwrap();
        assert_eq!(a, b);
        let c = run_suite(&spec, &[Check::Parity, Check::Reversal], &tol()).unwrap();
        assert_eq!(&a[..4], &c[4..]);
        assert_eq!(&a[4..], &c[..4]);
    }

    #[test]
    fn random_spec_validation() {
        assert!(RandomSpec::new(0, vec![], 1, 1).is_err());
        assert!(RandomSpec::new(3, vec![4], 1, 1).is_err());
        assert!(RandomSpec::new(3, vec![1], 1, 0).is_err());
    }

    #[test]
    fn random_spec_parsing() {
        let s = RandomSpec::parse("n=6 dims=2,3", 7, 50).unwrap();
        assert_eq!(
            (s.ambient, s.dims.clone(), s.seed, s.trials),
            (6, vec![2, 3], 7, 50)
        );
        assert!(RandomSpec::parse("n=4", 0, 1).unwrap().dims.is_empty());
        for bad in ["", "dims=1", "n=x", "n=3 dims=4", "n=3 k=1", "n3"] {
            assert!(RandomSpec::parse(bad, 0, 1).is_err(), "{bad}");
        }
    }

    #[test]
    fn tolerance_scaling() {
        assert_eq!(check_tolerance(6), 1e-8);
        assert!((check_tolerance(64) - 8e-8).abs() < 1e-20);
    }
}
