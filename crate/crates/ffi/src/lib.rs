//! C ABI over `fixset`.
//!
//! Objects are opaque heap handles released with the matching `_free`
//! function. Every fallible call returns a [`FixsetStatus`]; on failure a
//! message is available from [`fixset_last_error`] on the same thread.
//! Matrices cross the boundary row-major, one basis vector per row.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use fixset::operators::{fixed_subspace, OperatorChain};
use fixset::plane::{compose_reflection_angles, PlaneIsometry};
use fixset::scene::{Scene, SceneError};
use fixset::{Error, Subspace, Tolerance, Vector};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixsetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    NotOrthogonal = 5,
    UnknownName = 6,
    Parse = 7,
    Io = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// Opaque subspace handle.
pub struct FixsetSubspace(Subspace);

/// Opaque scene handle.
pub struct FixsetScene(Scene);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(FixsetStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let s = match e {
            Error::DimensionMismatch { .. } => FixsetStatus::DimensionMismatch,
            Error::NonFinite => FixsetStatus::NonFinite,
            Error::NotOrthogonal { .. } => FixsetStatus::NotOrthogonal,
            Error::UnknownCheck(_) => FixsetStatus::UnknownName,
            _ => FixsetStatus::InvalidArgument,
        };
        Fail(s, e.to_string())
    }
}

impl From<SceneError> for Fail {
    fn from(e: SceneError) -> Self {
        let s = match e {
            SceneError::Parse { .. } => FixsetStatus::Parse,
            SceneError::Io { .. } => FixsetStatus::Io,
            SceneError::UnknownSubspace { .. }
            | SceneError::UnknownComposition(_)
            | SceneError::UnknownName(_) => FixsetStatus::UnknownName,
            SceneError::Dimension { .. } => FixsetStatus::DimensionMismatch,
            SceneError::Invalid(_) => FixsetStatus::InvalidArgument,
        };
        Fail(s, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FixsetStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FixsetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FixsetStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            FixsetStatus::Panic
        }
    }
}

unsafe fn subspace<'a>(p: *const FixsetSubspace, what: &str) -> Result<&'a Subspace, Fail> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Fail(
            FixsetStatus::InvalidArgument,
            format!("{what} is not UTF-8"),
        )
    })
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fixset_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Span of `count` vectors of length `ambient`, read row-major from `vectors`.
///
/// # Safety
/// `vectors` must point to `count * ambient` doubles (may be null when
/// `count == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_subspace_span(
    ambient: usize,
    vectors: *const f64,
    count: usize,
    out: *mut *mut FixsetSubspace,
) -> FixsetStatus {
    guard(|| {
        if ambient == 0 {
            return Err(Fail(
                FixsetStatus::InvalidArgument,
                "ambient dimension must be at least 1".into(),
            ));
        }
        let data = if count == 0 {
            &[][..]
        } else if vectors.is_null() {
            return Err(null("vectors"));
        } else {
            let len = count
                .checked_mul(ambient)
                .ok_or_else(|| Fail(FixsetStatus::InvalidArgument, "size overflow".into()))?;
            slice::from_raw_parts(vectors, len)
        };
        let vs: Vec<Vector> = data.chunks(ambient).map(Vector::from_row_slice).collect();
        let s = Subspace::span(ambient, &vs, &Tolerance::default())?;
        put(out, FixsetSubspace(s))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_subspace_zero(
    ambient: usize,
    out: *mut *mut FixsetSubspace,
) -> FixsetStatus {
    guard(|| {
        if ambient == 0 {
            return Err(Fail(
                FixsetStatus::InvalidArgument,
                "ambient dimension must be at least 1".into(),
            ));
        }
        put(out, FixsetSubspace(Subspace::zero(ambient)))
    })
}

/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fixset_subspace_free(s: *mut FixsetSubspace) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Dimension of the subspace; 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fixset_subspace_dim(s: *const FixsetSubspace) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

/// Ambient dimension; 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fixset_subspace_ambient(s: *const FixsetSubspace) -> usize {
    s.as_ref().map_or(0, |s| s.0.ambient())
}

/// Copies the orthonormal basis, `dim * ambient` doubles row-major, into
/// `buf` of capacity `len`.
///
/// # Safety
/// `s` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fixset_subspace_basis(
    s: *const FixsetSubspace,
    buf: *mut f64,
    len: usize,
) -> FixsetStatus {
    guard(|| {
        let s = subspace(s, "subspace")?;
        let need = s.dim() * s.ambient();
        if need == 0 {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < need {
            return Err(Fail(
                FixsetStatus::BufferTooSmall,
                format!("need {need} doubles, got {len}"),
            ));
        }
        let out = slice::from_raw_parts_mut(buf, need);
        for (row, col) in out.chunks_mut(s.ambient()).zip(s.basis().column_iter()) {
            row.copy_from_slice(col.as_slice());
        }
        Ok(())
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_subspace_complement(
    s: *const FixsetSubspace,
    out: *mut *mut FixsetSubspace,
) -> FixsetStatus {
    guard(|| {
        let s = subspace(s, "subspace")?;
        put(out, FixsetSubspace(s.complement(&Tolerance::default())))
    })
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_subspace_intersect(
    a: *const FixsetSubspace,
    b: *const FixsetSubspace,
    out: *mut *mut FixsetSubspace,
) -> FixsetStatus {
    guard(|| {
        let r = subspace(a, "a")?.intersect(subspace(b, "b")?, &Tolerance::default())?;
        put(out, FixsetSubspace(r))
    })
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_subspace_sum(
    a: *const FixsetSubspace,
    b: *const FixsetSubspace,
    out: *mut *mut FixsetSubspace,
) -> FixsetStatus {
    guard(|| {
        let r = subspace(a, "a")?.sum(subspace(b, "b")?, &Tolerance::default())?;
        put(out, FixsetSubspace(r))
    })
}

/// Writes the projector distance `‖P_a − P_b‖_F` to `distance`.
///
/// # Safety
/// `a`, `b` must be live handles; `distance` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_subspace_distance(
    a: *const FixsetSubspace,
    b: *const FixsetSubspace,
    distance: *mut f64,
) -> FixsetStatus {
    guard(|| {
        let d = subspace(a, "a")?.distance(subspace(b, "b")?)?;
        if distance.is_null() {
            return Err(null("distance"));
        }
        *distance = d;
        Ok(())
    })
}

/// Fixed-point subspace of `R_{chain[m-1]} ⋯ R_{chain[0]}`. `worst_residual`
/// may be null.
///
/// # Safety
/// `chain` must point to `m` live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_fixed_subspace(
    chain: *const *const FixsetSubspace,
    m: usize,
    out: *mut *mut FixsetSubspace,
    worst_residual: *mut f64,
) -> FixsetStatus {
    guard(|| {
        if m == 0 {
            return Err(Error::EmptyChain.into());
        }
        if chain.is_null() {
            return Err(null("chain"));
        }
        let subspaces = slice::from_raw_parts(chain, m)
            .iter()
            .map(|&p| subspace(p, "chain entry").cloned())
            .collect::<Result<Vec<_>, _>>()?;
        let tol = Tolerance::default();
        let t = OperatorChain::reflectors(&subspaces)?.compose();
        let report = fixed_subspace(&t, &tol)?;
        if !worst_residual.is_null() {
            *worst_residual = report.worst_residual();
        }
        put(out, FixsetSubspace(report.subspace))
    })
}

/// Composes reflections across lines at the given axis angles (application
/// order). Writes 1 to `is_reflection` for `Refl(angle)`, 0 for
/// `Rot(angle)`; `beta` receives the alternating sum and may be null.
///
/// # Safety
/// `angles` must point to `m` doubles; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_plane_compose_angles(
    angles: *const f64,
    m: usize,
    is_reflection: *mut i32,
    angle: *mut f64,
    beta: *mut f64,
) -> FixsetStatus {
    guard(|| {
        if m == 0 {
            return Err(Error::EmptyChain.into());
        }
        if angles.is_null() {
            return Err(null("angles"));
        }
        if is_reflection.is_null() || angle.is_null() {
            return Err(null("output"));
        }
        let p = compose_reflection_angles(slice::from_raw_parts(angles, m))?;
        let (flag, a) = match p.isometry {
            PlaneIsometry::Reflection(a) => (1, a),
            PlaneIsometry::Rotation(a) => (0, a),
        };
        *is_reflection = flag;
        *angle = a;
        if !beta.is_null() {
            *beta = p.beta;
        }
        Ok(())
    })
}

/// Loads a TOML scene file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_scene_load(
    path: *const c_char,
    out: *mut *mut FixsetScene,
) -> FixsetStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        let scene = Scene::load(path, &Tolerance::default())?;
        put(out, FixsetScene(scene))
    })
}

/// # Safety
/// `s` must be null or a live scene handle.
#[no_mangle]
pub unsafe extern "C" fn fixset_scene_free(s: *mut FixsetScene) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Copies a named subspace of the scene into a new handle.
///
/// # Safety
/// `scene` must be live; `name` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_scene_subspace(
    scene: *const FixsetScene,
    name: *const c_char,
    out: *mut *mut FixsetSubspace,
) -> FixsetStatus {
    guard(|| {
        let scene = scene.as_ref().ok_or_else(|| null("scene"))?;
        let s = scene.0.subspace(c_str(name, "name")?)?.clone();
        put(out, FixsetSubspace(s))
    })
}

/// Fixed-point subspace of a named composition of the scene.
///
/// # Safety
/// `scene` must be live; `composition` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fixset_scene_fix(
    scene: *const FixsetScene,
    composition: *const c_char,
    out: *mut *mut FixsetSubspace,
) -> FixsetStatus {
    guard(|| {
        let scene = scene.as_ref().ok_or_else(|| null("scene"))?;
        let chain = scene.0.chain(c_str(composition, "composition")?)?;
        let t = OperatorChain::reflectors(&chain)?.compose();
        let report = fixed_subspace(&t, &Tolerance::default())?;
        put(out, FixsetSubspace(report.subspace))
    })
}
