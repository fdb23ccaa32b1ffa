use std::ffi::{CStr, CString};
use std::ptr;

use fixset_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fixset_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn line(x: f64, y: f64) -> *mut FixsetSubspace {
    let mut out = ptr::null_mut();
    let v = [x, y];
    assert_eq!(
        unsafe { fixset_subspace_span(2, v.as_ptr(), 1, &mut out) },
        FixsetStatus::Ok
    );
    out
}

fn basis(s: *const FixsetSubspace) -> Vec<f64> {
    let n = unsafe { fixset_subspace_dim(s) * fixset_subspace_ambient(s) };
    let mut buf = vec![0.0; n];
    assert_eq!(
        unsafe { fixset_subspace_basis(s, buf.as_mut_ptr(), n) },
        FixsetStatus::Ok
    );
    buf
}

#[test]
fn three_lines_fix_the_expected_line() {
    let s3 = 3f64.sqrt();
    let chain = [line(0.0, 1.0), line(s3, 1.0), line(-s3, 1.0)];
    let ptrs: Vec<*const FixsetSubspace> = chain.iter().map(|&p| p as *const _).collect();
    let mut fix = ptr::null_mut();
    let mut worst = f64::NAN;
    let st = unsafe { fixset_fixed_subspace(ptrs.as_ptr(), 3, &mut fix, &mut worst) };
    assert_eq!(st, FixsetStatus::Ok);
    assert_eq!(unsafe { fixset_subspace_dim(fix) }, 1);
    assert!(worst <= 1e-12);

    let expected = line(s3, 1.0);
    let mut d = f64::NAN;
    assert_eq!(
        unsafe { fixset_subspace_distance(fix, expected, &mut d) },
        FixsetStatus::Ok
    );
    assert!(d <= 1e-10, "{d}");
    let b = basis(fix);
    assert!((b[0].abs() - s3 / 2.0).abs() < 1e-12 && (b[1].abs() - 0.5).abs() < 1e-12);

    unsafe {
        for p in chain {
            fixset_subspace_free(p);
        }
        fixset_subspace_free(fix);
        fixset_subspace_free(expected);
    }
}

#[test]
fn lattice_operations() {
    let x = line(1.0, 0.0);
    let d = line(1.0, 1.0);
    let (mut c, mut meet, mut sum) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(fixset_subspace_complement(x, &mut c), FixsetStatus::Ok);
        assert_eq!(fixset_subspace_intersect(x, d, &mut meet), FixsetStatus::Ok);
        assert_eq!(fixset_subspace_sum(x, d, &mut sum), FixsetStatus::Ok);
        assert_eq!(fixset_subspace_dim(c), 1);
        assert_eq!(fixset_subspace_dim(meet), 0);
        assert_eq!(fixset_subspace_dim(sum), 2);
        let mut zero = ptr::null_mut();
        assert_eq!(fixset_subspace_zero(2, &mut zero), FixsetStatus::Ok);
        let mut dist = f64::NAN;
        assert_eq!(
            fixset_subspace_distance(meet, zero, &mut dist),
            FixsetStatus::Ok
        );
        assert_eq!(dist, 0.0);
        for p in [x, d, c, meet, sum, zero] {
            fixset_subspace_free(p);
        }
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut out = ptr::null_mut();
        let bad = [f64::NAN, 0.0];
        assert_eq!(
            fixset_subspace_span(2, bad.as_ptr(), 1, &mut out),
            FixsetStatus::NonFinite
        );
        assert!(!last_error().is_empty());
        assert_eq!(
            fixset_subspace_span(2, ptr::null(), 1, &mut out),
            FixsetStatus::NullPointer
        );
        assert_eq!(
            fixset_subspace_span(0, ptr::null(), 0, &mut out),
            FixsetStatus::InvalidArgument
        );

        let a = line(1.0, 0.0);
        let mut b3 = ptr::null_mut();
        let v = [1.0, 0.0, 0.0];
        assert_eq!(
            fixset_subspace_span(3, v.as_ptr(), 1, &mut b3),
            FixsetStatus::Ok
        );
        assert_eq!(
            fixset_subspace_intersect(a, b3, &mut out),
            FixsetStatus::DimensionMismatch
        );
        assert!(last_error().contains("dimension"));

        let mut small = [0.0; 1];
        assert_eq!(
            fixset_subspace_basis(a, small.as_mut_ptr(), 1),
            FixsetStatus::BufferTooSmall
        );
        assert_eq!(
            fixset_fixed_subspace(ptr::null(), 0, &mut out, ptr::null_mut()),
            FixsetStatus::InvalidArgument
        );

        // a success clears the message
        assert_eq!(fixset_subspace_complement(a, &mut out), FixsetStatus::Ok);
        assert!(last_error().is_empty());
        fixset_subspace_free(out);
        fixset_subspace_free(a);
        fixset_subspace_free(b3);
        fixset_subspace_free(ptr::null_mut());
        assert_eq!(fixset_subspace_dim(ptr::null()), 0);
    }
}

#[test]
fn plane_angle_composition() {
    let (mut refl, mut angle, mut beta) = (-1, f64::NAN, f64::NAN);
    let a = [0.0, std::f64::consts::FRAC_PI_4];
    let st =
        unsafe { fixset_plane_compose_angles(a.as_ptr(), 2, &mut refl, &mut angle, &mut beta) };
    assert_eq!(st, FixsetStatus::Ok);
    assert_eq!(refl, 0);
    assert!((angle - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!((beta - std::f64::consts::FRAC_PI_4).abs() < 1e-12);

    let st = unsafe {
        fixset_plane_compose_angles(a.as_ptr(), 1, &mut refl, &mut angle, ptr::null_mut())
    };
    assert_eq!(st, FixsetStatus::Ok);
    assert_eq!((refl, angle), (1, 0.0));
    let st = unsafe {
        fixset_plane_compose_angles(a.as_ptr(), 0, &mut refl, &mut angle, ptr::null_mut())
    };
    assert_eq!(st, FixsetStatus::InvalidArgument);
}

#[test]
fn scenes_through_the_c_api() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.toml");
    std::fs::write(
        &path,
        "ambient = 2\n[subspaces]\nU = { angle = \"0deg\" }\nUperp = { angle = \"90deg\" }\nV = { angle = \"45deg\" }\n\
         [compositions]\niv = [\"Uperp\", \"U\", \"V\"]\n",
    )
    .unwrap();
    let cpath = CString::new(path.to_str().unwrap()).unwrap();
    unsafe {
        let mut scene = ptr::null_mut();
        assert_eq!(
            fixset_scene_load(cpath.as_ptr(), &mut scene),
            FixsetStatus::Ok
        );
        let mut fix = ptr::null_mut();
        let name = CString::new("iv").unwrap();
        assert_eq!(
            fixset_scene_fix(scene, name.as_ptr(), &mut fix),
            FixsetStatus::Ok
        );
        let expected = line(-1.0, 1.0);
        let mut d = f64::NAN;
        fixset_subspace_distance(fix, expected, &mut d);
        assert!(d <= 1e-10);

        let mut v = ptr::null_mut();
        let vname = CString::new("V").unwrap();
        assert_eq!(
            fixset_scene_subspace(scene, vname.as_ptr(), &mut v),
            FixsetStatus::Ok
        );
        assert_eq!(fixset_subspace_dim(v), 1);

        let missing = CString::new("nope").unwrap();
        let mut junk = ptr::null_mut();
        assert_eq!(
            fixset_scene_fix(scene, missing.as_ptr(), &mut junk),
            FixsetStatus::UnknownName
        );

        let nofile = CString::new(dir.path().join("missing.toml").to_str().unwrap()).unwrap();
        let mut s2 = ptr::null_mut();
        assert_eq!(
            fixset_scene_load(nofile.as_ptr(), &mut s2),
            FixsetStatus::Io
        );

        std::fs::write(&path, "ambient = [").unwrap();
        assert_eq!(
            fixset_scene_load(cpath.as_ptr(), &mut s2),
            FixsetStatus::Parse
        );
        assert!(last_error().contains("line 1"));

        fixset_subspace_free(fix);
        fixset_subspace_free(expected);
        fixset_subspace_free(v);
        fixset_scene_free(scene);
    }
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fixset.h")).unwrap();
    for sym in [
        "fixset_last_error",
        "fixset_subspace_span",
        "fixset_subspace_zero",
        "fixset_subspace_free",
        "fixset_subspace_dim",
        "fixset_subspace_ambient",
        "fixset_subspace_basis",
        "fixset_subspace_complement",
        "fixset_subspace_intersect",
        "fixset_subspace_sum",
        "fixset_subspace_distance",
        "fixset_fixed_subspace",
        "fixset_plane_compose_angles",
        "fixset_scene_load",
        "fixset_scene_free",
        "fixset_scene_subspace",
        "fixset_scene_fix",
        "typedef struct FixsetSubspace FixsetSubspace",
        "FIXSET_STATUS_DIMENSION_MISMATCH = 3",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    // integration test binaries live in <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libfixset_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists()
        || std::process::Command::new(&cc)
            .arg("--version")
            .output()
            .is_err()
    {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = std::process::Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dim=1 basis=0.866025,0.500000"), "{text}");
    assert!(text.contains("status=3"), "{text}");
}
