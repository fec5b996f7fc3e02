use std::ffi::{CStr, CString};
use std::ptr;

use lowlying_ffi::*;

fn builtin(label: &str) -> *mut LlCurve {
    let label = CString::new(label).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { ll_curve_builtin(label.as_ptr(), &mut out) };
    assert_eq!(status, LlStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ll_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn curve_local_data() {
    let e = builtin("11a1");
    let mut red = LlReduction::Additive;
    let mut a_p = 0;
    unsafe {
        assert_eq!(ll_curve_local_data(e, 2, &mut red, &mut a_p), LlStatus::Ok);
        assert_eq!((red, a_p), (LlReduction::Good, -2));
        assert_eq!(ll_curve_local_data(e, 11, &mut red, &mut a_p), LlStatus::Ok);
        assert_eq!((red, a_p), (LlReduction::SplitMultiplicative, 1));
        assert_eq!(ll_curve_local_data(e, 12, &mut red, &mut a_p), LlStatus::ConfigError);
        ll_curve_free(e);
    }
}

#[test]
fn singular_curve_rejected() {
    let mut out = ptr::null_mut();
    // y^2 = x^3 has zero discriminant
    let status = unsafe { ll_curve_new(0, 0, 0, 0, 0, 1, -1, &mut out) };
    assert_eq!(status, LlStatus::InvalidCurve);
    assert!(out.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn unknown_label_and_nulls() {
    let label = CString::new("nope").unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(ll_curve_builtin(label.as_ptr(), &mut out), LlStatus::ConfigError);
        assert_eq!(ll_curve_builtin(ptr::null(), &mut out), LlStatus::NullPointer);
        let mut x = 0.0;
        assert_eq!(ll_curve_theta(ptr::null(), 100.0, &mut x), LlStatus::NullPointer);
        assert_eq!(ll_family_len(ptr::null()), 0);
        assert_eq!(ll_fields_len(ptr::null()), 0);
        ll_curve_free(ptr::null_mut());
        ll_family_free(ptr::null_mut());
        ll_fields_free(ptr::null_mut());
    }
}

#[test]
fn analytic_ranks() {
    for (label, rank, sign) in [("11a1", 0, 1.0), ("37a1", 1, -1.0), ("389a1", 2, 1.0)] {
        let e = builtin(label);
        let mut order = 99;
        let mut w = 0.0;
        unsafe {
            assert_eq!(ll_curve_analytic_rank(e, &mut order, &mut w), LlStatus::Ok);
            ll_curve_free(e);
        }
        assert_eq!(order, rank, "{label}");
        assert!((w - sign).abs() < 1e-6, "{label}: {w}");
    }
}

#[test]
fn family_handles() {
    let mut fam = ptr::null_mut();
    unsafe {
        assert_eq!(ll_family_new(3, 30.0, 11, LlWeight::Sharp, &mut fam), LlStatus::Ok);
        // conductors 7, 9, 13, 19 each carry one conjugate pair
        assert_eq!(ll_family_len(fam), 8);
        let (mut q, mut w) = (0, 0.0);
        assert_eq!(ll_family_member(fam, 0, &mut q, &mut w), LlStatus::Ok);
        assert_eq!((q, w), (7, 1.0));
        let mut e = 0;
        assert_eq!(ll_family_eval(fam, 0, 14, &mut e), LlStatus::Ok);
        assert_eq!(e, -1);
        assert_eq!(ll_family_eval(fam, 0, 1, &mut e), LlStatus::Ok);
        assert_eq!(e, 0);
        assert_eq!(ll_family_member(fam, 8, &mut q, &mut w), LlStatus::OutOfRange);
        ll_family_free(fam);
    }
}

#[test]
fn fields_and_density() {
    let mut list = ptr::null_mut();
    unsafe {
        assert_eq!(ll_fields_new(50.0, 1, &mut list), LlStatus::Ok);
        assert_eq!(ll_fields_len(list), 3);
        let mut f = LlCubicField::default();
        assert_eq!(ll_fields_get(list, 0, &mut f), LlStatus::Ok);
        assert_eq!((f.a, f.b, f.c, f.disc_field, f.totally_real), (0, -1, -1, -23, 0));
        assert_eq!(ll_fields_get(list, 3, &mut f), LlStatus::OutOfRange);
        ll_fields_free(list);
    }

    let e = builtin("11a1");
    let mut r = LlDensityReport::default();
    unsafe {
        assert_eq!(ll_density_cyclic(e, 3, 500.0, 0.4, LlWeight::SmoothBump, &mut r), LlStatus::Ok);
        assert_eq!(r.symmetry, 0);
        assert!((r.total - (r.conductor_term + r.s1 + r.s2)).abs() < 1e-12);
        assert!((r.predicted - 0.1).abs() < 1e-15);
        assert_eq!(ll_density_cubic(e, 300.0, 0.125, &mut r), LlStatus::Ok);
        assert_eq!(r.symmetry, 1);
        assert_eq!(ll_density_cubic(e, 300.0, 1.5, &mut r), LlStatus::ConfigError);
        ll_curve_free(e);
    }
}

#[test]
fn bounds() {
    assert!((ll_rank_bound_cyclic(0.5) - 2.0).abs() < 1e-12);
    assert!((ll_rank_bound_sd(0.5) - 2.5).abs() < 1e-12);
    assert!(ll_rank_bound_cyclic(0.0).is_nan());
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/lowlying.h");
    let src = include_str!("../src/lib.rs");
    let mut count = 0;
    for line in src.lines() {
        let Some(rest) = line.split("extern \"C\" fn ").nth(1) else { continue };
        let name = rest.split('(').next().unwrap();
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
        count += 1;
    }
    assert!(count >= 18, "found {count} exports");
    for ty in ["LlCurve", "LlFamily", "LlFieldList", "LlDensityReport", "LlCubicField", "LL_STATUS_PANIC"] {
        assert!(header.contains(ty), "{ty} missing from header");
    }
}
