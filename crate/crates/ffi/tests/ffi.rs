//! Round-trip tests over the C ABI, driving the exported symbols the way
//! a foreign binding would.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use sumprodlab_ffi::*;

unsafe fn parse(text: &str) -> *mut SplSet {
    let c = CString::new(text).unwrap();
    let mut out: *mut SplSet = ptr::null_mut();
    assert_eq!(spl_set_parse(c.as_ptr(), &mut out), SplStatus::Ok);
    assert!(!out.is_null());
    out
}

unsafe fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    spl_string_free(p);
    s
}

#[test]
fn set_lifecycle_and_elements() {
    unsafe {
        let a = parse("3\n1\n2\n2\n");
        assert_eq!(spl_set_len(a), 3);
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(spl_set_element(a, 0, &mut s), SplStatus::Ok);
        assert_eq!(take_string(s), "1");
        assert_eq!(spl_set_element(a, 9, &mut s), SplStatus::InvalidArgument);

        let mut present = false;
        let two = CString::new("2").unwrap();
        assert_eq!(spl_set_contains(a, two.as_ptr(), &mut present), SplStatus::Ok);
        assert!(present);
        spl_set_free(a);
    }
}

#[test]
fn null_and_parse_errors() {
    unsafe {
        let mut out: *mut SplSet = ptr::null_mut();
        assert_eq!(spl_set_parse(ptr::null(), &mut out), SplStatus::NullArgument);
        let bad = CString::new("1\nx\n").unwrap();
        assert_eq!(spl_set_parse(bad.as_ptr(), &mut out), SplStatus::ParseError);
        let empty = CString::new("# nothing\n").unwrap();
        assert_eq!(spl_set_parse(empty.as_ptr(), &mut out), SplStatus::EmptySet);
        // frees of null are no-ops
        spl_set_free(ptr::null_mut());
        spl_string_free(ptr::null_mut());
        assert_eq!(spl_set_len(ptr::null()), 0);
    }
}

#[test]
fn set_algebra_matches_desk_values() {
    unsafe {
        let a = parse("1\n2\n3\n");
        let mut sum: *mut SplSet = ptr::null_mut();
        assert_eq!(spl_set_combine(a, a, SplSetOp::Sum, &mut sum), SplStatus::Ok);
        assert_eq!(spl_set_len(sum), 5);
        let mut prod: *mut SplSet = ptr::null_mut();
        assert_eq!(spl_set_combine(a, a, SplSetOp::Product, &mut prod), SplStatus::Ok);
        assert_eq!(spl_set_len(prod), 6);

        let with_zero = parse("0\n1\n");
        let mut ratio: *mut SplSet = ptr::null_mut();
        assert_eq!(
            spl_set_combine(a, with_zero, SplSetOp::Ratio, &mut ratio),
            SplStatus::DivisionByZero
        );

        let mut four: *mut SplSet = ptr::null_mut();
        assert_eq!(spl_iterated_sumset(a, 4, &mut four), SplStatus::Ok);
        assert_eq!(spl_set_len(four), 9); // {4..12}

        let half = CString::new("1/2").unwrap();
        let mut dil: *mut SplSet = ptr::null_mut();
        assert_eq!(spl_dilate(a, half.as_ptr(), &mut dil), SplStatus::Ok);
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(spl_set_element(dil, 0, &mut s), SplStatus::Ok);
        assert_eq!(take_string(s), "1/2");

        for p in [a, sum, prod, with_zero, four, dil] {
            spl_set_free(p);
        }
    }
}

#[test]
fn counting_desk_values() {
    unsafe {
        let a = parse("1\n2\n3\n");
        let one = CString::new("1").unwrap();
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(
            spl_pinned_product_size(a, one.as_ptr(), true, &mut s),
            SplStatus::Ok
        );
        assert_eq!(take_string(s), "7");

        assert_eq!(spl_multiplicative_energy(a, a, &mut s), SplStatus::Ok);
        assert_eq!(take_string(s), "15");
        assert_eq!(spl_additive_energy(a, a, &mut s), SplStatus::Ok);
        assert_eq!(take_string(s), "19");

        let k3 = CString::new("3").unwrap();
        assert_eq!(spl_energy_moment(a, k3.as_ptr(), &mut s), SplStatus::Ok);
        assert_eq!(take_string(s), "45");
        // E_1.5({1,2,3}) = 3^1.5 + 2 * 2^1.5 + 2 = 12.8530...
        let k15 = CString::new("3/2").unwrap();
        assert_eq!(spl_energy_moment(a, k15.as_ptr(), &mut s), SplStatus::Ok);
        let e15 = take_string(s);
        assert!(e15.starts_with("12.8530"), "E_1.5 of {{1,2,3}}: {e15}");

        assert_eq!(spl_five_var_expander_size(a, &mut s), SplStatus::Ok);
        assert_eq!(take_string(s), "27");

        let zero_based = parse("0\n1\n2\n");
        assert_eq!(spl_gk_distance_quadruples(zero_based, &mut s), SplStatus::Ok);
        assert_eq!(take_string(s), "1329");
        let mut triples = 0u64;
        assert_eq!(spl_grid_collinear_triples(zero_based, &mut triples), SplStatus::Ok);
        assert_eq!(triples, 48);
        assert_eq!(
            spl_five_var_expander_size(zero_based, &mut s),
            SplStatus::NonPositiveElement
        );

        // {1,2,3}({2..6}) = {2,3,4,5,6,8,9,10,12,15,18}
        assert_eq!(spl_composite_expander_size(a, true, &mut s), SplStatus::Ok);
        assert_eq!(take_string(s), "11");

        spl_set_free(a);
        spl_set_free(zero_based);
    }
}

#[test]
fn shifted_energy_signs() {
    unsafe {
        let a = parse("1\n2\n");
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(
            spl_shifted_energy_sum(a, a, a, true, false, &mut s),
            SplStatus::Ok
        );
        assert_eq!(take_string(s), "12");
        assert_eq!(
            spl_shifted_energy_sum(a, a, a, false, false, &mut s),
            SplStatus::Ok
        );
        assert_eq!(take_string(s), "8");
        spl_set_free(a);
    }
}

#[test]
fn refinement_surfaces() {
    unsafe {
        let spec = CString::new("geometric:2:8").unwrap();
        let mut a: *mut SplSet = ptr::null_mut();
        assert_eq!(spl_set_from_family(spec.as_ptr(), 1, &mut a), SplStatus::Ok);
        assert_eq!(spl_set_len(a), 8);

        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(spl_dstar_upper_bound(a, &mut s), SplStatus::Ok);
        let value = take_string(s);
        // GP witness value (2n-1)^2/n^2 = 225/64
        assert_eq!(value, "225/64");

        assert_eq!(spl_popular_ratio_class_json(a, &mut s), SplStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(doc["kind"], "popular-ratio-class");

        assert_eq!(spl_double_pigeonhole_json(a, &mut s), SplStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert!(doc["witness"]["value"].is_string());

        assert_eq!(spl_best_dilation_json(a, false, &mut s), SplStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert!(doc["overlap"].is_string());

        // refinements require at least two elements
        let single = parse("5\n");
        assert_eq!(
            spl_refine_energy_subset_json(single, &mut s),
            SplStatus::SetTooSmall
        );

        spl_set_free(a);
        spl_set_free(single);
    }
}

#[test]
fn crossover_exponents() {
    unsafe {
        let p = CString::new("3/2").unwrap();
        let q = CString::new("1/2").unwrap();
        let mut s: *mut c_char = ptr::null_mut();
        for (r, sv, expected) in [
            ("20/13", "40/13", "140/93"),
            ("58/37", "42/37", "184/121"),
            ("8/5", "6/5", "26/17"),
        ] {
            let r = CString::new(r).unwrap();
            let sv = CString::new(sv).unwrap();
            assert_eq!(
                spl_crossover(p.as_ptr(), q.as_ptr(), r.as_ptr(), sv.as_ptr(), &mut s),
                SplStatus::Ok
            );
            assert_eq!(take_string(s), expected);
        }
    }
}

#[test]
fn status_messages_and_version() {
    unsafe {
        let msg = CStr::from_ptr(spl_status_message(SplStatus::DivisionByZero));
        assert_eq!(msg.to_str().unwrap(), "division by zero");
        let v = CStr::from_ptr(spl_version());
        assert!(!v.to_str().unwrap().is_empty());
    }
}
