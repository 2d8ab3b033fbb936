//! C ABI for the sumprodlab library.
//!
//! Conventions:
//! - Sets are opaque handles ([`SplSet`]); create them with
//!   `spl_set_parse` / `spl_set_from_family`, release with `spl_set_free`.
//! - Every fallible call returns an [`SplStatus`]; results come back
//!   through out-pointers. Numeric results are NUL-terminated decimal
//!   strings (values are arbitrary-precision rationals); free them with
//!   `spl_string_free`.
//! - Rational scalar arguments are strings: `"3"`, `"-7/2"`.
//! - Panics never cross the boundary; they surface as
//!   `SPL_STATUS_INTERNAL_PANIC`.
//!
//! Safety contract, shared by every function here: handle arguments must
//! be null or come from this library and not yet be freed; string
//! arguments must be valid NUL-terminated pointers; out-pointers must be
//! valid for a single write. Null breaks none of them — it is reported as
//! a status.

// the per-function safety story is the uniform contract above
#![allow(clippy::missing_safety_doc)]

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sumprodlab::arith::{format_rational, parse_rational};
use sumprodlab::energy::{
    additive_energy, energy_moment, multiplicative_energy, shifted_energy_sum, EnergyMagnitude,
};
use sumprodlab::error::Error;
use sumprodlab::families::{generate, FamilySpec};
use sumprodlab::geometry::{gk_distance_quadruples, grid_collinear_triples};
use sumprodlab::refine::{
    best_dilation, double_pigeonhole, dstar_upper_bound, popular_ratio_class,
    refine_energy_subset, DilationCandidates,
};
use sumprodlab::setcore::{
    composite_expander, five_var_expander_size, pinned_product, InnerOp, ShiftSign,
};
use sumprodlab::verify::crossover;
use sumprodlab::GroundSet;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    EmptySet = 4,
    ZeroElement = 5,
    DivisionByZero = 6,
    NonPositiveElement = 7,
    InvalidArgument = 8,
    SetTooSmall = 9,
    PreconditionViolated = 10,
    VerificationFailed = 11,
    InternalPanic = 12,
}

fn status_of(e: &Error) -> SplStatus {
    match e {
        Error::EmptySet => SplStatus::EmptySet,
        Error::DivisionByZero => SplStatus::DivisionByZero,
        Error::ZeroDilation | Error::ZeroElement => SplStatus::ZeroElement,
        Error::NonPositiveElement => SplStatus::NonPositiveElement,
        Error::TooSmall => SplStatus::SetTooSmall,
        Error::Parse(_) => SplStatus::ParseError,
        Error::InvalidParameter(_) | Error::NonpositiveDenominator => SplStatus::InvalidArgument,
        Error::PreconditionViolated(_) | Error::InvalidWitness(_) => {
            SplStatus::PreconditionViolated
        }
        Error::ExactInequalityViolated { .. }
        | Error::CertificateInvalid(_)
        | Error::FloatSeparation(..) => SplStatus::VerificationFailed,
        _ => SplStatus::InvalidArgument,
    }
}

/// Opaque handle to an immutable sorted set of exact rationals.
pub struct SplSet(GroundSet);

// ---------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, SplStatus> {
    if p.is_null() {
        return Err(SplStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| SplStatus::InvalidUtf8)
}

unsafe fn set_arg<'a>(p: *const SplSet) -> Result<&'a GroundSet, SplStatus> {
    if p.is_null() {
        return Err(SplStatus::NullArgument);
    }
    Ok(&(*p).0)
}

unsafe fn write_set(out: *mut *mut SplSet, set: GroundSet) -> SplStatus {
    if out.is_null() {
        return SplStatus::NullArgument;
    }
    *out = Box::into_raw(Box::new(SplSet(set)));
    SplStatus::Ok
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> SplStatus {
    if out.is_null() {
        return SplStatus::NullArgument;
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            SplStatus::Ok
        }
        Err(_) => SplStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> SplStatus) -> SplStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(SplStatus::InternalPanic)
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! try_lib {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(ref e) => return status_of(e),
        }
    };
}

// ---------------------------------------------------------------------
// lifecycle
// ---------------------------------------------------------------------

/// Parse a set from text in the set-file format: one element per line,
/// integers or `p/q`, `#` comments, duplicates removed.
#[no_mangle]
pub unsafe extern "C" fn spl_set_parse(text: *const c_char, out: *mut *mut SplSet) -> SplStatus {
    guarded(|| {
        let text = try_ffi!(str_arg(text));
        let (set, _dupes) = try_lib!(sumprodlab::io::parse_set_text(text));
        write_set(out, set)
    })
}

/// Generate a set from a family spec string such as `interval:32`,
/// `geometric:2:16`, `random:1000000:64` (an embedded `seed=` wins over
/// the seed argument).
#[no_mangle]
pub unsafe extern "C" fn spl_set_from_family(
    spec: *const c_char,
    seed: u64,
    out: *mut *mut SplSet,
) -> SplStatus {
    guarded(|| {
        let spec = try_ffi!(str_arg(spec));
        let family = try_lib!(FamilySpec::parse(spec, seed));
        let set = try_lib!(generate(&family));
        write_set(out, set)
    })
}

/// Release a set handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn spl_set_free(set: *mut SplSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Release a string returned by this library. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn spl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of elements; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn spl_set_len(set: *const SplSet) -> usize {
    if set.is_null() {
        0
    } else {
        (*set).0.len()
    }
}

/// The idx-th element (ascending order) as `p` or `p/q`.
#[no_mangle]
pub unsafe extern "C" fn spl_set_element(
    set: *const SplSet,
    idx: usize,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let set = try_ffi!(set_arg(set));
        if idx >= set.len() {
            return SplStatus::InvalidArgument;
        }
        write_string(out, format_rational(&set.elems()[idx]))
    })
}

/// Membership test for a rational literal.
#[no_mangle]
pub unsafe extern "C" fn spl_set_contains(
    set: *const SplSet,
    element: *const c_char,
    out: *mut bool,
) -> SplStatus {
    guarded(|| {
        let set = try_ffi!(set_arg(set));
        let elem = try_lib!(parse_rational(try_ffi!(str_arg(element))));
        if out.is_null() {
            return SplStatus::NullArgument;
        }
        *out = set.contains(&elem);
        SplStatus::Ok
    })
}

// ---------------------------------------------------------------------
// set algebra
// ---------------------------------------------------------------------

/// Which pairwise set operation `spl_set_combine` applies.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplSetOp {
    Sum = 0,
    Difference = 1,
    Product = 2,
    Ratio = 3,
}

/// Pairwise combination of two sets under one of the four arithmetic
/// operations.
#[no_mangle]
pub unsafe extern "C" fn spl_set_combine(
    a: *const SplSet,
    b: *const SplSet,
    op: SplSetOp,
    out: *mut *mut SplSet,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let b = try_ffi!(set_arg(b));
        let set = match op {
            SplSetOp::Sum => a.sumset(b),
            SplSetOp::Difference => a.difference_set(b),
            SplSetOp::Product => a.product_set(b),
            SplSetOp::Ratio => try_lib!(a.ratio_set(b)),
        };
        write_set(out, set)
    })
}

/// Elementwise translate by a rational constant.
#[no_mangle]
pub unsafe extern "C" fn spl_translate(
    a: *const SplSet,
    shift: *const c_char,
    out: *mut *mut SplSet,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let c = try_lib!(parse_rational(try_ffi!(str_arg(shift))));
        write_set(out, a.translate(&c))
    })
}

/// Elementwise dilate by a nonzero rational constant.
#[no_mangle]
pub unsafe extern "C" fn spl_dilate(
    a: *const SplSet,
    factor: *const c_char,
    out: *mut *mut SplSet,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let z = try_lib!(parse_rational(try_ffi!(str_arg(factor))));
        write_set(out, try_lib!(a.dilate(&z)))
    })
}

/// k-fold iterated sumset, k >= 1.
#[no_mangle]
pub unsafe extern "C" fn spl_iterated_sumset(
    a: *const SplSet,
    k: u32,
    out: *mut *mut SplSet,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        write_set(out, try_lib!(a.iterated_sumset(k)))
    })
}

// ---------------------------------------------------------------------
// expanders and counting
// ---------------------------------------------------------------------

/// |A (A + pin)| (plus = true) or |A (A - pin)|.
#[no_mangle]
pub unsafe extern "C" fn spl_pinned_product_size(
    a: *const SplSet,
    pin: *const c_char,
    plus: bool,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let pin = try_lib!(parse_rational(try_ffi!(str_arg(pin))));
        let sign = if plus { ShiftSign::Plus } else { ShiftSign::Minus };
        write_string(out, pinned_product(a, &pin, sign).cardinality.to_string())
    })
}

/// |A(A+A)| (inner_sum = true) or |A(A-A)|.
#[no_mangle]
pub unsafe extern "C" fn spl_composite_expander_size(
    a: *const SplSet,
    inner_sum: bool,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let inner = if inner_sum { InnerOp::Sum } else { InnerOp::Difference };
        write_string(out, composite_expander(a, inner).cardinality.to_string())
    })
}

/// |{(a1+a2+a3+a4)^2 + log a5}| for a strictly positive set.
#[no_mangle]
pub unsafe extern "C" fn spl_five_var_expander_size(
    a: *const SplSet,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        write_string(out, try_lib!(five_var_expander_size(a)).to_string())
    })
}

/// Additive energy E+(A,B).
#[no_mangle]
pub unsafe extern "C" fn spl_additive_energy(
    a: *const SplSet,
    b: *const SplSet,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let b = try_ffi!(set_arg(b));
        let e = try_lib!(additive_energy(a, b));
        write_string(out, e.expect_int().to_string())
    })
}

/// Multiplicative energy Ex(A,B); requires 0 outside both sets.
#[no_mangle]
pub unsafe extern "C" fn spl_multiplicative_energy(
    a: *const SplSet,
    b: *const SplSet,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let b = try_ffi!(set_arg(b));
        let e = try_lib!(multiplicative_energy(a, b));
        write_string(out, e.expect_int().to_string())
    })
}

/// E_k(A) for rational k >= 1 (e.g. "3", "3/2"). Integer moments come
/// back exact; fractional ones as 50-significant-digit decimals.
#[no_mangle]
pub unsafe extern "C" fn spl_energy_moment(
    a: *const SplSet,
    k: *const c_char,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let k = try_lib!(parse_rational(try_ffi!(str_arg(k))));
        let e = try_lib!(energy_moment(a, &k));
        let text = match &e.value {
            EnergyMagnitude::Exact(v) => v.to_string(),
            EnergyMagnitude::Bracketed(iv) => sumprodlab::arith::dec_string(&iv.midpoint(), 50),
        };
        write_string(out, text)
    })
}

/// Sum over a in A of solutions of b(c -/+ a) = b'(c' -/+ a); zero
/// products included unless nonzero_only.
#[no_mangle]
pub unsafe extern "C" fn spl_shifted_energy_sum(
    a: *const SplSet,
    b: *const SplSet,
    c: *const SplSet,
    minus: bool,
    nonzero_only: bool,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let b = try_ffi!(set_arg(b));
        let c = try_ffi!(set_arg(c));
        let sign = if minus { ShiftSign::Minus } else { ShiftSign::Plus };
        write_string(out, shifted_energy_sum(a, b, c, sign, nonzero_only).to_string())
    })
}

/// Distance-quadruple count over the squared-difference convolution.
#[no_mangle]
pub unsafe extern "C" fn spl_gk_distance_quadruples(
    a: *const SplSet,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        write_string(out, gk_distance_quadruples(a).to_string())
    })
}

/// Ordered collinear triples in the grid A x A.
#[no_mangle]
pub unsafe extern "C" fn spl_grid_collinear_triples(
    a: *const SplSet,
    out: *mut u64,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        if out.is_null() {
            return SplStatus::NullArgument;
        }
        *out = grid_collinear_triples(a);
        SplStatus::Ok
    })
}

// ---------------------------------------------------------------------
// refinements and verification
// ---------------------------------------------------------------------

/// Best certified witness upper bound on d_*(A), as an exact rational.
#[no_mangle]
pub unsafe extern "C" fn spl_dstar_upper_bound(
    a: *const SplSet,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let w = try_lib!(dstar_upper_bound(a));
        write_string(out, format_rational(&w.value))
    })
}

/// Popular-ratio-class certificate as a JSON document.
#[no_mangle]
pub unsafe extern "C" fn spl_popular_ratio_class_json(
    a: *const SplSet,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let cert = try_lib!(popular_ratio_class(a));
        write_string(out, cert.to_json().to_string())
    })
}

/// Energy-refinement certificate as a JSON document.
#[no_mangle]
pub unsafe extern "C" fn spl_refine_energy_subset_json(
    a: *const SplSet,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let cert = try_lib!(refine_energy_subset(a));
        write_string(out, cert.to_json().to_string())
    })
}

/// Double-pigeonhole certificate plus its d_* witness as one JSON
/// document with keys "certificate" and "witness".
#[no_mangle]
pub unsafe extern "C" fn spl_double_pigeonhole_json(
    a: *const SplSet,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let (cert, witness) = try_lib!(double_pigeonhole(a));
        let doc = serde_json::json!({
            "certificate": cert.to_json(),
            "witness": witness.to_json(),
        });
        write_string(out, doc.to_string())
    })
}

/// Best dilation overlap as JSON (`z`, `overlap`, bound report).
/// exhaustive = false searches A^{-1} plus 1, true searches (A/A)A^{-1}.
#[no_mangle]
pub unsafe extern "C" fn spl_best_dilation_json(
    a: *const SplSet,
    exhaustive: bool,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let a = try_ffi!(set_arg(a));
        let cands = if exhaustive {
            DilationCandidates::RatioTimesInverse
        } else {
            DilationCandidates::InverseElements
        };
        let choice = try_lib!(best_dilation(a, &cands));
        let doc = serde_json::json!({
            "z": format_rational(&choice.z),
            "overlap": choice.overlap.to_string(),
            "bound_satisfied": choice.bound_satisfied,
            "normalized_ratio": choice.normalized_ratio,
        });
        write_string(out, doc.to_string())
    })
}

/// Exact crossover exponent of the bounds K^q n^p and n^r / K^s; all four
/// exponents are rational literals, the result is a rational string.
#[no_mangle]
pub unsafe extern "C" fn spl_crossover(
    p: *const c_char,
    q: *const c_char,
    r: *const c_char,
    s: *const c_char,
    out: *mut *mut c_char,
) -> SplStatus {
    guarded(|| {
        let p = try_lib!(parse_rational(try_ffi!(str_arg(p))));
        let q = try_lib!(parse_rational(try_ffi!(str_arg(q))));
        let r = try_lib!(parse_rational(try_ffi!(str_arg(r))));
        let s = try_lib!(parse_rational(try_ffi!(str_arg(s))));
        let e = try_lib!(crossover((p, q), (r, s)));
        write_string(out, format_rational(&e))
    })
}

/// Static, do not free.
#[no_mangle]
pub extern "C" fn spl_status_message(status: SplStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        SplStatus::Ok => b"ok\0",
        SplStatus::NullArgument => b"null argument\0",
        SplStatus::InvalidUtf8 => b"invalid utf-8\0",
        SplStatus::ParseError => b"parse error\0",
        SplStatus::EmptySet => b"empty set\0",
        SplStatus::ZeroElement => b"zero element where nonzero required\0",
        SplStatus::DivisionByZero => b"division by zero\0",
        SplStatus::NonPositiveElement => b"non-positive element where positive required\0",
        SplStatus::InvalidArgument => b"invalid argument\0",
        SplStatus::SetTooSmall => b"set too small\0",
        SplStatus::PreconditionViolated => b"precondition violated\0",
        SplStatus::VerificationFailed => b"verification failed\0",
        SplStatus::InternalPanic => b"internal panic\0",
    };
    text.as_ptr() as *const c_char
}

/// Static library version string, do not free.
#[no_mangle]
pub extern "C" fn spl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
