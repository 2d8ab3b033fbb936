//! Exact rational scalars: parsing, formatting, and small helpers.
//!
//! Every quantity in this crate that must be compared exactly is a
//! `Rational` (arbitrary-precision, always in lowest terms with a positive
//! denominator, both guaranteed by `num-rational`).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat_i64(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_usize(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parse "p", "p/q" or "-p/q"; `q` must be positive.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer `{num_str}` in `{s}`")))?;
    let den: BigInt = match den_str {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator `{d}` in `{s}`")))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    if den.is_negative() {
        return Err(Error::Parse(format!(
            "denominator must be positive in `{s}`"
        )));
    }
    Ok(Rational::new(num, den))
}

/// Render a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with `sig` significant digits, truncated toward zero.
/// Integers are printed exactly regardless of `sig`. Deterministic.
pub fn dec_string(r: &Rational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    if r.denom().is_one() {
        return r.numer().to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // e10 = floor(log10 a), found from digit counts and corrected by compare.
    let nd = a.numer().to_string().len() as i64;
    let dd = a.denom().to_string().len() as i64;
    let mut e10 = nd - dd;
    let ten = Rational::from_integer(BigInt::from(10));
    while a >= pow10(e10 + 1) {
        e10 += 1;
    }
    while a < pow10(e10) {
        e10 -= 1;
    }
    // mantissa with `sig` digits: floor(a * 10^(sig-1-e10))
    let shift = sig as i64 - 1 - e10;
    let scaled = if shift >= 0 {
        &a * pow10(shift)
    } else {
        &a / pow10(-shift)
    };
    let mant = scaled.trunc().numer().abs().to_string();
    debug_assert_eq!(mant.len(), sig, "mantissa digit count");
    let _ = ten;
    let body = if (-4..=(sig as i64 + 8)).contains(&e10) {
        plain_decimal(&mant, e10)
    } else {
        let rest = mant[1..].trim_end_matches('0');
        if rest.is_empty() {
            format!("{}e{}", &mant[..1], e10)
        } else {
            format!("{}.{}e{}", &mant[..1], rest, e10)
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn pow10(e: i64) -> Rational {
    let ten = BigInt::from(10);
    if e >= 0 {
        Rational::from_integer(ten.pow(e as u32))
    } else {
        Rational::new(BigInt::one(), ten.pow((-e) as u32))
    }
}

fn plain_decimal(mant: &str, e10: i64) -> String {
    let digits = mant.len() as i64;
    if e10 >= digits - 1 {
        // integer with trailing zeros
        let mut s = mant.to_string();
        s.push_str(&"0".repeat((e10 - digits + 1) as usize));
        s
    } else if e10 >= 0 {
        let split = (e10 + 1) as usize;
        let frac = mant[split..].trim_end_matches('0');
        if frac.is_empty() {
            mant[..split].to_string()
        } else {
            format!("{}.{}", &mant[..split], frac)
        }
    } else {
        let zeros = (-e10 - 1) as usize;
        let frac = mant.trim_end_matches('0');
        format!("0.{}{}", "0".repeat(zeros), frac)
    }
}
