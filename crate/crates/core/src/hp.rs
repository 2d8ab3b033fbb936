//! Directed-rounding interval arithmetic over exact rationals.
//!
//! Fractional powers and base-2 logarithms are irrational, so inequality
//! checks involving them are run on enclosing intervals: the side claimed
//! smaller is rounded up, the side claimed larger is rounded down, and the
//! check passes only if it still holds. A passing check can therefore never
//! be a rounding artifact. Default precision is 256 fractional bits
//! (about 77 decimal digits).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

/// Fractional bits carried by roots and logarithms.
pub const PRECISION_BITS: u32 = 256;

/// Closed enclosure `lo <= true value <= hi`, both exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn exact(v: Rational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval bounds out of order");
        Interval { lo, hi }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn square(&self) -> Interval {
        self.mul(self)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// `x^(num/den)` for a nonnegative interval; exponent >= 0, den >= 1.
    pub fn pow_ratio(&self, num: u32, den: u32) -> Interval {
        assert!(den >= 1);
        assert!(!self.lo.is_negative(), "pow_ratio needs a nonnegative interval");
        let lo_p = pow_rational(&self.lo, num);
        let hi_p = pow_rational(&self.hi, num);
        if den == 1 {
            return Interval::new(lo_p, hi_p);
        }
        let lo_root = root_directed(&lo_p, den);
        let hi_root = root_directed(&hi_p, den);
        Interval::new(lo_root.lo, hi_root.hi)
    }

    /// True only if the inequality `self <= other` holds for every pair of
    /// values in the enclosures (outward test; cannot pass spuriously).
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_ge(&self, other: &Interval) -> bool {
        self.lo >= other.hi
    }
}

fn pow_rational(x: &Rational, k: u32) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    Rational::new(x.numer().pow(k), x.denom().pow(k))
}

/// Directed `q`-th root of a nonnegative rational. Detects perfect powers
/// (exact result); otherwise encloses at `PRECISION_BITS` fractional bits.
pub fn root_directed(x: &Rational, q: u32) -> Interval {
    assert!(q >= 1);
    assert!(!x.is_negative());
    if q == 1 || x.is_zero() || x.is_one() {
        return Interval::exact(x.clone());
    }
    // Perfect rational power?
    let nr = x.numer().nth_root(q);
    let dr = x.denom().nth_root(q);
    if &nr.pow(q) == x.numer() && &dr.pow(q) == x.denom() {
        return Interval::exact(Rational::new(nr, dr));
    }
    // floor((x * 2^(q*B))^(1/q)) / 2^B brackets x^(1/q) from below.
    let scale_q = BigInt::one() << (q as usize * PRECISION_BITS as usize);
    let scaled = x * Rational::from_integer(scale_q);
    let lo_int = scaled.floor().to_integer().nth_root(q);
    let denom = BigInt::one() << PRECISION_BITS as usize;
    let lo = Rational::new(lo_int.clone(), denom.clone());
    let hi = Rational::new(lo_int + BigInt::one(), denom);
    Interval::new(lo, hi)
}

/// Directed base-2 logarithm of a positive rational, enclosed at
/// `PRECISION_BITS` fractional bits via fixed-point bit extraction.
pub fn log2_directed(x: &Rational) -> Interval {
    assert!(x.is_positive(), "log2 needs a positive argument");
    let two = Rational::from_integer(BigInt::from(2));
    let one = Rational::one();
    let mut e: i64 = 0;
    let mut m = x.clone();
    while m >= two {
        m = &m / &two;
        e += 1;
    }
    while m < one {
        m = &m * &two;
        e -= 1;
    }
    if m.is_one() {
        return Interval::exact(Rational::from_integer(BigInt::from(e)));
    }
    // m in (1, 2): extract PRECISION_BITS fractional bits with floor
    // truncation at T guard bits; truncation only lowers the extracted
    // value, so the result is a valid lower bound.
    let frac_bits = PRECISION_BITS as usize;
    let guard = frac_bits + 64;
    let scale = BigInt::one() << guard;
    let mut mm = (&m * Rational::from_integer(scale)).floor().to_integer();
    let top = BigInt::one() << (guard + 1);
    let mut frac = BigInt::zero();
    for _ in 0..frac_bits {
        mm = (&mm * &mm) >> guard;
        frac <<= 1;
        if mm >= top {
            mm >>= 1;
            frac += 1;
        }
    }
    let denom = BigInt::one() << frac_bits;
    let lo = Rational::from_integer(BigInt::from(e)) + Rational::new(frac, denom);
    // Slack covers both the unextracted tail and the truncation drift.
    let slack = Rational::new(BigInt::one(), BigInt::one() << (frac_bits - 2));
    let hi = &lo + slack;
    Interval::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_i64, to_f64};

    #[test]
    fn exact_roots_detected() {
        let r = root_directed(&rat_i64(27), 3);
        assert!(r.is_exact());
        assert_eq!(r.lo(), &rat_i64(3));
        let r = root_directed(&rat(9, 4), 2);
        assert_eq!(r.lo(), &rat(3, 2));
    }

    #[test]
    fn sqrt2_bracket() {
        let r = root_directed(&rat_i64(2), 2);
        assert!(!r.is_exact());
        let mid = to_f64(&r.midpoint());
        assert!((mid - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(r.lo() < r.hi());
        assert!(to_f64(&r.width()) < 1e-60);
    }

    #[test]
    fn pow_ratio_matches_f64() {
        // 5^(7/13)
        let iv = Interval::exact(rat_i64(5)).pow_ratio(7, 13);
        let expected = 5f64.powf(7.0 / 13.0);
        assert!((to_f64(&iv.midpoint()) - expected).abs() < 1e-12);
    }

    #[test]
    fn log2_exact_powers() {
        assert_eq!(log2_directed(&rat_i64(8)), Interval::exact(rat_i64(3)));
        assert_eq!(log2_directed(&rat(1, 4)), Interval::exact(rat_i64(-2)));
    }

    #[test]
    fn log2_bracket_contains_truth() {
        for v in [3i64, 5, 7, 100, 1000] {
            let iv = log2_directed(&rat_i64(v));
            let truth = (v as f64).log2();
            assert!(to_f64(iv.lo()) <= truth + 1e-12, "lo too high for {v}");
            assert!(to_f64(iv.hi()) >= truth - 1e-12, "hi too low for {v}");
            assert!(to_f64(&iv.width()) < 1e-60);
        }
        let iv = log2_directed(&rat(3, 7));
        let truth = (3f64 / 7f64).log2();
        assert!((to_f64(&iv.midpoint()) - truth).abs() < 1e-12);
    }

    #[test]
    fn outward_comparison() {
        let sqrt2 = root_directed(&rat_i64(2), 2);
        let sqrt3 = root_directed(&rat_i64(3), 2);
        assert!(sqrt2.certainly_le(&sqrt3));
        assert!(!sqrt3.certainly_le(&sqrt2));
        // An enclosure is never certainly <= itself unless exact.
        assert!(!sqrt2.certainly_le(&sqrt2));
    }
}
