//! Representation-function histograms and energy functionals.
//!
//! The central object is the exact multiplicity map of a difference or
//! ratio representation function; every energy here is a power sum over
//! such a histogram. Integer moments are exact big integers; fractional
//! moments are enclosed in directed-rounding intervals so that downstream
//! inequality checks stay sound.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::hp::{root_directed, Interval};
use crate::setcore::{GroundSet, ShiftSign};

/// Which representation function a histogram counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    /// r(x) = #{(a,b) : a - b = x} = |A ∩ (B + x)|
    Difference,
    /// r(x) = #{(a,b) : a / b = x}
    Ratio,
}

/// Exact multiplicity map x -> r(x) with r(x) >= 1, stored sparsely and
/// iterated in sorted value order.
#[derive(Debug, Clone)]
pub struct RepHistogram {
    kind: RepKind,
    entries: BTreeMap<Rational, u64>,
    a_size: usize,
    b_size: usize,
}

impl RepHistogram {
    pub fn build(a: &GroundSet, b: &GroundSet, kind: RepKind) -> Result<Self> {
        if kind == RepKind::Ratio && b.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let entries = match (a.fits_small_ints(SMALL_INT_BOUND), b.fits_small_ints(SMALL_INT_BOUND)) {
            (Some(ai), Some(bi)) => build_entries_int(&ai, &bi, kind),
            _ => build_entries_exact(a, b, kind),
        };
        let h = RepHistogram {
            kind,
            entries,
            a_size: a.len(),
            b_size: b.len(),
        };
        debug_assert_eq!(h.total_mass(), (a.len() as u128) * (b.len() as u128));
        Ok(h)
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn count(&self, x: &Rational) -> u64 {
        self.entries.get(x).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, u64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn max_count(&self) -> u64 {
        self.entries.values().copied().max().unwrap_or(0)
    }

    pub fn total_mass(&self) -> u128 {
        self.entries.values().map(|&c| c as u128).sum()
    }

    pub fn source_sizes(&self) -> (usize, usize) {
        (self.a_size, self.b_size)
    }

    /// Sum of squared multiplicities, i.e. the energy of the histogram.
    pub fn energy(&self) -> BigInt {
        let s: u128 = self.entries.values().map(|&c| (c as u128) * (c as u128)).sum();
        BigInt::from(s)
    }

    /// CSV dump: value_num,value_den,count sorted by value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "value_num,value_den,count")?;
        for (v, c) in self.iter() {
            writeln!(w, "{},{},{}", v.numer(), v.denom(), c)?;
        }
        Ok(())
    }
}

/// Elements no larger than this run counting kernels on i64 keys; results
/// are identical to the exact path (differences and reduced ratios of such
/// integers stay far inside i64).
const SMALL_INT_BOUND: i64 = 1 << 20;

fn build_entries_exact(a: &GroundSet, b: &GroundSet, kind: RepKind) -> BTreeMap<Rational, u64> {
    let mut entries: BTreeMap<Rational, u64> = BTreeMap::new();
    for x in a.iter() {
        for y in b.iter() {
            let v = match kind {
                RepKind::Difference => x - y,
                RepKind::Ratio => x / y,
            };
            *entries.entry(v).or_insert(0) += 1;
        }
    }
    entries
}

fn build_entries_int(a: &[i64], b: &[i64], kind: RepKind) -> BTreeMap<Rational, u64> {
    match kind {
        RepKind::Difference => {
            let mut m: BTreeMap<i64, u64> = BTreeMap::new();
            for &x in a {
                for &y in b {
                    *m.entry(x - y).or_insert(0) += 1;
                }
            }
            m.into_iter()
                .map(|(k, v)| (Rational::from_integer(k.into()), v))
                .collect()
        }
        RepKind::Ratio => {
            let mut m: BTreeMap<(i64, i64), u64> = BTreeMap::new();
            for &x in a {
                for &y in b {
                    *m.entry(reduce_ratio(x, y)).or_insert(0) += 1;
                }
            }
            m.into_iter()
                .map(|((n, d), v)| (Rational::new(n.into(), d.into()), v))
                .collect()
        }
    }
}

/// (x/y) in lowest terms with positive denominator; y != 0.
fn reduce_ratio(x: i64, y: i64) -> (i64, i64) {
    let g = gcd_i64(x.unsigned_abs(), y.unsigned_abs()) as i64;
    let (mut n, mut d) = (x / g, y / g);
    if d < 0 {
        n = -n;
        d = -d;
    }
    (n, d)
}

fn gcd_i64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// An evaluated energy: the moment used and either an exact integer (for
/// integral moments) or a directed enclosure (for fractional ones).
#[derive(Debug, Clone)]
pub struct EnergyValue {
    pub moment: Rational,
    pub value: EnergyMagnitude,
}

#[derive(Debug, Clone)]
pub enum EnergyMagnitude {
    Exact(BigInt),
    Bracketed(Interval),
}

impl EnergyValue {
    pub fn expect_int(&self) -> &BigInt {
        match &self.value {
            EnergyMagnitude::Exact(v) => v,
            EnergyMagnitude::Bracketed(_) => panic!("expected an exact integer energy"),
        }
    }

    pub fn as_interval(&self) -> Interval {
        match &self.value {
            EnergyMagnitude::Exact(v) => Interval::exact(Rational::from_integer(v.clone())),
            EnergyMagnitude::Bracketed(iv) => iv.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.value {
            EnergyMagnitude::Exact(v) => v.to_f64().unwrap_or(f64::NAN),
            EnergyMagnitude::Bracketed(iv) => crate::arith::to_f64(&iv.midpoint()),
        }
    }
}

/// E+(A,B): number of quadruples with a1 - b1 = a2 - b2.
pub fn additive_energy(a: &GroundSet, b: &GroundSet) -> Result<EnergyValue> {
    let h = RepHistogram::build(a, b, RepKind::Difference)?;
    Ok(EnergyValue {
        moment: Rational::from_integer(2.into()),
        value: EnergyMagnitude::Exact(h.energy()),
    })
}

/// Ex(A,B): number of quadruples with a1/b1 = a2/b2. Requires 0 outside
/// both sets so that the ratio form and the cross-product form agree.
pub fn multiplicative_energy(a: &GroundSet, b: &GroundSet) -> Result<EnergyValue> {
    if a.contains_zero() || b.contains_zero() {
        return Err(Error::DivisionByZero);
    }
    let h = RepHistogram::build(a, b, RepKind::Ratio)?;
    Ok(EnergyValue {
        moment: Rational::from_integer(2.into()),
        value: EnergyMagnitude::Exact(h.energy()),
    })
}

/// E_k(A) = sum_x r_{A-A}(x)^k for rational k >= 1. Exact for integer k,
/// otherwise a directed enclosure at >= 50 significant digits.
pub fn energy_moment(a: &GroundSet, k: &Rational) -> Result<EnergyValue> {
    if k < &Rational::one() {
        return Err(Error::InvalidParameter("moment must satisfy k >= 1".into()));
    }
    let h = RepHistogram::build(a, a, RepKind::Difference)?;
    Ok(moment_of_histogram(&h, k))
}

/// Power sum of an arbitrary histogram; shared with the verification layer.
pub fn moment_of_histogram(h: &RepHistogram, k: &Rational) -> EnergyValue {
    if k.is_integer() {
        let e = k.numer().to_u32().expect("moment exponent fits u32");
        let mut total = BigInt::zero();
        for (_, c) in h.iter() {
            total += BigInt::from(c).pow(e);
        }
        return EnergyValue {
            moment: k.clone(),
            value: EnergyMagnitude::Exact(total),
        };
    }
    let p = k.numer().to_u32().expect("moment numerator fits u32");
    let q = k.denom().to_u32().expect("moment denominator fits u32");
    // Group by multiplicity: each distinct count costs one root extraction.
    let mut by_count: BTreeMap<u64, u64> = BTreeMap::new();
    for (_, c) in h.iter() {
        *by_count.entry(c).or_insert(0) += 1;
    }
    let mut total = Interval::exact(Rational::zero());
    for (count, occurrences) in by_count {
        let powered = Rational::from_integer(BigInt::from(count).pow(p));
        let rooted = root_directed(&powered, q);
        total = total.add(&rooted.scale(&Rational::from_integer(occurrences.into())));
    }
    EnergyValue {
        moment: k.clone(),
        value: EnergyMagnitude::Bracketed(total),
    }
}

/// Number of distinct values with r(x) >= tau, for tau >= 1.
pub fn level_set_count(h: &RepHistogram, tau: &Rational) -> Result<u64> {
    if tau < &Rational::one() {
        return Err(Error::InvalidParameter("level threshold must be >= 1".into()));
    }
    Ok(h.iter()
        .filter(|(_, c)| &Rational::from_integer((*c).into()) >= tau)
        .count() as u64)
}

/// Sum over a in A of the number of quadruples (b, b', c, c') with
/// b (c ± a) = b' (c' ± a); the raw equation count, including quadruples
/// whose common product is zero. With `nonzero_only` the zero-product
/// quadruples are excluded (the main term once zero terms are split off).
pub fn shifted_energy_sum(
    a: &GroundSet,
    b: &GroundSet,
    c: &GroundSet,
    sign: ShiftSign,
    nonzero_only: bool,
) -> BigInt {
    if let (Some(ai), Some(bi), Some(ci)) = (
        a.fits_small_ints(SMALL_INT_BOUND),
        b.fits_small_ints(SMALL_INT_BOUND),
        c.fits_small_ints(SMALL_INT_BOUND),
    ) {
        let mut total: u128 = 0;
        let mut products: Vec<i64> = Vec::with_capacity(bi.len() * ci.len());
        for &shift in &ai {
            products.clear();
            for &bv in &bi {
                for &cv in &ci {
                    let s = match sign {
                        ShiftSign::Plus => cv + shift,
                        ShiftSign::Minus => cv - shift,
                    };
                    products.push(bv * s);
                }
            }
            products.sort_unstable();
            let mut run = 0u128;
            let mut prev = 0i64;
            for &p in products.iter() {
                if run > 0 && p == prev {
                    run += 1;
                } else {
                    if run > 0 && !(nonzero_only && prev == 0) {
                        total += run * run;
                    }
                    prev = p;
                    run = 1;
                }
            }
            if run > 0 && !(nonzero_only && prev == 0) {
                total += run * run;
            }
        }
        return BigInt::from(total);
    }
    let mut total: u128 = 0;
    for shift in a.iter() {
        let mut products: BTreeMap<Rational, u64> = BTreeMap::new();
        for bv in b.iter() {
            for cv in c.iter() {
                let shifted = match sign {
                    ShiftSign::Plus => cv + shift,
                    ShiftSign::Minus => cv - shift,
                };
                *products.entry(bv * shifted).or_insert(0) += 1;
            }
        }
        for (v, cnt) in &products {
            if nonzero_only && v.is_zero() {
                continue;
            }
            total += (*cnt as u128) * (*cnt as u128);
        }
    }
    BigInt::from(total)
}

/// Quintuple-loop oracle for [`shifted_energy_sum`]; the two paths must
/// agree on every input. Falls back from i64 to exact rationals when the
/// elements are not small integers.
pub fn shifted_energy_sum_bruteforce(
    a: &GroundSet,
    b: &GroundSet,
    c: &GroundSet,
    sign: ShiftSign,
    nonzero_only: bool,
) -> BigInt {
    const BOUND: i64 = 1 << 20;
    if let (Some(ai), Some(bi), Some(ci)) = (
        a.fits_small_ints(BOUND),
        b.fits_small_ints(BOUND),
        c.fits_small_ints(BOUND),
    ) {
        let mut total: u128 = 0;
        let mut table: Vec<i64> = Vec::with_capacity(bi.len() * ci.len());
        for &shift in &ai {
            table.clear();
            for &bv in &bi {
                for &cv in &ci {
                    let s = match sign {
                        ShiftSign::Plus => cv + shift,
                        ShiftSign::Minus => cv - shift,
                    };
                    table.push(bv * s);
                }
            }
            for &p1 in &table {
                if nonzero_only && p1 == 0 {
                    continue;
                }
                let mut hits: u64 = 0;
                for &p2 in &table {
                    hits += (p1 == p2) as u64;
                }
                total += hits as u128;
            }
        }
        return BigInt::from(total);
    }
    let mut total: u128 = 0;
    for shift in a.iter() {
        let mut table: Vec<Rational> = Vec::with_capacity(b.len() * c.len());
        for bv in b.iter() {
            for cv in c.iter() {
                let s = match sign {
                    ShiftSign::Plus => cv + shift,
                    ShiftSign::Minus => cv - shift,
                };
                table.push(bv * s);
            }
        }
        for p1 in &table {
            if nonzero_only && p1.is_zero() {
                continue;
            }
            total += table.iter().filter(|p2| p1 == *p2).count() as u128;
        }
    }
    BigInt::from(total)
}

/// A_x = A ∩ x^{-1} A, so that |A_x| = r_{A/A}(x). May be empty, hence the
/// plain sorted vector rather than a `GroundSet`.
pub fn ratio_intersection(a: &GroundSet, x: &Rational) -> Result<Vec<Rational>> {
    if x.is_zero() {
        return Err(Error::ZeroDilation);
    }
    if a.contains_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(a.iter()
        .filter(|e| a.contains(&(*e * x)))
        .cloned()
        .collect())
}
