//! Finite sets of exact rationals and the set-algebra constructions built
//! from them: sumsets, product sets, dilations, pinned products and the
//! composite expanders.
//!
//! A [`GroundSet`] is immutable after construction, strictly sorted and
//! duplicate-free, so cardinality questions are always exact. Elements are
//! rationals rather than floats because every counting statement downstream
//! depends on exact equality of sums, products and ratios.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{format_rational, Rational};
use crate::error::{Error, Result};

/// Immutable sorted set of distinct rationals. Never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    elems: Vec<Rational>,
}

impl GroundSet {
    /// Sort, deduplicate and freeze. Returns the set together with the
    /// number of duplicates that were removed.
    pub fn from_values(values: Vec<Rational>) -> Result<(Self, usize)> {
        if values.is_empty() {
            return Err(Error::EmptySet);
        }
        let n_in = values.len();
        let set: BTreeSet<Rational> = values.into_iter().collect();
        let elems: Vec<Rational> = set.into_iter().collect();
        let removed = n_in - elems.len();
        Ok((GroundSet { elems }, removed))
    }

    /// Construction when duplicates are impossible or uninteresting.
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        Ok(Self::from_values(values)?.0)
    }

    pub fn singleton(v: Rational) -> Self {
        GroundSet { elems: vec![v] }
    }

    /// Test convenience.
    pub fn from_ints(values: &[i64]) -> Self {
        let elems = values
            .iter()
            .map(|&v| Rational::from_integer(v.into()))
            .collect();
        Self::from_values(elems).expect("non-empty integer slice").0
    }

    fn from_sorted_set(set: BTreeSet<Rational>) -> Self {
        debug_assert!(!set.is_empty());
        GroundSet {
            elems: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elems(&self) -> &[Rational] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elems.iter()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.elems.binary_search(v).is_ok()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn min(&self) -> &Rational {
        &self.elems[0]
    }

    pub fn max(&self) -> &Rational {
        self.elems.last().unwrap()
    }

    pub fn all_positive(&self) -> bool {
        self.min().is_positive()
    }

    /// True when every element is an integer with |value| <= `bound`;
    /// enables i64 fast paths in counting kernels.
    pub fn fits_small_ints(&self, bound: i64) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(self.len());
        for e in &self.elems {
            if !e.is_integer() {
                return None;
            }
            let v = e.numer().to_i64()?;
            if v.abs() > bound {
                return None;
            }
            out.push(v);
        }
        Some(out)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.elems.iter().map(format_rational).collect()
    }

    pub fn sumset(&self, other: &GroundSet) -> GroundSet {
        self.pairwise(other, |a, b| a + b)
    }

    pub fn difference_set(&self, other: &GroundSet) -> GroundSet {
        self.pairwise(other, |a, b| a - b)
    }

    pub fn product_set(&self, other: &GroundSet) -> GroundSet {
        self.pairwise(other, |a, b| a * b)
    }

    pub fn ratio_set(&self, other: &GroundSet) -> Result<GroundSet> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pairwise(other, |a, b| a / b))
    }

    fn pairwise(&self, other: &GroundSet, f: impl Fn(&Rational, &Rational) -> Rational) -> GroundSet {
        let mut set = BTreeSet::new();
        for a in &self.elems {
            for b in &other.elems {
                set.insert(f(a, b));
            }
        }
        GroundSet::from_sorted_set(set)
    }

    pub fn translate(&self, c: &Rational) -> GroundSet {
        GroundSet {
            elems: self.elems.iter().map(|e| e + c).collect(),
        }
    }

    pub fn dilate(&self, z: &Rational) -> Result<GroundSet> {
        if z.is_zero() {
            return Err(Error::ZeroDilation);
        }
        let mut elems: Vec<Rational> = self.elems.iter().map(|e| e * z).collect();
        if z.is_negative() {
            elems.reverse();
        }
        Ok(GroundSet { elems })
    }

    pub fn inverses(&self) -> Result<GroundSet> {
        if self.contains_zero() {
            return Err(Error::ZeroElement);
        }
        let mut elems: Vec<Rational> = self.elems.iter().map(|e| e.recip()).collect();
        elems.sort();
        Ok(GroundSet { elems })
    }

    /// k-fold sumset A + ... + A with intermediate deduplication.
    pub fn iterated_sumset(&self, k: u32) -> Result<GroundSet> {
        if k < 1 {
            return Err(Error::InvalidParameter("iterated sumset needs k >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.sumset(self);
        }
        Ok(acc)
    }
}

/// Which sign a pinned shift uses: `A + a` or `A - a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShiftSign {
    Plus,
    Minus,
}

impl ShiftSign {
    pub fn symbol(self) -> char {
        match self {
            ShiftSign::Plus => '+',
            ShiftSign::Minus => '-',
        }
    }
}

/// Inner operation of a composite expander `A(A op A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InnerOp {
    Sum,
    Difference,
}

/// Which expander an [`ExpanderResult`] describes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ExpanderKind {
    PinnedProduct { pin: String, sign: ShiftSign },
    ProductOfSums,
    ProductOfDifferences,
    FiveVariableLog,
    Custom(String),
}

/// An evaluated expander: the image set when it is representable in exact
/// rationals, and always its exact cardinality.
#[derive(Debug, Clone)]
pub struct ExpanderResult {
    pub descriptor: ExpanderKind,
    pub set: Option<GroundSet>,
    pub cardinality: u128,
}

impl ExpanderResult {
    fn from_set(descriptor: ExpanderKind, set: GroundSet) -> Self {
        let cardinality = set.len() as u128;
        ExpanderResult {
            descriptor,
            set: Some(set),
            cardinality,
        }
    }
}

/// `A (A ± a)` for a fixed pin `a`.
pub fn pinned_product(a: &GroundSet, pin: &Rational, sign: ShiftSign) -> ExpanderResult {
    let shifted = match sign {
        ShiftSign::Plus => a.translate(pin),
        ShiftSign::Minus => a.translate(&(-pin.clone())),
    };
    let set = a.product_set(&shifted);
    ExpanderResult::from_set(
        ExpanderKind::PinnedProduct {
            pin: format_rational(pin),
            sign,
        },
        set,
    )
}

/// `A(A+A)` or `A(A-A)`.
pub fn composite_expander(a: &GroundSet, inner: InnerOp) -> ExpanderResult {
    let (kind, inner_set) = match inner {
        InnerOp::Sum => (ExpanderKind::ProductOfSums, a.sumset(a)),
        InnerOp::Difference => (ExpanderKind::ProductOfDifferences, a.difference_set(a)),
    };
    ExpanderResult::from_set(kind, a.product_set(&inner_set))
}

/// Cardinality of `{(a1+a2+a3+a4)^2 + log a5 : ai in A}` for positive `A`.
///
/// For positive rationals, `s^2 + log a = s'^2 + log a'` forces `a = a'`
/// (otherwise `log(a'/a)` would be a nonzero rational, impossible for a
/// rational `a'/a != 1`) and then `s^2 = s'^2`. Since 4A is positive, the
/// squaring is injective and the image size is `|squares(4A)| * |A|`.
pub fn five_var_expander_size(a: &GroundSet) -> Result<u128> {
    if !a.all_positive() {
        return Err(Error::NonPositiveElement);
    }
    let four_fold = a.iterated_sumset(4)?;
    let squares: BTreeSet<Rational> = four_fold.iter().map(|s| s * s).collect();
    Ok(squares.len() as u128 * a.len() as u128)
}

/// Float cross-check of [`five_var_expander_size`] by direct enumeration of
/// all |A|^5 tuples, restricted to |A| <= 12. Values closer than the given
/// separation tolerance that are not exactly equal are flagged as an error,
/// never merged.
pub fn five_var_float_check(a: &GroundSet, tolerance: f64) -> Result<u128> {
    if !a.all_positive() {
        return Err(Error::NonPositiveElement);
    }
    if a.len() > 12 {
        return Err(Error::InvalidParameter(
            "float cross-check is limited to |A| <= 12".into(),
        ));
    }
    let vals: Vec<f64> = a.iter().map(crate::arith::to_f64).collect();
    let n = vals.len();
    // Exact keys travel with the float values so that exact duplicates are
    // distinguished from genuine near-collisions.
    let mut entries: Vec<(f64, Rational, Rational)> = Vec::with_capacity(n.pow(5));
    for i1 in 0..n {
        for i2 in 0..n {
            for i3 in 0..n {
                for i4 in 0..n {
                    let s = &a.elems()[i1] + &a.elems()[i2] + &a.elems()[i3] + &a.elems()[i4];
                    let s2 = &s * &s;
                    let sf = vals[i1] + vals[i2] + vals[i3] + vals[i4];
                    for (v5, e5) in vals.iter().zip(a.elems()) {
                        let v = sf * sf + v5.ln();
                        entries.push((v, s2.clone(), e5.clone()));
                    }
                }
            }
        }
    }
    entries.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut distinct: u128 = 1;
    for w in entries.windows(2) {
        let same_key = w[0].1 == w[1].1 && w[0].2 == w[1].2;
        if same_key {
            continue;
        }
        if (w[1].0 - w[0].0).abs() < tolerance {
            return Err(Error::FloatSeparation(w[0].0, w[1].0));
        }
        distinct += 1;
    }
    Ok(distinct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_i64};

    #[test]
    fn make_set_dedups_and_reports() {
        let (s, removed) = GroundSet::from_values(vec![rat_i64(3), rat_i64(1), rat_i64(2), rat_i64(2)]).unwrap();
        assert_eq!(s.elems(), &[rat_i64(1), rat_i64(2), rat_i64(3)]);
        assert_eq!(removed, 1);

        let (s, removed) = GroundSet::from_values(vec![rat_i64(5)]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(removed, 0);

        // 1/2 and 2/4 normalize to the same element
        let (s, removed) = GroundSet::from_values(vec![rat(1, 2), rat(2, 4)]).unwrap();
        assert_eq!(s.elems(), &[rat(1, 2)]);
        assert_eq!(removed, 1);

        assert!(matches!(GroundSet::from_values(vec![]), Err(Error::EmptySet)));
    }

    #[test]
    fn sumset_and_product_set() {
        let a = GroundSet::from_ints(&[1, 2, 3]);
        assert_eq!(a.sumset(&a).elems(), GroundSet::from_ints(&[2, 3, 4, 5, 6]).elems());
        assert_eq!(
            a.product_set(&a).elems(),
            GroundSet::from_ints(&[1, 2, 3, 4, 6, 9]).elems()
        );
        let single = GroundSet::from_ints(&[7]);
        assert_eq!(single.difference_set(&single).elems(), &[rat_i64(0)]);
    }

    #[test]
    fn ratio_set_rejects_zero_denominator() {
        let a = GroundSet::from_ints(&[1, 2]);
        let z = GroundSet::from_ints(&[0, 1]);
        assert!(matches!(a.ratio_set(&z), Err(Error::DivisionByZero)));
        assert_eq!(a.ratio_set(&a).unwrap().len(), 3);
    }

    #[test]
    fn translate_dilate() {
        let a = GroundSet::from_ints(&[1, 2]);
        assert_eq!(a.translate(&rat_i64(3)).elems(), GroundSet::from_ints(&[4, 5]).elems());
        let b = GroundSet::from_ints(&[1, 2, 4]);
        assert_eq!(
            b.dilate(&rat(1, 2)).unwrap().elems(),
            &[rat(1, 2), rat_i64(1), rat_i64(2)]
        );
        assert_eq!(b.dilate(&rat_i64(1)).unwrap(), b);
        assert!(matches!(b.dilate(&rat_i64(0)), Err(Error::ZeroDilation)));
        // negative dilation keeps sortedness
        let d = b.dilate(&rat_i64(-1)).unwrap();
        assert_eq!(d.elems(), &[rat_i64(-4), rat_i64(-2), rat_i64(-1)]);
    }

    #[test]
    fn iterated_sumsets() {
        let a = GroundSet::from_ints(&[1, 2]);
        assert_eq!(
            a.iterated_sumset(4).unwrap().elems(),
            GroundSet::from_ints(&[4, 5, 6, 7, 8]).elems()
        );
        assert_eq!(a.iterated_sumset(1).unwrap(), a);
        let b = GroundSet::from_ints(&[0, 1]);
        assert_eq!(
            b.iterated_sumset(2).unwrap().elems(),
            GroundSet::from_ints(&[0, 1, 2]).elems()
        );
        assert!(a.iterated_sumset(0).is_err());
    }

    #[test]
    fn pinned_products() {
        let a = GroundSet::from_ints(&[1, 2, 3]);
        let r = pinned_product(&a, &rat_i64(1), ShiftSign::Plus);
        assert_eq!(r.cardinality, 7);
        assert_eq!(
            r.set.unwrap().elems(),
            GroundSet::from_ints(&[2, 3, 4, 6, 8, 9, 12]).elems()
        );

        let one = GroundSet::from_ints(&[1]);
        let r = pinned_product(&one, &rat_i64(0), ShiftSign::Plus);
        assert_eq!(r.cardinality, 1);

        let b = GroundSet::from_ints(&[1, 2]);
        let r = pinned_product(&b, &rat_i64(1), ShiftSign::Minus);
        assert_eq!(r.cardinality, 3);
        assert_eq!(r.set.unwrap().elems(), GroundSet::from_ints(&[0, 1, 2]).elems());
    }

    #[test]
    fn pinned_product_at_zero_is_product_set() {
        let a = GroundSet::from_ints(&[2, 3, 5, 7]);
        let r = pinned_product(&a, &rat_i64(0), ShiftSign::Plus);
        assert_eq!(r.cardinality as usize, a.product_set(&a).len());
    }

    #[test]
    fn composite_expanders() {
        let a = GroundSet::from_ints(&[1, 2]);
        let d = composite_expander(&a, InnerOp::Difference);
        assert_eq!(d.cardinality, 5);
        assert_eq!(
            d.set.unwrap().elems(),
            GroundSet::from_ints(&[-2, -1, 0, 1, 2]).elems()
        );
        let s = composite_expander(&a, InnerOp::Sum);
        assert_eq!(s.cardinality, 5);
        assert_eq!(
            s.set.unwrap().elems(),
            GroundSet::from_ints(&[2, 3, 4, 6, 8]).elems()
        );
        let c = GroundSet::from_ints(&[3]);
        let r = composite_expander(&c, InnerOp::Sum);
        assert_eq!(r.cardinality, 1);
        assert_eq!(r.set.unwrap().elems(), &[rat_i64(18)]);
    }

    #[test]
    fn five_var_sizes() {
        assert_eq!(five_var_expander_size(&GroundSet::from_ints(&[1, 2])).unwrap(), 10);
        assert_eq!(
            five_var_expander_size(&GroundSet::from_ints(&[1, 2, 3])).unwrap(),
            27
        );
        assert_eq!(five_var_expander_size(&GroundSet::from_ints(&[5])).unwrap(), 1);
        assert!(matches!(
            five_var_expander_size(&GroundSet::from_ints(&[-1, 2])),
            Err(Error::NonPositiveElement)
        ));
    }

    #[test]
    fn five_var_float_flags_near_collisions() {
        // 1 and 1 + 1e-10 push image values within 1e-10 of each other;
        // the cross-check must flag them rather than silently merge.
        let close = Rational::new(10_000_000_001i64.into(), 10_000_000_000i64.into());
        let a = GroundSet::new(vec![rat_i64(1), close]).unwrap();
        assert!(matches!(
            five_var_float_check(&a, 1e-9),
            Err(Error::FloatSeparation(..))
        ));
        // the exact count is unaffected
        assert_eq!(five_var_expander_size(&a).unwrap(), 10);
    }

    #[test]
    fn five_var_float_agreement() {
        for set in [
            GroundSet::from_ints(&[1, 2]),
            GroundSet::from_ints(&[1, 2, 3]),
            GroundSet::from_ints(&[1, 3, 9]),
            GroundSet::new(vec![rat(1, 2), rat(3, 2), rat_i64(2), rat_i64(5)]).unwrap(),
        ] {
            let exact = five_var_expander_size(&set).unwrap();
            let float = five_var_float_check(&set, 1e-9).unwrap();
            assert_eq!(exact, float, "disagreement on {:?}", set.to_strings());
        }
    }
}
