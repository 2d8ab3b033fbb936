//! Incidence-flavored counting: collinear triples in planar point sets and
//! distance-quadruple counts driven by histogram self-convolution.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::setcore::GroundSet;

/// Deduplicated set of exact rational points in the plane.
#[derive(Debug, Clone)]
pub struct PlanarPointSet {
    points: Vec<(Rational, Rational)>,
}

impl PlanarPointSet {
    pub fn new(mut points: Vec<(Rational, Rational)>) -> Self {
        points.sort();
        points.dedup();
        PlanarPointSet { points }
    }

    /// The grid A x A.
    pub fn grid(a: &GroundSet) -> Self {
        let mut points = Vec::with_capacity(a.len() * a.len());
        for x in a.iter() {
            for y in a.iter() {
                points.push((x.clone(), y.clone()));
            }
        }
        PlanarPointSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }
}

/// Exact slope of the line through two distinct points, with a
/// distinguished vertical class. Never a float.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum SlopeKey {
    Vertical,
    Slope(Rational),
}

fn slope(p: &(Rational, Rational), q: &(Rational, Rational)) -> SlopeKey {
    let dx = &q.0 - &p.0;
    if dx.is_zero() {
        SlopeKey::Vertical
    } else {
        SlopeKey::Slope((&q.1 - &p.1) / dx)
    }
}

/// Number of ordered triples of pairwise-distinct collinear points.
///
/// For each anchor p the remaining points are grouped by the exact slope of
/// the line through p; a direction class of size m contributes m(m-1)
/// ordered pairs (q, r), and (p, q, r) ranges over exactly the ordered
/// collinear triples. The triple-loop oracle in the tests pins this
/// convention (24 ordered triples per 4 collinear points, 48 on the 3x3
/// grid).
pub fn collinear_triples(p: &PlanarPointSet) -> u64 {
    let pts = p.points();
    let mut total: u64 = 0;
    for anchor in pts {
        let mut classes: BTreeMap<SlopeKey, u64> = BTreeMap::new();
        for other in pts {
            if other == anchor {
                continue;
            }
            *classes.entry(slope(anchor, other)).or_insert(0) += 1;
        }
        for m in classes.values() {
            total += m * (m - 1);
        }
    }
    total
}

/// [`collinear_triples`] on the grid A x A.
pub fn grid_collinear_triples(a: &GroundSet) -> u64 {
    collinear_triples(&PlanarPointSet::grid(a))
}

/// Number of 8-tuples from A with
/// (a1-a2)^2 + (a3-a4)^2 = (a5-a6)^2 + (a7-a8)^2,
/// computed as the energy of the self-convolution of the squared-difference
/// histogram.
pub fn gk_distance_quadruples(a: &GroundSet) -> u128 {
    let sq = squared_difference_histogram(a);
    let vals: Vec<(&Rational, u128)> = sq.iter().map(|(v, &c)| (v, c as u128)).collect();
    let mut pair_sums: BTreeMap<Rational, u128> = BTreeMap::new();
    for (i, (u, cu)) in vals.iter().enumerate() {
        for (v, cv) in &vals[i..] {
            let weight = if *u == *v { cu * cv } else { 2 * cu * cv };
            *pair_sums.entry(*u + *v).or_insert(0) += weight;
        }
    }
    let n = a.len() as u128;
    debug_assert_eq!(pair_sums.values().sum::<u128>(), n.pow(4));
    pair_sums.values().map(|&c| c * c).sum()
}

fn squared_difference_histogram(a: &GroundSet) -> BTreeMap<Rational, u64> {
    let mut h: BTreeMap<Rational, u64> = BTreeMap::new();
    for x in a.iter() {
        for y in a.iter() {
            let d = x - y;
            *h.entry(&d * &d).or_insert(0) += 1;
        }
    }
    h
}

/// Brute count of the literal reading of the distance-quadruple equation,
/// (a1-a2)^2 + (a2-a4)^4 = (a5-a6)^2 + (a7-a8)^2, in which a3 is free.
/// The quartic term is almost surely a typo for the squared form used by
/// [`gk_distance_quadruples`]; this variant exists so the discrepancy can
/// be inspected rather than guessed away. Restricted to |A| <= 4.
pub fn gk_distance_quadruples_literal(a: &GroundSet) -> Result<u128> {
    if a.len() > 4 {
        return Err(Error::InvalidParameter(
            "literal-equation count is limited to |A| <= 4".into(),
        ));
    }
    let e = a.elems();
    let n = e.len();
    let mut lhs: BTreeMap<Rational, u64> = BTreeMap::new();
    for a1 in 0..n {
        for a2 in 0..n {
            for a4 in 0..n {
                let d1 = &e[a1] - &e[a2];
                let d2 = &e[a2] - &e[a4];
                let d2sq = &d2 * &d2;
                *lhs.entry(&d1 * &d1 + &d2sq * &d2sq).or_insert(0) += 1;
            }
        }
    }
    let mut rhs: BTreeMap<Rational, u64> = BTreeMap::new();
    for a5 in 0..n {
        for a6 in 0..n {
            for a7 in 0..n {
                for a8 in 0..n {
                    let d1 = &e[a5] - &e[a6];
                    let d2 = &e[a7] - &e[a8];
                    *rhs.entry(&d1 * &d1 + &d2 * &d2).or_insert(0) += 1;
                }
            }
        }
    }
    let mut total: u128 = 0;
    for (v, cl) in &lhs {
        if let Some(cr) = rhs.get(v) {
            total += (*cl as u128) * (*cr as u128);
        }
    }
    // a3 ranges freely over A.
    Ok(total * n as u128)
}
