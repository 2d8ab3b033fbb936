//! Constructive refinement machinery: dyadic pigeonholing of the ratio
//! histogram with exact certificates, witness upper bounds for the
//! Szemerédi–Trotter parameter d_*, and the dilation-overlap search.
//!
//! d_*(A) itself minimizes over all nonempty Q, R outside zero and is not a
//! finite search; everything here produces *witnesses* — concrete
//! (t, Q, R) triples whose three defining constraints are checked on
//! construction — and certificates whose stated inequalities carry
//! explicitly derived constants and re-verify from scratch.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::arith::{format_rational, rat_usize, to_f64, Rational};
use crate::energy::{RepHistogram, RepKind};
use crate::error::{Error, Result};
use crate::hp::log2_directed;
use crate::setcore::GroundSet;

/// One certified inequality: exact rational sides and the verdict.
#[derive(Debug, Clone)]
pub struct Assertion {
    pub name: &'static str,
    pub lhs: Rational,
    pub rhs: Rational,
    pub relation: Relation,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// lhs >= rhs
    Ge,
    /// lhs < rhs
    Lt,
}

impl Assertion {
    fn check(name: &'static str, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        let satisfied = match relation {
            Relation::Ge => lhs >= rhs,
            Relation::Lt => lhs < rhs,
        };
        Assertion {
            name,
            lhs,
            rhs,
            relation,
            satisfied,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "name": self.name,
            "lhs": { "num": self.lhs.numer().to_string(), "den": self.lhs.denom().to_string() },
            "relation": match self.relation { Relation::Ge => ">=", Relation::Lt => "<" },
            "rhs": { "num": self.rhs.numer().to_string(), "den": self.rhs.denom().to_string() },
            "satisfied": self.satisfied,
        })
    }
}

/// Which refinement produced a certificate; fixes how it re-verifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    PopularRatioClass,
    EnergyRefinement,
    DoublePigeonhole,
}

/// Output of a pigeonholing refinement. Stage 1 is always present: a class
/// P of popular ratios and its level Δ with Δ <= r(x) < 2Δ on P. Stage 2,
/// when applicable, is a subset A' of A with its own level or threshold.
#[derive(Debug, Clone)]
pub struct RefinementCertificate {
    pub kind: CertificateKind,
    /// P, sorted.
    pub ratio_class: Vec<Rational>,
    /// Δ.
    pub level: Rational,
    pub refined: Option<RefinedStage>,
    pub assertions: Vec<Assertion>,
}

#[derive(Debug, Clone)]
pub struct RefinedStage {
    pub subset: GroundSet,
    /// The qualification threshold (energy refinement) or the pigeonholed
    /// pinned level t (double pigeonholing).
    pub threshold: Rational,
}

impl RefinementCertificate {
    pub fn all_satisfied(&self) -> bool {
        self.assertions.iter().all(|a| a.satisfied)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": match self.kind {
                CertificateKind::PopularRatioClass => "popular-ratio-class",
                CertificateKind::EnergyRefinement => "energy-refinement",
                CertificateKind::DoublePigeonhole => "double-pigeonhole",
            },
            "ratio_class": self.ratio_class.iter().map(format_rational).collect::<Vec<_>>(),
            "level": format_rational(&self.level),
            "refined": self.refined.as_ref().map(|r| json!({
                "subset": r.subset.to_strings(),
                "threshold": format_rational(&r.threshold),
            })),
            "assertions": self.assertions.iter().map(|a| a.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// A certified upper bound on d_*(target): the triple (t, Q, R) together
/// with the evaluated value |Q|^2 |R|^2 / (|target| t^3). All three
/// defining constraints are checked on construction.
#[derive(Debug, Clone)]
pub struct DStarWitness {
    pub t: Rational,
    pub q: GroundSet,
    pub r: GroundSet,
    pub target: GroundSet,
    pub value: Rational,
}

impl DStarWitness {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "t": format_rational(&self.t),
            "q": self.q.to_strings(),
            "r": self.r.to_strings(),
            "target_size": self.target.len(),
            "value": format_rational(&self.value),
        })
    }
}

/// A dilation z with its overlap sum over the ratio histogram.
#[derive(Debug, Clone)]
pub struct DilationChoice {
    pub z: Rational,
    /// f(z) = sum over x in zA of r_{A/A}(x).
    pub overlap: BigInt,
    /// Whether f(z) >= Ex(A) / (|A| log2 |A|) holds with constant 1
    /// (outward-rounded; None for singletons where the log vanishes).
    pub bound_satisfied: Option<bool>,
    /// f(z) |A| log2 |A| / Ex(A); the candidate space is heuristic, so the
    /// ratio is reported rather than asserted.
    pub normalized_ratio: Option<f64>,
}

/// Candidate spaces for the dilation search.
#[derive(Debug, Clone)]
pub enum DilationCandidates {
    /// A^{-1} plus the identity; |A| + 1 candidates.
    InverseElements,
    /// Exhaustive mode over (A/A) A^{-1}.
    RatioTimesInverse,
    Custom(Vec<Rational>),
}

/// Validate and evaluate a d_* witness. Violated constraints are reported
/// by name: `positive-t`, `zero-element`, `size`, `pointwise-t`.
pub fn witness_value(
    target: &GroundSet,
    q: &GroundSet,
    r: &GroundSet,
    t: &Rational,
) -> Result<DStarWitness> {
    if !t.is_positive() {
        return Err(Error::InvalidWitness("positive-t"));
    }
    if q.contains_zero() || r.contains_zero() {
        return Err(Error::InvalidWitness("zero-element"));
    }
    if q.len().max(r.len()) < target.len() {
        return Err(Error::InvalidWitness("size"));
    }
    for a in target.iter() {
        if Rational::from_integer(BigInt::from(pointwise_overlap(a, q, r))) < *t {
            return Err(Error::InvalidWitness("pointwise-t"));
        }
    }
    let qq = rat_usize(q.len() * q.len());
    let rr = rat_usize(r.len() * r.len());
    let value = qq * rr / (rat_usize(target.len()) * t * t * t);
    Ok(DStarWitness {
        t: t.clone(),
        q: q.clone(),
        r: r.clone(),
        target: target.clone(),
        value,
    })
}

/// |Q ∩ a R^{-1}|, iterating over the smaller of Q and R.
fn pointwise_overlap(a: &Rational, q: &GroundSet, r: &GroundSet) -> usize {
    if q.len() <= r.len() {
        q.iter()
            .filter(|qv| !qv.is_zero() && r.contains(&(a / *qv)))
            .count()
    } else {
        r.iter()
            .filter(|rv| !rv.is_zero() && q.contains(&(a / *rv)))
            .count()
    }
}

/// Everything stage 1 of a refinement produces.
struct Stage1 {
    class: Vec<Rational>,
    class_set: BTreeSet<Rational>,
    level: Rational,
    assertions: Vec<Assertion>,
}

/// Dyadic pigeonholing of the ratio histogram: survivors above the
/// threshold |A|/(2K) carry at least half the multiplicative energy, and
/// among at most log2(2K) + 1 dyadic classes one carries the stated share.
fn stage1(a: &GroundSet) -> Result<Stage1> {
    if a.contains_zero() {
        return Err(Error::ZeroElement);
    }
    if a.len() < 2 {
        return Err(Error::TooSmall);
    }
    let h = RepHistogram::build(a, a, RepKind::Ratio)?;
    let energy = h.energy();
    let n = a.len();
    let n3 = rat_usize(n * n * n);
    let k_param = &n3 / Rational::from_integer(energy.clone());
    // Δ_min = |A| / (2K) = Ex / (2 |A|^2)
    let delta_min = rat_usize(n) / (rat_usize(2) * &k_param);

    // group survivors into dyadic classes [2^j, 2^{j+1})
    let mut classes: Vec<(u32, u128, Vec<Rational>)> = Vec::new();
    for (x, c) in h.iter() {
        if Rational::from_integer(c.into()) < delta_min {
            continue;
        }
        let j = 63 - c.leading_zeros();
        let mass = (c as u128) * (c as u128);
        match classes.iter_mut().find(|(cj, _, _)| *cj == j) {
            Some((_, m, members)) => {
                *m += mass;
                members.push(x.clone());
            }
            None => classes.push((j, mass, vec![x.clone()])),
        }
    }
    // heaviest class; ties broken toward the larger level
    let (j, mass, mut members) = classes
        .into_iter()
        .max_by_key(|(j, m, _)| (*m, *j))
        .expect("r(1) = |A| always survives the threshold");
    members.sort();

    let two_pow_j = Rational::from_integer(BigInt::one() << j);
    // Δ only needs Δ <= r < 2Δ on the class and Δ >= |A|/2K; the class
    // base alone can sit just under the threshold, so take the max.
    let level = two_pow_j.max(delta_min.clone());

    let r_min = members
        .iter()
        .map(|x| h.count(x))
        .min()
        .map(|c| Rational::from_integer(c.into()))
        .unwrap();
    let r_max = members
        .iter()
        .map(|x| h.count(x))
        .max()
        .map(|c| Rational::from_integer(c.into()))
        .unwrap();

    // Sum over P of r^2 >= Ex / (2 (log2(2K) + 1)): survivors keep at least
    // Ex/2 because the discarded ratios contribute under Δ_min * |A|^2 =
    // Ex/2, and the survivors split into at most log2(2K) + 1 classes. The
    // log is rounded down, pushing the right side up: the check cannot pass
    // by rounding.
    let two_k = rat_usize(2) * &k_param;
    let log_lo = log2_directed(&two_k).lo().clone();
    let mass_rhs = Rational::from_integer(energy.clone())
        / (rat_usize(2) * (log_lo + Rational::one()));

    let assertions = vec![
        Assertion::check("level-lower-bound", level.clone(), Relation::Ge, delta_min),
        Assertion::check("class-band-lower", r_min, Relation::Ge, level.clone()),
        Assertion::check(
            "class-band-upper",
            r_max,
            Relation::Lt,
            rat_usize(2) * &level,
        ),
        Assertion::check(
            "class-energy-mass",
            Rational::from_integer(BigInt::from(mass)),
            Relation::Ge,
            mass_rhs,
        ),
    ];

    let class_set: BTreeSet<Rational> = members.iter().cloned().collect();
    Ok(Stage1 {
        class: members,
        class_set,
        level,
        assertions,
    })
}

fn certify(
    kind: CertificateKind,
    s1: Stage1,
    refined: Option<RefinedStage>,
    extra: Vec<Assertion>,
) -> Result<RefinementCertificate> {
    let mut assertions = s1.assertions;
    assertions.extend(extra);
    let cert = RefinementCertificate {
        kind,
        ratio_class: s1.class,
        level: s1.level,
        refined,
        assertions,
    };
    if let Some(bad) = cert.assertions.iter().find(|a| !a.satisfied) {
        return Err(Error::CertificateInvalid(format!(
            "assertion `{}` failed: {} vs {}",
            bad.name,
            format_rational(&bad.lhs),
            format_rational(&bad.rhs)
        )));
    }
    Ok(cert)
}

/// Stage-1-only certificate: the popular dyadic ratio class P with its
/// level Δ and the derived energy-mass bound.
pub fn popular_ratio_class(a: &GroundSet) -> Result<RefinementCertificate> {
    let s1 = stage1(a)?;
    certify(CertificateKind::PopularRatioClass, s1, None, vec![])
}

/// |P ∩ x A^{-1}| = #{a in A : x/a in P}.
fn class_overlap(x: &Rational, a: &GroundSet, class: &BTreeSet<Rational>) -> usize {
    a.iter().filter(|e| class.contains(&(x / *e))).count()
}

/// Popularity refinement on top of stage 1: keep the elements of A that
/// see at least Δ|P|/(4|A|) of the class, so that the kept subset A'
/// retains half of the class overlap and, by Cauchy-Schwarz, energy
/// at least Δ^2 |P| / 4.
pub fn refine_energy_subset(a: &GroundSet) -> Result<RefinementCertificate> {
    let s1 = stage1(a)?;
    let class_size = rat_usize(s1.class.len());
    let threshold = &s1.level * &class_size / rat_usize(4 * a.len());

    let kept: Vec<Rational> = a
        .iter()
        .filter(|x| {
            Rational::from_integer(BigInt::from(class_overlap(x, a, &s1.class_set))) >= threshold
        })
        .cloned()
        .collect();
    if kept.is_empty() {
        return Err(Error::CertificateInvalid(
            "energy refinement kept no elements".into(),
        ));
    }
    let subset = GroundSet::new(kept)?;

    // sum over x in P of |A' ∩ x A'|
    let mut overlap_sum: u64 = 0;
    for x in &s1.class {
        overlap_sum += subset
            .iter()
            .filter(|e| subset.contains(&(*e * x)))
            .count() as u64;
    }
    let refined_energy = RepHistogram::build(&subset, &subset, RepKind::Ratio)?.energy();

    let extra = vec![
        Assertion::check(
            "refined-overlap-sum",
            Rational::from_integer(overlap_sum.into()),
            Relation::Ge,
            &s1.level * &class_size / rat_usize(2),
        ),
        Assertion::check(
            "refined-energy",
            Rational::from_integer(refined_energy),
            Relation::Ge,
            &s1.level * &s1.level * &class_size / rat_usize(4),
        ),
    ];
    certify(
        CertificateKind::EnergyRefinement,
        s1,
        Some(RefinedStage { subset, threshold }),
        extra,
    )
}

/// |A ∩ a P| = #{b in A : b/a in P}.
fn pinned_class_count(shift: &Rational, a: &GroundSet, class: &BTreeSet<Rational>) -> u64 {
    a.iter().filter(|b| class.contains(&(*b / shift))).count() as u64
}

/// Second dyadic pigeonholing over the pinned counts |A ∩ aP|, yielding a
/// subset A', a level t with t <= |A ∩ aP| < 2t on A', and the witness
/// (t, Q = A, R = P^{-1}) for d_*(A') of value |A|^2 |P|^2 / (|A'| t^3).
pub fn double_pigeonhole(a: &GroundSet) -> Result<(RefinementCertificate, DStarWitness)> {
    let s1 = stage1(a)?;
    let counts: Vec<(Rational, u64)> = a
        .iter()
        .map(|e| (e.clone(), pinned_class_count(e, a, &s1.class_set)))
        .collect();

    let mut classes: Vec<(u32, u128, Vec<Rational>)> = Vec::new();
    for (e, g) in &counts {
        if *g == 0 {
            continue;
        }
        let j = 63 - g.leading_zeros();
        match classes.iter_mut().find(|(cj, _, _)| *cj == j) {
            Some((_, m, members)) => {
                *m += *g as u128;
                members.push(e.clone());
            }
            None => classes.push((j, *g as u128, vec![e.clone()])),
        }
    }
    let (_, _, members) = classes
        .into_iter()
        .max_by_key(|(j, m, _)| (*m, *j))
        .expect("the class sum is positive, so some pinned count is nonzero");
    let subset = GroundSet::new(members)?;
    let t_int = subset
        .iter()
        .map(|e| pinned_class_count(e, a, &s1.class_set))
        .min()
        .unwrap();
    let g_max = subset
        .iter()
        .map(|e| pinned_class_count(e, a, &s1.class_set))
        .max()
        .unwrap();
    let t = Rational::from_integer(t_int.into());

    // |A'| t >= Δ|P| / (2 (log2|A| + 1)): the pinned counts live in
    // [1, |A|], so at most log2|A| + 1 dyadic classes split a total of at
    // least Δ|P|, and the chosen class is bounded by 2 t |A'| from above.
    let log_lo = log2_directed(&rat_usize(a.len())).lo().clone();
    let mass_rhs = &s1.level * rat_usize(s1.class.len())
        / (rat_usize(2) * (log_lo + Rational::one()));

    let extra = vec![
        Assertion::check(
            "pinned-band-lower",
            Rational::from_integer(t_int.into()),
            Relation::Ge,
            t.clone(),
        ),
        Assertion::check(
            "pinned-band-upper",
            Rational::from_integer(g_max.into()),
            Relation::Lt,
            rat_usize(2) * &t,
        ),
        Assertion::check(
            "pinned-mass",
            rat_usize(subset.len()) * &t,
            Relation::Ge,
            mass_rhs,
        ),
    ];

    let r_inv = GroundSet::new(s1.class.iter().map(|x| x.recip()).collect())?;
    let witness = witness_value(&subset, a, &r_inv, &t)?;
    let cert = certify(
        CertificateKind::DoublePigeonhole,
        s1,
        Some(RefinedStage {
            subset,
            threshold: t,
        }),
        extra,
    )?;
    Ok((cert, witness))
}

/// Best witness upper bound on d_*(A) from a candidate portfolio: the
/// d(A)-style recipes with C in {A, {1}, P} (take t = |C|, Q = AC,
/// R = C^{-1}) and the double-pigeonhole witness. Never an exact d_*.
pub fn dstar_upper_bound(a: &GroundSet) -> Result<DStarWitness> {
    if a.contains_zero() {
        return Err(Error::ZeroElement);
    }
    let mut best: Option<DStarWitness> = None;
    let mut consider = |w: DStarWitness| {
        if best.as_ref().is_none_or(|b| w.value < b.value) {
            best = Some(w);
        }
    };

    // C = {1}: t = 1, Q = A, R = {1}; value |A|.
    let one_set = GroundSet::singleton(Rational::one());
    consider(witness_value(a, a, &one_set, &Rational::one())?);

    // C = A: t = |A|, Q = AA, R = A^{-1}; value |AA|^2 / |A|^2.
    let aa = a.product_set(a);
    let a_inv = a.inverses()?;
    consider(witness_value(a, &aa, &a_inv, &rat_usize(a.len()))?);

    if a.len() >= 2 {
        // C = P from the popular ratio class, cost-capped: the value only
        // helps when P is small, which is also when AP is cheap.
        let s1 = stage1(a)?;
        let p_inv = GroundSet::new(s1.class.iter().map(|x| x.recip()).collect())?;
        if a.len() * s1.class.len() <= 400_000 {
            let p_set = GroundSet::new(s1.class.clone())?;
            let ap = a.product_set(&p_set);
            consider(witness_value(a, &ap, &p_inv, &rat_usize(s1.class.len()))?);
        }
        // double-pigeonhole-shaped witness (t, Q = A, R = P^{-1}) aimed at
        // A itself; valid only when every element meets the class
        let t_all = a
            .iter()
            .map(|e| pinned_class_count(e, a, &s1.class_set))
            .min()
            .unwrap();
        if t_all >= 1 {
            consider(witness_value(
                a,
                a,
                &p_inv,
                &Rational::from_integer(t_all.into()),
            )?);
        }
    }

    Ok(best.unwrap())
}

/// Maximize f(z) = sum over x in zA of r_{A/A}(x) across the candidate
/// space, reporting the overlap and how it compares to Ex(A)/(|A| log2|A|).
pub fn best_dilation(a: &GroundSet, candidates: &DilationCandidates) -> Result<DilationChoice> {
    if a.contains_zero() {
        return Err(Error::ZeroElement);
    }
    let h = RepHistogram::build(a, a, RepKind::Ratio)?;
    let cands: Vec<Rational> = match candidates {
        DilationCandidates::InverseElements => {
            let mut v: Vec<Rational> = a.iter().map(|e| e.recip()).collect();
            v.sort();
            if !v.contains(&Rational::one()) {
                v.push(Rational::one());
            }
            v
        }
        DilationCandidates::RatioTimesInverse => {
            let ratios = a.ratio_set(a)?;
            let mut set: BTreeSet<Rational> = BTreeSet::new();
            for x in ratios.iter() {
                for e in a.iter() {
                    set.insert(x / e);
                }
            }
            set.into_iter().collect()
        }
        DilationCandidates::Custom(list) => {
            if list.iter().any(|z| z.is_zero()) {
                return Err(Error::InvalidParameter(
                    "dilation candidates must be nonzero".into(),
                ));
            }
            let mut v = list.clone();
            v.sort();
            v.dedup();
            if v.is_empty() {
                return Err(Error::InvalidParameter("empty candidate list".into()));
            }
            v
        }
    };

    let mut best_z = cands[0].clone();
    let mut best_f: u128 = 0;
    for (i, z) in cands.iter().enumerate() {
        let f: u128 = a.iter().map(|e| h.count(&(z * e)) as u128).sum();
        if i == 0 || f > best_f {
            best_f = f;
            best_z = z.clone();
        }
    }

    let overlap = BigInt::from(best_f);
    let (bound_satisfied, normalized_ratio) = if a.len() >= 2 {
        let n = rat_usize(a.len());
        let log_iv = log2_directed(&n);
        let energy = Rational::from_integer(h.energy());
        // outward: require f(z) to clear the upper end of the enclosure
        let bound_hi = &energy / (&n * log_iv.lo().clone());
        let bound_lo = &energy / (&n * log_iv.hi().clone());
        let f_rat = Rational::from_integer(overlap.clone());
        let satisfied = if f_rat >= bound_hi {
            true
        } else if f_rat < bound_lo {
            false
        } else {
            // inside the enclosure: report the conservative verdict
            false
        };
        let ratio = to_f64(&f_rat) * a.len() as f64 * (a.len() as f64).log2() / to_f64(&energy);
        (Some(satisfied), Some(ratio))
    } else {
        (None, None)
    };

    Ok(DilationChoice {
        z: best_z,
        overlap,
        bound_satisfied,
        normalized_ratio,
    })
}

/// Re-verify every assertion of a certificate by independent recomputation
/// from the raw set: ratio multiplicities by direct pair scans, energies by
/// sort-and-run-length, and the derived constants rebuilt with fresh
/// directed logs. Returns the first discrepancy found.
pub fn verify_certificate(a: &GroundSet, cert: &RefinementCertificate) -> Result<()> {
    let fail = |msg: String| Err(Error::CertificateInvalid(msg));
    if a.contains_zero() || a.len() < 2 {
        return fail("certificate target must avoid 0 and have >= 2 elements".into());
    }
    if !cert.all_satisfied() {
        return fail("certificate carries an unsatisfied assertion".into());
    }
    let n = a.len();
    let p_set: BTreeSet<Rational> = cert.ratio_class.iter().cloned().collect();
    if p_set.len() != cert.ratio_class.len() {
        return fail("ratio class contains duplicates".into());
    }

    // independent multiplicities: one pass over ordered pairs
    let mut all_ratios: Vec<Rational> = Vec::with_capacity(n * n);
    let mut class_counts: std::collections::BTreeMap<Rational, u64> = cert
        .ratio_class
        .iter()
        .map(|x| (x.clone(), 0))
        .collect();
    for x in a.iter() {
        for y in a.iter() {
            let v = x / y;
            if let Some(c) = class_counts.get_mut(&v) {
                *c += 1;
            }
            all_ratios.push(v);
        }
    }
    all_ratios.sort();
    let mut energy: u128 = 0;
    let mut run = 1u128;
    for i in 1..all_ratios.len() {
        if all_ratios[i] == all_ratios[i - 1] {
            run += 1;
        } else {
            energy += run * run;
            run = 1;
        }
    }
    energy += run * run;
    let energy = BigInt::from(energy);

    let n3 = rat_usize(n * n * n);
    let k_param = &n3 / Rational::from_integer(energy.clone());
    let delta_min = rat_usize(n) / (rat_usize(2) * &k_param);
    let delta = &cert.level;

    if delta < &delta_min {
        return fail("level below |A|/(2K)".into());
    }
    let mut class_mass: u128 = 0;
    for (x, c) in &class_counts {
        if *c == 0 {
            return fail(format!("class member {} has no representations", x));
        }
        let c_rat = Rational::from_integer((*c).into());
        if &c_rat < delta || c_rat >= rat_usize(2) * delta {
            return fail(format!("class member {} outside [Δ, 2Δ)", x));
        }
        class_mass += (*c as u128) * (*c as u128);
    }
    let two_k = rat_usize(2) * &k_param;
    let mass_rhs = Rational::from_integer(energy.clone())
        / (rat_usize(2) * (log2_directed(&two_k).lo().clone() + Rational::one()));
    if Rational::from_integer(BigInt::from(class_mass)) < mass_rhs {
        return fail("class energy mass below the derived share".into());
    }

    match cert.kind {
        CertificateKind::PopularRatioClass => {}
        CertificateKind::EnergyRefinement => {
            let stage = cert
                .refined
                .as_ref()
                .ok_or_else(|| Error::CertificateInvalid("missing refined stage".into()))?;
            let threshold =
                delta * rat_usize(cert.ratio_class.len()) / rat_usize(4 * n);
            if stage.threshold != threshold {
                return fail("refinement threshold mismatch".into());
            }
            for x in a.iter() {
                let f = Rational::from_integer(BigInt::from(class_overlap(x, a, &p_set)));
                let qualifies = f >= threshold;
                if qualifies != stage.subset.contains(x) {
                    return fail(format!("subset membership wrong at {}", x));
                }
            }
            let sub = &stage.subset;
            if sub.iter().any(|x| !a.contains(x)) {
                return fail("refined subset is not a subset".into());
            }
            let mut overlap_sum: u64 = 0;
            for x in &cert.ratio_class {
                overlap_sum += sub.iter().filter(|e| sub.contains(&(*e * x))).count() as u64;
            }
            if Rational::from_integer(overlap_sum.into())
                < delta * rat_usize(cert.ratio_class.len()) / rat_usize(2)
            {
                return fail("refined overlap sum below Δ|P|/2".into());
            }
            let mut ratios: Vec<Rational> = Vec::with_capacity(sub.len() * sub.len());
            for x in sub.iter() {
                for y in sub.iter() {
                    ratios.push(x / y);
                }
            }
            ratios.sort();
            let mut e2: u128 = 0;
            let mut run = 1u128;
            for i in 1..ratios.len() {
                if ratios[i] == ratios[i - 1] {
                    run += 1;
                } else {
                    e2 += run * run;
                    run = 1;
                }
            }
            e2 += run * run;
            if Rational::from_integer(BigInt::from(e2))
                < delta * delta * rat_usize(cert.ratio_class.len()) / rat_usize(4)
            {
                return fail("refined energy below Δ²|P|/4".into());
            }
        }
        CertificateKind::DoublePigeonhole => {
            let stage = cert
                .refined
                .as_ref()
                .ok_or_else(|| Error::CertificateInvalid("missing refined stage".into()))?;
            let sub = &stage.subset;
            if sub.iter().any(|x| !a.contains(x)) {
                return fail("pinned subset is not a subset".into());
            }
            let t = &stage.threshold;
            for e in sub.iter() {
                let g = Rational::from_integer(pinned_class_count(e, a, &p_set).into());
                if &g < t || g >= rat_usize(2) * t {
                    return fail(format!("pinned count outside [t, 2t) at {}", e));
                }
            }
            let rhs = delta * rat_usize(cert.ratio_class.len())
                / (rat_usize(2) * (log2_directed(&rat_usize(n)).lo().clone() + Rational::one()));
            if rat_usize(sub.len()) * t < rhs {
                return fail("pinned mass below the derived share".into());
            }
        }
    }
    Ok(())
}

/// Re-validate a witness from its stored parts.
pub fn verify_witness(w: &DStarWitness) -> Result<()> {
    let fresh = witness_value(&w.target, &w.q, &w.r, &w.t)?;
    if fresh.value != w.value {
        return Err(Error::InvalidWitness("value"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_i64};

    #[test]
    fn witness_desk_example() {
        // target {1,2,4}, Q = AA, R = A^{-1}, t = 3 -> 25/9
        let a = GroundSet::from_ints(&[1, 2, 4]);
        let q = a.product_set(&a);
        assert_eq!(q.len(), 5);
        let r = a.inverses().unwrap();
        let w = witness_value(&a, &q, &r, &rat_i64(3)).unwrap();
        assert_eq!(w.value, rat(25, 9));
        verify_witness(&w).unwrap();

        // C = {1} specialization: value |A|
        let one = GroundSet::singleton(Rational::one());
        let w = witness_value(&a, &a, &one, &Rational::one()).unwrap();
        assert_eq!(w.value, rat_i64(3));

        // t too large
        assert!(matches!(
            witness_value(&a, &q, &r, &rat_i64(4)),
            Err(Error::InvalidWitness("pointwise-t"))
        ));
        assert!(matches!(
            witness_value(&a, &q, &r, &rat_i64(0)),
            Err(Error::InvalidWitness("positive-t"))
        ));
    }

    #[test]
    fn popular_class_desk_example() {
        // A = {1,2,4}: histogram {1:3, 2:2, 1/2:2, 4:1, 1/4:1}, Ex = 19
        let a = GroundSet::from_ints(&[1, 2, 4]);
        let cert = popular_ratio_class(&a).unwrap();
        assert_eq!(cert.level, rat_i64(2));
        assert_eq!(cert.ratio_class, vec![rat(1, 2), rat_i64(1), rat_i64(2)]);
        assert!(cert.all_satisfied());
        // class mass 4 + 9 + 4 = 17
        let mass = cert
            .assertions
            .iter()
            .find(|x| x.name == "class-energy-mass")
            .unwrap();
        assert_eq!(mass.lhs, rat_i64(17));
        verify_certificate(&a, &cert).unwrap();
    }

    #[test]
    fn popular_class_on_gp4() {
        // GP {1,2,4,8}: the Δ=2 class {1/4, 1/2, 2, 4} with mass 26
        let a = GroundSet::from_ints(&[1, 2, 4, 8]);
        let cert = popular_ratio_class(&a).unwrap();
        assert_eq!(cert.level, rat_i64(2));
        assert_eq!(
            cert.ratio_class,
            vec![rat(1, 4), rat(1, 2), rat_i64(2), rat_i64(4)]
        );
        verify_certificate(&a, &cert).unwrap();
    }

    #[test]
    fn popular_class_on_pair() {
        let a = GroundSet::from_ints(&[1, 2]);
        let cert = popular_ratio_class(&a).unwrap();
        assert!(cert.level == rat_i64(1) || cert.level == rat_i64(2));
        verify_certificate(&a, &cert).unwrap();
    }

    #[test]
    fn popular_class_guards() {
        assert!(matches!(
            popular_ratio_class(&GroundSet::from_ints(&[5])),
            Err(Error::TooSmall)
        ));
        assert!(matches!(
            popular_ratio_class(&GroundSet::from_ints(&[0, 1])),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn energy_refinement_desk_example() {
        // A = {1,2,4}: threshold 1/2, every element qualifies
        let a = GroundSet::from_ints(&[1, 2, 4]);
        let cert = refine_energy_subset(&a).unwrap();
        let stage = cert.refined.as_ref().unwrap();
        assert_eq!(stage.threshold, rat(1, 2));
        assert_eq!(stage.subset, a);
        let overlap = cert
            .assertions
            .iter()
            .find(|x| x.name == "refined-overlap-sum")
            .unwrap();
        assert_eq!(overlap.lhs, rat_i64(7));
        assert_eq!(overlap.rhs, rat_i64(3));
        verify_certificate(&a, &cert).unwrap();
    }

    #[test]
    fn energy_refinement_on_gp_keeps_everything() {
        let a = GroundSet::from_ints(&[1, 2, 4, 8, 16, 32, 64, 128]);
        let cert = refine_energy_subset(&a).unwrap();
        assert_eq!(cert.refined.as_ref().unwrap().subset, a);
        verify_certificate(&a, &cert).unwrap();
    }

    #[test]
    fn double_pigeonhole_desk_example() {
        let a = GroundSet::from_ints(&[1, 2, 4]);
        let (cert, witness) = double_pigeonhole(&a).unwrap();
        let stage = cert.refined.as_ref().unwrap();
        // pinned counts: |A ∩ 1P| = 2, |A ∩ 2P| = 3, |A ∩ 4P| = 2
        assert_eq!(stage.subset, a);
        assert_eq!(stage.threshold, rat_i64(2));
        // |A|^2 |P|^2 / (|A'| t^3) = 9 * 9 / (3 * 8)
        assert_eq!(witness.value, rat(27, 8));
        verify_certificate(&a, &cert).unwrap();
        verify_witness(&witness).unwrap();
    }

    #[test]
    fn double_pigeonhole_gp8_certifies() {
        let a = GroundSet::from_ints(&[1, 2, 4, 8, 16, 32, 64, 128]);
        let (cert, witness) = double_pigeonhole(&a).unwrap();
        verify_certificate(&a, &cert).unwrap();
        verify_witness(&witness).unwrap();
        // comparison against the C=A recipe
        let portfolio = dstar_upper_bound(&a).unwrap();
        assert!(portfolio.value <= witness.value);
    }

    #[test]
    fn dstar_portfolio_bounds() {
        // GP: the C=A recipe gives (2n-1)^2/n^2 < 4
        for n in [2usize, 4, 8, 16, 32] {
            let a = GroundSet::new((0..n).map(|i| rat_i64(1i64 << i)).collect()).unwrap();
            let w = dstar_upper_bound(&a).unwrap();
            assert!(w.value < rat_i64(4), "GP witness value at n={n}");
            verify_witness(&w).unwrap();
        }
        // monotonicity: never worse than the C={1} fallback |A|
        for n in [1usize, 3, 7, 12] {
            let a = GroundSet::new((1..=n).map(|i| rat_i64(i as i64)).collect()).unwrap();
            let w = dstar_upper_bound(&a).unwrap();
            assert!(w.value <= rat_i64(n as i64));
        }
    }

    #[test]
    fn best_dilation_desk_example() {
        let a = GroundSet::from_ints(&[1, 2, 4]);
        let choice = best_dilation(&a, &DilationCandidates::InverseElements).unwrap();
        assert_eq!(choice.z, rat(1, 2));
        assert_eq!(choice.overlap, BigInt::from(7));
        assert_eq!(choice.bound_satisfied, Some(true));

        let single = GroundSet::from_ints(&[5]);
        let choice = best_dilation(&single, &DilationCandidates::InverseElements).unwrap();
        assert_eq!(choice.z, rat(1, 5));
        assert_eq!(choice.overlap, BigInt::one());
        assert_eq!(choice.bound_satisfied, None);

        let pair = GroundSet::from_ints(&[1, 2]);
        let choice = best_dilation(&pair, &DilationCandidates::InverseElements).unwrap();
        assert!(choice.overlap >= BigInt::from(2));
    }

    #[test]
    fn exhaustive_dilation_not_worse() {
        let a = GroundSet::from_ints(&[1, 2, 3, 5, 8]);
        let cheap = best_dilation(&a, &DilationCandidates::InverseElements).unwrap();
        let full = best_dilation(&a, &DilationCandidates::RatioTimesInverse).unwrap();
        assert!(full.overlap >= cheap.overlap);
    }

    #[test]
    fn tampered_certificates_fail_recheck() {
        let a = GroundSet::from_ints(&[1, 2, 4]);
        let mut cert = popular_ratio_class(&a).unwrap();
        cert.level = rat_i64(3);
        assert!(verify_certificate(&a, &cert).is_err());

        let mut cert = refine_energy_subset(&a).unwrap();
        if let Some(stage) = cert.refined.as_mut() {
            stage.subset = GroundSet::from_ints(&[1, 2]);
        }
        assert!(verify_certificate(&a, &cert).is_err());

        let (_, mut witness) = double_pigeonhole(&a).unwrap();
        witness.value = rat_i64(1);
        assert!(verify_witness(&witness).is_err());
    }
}
