//! Deterministic seeded generators for test-set families spanning the
//! structured-to-random spectrum, and a hill-climbing probe for
//! near-extremal sets.
//!
//! Generation is a pure function of (family, n, seed). The generator is
//! ChaCha20 with explicit stream splitting; the algorithm identifier is
//! recorded in every emitted artifact so runs replicate across
//! implementations of the same generator.

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::arith::{parse_rational, rat_usize, to_f64, Rational};
use crate::energy::multiplicative_energy;
use crate::error::{Error, Result};
use crate::setcore::{composite_expander, pinned_product, GroundSet, InnerOp, ShiftSign};

/// Identifier of the random generator backing every seeded artifact.
pub const RNG_ALGORITHM: &str = "chacha20";

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyId {
    /// {1, ..., n}
    Interval,
    /// {q^0, ..., q^(n-1)} for rational q > 1
    Geometric(Rational),
    /// n distinct uniform draws from {1, ..., m}
    RandomSubset(u64),
    /// {1, 4, 9, ..., n^2}
    ConvexSquares,
    /// first n elements of a collision-free sum of two arithmetic
    /// progressions with a seeded second step
    ApPlusAp,
    /// {i + eps_i} with seeded sub-unit rational noise
    PerturbedAp(Rational),
    /// loaded from a set file
    CustomFile(PathBuf),
}

/// A fully-specified generator instance: family, size and seed.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub id: FamilyId,
    pub n: usize,
    pub seed: u64,
}

impl FamilySpec {
    /// Parse the CLI family grammar, e.g. `interval:64`, `geometric:2:32`,
    /// `random:1000000:128:seed=7`, `squares:16`, `perturbed-ap:1/2:32`,
    /// `file:sets/a.txt`. A trailing `seed=S` overrides `default_seed`.
    pub fn parse(s: &str, default_seed: u64) -> Result<Self> {
        let mut parts: Vec<&str> = s.split(':').collect();
        let mut seed = default_seed;
        if let Some(last) = parts.last() {
            if let Some(v) = last.strip_prefix("seed=") {
                seed = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad seed in family `{s}`")))?;
                parts.pop();
            }
        }
        let bad = || Error::Parse(format!("bad family spec `{s}`"));
        let parse_n = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let (id, n) = match parts.as_slice() {
            ["interval", n] => (FamilyId::Interval, parse_n(n)?),
            ["geometric", q, n] => (FamilyId::Geometric(parse_rational(q)?), parse_n(n)?),
            ["random", m, n] => (
                FamilyId::RandomSubset(m.parse().map_err(|_| bad())?),
                parse_n(n)?,
            ),
            ["squares", n] | ["convex-squares", n] => (FamilyId::ConvexSquares, parse_n(n)?),
            ["ap-plus-ap", n] => (FamilyId::ApPlusAp, parse_n(n)?),
            ["perturbed-ap", noise, n] => {
                (FamilyId::PerturbedAp(parse_rational(noise)?), parse_n(n)?)
            }
            ["file", path] => {
                let p = PathBuf::from(path);
                let set = crate::io::load_set(&p)?.0;
                return Ok(FamilySpec {
                    n: set.len(),
                    id: FamilyId::CustomFile(p),
                    seed,
                });
            }
            _ => return Err(bad()),
        };
        Ok(FamilySpec { id, n, seed })
    }

    /// Canonical family label without the seed, used in records.
    pub fn label(&self) -> String {
        match &self.id {
            FamilyId::Interval => format!("interval:{}", self.n),
            FamilyId::Geometric(q) => format!("geometric:{}:{}", crate::arith::format_rational(q), self.n),
            FamilyId::RandomSubset(m) => format!("random:{}:{}", m, self.n),
            FamilyId::ConvexSquares => format!("squares:{}", self.n),
            FamilyId::ApPlusAp => format!("ap-plus-ap:{}", self.n),
            FamilyId::PerturbedAp(noise) => format!(
                "perturbed-ap:{}:{}",
                crate::arith::format_rational(noise),
                self.n
            ),
            FamilyId::CustomFile(p) => format!("file:{}", p.display()),
        }
    }

    /// Same family and seed at a different size.
    pub fn with_n(&self, n: usize) -> Self {
        FamilySpec {
            id: self.id.clone(),
            n,
            seed: self.seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        FamilySpec {
            id: self.id.clone(),
            n: self.n,
            seed,
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generate the set for a family spec; exactly `n` elements.
pub fn generate(spec: &FamilySpec) -> Result<GroundSet> {
    if spec.n == 0 {
        return Err(Error::InvalidParameter("family size must be >= 1".into()));
    }
    let n = spec.n;
    let set = match &spec.id {
        FamilyId::Interval => GroundSet::new((1..=n).map(rat_usize).collect())?,
        FamilyId::Geometric(q) => {
            if q <= &Rational::one() {
                return Err(Error::InvalidParameter(
                    "geometric ratio must satisfy q > 1".into(),
                ));
            }
            let mut elems = Vec::with_capacity(n);
            let mut cur = Rational::one();
            for _ in 0..n {
                elems.push(cur.clone());
                cur *= q;
            }
            GroundSet::new(elems)?
        }
        FamilyId::RandomSubset(m) => {
            if (*m as usize) < n {
                return Err(Error::InvalidParameter(format!(
                    "random subset needs M >= n, got M={m}, n={n}"
                )));
            }
            let mut rng = rng_for(spec.seed, 0);
            let mut chosen: BTreeSet<u64> = BTreeSet::new();
            while chosen.len() < n {
                chosen.insert(rng.gen_range(1..=*m));
            }
            GroundSet::new(chosen.into_iter().map(|v| Rational::from_integer(v.into())).collect())?
        }
        FamilyId::ConvexSquares => {
            GroundSet::new((1..=n).map(|i| rat_usize(i * i)).collect())?
        }
        FamilyId::ApPlusAp => {
            let a = (n as f64).sqrt().ceil() as usize;
            let b = n.div_ceil(a);
            let mut rng = rng_for(spec.seed, 1);
            // second step >= a keeps the grid collision-free
            let d2 = rng.gen_range(a as u64..=3 * a as u64) as usize;
            let mut elems: Vec<usize> = Vec::with_capacity(a * b);
            for j in 0..b {
                for i in 0..a {
                    elems.push(1 + i + j * d2);
                }
            }
            elems.sort_unstable();
            elems.truncate(n);
            GroundSet::new(elems.into_iter().map(rat_usize).collect())?
        }
        FamilyId::PerturbedAp(noise) => {
            if noise.is_negative() {
                return Err(Error::InvalidParameter("noise must be >= 0".into()));
            }
            let denom = 4 * n as u64;
            let span = (noise * rat_usize(denom as usize))
                .floor()
                .to_integer()
                .to_u64()
                .unwrap_or(denom - 1)
                .min(denom - 1);
            let mut rng = rng_for(spec.seed, 2);
            let mut elems = Vec::with_capacity(n);
            for i in 1..=n {
                let jitter = if span == 0 { 0 } else { rng.gen_range(0..=span) };
                elems.push(rat_usize(i) + Rational::new(jitter.into(), denom.into()));
            }
            GroundSet::new(elems)?
        }
        FamilyId::CustomFile(path) => crate::io::load_set(path)?.0,
    };
    if set.len() != n && !matches!(spec.id, FamilyId::CustomFile(_)) {
        return Err(Error::InvalidParameter(format!(
            "generator produced {} elements, wanted {n}",
            set.len()
        )));
    }
    Ok(set)
}

/// Objectives for the local-search tightness probe. Minimizing objectives
/// normalize by |A|^(3/2) for display; comparisons are exact because the
/// set size never changes during a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Objective {
    /// minimize max_a |A(A+a)|, normalized by |A|^(3/2)
    MinPinned,
    /// minimize |A(A+A)| / |A|^(3/2)
    MinProductOfSums,
    /// minimize |A(A-A)| / |A|^(3/2)
    MinProductOfDifferences,
    /// maximize Ex(A) / |A+A|^2
    MaxEnergyVsSumset,
}

impl Objective {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "min-pinned" => Ok(Objective::MinPinned),
            "min-aaplus" => Ok(Objective::MinProductOfSums),
            "min-aaminus" => Ok(Objective::MinProductOfDifferences),
            "max-energy-ratio" => Ok(Objective::MaxEnergyVsSumset),
            _ => Err(Error::Parse(format!(
                "unknown objective `{s}` (min-pinned, min-aaplus, min-aaminus, max-energy-ratio)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Objective::MinPinned => "min-pinned",
            Objective::MinProductOfSums => "min-aaplus",
            Objective::MinProductOfDifferences => "min-aaminus",
            Objective::MaxEnergyVsSumset => "max-energy-ratio",
        }
    }

    fn maximizing(&self) -> bool {
        matches!(self, Objective::MaxEnergyVsSumset)
    }

    /// Exact objective surrogate; ordering-faithful within a fixed size.
    pub fn evaluate(&self, set: &GroundSet) -> Result<Rational> {
        match self {
            Objective::MinPinned => {
                let best = set
                    .iter()
                    .map(|a| pinned_product(set, a, ShiftSign::Plus).cardinality)
                    .max()
                    .unwrap();
                Ok(Rational::from_integer(BigInt::from(best)))
            }
            Objective::MinProductOfSums => Ok(Rational::from_integer(BigInt::from(
                composite_expander(set, InnerOp::Sum).cardinality,
            ))),
            Objective::MinProductOfDifferences => Ok(Rational::from_integer(BigInt::from(
                composite_expander(set, InnerOp::Difference).cardinality,
            ))),
            Objective::MaxEnergyVsSumset => {
                if set.contains_zero() {
                    return Err(Error::PreconditionViolated(
                        "max-energy-ratio needs 0 outside the set".into(),
                    ));
                }
                let e = multiplicative_energy(set, set)?;
                let s = set.sumset(set).len();
                Ok(Rational::new(
                    e.expect_int().clone(),
                    BigInt::from(s) * BigInt::from(s),
                ))
            }
        }
    }

    /// Display value: counts are normalized by |A|^(3/2).
    pub fn display_value(&self, raw: &Rational, n: usize) -> f64 {
        match self {
            Objective::MaxEnergyVsSumset => to_f64(raw),
            _ => to_f64(raw) / (n as f64).powf(1.5),
        }
    }
}

/// One accepted-or-rejected proposal in a search trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub step: u64,
    pub accepted: bool,
    pub objective: f64,
}

/// Final state of a hill-climbing run, with enough provenance to replay it.
#[derive(Debug, Clone)]
pub struct SearchState {
    pub set: GroundSet,
    pub objective: Objective,
    pub value: Rational,
    pub steps_taken: u64,
    pub accepted: u64,
    pub seed: u64,
    pub rng_algorithm: &'static str,
    pub rng_word_pos: u128,
}

impl SearchState {
    /// The stored value must equal a fresh evaluation at all times.
    pub fn value_is_fresh(&self) -> bool {
        self.objective
            .evaluate(&self.set)
            .map(|v| v == self.value)
            .unwrap_or(false)
    }
}

/// Hill climb with single-element replacement moves drawn from a bounded
/// rational pool (|p|, q <= 4 * max element of the start set). Acceptance
/// is strictly improving, so the trace is monotone.
pub fn local_search(
    objective: Objective,
    start: &FamilySpec,
    steps: u64,
    seed: u64,
) -> Result<(SearchState, Vec<TraceRow>)> {
    let mut set = generate(start)?;
    let mut value = objective.evaluate(&set)?;
    let mut rng = rng_for(seed, 3);

    // Bounded move pool; the cap keeps arithmetic cheap on huge start sets.
    let max_abs = set
        .iter()
        .map(|e| e.abs())
        .max()
        .unwrap()
        .ceil()
        .to_integer();
    let bound = (max_abs * BigInt::from(4))
        .to_i64()
        .unwrap_or(i64::MAX)
        .clamp(1, 1 << 40);

    let mut trace = Vec::with_capacity(steps as usize);
    let mut accepted = 0u64;
    for step in 1..=steps {
        let idx = rng.gen_range(0..set.len());
        let mut p: i64 = rng.gen_range(-bound..=bound);
        if p == 0 {
            p = 1;
        }
        let q: i64 = rng.gen_range(1..=bound);
        let candidate_value = Rational::new(p.into(), q.into());

        let mut took = false;
        if !set.contains(&candidate_value) {
            let mut elems: Vec<Rational> = set.elems().to_vec();
            elems[idx] = candidate_value;
            let candidate = GroundSet::new(elems)?;
            if let Ok(cand_value) = objective.evaluate(&candidate) {
                let better = if objective.maximizing() {
                    cand_value > value
                } else {
                    cand_value < value
                };
                if better {
                    set = candidate;
                    value = cand_value;
                    accepted += 1;
                    took = true;
                }
            }
        }
        trace.push(TraceRow {
            step,
            accepted: took,
            objective: objective.display_value(&value, set.len()),
        });
    }

    Ok((
        SearchState {
            value,
            steps_taken: steps,
            accepted,
            seed,
            rng_algorithm: RNG_ALGORITHM,
            rng_word_pos: rng.get_word_pos(),
            set,
            objective,
        },
        trace,
    ))
}
