//! Suite runner: grids of (spec, family, size, seed) instances, evaluated
//! possibly in parallel but always emitted in a fixed order, as JSON lines
//! plus a CSV summary.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::families::{generate, FamilySpec};
use crate::setcore::GroundSet;

use super::{check, spec_ids, ExponentFit, InequalityRecord, Instance, InstanceMeta};

/// Seed offset deriving the auxiliary set B from the primary seed, so a
/// record is reproducible from (family, n, seed) alone.
pub const AUX_SEED_OFFSET: u64 = 1_000_003;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Family strings, either complete (`random:1000000:32`) or size-less
    /// prefixes (`interval`) to be crossed with `sizes`.
    pub families: Vec<String>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub spec_globs: Vec<String>,
    pub alpha: Rational,
    pub tau: Rational,
    pub workers: usize,
    /// With timings off (the default) `elapsed_ms` is emitted as null and
    /// two identical runs produce byte-identical output.
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            families: vec![
                "random:1000000".into(),
                "interval".into(),
                "geometric:2".into(),
            ],
            sizes: vec![8, 16, 32],
            seeds: vec![1, 2, 3],
            spec_globs: vec!["exact.*".into()],
            alpha: Rational::from_integer(1.into()),
            tau: Rational::from_integer(2.into()),
            workers: 0,
            timings: false,
        }
    }
}

#[derive(Debug, Default)]
pub struct SuiteReport {
    pub records: Vec<InequalityRecord>,
    pub fits: Vec<ExponentFit>,
}

impl SuiteReport {
    pub fn exact_failures(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.pass == Some(false))
            .count()
    }
}

/// `*`-wildcard matching for spec selection.
pub fn glob_match(pattern: &str, s: &str) -> bool {
    fn rec(p: &[u8], s: &[u8]) -> bool {
        match (p.first(), s.first()) {
            (None, None) => true,
            (Some(b'*'), _) => rec(&p[1..], s) || (!s.is_empty() && rec(p, &s[1..])),
            (Some(c), Some(d)) if c == d => rec(&p[1..], &s[1..]),
            _ => false,
        }
    }
    rec(pattern.as_bytes(), s.as_bytes())
}

fn selected_specs(globs: &[String]) -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = spec_ids()
        .into_iter()
        .filter(|id| globs.iter().any(|g| glob_match(g, id)))
        .collect();
    ids.sort();
    ids
}

/// Expand one family string into fully-sized specs, honoring an embedded
/// size or seed when present.
fn resolve_family(family: &str, sizes: &[usize], seeds: &[u64]) -> Result<Vec<FamilySpec>> {
    // A string that parses on its own carries its size; an explicit
    // `seed=` also pins the seed.
    if let Ok(spec) = FamilySpec::parse(family, u64::MAX) {
        let explicit_seed = spec.seed != u64::MAX;
        let list = if explicit_seed {
            vec![spec]
        } else {
            seeds.iter().map(|&s| spec.with_seed(s)).collect()
        };
        return Ok(list);
    }
    let mut out = Vec::new();
    for &n in sizes {
        let sized = format!("{family}:{n}");
        let spec = FamilySpec::parse(&sized, 0)?;
        let explicit_seed = {
            let again = FamilySpec::parse(&sized, 1)?;
            again.seed == spec.seed
        };
        if explicit_seed {
            out.push(spec);
        } else {
            out.extend(seeds.iter().map(|&s| spec.with_seed(s)));
        }
    }
    Ok(out)
}

struct Task {
    spec_id: &'static str,
    family: FamilySpec,
}

fn run_task(task: &Task, config: &SuiteConfig) -> Result<InequalityRecord> {
    let a = generate(&task.family)?;
    let b_spec = task.family.with_seed(task.family.seed.wrapping_add(AUX_SEED_OFFSET));
    let b: GroundSet = generate(&b_spec)?;
    let meta = InstanceMeta {
        family: task.family.label(),
        n: a.len(),
        seed: task.family.seed,
    };
    let inst = Instance {
        a: &a,
        b: Some(&b),
        c: None,
        alpha: config.alpha.clone(),
        tau: config.tau.clone(),
        meta: meta.clone(),
    };
    let started = Instant::now();
    let mut record = match check(task.spec_id, &inst) {
        Ok(r) => r,
        // a family that misses a spec's precondition is recorded, not fatal
        Err(Error::PreconditionViolated(_)) => {
            InequalityRecord::skipped(task.spec_id, &meta, false)
        }
        Err(e) => return Err(e),
    };
    if config.timings {
        record.elapsed_ms = Some(started.elapsed().as_millis() as u64);
    }
    Ok(record)
}

/// Evaluate the full grid. Instances are independent; with `workers > 1`
/// they run on a local thread pool, and records are emitted in the fixed
/// (spec, family, size, seed) order either way. The first exact violation
/// aborts the run.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let specs = selected_specs(&config.spec_globs);
    let mut tasks: Vec<Task> = Vec::new();
    for spec_id in &specs {
        for family in &config.families {
            for fam in resolve_family(family, &config.sizes, &config.seeds)? {
                tasks.push(Task {
                    spec_id,
                    family: fam,
                });
            }
        }
    }

    let workers = if config.workers == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        config.workers
    };

    let records: Vec<InequalityRecord> = if workers > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| {
            tasks
                .par_iter()
                .map(|t| run_task(t, config))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        tasks
            .iter()
            .map(|t| run_task(t, config))
            .collect::<Result<Vec<_>>>()?
    };

    Ok(SuiteReport {
        records,
        fits: Vec::new(),
    })
}

pub fn write_jsonl(records: &[InequalityRecord], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(|e| Error::Parse(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Aggregate min/median/max ratio per (spec, family).
pub fn summarize(records: &[InequalityRecord]) -> Vec<SummaryRowOwned> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(String, String), Vec<&InequalityRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.spec.clone(), r.family.clone()))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((spec, family), rs)| {
            let mut ratios: Vec<f64> = rs.iter().filter_map(|r| r.ratio).collect();
            ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median = if ratios.is_empty() {
                None
            } else if ratios.len() % 2 == 1 {
                Some(ratios[ratios.len() / 2])
            } else {
                Some((ratios[ratios.len() / 2 - 1] + ratios[ratios.len() / 2]) / 2.0)
            };
            SummaryRowOwned {
                spec,
                family,
                count: rs.len(),
                skipped: rs.iter().filter(|r| r.is_skipped()).count(),
                exact_failures: rs.iter().filter(|r| r.pass == Some(false)).count(),
                min_ratio: ratios.first().copied(),
                median_ratio: median,
                max_ratio: ratios.last().copied(),
            }
        })
        .collect()
}

pub struct SummaryRowOwned {
    pub spec: String,
    pub family: String,
    pub count: usize,
    pub skipped: usize,
    pub exact_failures: usize,
    pub min_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

pub fn write_csv_summary(records: &[InequalityRecord], path: &Path) -> Result<()> {
    let rows = summarize(records);
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "spec,family,count,skipped,exact_failures,min_ratio,median_ratio,max_ratio"
    )?;
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.spec,
            r.family,
            r.count,
            r.skipped,
            r.exact_failures,
            fmt(r.min_ratio),
            fmt(r.median_ratio),
            fmt(r.max_ratio)
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_fits_csv(fits: &[ExponentFit], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "family,quantity,sizes,slope,intercept,residual")?;
    for f in fits {
        let sizes = f
            .sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            w,
            "{},{},{},{},{},{}",
            f.family, f.quantity, sizes, f.slope, f.intercept, f.residual
        )?;
    }
    w.flush()?;
    Ok(())
}
