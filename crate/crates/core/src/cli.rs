//! Command-line front end.
//!
//! Subcommands: `compute` (one quantity of one set), `verify` (the
//! inequality suite), `scan` (size sweeps feeding exponent fits), `search`
//! (hill climbing), `report` (re-summarize a JSON-lines record file).
//!
//! Exit codes: 0 success; 1 verification failure; 2 parse/configuration
//! error; 3 precondition violation (the message names the precondition).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::arith::{dec_string, format_rational, parse_rational, Rational};
use crate::energy::{
    additive_energy, energy_moment, level_set_count, multiplicative_energy, ratio_intersection,
    shifted_energy_sum, EnergyMagnitude, RepHistogram, RepKind,
};
use crate::error::{Error, Result};
use crate::families::{generate, local_search, FamilySpec, Objective, RNG_ALGORITHM};
use crate::geometry::{gk_distance_quadruples, gk_distance_quadruples_literal, grid_collinear_triples};
use crate::refine::{
    best_dilation, double_pigeonhole, dstar_upper_bound, popular_ratio_class,
    refine_energy_subset, DilationCandidates,
};
use crate::setcore::{
    composite_expander, five_var_expander_size, five_var_float_check, pinned_product, GroundSet,
    InnerOp, ShiftSign,
};
use crate::verify::{
    fit_log_log, run_suite, summarize, write_csv_summary, write_jsonl, InequalityRecord,
    SuiteConfig,
};

#[derive(Parser)]
#[command(
    name = "sumprodlab",
    version,
    about = "Exact-arithmetic laboratory for sum-product expander estimates"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one quantity of a set (exact rationals/integers)
    Compute(Box<ComputeArgs>),
    /// Run the inequality verification suite over generated families
    Verify(VerifyArgs),
    /// Sweep sizes, evaluate one quantity, fit a log-log exponent
    Scan(ScanArgs),
    /// Hill-climb a set objective with single-element replacements
    Search(SearchArgs),
    /// Summarize an existing JSON-lines record file into CSV
    Report(ReportArgs),
}

#[derive(Args)]
struct SetSource {
    /// Set file: one integer or p/q per line, `#` comments
    #[arg(long, value_name = "PATH", conflicts_with = "family")]
    set: Option<PathBuf>,
    /// Family spec, e.g. interval:32, geometric:2:16, random:1000000:64:seed=7
    #[arg(long, value_name = "SPEC")]
    family: Option<String>,
}

impl SetSource {
    fn load(&self, seed: u64) -> Result<GroundSet> {
        match (&self.set, &self.family) {
            (Some(path), None) => Ok(crate::io::load_set(path)?.0),
            (None, Some(spec)) => generate(&FamilySpec::parse(spec, seed)?),
            _ => Err(Error::InvalidParameter(
                "exactly one of --set and --family is required".into(),
            )),
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    source: SetSource,
    /// Second set file for two-set quantities
    #[arg(long, value_name = "PATH")]
    set_b: Option<PathBuf>,
    /// Second set family for two-set quantities
    #[arg(long, value_name = "SPEC")]
    family_b: Option<String>,
    /// Quantity name; see README for the full list
    #[arg(long)]
    quantity: String,
    /// Pin a for pinned-product
    #[arg(long)]
    pin: Option<String>,
    /// Shift sign for pinned-product / shifted-energy-sum
    #[arg(long, default_value = "+")]
    sign: String,
    /// Inner operation for composite-expander: sum | difference
    #[arg(long)]
    inner: Option<String>,
    /// Moment for energy-moment, or fold count for iterated-sumset-size
    #[arg(long)]
    k: Option<String>,
    /// Threshold for level-set-count
    #[arg(long)]
    tau: Option<String>,
    /// Ratio for ratio-intersection
    #[arg(long)]
    x: Option<String>,
    /// Histogram kind for level-set-count: difference | ratio
    #[arg(long, default_value = "difference")]
    hist_kind: String,
    /// Candidate space for best-dilation: inverse | ratio-inverse
    #[arg(long, default_value = "inverse")]
    candidates: String,
    /// Count only nonzero products in shifted-energy-sum
    #[arg(long)]
    nonzero_only: bool,
    /// Crossover: pinned bound exponents "p,q" for K^q n^p
    #[arg(long)]
    pinned: Option<String>,
    /// Crossover: alternative bound exponents "r,s" for n^r / K^s
    #[arg(long)]
    alt: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Machine-readable JSON output
    #[arg(long)]
    json: bool,
    /// Also print set elements for set-valued quantities
    #[arg(long)]
    elements: bool,
    /// Write structured output (CSV/JSON) here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Spec id globs, comma-separated (e.g. "exact.*,T1")
    #[arg(long, default_value = "exact.*")]
    specs: String,
    /// Families; size-less prefixes cross with --sizes (repeatable)
    #[arg(long = "family", value_name = "SPEC")]
    families: Vec<String>,
    /// Sizes, comma-separated
    #[arg(long, default_value = "8,16,32")]
    sizes: String,
    /// Seeds: "a..b" inclusive or comma list
    #[arg(long, default_value = "1..3")]
    seeds: String,
    #[arg(long, default_value = "1")]
    alpha: String,
    #[arg(long, default_value = "2")]
    tau: String,
    /// JSON-lines record output
    #[arg(long, default_value = "sumprodlab-records.jsonl")]
    jsonl: PathBuf,
    /// CSV summary output
    #[arg(long, default_value = "sumprodlab-summary.csv")]
    csv: PathBuf,
    /// Worker threads (0 = available parallelism)
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Record wall-clock timings (off by default so identical runs emit
    /// identical bytes)
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Size-less family prefix, e.g. interval or random:1000000
    #[arg(long)]
    family: String,
    #[arg(long)]
    quantity: String,
    /// At least four strictly increasing sizes
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Per-size evaluation budget in milliseconds
    #[arg(long, env = "SUMPRODLAB_BUDGET_MS", default_value_t = 120_000)]
    budget_ms: u64,
    /// Write the swept points as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write points and fit as JSON lines
    #[arg(long)]
    jsonl: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// min-pinned | min-aaplus | min-aaminus | max-energy-ratio
    #[arg(long)]
    objective: String,
    /// Start family, fully sized, e.g. geometric:2:16
    #[arg(long)]
    start: String,
    #[arg(long, default_value_t = 500)]
    steps: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Trace output (JSON lines)
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Final set output (set file format)
    #[arg(long)]
    out_set: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// JSON-lines record file produced by `verify`
    #[arg(long)]
    input: PathBuf,
    /// CSV summary destination (stdout when omitted)
    #[arg(long)]
    csv: Option<PathBuf>,
}

pub fn run_from_env() -> i32 {
    let cli = Cli::parse();
    run(cli)
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::ExactInequalityViolated { .. }
        | Error::CertificateInvalid(_)
        | Error::FloatSeparation(..)
        | Error::BudgetExceeded(_) => 1,
        Error::Parse(_) | Error::Io(_) | Error::InvalidParameter(_) => 2,
        Error::InvalidWitness(_) => 3,
        e if e.precondition_name().is_some() => 3,
        _ => 1,
    }
}

pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Compute(args) => cmd_compute(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Scan(args) => cmd_scan(&args),
        Command::Search(args) => cmd_search(&args),
        Command::Report(args) => cmd_report(&args),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                Error::ExactInequalityViolated { spec, instance } => {
                    eprintln!("error: {e}");
                    eprintln!("reproduce: sumprodlab verify --specs {spec} --family {instance}");
                }
                _ => {
                    if let Some(name) = e.precondition_name() {
                        eprintln!("error: precondition `{name}` violated: {e}");
                    } else {
                        eprintln!("error: {e}");
                    }
                }
            }
            exit_code_for(&e)
        }
    }
}

fn parse_sign(s: &str) -> Result<ShiftSign> {
    match s {
        "+" | "plus" => Ok(ShiftSign::Plus),
        "-" | "minus" => Ok(ShiftSign::Minus),
        _ => Err(Error::InvalidParameter(format!("bad sign `{s}`"))),
    }
}

fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad size `{t}`")))
        })
        .collect()
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let lo: u64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad seed range `{s}`")))?;
        let hi: u64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad seed range `{s}`")))?;
        if lo > hi {
            return Err(Error::Parse(format!("empty seed range `{s}`")));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad seed `{t}`")))
        })
        .collect()
}

fn parse_pair(s: &str) -> Result<(Rational, Rational)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected `p,q`, got `{s}`")))?;
    Ok((parse_rational(a)?, parse_rational(b)?))
}

fn emit(args: &ComputeArgs, plain: &str, value: serde_json::Value) -> Result<()> {
    let text = if args.json {
        serde_json::to_string_pretty(&value).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        plain.to_string()
    };
    match &args.output {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            writeln!(f, "{text}")?;
            f.flush()?;
            Ok(())
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn expander_json(args: &ComputeArgs, r: &crate::setcore::ExpanderResult) -> serde_json::Value {
    let mut v = json!({
        "quantity": args.quantity,
        "cardinality": r.cardinality.to_string(),
    });
    if args.elements {
        if let Some(set) = &r.set {
            v["elements"] = json!(set.to_strings());
        }
    }
    v
}

fn cmd_compute(args: &ComputeArgs) -> Result<()> {
    // crossover needs no input set
    if args.quantity == "crossover" {
        let pinned = parse_pair(
            args.pinned
                .as_deref()
                .ok_or_else(|| Error::InvalidParameter("crossover needs --pinned p,q".into()))?,
        )?;
        let alt = parse_pair(
            args.alt
                .as_deref()
                .ok_or_else(|| Error::InvalidParameter("crossover needs --alt r,s".into()))?,
        )?;
        let e = crate::verify::crossover(pinned, alt)?;
        return emit(
            args,
            &format_rational(&e),
            json!({"quantity": "crossover", "exponent": format_rational(&e)}),
        );
    }

    let a = args.source.load(args.seed)?;
    let b = match (&args.set_b, &args.family_b) {
        (Some(p), None) => Some(crate::io::load_set(p)?.0),
        (None, Some(spec)) => Some(generate(&FamilySpec::parse(spec, args.seed)?)?),
        (None, None) => None,
        _ => {
            return Err(Error::InvalidParameter(
                "use at most one of --set-b and --family-b".into(),
            ))
        }
    };
    let b_or_a = b.as_ref().unwrap_or(&a);
    let sign = parse_sign(&args.sign)?;

    let need = |o: &Option<String>, flag: &str| -> Result<Rational> {
        parse_rational(
            o.as_deref()
                .ok_or_else(|| Error::InvalidParameter(format!("{} requires {flag}", args.quantity)))?,
        )
    };

    match args.quantity.as_str() {
        "set-size" => {
            let mut v = json!({"quantity": "set-size", "value": a.len()});
            if let Some(path) = &args.source.set {
                v["duplicates_removed"] = json!(crate::io::load_set(path)?.1);
            }
            emit(args, &a.len().to_string(), v)
        }
        "sumset-size" | "diffset-size" | "prodset-size" | "ratioset-size" => {
            let derived = match args.quantity.as_str() {
                "sumset-size" => a.sumset(b_or_a),
                "diffset-size" => a.difference_set(b_or_a),
                "prodset-size" => a.product_set(b_or_a),
                _ => a.ratio_set(b_or_a)?,
            };
            let mut v = json!({"quantity": args.quantity, "value": derived.len()});
            if args.elements {
                v["elements"] = json!(derived.to_strings());
            }
            emit(args, &derived.len().to_string(), v)
        }
        "iterated-sumset-size" => {
            let k = args
                .k
                .as_deref()
                .unwrap_or("1")
                .parse::<u32>()
                .map_err(|_| Error::InvalidParameter("--k must be a positive integer".into()))?;
            let s = a.iterated_sumset(k)?;
            emit(args, &s.len().to_string(), json!({"quantity": args.quantity, "k": k, "value": s.len()}))
        }
        "pinned-product" => {
            let pin = need(&args.pin, "--pin")?;
            let r = pinned_product(&a, &pin, sign);
            emit(args, &r.cardinality.to_string(), expander_json(args, &r))
        }
        "best-pinned" => {
            let best = a
                .iter()
                .map(|pin| pinned_product(&a, pin, ShiftSign::Plus).cardinality)
                .max()
                .unwrap();
            emit(args, &best.to_string(), json!({"quantity": args.quantity, "value": best.to_string()}))
        }
        "composite-expander" | "aaplus-size" | "aaminus-size" => {
            let inner = match (args.quantity.as_str(), args.inner.as_deref()) {
                ("aaplus-size", _) | (_, Some("sum")) => InnerOp::Sum,
                ("aaminus-size", _) | (_, Some("difference")) => InnerOp::Difference,
                _ => {
                    return Err(Error::InvalidParameter(
                        "composite-expander requires --inner sum|difference".into(),
                    ))
                }
            };
            let r = composite_expander(&a, inner);
            emit(args, &r.cardinality.to_string(), expander_json(args, &r))
        }
        "five-var" => {
            let v = five_var_expander_size(&a)?;
            emit(args, &v.to_string(), json!({"quantity": args.quantity, "value": v.to_string()}))
        }
        "five-var-float" => {
            let v = five_var_float_check(&a, 1e-9)?;
            emit(args, &v.to_string(), json!({"quantity": args.quantity, "value": v.to_string()}))
        }
        "add-energy" | "mult-energy" => {
            let e = if args.quantity == "add-energy" {
                additive_energy(&a, b_or_a)?
            } else {
                multiplicative_energy(&a, b_or_a)?
            };
            let s = e.expect_int().to_string();
            emit(args, &s, json!({"quantity": args.quantity, "value": s}))
        }
        "energy-moment" => {
            let k = need(&args.k, "--k")?;
            let e = energy_moment(&a, &k)?;
            let s = match &e.value {
                EnergyMagnitude::Exact(v) => v.to_string(),
                EnergyMagnitude::Bracketed(iv) => dec_string(&iv.midpoint(), 50),
            };
            emit(args, &s, json!({"quantity": args.quantity, "k": format_rational(&k), "value": s}))
        }
        "level-set-count" => {
            let tau = need(&args.tau, "--tau")?;
            let kind = match args.hist_kind.as_str() {
                "difference" => RepKind::Difference,
                "ratio" => RepKind::Ratio,
                other => {
                    return Err(Error::InvalidParameter(format!("bad --hist-kind `{other}`")))
                }
            };
            let h = RepHistogram::build(&a, b_or_a, kind)?;
            let v = level_set_count(&h, &tau)?;
            emit(args, &v.to_string(), json!({"quantity": args.quantity, "tau": format_rational(&tau), "value": v}))
        }
        "shifted-energy-sum" => {
            let v = shifted_energy_sum(&a, b_or_a, b_or_a, sign, args.nonzero_only);
            emit(args, &v.to_string(), json!({"quantity": args.quantity, "value": v.to_string()}))
        }
        "ratio-intersection" => {
            let x = need(&args.x, "--x")?;
            let inter = ratio_intersection(&a, &x)?;
            let mut v = json!({"quantity": args.quantity, "x": format_rational(&x), "value": inter.len()});
            if args.elements {
                v["elements"] = json!(inter.iter().map(format_rational).collect::<Vec<_>>());
            }
            emit(args, &inter.len().to_string(), v)
        }
        "collinear-grid" => {
            let v = grid_collinear_triples(&a);
            emit(args, &v.to_string(), json!({"quantity": args.quantity, "value": v}))
        }
        "gk-quadruples" => {
            let v = gk_distance_quadruples(&a);
            emit(args, &v.to_string(), json!({"quantity": args.quantity, "value": v.to_string()}))
        }
        "gk-quadruples-literal" => {
            let v = gk_distance_quadruples_literal(&a)?;
            emit(args, &v.to_string(), json!({"quantity": args.quantity, "value": v.to_string()}))
        }
        "dstar-upper" => {
            let w = dstar_upper_bound(&a)?;
            emit(args, &format_rational(&w.value), json!({"quantity": args.quantity, "witness": w.to_json()}))
        }
        "popular-ratio-class" => {
            let cert = popular_ratio_class(&a)?;
            let doc = serde_json::to_string_pretty(&cert.to_json()).unwrap();
            emit(args, &doc, cert.to_json())
        }
        "refine-energy-subset" => {
            let cert = refine_energy_subset(&a)?;
            let doc = serde_json::to_string_pretty(&cert.to_json()).unwrap();
            emit(args, &doc, cert.to_json())
        }
        "double-pigeonhole" => {
            let (cert, witness) = double_pigeonhole(&a)?;
            let v = json!({"certificate": cert.to_json(), "witness": witness.to_json()});
            let doc = serde_json::to_string_pretty(&v).unwrap();
            emit(args, &doc, v)
        }
        "best-dilation" => {
            let cands = match args.candidates.as_str() {
                "inverse" => DilationCandidates::InverseElements,
                "ratio-inverse" => DilationCandidates::RatioTimesInverse,
                other => {
                    return Err(Error::InvalidParameter(format!("bad --candidates `{other}`")))
                }
            };
            let c = best_dilation(&a, &cands)?;
            let plain = format!("z={} overlap={}", format_rational(&c.z), c.overlap);
            emit(
                args,
                &plain,
                json!({
                    "quantity": args.quantity,
                    "z": format_rational(&c.z),
                    "overlap": c.overlap.to_string(),
                    "bound_satisfied": c.bound_satisfied,
                    "normalized_ratio": c.normalized_ratio,
                }),
            )
        }
        "diff-histogram" | "ratio-histogram" => {
            let kind = if args.quantity.starts_with("diff") {
                RepKind::Difference
            } else {
                RepKind::Ratio
            };
            let h = RepHistogram::build(&a, b_or_a, kind)?;
            match &args.output {
                Some(path) => {
                    let f = BufWriter::new(File::create(path)?);
                    h.write_csv(f)?;
                }
                None => {
                    let stdout = std::io::stdout();
                    h.write_csv(stdout.lock())?;
                }
            }
            Ok(())
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown quantity `{other}`; see README for the list"
        ))),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let families = if args.families.is_empty() {
        SuiteConfig::default().families
    } else {
        args.families.clone()
    };
    let config = SuiteConfig {
        families,
        sizes: parse_sizes(&args.sizes)?,
        seeds: parse_seeds(&args.seeds)?,
        spec_globs: args.specs.split(',').map(|s| s.trim().to_string()).collect(),
        alpha: parse_rational(&args.alpha)?,
        tau: parse_rational(&args.tau)?,
        workers: args.workers,
        timings: args.timings,
    };
    let report = run_suite(&config)?;
    write_jsonl(&report.records, &args.jsonl)?;
    write_csv_summary(&report.records, &args.csv)?;
    let skipped = report.records.iter().filter(|r| r.is_skipped()).count();
    println!(
        "verify: {} records ({} skipped), {} exact failures",
        report.records.len(),
        skipped,
        report.exact_failures()
    );
    println!("records: {}", args.jsonl.display());
    println!("summary: {}", args.csv.display());
    Ok(())
}

/// Quantities a scan can sweep; all reduce to a positive number.
fn scan_value(quantity: &str, a: &GroundSet) -> Result<f64> {
    let v: f64 = match quantity {
        "set-size" => a.len() as f64,
        "size-squared" => (a.len() * a.len()) as f64,
        "sumset-size" => a.sumset(a).len() as f64,
        "diffset-size" => a.difference_set(a).len() as f64,
        "prodset-size" => a.product_set(a).len() as f64,
        "ratioset-size" => a.ratio_set(a)?.len() as f64,
        "add-energy" => additive_energy(a, a)?.to_f64(),
        "mult-energy" => multiplicative_energy(a, a)?.to_f64(),
        "five-var" => five_var_expander_size(a)? as f64,
        "best-pinned" => a
            .iter()
            .map(|pin| pinned_product(a, pin, ShiftSign::Plus).cardinality)
            .max()
            .unwrap() as f64,
        "aaplus-size" => composite_expander(a, InnerOp::Sum).cardinality as f64,
        "aaminus-size" => composite_expander(a, InnerOp::Difference).cardinality as f64,
        "gk-quadruples" => gk_distance_quadruples(a) as f64,
        "collinear-grid" => grid_collinear_triples(a) as f64,
        "dstar-upper" => dstar_upper_bound(a)?
            .value
            .to_f64()
            .ok_or_else(|| Error::InvalidParameter("witness value out of f64 range".into()))?,
        "energy-sumset-ratio" => {
            // Ex(A) / (|A+A|^2 log2 |A|): the monitored sum-energy ratio
            let ex = multiplicative_energy(a, a)?.to_f64();
            let aa = a.sumset(a).len() as f64;
            ex / (aa * aa * (a.len() as f64).log2())
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown scan quantity `{other}`"
            )))
        }
    };
    Ok(v)
}

fn cmd_scan(args: &ScanArgs) -> Result<()> {
    let sizes = parse_sizes(&args.sizes)?;
    let mut points: Vec<(usize, f64)> = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let spec = FamilySpec::parse(&format!("{}:{n}", args.family), args.seed)?;
        let set = generate(&spec)?;
        let started = Instant::now();
        let v = scan_value(&args.quantity, &set)?;
        let elapsed = started.elapsed().as_millis() as u64;
        if elapsed > args.budget_ms {
            return Err(Error::BudgetExceeded(args.budget_ms));
        }
        points.push((n, v));
    }
    let fit = fit_log_log(&args.family, &args.quantity, &points)?;
    println!(
        "fit: quantity={} family={} slope={:.6} intercept={:.6} residual={:.3e}",
        fit.quantity, fit.family, fit.slope, fit.intercept, fit.residual
    );
    if let Some(path) = &args.csv {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "n,value")?;
        for (n, v) in &points {
            writeln!(w, "{n},{v}")?;
        }
        w.flush()?;
    }
    if let Some(path) = &args.jsonl {
        let mut w = BufWriter::new(File::create(path)?);
        for (n, v) in &points {
            writeln!(
                w,
                "{}",
                json!({"family": args.family, "quantity": args.quantity, "seed": args.seed, "rng": RNG_ALGORITHM, "n": n, "value": v})
            )?;
        }
        writeln!(
            w,
            "{}",
            json!({"fit": {"slope": fit.slope, "intercept": fit.intercept, "residual": fit.residual}})
        )?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_search(args: &SearchArgs) -> Result<()> {
    let objective = Objective::parse(&args.objective)?;
    let start = FamilySpec::parse(&args.start, args.seed)?;
    let (state, trace) = local_search(objective, &start, args.steps, args.seed)?;
    let final_display = objective.display_value(&state.value, state.set.len());
    println!(
        "search: objective={} start={} steps={} accepted={} final={:.6}",
        objective.name(),
        start.label(),
        state.steps_taken,
        state.accepted,
        final_display
    );
    if let Some(path) = &args.trace {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(
            w,
            "{}",
            json!({
                "objective": objective.name(),
                "start": start.label(),
                "steps": args.steps,
                "seed": args.seed,
                "rng": state.rng_algorithm,
                "rng_word_pos": state.rng_word_pos.to_string(),
            })
        )?;
        for row in &trace {
            writeln!(w, "{}", serde_json::to_string(row).unwrap())?;
        }
        w.flush()?;
    }
    if let Some(path) = &args.out_set {
        crate::io::save_set(&state.set, path)?;
    }
    Ok(())
}

fn read_records(path: &Path) -> Result<Vec<InequalityRecord>> {
    let f = BufReader::new(File::open(path)?);
    let mut records: Vec<InequalityRecord> = Vec::new();
    for line in f.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(
            serde_json::from_str(&line)
                .map_err(|e| Error::Parse(format!("bad record line: {e}")))?,
        );
    }
    Ok(records)
}

fn cmd_report(args: &ReportArgs) -> Result<()> {
    let records = read_records(&args.input)?;
    match &args.csv {
        Some(path) => write_csv_summary(&records, path)?,
        None => {
            println!("spec,family,count,skipped,exact_failures,min_ratio,median_ratio,max_ratio");
            for r in summarize(&records) {
                let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                println!(
                    "{},{},{},{},{},{},{},{}",
                    r.spec,
                    r.family,
                    r.count,
                    r.skipped,
                    r.exact_failures,
                    fmt(r.min_ratio),
                    fmt(r.median_ratio),
                    fmt(r.max_ratio)
                );
            }
        }
    }
    Ok(())
}

