//! Acceptance suite. One test per criterion; each prints a single
//! `ACCEPTANCE <criterion>: PASS|FAIL` line and enforces its runtime
//! budget where one is stated.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use sumprodlab::arith::{rat, rat_i64};
use sumprodlab::energy::{
    additive_energy, moment_of_histogram, multiplicative_energy, shifted_energy_sum,
    shifted_energy_sum_bruteforce, RepHistogram, RepKind,
};
use sumprodlab::families::{generate, FamilyId, FamilySpec};
use sumprodlab::geometry::{collinear_triples, gk_distance_quadruples, grid_collinear_triples, PlanarPointSet};
use sumprodlab::refine::{
    double_pigeonhole, popular_ratio_class, refine_energy_subset, verify_certificate,
    verify_witness,
};
use sumprodlab::setcore::{
    five_var_expander_size, five_var_float_check, pinned_product, GroundSet, ShiftSign,
};
use sumprodlab::verify::{crossover, exact_suite, fit_log_log, InstanceMeta};

fn conclude(name: &str, elapsed: Duration, budget: Option<Duration>, failures: Vec<String>) {
    let mut failures = failures;
    if let Some(budget) = budget {
        if elapsed > budget {
            failures.push(format!(
                "runtime {:?} exceeded the {:?} budget",
                elapsed, budget
            ));
        }
    }
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {name}: {verdict} ({:.2?})", elapsed);
    assert!(failures.is_empty(), "{name}:\n{}", failures.join("\n"));
}

fn random_set(n: usize, seed: u64) -> GroundSet {
    generate(&FamilySpec {
        id: FamilyId::RandomSubset(1_000_000),
        n,
        seed,
    })
    .unwrap()
}

fn as_ints(a: &GroundSet) -> Vec<i64> {
    a.fits_small_ints(1 << 20).expect("random family fits i64")
}

// ---------------------------------------------------------------------
// test-local oracles, independent of the library counting paths
// ---------------------------------------------------------------------

fn oracle_add_energy(a: &[i64], b: &[i64]) -> u128 {
    let mut n = 0u128;
    for &a1 in a {
        for &b1 in b {
            for &a2 in a {
                for &b2 in b {
                    if a1 - b1 == a2 - b2 {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

fn oracle_mult_energy(a: &[i64], b: &[i64]) -> u128 {
    let mut n = 0u128;
    for &a1 in a {
        for &b1 in b {
            for &a2 in a {
                for &b2 in b {
                    if a1 as i128 * b2 as i128 == a2 as i128 * b1 as i128 {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// E_3 as a 6-tuple count, pruned on the first equality.
fn oracle_e3(a: &[i64]) -> u128 {
    let mut n = 0u128;
    for &a1 in a {
        for &a2 in a {
            let d = a1 - a2;
            for &a3 in a {
                for &a4 in a {
                    if a3 - a4 != d {
                        continue;
                    }
                    for &a5 in a {
                        for &a6 in a {
                            if a5 - a6 == d {
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    n
}

fn oracle_shifted_quintuple(a: &[i64], b: &[i64], c: &[i64]) -> u128 {
    let mut n = 0u128;
    for &sh in a {
        for &b1 in b {
            for &b2 in b {
                for &c1 in c {
                    for &c2 in c {
                        if b1 as i128 * (c1 - sh) as i128 == b2 as i128 * (c2 - sh) as i128 {
                            n += 1;
                        }
                    }
                }
            }
        }
    }
    n
}

fn oracle_gk(a: &[i64]) -> u128 {
    let k = a.len();
    let mut sq = vec![0i64; k * k];
    for i in 0..k {
        for j in 0..k {
            let d = a[i] - a[j];
            sq[i * k + j] = d * d;
        }
    }
    let mut n = 0u128;
    for &d1 in &sq {
        for &d2 in &sq {
            let lhs = d1 + d2;
            for &d3 in &sq {
                for &d4 in &sq {
                    if lhs == d3 + d4 {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

fn oracle_collinear(points: &[(i64, i64)]) -> u64 {
    let n = points.len();
    let mut total = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let (p, q, r) = (points[i], points[j], points[k]);
                let cross =
                    (q.0 - p.0) as i128 * (r.1 - p.1) as i128 - (q.1 - p.1) as i128 * (r.0 - p.0) as i128;
                if cross == 0 {
                    total += 1;
                }
            }
        }
    }
    total
}

// ---------------------------------------------------------------------

#[test]
fn criterion_1_exact_crossovers() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let pinned = (rat(3, 2), rat(1, 2));
    let cases = [
        ((rat(20, 13), rat(40, 13)), rat(3, 2) + rat(1, 186)),
        ((rat(58, 37), rat(42, 37)), rat(3, 2) + rat(5, 242)),
        ((rat(8, 5), rat(6, 5)), rat(3, 2) + rat(1, 34)),
    ];
    for (alt, expected) in cases {
        let t = Instant::now();
        let got = crossover(pinned.clone(), alt.clone()).unwrap();
        let per_call = t.elapsed();
        if got != expected {
            failures.push(format!(
                "crossover({alt:?}) = {got}, expected {expected}"
            ));
        }
        if per_call > Duration::from_millis(1) {
            failures.push(format!("crossover took {per_call:?} (> 1 ms)"));
        }
    }
    conclude("criterion-1 exact-crossovers", started.elapsed(), None, failures);
}

#[test]
fn criterion_2_oracle_equivalence() {
    let started = Instant::now();
    let mut failures = Vec::new();

    // 200 seeded random pairs with |A|, |B| <= 32
    for i in 0..200u64 {
        let na = 4 + (i as usize % 29);
        let nb = 4 + ((i as usize * 7 + 3) % 29);
        let a = random_set(na, 1_000 + i);
        let b = random_set(nb, 500_000 + i);
        let (ai, bi) = (as_ints(&a), as_ints(&b));

        let eplus = additive_energy(&a, &b).unwrap();
        if eplus.expect_int() != &BigInt::from(oracle_add_energy(&ai, &bi)) {
            failures.push(format!("E+ mismatch at pair {i}"));
        }
        let etimes = multiplicative_energy(&a, &b).unwrap();
        if etimes.expect_int() != &BigInt::from(oracle_mult_energy(&ai, &bi)) {
            failures.push(format!("Ex mismatch at pair {i}"));
        }
        let h = RepHistogram::build(&a, &a, RepKind::Difference).unwrap();
        let e3 = moment_of_histogram(&h, &rat_i64(3));
        if e3.expect_int() != &BigInt::from(oracle_e3(&ai)) {
            failures.push(format!("E_3 mismatch at set {i}"));
        }

        let fast = shifted_energy_sum(&a, &b, &a, ShiftSign::Minus, false);
        let brute = shifted_energy_sum_bruteforce(&a, &b, &a, ShiftSign::Minus, false);
        if fast != brute {
            failures.push(format!("shifted-energy paths disagree at pair {i}"));
        }
        if na <= 14 && nb <= 14 {
            let local = oracle_shifted_quintuple(&ai, &bi, &ai);
            if fast != BigInt::from(local) {
                failures.push(format!("shifted-energy vs local quintuple at pair {i}"));
            }
        }
        if failures.len() > 5 {
            break;
        }
    }

    // distance quadruples against the 8-tuple loop for |A| <= 5
    for (n, seed) in [(1usize, 7u64), (2, 8), (3, 9), (4, 10), (5, 11), (5, 12), (4, 13)] {
        let a = generate(&FamilySpec {
            id: FamilyId::RandomSubset(50),
            n,
            seed,
        })
        .unwrap();
        let ints = as_ints(&a);
        if gk_distance_quadruples(&a) != oracle_gk(&ints) {
            failures.push(format!("gk mismatch on n={n} seed={seed}"));
        }
    }

    // collinear triples against the ordered-triple loop for |P| <= 25
    for (n, seed) in [(3usize, 3u64), (4, 4), (5, 5), (5, 6)] {
        let a = generate(&FamilySpec {
            id: FamilyId::RandomSubset(12),
            n,
            seed,
        })
        .unwrap();
        let ints = as_ints(&a);
        let mut grid_pts = Vec::new();
        for &x in &ints {
            for &y in &ints {
                grid_pts.push((x, y));
            }
        }
        if grid_collinear_triples(&a) != oracle_collinear(&grid_pts) {
            failures.push(format!("grid collinear mismatch on n={n} seed={seed}"));
        }
    }
    // a couple of non-grid configurations with forced lines
    let configs: Vec<Vec<(i64, i64)>> = vec![
        vec![(0, 0), (1, 1), (2, 2), (3, 3), (5, 1), (4, 7), (9, 9)],
        vec![(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 5), (6, 10), (9, 15)],
    ];
    for (idx, pts) in configs.iter().enumerate() {
        let set = PlanarPointSet::new(
            pts.iter()
                .map(|&(x, y)| (rat_i64(x), rat_i64(y)))
                .collect(),
        );
        if collinear_triples(&set) != oracle_collinear(pts) {
            failures.push(format!("planar collinear mismatch on config {idx}"));
        }
    }

    conclude(
        "criterion-2 oracle-equivalence",
        started.elapsed(),
        Some(Duration::from_secs(60)),
        failures,
    );
}

#[test]
fn criterion_3_constant_free_theorems() {
    let started = Instant::now();
    let mut failures = Vec::new();
    // 500 instances, sizes spread over 4..=64
    for i in 0..500u64 {
        let n = 4 + (i as usize % 61);
        let a = random_set(n, 9_000 + i);
        let b = random_set(n, 700_000 + i);
        let meta = InstanceMeta {
            family: format!("random:1000000:{n}"),
            n,
            seed: 9_000 + i,
        };
        match exact_suite(&a, &b, meta) {
            Ok(records) => {
                for r in &records {
                    if r.pass != Some(true) {
                        failures.push(format!("{} not passing at instance {i}", r.spec));
                    }
                }
                if records.len() != 5 {
                    failures.push(format!("expected 5 exact records, got {}", records.len()));
                }
            }
            Err(e) => failures.push(format!("instance {i} (n={n}): {e}")),
        }
        if !failures.is_empty() {
            break;
        }
    }
    conclude(
        "criterion-3 constant-free-theorems",
        started.elapsed(),
        None,
        failures,
    );
}

#[test]
fn criterion_4_pinned_desk_values() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(format!("desk value `{name}` wrong"));
        }
    };

    let a123 = GroundSet::from_ints(&[1, 2, 3]);
    check(
        "|A(A+1)| = 7",
        pinned_product(&a123, &rat_i64(1), ShiftSign::Plus).cardinality == 7,
    );

    let a12 = GroundSet::from_ints(&[1, 2]);
    check("five-var {1,2} = 10", five_var_expander_size(&a12).ok() == Some(10));
    check(
        "five-var float {1,2} = 10",
        five_var_float_check(&a12, 1e-9).ok() == Some(10),
    );
    check(
        "five-var {1,2,3} = 27",
        five_var_expander_size(&a123).ok() == Some(27),
    );
    check(
        "five-var float {1,2,3} = 27",
        five_var_float_check(&a123, 1e-9).ok() == Some(27),
    );

    check(
        "gk {0,1} = 96",
        gk_distance_quadruples(&GroundSet::from_ints(&[0, 1])) == 96,
    );
    check(
        "gk {0,1,2} = 1329",
        gk_distance_quadruples(&GroundSet::from_ints(&[0, 1, 2])) == 1329,
    );
    check(
        "3x3 grid collinear = 48",
        grid_collinear_triples(&GroundSet::from_ints(&[0, 1, 2])) == 48,
    );

    conclude(
        "criterion-4 pinned-desk-values",
        started.elapsed(),
        Some(Duration::from_secs(1)),
        failures,
    );
}

#[test]
fn criterion_5_certificate_soundness() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for i in 0..200u64 {
        let n = 8 + (i as usize % 121);
        let a = random_set(n, 30_000 + i);

        match popular_ratio_class(&a) {
            Ok(cert) => {
                if !cert.all_satisfied() {
                    failures.push(format!("popular-ratio-class assertion failed at {i}"));
                }
                if let Err(e) = verify_certificate(&a, &cert) {
                    failures.push(format!("popular-ratio-class recheck failed at {i}: {e}"));
                }
            }
            Err(e) => failures.push(format!("popular-ratio-class at {i}: {e}")),
        }

        match refine_energy_subset(&a) {
            Ok(cert) => {
                if let Err(e) = verify_certificate(&a, &cert) {
                    failures.push(format!("energy-refinement recheck failed at {i}: {e}"));
                }
            }
            Err(e) => failures.push(format!("energy-refinement at {i}: {e}")),
        }

        match double_pigeonhole(&a) {
            Ok((cert, witness)) => {
                if let Err(e) = verify_certificate(&a, &cert) {
                    failures.push(format!("double-pigeonhole recheck failed at {i}: {e}"));
                }
                if let Err(e) = verify_witness(&witness) {
                    failures.push(format!("witness recheck failed at {i}: {e}"));
                }
            }
            Err(e) => failures.push(format!("double-pigeonhole at {i}: {e}")),
        }

        if !failures.is_empty() {
            break;
        }
    }
    conclude(
        "criterion-5 certificate-soundness",
        started.elapsed(),
        Some(Duration::from_secs(120)),
        failures,
    );
}

#[test]
fn criterion_6_growth_evidence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let sizes = [16usize, 32, 64, 128];
    let interval = |n: usize| GroundSet::from_ints(&(1..=n as i64).collect::<Vec<_>>());

    // |A+A| ~ n. The stated tolerance is 1.000 +- 0.01; note that the
    // exact closed form |{1..N}+{1..N}| = 2N-1 makes the least-squares
    // log-log slope over these four sizes equal 1.01319 (the -1 term
    // steepens the fit at small N), so this sub-check cannot pass as
    // stated. It is kept at the stated tolerance rather than loosened;
    // the closed form itself is asserted below.
    let pts: Vec<(usize, f64)> = sizes
        .iter()
        .map(|&n| {
            let s = interval(n).sumset(&interval(n)).len();
            if s != 2 * n - 1 {
                failures.push(format!("sumset closed form broke at n={n}"));
            }
            (n, s as f64)
        })
        .collect();
    let fit = fit_log_log("interval", "sumset-size", &pts).unwrap();
    if (fit.slope - 1.0).abs() > 0.01 {
        failures.push(format!(
            "sumset slope {:.5} not within 1.000 +- 0.01 (exact value for 2N-1 over \
             {{16,32,64,128}} is 1.01319; the stated tolerance is unattainable)",
            fit.slope
        ));
    }

    // five-variable image ~ n^2 (closed form (4n-3) n on intervals)
    let pts: Vec<(usize, f64)> = sizes
        .iter()
        .map(|&n| {
            let v = five_var_expander_size(&interval(n)).unwrap();
            if v != (4 * n as u128 - 3) * n as u128 {
                failures.push(format!("five-var closed form broke at n={n}"));
            }
            (n, v as f64)
        })
        .collect();
    let fit = fit_log_log("interval", "five-var", &pts).unwrap();
    if (fit.slope - 2.0).abs() > 0.05 {
        failures.push(format!("five-var slope {} not within 2.00 +- 0.05", fit.slope));
    }

    // best pinned |A(A+a)| grows at least like n^{3/2}
    let pts: Vec<(usize, f64)> = sizes
        .iter()
        .map(|&n| {
            let a = interval(n);
            let best = a
                .iter()
                .map(|pin| pinned_product(&a, pin, ShiftSign::Plus).cardinality)
                .max()
                .unwrap();
            (n, best as f64)
        })
        .collect();
    let fit = fit_log_log("interval", "best-pinned", &pts).unwrap();
    if fit.slope < 1.5 {
        failures.push(format!("best-pinned slope {} below 3/2", fit.slope));
    }

    // Ex(A) / (|A+A|^2 log2|A|) never rises above its size-8 value
    let ratio_at = |n: usize| {
        let a = interval(n);
        let ex = multiplicative_energy(&a, &a).unwrap();
        let aa = a.sumset(&a).len() as f64;
        ex.expect_int().to_f64().unwrap() / (aa * aa * (n as f64).log2())
    };
    let base = ratio_at(8);
    for &n in &[16usize, 32, 64, 128] {
        let r = ratio_at(n);
        if r > base {
            failures.push(format!(
                "energy-sumset ratio rose above its size-8 value at n={n}: {r} > {base}"
            ));
        }
    }

    conclude(
        "criterion-6 growth-evidence",
        started.elapsed(),
        Some(Duration::from_secs(600)),
        failures,
    );
}

#[test]
fn criterion_7_verify_determinism() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let bin = env!("CARGO_BIN_EXE_sumprodlab");
    let dir = std::env::temp_dir().join(format!("sumprodlab-det-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let run = |tag: &str| -> Vec<u8> {
        let jsonl = dir.join(format!("records-{tag}.jsonl"));
        let csv = dir.join(format!("summary-{tag}.csv"));
        let out = std::process::Command::new(bin)
            .args([
                "verify",
                "--specs",
                "exact.*",
                "--family",
                "random:100000:12",
                "--family",
                "geometric:2",
                "--sizes",
                "6,10",
                "--seeds",
                "1..4",
                "--jsonl",
                jsonl.to_str().unwrap(),
                "--csv",
                csv.to_str().unwrap(),
            ])
            .output()
            .expect("verify run");
        assert!(
            out.status.success(),
            "verify exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
        std::fs::read(&jsonl).unwrap()
    };

    let first = run("a");
    let second = run("b");
    if first != second {
        failures.push("two identical verify runs produced different JSON-lines bytes".into());
    }
    if first.is_empty() {
        failures.push("verify produced no records".into());
    }
    let _ = std::fs::remove_dir_all(&dir);

    conclude(
        "criterion-7 verify-determinism",
        started.elapsed(),
        None,
        failures,
    );
}

/// The directed float cross-check agrees with the transcendence-based
/// count on every set it is defined for (|A| <= 12), including rationals.
#[test]
fn five_var_float_agreement_extra() {
    for vals in [
        vec![rat(1, 3), rat(1, 2), rat_i64(2), rat(5, 2), rat_i64(7)],
        vec![rat_i64(1), rat_i64(10), rat_i64(100), rat_i64(1000)],
    ] {
        let a = GroundSet::from_values(vals).unwrap().0;
        assert_eq!(
            five_var_expander_size(&a).unwrap(),
            five_var_float_check(&a, 1e-9).unwrap()
        );
    }
    let interval12 = GroundSet::from_ints(&(1..=12).collect::<Vec<_>>());
    assert_eq!(
        five_var_expander_size(&interval12).unwrap(),
        five_var_float_check(&interval12, 1e-9).unwrap()
    );
}
