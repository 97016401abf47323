//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::Instant;

use jacpair::harness::{self, CYCLIC_KEY};
use jacpair::stats::{mean_z, proportion_z, two_sample_z};
use jacpair::{ExperimentConfig, ExperimentKind, Report};
use jacpair_core::classify::classify_odd_p;
use jacpair_core::haar::{estimate_surjection_moment, HaarOptions};
use jacpair_core::linalg::cokernel_invariants;
use jacpair_core::pairing::{count_aut_pairing, is_isomorphic};
use jacpair_core::rng::{trial_rng, uniform_below};
use jacpair_core::theory::{self, PartitionType};
use jacpair_core::{FiniteAbelianGroup, IntMatrix, PairingClass, PairingGram, SylowPairing};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

type Outcome = Result<String, String>;

fn threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(cfg: &ExperimentConfig) -> Result<Report, String> {
    harness::run(cfg, threads()).map_err(|e| e.to_string())
}

fn config(kind: ExperimentKind, n: usize, primes: &[u64], trials: u64, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind);
    cfg.n = n;
    cfg.q = 0.5;
    cfg.primes = primes.to_vec();
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.catalog_bound = cfg.catalog_bound.max(primes.iter().product::<u64>().pow(2));
    cfg
}

fn parse(class: &str) -> PairingClass {
    class.parse().unwrap_or_else(|e| panic!("bad class {class}: {e}"))
}

fn find_row<'a>(report: &'a Report, class: &str) -> Option<&'a jacpair::ComparisonRow> {
    let want = parse(class);
    report.rows.iter().find(|r| r.class.parse::<PairingClass>().ok().as_ref() == Some(&want))
}

// ---------------------------------------------------------------------------
// 1. Aut counts of small classes

const KNOWN_AUT: &[(&str, u64)] = &[
    ("1", 1),
    ("A2", 1),
    ("A4", 2),
    ("B4", 2),
    ("A2+A2", 2),
    ("E4", 6),
    ("A8", 4),
    ("B8", 4),
    ("C8", 4),
    ("D8", 4),
    ("A2+A4", 2),
    ("A2+A2+A2", 6),
    ("A3", 2),
    ("B3", 2),
    ("A9", 2),
    ("B9", 2),
    ("A3+A3", 8),
    ("A3+B3", 4),
    ("A2+A2+A3", 4),
    ("A2+A2+B3", 4),
    ("A3+E4", 12),
    ("B3+E4", 12),
];

const EXPECTED_RATIOS: &[(&str, u64)] = &[
    ("A2", 2),
    ("A4", 8),
    ("E4", 24),
    ("A8", 32),
    ("A2+A2+A2", 48),
    ("A3", 6),
    ("A9", 18),
    ("A3+A3", 72),
    ("A3+B3", 36),
    ("A2+A2+A3", 48),
    ("A3+E4", 144),
];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for &(text, aut) in KNOWN_AUT {
        let c = parse(text);
        let got = count_aut_pairing(&c.pairing(), 1 << 10).map_err(|e| format!("{text}: {e}"))?;
        ensure(got == aut, || format!("{text}: Aut = {got}, expected {aut}"))?;
    }
    for &(text, ratio) in EXPECTED_RATIOS {
        let got = parse(text).expected_ratio(1 << 10).map_err(|e| e.to_string())?;
        ensure(got == BigUint::from(ratio), || format!("{text}: |Γ|·|Aut| = {got}, expected {ratio}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!("{} classes, {secs:.2} s", KNOWN_AUT.len()))
}

// ---------------------------------------------------------------------------
// 2 and 6. Connected G(30, 1/2): cyclic proportion and mean p^{r_p}

fn graph_cyclic_report() -> &'static Result<Report, String> {
    static REPORT: OnceLock<Result<Report, String>> = OnceLock::new();
    REPORT.get_or_init(|| run(&config(ExperimentKind::GraphCyclic, 30, &[2, 3], 10_000, 20_140_502)))
}

fn criterion_2() -> Outcome {
    let r = graph_cyclic_report().as_ref().map_err(Clone::clone)?;
    let row = r.row(CYCLIC_KEY).ok_or("no cyclic row")?;
    let dev = row.proportion - 0.7935;
    ensure(dev.abs() <= 0.013, || format!("proportion {} is {dev:+.4} from 0.7935", row.proportion))?;
    Ok(format!("cyclic proportion {:.4} over {} graphs", row.proportion, row.total))
}

// ---------------------------------------------------------------------------
// 3. Relative class frequencies for Sylow parts of G(20, 1/2)

const CLASSES_P2: &[&str] = &["A2", "A4", "B4", "A2+A2", "E4", "A8", "B8", "C8", "D8", "A2+A4", "A2+A2+A2"];
const CLASSES_P3: &[&str] = &["A3", "B3", "A9", "B9", "A3+A3", "A3+B3"];
const CLASSES_TWO: &[&str] = &["A2+A2+A3", "A2+A2+B3", "A3+E4", "B3+E4"];

fn ratio_rows_within(report: &Report, classes: &[&str], limit: f64) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for &c in classes {
        let row = find_row(report, c).ok_or_else(|| format!("no row for {c}"))?;
        let z = row.z_score.ok_or_else(|| format!("{c}: no z-score"))?;
        let expected = parse(c).expected_ratio(1 << 10).map_err(|e| e.to_string())?.to_f64().unwrap_or(f64::NAN);
        ensure(row.expected_ratio == Some(expected), || format!("{c}: expected ratio {:?} vs {expected}", row.expected_ratio))?;
        ensure(z.abs() < limit, || format!("{c}: observed {:?} vs {expected}, z = {z:.2}", row.observed_ratio))?;
        worst = worst.max(z.abs());
    }
    Ok(worst)
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    for (trials, seed) in [(100_000u64, 510_002u64), (10_000, 510_001)] {
        let mut worst = 0.0f64;
        let r2 = run(&config(ExperimentKind::GraphPairingFreq, 20, &[2], trials, seed))?;
        worst = worst.max(ratio_rows_within(&r2, CLASSES_P2, 4.0).map_err(|e| format!("p=2, {trials}: {e}"))?);
        let r3 = run(&config(ExperimentKind::GraphPairingFreq, 20, &[3], trials, seed + 1))?;
        worst = worst.max(ratio_rows_within(&r3, CLASSES_P3, 4.0).map_err(|e| format!("p=3, {trials}: {e}"))?);
        let r23 = run(&config(ExperimentKind::GraphTwoPrimes, 20, &[2, 3], trials, seed + 2))?;
        worst = worst.max(ratio_rows_within(&r23, CLASSES_TWO, 4.0).map_err(|e| format!("p=2,3, {trials}: {e}"))?);
        notes.push(format!("{trials} trials max |z| {worst:.2}"));
    }
    Ok(notes.join("; "))
}

// ---------------------------------------------------------------------------
// 4. Haar cokernels against the finite-n measure

fn rational(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    let mut worst = 0.0f64;
    for p in [2u64, 3] {
        // closed forms at n = 1
        let triv = theory::mu_n_finite(p, 1, 0, &BigUint::one(), 1).map_err(|e| e.to_string())?;
        ensure(triv.truncation_bound.is_zero() && triv.value == rational(p - 1, p), || format!("mu_1(1) at p={p} is {}", triv.value))?;
        for n in [1usize, 2, 4] {
            let mut cfg = config(ExperimentKind::HaarMu, n, &[p], 100_000, 4_000 + 10 * p + n as u64);
            cfg.catalog_bound = p * p;
            let r = run(&cfg)?;
            for row in &r.rows {
                let Ok(c) = row.class.parse::<PairingClass>() else { continue };
                if c.group().order() > BigUint::from(p * p) || c.group().rank() > n {
                    continue;
                }
                let z = row.z_score.ok_or_else(|| format!("{} at p={p}, n={n}: no z-score", row.class))?;
                ensure(z.abs() <= 3.0, || format!("{} at p={p}, n={n}: proportion {}, z = {z:.2}", row.class, row.proportion))?;
                worst = worst.max(z.abs());
                checked += 1;
            }
            if n == 1 {
                let total = r.total_trials;
                let k1 = r.row("1").map_or(0, |r| r.observed_count);
                let z = proportion_z(k1, total, 1.0 - 1.0 / p as f64).ok_or("degenerate")?;
                ensure(z.abs() <= 3.0, || format!("mu_1(1) at p={p}: z = {z:.2}"))?;
                let kp: u64 = r
                    .rows
                    .iter()
                    .filter(|row| row.class.parse::<PairingClass>().is_ok_and(|c| c.group() == FiniteAbelianGroup::from_u64s(&[p]).unwrap()))
                    .map(|row| row.observed_count)
                    .sum();
                let pooled = (1.0 - 1.0 / p as f64) / p as f64;
                let z = proportion_z(kp, total, pooled).ok_or("degenerate")?;
                ensure(z.abs() <= 3.0, || format!("pooled mu_1(Z/{p}): {kp}/{total}, z = {z:.2}"))?;
                worst = worst.max(z.abs());
                checked += 2;
            }
        }
    }
    Ok(format!("{checked} checks, max |z| {worst:.2}"))
}

// ---------------------------------------------------------------------------
// 5. Zero-sum matrices of size n against plain matrices of size n - 1

fn criterion_5() -> Outcome {
    let p = 3u64;
    let mut checked = 0;
    let mut worst = 0.0f64;
    for n in [3usize, 5] {
        let mut zs = config(ExperimentKind::HaarMu, n, &[p], 100_000, 5_000 + n as u64);
        zs.zero_sum = true;
        let plain = config(ExperimentKind::HaarMu, n - 1, &[p], 100_000, 5_100 + n as u64);
        let (a, b) = (run(&zs)?, run(&plain)?);
        for row in a.rows.iter().filter(|r| r.class.parse::<PairingClass>().is_ok()) {
            let c = parse(&row.class);
            if c.group().order() > BigUint::from(p * p) || c.group().rank() > n - 1 {
                continue;
            }
            let k2 = b.row(&row.class).map_or(0, |r| r.observed_count);
            let z = two_sample_z(row.observed_count, a.total_trials, k2, b.total_trials).ok_or("degenerate")?;
            ensure(z.abs() <= 3.0, || format!("{} at n={n}: {} vs {k2}, z = {z:.2}", row.class, row.observed_count))?;
            worst = worst.max(z.abs());
            checked += 1;
        }
    }
    ensure(checked > 0, || "no classes compared".into())?;
    Ok(format!("{checked} classes, max |z| {worst:.2}"))
}

// ---------------------------------------------------------------------------
// 6. Moments

fn criterion_6() -> Outcome {
    let p = 3u64;
    let mut notes = Vec::new();
    for (exps, limit, seed) in [(vec![1u32], 1.0, 61u64), (vec![1, 1], 3.0, 62), (vec![2], 1.0, 63)] {
        let t = PartitionType::new(exps.clone()).map_err(|e| e.to_string())?;
        let predicted = theory::expected_surjections(&t, p).map_err(|e| e.to_string())?;
        ensure(predicted.to_f64() == Some(limit), || format!("predicted moment for {exps:?} is {predicted}"))?;
        let g = t.group(p).map_err(|e| e.to_string())?;
        let m = estimate_surjection_moment(p, 8, &g, 100_000, seed, &HaarOptions::default()).map_err(|e| e.to_string())?;
        let used = m.trials - m.precision_exceeded;
        let z = mean_z(m.mean(), m.variance(), used, limit).ok_or("degenerate")?;
        ensure(z.abs() <= 3.0, || format!("sur onto {exps:?}: mean {:.4} vs {limit}, z = {z:.2}", m.mean()))?;
        notes.push(format!("{exps:?}: {:.3}", m.mean()));
    }
    let r = graph_cyclic_report().as_ref().map_err(Clone::clone)?;
    for p in [2u64, 3] {
        let row = r.row(&format!("mean_p^rank(p={p})")).ok_or("no moment row")?;
        let z = row.z_score.ok_or("no z-score")?;
        ensure(row.expected_ratio == Some(2.0), || format!("expected mean {:?}", row.expected_ratio))?;
        ensure(z.abs() <= 3.0, || format!("mean {p}^rank = {:?}, z = {z:.2}", row.observed_ratio))?;
        notes.push(format!("E[{p}^r] {:.3}", row.observed_ratio.unwrap_or(f64::NAN)));
    }
    Ok(notes.join(", "))
}

// ---------------------------------------------------------------------------
// 7. Constants

fn criterion_7() -> Outcome {
    let checks = [
        ("c_p(2)", theory::c_p(2, theory::DEFAULT_TERMS), 0.4194, 0.4195),
        ("c_p(17)", theory::c_p(17, theory::DEFAULT_TERMS), 0.9409, 0.9410),
        ("global", theory::cyclic_probability_global(theory::DEFAULT_PRIME_BOUND, theory::DEFAULT_TERMS), 0.7935, 0.7936),
        ("odd", theory::cyclic_probability_odd(theory::DEFAULT_PRIME_BOUND, theory::DEFAULT_TERMS), 0.9455, 0.9465),
    ];
    let mut notes = Vec::new();
    for (name, pred, lo, hi) in checks {
        let pred = pred.map_err(|e| format!("{name}: {e}"))?;
        let (v, b) = (pred.to_f64(), pred.bound_f64());
        ensure(lo < v - b && v + b < hi, || format!("{name} = {v} ± {b} not inside ({lo}, {hi})"))?;
        ensure(b < 1e-9, || format!("{name}: tail bound {b}"))?;
        notes.push(format!("{name} {}", pred.render()));
    }
    Ok(notes.join(", "))
}

// ---------------------------------------------------------------------------
// 8. Oracles

/// Lower-triangular basis of the column lattice of a nonsingular matrix:
/// column `j` vanishes above row `j` and has a positive diagonal entry.
fn triangular_basis(cols: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let k = cols.len();
    let mut rest = cols;
    let mut basis = Vec::with_capacity(k);
    for j in 0..k {
        loop {
            let nonzero: Vec<usize> = (0..rest.len()).filter(|&i| rest[i][j] != 0).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let piv = *nonzero.iter().min_by_key(|&&i| rest[i][j].abs()).unwrap();
            for &i in &nonzero {
                if i != piv {
                    let q = rest[i][j].div_euclid(rest[piv][j]);
                    let pv = rest[piv].clone();
                    for (x, y) in rest[i].iter_mut().zip(&pv) {
                        *x -= q * y;
                    }
                }
            }
        }
        let i = (0..rest.len()).find(|&i| rest[i][j] != 0).expect("nonsingular");
        let mut b = rest.swap_remove(i);
        if b[j] < 0 {
            b.iter_mut().for_each(|x| *x = -*x);
        }
        basis.push(b);
    }
    basis
}

fn in_lattice(basis: &[Vec<i128>], mut y: Vec<i128>) -> bool {
    for (j, b) in basis.iter().enumerate() {
        if y[j].rem_euclid(b[j]) != 0 {
            return false;
        }
        let q = y[j] / b[j];
        for (x, v) in y.iter_mut().zip(b) {
            *x -= q * v;
        }
    }
    y.iter().all(|&x| x == 0)
}

/// `#{x ∈ Z^k / L : m x ∈ L}` by walking the box of coset representatives.
fn torsion_count(basis: &[Vec<i128>], m: i128) -> u64 {
    let k = basis.len();
    let diag: Vec<i128> = (0..k).map(|j| basis[j][j]).collect();
    let mut x = vec![0i128; k];
    let mut count = 0;
    loop {
        if in_lattice(basis, x.iter().map(|v| v * m).collect()) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == k {
                return count;
            }
            x[i] += 1;
            if x[i] < diag[i] {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn cokernel_oracle() -> Result<usize, String> {
    let mut done = 0;
    let mut trial = 0u64;
    while done < 200 {
        let mut rng = trial_rng(8_001, trial);
        trial += 1;
        let k = 1 + uniform_below(&mut rng, 4) as usize;
        let entries: Vec<i64> = (0..k * k).map(|_| uniform_below(&mut rng, 11) as i64 - 5).collect();
        let rows: Vec<Vec<i64>> = entries.chunks(k).map(<[i64]>::to_vec).collect();
        let m = IntMatrix::from_rows(&rows);
        let det = jacpair_core::linalg::determinant(&m).map_err(|e| e.to_string())?;
        if det.is_zero() {
            continue;
        }
        let cols: Vec<Vec<i128>> = (0..k).map(|j| (0..k).map(|i| entries[i * k + j] as i128).collect()).collect();
        let basis = triangular_basis(cols);
        let order: i128 = basis.iter().enumerate().map(|(j, b)| b[j]).product();
        let det = det.to_i128().unwrap().abs();
        ensure(order == det, || format!("lattice index {order} vs |det| {det}"))?;
        let g = cokernel_invariants(&m);
        let factors = g.factors_u64().ok_or("huge factor")?;
        ensure(g.order() == BigUint::from(det as u64), || format!("{rows:?}: order {} vs {det}", g.order()))?;
        for p in prime_divisors(det as u64) {
            let mut pk = 1u64;
            loop {
                pk *= p;
                let expected: u64 = factors.iter().map(|&d| jacpair_core::arith::gcd(d, pk)).product();
                let got = torsion_count(&basis, pk as i128);
                ensure(got == expected, || format!("{rows:?}: |Γ[{pk}]| = {got}, invariants {factors:?} give {expected}"))?;
                if !(det as u64).is_multiple_of(pk) {
                    break;
                }
            }
        }
        done += 1;
    }
    Ok(done)
}

/// Every Gram matrix on a 3-group of order at most 81.
fn odd_classification_oracle() -> Result<usize, String> {
    let p = 3u64;
    let mut checked = 0;
    let partitions: Vec<Vec<u32>> = vec![
        vec![1],
        vec![2],
        vec![3],
        vec![4],
        vec![1, 1],
        vec![1, 2],
        vec![2, 2],
        vec![1, 3],
        vec![1, 1, 1],
        vec![1, 1, 2],
        vec![1, 1, 1, 1],
    ];
    for exps in partitions {
        let k = exps.len();
        let factors: Vec<u64> = exps.iter().map(|&e| p.pow(e)).collect();
        let slots: Vec<(usize, usize, u64)> =
            (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).map(|(i, j)| (i, j, factors[i].min(factors[j]))).collect();
        let mut digits = vec![0u64; slots.len()];
        let mut classes: BTreeMap<String, PairingGram> = BTreeMap::new();
        'outer: loop {
            let mut values = vec![(0i64, 1u64); k * k];
            for (&(i, j, d), &v) in slots.iter().zip(&digits) {
                values[i * k + j] = (v as i64, d);
                values[j * k + i] = (v as i64, d);
            }
            let at = |step: &str, e: jacpair_core::Error| format!("{step} on {factors:?} {values:?}: {e}");
            let gram = PairingGram::from_fractions(&factors, &values).map_err(|e| at("gram", e))?;
            if gram.is_nondegenerate(1 << 10).map_err(|e| at("nondegeneracy", e))? {
                let s = SylowPairing::new(p, gram.clone()).map_err(|e| at("sylow", e))?;
                let class = classify_odd_p(&s).map_err(|e| at("classify", e))?;
                let iso = is_isomorphic(&gram, &class.pairing(), 1 << 10).map_err(|e| at("isometry", e))?;
                ensure(iso, || format!("{factors:?} {values:?} classified as {class} but not isometric to it"))?;
                classes.entry(class.to_string()).or_insert(gram);
                checked += 1;
            }
            for (i, d) in digits.iter_mut().enumerate() {
                *d += 1;
                if *d < slots[i].2 {
                    continue 'outer;
                }
                *d = 0;
            }
            break;
        }
        // distinct symbols must be distinct isometry classes
        let reps: Vec<(&String, &PairingGram)> = classes.iter().collect();
        for (a, (ca, ga)) in reps.iter().enumerate() {
            for (cb, gb) in &reps[a + 1..] {
                let iso = is_isomorphic(ga, gb, 1 << 10).map_err(|e| e.to_string())?;
                ensure(!iso, || format!("{ca} and {cb} are isometric"))?;
            }
        }
    }
    Ok(checked)
}

fn q_binomial_identity() -> Result<usize, String> {
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        for k in 0..=6u32 {
            let mut lhs = BigUint::zero();
            for j in 0..=k {
                lhs += BigUint::from(p).pow(j * j.saturating_sub(1) / 2) * theory::gaussian_binomial(k, j, p).map_err(|e| e.to_string())?;
            }
            let rhs: BigUint = (0..k).map(|j| BigUint::from(p).pow(j) + 1u32).product();
            ensure(lhs == rhs, || format!("p={p}, k={k}: {lhs} vs {rhs}"))?;
            ensure(theory::rank_moment(k, p) == rhs, || format!("rank_moment({k}, {p})"))?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn criterion_8() -> Outcome {
    let a = cokernel_oracle()?;
    let b = odd_classification_oracle()?;
    let c = q_binomial_identity()?;
    Ok(format!("{a} cokernels, {b} pairings on 3-groups, {c} q-binomial cases"))
}

// ---------------------------------------------------------------------------
// 9. Determinism of the CLI across thread counts

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_jacpair")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok(out.stdout)
}

fn criterion_9() -> Outcome {
    let experiments: &[&[&str]] = &[
        &["simulate-graphs", "--kind", "graph-cyclic", "--n", "14", "--trials", "2500"],
        &["simulate-graphs", "--kind", "graph-pairing-freq", "--n", "12", "--primes", "2", "--trials", "2500"],
        &["simulate-graphs", "--kind", "graph-two-primes", "--n", "12", "--trials", "2500"],
        &["simulate-haar", "--kind", "haar-mu", "--n", "4", "--primes", "2", "--trials", "2500"],
        &["simulate-haar", "--kind", "haar-mu", "--n", "4", "--primes", "3", "--zero-sum", "--trials", "2500"],
        &["simulate-haar", "--kind", "haar-moments", "--n", "6", "--target", "1,1", "--trials", "2500"],
    ];
    let mut compared = 0;
    for exp in experiments {
        for format in ["csv", "json"] {
            let mut outputs = Vec::new();
            for threads in ["1", "3", "3"] {
                let mut args = exp.to_vec();
                args.extend(["--seed", "99", "--format", format, "--threads", threads]);
                outputs.push(cli(&args)?);
            }
            ensure(!outputs[0].is_empty(), || format!("{exp:?}: empty output"))?;
            ensure(outputs.iter().all(|o| o == &outputs[0]), || format!("{exp:?} --format {format}: outputs differ"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} experiment/format pairs byte-identical across 1 and 3 threads"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Aut counts", criterion_1),
        ("cyclic probability", criterion_2),
        ("pairing-frequency ratios", criterion_3),
        ("Haar finite-n measure", criterion_4),
        ("zero-sum identity", criterion_5),
        ("moments", criterion_6),
        ("prediction constants", criterion_7),
        ("oracle equivalence", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg} [{secs:.1} s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
