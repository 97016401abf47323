//! Experiment runners.
//!
//! Trials are split into fixed chunks of [`CHUNK`] consecutive indices. Each
//! chunk is processed independently (trial `t` always uses the stream
//! `(seed, t)`) and the partial results are merged in chunk order, so a
//! report does not depend on the number of worker threads.

use std::ops::Range;

use jacpair_core::classify::{classify_odd_p, other_key};
use jacpair_core::graph::{sample_gnq, GraphSampleConfig};
use jacpair_core::haar::{
    cokernel_group_mod_pn, estimate_mu_n_range, jacobian_sylow_pairing, sample_sym, sample_sym_zerosum, HaarOptions, MomentSums,
    PRECISION_EXCEEDED_KEY,
};
use jacpair_core::linalg::cokernel_invariants;
use jacpair_core::pairing::SurjectionCounter;
use jacpair_core::theory::{self, rational_to_f64, PartitionType};
use jacpair_core::{Catalog, FiniteAbelianGroup, FrequencyTable, PairingClass, SylowPairing};
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind};
use crate::report::{ComparisonRow, Report};
use crate::stats::{mean_z, proportion_z, ratio_z, wilson_interval, Z95};

/// Trials per work unit.
pub const CHUNK: u64 = 1000;

/// `|z|` above which a row is flagged.
pub const FLAG_Z: f64 = 3.0;

pub const CYCLIC_KEY: &str = "cyclic";
pub const NONCYCLIC_KEY: &str = "noncyclic";
pub const DISCONNECTED_KEY: &str = "disconnected";

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] jacpair_core::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

type Result<T> = std::result::Result<T, HarnessError>;

fn order_u64(g: &FiniteAbelianGroup) -> u64 {
    g.order_u64().unwrap_or(u64::MAX)
}

/// Runs `cfg` on `threads` workers.
pub fn run(cfg: &ExperimentConfig, threads: usize) -> Result<Report> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().map_err(|e| HarnessError::Pool(e.to_string()))?;
    pool.install(|| match cfg.kind {
        ExperimentKind::GraphCyclic => run_graph_cyclic(cfg),
        ExperimentKind::GraphPairingFreq => run_graph_pairing_freq(cfg),
        ExperimentKind::GraphTwoPrimes => run_graph_two_primes(cfg),
        ExperimentKind::HaarMu => run_haar_mu(cfg),
        ExperimentKind::HaarMoments => run_haar_moments(cfg),
    })
}

fn chunks(trials: u64) -> Vec<Range<u64>> {
    (0..trials.div_ceil(CHUNK)).map(|c| c * CHUNK..((c + 1) * CHUNK).min(trials)).collect()
}

/// Maps every chunk (in parallel on the current pool) and returns the
/// results in chunk order.
fn map_chunks<T, F>(trials: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Range<u64>) -> Result<T> + Sync + Send,
{
    chunks(trials).into_par_iter().map(f).collect()
}

fn merge_tables(parts: &[FrequencyTable]) -> FrequencyTable {
    parts.iter().fold(FrequencyTable::new(), |acc, t| acc.merged(t))
}

fn graph_config(cfg: &ExperimentConfig) -> Result<GraphSampleConfig> {
    Ok(GraphSampleConfig::new(cfg.n, cfg.q, cfg.seed, cfg.connected_only)?)
}

fn base_row(class: &str, k: u64, total: u64) -> ComparisonRow {
    let (lo, hi) = wilson_interval(k, total, Z95);
    ComparisonRow {
        class: class.to_string(),
        observed_count: k,
        total,
        proportion: if total == 0 { 0.0 } else { k as f64 / total as f64 },
        wilson_lo: lo,
        wilson_hi: hi,
        observed_ratio: None,
        expected_ratio: None,
        z_score: None,
    }
}

fn observed_ratio(k_trivial: u64, k: u64) -> Option<f64> {
    (k > 0).then(|| k_trivial as f64 / k as f64)
}

fn finish(cfg: &ExperimentConfig, table: &FrequencyTable, mut rows: Vec<ComparisonRow>, mut flags: Vec<String>) -> Report {
    rows.sort_by_key(|a| row_order(&a.class));
    for r in &rows {
        if let Some(z) = r.z_score.filter(|z| z.abs() > FLAG_Z) {
            flags.push(format!("{}: |z| = {:.3} exceeds {FLAG_Z}", r.class, z.abs()));
        }
    }
    let pe = table.count(PRECISION_EXCEEDED_KEY);
    if pe > 0 && pe as f64 / cfg.trials as f64 > cfg.precision_exceeded_limit {
        flags.push(format!(
            "{PRECISION_EXCEEDED_KEY}: rate {} exceeds the limit {}",
            pe as f64 / cfg.trials as f64,
            cfg.precision_exceeded_limit
        ));
    }
    let mut echoed = cfg.clone();
    echoed.output = None;
    Report {
        software: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        config: echoed,
        total_trials: cfg.trials,
        discarded: table.discarded(),
        rows,
        flags,
    }
}

/// Class rows by group order then text; other keys after them by text.
fn row_order(key: &str) -> (u8, u64, String) {
    match key.parse::<PairingClass>() {
        Ok(c) => (0, order_u64(&c.group()), key.to_string()),
        Err(_) => (1, 0, key.to_string()),
    }
}

fn class_of(s: &SylowPairing, catalog: &Catalog) -> Result<PairingClass> {
    if s.group().is_trivial() {
        return Ok(PairingClass::trivial());
    }
    Ok(if s.prime == 2 { catalog.classify(s)?.class.clone() } else { classify_odd_p(s)? })
}

/// Connected `G(n, q)`: fraction with cyclic Jacobian against the product
/// over all primes, plus the mean of `p^{r_p}` for each configured prime.
pub fn run_graph_cyclic(cfg: &ExperimentConfig) -> Result<Report> {
    let gcfg = graph_config(cfg)?;
    let parts = map_chunks(cfg.trials, |range| {
        let mut table = FrequencyTable::new();
        let mut moments = vec![MomentSums::default(); cfg.primes.len()];
        for t in range {
            let sg = sample_gnq(&gcfg, t);
            table.add_discarded(sg.discarded);
            let jac = cokernel_invariants(&sg.graph.default_reduced_laplacian());
            table.record(if jac.is_cyclic() { CYCLIC_KEY } else { NONCYCLIC_KEY });
            for (m, &p) in moments.iter_mut().zip(&cfg.primes) {
                let x = (p as f64).powi(jac.p_rank(p) as i32);
                m.trials += 1;
                m.sum += x;
                m.sum_sq += x * x;
            }
        }
        Ok((table, moments))
    })?;
    let table = merge_tables(&parts.iter().map(|p| p.0.clone()).collect::<Vec<_>>());
    let predicted = theory::cyclic_probability_global(theory::DEFAULT_PRIME_BOUND, theory::DEFAULT_TERMS)?.to_f64();
    let mut rows = Vec::new();
    for (key, pi) in [(CYCLIC_KEY, predicted), (NONCYCLIC_KEY, 1.0 - predicted)] {
        let k = table.count(key);
        let mut r = base_row(key, k, table.total());
        r.observed_ratio = Some(r.proportion);
        r.expected_ratio = Some(pi);
        r.z_score = proportion_z(k, table.total(), pi);
        rows.push(r);
    }
    for (i, &p) in cfg.primes.iter().enumerate() {
        let mut m = MomentSums::default();
        for part in &parts {
            m.merge(&part.1[i]);
        }
        rows.push(moment_row(&format!("mean_p^rank(p={p})"), &m, theory::rank_moment(1, p).to_f64().unwrap_or(f64::INFINITY)));
    }
    Ok(finish(cfg, &table, rows, Vec::new()))
}

fn moment_row(class: &str, m: &MomentSums, expected: f64) -> ComparisonRow {
    let used = m.trials - m.precision_exceeded;
    let mut r = base_row(class, used, m.trials);
    if used > 0 {
        r.observed_ratio = Some(m.mean());
        r.z_score = if used > 1 { mean_z(m.mean(), m.variance(), used, expected) } else { None };
    }
    r.expected_ratio = Some(expected);
    r
}

/// Rows for the trivial class, every catalog class up to the bound, and the
/// remaining observed keys.
fn ratio_rows(table: &FrequencyTable, expected: &[(String, f64)]) -> Vec<ComparisonRow> {
    let k_triv = table.count("1");
    let mut rows = Vec::new();
    for (key, e) in expected {
        let k = table.count(key);
        let mut r = base_row(key, k, table.total());
        r.observed_ratio = observed_ratio(k_triv, k);
        r.expected_ratio = Some(*e);
        if key != "1" {
            r.z_score = ratio_z(k_triv, k, *e);
        }
        rows.push(r);
    }
    for (key, k) in table.iter() {
        if !expected.iter().any(|(e, _)| e == key) {
            let mut r = base_row(key, k, table.total());
            r.observed_ratio = observed_ratio(k_triv, k);
            rows.push(r);
        }
    }
    rows
}

/// Sylow `p`-part of connected `G(n, q)` Jacobians, class frequencies
/// relative to the trivial class against `|Γ|·|Aut(Γ, δ)|`.
pub fn run_graph_pairing_freq(cfg: &ExperimentConfig) -> Result<Report> {
    let gcfg = graph_config(cfg)?;
    let p = cfg.primes[0];
    let catalog = Catalog::new(p, cfg.catalog_bound)?;
    let parts = map_chunks(cfg.trials, |range| {
        let mut table = FrequencyTable::new();
        for t in range {
            let sg = sample_gnq(&gcfg, t);
            table.add_discarded(sg.discarded);
            if !sg.graph.is_connected() {
                table.record(DISCONNECTED_KEY);
                continue;
            }
            let s = jacobian_sylow_pairing(&sg.graph, p)?;
            let order = s.group().order();
            let key = if order_u64(s.group()) <= cfg.catalog_bound {
                class_of(&s, &catalog)?.to_string()
            } else {
                other_key(&order)
            };
            table.record(key);
        }
        Ok(table)
    })?;
    let table = merge_tables(&parts);
    let expected: Vec<(String, f64)> = catalog.entries().iter().map(|e| (e.class.to_string(), e.expected_ratio() as f64)).collect();
    Ok(finish(cfg, &table, ratio_rows(&table, &expected), Vec::new()))
}

/// Joint Sylow parts at two primes; the expected ratio of a joint class is
/// the product of the per-prime `|Γ|·|Aut(Γ, δ)|`.
pub fn run_graph_two_primes(cfg: &ExperimentConfig) -> Result<Report> {
    let gcfg = graph_config(cfg)?;
    let (p1, p2) = (cfg.primes[0], cfg.primes[1]);
    let (c1, c2) = (Catalog::new(p1, cfg.catalog_bound)?, Catalog::new(p2, cfg.catalog_bound)?);
    let parts = map_chunks(cfg.trials, |range| {
        let mut table = FrequencyTable::new();
        for t in range {
            let sg = sample_gnq(&gcfg, t);
            table.add_discarded(sg.discarded);
            if !sg.graph.is_connected() {
                table.record(DISCONNECTED_KEY);
                continue;
            }
            let s1 = jacobian_sylow_pairing(&sg.graph, p1)?;
            let s2 = jacobian_sylow_pairing(&sg.graph, p2)?;
            let order = s1.group().order() * s2.group().order();
            let key = if order <= cfg.catalog_bound.into() {
                class_of(&s1, &c1)?.join(&class_of(&s2, &c2)?).to_string()
            } else {
                other_key(&order)
            };
            table.record(key);
        }
        Ok(table)
    })?;
    let table = merge_tables(&parts);
    let mut expected = Vec::new();
    for a in c1.entries() {
        for b in c2.entries() {
            if a.order * b.order <= cfg.catalog_bound {
                expected.push((a.class.join(&b.class).to_string(), (a.expected_ratio() * b.expected_ratio()) as f64));
            }
        }
    }
    Ok(finish(cfg, &table, ratio_rows(&table, &expected), Vec::new()))
}

fn haar_options(cfg: &ExperimentConfig) -> HaarOptions {
    HaarOptions { precision: cfg.precision, guard: cfg.guard, zero_sum: cfg.zero_sum }
}

/// Haar cokernel class frequencies against the exact finite-`n`
/// probabilities (the `n - 1` formula for zero-sum matrices).
pub fn run_haar_mu(cfg: &ExperimentConfig) -> Result<Report> {
    let p = cfg.primes[0];
    let opts = haar_options(cfg);
    let catalog = Catalog::new(p, cfg.catalog_bound)?;
    let catalog2 = if p == 2 { catalog.clone() } else { Catalog::new(2, 2)? };
    let parts = map_chunks(cfg.trials, |range| Ok(estimate_mu_n_range(p, cfg.n, range, cfg.seed, &opts, &catalog2)?))?;
    let raw = merge_tables(&parts);
    // classes beyond the bound go to their order bucket
    let mut table = FrequencyTable::new();
    table.add_discarded(raw.discarded());
    for (key, k) in raw.iter() {
        match key.parse::<PairingClass>() {
            Ok(c) if order_u64(&c.group()) > cfg.catalog_bound => table.record_n(other_key(&c.order()), k),
            _ => table.record_n(key, k),
        }
    }
    let n = cfg.effective_n();
    let mu = |rank: usize, order: u64, aut: u64| -> Result<f64> {
        let order = order.into();
        let pred = if cfg.zero_sum { theory::mu_n_zerosum(p, cfg.n, rank, &order, aut)? } else { theory::mu_n_finite(p, n, rank, &order, aut)? };
        Ok(pred.to_f64())
    };
    let mu_trivial = mu(0, 1, 1)?;
    let total = table.total();
    let k_triv = table.count("1");
    let mut rows = Vec::new();
    for e in catalog.entries() {
        let rank = e.class.group().rank();
        if rank > n {
            continue;
        }
        let key = e.class.to_string();
        let k = table.count(&key);
        let pi = mu(rank, e.order, e.aut)?;
        let mut r = base_row(&key, k, total);
        r.observed_ratio = observed_ratio(k_triv, k);
        r.expected_ratio = Some(mu_trivial / pi);
        r.z_score = proportion_z(k, total, pi);
        rows.push(r);
    }
    for (key, k) in table.iter() {
        if !rows.iter().any(|r| r.class == key) {
            let mut r = base_row(key, k, total);
            r.observed_ratio = observed_ratio(k_triv, k);
            rows.push(r);
        }
    }
    Ok(finish(cfg, &table, rows, Vec::new()))
}

/// `Z/p^e1xZ/p^e2...`
pub fn target_name(p: u64, exponents: &[u32]) -> String {
    let mut e = exponents.to_vec();
    e.sort_unstable();
    e.iter().map(|&e| format!("Z/{}", p.pow(e))).collect::<Vec<_>>().join("x")
}

/// Mean number of surjections from the Haar cokernel onto each target.
pub fn run_haar_moments(cfg: &ExperimentConfig) -> Result<Report> {
    let p = cfg.primes[0];
    let targets: Vec<PartitionType> = cfg.targets.iter().map(|t| PartitionType::new(t.clone())).collect::<jacpair_core::Result<_>>()?;
    let counters = targets.iter().map(|t| SurjectionCounter::new(&t.group(p)?)).collect::<jacpair_core::Result<Vec<_>>>()?;
    let parts = map_chunks(cfg.trials, |range| {
        let mut sums = vec![MomentSums::default(); targets.len()];
        let mut table = FrequencyTable::new();
        for t in range {
            let a = if cfg.zero_sum {
                sample_sym_zerosum(p, cfg.precision, cfg.n, cfg.seed, t)?
            } else {
                sample_sym(p, cfg.precision, cfg.n, cfg.seed, t)?
            };
            let g = cokernel_group_mod_pn(&a, cfg.guard);
            table.record(if g.is_some() { "classified" } else { PRECISION_EXCEEDED_KEY });
            for (s, c) in sums.iter_mut().zip(&counters) {
                s.trials += 1;
                match &g {
                    None => s.precision_exceeded += 1,
                    Some(g) => {
                        let x = c.count(g) as f64;
                        s.sum += x;
                        s.sum_sq += x * x;
                    }
                }
            }
        }
        Ok((table, sums))
    })?;
    let table = merge_tables(&parts.iter().map(|p| p.0.clone()).collect::<Vec<_>>());
    let mut rows = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        let mut m = MomentSums::default();
        for part in &parts {
            m.merge(&part.1[i]);
        }
        let expected = rational_to_f64(&theory::expected_surjections_finite(t, p, cfg.effective_n())?);
        rows.push(moment_row(&format!("sur({})", target_name(p, t.exponents())), &m, expected));
    }
    let pe = table.count(PRECISION_EXCEEDED_KEY);
    rows.push(base_row(PRECISION_EXCEEDED_KEY, pe, table.total()));
    Ok(finish(cfg, &table, rows, Vec::new()))
}
