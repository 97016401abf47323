//! Command-line interface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use jacpair_core::classify::{classify, Catalog};
use jacpair_core::pairing::{cokernel_pairing, count_aut_pairing, jacobian_with_pairing, sylow_split, DEFAULT_BOUND};
use jacpair_core::theory::{self, PartitionType, Prediction};
use jacpair_core::{Graph, IntMatrix, PairingClass, PairingGram};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind, Format};
use crate::harness::{self, HarnessError};
use crate::report;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_FLAGGED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "jacpair", version, about = "Jacobians of random graphs with their duality pairings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a graph experiment (graph-cyclic, graph-pairing-freq, graph-two-primes).
    SimulateGraphs(SimulateArgs),
    /// Run a Haar-random matrix experiment (haar-mu, haar-moments).
    SimulateHaar(SimulateArgs),
    /// Evaluate a closed-form prediction.
    Predict(PredictArgs),
    /// Classify the cokernel pairing of a symmetric integer matrix or the
    /// Jacobian of a graph read from a file.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Experiment file (JSON or TOML); flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub kind: Option<ExperimentKind>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Worker threads; reports do not depend on this.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    #[arg(long)]
    pub catalog_bound: Option<u64>,
    #[arg(long)]
    pub precision: Option<u32>,
    #[arg(long)]
    pub guard: Option<u32>,
    #[arg(long)]
    pub zero_sum: bool,
    /// Surjection-moment target as comma-separated exponents; repeatable.
    #[arg(long = "target")]
    pub targets: Vec<String>,
    /// Exit with status 3 when any row or the precision rate is flagged.
    #[arg(long)]
    pub strict: bool,
}

impl clap::ValueEnum for ExperimentKind {
    fn value_variants<'a>() -> &'a [Self] {
        &[Self::GraphCyclic, Self::GraphPairingFreq, Self::GraphTwoPrimes, Self::HaarMu, Self::HaarMoments]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// `∏_{i≥1} (1 - p^{1-2i})`.
    #[value(name = "c-p")]
    CP,
    /// Limiting probability that the Sylow `p`-part is cyclic.
    CyclicP,
    /// Limiting probability that the whole Jacobian is cyclic.
    CyclicGlobal,
    /// Same product over odd primes.
    CyclicOdd,
    /// Limiting probability of a class at one prime.
    Mu,
    /// Exact probability of a class for `n×n` Haar matrices.
    MuN,
    /// Exact probability of a class for zero-sum `n×n` Haar matrices.
    MuZerosum,
    /// Expected surjections onto a target (limit, or exact at `--n`).
    Surjections,
    /// `∫ p^{k r_p} dμ`.
    RankMoment,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(value_enum)]
    pub quantity: Quantity,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Pairing class text such as `A3+B3` or `E4`.
    #[arg(long)]
    pub class: Option<String>,
    /// Target exponents, e.g. `1,1` for `(Z/p)^2`.
    #[arg(long, value_delimiter = ',')]
    pub target: Option<Vec<u32>>,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = theory::DEFAULT_TERMS)]
    pub terms: u32,
    #[arg(long, default_value_t = theory::DEFAULT_PRIME_BOUND)]
    pub prime_bound: u64,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub file: PathBuf,
    /// Read an edge list (first line: vertex count, then `u v` per line)
    /// instead of a symmetric integer matrix.
    #[arg(long)]
    pub edges: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Harness(HarnessError),
    #[error(transparent)]
    Report(#[from] report::ReportError),
    #[error("{0}")]
    Runtime(String),
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(c) => CliError::Config(c),
            other => CliError::Harness(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Input(_) => EXIT_CONFIG,
            _ => EXIT_FAILURE,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Runs a parsed command, writing results to `out`; returns the exit status.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::SimulateGraphs(a) => simulate(a, true, out),
        Command::SimulateHaar(a) => simulate(a, false, out),
        Command::Predict(a) => predict(&a, out).map(|_| EXIT_OK),
        Command::Classify(a) => classify_file(&a, out).map(|_| EXIT_OK),
    }
}

/// The effective experiment for a simulate subcommand.
pub fn build_config(a: &SimulateArgs, graphs: bool) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &a.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let kind = a.kind.unwrap_or(if graphs { ExperimentKind::GraphCyclic } else { ExperimentKind::HaarMu });
            ExperimentConfig::new(kind)
        }
    };
    if let Some(k) = a.kind {
        if a.config.is_some() && k != cfg.kind {
            return Err(ConfigError::Invalid(format!("--kind {k} contradicts the config kind {}", cfg.kind)).into());
        }
    }
    if cfg.kind.is_graph() != graphs {
        let sub = if graphs { "simulate-graphs" } else { "simulate-haar" };
        return Err(ConfigError::Invalid(format!("{sub} cannot run a {} experiment", cfg.kind)).into());
    }
    macro_rules! set {
        ($($f:ident),*) => { $( if let Some(v) = a.$f.clone() { cfg.$f = v; } )* };
    }
    set!(seed, trials, n, q, primes, catalog_bound, precision, guard);
    if a.zero_sum {
        cfg.zero_sum = true;
    }
    if !a.targets.is_empty() {
        cfg.targets = a
            .targets
            .iter()
            .map(|t| t.split(',').map(|e| e.trim().parse::<u32>()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()
            .map_err(|e| ConfigError::Invalid(format!("bad --target: {e}")))?;
    }
    let mut output = cfg.output.clone().unwrap_or_default();
    if let Some(p) = &a.out {
        output.path = Some(p.clone());
    }
    if let Some(f) = a.format {
        output.format = f;
    }
    cfg.output = Some(output);
    cfg.validate()?;
    Ok(cfg)
}

fn simulate(a: SimulateArgs, graphs: bool, out: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = build_config(&a, graphs)?;
    let rep = harness::run(&cfg, a.threads)?;
    let output = cfg.output.clone().unwrap_or_default();
    let text = report::render(&rep, output.format)?;
    match &output.path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display())))?,
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Runtime(e.to_string()))?,
    }
    for f in &rep.flags {
        eprintln!("flag: {f}");
    }
    Ok(if a.strict && !rep.flags.is_empty() { EXIT_FLAGGED } else { EXIT_OK })
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("--{name} is required")))
}

fn single_prime_class(text: &str) -> Result<(PairingClass, u64), CliError> {
    let class: PairingClass = text.parse().map_err(input_err)?;
    match class.primes()[..] {
        [p] => Ok((class, p)),
        [] => Err(CliError::Input("give --p with the trivial class; use `1` only with mu-n".into())),
        _ => Err(CliError::Input("class must involve a single prime".into())),
    }
}

fn print_prediction(out: &mut dyn Write, name: &str, pred: &Prediction) -> Result<(), CliError> {
    let line = if pred.truncation_bound.is_zero() {
        format!("{name} = {} (exact: {})\n", pred.render(), pred.value)
    } else {
        format!("{name} = {} (truncation bound {:.3e})\n", pred.render(), pred.bound_f64())
    };
    out.write_all(line.as_bytes()).map_err(|e| CliError::Runtime(e.to_string()))
}

fn predict(a: &PredictArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (pred, name) = match a.quantity {
        Quantity::CP => {
            let p = need(a.p, "p")?;
            (theory::c_p(p, a.terms).map_err(input_err)?, format!("c_p(p={p})"))
        }
        Quantity::CyclicP => {
            let p = need(a.p, "p")?;
            (theory::cyclic_p_probability(p, a.terms).map_err(input_err)?, format!("cyclic_p(p={p})"))
        }
        Quantity::CyclicGlobal => (theory::cyclic_probability_global(a.prime_bound, a.terms).map_err(input_err)?, "cyclic_global".into()),
        Quantity::CyclicOdd => (theory::cyclic_probability_odd(a.prime_bound, a.terms).map_err(input_err)?, "cyclic_odd".into()),
        Quantity::Mu | Quantity::MuN | Quantity::MuZerosum => {
            let text = a.class.as_deref().ok_or_else(|| CliError::Input("--class is required".into()))?;
            let (class, p) = if text == "1" {
                (PairingClass::trivial(), need(a.p, "p")?)
            } else {
                single_prime_class(text)?
            };
            if a.p.is_some_and(|q| q != p) {
                return Err(CliError::Input("--p does not match the class".into()));
            }
            let aut = class.aut_count(DEFAULT_BOUND).map_err(input_err)?;
            let order = class.order();
            let rank = class.group().rank();
            let pred = match a.quantity {
                Quantity::Mu => theory::mu_measure(p, &order, aut),
                Quantity::MuN => theory::mu_n_finite(p, need(a.n, "n")?, rank, &order, aut),
                _ => theory::mu_n_zerosum(p, need(a.n, "n")?, rank, &order, aut),
            }
            .map_err(input_err)?;
            (pred, format!("{}({class}, p={p})", quantity_name(a.quantity)))
        }
        Quantity::Surjections => {
            let p = need(a.p, "p")?;
            let t = a.target.clone().ok_or_else(|| CliError::Input("--target is required".into()))?;
            let target = PartitionType::new(t.clone()).map_err(input_err)?;
            let value = match a.n {
                Some(n) => theory::expected_surjections_finite(&target, p, n).map_err(input_err)?,
                None => BigRational::from_integer(BigInt::from(theory::expected_surjections(&target, p).map_err(input_err)?)),
            };
            (Prediction::exact(value, 0), format!("surjections({})", harness::target_name(p, &t)))
        }
        Quantity::RankMoment => {
            let p = need(a.p, "p")?;
            let v = theory::rank_moment(a.k, p);
            (Prediction::exact(BigRational::from_integer(BigInt::from(v)), 0), format!("rank_moment(k={}, p={p})", a.k))
        }
    };
    print_prediction(out, &name, &pred)
}

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Mu => "mu",
        Quantity::MuN => "mu_n",
        _ => "mu_zerosum",
    }
}

/// Whitespace- or comma-separated integers, one matrix row per line; `#`
/// starts a comment.
pub fn parse_matrix(text: &str) -> Result<IntMatrix, CliError> {
    let rows: Vec<Vec<i64>> = data_lines(text)
        .map(|l| l.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(|s| s.parse::<i64>().map_err(input_err)).collect())
        .collect::<Result<_, _>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(CliError::Input("matrix must be square and nonempty".into()));
    }
    Ok(IntMatrix::from_rows(&rows))
}

/// First line the vertex count, then one `u v` edge per line.
pub fn parse_edges(text: &str) -> Result<Graph, CliError> {
    let mut lines = data_lines(text);
    let n: usize = lines.next().ok_or_else(|| CliError::Input("empty edge list".into()))?.trim().parse().map_err(input_err)?;
    let mut edges = Vec::new();
    for l in lines {
        let v: Vec<usize> = l.split_whitespace().map(|s| s.parse().map_err(input_err)).collect::<Result<_, _>>()?;
        match v[..] {
            [a, b] => edges.push((a, b)),
            _ => return Err(CliError::Input(format!("bad edge line {l:?}"))),
        }
    }
    Graph::from_edges(n, &edges).map_err(input_err)
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// Class text and `|Aut|` of a pairing; the automorphism count is the
/// product over Sylow parts.
pub fn describe(pairing: &PairingGram) -> Result<(String, Option<u64>), CliError> {
    let two_order = pairing.sylow_part(2).group().order_u64();
    let catalog = match two_order {
        Some(o) if o <= DEFAULT_BOUND => Catalog::new(2, o.max(2)).map_err(input_err)?,
        _ => return Err(CliError::Input("Sylow 2-part is too large to classify".into())),
    };
    let class = classify(pairing, &catalog).map_err(input_err)?;
    let mut aut = Some(1u64);
    for part in sylow_split(pairing).map_err(input_err)? {
        aut = match (aut, count_aut_pairing(&part.pairing, DEFAULT_BOUND)) {
            (Some(a), Ok(b)) => a.checked_mul(b),
            _ => None,
        };
    }
    Ok((class.to_string(), aut))
}

fn classify_file(a: &ClassifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = read(&a.file)?;
    let pairing = if a.edges {
        jacobian_with_pairing(&parse_edges(&text)?).map_err(input_err)?
    } else {
        cokernel_pairing(&parse_matrix(&text)?).map_err(input_err)?
    };
    let (class, aut) = describe(&pairing)?;
    let aut = aut.map_or_else(|| format!("unavailable (Sylow parts above {DEFAULT_BOUND})"), |a| a.to_string());
    let s = format!("group: {}\nclass: {class}\naut: {aut}\n", pairing.group());
    out.write_all(s.as_bytes()).map_err(|e| CliError::Runtime(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<u8, CliError>, String) {
        let cli = Cli::try_parse_from(std::iter::once("jacpair").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let r = execute(cli, &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn predict_constants() {
        let (r, s) = run_args(&["predict", "c-p", "--p", "2"]);
        assert_eq!(r.unwrap(), 0);
        assert!(s.starts_with("c_p(p=2) = 0.4194"), "{s}");
        let (_, s) = run_args(&["predict", "mu-n", "--class", "1", "--p", "3", "--n", "4"]);
        assert!(s.contains("(exact: 52/81)"), "{s}");
        let (_, s) = run_args(&["predict", "surjections", "--p", "3", "--target", "1,1"]);
        assert!(s.contains("= 3 (exact: 3)"), "{s}");
        let (_, s) = run_args(&["predict", "rank-moment", "--p", "2", "--k", "2"]);
        assert!(s.contains("(exact: 6)"), "{s}");
        let (r, _) = run_args(&["predict", "mu", "--class", "A2+A3"]);
        assert_eq!(r.unwrap_err().exit_code(), EXIT_CONFIG);
        let (r, _) = run_args(&["predict", "c-p"]);
        assert_eq!(r.unwrap_err().exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn classify_files() {
        let dir = tempfile::tempdir().unwrap();
        let k4 = dir.path().join("k4.txt");
        std::fs::write(&k4, "4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
        let (r, s) = run_args(&["classify", "--edges", k4.to_str().unwrap()]);
        assert_eq!(r.unwrap(), 0);
        assert!(s.contains("group: (4, 4)"), "{s}");
        let m = dir.path().join("m.txt");
        std::fs::write(&m, "# diag(3, 1)\n3 0\n0 1\n").unwrap();
        let (_, s) = run_args(&["classify", m.to_str().unwrap()]);
        assert_eq!(s, "group: (3)\nclass: A3\naut: 2\n");
        std::fs::write(&m, "1 2\n3\n").unwrap();
        let (r, _) = run_args(&["classify", m.to_str().unwrap()]);
        assert_eq!(r.unwrap_err().exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn simulate_config_errors() {
        let (r, _) = run_args(&["simulate-graphs", "--kind", "haar-mu"]);
        assert_eq!(r.unwrap_err().exit_code(), EXIT_CONFIG);
        let (r, _) = run_args(&["simulate-graphs", "--q", "1.5"]);
        assert_eq!(r.unwrap_err().exit_code(), EXIT_CONFIG);
        let (r, _) = run_args(&["simulate-haar", "--config", "/nonexistent.toml"]);
        assert_eq!(r.unwrap_err().exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn simulate_writes_csv() {
        let (r, s) = run_args(&["simulate-haar", "--kind", "haar-mu", "--n", "2", "--primes", "3", "--trials", "300", "--seed", "1"]);
        assert_eq!(r.unwrap(), 0);
        assert!(s.starts_with(&report::CSV_COLUMNS.join(",")));
        assert!(s.lines().any(|l| l.starts_with("A3,")));
    }

    #[test]
    fn overrides_apply() {
        let cli = Cli::try_parse_from([
            "jacpair", "simulate-haar", "--kind", "haar-moments", "--n", "6", "--primes", "5", "--target", "1,1", "--target", "2", "--zero-sum",
            "--format", "json",
        ])
        .unwrap();
        let Command::SimulateHaar(a) = cli.command else { panic!() };
        let cfg = build_config(&a, false).unwrap();
        assert_eq!(cfg.targets, vec![vec![1, 1], vec![2]]);
        assert_eq!((cfg.n, cfg.primes.clone(), cfg.zero_sum), (6, vec![5], true));
        assert_eq!(cfg.output.unwrap().format, Format::Json);
    }
}
