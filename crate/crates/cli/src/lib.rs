//! Command-line front end for `heilbronn-core`.
//!
//! Every command renders a [`output::Table`] as CSV (always with a header
//! row) or as a JSON document `{tool_version, p, command, rows}`. Outputs are
//! cached by the SHA-256 of the tool version and the canonical command, so a
//! repeated invocation is served without recomputation.

pub mod cache;
pub mod output;
pub mod suites;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use heilbronn_core::arith::{primes_in_range, Prime};
use heilbronn_core::fermat::{congruence_count, fermat_quotient, lp_scan, LpCache, LpRecord};
use heilbronn_core::group::{coset_decomposition, CosetLabel};
use heilbronn_core::heilbronn::{heilbronn_sum, interval_sum, scan_bounds, DEFAULT_SCAN_CAP};
use heilbronn_core::spectral::invariant::{gamma_higher_energy, gamma_t_k, psi_k_classes, LabelMap};
use heilbronn_core::stepanov::{
    build_certificate, default_params, verify_certificate, Certificate, MCell, Params,
};
use heilbronn_core::Error;

pub use cache::{compute_count, ResultCache};
use output::{Cell, Table};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "heilbronn", version, about = "Heilbronn sums, energies of Γ ⊂ Z*_{p^2}, Stepanov certificates and Fermat quotients")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    /// Cache directory for results and l_p scans.
    #[arg(long, global = true, env = "HEILBRONN_CACHE")]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize)]
pub enum Command {
    /// Elements of Γ and the coset table of Z_{p^2}.
    Gamma {
        #[arg(long)]
        p: u64,
    },
    /// S(a), or the interval sum of `len` terms from `m`.
    Sum {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        len: Option<u64>,
    },
    /// Bound-ratio report for every prime in [p, pmax].
    Scan {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        pmax: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
        cap: u64,
    },
    /// E(Γ) for k = 2, E_k(Γ) otherwise.
    Energy {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// T_k(Γ).
    Tk {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
    /// The table ψ_k on Z_{p^2}.
    Psi {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
    /// Build an auxiliary-polynomial certificate (always JSON).
    StepanovCert {
        #[arg(long)]
        p: u64,
        /// Cells as i:j pairs, comma separated.
        #[arg(long)]
        cells: String,
        /// A,B,C,D; defaults to the asymptotic choice when admissible.
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value_t = 1)]
        lambda: u64,
    },
    /// Check a certificate file independently of the builder.
    StepanovVerify { file: PathBuf },
    /// Fermat quotients, l_p scans and the congruence count N(H).
    #[command(subcommand)]
    Fermat(FermatCommand),
    /// Run the identity suites for one prime.
    Verify {
        #[arg(long)]
        p: u64,
        /// Number of λ per prime for the difference lemma (default: all for
        /// p <= 7, else 50).
        #[arg(long)]
        sample: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize)]
pub enum FermatCommand {
    /// l_p for every prime in a range lo:hi.
    Lp {
        #[arg(long)]
        range: String,
    },
    /// The Fermat quotient q(n) mod p.
    Q {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
    },
    /// Solutions of ux ≡ y (mod p^2), u ∈ Γ, 0 < |x|, |y| <= H.
    Nk {
        #[arg(long)]
        p: u64,
        #[arg(long = "H")]
        h: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gamma { .. } => "gamma",
            Command::Sum { .. } => "sum",
            Command::Scan { .. } => "scan",
            Command::Energy { .. } => "energy",
            Command::Tk { .. } => "tk",
            Command::Psi { .. } => "psi",
            Command::StepanovCert { .. } => "stepanov-cert",
            Command::StepanovVerify { .. } => "stepanov-verify",
            Command::Fermat(FermatCommand::Lp { .. }) => "fermat lp",
            Command::Fermat(FermatCommand::Q { .. }) => "fermat q",
            Command::Fermat(FermatCommand::Nk { .. }) => "fermat nk",
            Command::Verify { .. } => "verify",
        }
    }

    fn prime_arg(&self) -> Option<u64> {
        match self {
            Command::Gamma { p }
            | Command::Sum { p, .. }
            | Command::Scan { p, .. }
            | Command::Energy { p, .. }
            | Command::Tk { p, .. }
            | Command::Psi { p, .. }
            | Command::StepanovCert { p, .. }
            | Command::Verify { p, .. }
            | Command::Fermat(FermatCommand::Q { p, .. })
            | Command::Fermat(FermatCommand::Nk { p, .. }) => Some(*p),
            Command::StepanovVerify { .. } | Command::Fermat(FermatCommand::Lp { .. }) => None,
        }
    }

    /// Commands whose output depends only on their flags.
    fn cacheable(&self) -> bool {
        !matches!(
            self,
            Command::StepanovVerify { .. } | Command::Verify { .. } | Command::Fermat(FermatCommand::Lp { .. })
        )
    }
}

/// A parsed invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub threads: Option<usize>,
    pub cache: Option<PathBuf>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        RunConfig {
            command: cli.command,
            threads: cli.threads.map(|t| t as usize),
            cache: cli.cache,
            format: cli.format,
            out: cli.out,
        }
    }
}

impl RunConfig {
    /// `command + canonical flags`; threads and output path never change the
    /// bytes produced, so they are not part of it.
    pub fn canonical(&self) -> String {
        #[derive(Serialize)]
        struct Key<'a> {
            command: &'a Command,
            format: Format,
        }
        serde_json::to_string(&Key {
            command: &self.command,
            format: self.format,
        })
        .expect("serializable")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(Error::Internal(_) | Error::PartitionFailed(_)) => EXIT_VERIFY_FAILED,
            CliError::Core(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_USAGE,
        }
    }
}

/// Rendered output plus whether every check it performed passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub verified: bool,
}

fn prime(p: u64) -> Result<Prime, CliError> {
    Prime::new(p).map_err(CliError::Core)
}

fn render(cfg: &RunConfig, table: &Table) -> Vec<u8> {
    match cfg.format {
        Format::Csv => table.to_csv().into_bytes(),
        Format::Json => table.to_json(cfg.command.name(), cfg.command.prime_arg()).into_bytes(),
    }
}

fn parse_pair(s: &str, sep: char, what: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("{what}: expected two integers separated by '{sep}', got {s:?}"));
    let (a, b) = s.split_once(sep).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_params(s: &str) -> Result<Params, CliError> {
    let v: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--params: expected A,B,C,D, got {s:?}")))?;
    match v.as_slice() {
        &[a, b, c, d] => Ok(Params::new(a, b, c, d)),
        _ => Err(CliError::Usage(format!("--params: expected four values, got {}", v.len()))),
    }
}

fn compute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ok = |table: Table| Outcome {
        bytes: render(cfg, &table),
        verified: true,
    };
    let out = match &cfg.command {
        Command::Gamma { p } => {
            let pr = prime(*p)?;
            let dec = coset_decomposition(pr)?;
            let mut t = Table::new(&["coset", "representative", "size", "elements"]);
            let labels = (1..=pr.get())
                .map(CosetLabel::Unit)
                .chain([CosetLabel::PCoset, CosetLabel::Zero]);
            for label in labels {
                let members: Vec<String> = dec.members(label).iter().map(u64::to_string).collect();
                t.push(vec![
                    label.to_string().into(),
                    label.representative(pr).into(),
                    label.size(pr).into(),
                    members.join(" ").into(),
                ]);
            }
            ok(t)
        }
        Command::Sum { p, a, m, len } => {
            let pr = prime(*p)?;
            let (m, len) = (m.unwrap_or(1), len.unwrap_or(pr.get()));
            let value = if (m, len) == (1, pr.get()) {
                heilbronn_sum(pr, *a).value
            } else {
                interval_sum(pr, *a, m, len)?
            };
            let mut t = Table::new(&["p", "a", "m", "len", "re", "im", "abs"]);
            t.push(vec![
                pr.get().into(),
                (a % pr.square()).into(),
                m.into(),
                len.into(),
                value.re.into(),
                value.im.into(),
                value.norm().into(),
            ]);
            ok(t)
        }
        Command::Scan { p, pmax, cap } => {
            let lo = prime(*p)?;
            let hi = pmax.unwrap_or(lo.get());
            if hi < lo.get() {
                return Err(CliError::Usage(format!("--pmax {hi} is below --p {lo}")));
            }
            let mut t = Table::new(&["p", "quantity", "value", "bound_formula", "ratio"]);
            for pr in primes_in_range(lo.get(), hi) {
                let report = scan_bounds(pr, *cap)?;
                for row in report.rows {
                    t.push(vec![
                        report.p.into(),
                        row.quantity.into(),
                        row.value.into(),
                        row.bound_formula.into(),
                        row.ratio.into(),
                    ]);
                }
            }
            ok(t)
        }
        Command::Energy { p, k } => {
            let pr = prime(*p)?;
            let map = LabelMap::new(pr)?;
            let value = gamma_higher_energy(&map, *k)?;
            let name = if *k == 2 { "E".to_string() } else { format!("E_{k}") };
            let mut t = Table::new(&["quantity", "value"]);
            t.push(vec![name.into(), (&value).into()]);
            ok(t)
        }
        Command::Tk { p, k } => {
            let pr = prime(*p)?;
            let map = LabelMap::new(pr)?;
            if *k == 0 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            let value = gamma_t_k(&map, *k)?;
            let mut t = Table::new(&["quantity", "value"]);
            t.push(vec![format!("T_{k}").into(), (&value).into()]);
            ok(t)
        }
        Command::Psi { p, k } => {
            let pr = prime(*p)?;
            if *k == 0 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            let map = LabelMap::new(pr)?;
            let classes = psi_k_classes(&map, *k)?;
            let mut t = Table::new(&["x", "value"]);
            for x in 0..pr.square() {
                t.push(vec![x.into(), (&classes.values()[map.index(x)]).into()]);
            }
            ok(t)
        }
        Command::StepanovCert {
            p,
            cells,
            params,
            lambda,
        } => {
            let pr = prime(*p)?;
            let cells: Vec<MCell> = cells
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    let (i, j) = parse_pair(s, ':', "--cells")?;
                    MCell::new(pr, i, j, *lambda).map_err(CliError::Core)
                })
                .collect::<Result<_, _>>()?;
            let params = match params {
                Some(s) => parse_params(s)?,
                None => default_params(pr, cells.len().max(1) as u64)?,
            };
            let cert = build_certificate(pr, &cells, params)?;
            let mut s = serde_json::to_string_pretty(&cert).expect("serializable");
            s.push('\n');
            Outcome {
                bytes: s.into_bytes(),
                verified: true,
            }
        }
        Command::StepanovVerify { file } => {
            let text = fs::read_to_string(file)?;
            let cert: Certificate = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: not a certificate: {e}", file.display())))?;
            let report = verify_certificate(&cert);
            let mut t = Table::new(&["quantity", "value"]);
            let rows: Vec<(&str, Cell)> = vec![
                ("p", report.p.into()),
                ("D", report.params.d.into()),
                ("psi_nonzero", report.psi_nonzero.into()),
                ("psi_degree", report.psi_degree.map_or(Cell::Text("none".into()), Cell::from)),
                ("cell_points", report.cells.iter().map(|c| c.points.len()).sum::<usize>().into()),
                ("min_order", report.min_order.map_or(Cell::Text("none".into()), Cell::from)),
                ("m_size", report.m_size.into()),
                ("bound", report.bound.into()),
                ("bound_holds", (report.m_size as f64 <= report.bound).into()),
                ("failures", report.failures.len().into()),
                ("valid", report.valid().into()),
            ];
            for (k, v) in rows {
                t.push(vec![k.into(), v]);
            }
            for f in &report.failures {
                eprintln!("certificate check failed: {f}");
            }
            Outcome {
                bytes: render(cfg, &t),
                verified: report.valid(),
            }
        }
        Command::Fermat(FermatCommand::Lp { range }) => {
            let (lo, hi) = parse_pair(range, ':', "--range")?;
            let records: Vec<LpRecord> = match &cfg.cache {
                Some(dir) => {
                    let scan = LpCache::in_dir(dir).scan(lo, hi)?;
                    eprintln!("fermat lp: {} computed, {} reused", scan.computed, scan.reused);
                    scan.records
                }
                None => lp_scan(lo, hi)?,
            };
            let table = match cfg.format {
                Format::Csv => {
                    let mut t = Table::new(&["p", "l_p"]);
                    for r in &records {
                        t.push(vec![r.p.get().into(), r.l_p.into()]);
                    }
                    t
                }
                Format::Json => {
                    let mut t = Table::new(&["p", "l_p", "log_bound"]);
                    for r in &records {
                        t.push(vec![r.p.get().into(), r.l_p.into(), r.log_bound().into()]);
                    }
                    t
                }
            };
            ok(table)
        }
        Command::Fermat(FermatCommand::Q { p, n }) => {
            let v = fermat_quotient(prime(*p)?, *n)?;
            let mut t = Table::new(&["p", "n", "q"]);
            t.push(vec![v.p.get().into(), v.n.into(), v.q.into()]);
            ok(t)
        }
        Command::Fermat(FermatCommand::Nk { p, h }) => {
            let pr = prime(*p)?;
            let count = congruence_count(pr, *h)?;
            let mut t = Table::new(&["p", "H", "N"]);
            t.push(vec![pr.get().into(), (*h).into(), count.into()]);
            ok(t)
        }
        Command::Verify { p, sample } => {
            let pr = prime(*p)?;
            let results = suites::run_all(pr, *sample)?;
            let mut t = Table::new(&["suite", "cases", "failures", "status", "detail"]);
            for r in &results {
                t.push(vec![
                    r.suite.into(),
                    r.cases.into(),
                    r.failures.into(),
                    (if r.passed() { "pass" } else { "FAIL" }).into(),
                    r.detail.clone().into(),
                ]);
            }
            Outcome {
                bytes: render(cfg, &t),
                verified: results.iter().all(suites::SuiteResult::passed),
            }
        }
    };
    cache::record_compute();
    Ok(out)
}

/// Runs a command, serving it from the result cache when possible.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let work = || -> Result<Outcome, CliError> {
        let store = cfg
            .cache
            .as_ref()
            .filter(|_| cfg.command.cacheable())
            .map(|d| ResultCache::new(d));
        let key = ResultCache::key(&cfg.canonical());
        if let Some(bytes) = store.as_ref().and_then(|s| s.get(&key)) {
            return Ok(Outcome { bytes, verified: true });
        }
        let out = compute(cfg)?;
        if let Some(s) = &store {
            s.put(&key, &out.bytes)?;
        }
        Ok(out)
    };
    match cfg.threads {
        Some(n) => with_threads(n, work),
        None => work(),
    }
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_n: usize, f: impl FnOnce() -> T + Send) -> T {
    f()
}

/// Executes `cfg` and writes the output; returns the process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    match execute(cfg) {
        Ok(out) => {
            let written = match &cfg.out {
                Some(path) => fs::write(path, &out.bytes),
                None => std::io::stdout().write_all(&out.bytes),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            if out.verified {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&RunConfig::from(cli)),
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            code
        }
    }
}
