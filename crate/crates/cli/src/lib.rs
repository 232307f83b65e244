//! The `sidon` command line: argument model, dispatch and output formatting.
//!
//! Every JSON document carries `command`, `toolVersion`, `n` and `seed`.
//! Exit codes: 0 success, 1 domain error, 2 verification failure, 64 usage.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use sidon_core::bounds::{
    certificate_count_check, claim41_check, containers_per_certificate_check, theorem_assembly_check,
};
use sidon_core::container::{certify, reconstruct_containers, verify_certificate, BuildOptions, Certificate, Mode};
use sidon_core::enumerate::{
    count_generalized_capped, erdos_turan_set, growth_table, growth_table_csv, max_sidon_capped,
    max_sidon_heuristic, random_lower_bound_experiment, singer_set, AlphaRule, DEFAULT_COUNT_CAP, DEFAULT_PHI_CAP,
};
use sidon_core::multigraph::{build_multigraph, check_supersaturation};
use sidon_core::prob::{check_w_with, sample_w};
use sidon_core::tuples::{tuple_counts, vertex_stats, BetweenVariant};
use sidon_core::{BoundReport, Error, IntSet, Params, VERSION};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Sizes audited by `bounds` when neither `--n` nor `--n-values` is given.
pub const DEFAULT_BOUND_SIZES: [u32; 3] = [1 << 16, 1 << 18, 1 << 20];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Ordered and essential tuple counts of a set.
    Count,
    /// Per-vertex tuple counts `s_I(v)`.
    Stats,
    /// The multigraph `H^U(A)` and its supersaturation check.
    Multigraph,
    /// Exact number of α-generalized Sidon subsets of `[n]`.
    Enumerate,
    /// Largest Sidon subset of `[n]`.
    Phi,
    /// Singer or Erdős–Turán Sidon sets.
    Construct,
    CertificateBuild,
    CertificateVerify,
    CertificateReconstruct,
    /// Sample `W ⊆ I` and evaluate the three sampling requirements.
    SampleW,
    /// Finite-n audits of the counting bounds, as JSON lines.
    Bounds,
    GrowthTable,
    LowerBoundExp,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Singer,
    ErdosTuran,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    All,
    Claim41,
    CertificateCount,
    Containers,
    Assembly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuildMode {
    Auto,
    SizeBounded,
    FewHeavy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Literal,
    Disjoint,
}

fn parse_rule(s: &str) -> Result<AlphaRule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "sidon", version, about = "Sidon and generalized Sidon sets in [n] = {1..n}")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Ground set size.
    #[arg(long)]
    pub n: Option<u32>,
    /// Tuple budget on the ordered count: an integer or a rule name.
    #[arg(long)]
    pub alpha: Option<String>,
    /// zero, n_over_log5, n_over_log4, n_over_log3, n_over_log2, n_over_log or n.
    #[arg(long, value_parser = parse_rule)]
    pub alpha_rule: Option<AlphaRule>,
    /// Comma-separated elements.
    #[arg(long, allow_hyphen_values = true)]
    pub set: Option<String>,
    /// JSON array of elements.
    #[arg(long)]
    pub set_file: Option<PathBuf>,
    /// Second set `U` for `multigraph` (defaults to the main set).
    #[arg(long)]
    pub u_set: Option<String>,
    /// Certificate file for `certificate-verify` and `certificate-reconstruct`.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// `csv` is accepted by `growth-table` only.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "singer")]
    pub kind: Kind,
    /// Prime power (Singer) or prime (Erdős–Turán).
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long, value_enum, default_value = "all")]
    pub check: Check,
    #[arg(long)]
    pub ell: Option<u32>,
    #[arg(long)]
    pub case: Option<u8>,
    #[arg(long)]
    pub size_cl: Option<u64>,
    /// Comma-separated list of n for `bounds` and `growth-table`.
    #[arg(long, value_delimiter = ',')]
    pub n_values: Vec<u32>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u32,
    /// Override the size cap of exact searches.
    #[arg(long)]
    pub cap: Option<u32>,
    /// `phi`: greedy and Singer-window lower bound instead of the exact search.
    #[arg(long)]
    pub heuristic: bool,
    /// `growth-table`: fill the seconds column.
    #[arg(long)]
    pub timing: bool,
    /// Input sets use `{0..n-1}`; output always uses `{1..n}`.
    #[arg(long)]
    pub zero_based: bool,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: BuildMode,
    /// Which `s(u, W, v)` the sampling check uses.
    #[arg(long, value_enum, default_value = "literal")]
    pub variant: Variant,
    #[arg(long, default_value_t = 64)]
    pub max_w_attempts: u32,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Domain(format!("json: {e}"))
    }
}

type CliResult<T> = Result<T, CliError>;

/// Text produced by a command, and whether a verification inside it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failed: false }
    }
}

/// Result of a whole invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first), runs the command and reports what
/// `main` should print and return.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let mut args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    // `certificate build` is accepted for `certificate-build`.
    if args.len() > 2 && args[1] == "certificate" {
        if let Some(sub) = args[2].to_str().filter(|s| ["build", "verify", "reconstruct"].contains(s)) {
            let joined = OsString::from(format!("certificate-{sub}"));
            args.splice(1..3, [joined]);
        }
    }
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let result = match config.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&config)),
            Err(e) => Err(CliError::Domain(format!("thread pool: {e}"))),
        },
        None => dispatch(&config),
    };
    match result {
        Ok(out) => {
            let code = if out.failed { EXIT_VERIFY } else { EXIT_OK };
            match &config.out {
                Some(path) => match fs::write(path, &out.text) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Outcome {
                        code: EXIT_DOMAIN,
                        stdout: String::new(),
                        stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    },
                },
                None => Outcome { code, stdout: out.text, stderr: String::new() },
            }
        }
        Err(CliError::Usage(msg)) => {
            Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("usage error: {msg}\n") }
        }
        Err(CliError::Domain(msg)) => {
            Outcome { code: EXIT_DOMAIN, stdout: String::new(), stderr: format!("error: {msg}\n") }
        }
    }
}

/// Routes a parsed configuration to its command.
pub fn dispatch(config: &RunConfig) -> CliResult<Output> {
    if config.format == Some(Format::Csv) && config.command != Command::GrowthTable {
        return Err(CliError::Usage(format!("{} only emits json", config.command.name())));
    }
    match config.command {
        Command::Count => count(config),
        Command::Stats => stats(config),
        Command::Multigraph => multigraph(config),
        Command::Enumerate => enumerate(config),
        Command::Phi => phi(config),
        Command::Construct => construct(config),
        Command::CertificateBuild => certificate_build(config),
        Command::CertificateVerify => certificate_verify(config),
        Command::CertificateReconstruct => certificate_reconstruct(config),
        Command::SampleW => sample(config),
        Command::Bounds => bounds(config),
        Command::GrowthTable => growth(config),
        Command::LowerBoundExp => lower_bound(config),
    }
}

/// One JSON line: provenance fields merged with the fields of `body`.
fn document(config: &RunConfig, n: Option<u64>, body: impl Serialize) -> CliResult<String> {
    let mut map = Map::new();
    map.insert("command".into(), json!(config.command.name()));
    map.insert("toolVersion".into(), json!(VERSION));
    map.insert("n".into(), json!(n));
    map.insert("seed".into(), json!(config.seed));
    merge(&mut map, serde_json::to_value(body)?);
    let mut text = serde_json::to_string(&Value::Object(map))?;
    text.push('\n');
    Ok(text)
}

fn merge(map: &mut Map<String, Value>, body: Value) {
    match body {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
}

fn need_n(config: &RunConfig) -> CliResult<u32> {
    config.n.ok_or_else(|| CliError::Usage(format!("{} needs --n", config.command.name())))
}

fn parse_list(text: &str) -> CliResult<Vec<u32>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| CliError::Usage(format!("not a nonnegative integer: {s:?}"))))
        .collect()
}

fn shift(config: &RunConfig, elems: Vec<u32>) -> Vec<u32> {
    if config.zero_based {
        elems.into_iter().map(|x| x + 1).collect()
    } else {
        elems
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))
}

/// The main set from `--set` or `--set-file` (exactly one).
fn main_set(config: &RunConfig, n: u32) -> CliResult<IntSet> {
    let elems = match (&config.set, &config.set_file) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --set or --set-file, not both".into())),
        (Some(text), None) => parse_list(text)?,
        (None, Some(path)) => serde_json::from_str::<Vec<u32>>(&read_file(path)?)
            .map_err(|e| CliError::Usage(format!("{} is not a JSON array of integers: {e}", path.display())))?,
        (None, None) => {
            return Err(CliError::Usage(format!("{} needs --set or --set-file", config.command.name())))
        }
    };
    Ok(IntSet::within(n, shift(config, elems))?)
}

fn alpha(config: &RunConfig, n: u32) -> CliResult<(u64, Option<AlphaRule>)> {
    match (&config.alpha, config.alpha_rule) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --alpha or --alpha-rule, not both".into())),
        (None, None) => Ok((0, None)),
        (None, Some(rule)) => Ok((rule.budget(n)?, Some(rule))),
        (Some(text), None) => match text.parse::<u64>() {
            Ok(a) => Ok((a, None)),
            Err(_) => {
                let rule = parse_rule(text).map_err(CliError::Usage)?;
                Ok((rule.budget(n)?, Some(rule)))
            }
        },
    }
}

fn count(config: &RunConfig) -> CliResult<Output> {
    let n = need_n(config)?;
    let set = main_set(config, n)?;
    let c = tuple_counts(&set);
    let body = json!({
        "set": set,
        "setSize": set.len(),
        "orderedCount": c.ordered,
        "essentialCount": c.essential,
        "degenerateCount": c.degenerate,
        "isSidon": c.ordered == 0,
    });
    Ok(Output::ok(document(config, Some(n as u64), body)?))
}

fn stats(config: &RunConfig) -> CliResult<Output> {
    let n = need_n(config)?;
    let set = main_set(config, n)?;
    Ok(Output::ok(document(config, Some(n as u64), vertex_stats(&set).report(n))?))
}

fn multigraph(config: &RunConfig) -> CliResult<Output> {
    let n = need_n(config)?;
    let a = main_set(config, n)?;
    let u = match &config.u_set {
        Some(text) => IntSet::within(n, shift(config, parse_list(text)?))?,
        None => a.clone(),
    };
    let report = check_supersaturation::<f64>(n, &a, &u)?;
    let graph = build_multigraph(&a, &u);
    let mut body = Map::new();
    merge(&mut body, serde_json::to_value(&graph)?);
    merge(&mut body, serde_json::to_value(&report)?);
    Ok(Output::ok(document(config, Some(n as u64), Value::Object(body))?))
}

fn enumerate(config: &RunConfig) -> CliResult<Output> {
    let n = need_n(config)?;
    let (a, rule) = alpha(config, n)?;
    let result = count_generalized_capped(n, a, config.cap.unwrap_or(DEFAULT_COUNT_CAP))?;
    let mut body = Map::new();
    merge(&mut body, serde_json::to_value(&result)?);
    body.insert("alphaRule".into(), json!(rule.map(AlphaRule::name)));
    Ok(Output::ok(document(config, Some(n as u64), Value::Object(body))?))
}

fn phi(config: &RunConfig) -> CliResult<Output> {
    let n = need_n(config)?;
    let result = if config.heuristic {
        max_sidon_heuristic(n)
    } else {
        max_sidon_capped(n, config.cap.unwrap_or(DEFAULT_PHI_CAP))?
    };
    Ok(Output::ok(document(config, Some(n as u64), result)?))
}

fn construct(config: &RunConfig) -> CliResult<Output> {
    let q = config.q.ok_or_else(|| CliError::Usage("construct needs --q".into()))?;
    let (set, ground, kind) = match config.kind {
        Kind::Singer => (singer_set(q)?, q as u64 * q as u64 + q as u64 + 1, "singer"),
        Kind::ErdosTuran => (erdos_turan_set(q)?, 2 * q as u64 * q as u64, "erdos-turan"),
    };
    let body = json!({
        "kind": kind,
        "q": q,
        "set": set,
        "size": set.len(),
        "isSidon": sidon_core::is_sidon(&set),
    });
    Ok(Output::ok(document(config, Some(ground), body)?))
}

fn build_options(config: &RunConfig) -> BuildOptions {
    BuildOptions {
        mode: match config.mode {
            BuildMode::Auto => Mode::Auto,
            BuildMode::SizeBounded => Mode::SizeBounded,
            BuildMode::FewHeavy => Mode::FewHeavy,
        },
        max_w_attempts: config.max_w_attempts,
        w_variant: variant(config),
        ..BuildOptions::default()
    }
}

fn variant(config: &RunConfig) -> BetweenVariant {
    match config.variant {
        Variant::Literal => BetweenVariant::Literal,
        Variant::Disjoint => BetweenVariant::Disjoint,
    }
}

fn certificate_build(config: &RunConfig) -> CliResult<Output> {
    let n = need_n(config)?;
    let set = main_set(config, n)?;
    let (a, _) = alpha(config, n)?;
    let params = Params::new(n, a)?;
    let (cert, _, _) = certify(&set, &params, config.seed, &build_options(config))?;
    Ok(Output::ok(document(config, Some(n as u64), cert)?))
}

fn load_certificate(config: &RunConfig) -> CliResult<Certificate> {
    let path = config.cert.as_ref().ok_or_else(|| CliError::Usage(format!("{} needs --cert", config.command.name())))?;
    let cert: Certificate = serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::Domain(format!("{} is not a certificate: {e}", path.display())))?;
    if let Some(n) = config.n {
        if n != cert.n {
            return Err(CliError::Usage(format!("--n {n} does not match the certificate's n = {}", cert.n)));
        }
    }
    Ok(cert)
}

fn malformed(config: &RunConfig, n: u32, message: String) -> CliResult<Output> {
    let text = document(config, Some(n as u64), json!({ "pass": false, "error": message }))?;
    Ok(Output { text, failed: true })
}

fn certificate_verify(config: &RunConfig) -> CliResult<Output> {
    let cert = load_certificate(config)?;
    let set = main_set(config, cert.n)?;
    let params = Params::new(cert.n, cert.alpha)?;
    let chain = match reconstruct_containers(&cert, &params) {
        Ok(c) => c,
        Err(Error::MalformedCertificate(msg)) => return malformed(config, cert.n, msg),
        Err(e) => return Err(e.into()),
    };
    let report = verify_certificate(&cert, &chain, &set, &params);
    let text = document(config, Some(cert.n as u64), &report)?;
    Ok(Output { text, failed: !report.pass })
}

fn certificate_reconstruct(config: &RunConfig) -> CliResult<Output> {
    let cert = load_certificate(config)?;
    let params = Params::new(cert.n, cert.alpha)?;
    match reconstruct_containers(&cert, &params) {
        Ok(chain) => {
            let body = json!({ "L": cert.phases, "C": chain.c });
            Ok(Output::ok(document(config, Some(cert.n as u64), body)?))
        }
        Err(Error::MalformedCertificate(msg)) => malformed(config, cert.n, msg),
        Err(e) => Err(e.into()),
    }
}

fn sample(config: &RunConfig) -> CliResult<Output> {
    let n = need_n(config)?;
    let set = main_set(config, n)?;
    let params = Params::new(n, 0)?;
    let w = sample_w(&set, &params, config.seed)?;
    let report = check_w_with(&set, &w, &params, variant(config))?;
    let mut body = Map::new();
    body.insert("accepted".into(), json!(report.accepted()));
    body.insert("failed".into(), serde_json::to_value(report.failed())?);
    merge(&mut body, serde_json::to_value(&report)?);
    Ok(Output::ok(document(config, Some(n as u64), Value::Object(body))?))
}

fn bound_reports(config: &RunConfig, n: u64) -> CliResult<Vec<BoundReport>> {
    let mut out = Vec::new();
    let all = config.check == Check::All;
    if all || config.check == Check::Claim41 {
        out.push(claim41_check(n)?);
    }
    if all || config.check == Check::CertificateCount {
        match config.ell {
            Some(ell) => out.push(certificate_count_check(n, ell)?),
            None => {
                for ell in 0..=2 {
                    out.push(certificate_count_check(n, ell)?);
                }
            }
        }
    }
    if all || config.check == Check::Containers {
        let twelve = (12.0 * (n as f64).sqrt()).floor() as u64;
        let defaults = [(1u8, twelve), (2, n), (3, 2 * twelve)];
        match (config.case, config.size_cl) {
            (Some(case), Some(size)) => out.push(containers_per_certificate_check(n, case, size)?),
            (Some(case), None) => {
                let size = defaults.iter().find(|d| d.0 == case).map_or(twelve, |d| d.1);
                out.push(containers_per_certificate_check(n, case, size)?);
            }
            (None, Some(_)) => return Err(CliError::Usage("--size-cl needs --case".into())),
            (None, None) => {
                for (case, size) in defaults {
                    out.push(containers_per_certificate_check(n, case, size)?);
                }
            }
        }
    }
    if all || config.check == Check::Assembly {
        out.push(theorem_assembly_check(n)?);
    }
    Ok(out)
}

fn n_values(config: &RunConfig) -> Vec<u32> {
    if !config.n_values.is_empty() {
        config.n_values.clone()
    } else {
        config.n.into_iter().collect()
    }
}

fn bounds(config: &RunConfig) -> CliResult<Output> {
    let mut sizes = n_values(config);
    if sizes.is_empty() {
        sizes = DEFAULT_BOUND_SIZES.to_vec();
    }
    let per_n: Vec<CliResult<Vec<BoundReport>>> =
        sizes.par_iter().map(|&n| bound_reports(config, n as u64)).collect();
    let mut text = String::new();
    let mut failed = false;
    for (reports, &n) in per_n.into_iter().zip(&sizes) {
        for r in reports? {
            failed |= !r.holds;
            text.push_str(&document(config, Some(n as u64), &r)?);
        }
    }
    Ok(Output { text, failed })
}

fn growth(config: &RunConfig) -> CliResult<Output> {
    let sizes = n_values(config);
    if sizes.is_empty() {
        return Err(CliError::Usage("growth-table needs --n-values or --n".into()));
    }
    let rules = match (config.alpha_rule, &config.alpha) {
        (_, Some(_)) => return Err(CliError::Usage("growth-table takes --alpha-rule, not --alpha".into())),
        (Some(rule), None) => vec![rule],
        (None, None) => AlphaRule::ALL.to_vec(),
    };
    let rows = growth_table(&sizes, &rules, config.cap.unwrap_or(DEFAULT_COUNT_CAP))?;
    let max_n = sizes.iter().max().map(|&n| n as u64);
    let text = match config.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let list: Vec<String> = sizes.iter().map(u32::to_string).collect();
            format!(
                "# command={} toolVersion={VERSION} n={} seed={}\n{}",
                config.command.name(),
                list.join(";"),
                config.seed,
                growth_table_csv(&rows, config.timing)
            )
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r)?;
                    if !config.timing {
                        v["seconds"] = Value::Null;
                    }
                    Ok(v)
                })
                .collect::<CliResult<_>>()?;
            document(config, max_n, json!({ "nValues": sizes, "rows": rows }))?
        }
    };
    Ok(Output::ok(text))
}

fn lower_bound(config: &RunConfig) -> CliResult<Output> {
    let n = need_n(config)?;
    let (a, _) = alpha(config, n)?;
    let estimate = random_lower_bound_experiment(n, a, config.trials, config.seed)?;
    Ok(Output::ok(document(config, Some(n as u64), estimate)?))
}
