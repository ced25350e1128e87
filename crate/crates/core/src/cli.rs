//! Command-line front end. `run` returns the process exit code so the whole
//! surface is testable in-process.
//!
//! Exit codes: 0 all checks passed, 1 certified violation, 2 undecided at
//! maximum precision, 3 usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::exact::{self, ExactError};
use crate::figures::{self, FigureConfig, FigureError};
use crate::lemmas::{self, LemmaError, LemmaId, LemmaReport, SuiteConfig, Witness};
use crate::report::{fmt_f64, Format, Report, Summary, Table};
use crate::segments::{self, SegmentError};
use crate::verdict::Verdict;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Environment variable read for the default `--bits`.
pub const BITS_ENV: &str = "WARING_LAB_BITS";

#[derive(Debug, Parser)]
#[command(
    name = "waring-lab",
    version,
    about = "Certified checks of the carry condition behind Waring's g(k)"
)]
pub struct Cli {
    /// Working precision in bits for interval computations (minimum 32)
    #[arg(long, global = true, env = BITS_ENV, default_value_t = 128,
          value_parser = clap::value_parser!(u32).range(32..))]
    pub bits: u32,
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Scan 2^k{(3/2)^k} + ⌊(3/2)^k⌋ > 2^k over a range of k
    Carry(CarryArgs),
    /// Tabulate g(k) = 2^k + ⌊(3/2)^k⌋ − 2 and cross-check small k by brute force
    G(GArgs),
    /// Certify segment endpoints and look for straddled integers
    Segments(SegmentArgs),
    /// Run the lemma verifiers
    Lemmas(LemmaArgs),
    /// Emit figure data
    Figures(FigureArgs),
    /// Desk-scale run of every check with a combined summary
    Report(ReportArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CarryArgs {
    #[arg(long, default_value_t = 1)]
    pub k_min: u64,
    #[arg(long, default_value_t = 10_000)]
    pub k_max: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GArgs {
    #[arg(long, default_value_t = 1)]
    pub k_min: u64,
    #[arg(long, default_value_t = 10)]
    pub k_max: u64,
    /// Brute-force table size; k is cross-checked when 2^k·⌊(3/2)^k⌋ − 1 fits
    #[arg(long, default_value_t = 1000)]
    pub brute_limit: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SegmentArgs {
    #[arg(long, default_value_t = 2)]
    pub n_min: u64,
    #[arg(long, default_value_t = 500)]
    pub n_max: u64,
    /// Also run the block-wise monotonicity transfer check
    #[arg(long)]
    pub transfer: bool,
}

/// `all`, a lemma name, or `composition`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaSelection {
    All,
    One(LemmaId),
    Composition,
}

fn parse_selection(s: &str) -> Result<LemmaSelection, String> {
    match s {
        "all" => Ok(LemmaSelection::All),
        "composition" => Ok(LemmaSelection::Composition),
        other => other.parse().map(LemmaSelection::One),
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let lo: u64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Debug, Args, Serialize)]
pub struct LemmaArgs {
    /// all, composition, or one of: lemma1, ceil_transfer, basic_bound, binomial_q,
    /// upper_endpoint, lower_endpoint, mr_bound, x_prime_positive, h_increasing
    #[arg(long, default_value = "all", value_parser = parse_selection)]
    pub which: LemmaSelection,
    /// Index range lo:hi for the selected index lemmas
    #[arg(long, value_parser = parse_range)]
    pub range: Option<(u64, u64)>,
    /// Sample count for the sampled lemmas
    #[arg(long)]
    pub samples: Option<u64>,
    /// Use the full acceptance ranges instead of the desk-scale defaults
    #[arg(long)]
    pub acceptance: bool,
    #[arg(long, hide = true)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub invert_mr: bool,
}

/// `all` or a figure number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FigureSelection {
    All,
    One(u8),
}

fn parse_figure(s: &str) -> Result<FigureSelection, String> {
    if s == "all" {
        return Ok(FigureSelection::All);
    }
    match s.parse::<u8>() {
        Ok(id @ 1..=7) => Ok(FigureSelection::One(id)),
        _ => Err(format!("figure must be 1..7 or all, got `{s}`")),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct FigureArgs {
    #[arg(long, default_value = "all", value_parser = parse_figure)]
    pub which: FigureSelection,
    #[arg(long, default_value_t = 0)]
    pub k_min: u64,
    #[arg(long, default_value_t = 10)]
    pub k_max: u64,
    #[arg(long, default_value_t = 1)]
    pub n_min: u64,
    #[arg(long, default_value_t = 20)]
    pub n_max: u64,
    /// Right end of the sampled x range for continuous curves
    #[arg(long, default_value_t = 10.0)]
    pub x_max: f64,
    /// Sampling increment for continuous curves
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    #[arg(long, default_value_t = 10_000)]
    pub k_max: u64,
    #[arg(long, default_value_t = 500)]
    pub n_max: u64,
}

/// Errors that end a run with exit code 3.
#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<ExactError> for UsageError {
    fn from(e: ExactError) -> Self {
        UsageError::Invalid(e.to_string())
    }
}

impl From<SegmentError> for UsageError {
    fn from(e: SegmentError) -> Self {
        UsageError::Invalid(e.to_string())
    }
}

impl From<FigureError> for UsageError {
    fn from(e: FigureError) -> Self {
        UsageError::Invalid(e.to_string())
    }
}

impl From<LemmaError> for UsageError {
    fn from(e: LemmaError) -> Self {
        UsageError::Invalid(e.to_string())
    }
}

fn check_range(lo: u64, hi: u64) -> Result<(), UsageError> {
    if lo > hi {
        return Err(UsageError::Invalid(format!("empty range [{lo}, {hi}]")));
    }
    Ok(())
}

fn config_json(cli: &Cli) -> Value {
    let (name, args) = match serde_json::to_value(&cli.command).expect("args serialize") {
        Value::Object(map) => map.into_iter().next().expect("one subcommand"),
        other => (String::new(), other),
    };
    json!({
        "subcommand": name,
        "bits": cli.bits,
        "seed": cli.seed,
        "format": cli.format,
        "args": args,
    })
}

pub fn carry_report(k_min: u64, k_max: u64, config: Value) -> Result<Report, UsageError> {
    check_range(k_min, k_max)?;
    let chunks = rayon::current_num_threads() * 4;
    let scan = exact::scan_carry_parallel(k_min, k_max, chunks)?;
    let mut rep = Report::new(config);
    rep.table = Table::new(["k", "holds", "slack_sign", "slack_bits", "relative_slack"]);
    for row in &scan.rows {
        rep.summary.record(Verdict::from_bool(!row.holds));
        rep.push_result(row);
        rep.table.push([
            row.k.to_string(),
            row.holds.to_string(),
            row.slack_sign.to_string(),
            row.slack_bits.to_string(),
            fmt_f64(row.relative_slack),
        ]);
    }
    let value = scan
        .min_slack
        .to_i64()
        .map(Value::from)
        .unwrap_or_else(|| Value::from(scan.min_slack.to_string()));
    rep.summary.min_slack = Some(json!({ "value": value, "k": scan.min_slack_k }));
    Ok(rep)
}

#[derive(Serialize)]
struct GEntry {
    k: u64,
    g: String,
    g_minus_variant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_force: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
}

pub fn g_report(args: &GArgs, config: Value) -> Result<Report, UsageError> {
    check_range(args.k_min, args.k_max)?;
    let mut rep = Report::new(config);
    rep.table = Table::new(["k", "g", "g_minus_variant", "brute_force", "verdict"]);
    for k in args.k_min..=args.k_max {
        let gk = exact::g_of_k(k)?;
        let w = exact::power_witness(k)?;
        // n = ⌊(3/2)^k⌋·2^k − 1 needs exactly g(k) k-th powers
        let hardest = (&w.m << k) - 1u32;
        let checkable = k <= 32 && hardest.to_u64().is_some_and(|h| h <= args.brute_limit);
        let brute = if checkable {
            Some(exact::brute_force_g(
                k as u32,
                args.brute_limit,
                exact::DEFAULT_TABLE_BUDGET,
            )?)
        } else {
            None
        };
        let verdict = brute.map(|b| Verdict::from_bool(gk.g == b.into()));
        if let Some(v) = verdict {
            rep.summary.record(v);
        }
        let entry = GEntry {
            k,
            g: gk.g.to_string(),
            g_minus_variant: exact::g_minus_variant(k)?.to_string(),
            brute_force: brute,
            verdict,
        };
        rep.table.push([
            k.to_string(),
            entry.g.clone(),
            entry.g_minus_variant.clone(),
            brute.map(|b| b.to_string()).unwrap_or_default(),
            verdict.map(verdict_str).unwrap_or_default().to_string(),
        ]);
        rep.push_result(&entry);
    }
    Ok(rep)
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn segments_report(args: &SegmentArgs, bits: u32, config: Value) -> Result<Report, UsageError> {
    check_range(args.n_min, args.n_max)?;
    let scan = segments::straddle_scan(args.n_min, args.n_max, bits)?;
    let mut rep = Report::new(config);
    rep.table = Table::new([
        "n",
        "u_mid",
        "u_width",
        "t_mid",
        "t_width",
        "l_mid",
        "l_width",
        "ceil_l",
        "floor_u",
        "straddles",
        "verdict",
    ]);
    let mut entries: Vec<(u64, Verdict, Value)> = Vec::with_capacity(scan.rows.len());
    for row in &scan.rows {
        let verdict = if row.straddles {
            Verdict::Fail
        } else if scan.order_failures.contains(&row.n) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        let mut v = serde_json::to_value(row).expect("row serializes");
        v["verdict"] = json!(verdict);
        rep.table.push([
            row.n.to_string(),
            fmt_f64(row.u_mid),
            fmt_f64(row.u_width),
            fmt_f64(row.t_mid),
            fmt_f64(row.t_width),
            fmt_f64(row.l_mid),
            fmt_f64(row.l_width),
            row.ceil_l.to_string(),
            row.floor_u.to_string(),
            row.straddles.to_string(),
            verdict_str(verdict).to_string(),
        ]);
        entries.push((row.n, verdict, v));
    }
    for inc in &scan.inconclusive {
        entries.push((
            inc.n,
            Verdict::Inconclusive,
            json!({"n": inc.n, "reason": inc.reason, "verdict": "inconclusive"}),
        ));
    }
    entries.sort_by_key(|e| e.0);
    for (_, verdict, v) in entries {
        rep.summary.record(verdict);
        rep.results.push(v);
    }
    if args.transfer {
        let t = segments::monotonicity_transfer_check(args.n_min, args.n_max, bits)?;
        let verdict = if !t.inconclusive.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::from_bool(t.holds)
        };
        rep.summary.record(verdict);
        let mut v = serde_json::to_value(&t).expect("transfer report serializes");
        v["check"] = json!("monotonicity_transfer");
        v["verdict"] = json!(verdict);
        rep.results.push(v);
    }
    Ok(rep)
}

fn witness_str(w: &Witness) -> String {
    match w {
        Witness::Index(i) => i.to_string(),
        Witness::Point(p) => p.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(" "),
    }
}

fn lemma_verdict(rep: &LemmaReport) -> Verdict {
    if !rep.failures.is_empty() {
        Verdict::Fail
    } else if !rep.inconclusive.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

/// Suite configuration implied by the `lemmas` flags.
pub fn suite_config(args: &LemmaArgs, bits: u32, seed: u64) -> SuiteConfig {
    let mut cfg = if args.acceptance {
        SuiteConfig::acceptance()
    } else {
        SuiteConfig::default()
    };
    cfg.bits = bits;
    cfg.seed = seed;
    cfg.invert_mr_bound = args.invert_mr;
    let targets: Vec<LemmaId> = match args.which {
        LemmaSelection::One(id) => vec![id],
        _ => LemmaId::ALL.to_vec(),
    };
    for id in targets {
        let sampled = id.min_index().is_none();
        match (sampled, args.range, args.samples) {
            (false, Some(r), _) => cfg.set_range(id, r),
            (true, _, Some(n)) => cfg.set_range(id, (0, n)),
            _ => {}
        }
    }
    cfg
}

pub fn lemmas_report(
    args: &LemmaArgs,
    bits: u32,
    seed: u64,
    config: Value,
) -> Result<Report, UsageError> {
    if args.which == LemmaSelection::Composition {
        let (lo, hi) = args.range.unwrap_or((2, 30));
        return composition_report(lo, hi, bits, config);
    }
    let cfg = suite_config(args, bits, seed);
    let runs = match args.which {
        LemmaSelection::One(id) => vec![lemmas::run_lemma(id, &cfg)],
        _ => lemmas::verify_all(&cfg),
    };
    let mut rep = Report::new(config);
    rep.table = Table::new([
        "lemma_id",
        "range_lo",
        "range_hi",
        "checked",
        "passes",
        "equalities",
        "failures",
        "inconclusive",
        "error",
    ]);
    let mut domain_errors = Vec::new();
    for run in &runs {
        match &run.outcome {
            Ok(r) => {
                rep.summary.passes += r.passes;
                rep.summary.failures += r.failures.len() as u64;
                rep.summary.inconclusive += r.inconclusive.len() as u64;
                let mut v = serde_json::to_value(r).expect("lemma report serializes");
                v["verdict"] = json!(lemma_verdict(r));
                rep.results.push(v);
                rep.table.push([
                    r.lemma_id.to_string(),
                    r.range.0.to_string(),
                    r.range.1.to_string(),
                    r.checked.to_string(),
                    r.passes.to_string(),
                    r.equalities.to_string(),
                    r.failures
                        .iter()
                        .map(witness_str)
                        .collect::<Vec<_>>()
                        .join(";"),
                    r.inconclusive
                        .iter()
                        .map(witness_str)
                        .collect::<Vec<_>>()
                        .join(";"),
                    String::new(),
                ]);
            }
            Err(e) => {
                rep.results
                    .push(json!({"lemma_id": run.lemma_id, "error": e.to_string()}));
                let range = cfg.range_of(run.lemma_id).unwrap_or_default();
                rep.table.push([
                    run.lemma_id.to_string(),
                    range.0.to_string(),
                    range.1.to_string(),
                    "0".into(),
                    "0".into(),
                    "0".into(),
                    String::new(),
                    String::new(),
                    e.to_string(),
                ]);
                domain_errors.push(format!("{}: {e}", run.lemma_id));
            }
        }
    }
    if !domain_errors.is_empty() {
        return Err(UsageError::Invalid(domain_errors.join("\n")));
    }
    Ok(rep)
}

fn composition_report(lo: u64, hi: u64, bits: u32, config: Value) -> Result<Report, UsageError> {
    let rows = lemmas::composition_check(lo, hi, bits)?;
    let mut rep = Report::new(config);
    rep.table = Table::new([
        "i",
        "jump_index",
        "l_mid",
        "l_width",
        "inside",
        "z_matches",
        "upper_endpoint",
        "lower_endpoint",
    ]);
    for row in &rows {
        let verdict = match row.inside {
            Verdict::Pass if row.z_matches => Verdict::Pass,
            Verdict::Inconclusive => Verdict::Inconclusive,
            _ => Verdict::Fail,
        };
        rep.summary.record(verdict);
        let mut v = serde_json::to_value(row).expect("row serializes");
        v["verdict"] = json!(verdict);
        rep.results.push(v);
        rep.table.push([
            row.i.to_string(),
            row.jump_index.to_string(),
            fmt_f64(row.l_mid),
            fmt_f64(row.l_width),
            verdict_str(row.inside).to_string(),
            row.z_matches.to_string(),
            verdict_str(row.upper_endpoint).to_string(),
            verdict_str(row.lower_endpoint).to_string(),
        ]);
    }
    Ok(rep)
}

pub fn figure_config(args: &FigureArgs, bits: u32) -> FigureConfig {
    FigureConfig {
        k_min: args.k_min,
        k_max: args.k_max,
        n_min: args.n_min,
        n_max: args.n_max,
        x_max: args.x_max,
        step: args.step,
        bits,
    }
}

pub fn figures_report(args: &FigureArgs, bits: u32, config: Value) -> Result<Report, UsageError> {
    check_range(args.k_min, args.k_max)?;
    check_range(args.n_min, args.n_max)?;
    if !(args.x_max.is_finite() && args.x_max > 0.0) {
        return Err(UsageError::Invalid("--x-max must be positive".into()));
    }
    let cfg = figure_config(args, bits);
    let ids: Vec<u8> = match args.which {
        FigureSelection::All => (1..=7).collect(),
        FigureSelection::One(id) => vec![id],
    };
    let x_label = match args.which {
        FigureSelection::One(id) => figures::x_label(id),
        FigureSelection::All => "x",
    };
    let mut rep = Report::new(config);
    rep.table = Table::new([
        "figure", "series", x_label, "mid", "width", "exact", "segment",
    ]);
    let mut skipped = 0u64;
    for id in ids {
        let fig = figures::emit_figure(id, &cfg)?;
        for s in &fig.columns {
            for p in &s.points {
                rep.summary.passes += 1;
                rep.table.push([
                    id.to_string(),
                    s.name.clone(),
                    fmt_f64(p.x),
                    fmt_f64(p.mid),
                    fmt_f64(p.width),
                    p.exact.clone().unwrap_or_default(),
                    p.segment.map(|v| v.to_string()).unwrap_or_default(),
                ]);
            }
        }
        skipped += fig.skipped.len() as u64;
        rep.push_result(&fig);
    }
    rep.summary.skipped = Some(skipped);
    Ok(rep)
}

pub fn full_report(
    args: &ReportArgs,
    bits: u32,
    seed: u64,
    config: Value,
) -> Result<Report, UsageError> {
    let mut rep = Report::new(config);
    rep.table = Table::new(["section", "passes", "failures", "inconclusive"]);
    let mut add = |section: &str, s: &Summary| {
        rep.summary.absorb(s);
        rep.results.push(json!({"section": section, "summary": s}));
        rep.table.push([
            section.to_string(),
            s.passes.to_string(),
            s.failures.to_string(),
            s.inconclusive.to_string(),
        ]);
    };
    let carry = carry_report(1, args.k_max, Value::Null)?;
    add("carry", &carry.summary);
    let g = g_report(
        &GArgs {
            k_min: 1,
            k_max: 10,
            brute_limit: 1000,
        },
        Value::Null,
    )?;
    add("g", &g.summary);
    let seg = segments_report(
        &SegmentArgs {
            n_min: 2,
            n_max: args.n_max,
            transfer: true,
        },
        bits,
        Value::Null,
    )?;
    add("segments", &seg.summary);
    let lemma_args = LemmaArgs {
        which: LemmaSelection::All,
        range: None,
        samples: None,
        acceptance: false,
        invert_mr: false,
    };
    let lem = lemmas_report(&lemma_args, bits, seed, Value::Null)?;
    add("lemmas", &lem.summary);
    let comp = composition_report(2, 30, bits, Value::Null)?;
    add("composition", &comp.summary);
    rep.summary.min_slack = carry.summary.min_slack;
    Ok(rep)
}

fn execute(cli: &Cli) -> Result<Report, UsageError> {
    let config = config_json(cli);
    match &cli.command {
        Command::Carry(a) => carry_report(a.k_min, a.k_max, config),
        Command::G(a) => g_report(a, config),
        Command::Segments(a) => segments_report(a, cli.bits, config),
        Command::Lemmas(a) => lemmas_report(a, cli.bits, cli.seed, config),
        Command::Figures(a) => figures_report(a, cli.bits, config),
        Command::Report(a) => full_report(a, cli.bits, cli.seed, config),
    }
}

fn emit(cli: &Cli, rep: &Report) -> io::Result<()> {
    match &cli.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            rep.write(cli.format, &mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            rep.write(cli.format, &mut lock)?;
            lock.flush()
        }
    }
}

/// Parses `argv` (including the program name), runs the subcommand and writes
/// its report. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    let rep = match execute(&cli) {
        Ok(rep) => rep,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = emit(&cli, &rep) {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let s = &rep.summary;
    eprintln!(
        "passes={} failures={} inconclusive={}",
        s.passes, s.failures, s.inconclusive
    );
    s.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("waring-lab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn range_parser() {
        assert_eq!(parse_range("2:100"), Ok((2, 100)));
        assert!(parse_range("5:2").is_err());
        assert!(parse_range("5").is_err());
    }

    #[test]
    fn selection_parser() {
        assert_eq!(
            parse_selection("mr_bound"),
            Ok(LemmaSelection::One(LemmaId::MrBound))
        );
        assert_eq!(parse_selection("all"), Ok(LemmaSelection::All));
        assert!(parse_selection("x").is_err());
        assert!(parse_figure("0").is_err());
        assert_eq!(parse_figure("7"), Ok(FigureSelection::One(7)));
    }

    #[test]
    fn bits_floor() {
        assert!(Cli::try_parse_from(["waring-lab", "carry", "--bits", "31"]).is_err());
        assert_eq!(parse(&["carry", "--bits", "32"]).bits, 32);
    }

    #[test]
    fn range_overrides_index_lemmas_only() {
        let cli = parse(&["lemmas", "--range", "3:40", "--samples", "9"]);
        let Command::Lemmas(a) = &cli.command else {
            panic!()
        };
        let cfg = suite_config(a, 64, 0);
        assert_eq!(cfg.mr_bound, (3, 40));
        assert_eq!(cfg.lemma1, (3, 40));
        assert_eq!(cfg.binomial_q, 9);
    }

    #[test]
    fn config_excludes_output_path() {
        let cli = parse(&["carry", "--k-max", "5", "--output", "/tmp/x.json"]);
        let v = config_json(&cli);
        assert_eq!(v["subcommand"], "carry");
        assert_eq!(v["args"]["k_max"], 5);
        assert!(!v.to_string().contains("x.json"));
    }

    #[test]
    fn g_rows() {
        let rep = g_report(
            &GArgs {
                k_min: 1,
                k_max: 6,
                brute_limit: 1000,
            },
            Value::Null,
        )
        .unwrap();
        assert_eq!(rep.summary.passes, 6);
        assert_eq!(rep.results[3]["g"], "19");
        assert_eq!(rep.results[0]["g_minus_variant"], "-1");
    }
}
