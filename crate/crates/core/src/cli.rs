//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 a scheme
//! hypothesis does not hold, 4 an enumeration cap was hit.

use crate::bounds::{
    exhaustive_sum_bound, expected_rank, expected_rank_mc, layer_bounds, per_user_bounds, BoundsError,
};
use crate::gf2::{check_cap, count_rank, Gf2Error};
use crate::multi_hop::{
    build_multihop_plan, corollary2_sum_capacity, curve_222, curve_333, require_min_dimensional, theorem3_rate_222,
    theorem4_rate, CurvePoint, MultiHopError,
};
use crate::network::{load_config, ConfigError, LayeredNetwork, NetworkError, MAX_CUT_NODES};
use crate::rational::{Rational, DECIMAL_DIGITS};
use crate::simulator::{simulate_multi_hop, simulate_single_hop, SimulationError, SimulationReport};
use crate::single_hop::{achievable_symmetric_rate, build_plan, c1, SingleHopError};
use clap::{Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Precondition(String),
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Cap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Precondition(m) | CliError::Cap(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<Gf2Error> for CliError {
    fn from(e: Gf2Error) -> Self {
        match e {
            Gf2Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::CutCapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Gf2(g) => g.into(),
            BoundsError::Network(n) => n.into(),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<MultiHopError> for CliError {
    fn from(e: MultiHopError) -> Self {
        match e {
            MultiHopError::Gf2(g) => g.into(),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<SingleHopError> for CliError {
    fn from(e: SingleHopError) -> Self {
        match e {
            SingleHopError::Gf2(g) => g.into(),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<SimulationError> for CliError {
    fn from(e: SimulationError) -> Self {
        match e {
            SimulationError::MultiHop(m) => m.into(),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("cannot write {}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "relaynet", version, about = "Bounds, pairing rates and simulation for binary-field relay networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cut-set upper bounds of a network.
    Bounds(BoundsArgs),
    /// Exact achievable rate of a pairing scheme against its bound.
    Rate(RateArgs),
    /// Lower and upper sum-rate curves of a symmetric two-hop family as CSV.
    Curve(CurveArgs),
    /// Monte Carlo run of a pairing scheme.
    Simulate(SimulateArgs),
    /// Rank counts of binary matrices.
    Ranks(RanksArgs),
}

#[derive(Debug, clap::Args)]
struct BoundsArgs {
    #[arg(long)]
    config: PathBuf,
    /// Exact expected ranks by enumeration (default).
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Monte Carlo expected ranks with this many samples per hop.
    #[arg(long, value_name = "SAMPLES")]
    mc: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Single,
    Multi,
    Theorem3,
}

#[derive(Debug, clap::Args)]
struct RateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    scheme: Scheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "2-2-2")]
    TwoTwoTwo,
    #[value(name = "3-3-3")]
    ThreeThreeThree,
}

#[derive(Debug, clap::Args)]
struct CurveArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Inclusive grid `start:stop:step`; fractions or decimals.
    #[arg(long, value_name = "START:STOP:STEP", value_parser = parse_grid)]
    p_grid: Grid,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimScheme {
    Single,
    Multi,
}

#[derive(Debug, clap::Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    scheme: SimScheme,
    /// Single-hop block length.
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Multi-hop sub-block length.
    #[arg(long, default_value_t = 4000)]
    n_sub: usize,
    /// Multi-hop effective sub-blocks per block.
    #[arg(long, default_value_t = 4)]
    blocks: usize,
    #[arg(long, default_value = "1/10", value_parser = parse_rational)]
    margin: Rational,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct RanksArgs {
    rows: usize,
    cols: usize,
}

#[derive(Debug, Clone)]
struct Grid {
    start: Rational,
    stop: Rational,
    step: Rational,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s).or_else(|_| Rational::from_decimal_str(s)).map_err(|e| format!("`{s}`: {e}"))
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(format!("`{s}` is not of the form start:stop:step"));
    };
    let grid = Grid { start: parse_rational(start)?, stop: parse_rational(stop)?, step: parse_rational(step)? };
    if !grid.step.is_positive() {
        return Err("step must be positive".into());
    }
    if !grid.start.is_probability() || !grid.stop.is_probability() || grid.start > grid.stop {
        return Err("start and stop must satisfy 0 <= start <= stop <= 1".into());
    }
    Ok(grid)
}

impl Grid {
    fn points(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut p = self.start.clone();
        while p <= self.stop {
            out.push(p.clone());
            p = &p + &self.step;
        }
        out
    }
}

/// `num/den (decimal)`.
pub fn show(q: &Rational) -> String {
    format!("{q} ({})", q.to_decimal(DECIMAL_DIGITS))
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Bounds(a) => cmd_bounds(&a, out),
        Command::Rate(a) => cmd_rate(&a, out),
        Command::Curve(a) => cmd_curve(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out).map(|_| ()),
        Command::Ranks(a) => cmd_enumerate_ranks(a.rows, a.cols, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, line: String) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Config(format!("cannot write output: {e}")))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

fn write_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header).map_err(|e| io_error(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

fn bound_row(name: String, q: &Rational) -> Vec<String> {
    vec![name, q.to_decimal(DECIMAL_DIGITS), q.to_string()]
}

fn cmd_bounds(a: &BoundsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let net = load_config(&a.config)?;
    let mut rows = Vec::new();
    if let Some(samples) = a.mc {
        let mut best = f64::INFINITY;
        for (m, law) in net.hops().iter().enumerate() {
            let est = expected_rank_mc(law, samples, a.seed.wrapping_add(m as u64));
            emit(out, format!("layer cut {}: {:.6} +/- {:.6} (Monte Carlo, {} samples)", m + 1, est.mean, est.stderr, samples))?;
            rows.push(vec![format!("layer_cut_{}", m + 1), format!("{:.6}", est.mean), String::new()]);
            best = best.min(est.mean);
        }
        emit(out, format!("sum-rate bound: {best:.6} (Monte Carlo)"))?;
        rows.push(vec!["sum_bound".into(), format!("{best:.6}"), String::new()]);
    } else {
        let layers = layer_bounds(&net)?;
        for (m, q) in layers.iter().enumerate() {
            emit(out, format!("layer cut {}: {}", m + 1, show(q)))?;
            rows.push(bound_row(format!("layer_cut_{}", m + 1), q));
        }
        let sum = layers.iter().min().expect("at least one hop").clone();
        emit(out, format!("sum-rate bound: {}", show(&sum)))?;
        rows.push(bound_row("sum_bound".into(), &sum));
        if net.node_count() <= MAX_CUT_NODES {
            let all = exhaustive_sum_bound(&net)?;
            emit(out, format!("minimum over cuts separating every pair: {}", show(&all)))?;
            rows.push(bound_row("all_cuts_bound".into(), &all));
        } else {
            emit(
                out,
                format!(
                    "minimum over cuts separating every pair: skipped ({} nodes exceed the cap of {MAX_CUT_NODES}); layer cuts only",
                    net.node_count()
                ),
            )?;
        }
    }
    if net.m() == 1 {
        for (k, q) in per_user_bounds(&net)?.iter().enumerate() {
            emit(out, format!("user {} bound: {}", k + 1, show(q)))?;
            rows.push(bound_row(format!("user_{}_bound", k + 1), q));
        }
    }
    if let Some(path) = &a.out {
        write_rows(path, &["quantity", "value", "value_exact"], &rows)?;
    }
    Ok(())
}

fn cmd_rate(a: &RateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let net = load_config(&a.config)?;
    match a.scheme {
        Scheme::Single => rate_single(&net, out),
        Scheme::Multi => rate_multi(&net, out),
        Scheme::Theorem3 => rate_theorem3(&net, out),
    }
}

fn rate_single(net: &LayeredNetwork, out: &mut dyn Write) -> Result<(), CliError> {
    if net.m() != 1 {
        return Err(CliError::Precondition(format!("single-hop scheme needs one hop, network has {}", net.m())));
    }
    let law = net.hop(1);
    let rate = achievable_symmetric_rate(law)?;
    let bound = per_user_bounds(net)?.into_iter().min().expect("at least one user");
    let k = Rational::from(net.k() as i64);
    emit(out, format!("c1: {}", show(&c1(law)?)))?;
    emit(out, format!("per-user rate: {}", show(&rate)))?;
    emit(out, format!("sum rate: {}", show(&(&k * &rate))))?;
    emit(out, format!("per-user bound: {}", show(&bound)))?;
    emit(out, format!("gap: {}", show(&(&bound - &rate))))
}

fn rate_multi(net: &LayeredNetwork, out: &mut dyn Write) -> Result<(), CliError> {
    let info = require_min_dimensional(net)?;
    let rate = theorem4_rate(net)?;
    let k = Rational::from(net.k() as i64);
    let sum = &k * &rate;
    let bound = layer_bounds(net)?.into_iter().min().expect("at least one hop");
    emit(out, format!("bottleneck hop: {} ({} -> {} nodes)", info.m0, info.dims.0, info.dims.1))?;
    emit(out, format!("per-user rate: {}", show(&rate)))?;
    emit(out, format!("sum rate: {}", show(&sum)))?;
    emit(out, format!("sum-rate bound: {}", show(&bound)))?;
    emit(out, format!("gap: {}", show(&(&bound - &sum))))?;
    if let Ok(cap) = corollary2_sum_capacity(net) {
        emit(out, format!("sum capacity: {}", show(&cap)))?;
    }
    Ok(())
}

fn rate_theorem3(net: &LayeredNetwork, out: &mut dyn Write) -> Result<(), CliError> {
    if net.layers() != [2, 2, 2] {
        return Err(MultiHopError::Not222.into());
    }
    let rep = theorem3_rate_222(net.hop(1), net.hop(2))?;
    emit(out, format!("channel family: {:?}", rep.case))?;
    emit(out, format!("sum rate: {}", show(&rep.rate)))?;
    if let Some(c) = &rep.closed_form {
        emit(out, format!("closed-form sum capacity: {}", show(c)))?;
    }
    emit(out, format!("cut-set bound: {}", show(&rep.cut_bound)))?;
    emit(out, format!("gap: {}", show(&(&rep.cut_bound - &rep.rate))))?;
    emit(out, format!("capacity achieving: {}", rep.capacity_achieving))?;
    emit(out, format!("pairs used: {}", rep.pairs.iter().filter(|p| p.weight.is_positive()).count()))
}

/// Curve rows as `p, p_exact, lower_bound, lower_bound_exact, upper_bound, upper_bound_exact`.
pub fn curve_rows(points: &[CurvePoint]) -> Vec<Vec<String>> {
    points
        .iter()
        .map(|c| {
            [&c.p, &c.lower, &c.upper]
                .into_iter()
                .flat_map(|q| [q.to_decimal(DECIMAL_DIGITS), q.to_string()])
                .collect()
        })
        .collect()
}

const CURVE_HEADER: [&str; 6] = ["p", "p_exact", "lower_bound", "lower_bound_exact", "upper_bound", "upper_bound_exact"];

fn cmd_curve(a: &CurveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let points = a
        .p_grid
        .points()
        .iter()
        .map(|p| match a.family {
            Family::TwoTwoTwo => curve_222(p),
            Family::ThreeThreeThree => curve_333(p),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows = curve_rows(&points);
    match &a.out {
        Some(path) => write_rows(path, &CURVE_HEADER, &rows),
        None => {
            let mut w = csv::Writer::from_writer(out);
            let fail = |e: csv::Error| CliError::Config(format!("cannot write output: {e}"));
            w.write_record(CURVE_HEADER).map_err(fail)?;
            for r in &rows {
                w.write_record(r).map_err(fail)?;
            }
            w.flush().map_err(|e| CliError::Config(format!("cannot write output: {e}")))
        }
    }
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<SimulationReport, CliError> {
    let net = load_config(&a.config)?;
    let report = match a.scheme {
        SimScheme::Single => {
            if net.m() != 1 {
                return Err(CliError::Precondition(format!("single-hop scheme needs one hop, network has {}", net.m())));
            }
            let plan = build_plan(net.hop(1), a.n, &a.margin)?;
            emit(out, format!("target per-user rate: {}", show(&plan.target_rate)))?;
            simulate_single_hop(&net, &plan, a.trials, a.seed)?
        }
        SimScheme::Multi => {
            let plan = build_multihop_plan(&net, a.n_sub, a.blocks, &a.margin)?;
            emit(out, format!("target per-user rate: {}", show(&plan.target_rate)))?;
            simulate_multi_hop(&net, &plan, a.trials, a.seed)?
        }
    };
    emit(out, format!("code sum rate: {}", show(&report.code_sum_rate)))?;
    emit(out, format!("trials: {} (seed {})", report.trials, report.seed))?;
    emit(
        out,
        format!("encoding error rate: {:.6} +/- {:.6}", report.encoding_error_rate, report.encoding_error_stderr),
    )?;
    for (k, (r, s)) in report.per_source_error_rate.iter().zip(&report.per_source_error_stderr).enumerate() {
        emit(out, format!("source {} error rate: {r:.6} +/- {s:.6}", k + 1))?;
    }
    emit(out, format!("conditional decode errors: {}", report.conditional_decode_errors))?;
    emit(
        out,
        format!(
            "realized sum rate: {:.6} +/- {:.6} bits per channel use",
            report.realized_rate_bits_per_use, report.realized_rate_stderr
        ),
    )?;
    if let Some(path) = &a.out {
        let mut w = create(path)?;
        report.write_csv(&mut w).map_err(|e| io_error(path, e))?;
        w.flush().map_err(|e| io_error(path, e))?;
    }
    Ok(report)
}

/// Prints `N_{rows,cols}(r)` for every rank and `E rank` at `p = 1/2`.
pub fn cmd_enumerate_ranks(rows: usize, cols: usize, out: &mut dyn Write) -> Result<(), CliError> {
    if rows == 0 || cols == 0 {
        return Err(CliError::Precondition(format!("invalid dimensions {rows}x{cols}")));
    }
    check_cap(rows * cols)?;
    emit(out, "rank,count".into())?;
    let mut weighted = num_bigint::BigInt::from(0);
    for r in 0..=rows.min(cols) {
        let n = count_rank(rows, cols, r);
        weighted += &n * r;
        emit(out, format!("{r},{n}"))?;
    }
    let total = num_bigint::BigInt::from(1) << (rows * cols);
    let mean = Rational::new(weighted, total);
    debug_assert_eq!(
        Ok(mean.clone()),
        expected_rank(&crate::ChannelLaw::bernoulli_uniform(rows, cols, Rational::new(1, 2)).expect("valid"))
    );
    emit(out, format!("E(rank) at p=1/2: {}", show(&mean)))
}
