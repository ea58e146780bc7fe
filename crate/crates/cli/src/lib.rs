//! Command-line driver for `torus-core`.
//!
//! Every subcommand produces one table, written as CSV or JSON to `--out`
//! (or stdout). A file output is accompanied by `<out>.manifest.json`
//! recording the command, its parameters and the SHA-256 of the data.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid input,
//! 3 numerical failure or I/O error, 64 usage error.

pub mod output;
pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, ColorChoice, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use torus_core::eigen::eigvalsh_band;
use torus_core::geometry::{half_width_a, natural_u, torus_point};
use torus_core::operators::assemble_toroidal_band;
use torus_core::thermo::{
    continuum_log_z, grand_potential_log, mean_particle_number, solve_chemical_potential,
};
use torus_core::{
    assemble_block, eigh, Cutoffs, FermiSea, NaturalCoords, OperatorKind, Sector, Statistics,
    ThermoState, TorusGeometry,
};

use output::{emit, encode, json_bytes, manifest_path, write_stdout, Cell, Format, RunManifest, Table};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Timestamp recorded when `--timestamp` is not given, so that manifests
/// of identical runs are identical.
pub const EPOCH: &str = "1970-01-01T00:00:00Z";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "torus", version, about = "Spectra, toroidal dipole and thermodynamics of a particle on a torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lowest eigenvalues of one operator block.
    Spectrum(SpectrumArgs),
    /// Energies and toroidal dipole expectations per level.
    Expect(ExpectArgs),
    /// Grand-canonical sums, or the zero-temperature Fermi sea with --fill-to.
    Thermo(ThermoArgs),
    /// Natural coordinates (k, u) of points.
    Natcoords(NatcoordsArgs),
    /// Run verification suites; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Levels over a grid of aspect ratios.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; stdout when omitted. A file gets a manifest beside it.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// ISO-8601 timestamp for the manifest, or `now`.
    #[arg(long, default_value = EPOCH)]
    timestamp: String,
}

#[derive(Debug, Args)]
struct SiArgs {
    /// Convert energies and dipoles to SI units.
    #[arg(long, requires_all = ["major_radius", "mass"])]
    si: bool,
    /// Major radius in meters.
    #[arg(long = "R", value_name = "METERS")]
    major_radius: Option<f64>,
    /// Particle mass in kilograms.
    #[arg(long, value_name = "KG")]
    mass: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OperatorArg {
    Hamiltonian,
    Toroidal,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// Aspect ratio R/r.
    #[arg(long)]
    a: f64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    m: i64,
    /// Basis truncation |n| <= N.
    #[arg(long = "N", default_value_t = 250)]
    truncation: usize,
    #[arg(long, default_value_t = 10)]
    levels: usize,
    /// The toroidal spectrum is unbounded; its levels nearest zero are listed.
    #[arg(long, value_enum, default_value_t = OperatorArg::Hamiltonian)]
    operator: OperatorArg,
    #[command(flatten)]
    si: SiArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ExpectArgs {
    /// Aspect ratios, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<f64>,
    /// Sectors: integers and inclusive ranges such as `0:3`, comma separated.
    #[arg(long, default_value = "0", value_parser = parse_int_set, allow_hyphen_values = true)]
    m: IntSet,
    #[arg(long = "N", default_value_t = 250)]
    truncation: usize,
    #[arg(long, default_value_t = 100)]
    levels: usize,
    #[command(flatten)]
    si: SiArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatsArg {
    Fermi,
    Bose,
}

impl From<StatsArg> for Statistics {
    fn from(s: StatsArg) -> Self {
        match s {
            StatsArg::Fermi => Statistics::Fermi,
            StatsArg::Bose => Statistics::Bose,
        }
    }
}

#[derive(Debug, Args)]
struct ThermoArgs {
    #[arg(long)]
    a: f64,
    #[arg(long, value_enum, default_value_t = StatsArg::Fermi)]
    stats: StatsArg,
    /// Inverse temperatures in 1/E0, comma separated.
    #[arg(long, value_delimiter = ',', required_unless_present = "fill_to", conflicts_with = "fill_to")]
    beta: Vec<f64>,
    /// Chemical potential in E0.
    #[arg(long, allow_hyphen_values = true, required_unless_present_any = ["particles", "fill_to"], conflicts_with_all = ["particles", "fill_to"])]
    mu: Option<f64>,
    /// Mean particle number; the chemical potential is solved for.
    #[arg(long, conflicts_with = "fill_to")]
    particles: Option<f64>,
    /// Mode cutoff |n| <= n-cut; default encloses all modes with β(ε − μ) < 64.
    #[arg(long, requires = "m_cut", conflicts_with = "fill_to")]
    n_cut: Option<u32>,
    /// Mode cutoff |m| <= m-cut; with --fill-to, the sectors filled (default 3).
    #[arg(long)]
    m_cut: Option<u32>,
    /// Fill the lowest single-particle levels with 1..=K fermions.
    #[arg(long, value_name = "K")]
    fill_to: Option<usize>,
    /// Basis truncation of each sector in fill mode.
    #[arg(long = "N", default_value_t = 250)]
    truncation: usize,
    #[command(flatten)]
    si: SiArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct NatcoordsArgs {
    /// Values of k = [ρ²(z² + ρ²)]^(1/4), comma separated.
    #[arg(long, value_delimiter = ',', requires = "z", conflicts_with_all = ["a", "theta"])]
    k: Vec<f64>,
    /// Heights z, comma separated; every k is paired with every z.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    z: Vec<f64>,
    /// Aspect ratio of a torus whose surface points are converted.
    #[arg(long, requires = "theta", required_unless_present = "k")]
    a: Option<f64>,
    /// Poloidal angles in radians, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta: Vec<f64>,
    /// Tolerance of the u integral.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Oracle,
    Identity,
    Natcoords,
    Convergence,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    /// Aspect ratios; each suite has its own default.
    #[arg(long, value_delimiter = ',')]
    a: Vec<f64>,
    /// Oracle grid |n1|, |n2| <= nmax.
    #[arg(long, default_value_t = 5)]
    nmax: i64,
    #[arg(long, default_value = "0:3", value_parser = parse_int_set, allow_hyphen_values = true)]
    m: IntSet,
    /// Poloidal samples per aspect ratio for the identity suite.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long = "N-small", default_value_t = 250)]
    n_small: usize,
    #[arg(long = "N-large", default_value_t = 1000)]
    n_large: usize,
    /// Levels compared by the convergence suite.
    #[arg(long, default_value_t = 100)]
    levels: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// `a=lo:hi:step`, both ends inclusive.
    #[arg(long, value_parser = parse_grid)]
    grid: Grid,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, default_value_t = 5)]
    levels: usize,
    #[arg(long = "N", default_value_t = 250)]
    truncation: usize,
    #[command(flatten)]
    si: SiArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct IntSet(Vec<i64>);

fn parse_int_set(s: &str) -> Result<IntSet, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        match part.split_once(':') {
            Some((lo, hi)) => {
                let lo: i64 = lo.trim().parse().map_err(|e| format!("bad range start {lo:?}: {e}"))?;
                let hi: i64 = hi.trim().parse().map_err(|e| format!("bad range end {hi:?}: {e}"))?;
                if hi < lo || hi - lo > 10_000 {
                    return Err(format!("range {lo}:{hi} is empty or too long"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|e| format!("bad integer {part:?}: {e}"))?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(IntSet(out))
}

/// Grid points are rounded to 12 decimals so that `1.1 + 2·0.1` is
/// reported as `1.3`.
#[derive(Debug, Clone, PartialEq)]
struct Grid {
    spec: String,
    values: Vec<f64>,
}

const MAX_GRID_POINTS: usize = 100_000;

fn parse_grid(s: &str) -> Result<Grid, String> {
    let body = s.strip_prefix("a=").ok_or_else(|| format!("grid must look like a=lo:hi:step, got {s:?}"))?;
    let parts: Vec<f64> = body
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad grid number {p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [lo, hi, step] = parts[..] else {
        return Err(format!("grid must look like a=lo:hi:step, got {s:?}"));
    };
    if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && hi >= lo) {
        return Err(format!("grid needs finite lo <= hi and step > 0, got {s:?}"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > MAX_GRID_POINTS {
        return Err(format!("grid has {count} points, limit {MAX_GRID_POINTS}"));
    }
    let values = (0..count).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect();
    Ok(Grid { spec: s.to_owned(), values })
}

#[derive(Debug)]
enum CliError {
    Core(torus_core::Error),
    Io(io::Error),
    /// Inconsistent arguments that clap cannot express.
    Invalid(String),
    VerifyFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numeric() => EXIT_NUMERIC,
            CliError::Core(torus_core::Error::Allocation { .. }) => EXIT_NUMERIC,
            CliError::Core(_) | CliError::Invalid(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_NUMERIC,
            CliError::VerifyFailed(_) => EXIT_VERIFY_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Invalid(msg) => write!(f, "invalid argument: {msg}"),
            CliError::VerifyFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

impl From<torus_core::Error> for CliError {
    fn from(e: torus_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (program name first), runs the subcommand and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let color = if std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty()) {
        ColorChoice::Never
    } else {
        ColorChoice::Auto
    };
    let matches = match Cli::command().color(color).try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => return usage_exit(&e),
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => return usage_exit(&e),
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("torus: error: {e}");
            e.exit_code()
        }
    }
}

fn usage_exit(e: &clap::Error) -> i32 {
    use clap::error::ErrorKind;
    let _ = e.print();
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
        _ => EXIT_USAGE,
    }
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Spectrum(args) => spectrum(args),
        Command::Expect(args) => expect(args),
        Command::Thermo(args) => thermo(args),
        Command::Natcoords(args) => natcoords(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Sweep(args) => sweep(args),
    }
}

/// Scales from reduced to SI units, which depend on the aspect ratio.
#[derive(Debug, Clone, Copy)]
struct Units {
    /// `(R, mass)` when converting.
    si: Option<(f64, f64)>,
}

impl Units {
    fn from_args(args: &SiArgs) -> CliResult<Self> {
        if !args.si {
            return Ok(Self { si: None });
        }
        let (Some(r), Some(mass)) = (args.major_radius, args.mass) else {
            return Err(CliError::Invalid("--si needs --R and --mass".into()));
        };
        for (name, v) in [("--R", r), ("--mass", mass)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { si: Some((r, mass)) })
    }

    /// `E₀ = ħ²a²/(2mR²)` in joules, or 1.
    fn energy_scale(self, a: f64) -> f64 {
        self.si.map_or(1.0, |(r, mass)| HBAR * HBAR * a * a / (2.0 * mass * r * r))
    }

    /// `T₀ = ħR/(10 m a)` in m³/s, or 1.
    fn t3_scale(self, a: f64) -> f64 {
        self.si.map_or(1.0, |(r, mass)| HBAR * r / (10.0 * mass * a))
    }

    fn energy_col(self, stem: &str) -> String {
        format!("{stem}_{}", if self.si.is_some() { "J" } else { "E0" })
    }

    fn t3_col(self, stem: &str) -> String {
        format!("{stem}_{}", if self.si.is_some() { "m3_s" } else { "T0" })
    }

    fn params(self) -> Value {
        match self.si {
            None => json!(false),
            Some((r, mass)) => json!({ "R_m": r, "mass_kg": mass }),
        }
    }
}

fn finish(command: &str, mut params: BTreeMap<String, Value>, table: &Table, out: &OutputArgs) -> CliResult<()> {
    let format = match out.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let timestamp = resolve_timestamp(&out.timestamp)?;
    let bytes = encode(table, format)?;
    let Some(path) = &out.out else {
        return Ok(write_stdout(&bytes)?);
    };
    params.insert("format".into(), json!(if format == Format::Csv { "csv" } else { "json" }));
    let (name, sum) = emit(&bytes, path)?;
    let manifest = RunManifest {
        command: command.into(),
        parameters: params,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        timestamp,
        checksums: BTreeMap::from([(name, sum)]),
    };
    fs::write(manifest_path(path), json_bytes(&manifest.to_json())?)?;
    Ok(())
}

fn resolve_timestamp(s: &str) -> CliResult<String> {
    use chrono::{DateTime, SecondsFormat, Utc};
    if s == "now" {
        return Ok(Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true));
    }
    DateTime::parse_from_rfc3339(s)
        .map(|t| t.with_timezone(&Utc).to_rfc3339_opts(SecondsFormat::AutoSi, true))
        .map_err(|e| CliError::Invalid(format!("timestamp {s:?} is not ISO-8601: {e}")))
}

macro_rules! params {
    ($($k:literal => $v:expr),* $(,)?) => {
        BTreeMap::from([$(($k.to_string(), json!($v))),*])
    };
}

fn spectrum(args: SpectrumArgs) -> CliResult<()> {
    let units = Units::from_args(&args.si)?;
    let (a, n) = (args.a, args.truncation);
    let mut table;
    match args.operator {
        OperatorArg::Hamiltonian => {
            let spec = eigh(&assemble_block(OperatorKind::Hamiltonian, n, args.m, a)?)?;
            check_levels(args.levels, spec.dim())?;
            table = Table::new(["h".to_string(), units.energy_col("energy")]);
            for (h, e) in spec.eigenvalues()[..args.levels].iter().enumerate() {
                table.push(vec![h.into(), (e * units.energy_scale(a)).into()]);
            }
        }
        OperatorArg::Toroidal => {
            let values = eigvalsh_band(&assemble_toroidal_band(n, a)?)?;
            check_levels(args.levels, values.len())?;
            let start = (values.len() - args.levels) / 2;
            table = Table::new(["h".to_string(), units.t3_col("t3")]);
            for (i, t) in values[start..start + args.levels].iter().enumerate() {
                table.push(vec![(start + i).into(), (t * units.t3_scale(a)).into()]);
            }
        }
    }
    let operator = match args.operator {
        OperatorArg::Hamiltonian => OperatorKind::Hamiltonian.name(),
        OperatorArg::Toroidal => OperatorKind::ToroidalDipole.name(),
    };
    let params = params! {
        "a" => a, "m" => args.m, "N" => n, "levels" => args.levels,
        "operator" => operator, "si" => units.params(),
    };
    finish("spectrum", params, &table, &args.output)
}

fn check_levels(levels: usize, dim: usize) -> CliResult<()> {
    if levels == 0 || levels > dim {
        return Err(torus_core::Error::IndexOutOfRange { index: levels.saturating_sub(1), dim }.into());
    }
    Ok(())
}

/// Evaluates `f` on every item with a pool of scoped threads and returns
/// the results in input order.
fn fan_out<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> CliResult<R> + Sync) -> CliResult<Vec<R>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<CliResult<R>>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers have finished")
        .into_iter()
        .map(|r| r.expect("every slot is filled"))
        .collect()
}

/// `(h, energy, ⟨T₃⟩)` of the lowest `levels` levels of one sector.
fn sector_levels(a: f64, m: i64, truncation: usize, levels: usize) -> CliResult<Vec<(usize, f64, f64)>> {
    let sector = Sector::new(a, m, truncation)?;
    check_levels(levels, sector.energies().len())?;
    Ok((0..levels).map(|h| (h, sector.energies()[h], sector.t3_expectations()[h])).collect())
}

fn expect(args: ExpectArgs) -> CliResult<()> {
    let units = Units::from_args(&args.si)?;
    let jobs: Vec<(f64, i64)> = args.a.iter().flat_map(|&a| args.m.0.iter().map(move |&m| (a, m))).collect();
    let results = fan_out(&jobs, |&(a, m)| sector_levels(a, m, args.truncation, args.levels))?;
    let mut table = Table::new(["a".into(), "m".into(), "h".into(), units.energy_col("energy"), units.t3_col("t3")]);
    for (&(a, m), rows) in jobs.iter().zip(results) {
        for (h, e, t) in rows {
            table.push(vec![a.into(), m.into(), h.into(), (e * units.energy_scale(a)).into(), (t * units.t3_scale(a)).into()]);
        }
    }
    table.sort_by_leading(3);
    let params = params! {
        "a" => args.a, "m" => args.m.0, "N" => args.truncation, "levels" => args.levels,
        "si" => units.params(),
    };
    finish("expect", params, &table, &args.output)
}

fn sweep(args: SweepArgs) -> CliResult<()> {
    let units = Units::from_args(&args.si)?;
    let results = fan_out(&args.grid.values, |&a| sector_levels(a, args.m, args.truncation, args.levels))?;
    let mut table = Table::new(["a".into(), "h".into(), units.energy_col("energy"), units.t3_col("t3")]);
    for (&a, rows) in args.grid.values.iter().zip(results) {
        for (h, e, t) in rows {
            table.push(vec![a.into(), h.into(), (e * units.energy_scale(a)).into(), (t * units.t3_scale(a)).into()]);
        }
    }
    table.sort_by_leading(2);
    let params = params! {
        "grid" => args.grid.spec, "m" => args.m, "N" => args.truncation, "levels" => args.levels,
        "si" => units.params(),
    };
    finish("sweep", params, &table, &args.output)
}

fn thermo(args: ThermoArgs) -> CliResult<()> {
    let units = Units::from_args(&args.si)?;
    let a = args.a;
    let stats = Statistics::from(args.stats);
    if let Some(k) = args.fill_to {
        if stats != Statistics::Fermi {
            return Err(CliError::Invalid("--fill-to fills a Fermi sea; use --stats fermi".into()));
        }
        let m_cut = args.m_cut.unwrap_or(3);
        let sea = FermiSea::new(a, m_cut, args.truncation)?;
        let mut table = Table::new([
            "particles".into(),
            units.energy_col("total_energy"),
            units.t3_col("total_t3"),
            "last_m".into(),
            "last_h".into(),
        ]);
        for p in 1..=k {
            let report = sea.fill(p)?;
            let last = sea.levels()[p - 1];
            table.push(vec![
                p.into(),
                (report.total_energy * units.energy_scale(a)).into(),
                (report.total_t3 * units.t3_scale(a)).into(),
                last.m.into(),
                last.h.into(),
            ]);
        }
        let params = params! {
            "a" => a, "stats" => stats.name(), "fill_to" => k, "m_cut" => m_cut,
            "N" => args.truncation, "si" => units.params(),
        };
        return finish("thermo", params, &table, &args.output);
    }

    let cutoffs = match (args.n_cut, args.m_cut) {
        (Some(n), Some(m)) => Some(Cutoffs { n, m }),
        (None, None) => None,
        _ => return Err(CliError::Invalid("--n-cut and --m-cut go together".into())),
    };
    let e0 = units.energy_scale(a);
    let mut table = Table::new([
        if units.si.is_some() { "beta_per_J".to_string() } else { "beta_per_E0".to_string() },
        units.energy_col("mu"),
        "ln_z".into(),
        "ln_z_tail".into(),
        "ln_z_continuum".into(),
        "mean_particles".into(),
        "cutoff_n".into(),
        "cutoff_m".into(),
        "converged".into(),
    ]);
    for &beta in &args.beta {
        let mu = match (args.mu, args.particles) {
            (Some(mu), _) => mu,
            (None, Some(target)) => solve_chemical_potential(stats, beta, target, a, cutoffs)?,
            (None, None) => unreachable!("clap requires --mu or --particles"),
        };
        let state = match cutoffs {
            Some(c) => ThermoState::new(stats, beta, mu, c)?,
            None => ThermoState::with_default_cutoffs(stats, beta, mu, a)?,
        };
        let ln_z = grand_potential_log(&state, a)?;
        let n = mean_particle_number(&state, a)?;
        let continuum = continuum_log_z(stats, beta, mu, a)?;
        table.push(vec![
            Cell::Float(beta / e0),
            Cell::Float(mu * e0),
            ln_z.value.into(),
            ln_z.tail.into(),
            continuum.into(),
            n.value.into(),
            state.cutoffs.n.into(),
            state.cutoffs.m.into(),
            (ln_z.converged && n.converged).into(),
        ]);
    }
    table.sort_by_leading(1);
    let params = params! {
        "a" => a, "stats" => stats.name(), "beta" => args.beta, "mu" => args.mu,
        "particles" => args.particles, "n_cut" => args.n_cut, "m_cut" => args.m_cut,
        "si" => units.params(),
    };
    finish("thermo", params, &table, &args.output)
}

fn natcoords(args: NatcoordsArgs) -> CliResult<()> {
    let mut table = Table::new(["k", "z", "u_10mp", "half_width_10mp"]);
    let params;
    if let Some(a) = args.a {
        let geom = TorusGeometry::new(a)?;
        for &theta in &args.theta {
            let p = torus_point(&geom, theta)?;
            let c = NaturalCoords::from_cylindrical(p.rho, p.z, args.tol)?;
            table.push(vec![c.k.into(), p.z.into(), c.u.into(), c.half_width().into()]);
        }
        params = params! { "a" => a, "theta" => args.theta, "tol" => args.tol };
    } else {
        if args.z.is_empty() {
            return Err(CliError::Invalid("--k needs --z".into()));
        }
        for &k in &args.k {
            for &z in &args.z {
                let u = natural_u(k, z, args.tol)?;
                table.push(vec![k.into(), z.into(), u.into(), half_width_a(k)?.into()]);
            }
        }
        params = params! { "k" => args.k, "z" => args.z, "tol" => args.tol };
    }
    table.sort_by_leading(2);
    finish("natcoords", params, &table, &args.output)
}

/// Default aspect ratios of the oracle and identity suites.
const ORACLE_ASPECT_RATIOS: [f64; 3] = [1.5, 2.0, 3.0];
const IDENTITY_ASPECT_RATIOS: [f64; 5] = [1.1, 1.5, 2.0, 3.0, 10.0];

fn verify_cmd(args: VerifyArgs) -> CliResult<()> {
    let run = |s: SuiteArg| args.suite == SuiteArg::All || args.suite == s;
    let pick = |default: &[f64]| if args.a.is_empty() { default.to_vec() } else { args.a.clone() };
    let mut checks = Vec::new();
    if run(SuiteArg::Oracle) {
        checks.extend(verify::oracle(&pick(&ORACLE_ASPECT_RATIOS), &args.m.0, args.nmax, 1e-8)?);
    }
    if run(SuiteArg::Identity) {
        checks.extend(verify::identity(&pick(&IDENTITY_ASPECT_RATIOS), args.samples, 1e-12)?);
    }
    if run(SuiteArg::Natcoords) {
        checks.extend(verify::natcoords()?);
    }
    if run(SuiteArg::Convergence) {
        for a in pick(&[2.0]) {
            checks.extend(verify::convergence(a, &args.m.0, args.n_small, args.n_large, args.levels, 1e-5)?);
        }
    }
    let mut table = Table::new(["suite", "check", "value", "limit", "passed"]);
    for c in &checks {
        table.push(vec![c.suite.into(), c.check.as_str().into(), c.value.into(), c.limit.into(), c.passed().into()]);
    }
    let suite = match args.suite {
        SuiteArg::Oracle => "oracle",
        SuiteArg::Identity => "identity",
        SuiteArg::Natcoords => "natcoords",
        SuiteArg::Convergence => "convergence",
        SuiteArg::All => "all",
    };
    let params = params! {
        "suite" => suite, "a" => args.a, "nmax" => args.nmax, "m" => args.m.0,
        "samples" => args.samples, "N_small" => args.n_small, "N_large" => args.n_large,
        "levels" => args.levels,
    };
    finish("verify", params, &table, &args.output)?;
    let failed = checks.iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}
