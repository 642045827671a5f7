use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hydrolens::free_schmidt::schmidt_spread;
use hydrolens::gaussian_ppt::{detection_map, ppt_closed_form, ppt_numeric, GridAxis};
use hydrolens::linear_entropy::linear_entropy;
use hydrolens::verify::{run_all, VerifyConfig};
use hydrolens::{DetectionMap, MomentSet, QuantumNumbers, SystemParams, Volume};
use serde_json::json;
use thiserror::Error;

const EXIT_NUMERIC: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_DETECTED: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_VERIFY: u8 = 5;

const THREADS_ENV: &str = "HYDROLENS_THREADS";

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Core(#[from] hydrolens::Error),
    #[error("{failed} of {total} checks failed")]
    Verify { failed: usize, total: usize },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Core(hydrolens::Error::Domain(_) | hydrolens::Error::Usage(_)) => EXIT_USAGE,
            CliError::Core(_) => EXIT_NUMERIC,
            CliError::Verify { .. } => EXIT_VERIFY,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Entanglement witnesses for hydrogen-like two-body systems.
#[derive(Debug, Parser)]
#[command(name = "hydrolens", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Schmidt spread of a free eigenstate.
    Schmidt(SchmidtArgs),
    /// Second moments of the localized state.
    Moments(PptArgs),
    /// PPT symplectic eigenvalues; exit 0 if detected, 3 if not.
    Ppt(PptArgs),
    /// Detection map over a grid of (a0, b).
    Map(MapArgs),
    /// Closed forms against quadrature oracles.
    Verify(VerifyArgs),
    /// Linear entropy of a free eigenstate.
    Linent(LinentArgs),
}

#[derive(Debug, Args)]
struct StateArgs {
    /// Principal quantum number.
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    l: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    m: i32,
}

impl StateArgs {
    fn resolve(&self) -> CliResult<QuantumNumbers> {
        QuantumNumbers::new(self.n, self.l, self.m).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
struct PhysicalArgs {
    /// Reduced Bohr radius.
    #[arg(long, conflicts_with_all = ["alpha", "mu"])]
    a0: Option<f64>,
    /// Coupling constant; with --mu gives a0 = hbar²/(mu alpha).
    #[arg(long, requires = "mu")]
    alpha: Option<f64>,
    /// Reduced mass.
    #[arg(long, requires = "alpha")]
    mu: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

impl PhysicalArgs {
    fn resolve(&self) -> CliResult<Option<SystemParams>> {
        let params = match (self.a0, self.alpha, self.mu) {
            (Some(a0), _, _) => SystemParams::from_bohr_radius(a0)?.with_hbar(self.hbar)?,
            (None, Some(alpha), Some(mu)) => SystemParams::from_coupling(alpha, mu, self.hbar)?,
            _ => return Ok(None),
        };
        Ok(Some(params))
    }

    fn require(&self) -> CliResult<SystemParams> {
        self.resolve()?
            .ok_or_else(|| CliError::Usage("give --a0, or --alpha and --mu".into()))
    }
}

#[derive(Debug, Args)]
struct SchmidtArgs {
    /// Principal quantum number.
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    l: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    m: i32,
    #[command(flatten)]
    physical: PhysicalArgs,
}

#[derive(Debug, Args)]
struct PptArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Ratio a0/b of Bohr radius to centre-of-mass width.
    #[arg(long, conflicts_with = "b")]
    ratio: Option<f64>,
    /// Centre-of-mass width; needs a0 from the physical flags.
    #[arg(long)]
    b: Option<f64>,
    #[command(flatten)]
    physical: PhysicalArgs,
}

impl PptArgs {
    /// `(a0/b, length scale)`; the scale is 1 when only the ratio is given.
    fn resolve(&self) -> CliResult<(QuantumNumbers, f64, f64)> {
        let qn = self.state.resolve()?;
        let params = self.physical.resolve()?;
        match (self.ratio, self.b, params) {
            (Some(ratio), None, p) => {
                let a0 = p.map_or(1.0, |p| p.a0());
                Ok((qn, positive_flag("--ratio", ratio)?, a0))
            }
            (None, Some(b), Some(p)) => Ok((qn, p.with_width(b)?.a0_over_b()?, p.a0())),
            (None, Some(_), None) => Err(CliError::Usage("--b needs --a0 (or --alpha and --mu)".into())),
            _ => Err(CliError::Usage("give --ratio, or --b together with --a0".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MapFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct MapArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, default_value_t = 0.5)]
    a0_min: f64,
    #[arg(long, default_value_t = 2.0)]
    a0_max: f64,
    #[arg(long, default_value_t = 16)]
    a0_points: usize,
    #[arg(long, default_value_t = 0.5)]
    b_min: f64,
    #[arg(long, default_value_t = 2.0)]
    b_max: f64,
    #[arg(long, default_value_t = 16)]
    b_points: usize,
    #[arg(long, value_enum, default_value_t = MapFormat::Csv)]
    format: MapFormat,
    /// Output file; standard output if absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Largest principal quantum number swept by any check.
    #[arg(long, default_value_t = 10)]
    n_max: u32,
    /// Relative error injected into every closed form.
    #[arg(long, hide = true, default_value_t = 0.0)]
    inject_fault: f64,
}

#[derive(Debug, Args)]
struct LinentArgs {
    /// Principal quantum number.
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    l: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    m: i32,
    #[command(flatten)]
    physical: PhysicalArgs,
    /// Finite normalization volume.
    #[arg(long)]
    volume: Option<f64>,
}

fn positive_flag(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive, got {v}")))
    }
}

/// Six significant digits.
fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        return format!("{v:.5e}");
    }
    format!("{v:.*}", (5 - exp).max(0) as usize)
}

fn threads() -> CliResult<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {raw:?}"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn cmd_schmidt(args: &SchmidtArgs) -> CliResult<u8> {
    let qn = QuantumNumbers::new(args.n, args.l, args.m).map_err(|e| CliError::Usage(e.to_string()))?;
    let params = args.physical.require()?;
    let s = schmidt_spread(qn, &params);
    println!("state            {}", qn_label(qn));
    println!("a0               {}", sig6(params.a0()));
    println!("delta_k          {}", sig6(s.delta_k));
    println!("delta_p          {}", sig6(s.delta_p));
    println!("convention       {}", sig6(s.convention_factor));
    if s.is_entangled() {
        println!("verdict          entangled (Δk̄ > 0)");
    } else {
        println!("verdict          not entangled (Δk̄ = 0)");
    }
    Ok(0)
}

fn cmd_moments(args: &PptArgs) -> CliResult<u8> {
    let (qn, ratio, a0) = args.resolve()?;
    let hbar = args.physical.hbar;
    let ms = MomentSet::new(qn, ratio)?;
    let rows = [
        ("<x²> <y²> <z²>", ms.relative_positions_scaled(a0)),
        ("<px²> <py²> <pz²>", ms.relative_momenta_scaled(a0, hbar)),
        ("<X²> <Y²> <Z²>", ms.com_positions_scaled(a0)),
        ("<PX²> <PY²> <PZ²>", ms.com_momenta_scaled(a0, hbar)),
    ];
    println!("state              {}", qn_label(qn));
    println!("a0/b               {}", sig6(ratio));
    for (label, v) in rows {
        println!("{label:<18} {} {} {}", sig6(v[0]), sig6(v[1]), sig6(v[2]));
    }
    Ok(0)
}

fn cmd_ppt(args: &PptArgs) -> CliResult<u8> {
    let (qn, ratio, _) = args.resolve()?;
    let closed = ppt_closed_form(qn, ratio)?;
    let numeric = ppt_numeric(qn, ratio)?;
    println!("state      {}", qn_label(qn));
    println!("a0/b       {}", sig6(ratio));
    for (i, v) in closed.nu.iter().enumerate() {
        println!("nu{}        {}", i + 1, sig6(*v));
    }
    println!("min        {}", sig6(closed.verdict.min));
    println!("numeric    {}", sig6(numeric.min));
    if closed.verdict.detected {
        println!("detected   yes");
        Ok(0)
    } else {
        println!("detected   no");
        Ok(EXIT_NOT_DETECTED)
    }
}

fn map_json(map: &DetectionMap) -> String {
    let rows: Vec<_> = map
        .rows
        .iter()
        .map(|r| {
            json!({
                "a0": r.a0,
                "b": r.b,
                "nu1": r.nu1,
                "nu2": r.nu2,
                "nu5": r.nu5,
                "nu6": r.nu6,
                "min_nu": r.min_nu,
                "detected": u8::from(r.detected),
            })
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&rows).expect("map rows serialize");
    out.push('\n');
    out
}

fn cmd_map(args: &MapArgs) -> CliResult<u8> {
    let qn = args.state.resolve()?;
    let usage = |e: hydrolens::Error| CliError::Usage(e.to_string());
    let a0_axis = GridAxis::new(args.a0_min, args.a0_max, args.a0_points).map_err(usage)?;
    let b_axis = GridAxis::new(args.b_min, args.b_max, args.b_points).map_err(usage)?;
    let map = detection_map(qn, a0_axis, b_axis, threads()?)?;
    let text = match args.format {
        MapFormat::Csv => map.to_csv(),
        MapFormat::Json => map_json(&map),
    };
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<u8> {
    if args.n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    let cfg = VerifyConfig {
        n_max: args.n_max,
        perturbation: args.inject_fault,
    };
    let results = run_all(&cfg);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::Verify {
            failed,
            total: results.len(),
        });
    }
    println!("all {} checks passed", results.len());
    Ok(0)
}

fn cmd_linent(args: &LinentArgs) -> CliResult<u8> {
    let qn = QuantumNumbers::new(args.n, args.l, args.m).map_err(|e| CliError::Usage(e.to_string()))?;
    let a0 = args.physical.resolve()?.map_or(1.0, |p| p.a0());
    let volume = match args.volume {
        Some(v) => Volume::Finite(positive_flag("--volume", v)?),
        None => Volume::Infinite,
    };
    let r = linear_entropy(qn, a0, volume)?;
    println!("state      {}", qn_label(qn));
    println!("I_ang      {}", sig6(r.i_ang));
    println!("I_rad      {} a0³", sig6(r.i_rad / a0.powi(3)));
    println!("product    {}", sig6(r.product));
    match volume {
        Volume::Finite(v) => println!("S_Lin      {} (V = {})", sig6(r.s_lin), sig6(v)),
        Volume::Infinite => println!("S_Lin      → 1 (V → ∞)"),
    }
    Ok(0)
}

fn qn_label(qn: QuantumNumbers) -> String {
    format!("(n, l, m) = ({}, {}, {})", qn.n(), qn.l(), qn.m())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Schmidt(a) => cmd_schmidt(a),
        Command::Moments(a) => cmd_moments(a),
        Command::Ppt(a) => cmd_ppt(a),
        Command::Map(a) => cmd_map(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Linent(a) => cmd_linent(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hydrolens: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
