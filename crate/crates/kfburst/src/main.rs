//! Command-line front end: curves as CSV, validation reports as JSON.
//!
//! Every artifact starts with a `#`-prefixed provenance block (parameters,
//! tolerances, seed, version) sufficient to reproduce it bit for bit.
//! Exit codes: 0 success, 2 invalid input, 3 validation failure,
//! 4 numerical non-convergence.

// `!(x > y)` guards are deliberate: unlike `x <= y` they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kfburst::cauchy;
use kfburst::error::Error;
use kfburst::green;
use kfburst::init::InitialDensity;
use kfburst::laplace::{oracle_green_regular, InversionConfig, LaplaceImage};
use kfburst::mc;
use kfburst::params::{ModelParams, SeriesConfig};
use kfburst::pde;
use kfburst::validate::{run_suite, Suite, SuiteOptions};

const FIG1_LEFT: &str = include_str!("../../../presets/fig1_left.conf");
const FIG1_RIGHT: &str = include_str!("../../../presets/fig1_right.conf");

#[derive(Parser)]
#[command(
    name = "kfburst",
    version,
    about = "Bursty protein expression: exact densities, oracles and cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Green's-function regular part on an x grid, plus atom bookkeeping
    Green(GreenArgs),
    /// Solve the Cauchy problem for an initial density at one or more times
    Solve(SolveArgs),
    /// Stationary gamma density and its mode
    Stationary(StationaryArgs),
    /// Event-driven Monte Carlo of the underlying jump-decay process
    Mc(McArgs),
    /// Upwind finite-difference solution of the master equation
    Pde(PdeArgs),
    /// Evaluate the numerical inverse of the Laplace-domain solution
    Laplace(LaplaceArgs),
    /// Cross-validation suites (series/finite-sum, Laplace, MC, PDE)
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Decay rate beta > 0
    #[arg(long)]
    beta: Option<f64>,
    /// Burst rate lambda > 0
    #[arg(long)]
    lambda: Option<f64>,
    /// Inverse mean burst size k > 0
    #[arg(long)]
    k: Option<f64>,
    /// key = value file mirroring the long flags; flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named built-in configuration: fig1-left or fig1-right
    #[arg(long)]
    preset: Option<String>,
    /// Relative series truncation tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Series term budget
    #[arg(long)]
    max_terms: Option<usize>,
    /// Output path; '-' or absent means stdout. Relative paths resolve
    /// against $KFBURST_OUT_DIR when it is set.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct GreenArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Evaluation time
    #[arg(long)]
    t: Option<f64>,
    /// Start point of the kernel (initial delta position)
    #[arg(long)]
    y: Option<f64>,
    /// x grid as start:stop:n
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated list of output times
    #[arg(long)]
    t: Option<String>,
    /// Initial density, e.g. dirac:1 | gamma:1,1 | gauss:2,0.5 |
    /// uniform:0,2 | steps:0,1,2;0.25,0.75 | table:FILE.csv
    #[arg(long)]
    phi: Option<String>,
    /// x grid as start:stop:n
    #[arg(long)]
    grid: Option<String>,
    /// Use the explicit finite-sum solution (integer alpha, gamma-type phi)
    #[arg(long)]
    closed_form: bool,
}

#[derive(Args)]
struct StationaryArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// x grid as start:stop:n
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Final time
    #[arg(long)]
    t: Option<f64>,
    /// Initial density specification
    #[arg(long)]
    phi: Option<String>,
    /// Number of paths
    #[arg(long)]
    paths: Option<usize>,
    /// RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Where to dump the sorted samples (.csv, or raw little-endian .bin)
    #[arg(long)]
    samples_out: Option<String>,
}

#[derive(Args)]
struct PdeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Final time
    #[arg(long)]
    t: Option<f64>,
    /// Initial density specification
    #[arg(long)]
    phi: Option<String>,
    /// Domain truncation (default: (alpha+40)/k)
    #[arg(long)]
    x_max: Option<f64>,
    /// Number of cells
    #[arg(long)]
    cells: Option<usize>,
    /// Time step (default: CFL 0.9 including the reaction rate)
    #[arg(long)]
    dt: Option<f64>,
    /// Extra snapshot times (comma separated) streamed as CSV blocks
    #[arg(long)]
    snapshots: Option<String>,
}

#[derive(Args)]
struct LaplaceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Evaluation time
    #[arg(long)]
    t: Option<f64>,
    /// Start point y
    #[arg(long, default_value_t = 0.0)]
    y: f64,
    /// x grid as start:stop:n
    #[arg(long)]
    grid: Option<String>,
    /// Contour nodes (even, >= 16)
    #[arg(long, default_value_t = 64)]
    nodes: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// series-vs-closed | laplace | mc | pde | all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Monte Carlo path count
    #[arg(long)]
    paths: Option<usize>,
    /// RNG seed
    #[arg(long)]
    seed: Option<u64>,
}

/// Layered key = value settings: preset first, then config file; explicit
/// flags are applied on top by the resolvers below.
struct Settings {
    map: HashMap<String, String>,
}

impl Settings {
    fn load(common: &CommonArgs) -> Result<Self, Error> {
        let mut map = HashMap::new();
        if let Some(name) = &common.preset {
            let text = match name.as_str() {
                "fig1-left" => FIG1_LEFT,
                "fig1-right" => FIG1_RIGHT,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown preset '{other}' (have fig1-left, fig1-right)"
                    )))
                }
            };
            parse_kv(text, &mut map)?;
        }
        if let Some(path) = &common.config {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::InvalidInput(format!("cannot read config {}: {e}", path.display()))
            })?;
            parse_kv(&text, &mut map)?;
        }
        Ok(Self { map })
    }

    fn str(&self, key: &str) -> Option<String> {
        self.map.get(key).cloned()
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, Error> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("config key {key}: bad number '{v}'")))
            })
            .transpose()
    }

    fn u64(&self, key: &str) -> Result<Option<u64>, Error> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<u64>().map_err(|_| {
                    Error::InvalidInput(format!("config key {key}: bad integer '{v}'"))
                })
            })
            .transpose()
    }
}

fn parse_kv(text: &str, map: &mut HashMap<String, String>) -> Result<(), Error> {
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!("config line {}: expected key = value", ln + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(())
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::InvalidInput(format!("missing required parameter --{flag}")))
}

fn model_params(common: &CommonArgs, s: &Settings) -> Result<ModelParams, Error> {
    let beta = require(common.beta.or(s.f64("beta")?), "beta")?;
    let lambda = require(common.lambda.or(s.f64("lambda")?), "lambda")?;
    let k = require(common.k.or(s.f64("k")?), "k")?;
    ModelParams::new(beta, lambda, k)
}

fn series_config(common: &CommonArgs, s: &Settings) -> Result<SeriesConfig, Error> {
    let rel_tol = common.tol.or(s.f64("tol")?).unwrap_or(1e-12);
    let max_terms = common
        .max_terms
        .or(s.u64("max_terms")?.map(|v| v as usize))
        .unwrap_or(SeriesConfig::deep().max_terms);
    SeriesConfig::new(rel_tol, max_terms, true)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "grid must be start:stop:n, got '{spec}'"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad grid start '{}'", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad grid stop '{}'", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad grid count '{}'", parts[2])))?;
    if n < 2 || !(stop > start) || start < 0.0 {
        return Err(Error::InvalidInput(
            "grid needs stop > start >= 0 and n >= 2".into(),
        ));
    }
    Ok((0..n)
        .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
        .collect())
}

fn parse_list(spec: &str) -> Result<Vec<f64>, Error> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad number '{s}' in list")))
        })
        .collect()
}

fn parse_phi(spec: &str) -> Result<InitialDensity, Error> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("phi must be kind:args, got '{spec}'")))?;
    match kind {
        "dirac" => {
            let y: f64 = rest
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad dirac location '{rest}'")))?;
            InitialDensity::dirac(y)
        }
        "gamma" => {
            let v = parse_list(rest)?;
            if v.len() != 2 {
                return Err(Error::InvalidInput("gamma needs power,rate".into()));
            }
            InitialDensity::gamma_like(v[0], v[1])
        }
        "gauss" => {
            let v = parse_list(rest)?;
            if v.len() != 2 {
                return Err(Error::InvalidInput("gauss needs power,rate".into()));
            }
            InitialDensity::gauss_like(v[0], v[1])
        }
        "uniform" => {
            let v = parse_list(rest)?;
            if v.len() != 2 {
                return Err(Error::InvalidInput("uniform needs lo,hi".into()));
            }
            InitialDensity::uniform(v[0], v[1])
        }
        "steps" => {
            let (bp, vals) = rest
                .split_once(';')
                .ok_or_else(|| Error::InvalidInput("steps needs breaks;values".into()))?;
            InitialDensity::steps(parse_list(bp)?, parse_list(vals)?)
        }
        "table" => {
            let text = fs::read_to_string(rest)
                .map_err(|e| Error::InvalidInput(format!("cannot read table '{rest}': {e}")))?;
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') || line.starts_with('x') {
                    continue;
                }
                let mut cols = line.split(',');
                let x: f64 = cols
                    .next()
                    .and_then(|c| c.trim().parse().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("bad table row '{line}'")))?;
                let y: f64 = cols
                    .next()
                    .and_then(|c| c.trim().parse().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("bad table row '{line}'")))?;
                xs.push(x);
                ys.push(y);
            }
            InitialDensity::tabulated(xs, ys)
        }
        other => Err(Error::InvalidInput(format!(
            "unknown phi kind '{other}' (dirac, gamma, gauss, uniform, steps, table)"
        ))),
    }
}

fn resolve_out(path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        return p.to_path_buf();
    }
    match std::env::var_os("KFBURST_OUT_DIR") {
        Some(dir) => Path::new(&dir).join(p),
        None => p.to_path_buf(),
    }
}

fn writer(out: &Option<String>) -> Result<Box<dyn Write>, Error> {
    match out.as_deref() {
        None | Some("-") => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(path) => {
            let resolved = resolve_out(path);
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent).map_err(|e| {
                        Error::InvalidInput(format!("cannot create {}: {e}", parent.display()))
                    })?;
                }
            }
            let f = fs::File::create(&resolved).map_err(|e| {
                Error::InvalidInput(format!("cannot write {}: {e}", resolved.display()))
            })?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

fn header(w: &mut dyn Write, cmd: &str, pairs: &[(&str, String)]) -> io::Result<()> {
    writeln!(w, "# kfburst {} {}", env!("CARGO_PKG_VERSION"), cmd)?;
    for (k, v) in pairs {
        writeln!(w, "# {k} = {v}")?;
    }
    Ok(())
}

fn model_pairs(p: &ModelParams) -> Vec<(&'static str, String)> {
    vec![
        ("beta", format!("{}", p.beta())),
        ("lambda", format!("{}", p.lambda())),
        ("k", format!("{}", p.k())),
        ("alpha", format!("{}", p.alpha())),
    ]
}

fn cmd_green(args: &GreenArgs) -> Result<(), Error> {
    let s = Settings::load(&args.common)?;
    let params = model_params(&args.common, &s)?;
    let cfg = series_config(&args.common, &s)?;
    let t = require(args.t.or(s.f64("t")?), "t")?;
    let y = args.y.or(s.f64("y")?).unwrap_or(0.0);
    let grid = parse_grid(&require(args.grid.clone().or(s.str("grid")), "grid")?)?;

    let atom_mass = green::singular_amplitude(&params, t)?;
    let atom_loc = green::atom_location(&params, t, y);
    let on_grid = atom_loc <= *grid.last().unwrap();

    let mut w = writer(&args.common.out)?;
    let mut pairs = model_pairs(&params);
    pairs.push(("t", format!("{t}")));
    pairs.push(("y", format!("{y}")));
    pairs.push(("rel_tol", format!("{:e}", cfg.rel_tol)));
    pairs.push(("max_terms", format!("{}", cfg.max_terms)));
    pairs.push(("atom_on_grid", format!("{on_grid}")));
    header(&mut w, "green", &pairs).ok();
    writeln!(w, "x,g_regular,atom_location,atom_mass").ok();
    for &x in &grid {
        let g = green::green_regular(&params, t, x, y, &cfg)?;
        writeln!(w, "{x:.12e},{g:.12e},{atom_loc:.12e},{atom_mass:.12e}").ok();
    }
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Error> {
    let s = Settings::load(&args.common)?;
    let params = model_params(&args.common, &s)?;
    let cfg = series_config(&args.common, &s)?;
    let times = parse_list(&require(args.t.clone().or(s.str("t")), "t")?)?;
    let phi_spec = require(args.phi.clone().or(s.str("phi")), "phi")?;
    let phi = parse_phi(&phi_spec)?;
    let grid = parse_grid(&require(args.grid.clone().or(s.str("grid")), "grid")?)?;

    let mut w = writer(&args.common.out)?;
    let mut pairs = model_pairs(&params);
    pairs.push(("phi", phi_spec));
    pairs.push(("rel_tol", format!("{:e}", cfg.rel_tol)));
    pairs.push(("max_terms", format!("{}", cfg.max_terms)));
    pairs.push(("closed_form", format!("{}", args.closed_form)));
    header(&mut w, "solve", &pairs).ok();

    for &t in &times {
        writeln!(w, "# t = {t}").ok();
        if args.closed_form {
            writeln!(w, "x,p_regular").ok();
            for &x in &grid {
                let v = cauchy::closed_form_solution(&params, &phi, t, x)?;
                writeln!(w, "{x:.12e},{v:.12e}").ok();
            }
        } else {
            let sol = cauchy::solve(&params, &phi, t, &grid, &cfg)?;
            let atoms = sol
                .atoms
                .iter()
                .map(|(loc, m)| format!("{loc:.12e}:{m:.12e}"))
                .collect::<Vec<_>>()
                .join(";");
            writeln!(w, "# atoms = {atoms}").ok();
            let disc = sol
                .discontinuities
                .iter()
                .map(|d| format!("{d:.12e}"))
                .collect::<Vec<_>>()
                .join(";");
            writeln!(w, "# discontinuities = {disc}").ok();
            writeln!(
                w,
                "# total_mass = {:.12e} (+- {:.3e})",
                sol.total_mass, sol.mass_tolerance
            )
            .ok();
            writeln!(w, "x,p_regular").ok();
            for (x, v) in sol.grid.iter().zip(&sol.regular_values) {
                writeln!(w, "{x:.12e},{v:.12e}").ok();
            }
        }
        writeln!(w).ok();
    }
    Ok(())
}

fn cmd_stationary(args: &StationaryArgs) -> Result<(), Error> {
    let s = Settings::load(&args.common)?;
    let params = model_params(&args.common, &s)?;
    let grid = parse_grid(
        &args
            .grid
            .clone()
            .or(s.str("grid"))
            .unwrap_or_else(|| "0:40:512".into()),
    )?;
    let mode = green::stationary_mode(&params);
    let mode_col = mode.unwrap_or(0.0);

    let mut w = writer(&args.common.out)?;
    let mut pairs = model_pairs(&params);
    pairs.push(("mode", mode.map_or("origin".to_string(), |m| format!("{m}"))));
    header(&mut w, "stationary", &pairs).ok();
    writeln!(w, "x,g_st,mode").ok();
    for &x in &grid {
        let v = green::stationary_density(&params, x);
        writeln!(w, "{x:.12e},{v:.12e},{mode_col:.12e}").ok();
    }
    Ok(())
}

fn cmd_mc(args: &McArgs) -> Result<(), Error> {
    let s = Settings::load(&args.common)?;
    let params = model_params(&args.common, &s)?;
    let t = require(args.t.or(s.f64("t")?), "t")?;
    let phi = parse_phi(&require(args.phi.clone().or(s.str("phi")), "phi")?)?;
    let paths = args
        .paths
        .or(s.u64("paths")?.map(|v| v as usize))
        .unwrap_or(100_000);
    let seed = args.seed.or(s.u64("seed")?).unwrap_or(1);

    let cfg = mc::McConfig::new(paths, t, seed, phi.clone())?;
    let emp = mc::empirical_distribution(&params, &cfg)?;

    // KS against the analytic CDF is available whenever the start is atomic
    let ks = match phi.atom() {
        Some((y0, _)) => {
            let scfg = series_config(&args.common, &s)?;
            let atom = (
                green::atom_location(&params, t, y0),
                green::singular_amplitude(&params, t)?,
            );
            Some(mc::ks_distance(
                &emp,
                |x| green::green_cdf(&params, t, x, y0, &scfg).unwrap_or(f64::NAN),
                &[atom],
            ))
        }
        None => None,
    };

    if let Some(spec) = &args.samples_out {
        let resolved = resolve_out(spec);
        if resolved.extension().is_some_and(|e| e == "bin") {
            let mut bytes = Vec::with_capacity(emp.samples.len() * 8);
            for v in &emp.samples {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent).ok();
                }
            }
            fs::write(&resolved, bytes).map_err(|e| {
                Error::InvalidInput(format!("cannot write {}: {e}", resolved.display()))
            })?;
        } else {
            let mut w = writer(&Some(spec.clone()))?;
            header(
                &mut w,
                "mc-samples",
                &[("seed", seed.to_string()), ("paths", paths.to_string())],
            )
            .ok();
            writeln!(w, "sample").ok();
            for v in &emp.samples {
                writeln!(w, "{v:.12e}").ok();
            }
        }
    }

    let summary = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "beta": params.beta(),
        "lambda": params.lambda(),
        "k": params.k(),
        "alpha": params.alpha(),
        "t_end": t,
        "seed": seed,
        "n_paths": paths,
        "mean": emp.mean,
        "variance": emp.variance,
        "mean_std_err": emp.mean_std_err,
        "atom_candidate_mass": emp.atom_candidate_mass,
        "expected_atom_mass": (-params.lambda() * t).exp(),
        "expected_mean": cauchy::mean(&params, &phi, t),
        "ks_distance": ks,
    });
    let mut w = writer(&args.common.out)?;
    writeln!(w, "{}", serde_json::to_string_pretty(&summary).unwrap()).ok();
    Ok(())
}

fn cmd_pde(args: &PdeArgs) -> Result<(), Error> {
    let s = Settings::load(&args.common)?;
    let params = model_params(&args.common, &s)?;
    let t_end = require(args.t.or(s.f64("t")?), "t")?;
    let phi = parse_phi(&require(args.phi.clone().or(s.str("phi")), "phi")?)?;
    let x_max = args
        .x_max
        .or(s.f64("x_max")?)
        .unwrap_or_else(|| pde::GridConfig::default_x_max(&params));
    let cells = args
        .cells
        .or(s.u64("cells")?.map(|v| v as usize))
        .unwrap_or(2048);

    let mut snap_times = match &args.snapshots {
        Some(list) => parse_list(list)?,
        None => Vec::new(),
    };
    snap_times.retain(|&t| t > 0.0 && t < t_end);
    snap_times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    snap_times.push(t_end);

    let mut w = writer(&args.common.out)?;
    let mut pairs = model_pairs(&params);
    pairs.push(("x_max", format!("{x_max}")));
    pairs.push(("cells", format!("{cells}")));
    pairs.push(("t_end", format!("{t_end}")));
    header(&mut w, "pde", &pairs).ok();

    // each snapshot is an independent solve from the initial data, so the
    // solver's mass precondition always sees true initial data
    for &t_snap in &snap_times {
        let grid = match args.dt.or(s.f64("dt")?) {
            Some(dt) => {
                pde::GridConfig::new(x_max, cells, pde::Spacing::Uniform, dt, t_snap, &params)?
            }
            None => pde::GridConfig::uniform_with_cfl(x_max, cells, t_snap, 0.9, &params)?,
        };
        let start = pde::project_density(&phi, &grid);
        let run = pde::solve_pde(&params, &start, &grid)?;
        writeln!(w, "# t = {t_snap}").ok();
        writeln!(
            w,
            "# mass_drift = {:.3e}, cfl = {:.3}",
            run.mass_drift, run.max_cfl
        )
        .ok();
        writeln!(w, "x,p").ok();
        for (x, v) in grid.centers().iter().zip(&run.state.values) {
            writeln!(w, "{x:.12e},{v:.12e}").ok();
        }
        writeln!(w).ok();
    }
    Ok(())
}

fn cmd_laplace(args: &LaplaceArgs) -> Result<(), Error> {
    let s = Settings::load(&args.common)?;
    let params = model_params(&args.common, &s)?;
    let t = require(args.t.or(s.f64("t")?), "t")?;
    let grid = parse_grid(&require(args.grid.clone().or(s.str("grid")), "grid")?)?;
    let img = LaplaceImage::new(params, t, args.y)?;
    let inv = InversionConfig {
        contour_nodes: args.nodes,
        ..Default::default()
    };

    let mut w = writer(&args.common.out)?;
    let mut pairs = model_pairs(&params);
    pairs.push(("t", format!("{t}")));
    pairs.push(("y", format!("{}", args.y)));
    pairs.push(("contour_nodes", format!("{}", inv.contour_nodes)));
    pairs.push(("contour_scale", format!("{}", inv.contour_scale)));
    header(&mut w, "laplace", &pairs).ok();
    writeln!(w, "x,g_regular_inverted,err_estimate").ok();
    for &x in &grid {
        let r = oracle_green_regular(&img, x, &inv)?;
        writeln!(w, "{x:.12e},{:.12e},{:.3e}", r.value, r.err_estimate).ok();
    }
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<bool, Error> {
    let s = Settings::load(&args.common)?;
    let params = model_params(&args.common, &s)?;
    let suite: Suite = args.suite.parse().map_err(Error::InvalidInput)?;
    let defaults = SuiteOptions::default();
    let opts = SuiteOptions {
        mc_paths: args
            .paths
            .or(s.u64("paths")?.map(|v| v as usize))
            .unwrap_or(defaults.mc_paths),
        seed: args.seed.or(s.u64("seed")?).unwrap_or(defaults.seed),
    };
    let report = run_suite(suite, &params, &opts)?;
    let mut w = writer(&args.common.out)?;
    writeln!(w, "{}", serde_json::to_string_pretty(&report).unwrap()).ok();
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool, Error> = match &cli.cmd {
        Cmd::Green(a) => cmd_green(a).map(|_| true),
        Cmd::Solve(a) => cmd_solve(a).map(|_| true),
        Cmd::Stationary(a) => cmd_stationary(a).map(|_| true),
        Cmd::Mc(a) => cmd_mc(a).map(|_| true),
        Cmd::Pde(a) => cmd_pde(a).map(|_| true),
        Cmd::Laplace(a) => cmd_laplace(a).map(|_| true),
        Cmd::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
