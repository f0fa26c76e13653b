//! Run configuration: CLI flags, optional flat `key = value` config file,
//! and the precedence rule flags > file > defaults.
//!
//! Every flag is optional at the clap level; resolution into a validated
//! [`ResolvedRun`] happens after the file layer is merged, so the same
//! validation path serves both sources.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;

/// Everything a run needs, before resolution. All fields optional;
/// `None` means "not specified at this layer".
#[derive(Args, Clone, Debug, Default)]
pub struct RunArgs {
    /// Flat key = value config file (flags override file entries).
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Model: scaled_dot (trap on, z = η·γ, λ_ee = γ) or free_space
    /// (trap off, z = η, λ_ee = 1).
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,

    /// Impurity charge η (scaled_dot) or the bare charge z (free_space).
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,

    /// Interaction strength γ (single point).
    #[arg(long, conflicts_with = "gamma_grid", allow_hyphen_values = true)]
    pub gamma: Option<f64>,

    /// γ grid as start:stop:count:lin or start:stop:count:log.
    #[arg(long, value_name = "SPEC")]
    pub gamma_grid: Option<String>,

    /// Spatial symmetry sector: singlet (even) or triplet (odd).
    #[arg(long, value_parser = parse_state)]
    pub state: Option<StateKind>,

    /// Spin projection for the triplet: -1, 0, or 1 (default 1, i.e. ±1).
    #[arg(long, allow_hyphen_values = true)]
    pub sz: Option<i8>,

    /// Basis order Ω: all terms with n + m + p ≤ Ω.
    #[arg(long)]
    pub omega: Option<u32>,

    /// Fixed nonlinear exponent μ.
    #[arg(long, conflicts_with = "mu_scan", allow_hyphen_values = true)]
    pub mu: Option<f64>,

    /// Golden-section μ optimization over lo:hi.
    #[arg(long, value_name = "LO:HI")]
    pub mu_scan: Option<String>,

    /// Radial cutoff R for the natural-orbital grid (default: auto).
    #[arg(long = "R", value_name = "R", allow_hyphen_values = true)]
    pub r_cut: Option<f64>,

    /// Number of radial grid steps (grid has nmax+1 points including 0 and R).
    #[arg(long)]
    pub nmax: Option<usize>,

    /// Highest partial wave l included in the occupancy analysis.
    #[arg(long)]
    pub lmax: Option<u32>,

    /// Gauss-Legendre order for the cosθ projection integrals.
    #[arg(long)]
    pub quad: Option<usize>,

    /// Output path (default: stdout).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format: csv or json.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,

    /// Cache directory for content-addressed run records (no caching if unset).
    #[arg(long, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Working precision of the eigensolve: double or extended.
    #[arg(long, value_parser = parse_precision)]
    pub precision: Option<qdot2e_core::variational::Precision>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    ScaledDot,
    FreeSpace,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::ScaledDot => "scaled_dot",
            Mode::FreeSpace => "free_space",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Singlet,
    Triplet,
}

impl StateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Singlet => "singlet",
            StateKind::Triplet => "triplet",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Validation failure: maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

pub fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "scaled_dot" | "scaled-dot" => Ok(Mode::ScaledDot),
        "free_space" | "free-space" => Ok(Mode::FreeSpace),
        other => Err(format!(
            "unknown mode `{other}` (expected scaled_dot or free_space)"
        )),
    }
}

pub fn parse_state(s: &str) -> Result<StateKind, String> {
    match s {
        "singlet" => Ok(StateKind::Singlet),
        "triplet" => Ok(StateKind::Triplet),
        other => Err(format!(
            "unknown state `{other}` (expected singlet or triplet)"
        )),
    }
}

pub fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(format!("unknown format `{other}` (expected csv or json)")),
    }
}

pub fn parse_precision(s: &str) -> Result<qdot2e_core::variational::Precision, String> {
    match s {
        "double" => Ok(qdot2e_core::variational::Precision::Double),
        "extended" => Ok(qdot2e_core::variational::Precision::Extended),
        other => Err(format!(
            "unknown precision `{other}` (expected double or extended)"
        )),
    }
}

/// γ selection after merging: a single point or a grid.
#[derive(Clone, Debug, PartialEq)]
pub enum GammaSpec {
    Single(f64),
    Grid {
        start: f64,
        stop: f64,
        count: usize,
        log: bool,
    },
}

impl GammaSpec {
    /// Expand to concrete grid values, index-ordered.
    pub fn expand(&self) -> Vec<f64> {
        match *self {
            GammaSpec::Single(g) => vec![g],
            GammaSpec::Grid {
                start,
                stop,
                count,
                log,
            } => {
                if count == 1 {
                    return vec![start];
                }
                (0..count)
                    .map(|i| {
                        let f = i as f64 / (count - 1) as f64;
                        if log {
                            start * (stop / start).powf(f)
                        } else {
                            start + (stop - start) * f
                        }
                    })
                    .collect()
            }
        }
    }
}

/// μ handling after merging.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MuSpec {
    Fixed(f64),
    Scan { lo: f64, hi: f64 },
}

impl MuSpec {
    /// Canonical text form, used in cache keys.
    pub fn key_text(&self) -> String {
        match *self {
            MuSpec::Fixed(m) => format!("{m}"),
            MuSpec::Scan { lo, hi } => format!("scan:{lo}:{hi}"),
        }
    }
}

/// R handling after merging.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RSpec {
    Auto,
    Fixed(f64),
}

impl RSpec {
    pub fn key_text(&self) -> String {
        match *self {
            RSpec::Auto => "auto".into(),
            RSpec::Fixed(r) => format!("{r}"),
        }
    }
}

/// A fully validated run request.
#[derive(Clone, Debug)]
pub struct ResolvedRun {
    pub mode: Mode,
    pub eta: f64,
    pub gamma: GammaSpec,
    pub state: StateKind,
    /// 0 for the singlet; -1/0/1 for the triplet (default 1, meaning ±1).
    pub sz: i8,
    pub omega: u32,
    pub mu: MuSpec,
    pub r_cut: RSpec,
    pub nmax: usize,
    pub lmax: u32,
    pub quad: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub precision: qdot2e_core::variational::Precision,
}

/// The merged-but-unvalidated layer: defaults patched by file then flags.
#[derive(Clone, Debug, Default)]
struct Layered {
    mode: Option<Mode>,
    eta: Option<f64>,
    gamma: Option<f64>,
    gamma_grid: Option<String>,
    state: Option<StateKind>,
    sz: Option<i8>,
    omega: Option<u32>,
    mu: Option<f64>,
    mu_scan: Option<String>,
    r_cut: Option<f64>,
    r_auto: bool,
    nmax: Option<usize>,
    lmax: Option<u32>,
    quad: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
    cache_dir: Option<PathBuf>,
    precision: Option<qdot2e_core::variational::Precision>,
}

/// Parse one flat `key = value` config file into a layer.
fn parse_config_file(path: &Path) -> Result<Layered, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| bad(format!("cannot read config file {}: {e}", path.display())))?;
    let mut layer = Layered::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(bad(format!(
                "{}:{}: expected `key = value`, got `{raw}`",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        let ctx = |e: String| bad(format!("{}:{}: {e}", path.display(), lineno + 1));
        let num = |v: &str| -> Result<f64, ConfigError> {
            v.parse::<f64>()
                .map_err(|_| ctx(format!("`{v}` is not a number")))
        };
        match key {
            "mode" => layer.mode = Some(parse_mode(value).map_err(ctx)?),
            "eta" => layer.eta = Some(num(value)?),
            "gamma" => layer.gamma = Some(num(value)?),
            "gamma-grid" => layer.gamma_grid = Some(value.to_string()),
            "state" => layer.state = Some(parse_state(value).map_err(ctx)?),
            "sz" => {
                layer.sz = Some(
                    value
                        .parse::<i8>()
                        .map_err(|_| ctx(format!("`{value}` is not a small integer")))?,
                )
            }
            "omega" => {
                layer.omega = Some(
                    value
                        .parse::<u32>()
                        .map_err(|_| ctx(format!("`{value}` is not a basis order")))?,
                )
            }
            "mu" => layer.mu = Some(num(value)?),
            "mu-scan" => layer.mu_scan = Some(value.to_string()),
            "R" => {
                if value == "auto" {
                    layer.r_auto = true;
                } else {
                    layer.r_cut = Some(num(value)?);
                }
            }
            "nmax" => {
                layer.nmax = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| ctx(format!("`{value}` is not a grid size")))?,
                )
            }
            "lmax" => {
                layer.lmax = Some(
                    value
                        .parse::<u32>()
                        .map_err(|_| ctx(format!("`{value}` is not a partial-wave cap")))?,
                )
            }
            "quad" => {
                layer.quad = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| ctx(format!("`{value}` is not a quadrature order")))?,
                )
            }
            "out" => layer.out = Some(PathBuf::from(value)),
            "format" => layer.format = Some(parse_format(value).map_err(ctx)?),
            "cache-dir" => layer.cache_dir = Some(PathBuf::from(value)),
            "precision" => layer.precision = Some(parse_precision(value).map_err(ctx)?),
            other => {
                return Err(ctx(format!("unknown config key `{other}`")));
            }
        }
    }
    Ok(layer)
}

fn parse_gamma_grid(text: &str) -> Result<GammaSpec, ConfigError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 4 {
        return Err(bad(format!(
            "gamma grid `{text}` must be start:stop:count:lin or start:stop:count:log"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| bad(format!("grid start `{}` is not a number", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| bad(format!("grid stop `{}` is not a number", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| bad(format!("grid count `{}` is not an integer", parts[2])))?;
    let log = match parts[3] {
        "lin" => false,
        "log" => true,
        other => return Err(bad(format!("grid spacing `{other}` must be lin or log"))),
    };
    if count < 1 {
        return Err(bad("grid count must be >= 1"));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(bad("grid endpoints must be finite"));
    }
    if log && (start <= 0.0 || stop <= 0.0) {
        return Err(bad("log-spaced grid needs positive endpoints"));
    }
    Ok(GammaSpec::Grid {
        start,
        stop,
        count,
        log,
    })
}

fn parse_mu_scan(text: &str) -> Result<MuSpec, ConfigError> {
    let Some((lo, hi)) = text.split_once(':') else {
        return Err(bad(format!("mu scan `{text}` must be lo:hi")));
    };
    let lo: f64 = lo
        .parse()
        .map_err(|_| bad(format!("mu scan lower bound `{lo}` is not a number")))?;
    let hi: f64 = hi
        .parse()
        .map_err(|_| bad(format!("mu scan upper bound `{hi}` is not a number")))?;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(bad("mu scan needs 0 < lo < hi"));
    }
    Ok(MuSpec::Scan { lo, hi })
}

/// The default γ sweep grid: 40 log-spaced points covering the dynamic
/// range of interest, [0.05, 100].
pub fn default_sweep_grid() -> GammaSpec {
    GammaSpec::Grid {
        start: 0.05,
        stop: 100.0,
        count: 40,
        log: true,
    }
}

/// Whether the resolution is for a single-point command or a sweep;
/// decides the γ default and whether grids are legal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaPolicy {
    SinglePoint,
    Sweep,
}

/// Merge defaults ← file ← flags and validate.
pub fn resolve(args: &RunArgs, policy: GammaPolicy) -> Result<ResolvedRun, ConfigError> {
    let mut layer = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => Layered::default(),
    };

    // Flag layer wins field-by-field. The paired alternatives (gamma vs
    // gamma-grid, mu vs mu-scan) displace each other across layers: an
    // explicit flag choice overrides either file form.
    if args.mode.is_some() {
        layer.mode = args.mode;
    }
    if args.eta.is_some() {
        layer.eta = args.eta;
    }
    if args.gamma.is_some() {
        layer.gamma = args.gamma;
        layer.gamma_grid = None;
    }
    if let Some(g) = &args.gamma_grid {
        layer.gamma_grid = Some(g.clone());
        layer.gamma = None;
    }
    if args.state.is_some() {
        layer.state = args.state;
    }
    if args.sz.is_some() {
        layer.sz = args.sz;
    }
    if args.omega.is_some() {
        layer.omega = args.omega;
    }
    if args.mu.is_some() {
        layer.mu = args.mu;
        layer.mu_scan = None;
    }
    if let Some(m) = &args.mu_scan {
        layer.mu_scan = Some(m.clone());
        layer.mu = None;
    }
    if args.r_cut.is_some() {
        layer.r_cut = args.r_cut;
        layer.r_auto = false;
    }
    if args.nmax.is_some() {
        layer.nmax = args.nmax;
    }
    if args.lmax.is_some() {
        layer.lmax = args.lmax;
    }
    if args.quad.is_some() {
        layer.quad = args.quad;
    }
    if args.out.is_some() {
        layer.out = args.out.clone();
    }
    if args.format.is_some() {
        layer.format = args.format;
    }
    if args.cache_dir.is_some() {
        layer.cache_dir = args.cache_dir.clone();
    }
    if args.precision.is_some() {
        layer.precision = args.precision;
    }

    if layer.gamma.is_some() && layer.gamma_grid.is_some() {
        return Err(bad("gamma and gamma-grid are mutually exclusive"));
    }
    if layer.mu.is_some() && layer.mu_scan.is_some() {
        return Err(bad("mu and mu-scan are mutually exclusive"));
    }

    let mode = layer.mode.unwrap_or(Mode::ScaledDot);
    let state = layer.state.unwrap_or(StateKind::Singlet);

    // η doubles as the bare charge z in free-space mode (helium by default).
    let eta = layer.eta.unwrap_or(match mode {
        Mode::ScaledDot => 0.0,
        Mode::FreeSpace => -2.0,
    });
    if !eta.is_finite() {
        return Err(bad("eta must be finite"));
    }

    let gamma = match mode {
        Mode::FreeSpace => {
            if layer.gamma_grid.is_some() {
                return Err(bad(
                    "gamma grids apply to scaled_dot mode only (free_space has lambda_ee = 1)",
                ));
            }
            if layer.gamma.is_some() {
                eprintln!("note: --gamma is ignored in free_space mode (lambda_ee = 1)");
            }
            GammaSpec::Single(1.0)
        }
        Mode::ScaledDot => {
            if let Some(spec) = &layer.gamma_grid {
                if policy == GammaPolicy::SinglePoint {
                    return Err(bad(
                        "this command takes a single gamma; use the sweep command for grids",
                    ));
                }
                parse_gamma_grid(spec)?
            } else if let Some(g) = layer.gamma {
                if !(g >= 0.0) || !g.is_finite() {
                    return Err(bad("gamma must be finite and >= 0"));
                }
                GammaSpec::Single(g)
            } else {
                match policy {
                    GammaPolicy::SinglePoint => GammaSpec::Single(1.0),
                    GammaPolicy::Sweep => default_sweep_grid(),
                }
            }
        }
    };

    let sz = match state {
        StateKind::Singlet => match layer.sz {
            None | Some(0) => 0,
            Some(other) => {
                return Err(bad(format!(
                    "sz = {other} does not apply to the singlet (only 0)"
                )));
            }
        },
        StateKind::Triplet => match layer.sz {
            None => 1,
            Some(v @ (-1 | 0 | 1)) => v,
            Some(other) => return Err(bad(format!("sz must be -1, 0, or 1, got {other}"))),
        },
    };

    let omega = layer.omega.unwrap_or(8);
    let min_omega = match state {
        StateKind::Singlet => 0,
        // The odd sector needs m ≥ 1, so the basis is empty below Ω = 1.
        StateKind::Triplet => 1,
    };
    if omega < min_omega {
        return Err(bad(format!(
            "omega = {omega} leaves the {} basis empty",
            state.as_str()
        )));
    }

    let mu = if let Some(spec) = &layer.mu_scan {
        parse_mu_scan(spec)?
    } else if let Some(m) = layer.mu {
        if !(m > 0.0) || !m.is_finite() {
            return Err(bad("mu must be finite and > 0"));
        }
        MuSpec::Fixed(m)
    } else {
        match mode {
            // The canonical free-space exponent; for the trap the scale
            // depends on (η, γ), so default to the optimizer.
            Mode::FreeSpace => MuSpec::Fixed(3.0),
            Mode::ScaledDot => MuSpec::Scan { lo: 0.2, hi: 10.0 },
        }
    };

    let r_cut = if let Some(r) = layer.r_cut {
        if !(r > 0.0) || !r.is_finite() {
            return Err(bad("R must be finite and > 0"));
        }
        RSpec::Fixed(r)
    } else {
        match mode {
            // Canonical analysis radius for the free-space reference system.
            Mode::FreeSpace if !layer.r_auto => RSpec::Fixed(7.5),
            _ => RSpec::Auto,
        }
    };

    let nmax = layer.nmax.unwrap_or(300);
    if nmax < 1 {
        return Err(bad("nmax must be >= 1"));
    }
    let lmax = layer.lmax.unwrap_or(4);
    let quad = layer.quad.unwrap_or(64);
    if quad <= lmax as usize {
        return Err(bad(format!(
            "quad order {quad} cannot resolve partial waves up to l = {lmax}; need quad > lmax"
        )));
    }

    Ok(ResolvedRun {
        mode,
        eta,
        gamma,
        state,
        sz,
        omega,
        mu,
        r_cut,
        nmax,
        lmax,
        quad,
        out: layer.out,
        format: layer.format.unwrap_or(Format::Csv),
        cache_dir: layer.cache_dir,
        precision: layer
            .precision
            .unwrap_or(qdot2e_core::variational::Precision::Double),
    })
}
