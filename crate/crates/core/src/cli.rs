//! Command-line front end: parse a spec file, run one pipeline, write CSV
//! with a `#`-prefixed metadata header.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};

use crate::boxdim::{attractor_dimension, slice_dimension, DimensionReport, ScaleLadder};
use crate::config::{load_spec, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::manifold::{attractor_cloud, slice_cloud};
use crate::model::{check_hypotheses, SolenoidSpec};
use crate::symbolic::DEFAULT_WORD_BUDGET;
use crate::thermo::{
    bowen_root_with_budget, finite_m_exponent_with_budget, write_exponent_csv, write_pressure_csv, CylinderSums,
    DEFAULT_DEPTH, DEFAULT_TOL,
};
use crate::transversality::{overlap_scan, ScanOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INVALID_SPEC: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_NUMERICAL: i32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Rate bounds, hypothesis checks and the admissible μ-interval.
    Check,
    /// Pressure approximants over a sweep of s.
    Pressure,
    /// Root of the pressure approximant.
    Bowen,
    /// Finite-depth exponents d(x, m).
    Dxm,
    /// Box-counting fit of a stable slice.
    Slicedim,
    /// Box-counting fit of the attractor over a base grid.
    Attrdim,
    /// Near-overlap scan and transversality margins.
    Transversality,
    /// Point cloud of a slice (with --x) or of the attractor.
    ExportCloud,
}

impl std::fmt::Display for Command {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "solenoid-dim", version, about = "Dimension numerics for solenoidal attractors")]
pub struct RunConfig {
    pub command: Command,
    /// Spec file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Symbolic depth (word length).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Number of rungs of the dyadic scale ladder.
    #[arg(long)]
    pub scales: Option<usize>,
    /// Coarsest box size of the ladder.
    #[arg(long, allow_hyphen_values = true)]
    pub coarsest: Option<f64>,
    /// Root-finding tolerance.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Cap on enumerated words, points or pairs.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Base grid: points per axis, or a spacing below 1.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<f64>,
    /// Base point, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    /// Depths for `dxm`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<usize>>,
    /// Upper end of the pressure sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub s_max: Option<f64>,
    /// Points in the pressure sweep.
    #[arg(long)]
    pub points: Option<usize>,
    /// Gap threshold of the overlap scan.
    #[arg(long, allow_hyphen_values = true)]
    pub delta1: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Reserved; every pipeline is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Omit the timestamp line from the header.
    #[arg(long)]
    pub no_timestamp: bool,
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::InvalidArgument(_) | Error::InvalidWindow(_) | Error::InvalidInput(_) => EXIT_PARSE,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::InvalidSpec(_) | Error::Shape(_) | Error::Domain(_) => EXIT_INVALID_SPEC,
        Error::Io(_) => EXIT_IO,
        Error::Numerical(_) => EXIT_NUMERICAL,
    }
}

struct Output {
    header: Vec<(String, String)>,
    body: Vec<u8>,
    summary: String,
}

impl Output {
    fn new(cfg: &RunConfig, spec: &SolenoidSpec) -> Self {
        let header = vec![
            ("tool".into(), format!("solenoid-dim {}", env!("CARGO_PKG_VERSION"))),
            ("format".into(), FORMAT_VERSION.to_string()),
            ("command".into(), cfg.command.to_string()),
            ("spec_hash".into(), spec.hash()),
            ("seed".into(), cfg.seed.to_string()),
        ];
        Self {
            header,
            body: Vec::new(),
            summary: String::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.header.push((key.to_string(), value.to_string()));
    }

    fn render(&self, timestamp: bool) -> Vec<u8> {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k} = {v}");
        }
        if timestamp {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
            let _ = writeln!(out, "# timestamp = {secs}");
        }
        let mut bytes = out.into_bytes();
        bytes.extend_from_slice(&self.body);
        bytes
    }
}

fn base_point(cfg: &RunConfig, spec: &SolenoidSpec) -> Result<Vec<f64>> {
    let x = cfg.x.clone().unwrap_or_else(|| vec![0.0; spec.l()]);
    if x.len() != spec.l() {
        return Err(Error::InvalidArgument(format!(
            "--x has {} coordinates, the base has {}",
            x.len(),
            spec.l()
        )));
    }
    Ok(x)
}

fn grid_cells(cfg: &RunConfig, default: u64) -> Result<u64> {
    match cfg.grid {
        None => Ok(default),
        Some(g) if g >= 1.0 && g.fract() == 0.0 => Ok(g as u64),
        Some(h) if h > 0.0 && h < 1.0 => Ok((1.0 / h).round() as u64),
        Some(g) => Err(Error::InvalidArgument(format!(
            "--grid must be a positive cell count or a spacing in (0, 1), got {g}"
        ))),
    }
}

fn ladder(cfg: &RunConfig) -> Result<ScaleLadder> {
    let mut ladder = ScaleLadder::default();
    if let Some(k) = cfg.scales {
        ladder.rungs = k;
    }
    if let Some(c) = cfg.coarsest {
        ladder.coarsest = c;
    }
    if ladder.rungs < 2 || !(ladder.coarsest > 0.0) {
        return Err(Error::InvalidArgument("need at least 2 scales and a positive coarsest box".into()));
    }
    Ok(ladder)
}

fn format_x(x: &[f64]) -> String {
    x.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn dimension_output(out: &mut Output, report: &DimensionReport) -> Result<()> {
    report.write_csv(&mut out.body)?;
    out.summary = format!(
        "slope = {} (stderr {}, {} distinct points)",
        report.fit.slope, report.fit.stderr, report.distinct_points
    );
    Ok(())
}

fn execute(cfg: &RunConfig, spec: &SolenoidSpec) -> Result<Output> {
    let mut out = Output::new(cfg, spec);
    let budget = cfg.budget.unwrap_or(DEFAULT_WORD_BUDGET);
    let tol = cfg.tol.unwrap_or(DEFAULT_TOL);
    match cfg.command {
        Command::Check => {
            let b = spec.rate_bounds();
            let h = check_hypotheses(b, spec.l(), spec.p())?;
            let mut rows = vec![
                ("lambda_bar", b.lambda_bar.to_string()),
                ("lambda_low", b.lambda_low.to_string()),
                ("beta_bar", b.beta_bar.to_string()),
                ("beta_low", b.beta_low.to_string()),
                ("degree", b.degree.to_string()),
                ("lambda_tilde", b.lambda_tilde.to_string()),
                ("cone_ok", h.cone_ok.to_string()),
                ("conformal_ok", h.conformal_ok.to_string()),
                ("tstar_first_ok", h.tstar_first_ok.to_string()),
                ("tstar_first_rhs", h.tstar_first_rhs.to_string()),
                ("tstar_second_ok", h.tstar_second_ok.to_string()),
                ("tstar_second_rhs", h.tstar_second_rhs.to_string()),
                ("tstar_ok", h.tstar_ok.to_string()),
                ("estar_ok", h.estar_ok.to_string()),
                ("estar_lhs", h.estar_lhs.to_string()),
                ("estar_rhs", h.estar_rhs.to_string()),
                ("mu0", h.mu0.to_string()),
                ("mu_upper", h.mu_upper.to_string()),
            ];
            rows.push((
                "mu_interval",
                h.mu_interval.map_or("empty".into(), |(a, b)| format!("({a} {b})")),
            ));
            writeln!(out.body, "quantity,value")?;
            for (k, v) in &rows {
                writeln!(out.body, "{k},{v}")?;
            }
            let mark = |ok: bool| if ok { "pass" } else { "fail" };
            out.summary = format!(
                "T* {} E* {} mu0 = {}",
                mark(h.tstar_ok),
                mark(h.estar_ok),
                h.mu0
            );
        }
        Command::Pressure => {
            let n = cfg.depth.unwrap_or(DEFAULT_DEPTH);
            let s_max = cfg.s_max.unwrap_or(1.0);
            let points = cfg.points.unwrap_or(50);
            if points < 2 || !(s_max > 0.0) {
                return Err(Error::InvalidArgument("--points must be >= 2 and --s-max positive".into()));
            }
            out.param("depth", n);
            out.param("s_max", s_max);
            out.param("points", points);
            let sums = CylinderSums::new(spec, n, budget)?;
            let rows: Vec<_> = (0..points)
                .map(|i| sums.pressure(s_max * i as f64 / (points - 1) as f64))
                .collect();
            write_pressure_csv(&mut out.body, &rows)?;
            out.summary = format!("P_{n}(0) = {}", rows[0].value);
        }
        Command::Bowen => {
            let n = cfg.depth.unwrap_or(DEFAULT_DEPTH);
            out.param("depth", n);
            out.param("tol", tol);
            let r = bowen_root_with_budget(spec, tol, n, budget)?;
            writeln!(out.body, "d0,bracket_width,depth,iterations")?;
            writeln!(out.body, "{},{},{},{}", r.d0, r.bracket_width, r.depth, r.iterations)?;
            out.summary = format!("d0 = {}", r.d0);
        }
        Command::Dxm => {
            let x = base_point(cfg, spec)?;
            let ms = cfg.m.clone().unwrap_or_else(|| vec![4, 6, 8, 10]);
            out.param("x", format_x(&x));
            out.param("tol", tol);
            let rows = ms
                .iter()
                .map(|&m| finite_m_exponent_with_budget(spec, &x, m, tol, budget).map(|t| (m, t)))
                .collect::<Result<Vec<_>>>()?;
            write_exponent_csv(&mut out.body, &rows)?;
            out.summary = rows
                .iter()
                .map(|(m, t)| format!("d(x,{m}) = {t}"))
                .collect::<Vec<_>>()
                .join("\n");
        }
        Command::Slicedim => {
            let x = base_point(cfg, spec)?;
            let depth = cfg.depth.unwrap_or(12);
            let ladder = ladder(cfg)?;
            out.param("x", format_x(&x));
            out.param("depth", depth);
            out.param("ladder", format!("{} x {}^-k, k < {}", ladder.coarsest, ladder.ratio, ladder.rungs));
            let report = slice_dimension(spec, &x, depth, &ladder, budget)?;
            dimension_output(&mut out, &report)?;
        }
        Command::Attrdim => {
            let depth = cfg.depth.unwrap_or(10);
            let cells = grid_cells(cfg, 1024)?;
            let ladder = ladder(cfg)?;
            out.param("depth", depth);
            out.param("grid", cells);
            out.param("ladder", format!("{} x {}^-k, k < {}", ladder.coarsest, ladder.ratio, ladder.rungs));
            let report = attractor_dimension(spec, depth, cells, &ladder, budget)?;
            dimension_output(&mut out, &report)?;
        }
        Command::Transversality => {
            let opts = ScanOptions {
                depth: cfg.depth.unwrap_or(ScanOptions::default().depth),
                delta1: cfg.delta1,
                grid_cells: grid_cells(cfg, ScanOptions::default().grid_cells)?,
                budget: cfg.budget.unwrap_or(ScanOptions::default().budget),
                ..ScanOptions::default()
            };
            out.param("depth", opts.depth);
            out.param("grid", opts.grid_cells);
            let report = overlap_scan(spec, &opts)?;
            report.write_csv(&mut out.body, spec.l())?;
            out.summary = format!(
                "verdict = {} ({} candidates, c1 = {})",
                report.verdict,
                report.candidates.len(),
                report.c1_estimate.map_or("none".into(), |c| c.to_string())
            );
        }
        Command::ExportCloud => {
            let depth = cfg.depth.unwrap_or(10);
            out.param("depth", depth);
            let cloud = match &cfg.x {
                Some(_) => {
                    let x = base_point(cfg, spec)?;
                    out.param("x", format_x(&x));
                    slice_cloud(spec, &x, depth, budget)?
                }
                None => {
                    let cells = grid_cells(cfg, 256)?;
                    out.param("grid", cells);
                    attractor_cloud(spec, depth, cells, budget)?
                }
            };
            out.param("resolution", cloud.resolution);
            out.param("points", cloud.len());
            cloud.write_csv(&mut out.body, spec.p())?;
            out.summary = format!("{} points", cloud.len());
        }
    }
    Ok(out)
}

/// Runs one pipeline. The CSV goes to `--out` when given (and a one-line
/// summary to `stdout`), otherwise to `stdout`.
pub fn run<W: Write>(cfg: &RunConfig, stdout: &mut W) -> Result<()> {
    let spec = load_spec(&cfg.spec)?;
    let output = match cfg.threads {
        Some(0) => return Err(Error::InvalidArgument("--threads must be >= 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(|| execute(cfg, &spec))?,
        None => execute(cfg, &spec)?,
    };
    let bytes = output.render(!cfg.no_timestamp);
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, bytes)?;
            if !output.summary.is_empty() {
                writeln!(stdout, "{}", output.summary)?;
            }
        }
        None => stdout.write_all(&bytes)?,
    }
    Ok(())
}

/// Parses `args` (program name first), runs, reports errors on `stderr`
/// and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    match run(&cfg, &mut stdout.lock()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
