//! Command configuration, engine dispatch and table serialization for the
//! command-line frontend.
//!
//! Output is deterministic: the same configuration produces byte-identical
//! files regardless of the worker-pool size. Numbers are written with 12
//! significant digits, `.` decimal separator and no locale; the same
//! rounded values go into CSV and JSON so golden files and round trips
//! agree exactly.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::model::{Method, ModelParams};
use crate::vvp::LPolicy;
use crate::{bgrwa, dynamics, exact, experiment, vvp, Error};

/// Errors split by exit code: bad configuration (2) versus engine or I/O
/// failure while running (3).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Engine(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Engine(_) | CliError::Io(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Inclusive `start:stop:step` sweep; a bare number is a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepSpec {
    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| -> CliResult<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| config_err(format!("cannot parse '{s}' as a number in '{text}'")))
        };
        let spec = match parts.as_slice() {
            [v] => Self::single(num(v)?),
            [a, b, c] => Self {
                start: num(a)?,
                stop: num(b)?,
                step: num(c)?,
            },
            _ => {
                return Err(config_err(format!(
                    "sweep '{text}' must be a value or start:stop:step"
                )))
            }
        };
        if !(spec.step > 0.0) {
            return Err(config_err(format!("sweep step must be > 0 in '{text}'")));
        }
        if spec.start > spec.stop {
            return Err(config_err(format!("sweep start exceeds stop in '{text}'")));
        }
        Ok(spec)
    }

    /// Grid points, endpoints included within half a step.
    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let x = self.start + self.step * k as f64;
            if x > self.stop + self.step / 2.0 {
                break;
            }
            out.push(x);
            k += 1;
        }
        out
    }

    pub fn echo(&self) -> String {
        if self.start == self.stop {
            fmt_sig(self.start)
        } else {
            format!(
                "{}:{}:{}",
                fmt_sig(self.start),
                fmt_sig(self.stop),
                fmt_sig(self.step)
            )
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Mixing-offset policy as it appears on the command line: an integer for
/// a fixed offset or `best` for the oracle-assisted choice over {0, 1, 2}.
pub fn parse_l_policy(text: &str) -> CliResult<LPolicy> {
    let t = text.trim().to_ascii_lowercase();
    if t == "best" {
        return Ok(LPolicy::BestOf(vec![0, 1, 2]));
    }
    t.parse::<usize>()
        .map(LPolicy::Fixed)
        .map_err(|_| config_err(format!("--vvp-l takes an integer or 'best', got '{text}'")))
}

/// Which table a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Compare,
    Dynamics,
    FluxScan,
}

/// Fully resolved run configuration (flags merged over any config file).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub delta: f64,
    pub epsilon: f64,
    pub omega: f64,
    pub g: SweepSpec,
    pub levels: usize,
    pub methods: Vec<Method>,
    pub truncation: Option<usize>,
    pub tol: f64,
    pub tmax: f64,
    pub samples: usize,
    pub n_modes: usize,
    pub ip: f64,
    pub flux: SweepSpec,
    pub transitions: usize,
    pub vvp_l: LPolicy,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub jobs: usize,
}

impl RunConfig {
    fn validate(&self) -> CliResult<()> {
        if self.levels == 0 {
            return Err(config_err("--levels must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(config_err("--methods must name at least one engine"));
        }
        if self.samples == 0 {
            return Err(config_err("--samples must be at least 1"));
        }
        if !(self.tol > 0.0) {
            return Err(config_err("--tol must be positive"));
        }
        ModelParams::new(self.delta, self.epsilon, self.omega, self.g.start)
            .map_err(|e| config_err(e.to_string()))?;
        Ok(())
    }

    fn params_at(&self, g: f64) -> CliResult<ModelParams> {
        ModelParams::new(self.delta, self.epsilon, self.omega, g).map_err(CliError::Engine)
    }
}

/// Deterministic tabular output: `#` metadata lines, a header row, data
/// rows of 12-significant-digit numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// 12 significant digits, scientific, locale-free.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

/// Round to the emitted precision so CSV, JSON and memory agree exactly.
pub fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().expect("formatted float always re-parses")
}

impl Table {
    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row.into_iter().map(round_sig).collect());
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# {k} = {v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_sig(x)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let meta: serde_json::Map<String, serde_json::Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let doc = serde_json::json!({
            "meta": meta,
            "columns": self.columns,
            "rows": self.rows,
        });
        let text = serde_json::to_string_pretty(&doc)?;
        writeln!(w, "{text}")
    }

    pub fn write(&self, format: OutputFormat, out: Option<&PathBuf>) -> std::io::Result<()> {
        match out {
            Some(path) => {
                let file = std::fs::File::create(path)?;
                let mut buf = std::io::BufWriter::new(file);
                self.emit(format, &mut buf)
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                self.emit(format, &mut lock)
            }
        }
    }

    fn emit<W: Write>(&self, format: OutputFormat, w: &mut W) -> std::io::Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(w),
            OutputFormat::Json => self.write_json(w),
        }
    }
}

/// Run `work` on a rayon pool of the configured size (0 = library default).
fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> CliResult<T> {
    if jobs == 0 {
        return Ok(work());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| config_err(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(work))
}

fn common_meta(cfg: &RunConfig, name: &str) -> Vec<(String, String)> {
    vec![
        ("command".into(), name.into()),
        ("delta".into(), fmt_sig(cfg.delta)),
        ("epsilon".into(), fmt_sig(cfg.epsilon)),
        ("omega".into(), fmt_sig(cfg.omega)),
    ]
}

fn methods_echo(methods: &[Method]) -> String {
    methods
        .iter()
        .map(|m| m.label().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Sorted levels for one method at one sweep point.
fn levels_for(
    cfg: &RunConfig,
    method: Method,
    params: &ModelParams,
) -> crate::Result<Vec<f64>> {
    match method {
        Method::Bgrwa => bgrwa::spectrum(params, cfg.levels)?.sorted_levels(cfg.levels),
        Method::Ed => match cfg.truncation {
            Some(n) => exact::spectrum_at(params, cfg.levels, n)?.sorted_levels(cfg.levels),
            None => exact::spectrum(params, cfg.levels, cfg.tol)?.sorted_levels(cfg.levels),
        },
        Method::Vvp => vvp::vvp_spectrum(params, cfg.levels, &cfg.vvp_l)?
            .table
            .sorted_levels(cfg.levels),
    }
}

/// One row per g value, one column block of levels per method; `compare`
/// additionally emits per-level |E_method − E_ed| deviation blocks.
pub fn run_spectrum(cfg: &RunConfig) -> CliResult<Table> {
    cfg.validate()?;
    let compare = cfg.command == Command::Compare;
    let mut methods = cfg.methods.clone();
    if compare && !methods.contains(&Method::Ed) {
        methods.push(Method::Ed);
    }

    let mut columns = vec!["g".to_string()];
    for m in &methods {
        for k in 0..cfg.levels {
            columns.push(format!("{}_E{k}", m.label()));
        }
    }
    if compare {
        for m in &methods {
            if *m == Method::Ed {
                continue;
            }
            for k in 0..cfg.levels {
                columns.push(format!("{}_dev{k}", m.label()));
            }
        }
    }

    let points = cfg.g.points();
    let rows: crate::Result<Vec<Vec<f64>>> = with_pool(cfg.jobs, || {
        points
            .par_iter()
            .map(|&g| {
                let params =
                    ModelParams::new(cfg.delta, cfg.epsilon, cfg.omega, g)?;
                let mut row = vec![g];
                let mut per_method: Vec<Vec<f64>> = Vec::with_capacity(methods.len());
                for m in &methods {
                    per_method.push(levels_for(cfg, *m, &params)?);
                }
                for lv in &per_method {
                    row.extend_from_slice(lv);
                }
                if compare {
                    let ed_idx = methods.iter().position(|m| *m == Method::Ed).unwrap();
                    for (i, m) in methods.iter().enumerate() {
                        if *m == Method::Ed {
                            continue;
                        }
                        for k in 0..cfg.levels {
                            row.push((per_method[i][k] - per_method[ed_idx][k]).abs());
                        }
                    }
                }
                Ok(row)
            })
            .collect()
    })?;

    let mut table = Table {
        meta: common_meta(cfg, if compare { "compare" } else { "spectrum" }),
        columns,
        rows: Vec::new(),
    };
    table.meta.push(("g".into(), cfg.g.echo()));
    table.meta.push(("levels".into(), cfg.levels.to_string()));
    table.meta.push(("methods".into(), methods_echo(&methods)));
    table.meta.push((
        "truncation".into(),
        cfg.truncation
            .map(|n| n.to_string())
            .unwrap_or_else(|| format!("auto(tol={})", fmt_sig(cfg.tol))),
    ));
    if methods.contains(&Method::Vvp) {
        table.meta.push(("vvp_l".into(), cfg.vvp_l.to_string()));
    }
    for row in rows? {
        table.push_row(row);
    }
    Ok(table)
}

/// Time series columns t, sigma_z_<method>; completeness echoed per method.
pub fn run_dynamics(cfg: &RunConfig) -> CliResult<Table> {
    cfg.validate()?;
    let g_points = cfg.g.points();
    if g_points.len() != 1 {
        return Err(config_err(
            "dynamics runs take a single g value, not a sweep",
        ));
    }
    if cfg.methods.contains(&Method::Vvp) {
        return Err(config_err(
            "dynamics supports the bgrwa and ed propagators",
        ));
    }
    let params = cfg.params_at(g_points[0])?;
    let grid = dynamics::time_grid(cfg.tmax, cfg.samples);

    // resolve a Fock truncation both propagators are comfortable with
    let n_base = match cfg.truncation {
        Some(n) => n,
        None => exact::converge(&params, cfg.levels.max(4), cfg.tol)?.n_used,
    };

    let mut columns = vec!["t".to_string()];
    let mut series = Vec::new();
    let mut meta_extra: Vec<(String, String)> = Vec::new();
    for m in &cfg.methods {
        let ts = match m {
            Method::Ed => dynamics::evolve_ed(&params, &grid, n_base)?,
            Method::Bgrwa => {
                // grow the basis if the displaced tails do not fit yet
                let mut n = n_base;
                loop {
                    match dynamics::evolve_bgrwa(&params, &grid, cfg.n_modes, n) {
                        Err(Error::TruncationTooSmall { .. }) if n < 4096 => n *= 2,
                        other => break other,
                    }
                }?
            }
            Method::Vvp => unreachable!("rejected above"),
        };
        columns.push(format!("sigma_z_{}", m.label()));
        meta_extra.push((
            format!("completeness_{}", m.label()),
            fmt_sig(ts.completeness),
        ));
        meta_extra.push((format!("truncation_{}", m.label()), ts.truncation.to_string()));
        series.push(ts);
    }

    let mut table = Table {
        meta: common_meta(cfg, "dynamics"),
        columns,
        rows: Vec::new(),
    };
    table.meta.push(("g".into(), cfg.g.echo()));
    table.meta.push(("tmax".into(), fmt_sig(cfg.tmax)));
    table.meta.push(("samples".into(), cfg.samples.to_string()));
    table.meta.push(("n_modes".into(), cfg.n_modes.to_string()));
    table.meta.push(("methods".into(), methods_echo(&cfg.methods)));
    table.meta.extend(meta_extra);
    for (i, &tau) in grid.iter().enumerate() {
        let mut row = vec![tau];
        for ts in &series {
            row.push(ts.samples[i].1);
        }
        table.push_row(row);
    }
    Ok(table)
}

/// One row per flux point. With the ED engine a `bgrwa_dev_max` column
/// reports the largest per-point transition deviation against BGRWA.
pub fn run_flux_scan(cfg: &RunConfig) -> CliResult<Table> {
    if cfg.transitions == 0 {
        return Err(config_err("--transitions must be at least 1"));
    }
    let method = match cfg.methods.as_slice() {
        [m] => *m,
        _ => return Err(config_err("flux-scan takes exactly one --method")),
    };
    let fq = experiment::FluxQubitParams {
        g_over_2pi: cfg.g.start,
        omega_over_2pi: cfg.omega,
        delta: cfg.delta,
        i_p: cfg.ip,
        flux_ratio_grid: cfg.flux.points(),
    }
    .validated()
    .map_err(|e| config_err(e.to_string()))?;

    let scan = experiment::flux_scan(&fq, cfg.transitions, method)?;
    let reference = if method == Method::Ed {
        Some(experiment::flux_scan(&fq, cfg.transitions, Method::Bgrwa)?)
    } else {
        None
    };

    let mut columns = vec!["flux_ratio".to_string(), "epsilon_ghz".to_string()];
    for k in 1..=cfg.transitions {
        columns.push(format!("f{k}_ghz"));
    }
    if reference.is_some() {
        columns.push("bgrwa_dev_max_ghz".to_string());
    }

    let mut table = Table {
        meta: vec![
            ("command".into(), "flux-scan".into()),
            ("g_over_2pi_ghz".into(), fmt_sig(fq.g_over_2pi)),
            ("omega_over_2pi_ghz".into(), fmt_sig(fq.omega_over_2pi)),
            ("delta_ghz".into(), fmt_sig(fq.delta)),
            ("ip_na".into(), fmt_sig(fq.i_p)),
            ("flux".into(), cfg.flux.echo()),
            ("transitions".into(), cfg.transitions.to_string()),
            ("method".into(), method.label().into()),
        ],
        columns,
        rows: Vec::new(),
    };
    for (i, row) in scan.rows.iter().enumerate() {
        let mut cells = vec![row.flux_ratio, row.epsilon_ghz];
        cells.extend_from_slice(&row.transitions);
        if let Some(reference) = &reference {
            let dev = reference.rows[i]
                .transitions
                .iter()
                .zip(&row.transitions)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            cells.push(dev);
        }
        table.push_row(cells);
    }
    Ok(table)
}

/// Dispatch on the configured command.
pub fn run(cfg: &RunConfig) -> CliResult<Table> {
    match cfg.command {
        Command::Spectrum | Command::Compare => run_spectrum(cfg),
        Command::Dynamics => run_dynamics(cfg),
        Command::FluxScan => run_flux_scan(cfg),
    }
}

/// Parse a `key = value` config file; `#` starts a comment.
pub fn parse_config_file(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(config_err(format!(
                "config line {} is not 'key = value': '{raw}'",
                lineno + 1
            )));
        };
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
