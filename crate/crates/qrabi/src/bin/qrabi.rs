//! Command-line frontend: parse parameters, dispatch engines, emit CSV or
//! JSON tables.
//!
//! Exit codes: 0 success, 2 bad configuration, 3 engine error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qrabi::cli::{
    self, CliError, CliResult, Command, OutputFormat, RunConfig, SweepSpec,
};
use qrabi::model::Method;

#[derive(Parser)]
#[command(
    name = "qrabi",
    version,
    about = "Spectra and dynamics of the biased qubit-oscillator system"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Energy levels over a coupling sweep, one column block per engine
    Spectrum(CommonArgs),
    /// Spectrum plus per-level |E - E_ed| deviation columns
    Compare(CommonArgs),
    /// Time evolution of sigma_z from the up-vacuum state
    Dynamics(CommonArgs),
    /// Flux-qubit transition-frequency scan in GHz
    FluxScan(CommonArgs),
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Tunneling amplitude (GHz for flux-scan)
    #[arg(long)]
    delta: Option<f64>,
    /// Static bias
    #[arg(long)]
    epsilon: Option<f64>,
    /// Oscillator frequency (GHz for flux-scan)
    #[arg(long)]
    omega: Option<f64>,
    /// Coupling value or sweep start:stop:step (GHz for flux-scan)
    #[arg(long)]
    g: Option<String>,
    /// Number of levels per engine
    #[arg(long)]
    levels: Option<usize>,
    /// Comma-separated engines: bgrwa,ed,vvp
    #[arg(long)]
    methods: Option<String>,
    /// Single engine (flux-scan)
    #[arg(long)]
    method: Option<String>,
    /// Fixed Fock truncation for the exact engine
    #[arg(long)]
    truncation: Option<usize>,
    /// Convergence tolerance for the automatic truncation
    #[arg(long)]
    tol: Option<f64>,
    /// Dynamics time span in units of 1/omega
    #[arg(long)]
    tmax: Option<f64>,
    /// Dynamics sample count
    #[arg(long)]
    samples: Option<usize>,
    /// Number of closed-form level pairs kept in the propagator
    #[arg(long = "n-modes")]
    n_modes: Option<usize>,
    /// Persistent current in nA (flux-scan)
    #[arg(long)]
    ip: Option<f64>,
    /// Flux ratio value or sweep start:stop:step (flux-scan)
    #[arg(long)]
    flux: Option<String>,
    /// Number of transition lines (flux-scan)
    #[arg(long)]
    transitions: Option<usize>,
    /// Van Vleck mixing offset: an integer or 'best'
    #[arg(long = "vvp-l")]
    vvp_l: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// Worker pool size (0 = library default)
    #[arg(long)]
    jobs: Option<usize>,
    /// key = value file; explicit flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Flag values merged over config-file values merged over defaults.
struct Resolver {
    file: Vec<(String, String)>,
}

impl Resolver {
    fn load(path: Option<&PathBuf>) -> CliResult<Self> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Config(format!("cannot read config {}: {e}", p.display()))
                })?;
                cli::parse_config_file(&text)?
            }
            None => Vec::new(),
        };
        Ok(Self { file })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.file
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn get<T, E: std::fmt::Display>(
        &self,
        flag: Option<T>,
        key: &str,
        parse: impl Fn(&str) -> Result<T, E>,
        default: Option<T>,
    ) -> CliResult<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(raw) = self.raw(key) {
            return parse(raw)
                .map_err(|e| CliError::Config(format!("config key '{key}': {e}")));
        }
        default.ok_or_else(|| CliError::Config(format!("missing required --{key}")))
    }
}

fn parse_methods(text: &str) -> Result<Vec<Method>, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let m: Method = part.parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err("at least one method required".into());
    }
    Ok(out)
}

fn build_config(command: Command, args: CommonArgs) -> CliResult<RunConfig> {
    let r = Resolver::load(args.config.as_ref())?;
    let flux_scan = command == Command::FluxScan;
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| e.to_string());
    let int = |s: &str| s.trim().parse::<usize>().map_err(|e| e.to_string());

    let g_default = if flux_scan { Some("0.82".into()) } else { None };
    let g_text: String = r.get(args.g, "g", |s| Ok::<_, String>(s.to_string()), g_default)?;

    let methods = if flux_scan {
        let single = r.get(
            args.method,
            "method",
            |s| Ok::<_, String>(s.to_string()),
            Some("bgrwa".into()),
        )?;
        vec![single
            .parse::<Method>()
            .map_err(CliError::Config)?]
    } else {
        r.get(
            args.methods.map(|m| parse_methods(&m)).transpose().map_err(CliError::Config)?,
            "methods",
            parse_methods,
            Some(vec![Method::Bgrwa, Method::Ed]),
        )?
    };

    let format_text = r.get(
        args.format,
        "format",
        |s| Ok::<_, String>(s.to_string()),
        Some("csv".into()),
    )?;
    let vvp_l_text = r.get(
        args.vvp_l,
        "vvp-l",
        |s| Ok::<_, String>(s.to_string()),
        Some("best".into()),
    )?;

    Ok(RunConfig {
        command,
        delta: r.get(args.delta, "delta", num, Some(if flux_scan { 4.25 } else { 1.0 }))?,
        epsilon: r.get(args.epsilon, "epsilon", num, Some(0.0))?,
        omega: r.get(args.omega, "omega", num, Some(if flux_scan { 8.13 } else { 1.0 }))?,
        g: SweepSpec::parse(&g_text)?,
        levels: r.get(args.levels, "levels", int, Some(8))?,
        methods,
        truncation: match args.truncation {
            Some(n) => Some(n),
            None => r.raw("truncation").map(int).transpose().map_err(CliError::Config)?,
        },
        tol: r.get(args.tol, "tol", num, Some(1e-8))?,
        tmax: r.get(args.tmax, "tmax", num, Some(50.0))?,
        samples: r.get(args.samples, "samples", int, Some(1000))?,
        n_modes: r.get(args.n_modes, "n-modes", int, Some(16))?,
        ip: r.get(args.ip, "ip", num, Some(510.0))?,
        flux: SweepSpec::parse(&r.get(
            args.flux,
            "flux",
            |s| Ok::<_, String>(s.to_string()),
            Some("0.496:0.504:0.0002".into()),
        )?)?,
        transitions: r.get(args.transitions, "transitions", int, Some(3))?,
        vvp_l: cli::parse_l_policy(&vvp_l_text)?,
        out: args.out.or_else(|| r.raw("out").map(PathBuf::from)),
        format: format_text.parse::<OutputFormat>().map_err(CliError::Config)?,
        jobs: r.get(args.jobs, "jobs", int, Some(0))?,
    })
}

fn execute(cli: Cli) -> CliResult<()> {
    let (command, args) = match cli.command {
        Cmd::Spectrum(a) => (Command::Spectrum, a),
        Cmd::Compare(a) => (Command::Compare, a),
        Cmd::Dynamics(a) => (Command::Dynamics, a),
        Cmd::FluxScan(a) => (Command::FluxScan, a),
    };
    let cfg = build_config(command, args)?;
    let table = cli::run(&cfg)?;
    table.write(cfg.format, cfg.out.as_ref())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
