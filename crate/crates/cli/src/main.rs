//! spinsim: quantum and classical Liouville dynamics of two coupled
//! kicked spins. Each subcommand writes deterministic CSV; wall time is
//! reported on stderr; the exit status is zero only when all runtime
//! invariant checks pass.

use clap::{Args, Parser, Subcommand};
use spinsim_cli::commands;
use spinsim_cli::config::{
    parse_config_file, parse_observable, parse_preset, parse_snapshots, parse_spin, parse_window,
    ExperimentConfig, Overrides,
};

#[derive(Parser)]
#[command(name = "spinsim", version, about = "Coupled kicked-spin dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. Resolution order: built-in defaults,
/// then --preset, then --config, then explicit flags.
#[derive(Args)]
struct Common {
    /// Named parameter set: ci (s=20, l=22) or paper (s=140, l=154)
    #[arg(long)]
    preset: Option<String>,
    /// key=value config file ('#' comments)
    #[arg(long)]
    config: Option<String>,
    /// Spin quantum number s (integer or half-integer)
    #[arg(long)]
    s: Option<String>,
    /// Spin quantum number l (integer or half-integer)
    #[arg(long)]
    l: Option<String>,
    /// Precession angle per period
    #[arg(long)]
    a: Option<f64>,
    /// Spin size ratio l/s
    #[arg(long)]
    r: Option<f64>,
    /// Kick coupling strength
    #[arg(long)]
    gamma: Option<f64>,
    /// Initial polar angle of spin s, degrees
    #[arg(long)]
    theta_s: Option<f64>,
    /// Initial azimuth of spin s, degrees
    #[arg(long)]
    phi_s: Option<f64>,
    /// Initial polar angle of spin l, degrees
    #[arg(long)]
    theta_l: Option<f64>,
    /// Initial azimuth of spin l, degrees
    #[arg(long)]
    phi_l: Option<f64>,
    /// Number of kick periods
    #[arg(long)]
    steps: Option<usize>,
    /// Classical ensemble size
    #[arg(long)]
    ensemble: Option<usize>,
    /// RNG seed for the classical ensemble
    #[arg(long)]
    seed: Option<u64>,
    /// Steps at which to dump full distributions (comma-separated)
    #[arg(long)]
    snapshots: Option<String>,
    /// Marginal observable: lz, jz, or lx
    #[arg(long)]
    observable: Option<String>,
    /// Equilibrium averaging window n1:n2
    #[arg(long)]
    window: Option<String>,
    /// Output file path
    #[arg(long, default_value = "spinsim.csv")]
    out: String,
}

impl Common {
    fn resolve(&self) -> Result<(ExperimentConfig, String), String> {
        let mut cfg = match &self.preset {
            Some(p) => ExperimentConfig::preset(parse_preset(p)?),
            None => ExperimentConfig::default(),
        };
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("failed to read config {path}: {e}"))?;
            cfg.apply(&parse_config_file(&text)?);
        }
        let flags = Overrides {
            s: self.s.as_deref().map(parse_spin).transpose()?,
            l: self.l.as_deref().map(parse_spin).transpose()?,
            a: self.a,
            r: self.r,
            gamma: self.gamma,
            theta_s: self.theta_s,
            phi_s: self.phi_s,
            theta_l: self.theta_l,
            phi_l: self.phi_l,
            steps: self.steps,
            ensemble: self.ensemble,
            seed: self.seed,
            snapshots: self.snapshots.as_deref().map(parse_snapshots).transpose()?,
            observable: self
                .observable
                .as_deref()
                .map(parse_observable)
                .transpose()?,
            window: self.window.as_deref().map(parse_window).transpose()?,
        };
        cfg.apply(&flags);
        cfg.validate()?;
        Ok((cfg, self.out.clone()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Quantum marginal distributions over time
    Quantum {
        #[command(flatten)]
        common: Common,
    },
    /// Classical Liouville ensemble marginals over time
    Classical {
        #[command(flatten)]
        common: Common,
    },
    /// Joint run: entropies, sigma_qc, and aligned per-bin differences
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Largest Lyapunov exponent on a grid of initial conditions
    Lyapunov {
        #[command(flatten)]
        common: Common,
        /// Grid resolution per polar angle (grid x grid points)
        #[arg(long, default_value_t = 8)]
        grid: usize,
    },
    /// Equilibrium fluctuation scaling across system sizes
    Scaling {
        #[command(flatten)]
        common: Common,
        /// Comma-separated list of l values (s = round(l/r))
        #[arg(long, default_value = "11,22,44")]
        sizes: String,
        /// Emit exact c/sqrt(l) records instead of simulating (fit-path test hook)
        #[arg(long)]
        synthetic: Option<f64>,
    },
    /// Exact microcanonical reference distributions
    Microcanonical {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_sizes(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|p| p.trim())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| format!("invalid size: {p}")))
        .collect()
}

fn dispatch(cli: &Cli) -> Result<(), String> {
    match &cli.command {
        Command::Quantum { common } => {
            let (cfg, out) = common.resolve()?;
            commands::cmd_quantum(&cfg, &out)
        }
        Command::Classical { common } => {
            let (cfg, out) = common.resolve()?;
            commands::cmd_classical(&cfg, &out)
        }
        Command::Compare { common } => {
            let (cfg, out) = common.resolve()?;
            commands::cmd_compare(&cfg, &out)
        }
        Command::Lyapunov { common, grid } => {
            let (cfg, out) = common.resolve()?;
            commands::cmd_lyapunov(&cfg, *grid, &out)
        }
        Command::Scaling {
            common,
            sizes,
            synthetic,
        } => {
            let (cfg, out) = common.resolve()?;
            commands::cmd_scaling(&cfg, &parse_sizes(sizes)?, *synthetic, &out)
        }
        Command::Microcanonical { common } => {
            let (cfg, out) = common.resolve()?;
            commands::cmd_microcanonical(cfg.s, cfg.l, &out)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let start = std::time::Instant::now();
    let result = dispatch(&cli);
    eprintln!("wall_time_s = {:.3}", start.elapsed().as_secs_f64());
    if let Err(msg) = result {
        eprintln!("error: {msg}");
        std::process::exit(1);
    }
}
