//! Command-line flags and the resolved run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdiscrim_core::channels::{self, KrausChannel};

use crate::channel_file;
use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_GRID: Grid = Grid {
    start: 0.01,
    stop: 0.99,
    steps: 99,
};

#[derive(Debug, Parser)]
#[command(
    name = "qdiscrim",
    version,
    about = "Minimum-error transmission of one bit through one or two uses of a noisy qubit channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Built-in channel (identity, two_pauli, amplitude_damping, depolarizing,
    /// dephasing) or a path to a channel JSON file.
    #[arg(long, global = true, default_value = "two_pauli")]
    pub channel: String,

    /// Channel parameter.
    #[arg(long, global = true)]
    pub x: Option<f64>,

    /// Parameter grid as start:stop:points.
    #[arg(long, global = true)]
    pub grid: Option<String>,

    #[arg(long, global = true, env = "QDISCRIM_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,

    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,

    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Smaller sample counts and budgets.
    #[arg(long, global = true)]
    pub quick: bool,

    /// Add the published reference values to the table.
    #[arg(long, global = true)]
    pub paper: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Product versus entangled error at the tabulated two-Pauli parameters.
    Table,
    /// Closed-form and searched errors over a parameter grid.
    Sweep,
    /// Numerical input-pair optimization on one channel.
    Optimize,
    /// Run the property battery; exits 1 on any failure.
    Verify,
    /// Monte Carlo estimate of the error rate.
    Mc {
        #[arg(long, value_enum, default_value_t = PairKind::Optimal)]
        pair: PairKind,
    },
    /// Mutual information and capacity lower bounds.
    Info {
        /// Random input bases tried per channel use count.
        #[arg(long, default_value_t = 2)]
        budget: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairKind {
    /// Best known pair: closed form on two_pauli, searched otherwise.
    Optimal,
    /// Best repeated product pair on two_pauli.
    Product,
    /// Result of the numerical search.
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Identity,
    TwoPauli,
    AmplitudeDamping,
    Depolarizing,
    Dephasing,
}

impl Builtin {
    pub fn parse(name: &str) -> Option<Self> {
        match name.replace('-', "_").as_str() {
            "identity" => Some(Self::Identity),
            "two_pauli" => Some(Self::TwoPauli),
            "amplitude_damping" => Some(Self::AmplitudeDamping),
            "depolarizing" => Some(Self::Depolarizing),
            "dephasing" => Some(Self::Dephasing),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::TwoPauli => "two_pauli",
            Self::AmplitudeDamping => "amplitude_damping",
            Self::Depolarizing => "depolarizing",
            Self::Dephasing => "dephasing",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Builtin(Builtin),
    File(PathBuf),
}

impl ChannelSpec {
    pub fn parse(s: &str) -> Self {
        Builtin::parse(s).map_or_else(|| Self::File(PathBuf::from(s)), Self::Builtin)
    }

    pub fn label(&self) -> String {
        match self {
            Self::Builtin(b) => b.name().to_string(),
            Self::File(p) => p.display().to_string(),
        }
    }

    pub fn is_two_pauli(&self) -> bool {
        matches!(self, Self::Builtin(Builtin::TwoPauli))
    }

    pub fn takes_parameter(&self) -> bool {
        !matches!(self, Self::Builtin(Builtin::Identity) | Self::File(_))
    }

    pub fn build(&self, x: f64) -> Result<KrausChannel, CliError> {
        Ok(match self {
            Self::Builtin(Builtin::Identity) => channels::identity(2),
            Self::Builtin(Builtin::TwoPauli) => channels::two_pauli(x)?,
            Self::Builtin(Builtin::AmplitudeDamping) => channels::amplitude_damping(x)?,
            Self::Builtin(Builtin::Depolarizing) => channels::depolarizing(x)?,
            Self::Builtin(Builtin::Dephasing) => channels::dephasing(x)?,
            Self::File(p) => channel_file::load(p)?,
        })
    }
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(CliError::InvalidGrid(format!(
                "{s:?} is not start:stop:points"
            )));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::InvalidGrid(format!("{t:?} is not a number")))
        };
        let steps = n
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::InvalidGrid(format!("{n:?} is not a point count")))?;
        Self::new(num(a)?, num(b)?, steps)
    }

    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self, CliError> {
        if steps < 1 {
            return Err(CliError::InvalidGrid(
                "at least one point is required".into(),
            ));
        }
        if !(0.0 <= start && start <= stop && stop <= 1.0) {
            return Err(CliError::InvalidGrid(format!(
                "need 0 <= start <= stop <= 1, got {start}:{stop}"
            )));
        }
        if steps == 1 && start != stop {
            return Err(CliError::InvalidGrid(
                "a single point needs start == stop".into(),
            ));
        }
        Ok(Self { start, stop, steps })
    }

    pub fn single(x: f64) -> Result<Self, CliError> {
        Self::new(x, x, 1)
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.stop
                } else {
                    self.start + h * k as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Table,
    Sweep,
    Optimize,
    Verify,
    Mc,
    Info,
}

/// Flags after validation and defaulting.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub channel: ChannelSpec,
    pub x: f64,
    pub grid: Grid,
    pub seed: u64,
    pub restarts: usize,
    pub trials: u64,
    pub out: Option<PathBuf>,
    pub quick: bool,
    pub published: bool,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let c = &cli.common;
        let command = match cli.command {
            Command::Table => CommandKind::Table,
            Command::Sweep => CommandKind::Sweep,
            Command::Optimize => CommandKind::Optimize,
            Command::Verify => CommandKind::Verify,
            Command::Mc { .. } => CommandKind::Mc,
            Command::Info { .. } => CommandKind::Info,
        };
        let x = c.x.unwrap_or(0.5);
        if !(0.0..=1.0).contains(&x) {
            return Err(CliError::Usage(format!("--x {x} is outside [0, 1]")));
        }
        let grid = match (&c.grid, c.x) {
            (Some(g), _) => Grid::parse(g)?,
            (None, Some(x)) => Grid::single(x)?,
            (None, None) => DEFAULT_GRID,
        };
        if c.restarts == 0 && matches!(command, CommandKind::Optimize | CommandKind::Mc) {
            return Err(CliError::Usage("--restarts must be at least 1".into()));
        }
        if c.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if c.workers == Some(0) {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        Ok(Self {
            command,
            channel: ChannelSpec::parse(&c.channel),
            x,
            grid,
            seed: c.seed,
            restarts: c.restarts,
            trials: c.trials,
            out: c.out.clone(),
            quick: c.quick,
            published: c.paper,
            workers: c.workers,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
        RunConfig::from_cli(&cli)
    }

    #[test]
    fn defaults() {
        let c = parse(&["qdiscrim", "sweep"]).unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.restarts, 32);
        assert_eq!(c.trials, 1_000_000);
        assert_eq!(c.grid.points().len(), 99);
        assert!((c.grid.points()[98] - 0.99).abs() < 1e-15);
        assert!(c.channel.is_two_pauli());
    }

    #[test]
    fn grids() {
        assert_eq!(Grid::parse("0:1:3").unwrap().points(), vec![0.0, 0.5, 1.0]);
        assert_eq!(Grid::parse("0.9:0.9:1").unwrap().points(), vec![0.9]);
        for bad in ["0:1:0", "0.5:0.2:3", "0:2:3", "a:1:2", "0:1", "0.1:0.2:1"] {
            assert_eq!(Grid::parse(bad).unwrap_err().exit_code(), 2, "{bad}");
        }
    }

    #[test]
    fn flags_and_channels() {
        let c = parse(&[
            "qdiscrim",
            "optimize",
            "--channel",
            "amplitude-damping",
            "--x",
            "0.6",
        ])
        .unwrap();
        assert_eq!(c.channel, ChannelSpec::Builtin(Builtin::AmplitudeDamping));
        assert_eq!(c.grid.points(), vec![0.6]);
        let c = parse(&["qdiscrim", "verify", "--channel", "my.json", "--seed", "7"]).unwrap();
        assert_eq!(c.channel, ChannelSpec::File("my.json".into()));
        assert_eq!(c.seed, 7);
        assert!(parse(&["qdiscrim", "mc", "--x", "1.5"]).is_err());
        assert!(parse(&["qdiscrim", "mc", "--trials", "0"]).is_err());
    }
}
