//! Argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "twomode",
    version,
    about = "Fixed-N two-mode boson simulator: mode entanglement, dephasing, spin squeezing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form and trace-norm negativity of a state
    Negativity(NegativityArgs),
    /// Evolve a state under dephasing; export trajectory and negativity summary
    Evolve(EvolveArgs),
    /// Squeezing report at the optimal direction triplet, optionally swept in time
    Squeeze(SqueezeArgs),
    /// No-squeezing bound sweep over times and a direction-triplet grid
    Scan(ScanArgs),
}

/// Exactly one of `--state`, `--fock`, `--coherent`.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// Load the state from a JSON file
    #[arg(long, value_name = "PATH")]
    pub state: Option<PathBuf>,

    /// Build the Fock state |K, N-K> (requires --n)
    #[arg(long, value_name = "K", requires = "n")]
    pub fock: Option<usize>,

    /// Build the coherent state |XI, PHI> (requires --n)
    #[arg(long, num_args = 2, value_names = ["XI", "PHI"], requires = "n",
          allow_negative_numbers = true)]
    pub coherent: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output path; written atomically (temp file + rename)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Artifact format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Seed for randomized inputs. All current commands are deterministic,
    /// so runs with the same configuration are byte-identical regardless.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BipartitionChoice {
    Spatial,
    Energy,
    Both,
}

#[derive(Args, Debug)]
pub struct NegativityArgs {
    #[command(flatten)]
    pub source: StateSource,

    /// Total boson number for built states
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,

    /// Which bipartition basis to evaluate in
    #[arg(long, value_enum, default_value_t = BipartitionChoice::Spatial)]
    pub bipartition: BipartitionChoice,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub source: StateSource,

    /// Total boson number for built states
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,

    /// Dephasing strength (inverse time units)
    #[arg(long, value_name = "G")]
    pub gamma: f64,

    /// Time grid START:END:STEPS with inclusive endpoints; STEPS counts
    /// grid points
    #[arg(long, value_name = "GRID", value_parser = parse_time_grid)]
    pub t: TimeGrid,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SqueezeArgs {
    #[command(flatten)]
    pub source: StateSource,

    /// Total boson number for built states
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,

    /// Dephasing strength; required together with --t
    #[arg(long, value_name = "G", requires = "t")]
    pub gamma: Option<f64>,

    /// Time grid START:END:STEPS for an evolved sweep; without it a single
    /// report at t = 0 is produced
    #[arg(long, value_name = "GRID", value_parser = parse_time_grid, requires = "gamma")]
    pub t: Option<TimeGrid>,

    /// Direction scan resolution (n3 points = R^2, readout angles = R)
    #[arg(long = "grid-res", value_name = "R", default_value_t = 16)]
    pub grid_res: usize,

    /// Gauss-Hermite node count for evolved means and variances
    #[arg(long, value_name = "Q", default_value_t = 64)]
    pub nodes: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: StateSource,

    /// Total boson number for built states
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,

    /// Dephasing strength (inverse time units)
    #[arg(long, value_name = "G")]
    pub gamma: f64,

    /// Time grid START:END:STEPS with inclusive endpoints
    #[arg(long, value_name = "GRID", value_parser = parse_time_grid)]
    pub t: TimeGrid,

    /// Triplet grid resolution (n3 points = R^2, readout angles = R)
    #[arg(long = "grid-res", value_name = "R", default_value_t = 8)]
    pub grid_res: usize,

    /// Gauss-Hermite node count for evolved means and variances
    #[arg(long, value_name = "Q", default_value_t = 64)]
    pub nodes: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

/// Inclusive time grid `start..=end` with `steps` points.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let span = self.end - self.start;
        (0..self.steps)
            .map(|i| self.start + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

pub fn parse_time_grid(raw: &str) -> Result<TimeGrid, String> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected START:END:STEPS, got '{raw}'"));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| format!("bad start '{}'", parts[0]))?;
    let end: f64 = parts[1]
        .parse()
        .map_err(|_| format!("bad end '{}'", parts[1]))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| format!("bad steps '{}'", parts[2]))?;
    if steps == 0 {
        return Err("steps must be at least 1".into());
    }
    if steps == 1 && end != start {
        return Err("a single-point grid needs START == END".into());
    }
    if steps > 1 && (end.is_nan() || end <= start) {
        return Err("END must exceed START".into());
    }
    if start < 0.0 {
        return Err("times must be non-negative".into());
    }
    Ok(TimeGrid { start, end, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn time_grid_parsing() {
        let g = parse_time_grid("0:2:5").unwrap();
        assert_eq!(g.points(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        let g = parse_time_grid("1.5:1.5:1").unwrap();
        assert_eq!(g.points(), vec![1.5]);
        assert!(parse_time_grid("2:1:5").is_err());
        assert!(parse_time_grid("0:1:0").is_err());
        assert!(parse_time_grid("-1:1:3").is_err());
        assert!(parse_time_grid("0:1").is_err());
        assert!(parse_time_grid("a:1:3").is_err());
    }

    #[test]
    fn exactly_one_state_source_is_enforced() {
        use clap::Parser;
        assert!(Cli::try_parse_from(["twomode", "negativity"]).is_err());
        assert!(Cli::try_parse_from([
            "twomode",
            "negativity",
            "--fock",
            "1",
            "--coherent",
            "0.5",
            "0",
            "--n",
            "2"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["twomode", "negativity", "--fock", "1"]).is_err());
        assert!(Cli::try_parse_from(["twomode", "negativity", "--fock", "1", "--n", "2"]).is_ok());
        assert!(Cli::try_parse_from([
            "twomode",
            "negativity",
            "--coherent",
            "0.5",
            "-0.3",
            "--n",
            "2"
        ])
        .is_ok());
    }

    #[test]
    fn squeeze_time_sweep_requires_gamma() {
        use clap::Parser;
        assert!(Cli::try_parse_from([
            "twomode", "squeeze", "--fock", "2", "--n", "2", "--t", "0:1:4"
        ])
        .is_err());
        assert!(Cli::try_parse_from([
            "twomode", "squeeze", "--fock", "2", "--n", "2", "--gamma", "1", "--t", "0:1:4"
        ])
        .is_ok());
    }
}
