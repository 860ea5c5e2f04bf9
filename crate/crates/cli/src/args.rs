use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ruin",
    version,
    about = "Ruin and maximum-surplus probabilities under FGM dependence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Survival probability with Poisson arrivals.
    SurvivalClassical {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Survival probability with Erlang(2) arrivals.
    SurvivalErlang2 {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = Variant::Minus)]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = Rule::Exact)]
        rule: Rule,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Probability of reaching level b before ruin (Poisson arrivals).
    MaxSurplus {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 20.0)]
        b: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo estimate of survival, or of reaching b when --b is given.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Arrival::Poisson)]
        arrival: Arrival,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        /// Overridden by the RUIN_SEED environment variable.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Recompute a published example and compare against its printed values.
    Reproduce {
        #[arg(value_enum)]
        example: Example,
        /// Elimination rule for example2.
        #[arg(long, value_enum, default_value_t = Rule::Collective)]
        rule: Rule,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ModelArgs {
    /// Premium rate.
    #[arg(long, default_value_t = 1.5)]
    pub c: f64,
    /// Rate of the exponential claims.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// FGM dependence parameter in [-1, 1].
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Initial surplus: a value or start:stop:step.
    #[arg(long, default_value = "0")]
    pub u: Grid,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Exact,
    Collective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Arrival {
    Poisson,
    Erlang2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Example1,
    Example2,
    Example3,
}

/// Evenly spaced surplus values, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(Grid(vec![num(v)?])),
            [a, b, h] => {
                let (start, stop, step) = (num(a)?, num(b)?, num(h)?);
                if step <= 0.0 {
                    return Err(format!("grid step must be positive, got {step}"));
                }
                if stop < start {
                    return Err(format!("grid stop {stop} is below start {start}"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                Ok(Grid((0..=count).map(|k| start + k as f64 * step).collect()))
            }
            _ => Err(format!("expected a value or start:stop:step, got `{s}`")),
        }
    }
}
