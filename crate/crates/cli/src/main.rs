mod commands;
mod input;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Failure;

#[derive(Parser)]
#[command(name = "sigmak", version, about = "Convexity certificates for general inverse sigma_k equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide (strict) stability of an equation and print its root chain.
    Certify {
        /// Equation JSON file; stdin when omitted or "-".
        input: Option<String>,
        /// Decimal digits of the printed chain.
        #[arg(long, default_value_t = 3)]
        digits: usize,
        /// Double precision chain by bisection instead of the exact certificate.
        #[arg(long, conflicts_with = "exact")]
        float: bool,
        /// Exact certificate (the default).
        #[arg(long)]
        exact: bool,
        /// Add wall-clock timings to the report.
        #[arg(long)]
        timings: bool,
    },
    /// Whether the cone of G is contained in the cone of F.
    Dominance {
        /// Equation JSON whose cone should sit inside the other.
        g: String,
        /// Equation JSON of the enclosing cone.
        f: String,
        /// Decimal digits of the printed chains.
        #[arg(long, default_value_t = 3)]
        digits: usize,
    },
    /// Locate a point in the nested cones of a stable equation.
    Membership {
        /// Equation JSON file.
        input: String,
        /// Comma separated coordinates, e.g. 5,5,5,5,5 or 1/2,3.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Evaluate in double precision with a margin.
        #[arg(long)]
        float: bool,
        /// Values at or below this count as failing in --float mode.
        #[arg(long, default_value_t = 1e-9)]
        margin: f64,
        /// Check every index subset rather than the worst one.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Sample the log-concavity ratio of the diagonal restriction.
    Alpha {
        /// Equation JSON file; stdin when omitted and --poly is absent.
        input: Option<String>,
        /// Polynomial coefficients, constant term first, instead of an equation.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Sampling range a:b.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        /// Number of sample points.
        #[arg(long, default_value_t = 512)]
        samples: usize,
        /// Write x,alpha rows to this file.
        #[arg(long)]
        csv: Option<String>,
    },
    /// Sample the deformation family P(x, y) and check its descent in y.
    Deform {
        /// Equation JSON file; stdin when omitted and --poly is absent.
        input: Option<String>,
        /// Polynomial coefficients, constant term first, instead of an equation.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Grid of y values as start:stop:step.
        #[arg(long, allow_hyphen_values = true)]
        ys: String,
        /// Right end of the x window for every member of the family.
        #[arg(long, allow_hyphen_values = true)]
        x_max: String,
        /// Sample points per member.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Write x,y,alpha rows to this file.
        #[arg(long)]
        csv: Option<String>,
    },
    /// Print the JSON of a named equation.
    Preset {
        /// monge-ampere, j-equation, hessian, nonneg, guan-zhang or dhym.
        name: String,
        /// Numeric parameters; put `--` before a phase such as -3pi/4.
        #[arg(allow_negative_numbers = true)]
        params: Vec<String>,
        /// Coefficient of sigma_(n-1) on the left for nonneg and guan-zhang.
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        top: String,
        /// Decimal digits for dhym coefficients.
        #[arg(long, default_value_t = 15)]
        precision: u32,
    },
    /// Sampled checks of the convexity of the level set.
    Convexity {
        /// Equation JSON file; stdin when omitted or "-".
        input: Option<String>,
        /// Number of random point pairs for the midpoint test.
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
    },
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Certify { input, digits, float, exact: _, timings } => {
            commands::certify(input.as_deref(), digits, float, timings)
        }
        Command::Dominance { g, f, digits } => commands::dominance(&g, &f, digits),
        Command::Membership { input, point, float, margin, exhaustive } => {
            commands::membership(&input, &point, float, margin, exhaustive)
        }
        Command::Alpha { input, poly, range, samples, csv } => {
            commands::alpha(input.as_deref(), poly.as_deref(), range.as_deref(), samples, csv.as_deref())
        }
        Command::Deform { input, poly, ys, x_max, samples, csv } => {
            commands::deform(input.as_deref(), poly.as_deref(), &ys, &x_max, samples, csv.as_deref())
        }
        Command::Preset { name, params, top, precision } => commands::preset(&name, &params, &top, precision),
        Command::Convexity { input, pairs } => commands::convexity(input.as_deref(), pairs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let _ = writeln!(io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("sigmak: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
