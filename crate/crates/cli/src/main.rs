//! `lipfree`: exact norms, denting classification and slice scans on finite
//! metric spaces, with reproducible JSON/CSV reports.
//!
//! Exit codes: 0 success, 1 a predicate verb answered "no", 2 bad input.

mod commands;
mod manifest;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lipfree::Rational;

#[derive(Parser, Debug)]
#[command(
    name = "lipfree",
    version,
    about = "Exact computations in Lipschitz-free spaces over finite metric spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

fn rational(text: &str) -> Result<Rational, String> {
    lipfree::rational::parse(text).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SliceKind {
    /// Dual potential from the transport solve.
    Potential,
    FMu,
    Support,
    /// Two-column family: `f(0,b) = 1 − b`, `f(1,b) = b`.
    Balanced,
    /// Two-column family: `f(0,b) = 1 − b/2`, `f(1,b) = b/2`.
    HalfSlope,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Example32,
    Example46,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the metric axioms of a space file.
    Validate { space: String },

    /// Transport norm of an element with its optimality certificate.
    Norm {
        #[arg(long)]
        space: String,
        #[arg(long)]
        element: String,
    },

    /// Closed-form `‖m_xy + m_uv‖` and `‖m_xy − m_uv‖`.
    Pairnorm {
        #[arg(long)]
        space: String,
        /// First molecule as `x:y`.
        #[arg(long)]
        first: String,
        /// Second molecule as `u:v`.
        #[arg(long)]
        second: String,
    },

    /// Denting pairs, or a single pair test when `--pair` is given.
    Denting {
        #[arg(long)]
        space: String,
        #[arg(long)]
        pair: Option<String>,
    },

    /// Daugavet test of a unit-norm element against all denting molecules.
    Daugavet {
        #[arg(long)]
        space: String,
        #[arg(long)]
        element: String,
        /// Ordered pair `u:v` reported separately; repeatable.
        #[arg(long)]
        exclude: Vec<String>,
        /// Also run the segment-radius condition over every ordered pair.
        #[arg(long)]
        condition_iii: bool,
    },

    /// Molecules occurring in some norm-preserving decomposition.
    MuSet {
        #[arg(long)]
        space: String,
        #[arg(long)]
        element: String,
        /// Examine every ordered pair instead of support and presentation points.
        #[arg(long)]
        all_pairs: bool,
    },

    /// Replays the slice-splitting search for a far molecule.
    Witness {
        #[arg(long)]
        space: String,
        #[arg(long)]
        element: String,
        /// Function file defining the slice; overrides `--slice`.
        #[arg(long)]
        function: Option<String>,
        #[arg(long, value_enum, default_value = "potential")]
        slice: SliceKind,
        #[arg(long, value_parser = rational)]
        alpha: Rational,
        #[arg(long, value_parser = rational)]
        eps: Rational,
    },

    /// Shrinks `(u, v)` to a denting pair inside the two balls.
    Descent {
        #[arg(long)]
        space: String,
        #[arg(long)]
        pair: String,
        #[arg(long, value_parser = rational)]
        r: Rational,
        #[arg(long, value_parser = rational)]
        s: Rational,
        #[arg(long, value_parser = rational)]
        delta: Rational,
    },

    /// Generates a space and prints it as JSON.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },

    /// Full report for the bridge space truncated at `--depth`.
    ReportExample32 {
        #[arg(long)]
        depth: u32,
    },

    /// Shortest in-slice molecule across a discretization family, as CSV.
    DeltaProfile {
        #[arg(long, value_enum)]
        family: Family,
        /// Comma-separated depths or step exponents.
        #[arg(long)]
        steps: String,
        /// `x:y` or `x:y:w,u:v:w,...` over stable point ids.
        #[arg(long)]
        element: String,
        #[arg(long, value_enum)]
        slice: SliceKind,
        /// Comma-separated slice parameters in (0,1).
        #[arg(long)]
        alphas: String,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum GenKind {
    Example32 {
        #[arg(long)]
        depth: u32,
    },
    Example46 {
        #[arg(long)]
        step_exponent: u32,
    },
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "shortest-path")]
        scheme: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
