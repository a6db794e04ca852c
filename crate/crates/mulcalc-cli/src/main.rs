//! `mulcalc` — multiplicative calculus for complex functions on the
//! command line: *derivatives, Cauchy-Riemann *condition checks, line and
//! double *integrals, branch-tracked complex *integrals and identity
//! verifiers.
//!
//! Exit codes: 0 success / verification passed, 1 verification failed,
//! 2 usage or input error, 3 numerical failure (zero on the curve,
//! quadrature non-convergence and the like).

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod record;

use record::Format;

#[derive(Parser)]
#[command(
    name = "mulcalc",
    version,
    about = "Multiplicative calculus for complex functions",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Parameter binding NAME=COMPLEX (repeatable), e.g. `--param c=1+1i`.
    #[arg(long = "param", value_name = "NAME=COMPLEX")]
    params: Vec<String>,
    /// Starting quadrature panels per interval.
    #[arg(long)]
    panels: Option<usize>,
    /// Gauss-Legendre order per panel.
    #[arg(long)]
    order: Option<usize>,
    /// Quadrature refinement tolerance on the log-integral.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// First-order *derivative exp(f'(z)/f(z)) at a point.
    StarDeriv {
        #[command(flatten)]
        common: CommonOpts,
        /// Function expression in z.
        #[arg(long)]
        f: String,
        /// Evaluation point, a+bi form.
        #[arg(long)]
        z: String,
    },
    /// n-th order *derivative exp([f'/f]^(n-1)(z)).
    StarDerivN {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        z: String,
        /// Derivative order (>= 1).
        #[arg(long)]
        n: u32,
    },
    /// Cauchy-Riemann *conditions at a point, Cartesian and polar.
    CrCheck {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        z: String,
    },
    /// Line *integrals of a positive field in ds, dx and dy along a curve.
    LineInt {
        #[command(flatten)]
        common: CommonOpts,
        /// Positive field over x and y, e.g. "exp(x*y)".
        #[arg(long)]
        f: String,
        /// Curve spec: inline JSON or a path to a JSON file.
        #[arg(long)]
        curve: String,
    },
    /// Double *integral of a positive field on a rectangle.
    DoubleInt {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        /// Rectangle as x0,x1,y0,y1.
        #[arg(long)]
        rect: String,
    },
    /// Branch-tracked complex *integral along a curve.
    ComplexInt {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        curve: String,
        /// Display branch indices in [-k, k].
        #[arg(long, default_value_t = 2)]
        branches: i64,
        /// Shift the starting branch of log f by 2*pi*i*k.
        #[arg(long, default_value_t = 0)]
        anchor_offset: i64,
        /// Write the tracked (t, z, log f) nodes as CSV to this path.
        #[arg(long, value_name = "PATH")]
        dump_samples: Option<String>,
    },
    /// Identity verifiers; each exits 0 on pass and 1 on fail.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Fundamental theorem: some branch of int (f*)^dz equals f(end)/f(start).
    Ftc {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        curve: String,
    },
    /// Line-integral fundamental theorem for a positive field.
    FtcLine {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        curve: String,
    },
    /// Green-type identity on a rectangle.
    Green {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Rectangle as x0,x1,y0,y1.
        #[arg(long)]
        rect: String,
    },
    /// Closed-curve collapse: oint (f*)^dz = 1.
    Closed {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        curve: String,
    },
    /// Path splitting: I*_n(C) = I*_n(C1) I*_n(C2).
    Concat {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        curve: String,
        /// Split parameter (defaults to the midpoint of the curve range).
        #[arg(long)]
        split: Option<f64>,
    },
    /// Product and division properties for two integrands.
    Product {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        curve: String,
    },
    /// Orientation reversal inverts the integral family.
    Reverse {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        curve: String,
    },
    /// Power containment: (int f^dz)^n inside int (f^n)^dz.
    Power {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        f: String,
        #[arg(long)]
        curve: String,
        /// Exponent, 0..=3.
        #[arg(long)]
        n: u32,
    },
    /// Run a built-in verification suite.
    All {
        #[command(flatten)]
        common: CommonOpts,
        /// Suite name; `paper` is the built-in worked-example corpus.
        #[arg(long, default_value = "paper")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.rendered);
            if outcome.passed == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
