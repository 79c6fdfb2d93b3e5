//! `gof`: exact and asymptotic goodness-of-fit tests from the command line.

mod commands;
mod grid;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gof_core::GofError;

use commands::{
    cmd_cdf, cmd_critval, cmd_figure1, cmd_power, cmd_table1, cmd_test, cmd_type1, CdfArgs, CritvalArgs, Figure1Args,
    PowerArgs, Table1Args, TestArgs, Type1Args,
};

const EXIT_REJECT: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_CAPABILITY: u8 = 65;

#[derive(Parser, Debug)]
#[command(name = "gof", version, about = "Goodness-of-fit tests with exact finite-sample null distributions")]
struct Cli {
    /// Decimal places of numbers in CSV and scalar output
    #[arg(long, global = true, default_value_t = 6)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a sample against a fully specified distribution (JSON report)
    Test(TestArgs),
    /// Critical values for one statistic over several sample sizes
    Critval(CritvalArgs),
    /// Critical values of WnStar, Smirnov and MSplus over the standard sample sizes
    Table1(Table1Args),
    /// Null distribution function at a point or over a grid
    Cdf(CdfArgs),
    /// Power curves of the N, S and MS tests against the kinked alternative
    Power(PowerArgs),
    /// Simulated size of a test at its nominal level
    Type1(Type1Args),
    /// Exact and limiting distribution of sqrt(n) W*_n over a grid
    Figure1(Figure1Args),
}

fn exit_code(err: &GofError) -> u8 {
    match err {
        GofError::Capability(_) => EXIT_CAPABILITY,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let precision = cli.precision;
    let result = match &cli.command {
        Command::Test(args) => cmd_test(args).map(|outcome| {
            println!("{}", outcome.json);
            if args.exitcode && outcome.reject {
                ExitCode::from(EXIT_REJECT)
            } else {
                ExitCode::SUCCESS
            }
        }),
        Command::Critval(args) => cmd_critval(args, precision).map(print_ok),
        Command::Table1(args) => cmd_table1(args, precision).map(print_ok),
        Command::Cdf(args) => cmd_cdf(args, precision).map(print_ok),
        Command::Power(args) => cmd_power(args, precision).map(print_ok),
        Command::Type1(args) => cmd_type1(args, precision).map(print_ok),
        Command::Figure1(args) => cmd_figure1(args, precision).map(print_ok),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("gof: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn print_ok(text: String) -> ExitCode {
    print!("{text}");
    ExitCode::SUCCESS
}
