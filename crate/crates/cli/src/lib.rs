//! Command-line front end: shipped cases, configuration, solution and
//! reference files, scheme comparisons and dissipation curves.

pub mod cases;
pub mod compare;
pub mod config;
pub mod curves;
mod error;
pub mod output;
pub mod run;

use std::ffi::OsString;

use clap::Parser;

pub use error::CliError;

use crate::cases::{find_case, Model};
use crate::compare::{compare, default_schemes, emit_comparison_csv, CompareConfig, Reference};
use crate::config::{check_cells, check_cfl, parse_scheme, resolve_t_end, Cli, Command, RunConfig};
use crate::output::SolutionTable;

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve(args) => {
            let config = RunConfig::resolve(&args)?;
            let summary = run::solve(&config)?;
            println!(
                "{} {} K={}: {} steps, total entropy {:.6e}, dissipated {:.6e} -> {}",
                config.case.name,
                config.spec.label(),
                config.cells,
                summary.steps,
                summary.total_entropy,
                summary.entropy_dissipated,
                config.out.display()
            );
        }
        Command::Reference(args) => {
            let case = find_case(&args.case)?;
            let t_end = resolve_t_end(&case, args.tend)?;
            run::make_reference(&case, args.cells, args.cfl, t_end, &args.out)?;
            println!("{} reference K={} -> {}", case.name, args.cells, args.out.display());
        }
        Command::Compare(args) => {
            let case = find_case(&args.case)?;
            let specs = if args.schemes.is_empty() {
                default_schemes(&case)
            } else {
                args.schemes
                    .iter()
                    .map(|s| parse_scheme(s))
                    .collect::<Result<_, _>>()?
            };
            let reference = match (&args.reference, case.model) {
                (Some(path), _) => Reference::Table(SolutionTable::read(path)?),
                (None, Model::Burgers) => Reference::Exact,
                (None, Model::Mhd { .. }) => {
                    return Err(CliError::Usage(format!(
                        "case {} needs --reference (see `es-riemann reference`)",
                        case.name
                    )))
                }
            };
            let config = CompareConfig {
                t_end: resolve_t_end(&case, args.tend)?,
                case,
                cells: check_cells(args.cells)?,
                cfl: check_cfl(args.cfl)?,
                specs,
            };
            let report = compare(&config, &reference)?;
            emit_comparison_csv(&report, &args.out)?;
            for s in &report.schemes {
                let summary: Vec<String> = s
                    .distances
                    .iter()
                    .map(|d| format!("{} {:.4e}", d.variable, d.l1))
                    .collect();
                println!(
                    "{:<18} L1: {}  dissipated {:.4e}  ({:.2?})",
                    s.label,
                    summary.join(", "),
                    s.entropy_dissipated,
                    s.runtime
                );
            }
        }
        Command::Curves(args) => {
            curves::emit_dissipation_curves(
                args.lambda_l,
                args.lambda_r,
                args.omega,
                args.dt_over_dx,
                args.samples,
                &args.out,
            )?;
            println!("{} samples -> {}", args.samples, args.out.display());
        }
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
