//! Command-line front end for `a1-core`.

pub mod args;
pub mod commands;
pub mod corpus;
pub mod report;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use report::{CliResult, Report};

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output { code: 0, stdout: text, stderr: String::new() },
                _ => Output { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(r) => {
            let code = r.outcome.code();
            Output { code, stdout: r.render(cli.json, cli.verbose), stderr: String::new() }
        }
        Err(e) if cli.json => Output { code: 1, stdout: e.to_json(), stderr: String::new() },
        Err(e) => Output { code: 1, stdout: String::new(), stderr: format!("error: {}\n", e.message) },
    }
}

fn dispatch(c: &Command) -> CliResult<Report> {
    use commands as cmd;
    match c {
        Command::GwSimplify { field, class } => cmd::gw_simplify(&field.field, class),
        Command::GwEqual { field, left, right } => cmd::gw_equal(&field.field, left, right),
        Command::Transfer { field, to, class } => cmd::transfer_cmd(&field.field, to.as_deref(), class),
        Command::DegreeLocal { field, system, point } => cmd::degree_local(&field.field, system, point),
        Command::DegreeP1 { field, num, den, value, max_ext } => {
            cmd::degree_p1(&field.field, num, den, value.as_deref(), *max_ext)
        }
        Command::DegreeGlobal { field, system, value, max_ext, limit } => {
            cmd::degree_global(&field.field, system, value.as_deref(), *max_ext, *limit)
        }
        Command::LocalAlgebra { field, system, point } => cmd::local_algebra(&field.field, system, point),
        Command::Milnor { field, f, point } => cmd::milnor_cmd(&field.field, f, point),
        Command::NodeType { field, f, point } => cmd::node_type_cmd(&field.field, f, point),
        Command::VerifyCor45 { field, f, samples, max_ext, rng_seed, values } => {
            cmd::verify_cor45(&field.field, f, *samples, *max_ext, *rng_seed, values.as_deref())
        }
        Command::Bifurcate { field, f, g, seeds, precision, point, ext } => {
            cmd::bifurcate(&field.field, f, g, seeds, *precision, point.as_deref(), ext.as_deref())
        }
        Command::Corpus => corpus::run(),
    }
}
