#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod doc;
mod error;
mod instance;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start {} worker threads: {e}", cli.threads.unwrap_or(0));
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    match pool.install(|| commands::run(&cli.command)) {
        Ok(output) => {
            let doc = commands::finish(output, start.elapsed().as_secs_f64(), !cli.no_timing);
            let mut out = std::io::stdout().lock();
            if out.write_all(doc.to_json().as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            eprint!("{}", commands::error_doc(&e).to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
