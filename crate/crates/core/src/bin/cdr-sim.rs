use std::io::{self, Write};
use std::process::ExitCode;

use cdr_relay::harness::cli::{parse_cli, CliError, Command};
use cdr_relay::harness::{run_single, run_sweep, write_summary};

fn run(cmd: Command) -> anyhow::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Command::Sweep(cfg) => {
            let summary = run_sweep(&cfg)?;
            write_summary(&mut out, &summary)?;
            writeln!(out, "wrote {}", cfg.out.display())?;
        }
        Command::Single(cfg) => run_single(&cfg, &mut out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cmd = match parse_cli(std::env::args_os()) {
        Ok(c) => c,
        Err(CliError::Clap(e)) => e.exit(),
        Err(e) => {
            eprintln!("cdr-sim: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cdr-sim: {e:#}");
            ExitCode::from(1)
        }
    }
}
