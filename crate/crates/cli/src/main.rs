use std::process::ExitCode;

use clap::Parser;
use covnot_cli::{emit, run, Cli, Verdict};

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var("COVNOT_THREADS") {
        let threads: usize = value.parse().map_err(|_| {
            anyhow::anyhow!("COVNOT_THREADS must be a positive integer, got {value:?}")
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| {
        let report = run(&cli)?;
        emit(&cli, &report)?;
        Ok(report.verdict)
    });
    match outcome {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
