use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use levy_inspect_cli::config::SCHEMA;
use levy_inspect_cli::{load, run};

/// Transforms, tail inversion, simulation checks and risk curves for
/// inspected Lévy processes, driven by one JSON configuration.
#[derive(Debug, Parser)]
#[command(name = "levy-inspect", version)]
struct Args {
    /// Run configuration (JSON).
    #[arg(long, required_unless_present = "print_schema")]
    config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Worker threads for simulation. Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,

    #[arg(long, default_value = "warn")]
    log_level: log::LevelFilter,

    /// Print the configuration schema and exit.
    #[arg(long)]
    print_schema: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    env_logger::Builder::new().filter_level(args.log_level).init();

    if args.print_schema {
        print!("{SCHEMA}");
        return ExitCode::SUCCESS;
    }
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let path = args.config.expect("clap enforces --config");
    let result = load(&path).and_then(|loaded| run(&loaded, &args.out));
    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            if !outcome.all_pass {
                eprintln!("one or more checks failed");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
