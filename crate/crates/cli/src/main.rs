use std::io::Read;
use std::process::ExitCode;

use blockpic_cli::{parse_input, replay, replay_text, run, RunOptions, EXIT_CHECK_FAILED};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Structured,
}

/// Picard groups of blocks with abelian defect groups.
#[derive(Parser, Debug)]
#[command(name = "blockpic", version)]
struct Args {
    /// Job file; stdin when omitted.
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Replay the bundled catalog and compare report digests.
    #[arg(long)]
    check: bool,
    /// Enable brute-force cross-checks.
    #[arg(long)]
    oracle: bool,
    /// Enumeration bound override.
    #[arg(long)]
    bound: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.check {
        let lines = replay();
        print!("{}", replay_text(&lines));
        return if lines.iter().all(|l| l.matches) {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(EXIT_CHECK_FAILED as u8)
        };
    }
    let text = match &args.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s).map_err(|e| e.to_string())
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let jobs = match parse_input(&text) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let opts = RunOptions {
        oracle: args.oracle,
        bound: args.bound,
    };
    let mut code = 0;
    for (k, job) in jobs.iter().enumerate() {
        match run(job, opts) {
            Ok(report) => {
                match args.format {
                    Format::Text => {
                        if k > 0 {
                            println!();
                        }
                        print!("{}", report.to_text());
                    }
                    Format::Structured => println!("{}", report.to_json()),
                }
                if !report.all_checks_pass() {
                    code = code.max(EXIT_CHECK_FAILED);
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    ExitCode::from(code as u8)
}
