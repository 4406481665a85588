use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qmanifold::dsl::{self, Options, Report};
use qmanifold::verify::verify_examples;

#[derive(Parser)]
#[command(name = "qmanifold", version, about = "Modular classes of Q-manifolds, exactly")]
struct Cli {
    /// Truncation order for charts that do not declare one.
    #[arg(long, global = true, default_value_t = 6)]
    truncation: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a script and elaborate its definitions.
    Check { file: PathBuf },
    /// Run a script.
    Run {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the bundled example suite.
    VerifyExamples {
        #[arg(long)]
        json: bool,
    },
    /// Print a script in canonical form.
    Fmt { file: PathBuf },
}

fn read(file: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(file).map_err(|e| {
        eprintln!("{}: {e}", file.display());
        ExitCode::from(2)
    })
}

fn finish(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render());
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        truncation: cli.truncation,
        queries: true,
    };
    match cli.command {
        Command::Check { file } => {
            let src = match read(&file) {
                Ok(s) => s,
                Err(c) => return c,
            };
            let report = dsl::run(&src, &Options { queries: false, ..opts });
            match &report.error {
                Some(e) => eprintln!("{e}"),
                None => println!("ok"),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Run { file, json } => match read(&file) {
            Ok(src) => finish(&dsl::run(&src, &opts), json),
            Err(c) => c,
        },
        Command::VerifyExamples { json } => {
            let suite = verify_examples(&opts);
            if json {
                println!("{}", suite.to_json());
            } else {
                print!("{}", suite.render());
            }
            ExitCode::from(if suite.all_passed() { 0 } else { 1 })
        }
        Command::Fmt { file } => {
            let src = match read(&file) {
                Ok(s) => s,
                Err(c) => return c,
            };
            match dsl::format(&src) {
                Ok(out) => {
                    print!("{out}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("parse error at {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
