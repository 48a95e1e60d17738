use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use dolbeault::scenario::{parse_model, render_value, Value as ScenarioValue};
use dolbeault::suite::verify_paper_suite;
use dolbeault::{execute, parse_scenario, render_report, Error, OutputFormat};

const USAGE_ERROR: u8 = 2;
const ENGINE_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dolbeault",
    version,
    about = "Dolbeault dimension tables under blow-ups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Eval {
        scenario: PathBuf,
        #[arg(long, default_value = "aligned-table")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the bundled example scenarios.
    VerifyPaper {
        /// Item number (1-7) or key, e.g. `hochschild`.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, default_value = "aligned-table")]
        format: OutputFormat,
    },
    /// Build one model table, e.g. `table projective_space n=3 k=1`.
    Table {
        model: String,
        params: Vec<String>,
        #[arg(long, default_value = "aligned-table")]
        format: OutputFormat,
    },
}

fn parse_params(pairs: &[String]) -> Result<Map<String, Value>, Error> {
    let mut map = Map::new();
    for pair in pairs {
        let (key, raw) = pair
            .split_once('=')
            .ok_or_else(|| Error::BadParameter(format!("expected key=value, got `{pair}`")))?;
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        map.insert(key.to_string(), value);
    }
    Ok(map)
}

fn write_output(text: &str, out: Option<&PathBuf>) -> Result<(), ExitCode> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            ExitCode::from(USAGE_ERROR)
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    let usage = |e: Error| {
        eprintln!("error: {e}");
        ExitCode::from(USAGE_ERROR)
    };
    match cli.command {
        Command::Eval {
            scenario,
            format,
            out,
        } => {
            let document = std::fs::read_to_string(&scenario).map_err(|e| {
                eprintln!("error: cannot read {}: {e}", scenario.display());
                ExitCode::from(USAGE_ERROR)
            })?;
            let parsed = parse_scenario(&document).map_err(usage)?;
            let report = execute(&parsed);
            write_output(&render_report(&report, format), out.as_ref())?;
            Ok(ExitCode::from(report.status.exit_code() as u8))
        }
        Command::VerifyPaper { only, format } => {
            let suite = verify_paper_suite(only.as_deref()).map_err(usage)?;
            print!("{}", suite.render(format));
            Ok(ExitCode::from(suite.status().exit_code() as u8))
        }
        Command::Table {
            model,
            params,
            format,
        } => {
            let model =
                parse_model(&model, parse_params(&params).map_err(usage)?).map_err(usage)?;
            let table = model.build().map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(ENGINE_ERROR)
            })?;
            print!("{}", render_value(&ScenarioValue::Table(table), format));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli).unwrap_or_else(|code| code)
}
