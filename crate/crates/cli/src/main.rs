use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use varspec_cli::compare::{compare, read_table, read_tolerances};
use varspec_cli::config::{parse_config, preset, Format, RunConfig, PRESETS};
use varspec_cli::init_threads;
use varspec_cli::run::{run, write_outputs};

/// Residual-minimizing variational spectra: run presets and compare tables.
#[derive(Parser)]
#[command(name = "varspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a config file and write `<name>.csv` and `<name>.meta.txt`.
    Run(RunArgs),
    /// Compare a result CSV with a reference CSV under a tolerance table.
    Compare(CompareArgs),
    /// List the preset names, or print one preset as a config file.
    Presets { name: Option<String> },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Extra `key=value` overrides applied after the preset or file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Markdown,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    result: PathBuf,
    #[arg(long)]
    reference: PathBuf,
    #[arg(long = "tol-table")]
    tol_table: PathBuf,
}

fn load(args: &RunArgs) -> Result<RunConfig, String> {
    let mut cfg = match (&args.preset, &args.config) {
        (Some(p), _) => preset(p).map_err(|e| e.to_string())?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, None) => unreachable!("clap requires one of them"),
    };
    for kv in &args.overrides {
        let (k, v) = kv.split_once('=').ok_or_else(|| format!("override `{kv}` is not KEY=VALUE"))?;
        cfg.set(k.trim(), v.trim()).map_err(|e| e.to_string())?;
    }
    if let Some(f) = args.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Markdown => Format::Markdown,
        };
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn cmd_run(args: RunArgs) -> ExitCode {
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}: {e}", cfg.name);
            return ExitCode::from(1);
        }
    };
    let dir = cfg.out.clone().unwrap_or(args.out);
    match write_outputs(&cfg, &out, &dir) {
        Ok(w) => {
            println!("{} ({:.2} s)", w.table.display(), out.wall_secs);
            if out.wall_secs > cfg.budget_secs as f64 {
                eprintln!("warning: {} took {:.1} s, over its {} s budget", cfg.name, out.wall_secs, cfg.budget_secs);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_compare(args: CompareArgs) -> ExitCode {
    let report = read_table(&args.result).and_then(|r| {
        let reference = read_table(&args.reference)?;
        let tols = read_tolerances(&args.tol_table)?;
        compare(&r, &reference, &tols)
    });
    match report {
        Ok(rep) => {
            println!("{rep}");
            if rep.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_presets(name: Option<String>) -> ExitCode {
    match name {
        None => {
            for p in PRESETS {
                let c = preset(p).expect("listed presets exist");
                println!("{p}\t{}", c.model.name());
            }
            ExitCode::SUCCESS
        }
        Some(n) => match preset(&n) {
            Ok(c) => {
                for (k, v) in c.to_kv() {
                    println!("{k} = {v}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Presets { name } => cmd_presets(name),
    }
}
