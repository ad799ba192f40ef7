//! Batch front end: `eulertop run <config.json>` and `eulertop recipes`.

mod config;
mod error;
mod recipes;
mod run;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde_json::json;

use config::ExperimentConfig;
use error::CliError;

#[derive(Parser)]
#[command(name = "eulertop", version, about = "Rigid-body and collective-spin experiments from JSON configs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config.
    Run {
        config: PathBuf,
        /// Output path prefix (default: config file name without extension).
        #[arg(long)]
        out: Option<String>,
        /// Worker threads for parallel sweeps.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the bundled recipes, or print one.
    Recipes {
        #[arg(long)]
        show: Option<String>,
    },
}

fn run(config: &Path, out: Option<String>, threads: Option<usize>) -> Result<(), CliError> {
    let started = Instant::now();
    if let Some(k) = threads {
        if k == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let text = std::fs::read_to_string(config).map_err(|e| CliError::Io(format!("{}: {e}", config.display())))?;
    let cfg = ExperimentConfig::parse(&text, config)?.resolve()?;
    let prefix = out.or_else(|| cfg.output.clone()).unwrap_or_else(|| {
        config.file_stem().map_or_else(|| "out".into(), |s| s.to_string_lossy().into_owned())
    });
    log::info!("running {:?} -> {prefix}_*", cfg.kind);
    let paths = run::execute(&cfg, &prefix)?;
    let meta = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg.to_json(),
        "outputs": paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "wall_time_s": started.elapsed().as_secs_f64(),
        "timestamp_unix": SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
    });
    let meta_path = format!("{prefix}_meta.json");
    std::fs::write(&meta_path, serde_json::to_string_pretty(&meta).expect("meta serializes") + "\n")?;
    let mut stdout = std::io::stdout().lock();
    for p in &paths {
        let _ = writeln!(stdout, "{}", p.display());
    }
    let _ = writeln!(stdout, "{meta_path}");
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, threads } => run(&config, out, threads),
        Command::Recipes { show: Some(name) } => match recipes::find(&name) {
            Some(text) => {
                let _ = write!(std::io::stdout(), "{text}");
                Ok(())
            }
            None => Err(CliError::Config(format!("no recipe named `{name}`"))),
        },
        Command::Recipes { show: None } => {
            let mut stdout = std::io::stdout().lock();
            for (name, module, summary, _) in recipes::RECIPES {
                if writeln!(stdout, "{name:<8} {module:<20} {summary}").is_err() {
                    break;
                }
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eulertop: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
