mod commands;
mod config;
mod manifest;
mod output;
mod units;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::CliError;
use config::{load_config, Config, Format, Scenario};
use manifest::RunManifest;

/// Rydberg atomic quantum receiver simulator.
#[derive(Debug, Parser)]
#[command(name = "raqr", version, about)]
struct Cli {
    /// Experiment config file (TOML), layered over the built-in defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory for data files and the run manifest. Without it,
    /// data goes to standard output.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Master seed of every Monte Carlo stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, 0 = one per core.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Override any config key, e.g. `--set channel.pathloss_exponent=3.8`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Re-run the command and resolved config recorded in a manifest.
    #[arg(long, value_name = "MANIFEST", conflicts_with_all = ["config", "seed", "threads", "format", "set"])]
    replay: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenenergies versus DC field around a Rydberg state.
    StarkMap,
    /// Probe transmission spectrum for one beam scenario.
    EitSpectrum {
        #[arg(long, value_enum)]
        scenario: Option<Scenario>,
        /// Average over thermal velocity classes.
        #[arg(long)]
        doppler: bool,
    },
    /// Autler-Townes splitting and inferred field over an RF sweep.
    AtsReadout,
    /// Superheterodyne gain and noise budget against the conventional receiver.
    Sensitivity,
    /// Monte Carlo BER versus transmit power.
    SisoBer,
    /// Ergodic SIMO rate of both receivers.
    MimoRate,
    /// DOA Cramér-Rao bound versus transmit power.
    DoaCrb,
    /// ML DOA mean squared error against the CRB.
    DoaMse,
    /// Print the fully resolved configuration.
    DumpConfig,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::StarkMap => "stark-map",
            Command::EitSpectrum { .. } => "eit-spectrum",
            Command::AtsReadout => "ats-readout",
            Command::Sensitivity => "sensitivity",
            Command::SisoBer => "siso-ber",
            Command::MimoRate => "mimo-rate",
            Command::DoaCrb => "doa-crb",
            Command::DoaMse => "doa-mse",
            Command::DumpConfig => "dump-config",
        }
    }
}

fn flag_overrides(cli: &Cli) -> Vec<String> {
    let mut o = cli.set.clone();
    if let Some(s) = cli.seed {
        o.push(format!("seed={s}"));
    }
    if let Some(t) = cli.threads {
        o.push(format!("threads={t}"));
    }
    if let Some(f) = cli.format {
        o.push(format!("format=\"{}\"", if f == Format::Csv { "csv" } else { "json" }));
    }
    if let Some(Command::EitSpectrum { scenario, doppler }) = &cli.command {
        if let Some(s) = scenario {
            let s = match s {
                Scenario::I => "i",
                Scenario::Ii => "ii",
                Scenario::Iii => "iii",
            };
            o.push(format!("eit.scenario=\"{s}\""));
        }
        if *doppler {
            o.push("eit.doppler=true".into());
        }
    }
    o
}

fn resolve(cli: &Cli) -> Result<(String, Config), CliError> {
    if let Some(path) = &cli.replay {
        let m = RunManifest::read(path).map_err(CliError::Usage)?;
        if !commands::COMMANDS.contains(&m.command.as_str()) {
            return Err(CliError::Usage(format!("manifest names unknown command `{}`", m.command)));
        }
        return Ok((m.command, m.resolved_config));
    }
    let command = cli
        .command
        .as_ref()
        .ok_or_else(|| CliError::Usage("no subcommand given; see `raqr --help`".into()))?;
    let config =
        load_config(cli.config.as_deref(), &flag_overrides(cli)).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((command.name().to_string(), config))
}

fn execute(command: &str, config: &Config, out: Option<&Path>) -> Result<Vec<PathBuf>, CliError> {
    if command == "dump-config" {
        let text = config.to_toml();
        return match out {
            Some(dir) => {
                let p = dir.join("config.toml");
                std::fs::write(&p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
                Ok(vec![p])
            }
            None => {
                print!("{text}");
                Ok(Vec::new())
            }
        };
    }
    let tables = commands::run(command, config)?;
    match out {
        Some(dir) => output::write_tables(dir, &tables, config.format)
            .map_err(|e| CliError::Usage(format!("cannot write into {}: {e}", dir.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output::render_stdout(&tables, config.format).as_bytes())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Vec::new())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (command, config) = resolve(&cli)?;
    if config.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let (mut manifest, started) = RunManifest::start(&command, &config);
    let out = cli.out.as_deref();
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
        manifest
            .write(dir)
            .map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
    }
    let result = execute(&command, &config, out);
    let status = match &result {
        Ok(_) => "ok".to_string(),
        Err(e) => format!("failed: {e}"),
    };
    let paths = result.as_ref().cloned().unwrap_or_default();
    manifest.finish(started, status, paths);
    match out {
        Some(dir) => {
            manifest
                .write(dir)
                .map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
        }
        None => eprintln!(
            "raqr: {command} {} in {:.3} s (seed {})",
            manifest.status,
            manifest.wall_time_s.unwrap_or(0.0),
            manifest.seed
        ),
    }
    result.map(|_| ())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("raqr: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 1,
                CliError::Numerical(_) => 2,
            })
        }
    }
}
