use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use wavemod::experiment::{run_with_threads, ConfigMap, ExperimentConfig, ExperimentKind, ResultTable};
use wavemod::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Wavelet and Fourier multicarrier experiments.
#[derive(Debug, Parser)]
#[command(name = "wavemod", version)]
struct Args {
    /// papr_ccdf_compare, evm_bandwidth_sweep, ber_fading, spectral_efficiency_table or modgauss_report
    experiment: String,
    /// Flat `key = value` config file
    #[arg(long)]
    config: PathBuf,
    /// Overrides `seed` from the config
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `trials` from the config
    #[arg(long)]
    trials: Option<usize>,
    /// CSV destination; defaults to `output.path` or stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(args: &Args) -> Result<ExperimentConfig, Error> {
    let kind: ExperimentKind = args.experiment.parse()?;
    let mut map = ConfigMap::load(&args.config)?;
    if let Some(s) = args.seed {
        map.set("seed", s);
    }
    if let Some(t) = args.trials {
        map.set("trials", t);
    }
    ExperimentConfig::from_map(kind, &map)
}

fn print_summary(table: &ResultTable, dest: &str) {
    let p = &table.provenance;
    eprintln!(
        "{}: {} rows -> {dest} (seed {}, config {})",
        p.experiment,
        table.rows.len(),
        p.seed,
        &p.config_hash[..12]
    );
    for (k, v) in &table.summary {
        eprintln!("  {k} = {v:.4}");
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::ConfigInvariantViolated(_) | Error::UnsupportedFamily(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("wavemod: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let result = run_with_threads(&cfg, None).and_then(|table| {
        let csv = table.to_csv_string()?;
        match args.out.clone().or_else(|| cfg.output_path.clone()) {
            Some(path) => {
                std::fs::write(&path, csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                print_summary(&table, &path.display().to_string());
            }
            None => {
                std::io::stdout().write_all(csv.as_bytes())?;
                print_summary(&table, "stdout");
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wavemod: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
