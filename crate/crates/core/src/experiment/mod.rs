//! Declarative experiments: config parsing, the five study runners and CSV output.

mod config;
mod runners;
mod table;

pub use config::{
    BerParams, ChannelParams, ChannelProfile, ConfigMap, EvmParams, ExperimentConfig, ExperimentKind,
    ModGaussParams, ModemParams, PaprParams, PulseLayout, Real, SeParams, SystemKind,
};
pub use runners::{
    build_channel, dyadic_label, run_ber_fading, run_evm_bandwidth_sweep, run_modgauss_report,
    run_papr_ccdf_compare, run_spectral_efficiency_table, truncated_srrc_spectrum, VERSION,
};
pub use table::{Cell, Provenance, ResultTable};

use crate::error::{Error, Result};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "WAVEMOD_THREADS";

/// Dispatches to the runner for `cfg.experiment`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    match cfg.experiment {
        ExperimentKind::PaprCcdfCompare => run_papr_ccdf_compare(cfg),
        ExperimentKind::EvmBandwidthSweep => run_evm_bandwidth_sweep(cfg),
        ExperimentKind::BerFading => run_ber_fading(cfg),
        ExperimentKind::SpectralEfficiencyTable => run_spectral_efficiency_table(cfg),
        ExperimentKind::ModGaussReport => run_modgauss_report(cfg),
    }
}

/// Runs the experiment on a pool of `threads` workers, or of `WAVEMOD_THREADS` when
/// `threads` is `None` and the variable is set.
pub fn run_with_threads(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<ResultTable> {
    let threads = match threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::Config(format!("{THREADS_ENV}={v} is not a positive integer")))?,
            ),
            Err(_) => None,
        },
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}
