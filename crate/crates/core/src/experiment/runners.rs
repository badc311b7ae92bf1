use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::config::{ChannelProfile, ExperimentConfig, PulseLayout};
use super::table::{Cell, Provenance, ResultTable};
use crate::channel::{
    apply_multipath, awgn_with_power, brickwall_receive_filter, equalize, AwgnSpec, MultipathSpec,
    SnrReference,
};
use crate::error::{Error, Result};
use crate::fft::{bin_of, dft};
use crate::metrics::{
    evm, occupied_bandwidth, papr_at_ccdf, papr_samples, pulse_set_psd, spectral_efficiency,
    BerCounter, CcdfCurve, EvmInput, PsdEstimate, PsdMethod,
};
use crate::modem::{
    demap_symbols, map_bits, ofdm_demodulate, ofdm_modulate, rc_pulse, raised_cosine, srrc_pulse,
    ConstellationSpec, OfdmConfig,
};
use crate::rng::{rng_from_seed, stream_seed, trial_seed};
use crate::waveletdesign::{
    cascade, dyadic_pulse_set, dyadic_translates, mod_gauss_spectrum, mod_gauss_value, sidelobe_level,
    FrequencyGrid, ModifiedGaussianParams, SampledWaveform, SpectrumSamples,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const BIT_STREAM: u64 = 0;
// z for a two-sided 95% interval
const CI_Z: f64 = 1.959_963_984_540_054;
// relative SE difference below which two systems share a rank
const RANK_TIE: f64 = 1e-9;

fn provenance(cfg: &ExperimentConfig) -> Provenance {
    Provenance {
        experiment: cfg.experiment.to_string(),
        config_hash: cfg.config_hash(),
        seed: cfg.seed,
        version: VERSION.to_string(),
    }
}

fn random_symbols(seed: u64, n: usize, c: &ConstellationSpec) -> Result<(Vec<u8>, Vec<Complex64>)> {
    let mut rng = rng_from_seed(seed);
    let bits: Vec<u8> = (0..n * c.bits_per_symbol()).map(|_| rng.random_range(0..2u8)).collect();
    let symbols = map_bits(&bits, c)?;
    Ok((bits, symbols))
}

fn system_configs(cfg: &ExperimentConfig) -> Result<Vec<(&'static str, OfdmConfig)>> {
    cfg.modem
        .systems
        .iter()
        .map(|&s| Ok((s.name(), cfg.modem.system_config(s)?)))
        .collect()
}

/// One CCDF per configured system over shared thresholds. Every system sees the
/// same random symbols.
pub fn run_papr_ccdf_compare(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = ResultTable::new(
        &["system", "threshold_db", "exceed_count", "n_trials", "prob"],
        provenance(cfg),
    );
    let constellation = cfg.modem.constellation_spec();
    for (name, sys) in system_configs(cfg)? {
        let samples = papr_samples(&sys, &constellation, cfg.n_trials, cfg.seed)?;
        let curve = CcdfCurve::from_samples(&cfg.papr.thresholds_db, &samples)?;
        for ((t, &e), p) in curve
            .thresholds_db
            .iter()
            .zip(curve.exceed_counts())
            .zip(&curve.probabilities)
        {
            table.push_row(vec![
                name.into(),
                (*t).into(),
                e.into(),
                curve.n_trials.into(),
                (*p).into(),
            ])?;
        }
        table.add_summary(
            format!("papr_db_at_ccdf.{name}"),
            papr_at_ccdf(&samples, cfg.papr.ccdf_probe)?,
        );
    }
    Ok(table)
}

/// Mean EVM after an ideal receive low-pass of each configured bandwidth fraction.
pub fn run_evm_bandwidth_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let systems = system_configs(cfg)?;
    let mut columns = vec!["cutoff".to_string()];
    columns.extend(systems.iter().map(|(n, _)| format!("evm_{n}")));
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = ResultTable::new(&cols, provenance(cfg));
    let constellation = cfg.modem.constellation_spec();
    let n = cfg.modem.n_subcarriers;
    let cutoffs = &cfg.evm.cutoffs;

    let per_trial: Vec<Vec<Vec<f64>>> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|t| {
            let (_, symbols) = random_symbols(trial_seed(cfg.seed, t as u64), n, &constellation)?;
            let mut out = vec![vec![0.0; systems.len()]; cutoffs.len()];
            for (s, (_, sys)) in systems.iter().enumerate() {
                let tx = ofdm_modulate(&symbols, sys)?;
                for (c, &cut) in cutoffs.iter().enumerate() {
                    let rx = brickwall_receive_filter(&tx, sys, cut)?;
                    let est = ofdm_demodulate(&rx, sys)?;
                    out[c][s] = evm(&EvmInput::new(est, symbols.clone())?);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    for (c, &cut) in cutoffs.iter().enumerate() {
        let mut row: Vec<Cell> = vec![cut.into()];
        for s in 0..systems.len() {
            let sum: f64 = per_trial.iter().map(|t| t[c][s]).sum();
            row.push((sum / cfg.n_trials as f64).into());
        }
        table.push_row(row)?;
    }
    Ok(table)
}

pub fn build_channel(cfg: &ExperimentConfig) -> Result<MultipathSpec> {
    match &cfg.channel.profile {
        ChannelProfile::Default => Ok(MultipathSpec::default_ten_path(cfg.channel.seed)),
        ChannelProfile::Awgn => Ok(MultipathSpec::identity()),
        ChannelProfile::File(p) => {
            MultipathSpec::load(p, cfg.channel.normalize).map_err(|e| Error::Config(e.to_string()))
        }
    }
}

/// BER through static multipath, AWGN at the given Eb/N0 and perfect-CSI
/// zero-forcing. The noise reference is the useful received power: the transmitted
/// body power (prefix excluded) times the channel power gain.
pub fn run_ber_fading(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = ResultTable::new(
        &["ebn0_db", "system", "errors", "bits", "ber", "ci_low", "ci_high"],
        provenance(cfg),
    );
    let systems = system_configs(cfg)?;
    let channel = build_channel(cfg)?;
    let constellation = cfg.modem.constellation_spec();
    let bps = constellation.bits_per_symbol();
    let n = cfg.modem.n_subcarriers;
    let snrs = &cfg.ber.ebn0_db;
    table.notes.push(format!(
        "snr: Eb/N0 with Es = mean received body power (prefix excluded) x {} samples per symbol, \
         Eb = Es/{bps}, N0 = complex noise variance per sample",
        cfg.modem.oversampling
    ));
    table.notes.push(format!(
        "channel: {} taps, max delay {}, zero-forcing with perfect CSI",
        channel.tap_delays().len(),
        channel.max_delay()
    ));

    let per_trial: Vec<Vec<Vec<BerCounter>>> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|t| {
            let t = t as u64;
            let (bits, symbols) = random_symbols(stream_seed(cfg.seed, t, BIT_STREAM), n, &constellation)?;
            let mut out = vec![vec![BerCounter::default(); systems.len()]; snrs.len()];
            for (s, (_, sys)) in systems.iter().enumerate() {
                let tx = ofdm_modulate(&symbols, sys)?;
                let body = &tx.samples[sys.cp_len()..];
                let power = body.iter().map(|v| v.norm_sqr()).sum::<f64>() / body.len() as f64
                    * channel.power();
                let faded = apply_multipath(&tx, &channel)?;
                let reference = SnrReference::EbN0 {
                    samples_per_symbol: sys.oversampling as f64,
                    bits_per_symbol: bps,
                };
                for (k, &snr) in snrs.iter().enumerate() {
                    let stream = 1 + (k * systems.len() + s) as u64;
                    let spec = AwgnSpec::new(snr, reference, stream_seed(cfg.seed, t, stream))?;
                    let rx = awgn_with_power(&faded, &spec, power)?;
                    let eq = equalize(&rx, &channel, sys)?;
                    let est = ofdm_demodulate(&eq, sys)?;
                    out[k][s] = BerCounter::count(&bits, &demap_symbols(&est, &constellation))?;
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    for (k, &snr) in snrs.iter().enumerate() {
        for (s, (name, _)) in systems.iter().enumerate() {
            let c = per_trial
                .iter()
                .fold(BerCounter::default(), |acc, t| acc.merge(t[k][s]));
            let (lo, hi) = c.wilson_interval(CI_Z);
            table.push_row(vec![
                snr.into(),
                (*name).into(),
                c.errors.into(),
                c.bits.into(),
                c.rate().into(),
                lo.into(),
                hi.into(),
            ])?;
        }
    }
    Ok(table)
}

/// Label used for a dyadic configuration: 1, 1.5 and 1.75 for 0, 1 and 2 dyadics.
pub fn dyadic_label(n_dyadics: usize) -> String {
    format!("wavelet-{}", 2.0 - 0.5f64.powi(n_dyadics as i32))
}

fn rc_reference(beta: f64, span: f64, dt: f64) -> Result<SampledWaveform> {
    let half = (span / 2.0 / dt).round() as i64;
    let samples: Vec<f64> = (-half..=half).map(|i| rc_pulse(i as f64 * dt, beta)).collect();
    SampledWaveform::from_real(&samples, dt, -half as f64 * dt)
}

fn ranks(values: &[f64]) -> Vec<usize> {
    values
        .iter()
        .map(|&v| 1 + values.iter().filter(|&&o| o > v * (1.0 + RANK_TIE)).count())
        .collect()
}

/// Baseband spectral efficiency of dyadic wavelet pulse sets and raised-cosine
/// references. Bandwidth is the width holding `se.containment` of the expected PSD
/// of independent symbols on every pulse; the symbol period is one.
pub fn run_spectral_efficiency_table(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let se = &cfg.se;
    let mut rows: Vec<(String, String, String, usize, f64, f64)> = Vec::new();
    let dt = 1.0 / (1u64 << se.cascade_levels) as f64;
    for family in &se.families {
        let pair = family.filter()?;
        let mother = cascade(&pair, se.cascade_levels)?.psi;
        for &d in &se.dyadics {
            let pulses = match se.layout {
                PulseLayout::Translates => dyadic_translates(&mother, d, 1.0)?,
                PulseLayout::PerScale => dyadic_pulse_set(&mother, d)?,
            };
            let psd = pulse_set_psd(&pulses, 1.0, se.fft_len)?;
            let bw = occupied_bandwidth(&psd, se.containment)?;
            let rate = (pulses.len() * se.bits_per_symbol) as f64;
            let label = dyadic_label(d);
            rows.push((
                format!("{family}/{label}"),
                family.to_string(),
                label,
                pulses.len(),
                bw,
                spectral_efficiency(rate, bw)?,
            ));
        }
    }
    for &beta in &se.rc_rolloffs {
        let pulse = rc_reference(beta, se.rc_span, dt)?;
        let psd = pulse_set_psd(&[pulse], 1.0, se.fft_len)?;
        let bw = occupied_bandwidth(&psd, se.containment)?;
        rows.push((
            format!("rc/{beta}"),
            "rc".into(),
            format!("rolloff-{beta}"),
            1,
            bw,
            spectral_efficiency(se.bits_per_symbol as f64, bw)?,
        ));
    }

    let mut table = ResultTable::new(
        &[
            "system",
            "family",
            "configuration",
            "pulses_per_period",
            "bandwidth_99",
            "baseband_se",
            "ordering_rank",
        ],
        provenance(cfg),
    );
    let rank = ranks(&rows.iter().map(|r| r.5).collect::<Vec<_>>());
    for (r, k) in rows.into_iter().zip(rank) {
        table.add_summary(format!("se.{}", r.0), r.5);
        table.push_row(vec![
            r.0.into(),
            r.1.into(),
            r.2.into(),
            r.3.into(),
            r.4.into(),
            r.5.into(),
            k.into(),
        ])?;
    }
    Ok(table)
}

fn density_from_magnitudes(spec: &SpectrumSamples) -> PsdEstimate {
    let freqs = (0..spec.values.len()).map(|i| spec.freq(i)).collect();
    let density = spec.values.iter().map(|v| v * v).collect();
    PsdEstimate::from_density(freqs, density, spec.df, PsdMethod::Analytic)
}

/// `max_f |Σ_k |P(f + k)|² - 1|` over one period with unit symbol period.
fn fold_residual(points: usize, terms: i64, power: impl Fn(f64) -> f64) -> f64 {
    (0..points)
        .map(|i| {
            let f = -0.5 + i as f64 / points as f64;
            let s: f64 = (-terms..=terms).map(|k| power(f + k as f64)).sum();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Orthonormality, sidelobe level and occupied bandwidth of the modified Gaussian
/// for each `σT`, with square-root raised-cosine rows for comparison.
///
/// SRRC orthonormality is evaluated on the closed-form spectrum; its sidelobe and
/// bandwidth come from the pulse truncated to `modgauss.srrc_span` symbols, which is
/// what a transmitter can realise and what gives it sidelobes at all.
pub fn run_modgauss_report(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let g = &cfg.modgauss;
    let mut table = ResultTable::new(
        &["pulse", "parameter", "orthonormality_residual", "sidelobe_db", "occupied_bw99"],
        provenance(cfg),
    );
    let grid = FrequencyGrid::symmetric(g.f_max, g.grid_points);
    let fold_points = 10_000;
    for &sigma in &g.sigma_t {
        let p = ModifiedGaussianParams::new(sigma, 1.0, g.l_max)?;
        let residual = fold_residual(fold_points, g.l_max as i64 + 2, |f| {
            mod_gauss_value(&p, f).powi(2)
        });
        let spec = mod_gauss_spectrum(&p, &grid);
        let bw = occupied_bandwidth(&density_from_magnitudes(&spec), g.containment)?;
        table.push_row(vec![
            "modgauss".into(),
            sigma.into(),
            residual.into(),
            sidelobe_level(&spec)?.into(),
            bw.into(),
        ])?;
    }
    for &beta in &g.srrc_rolloffs {
        let residual = fold_residual(fold_points, 2, |f| raised_cosine(f, beta));
        let spec = truncated_srrc_spectrum(beta, g.srrc_span, g.f_max)?;
        let bw = occupied_bandwidth(&density_from_magnitudes(&spec), g.containment)?;
        table.push_row(vec![
            "srrc".into(),
            beta.into(),
            residual.into(),
            sidelobe_level(&spec)?.into(),
            bw.into(),
        ])?;
    }
    Ok(table)
}

/// Magnitude spectrum of the SRRC pulse truncated to `span` symbol periods,
/// restricted to `|f| <= f_max`.
pub fn truncated_srrc_spectrum(beta: f64, span: f64, f_max: f64) -> Result<SpectrumSamples> {
    const PER_SYMBOL: usize = 64;
    const N_FFT: usize = 1 << 16;
    if !(span > 0.0) {
        return Err(Error::InvalidParameter(format!("srrc span {span}")));
    }
    let dt = 1.0 / PER_SYMBOL as f64;
    let half = (span / 2.0 * PER_SYMBOL as f64).round() as i64;
    if (2 * half + 1) as usize > N_FFT {
        return Err(Error::InvalidParameter(format!("srrc span {span} too long")));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); N_FFT];
    for i in -half..=half {
        buf[bin_of(i, N_FFT)] = Complex64::new(srrc_pulse(i as f64 * dt, beta), 0.0);
    }
    let scale = dt * (N_FFT as f64).sqrt();
    let spec = dft(&buf);
    let df = 1.0 / (N_FFT as f64 * dt);
    let kmax = ((f_max / df).floor() as i64).min(N_FFT as i64 / 2 - 1);
    let values = (-kmax..=kmax)
        .map(|k| spec[bin_of(k, N_FFT)].norm() * scale)
        .collect();
    Ok(SpectrumSamples {
        values,
        df,
        f0: -kmax as f64 * df,
    })
}
