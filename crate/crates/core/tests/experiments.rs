use statrs::distribution::{ContinuousCDF, Normal};
use wavemod::experiment::{
    run_ber_fading, run_evm_bandwidth_sweep, run_modgauss_report, run_papr_ccdf_compare,
    run_spectral_efficiency_table, run_with_threads, ConfigMap, ExperimentConfig, ExperimentKind,
    ResultTable,
};

fn config(kind: ExperimentKind, text: &str) -> ExperimentConfig {
    ExperimentConfig::from_map(kind, &ConfigMap::parse(text).unwrap()).unwrap()
}

fn rows_for<'a>(t: &'a ResultTable, system: &'a str) -> Vec<&'a Vec<wavemod::experiment::Cell>> {
    t.filter_rows("system", system).collect()
}

fn f(t: &ResultTable, row: &[wavemod::experiment::Cell], col: &str) -> f64 {
    row[t.column_index(col).unwrap()].as_f64().unwrap()
}

#[test]
fn papr_ccdf_is_certain_below_zero_and_empty_above_the_bound() {
    let cfg = config(
        ExperimentKind::PaprCcdfCompare,
        "trials = 200\nmodem.n_subcarriers = 128\npapr.thresholds_db = -1, 0.5, 6, 21.08, 30",
    );
    let t = run_papr_ccdf_compare(&cfg).unwrap();
    assert_eq!(t.rows.len(), 4 * 5);
    for sys in ["wpm", "ofdm", "sc-wpm", "sc-ofdm"] {
        let probs: Vec<f64> = rows_for(&t, sys).iter().map(|r| f(&t, r, "prob")).collect();
        assert_eq!(probs[0], 1.0, "{sys}");
        assert_eq!(probs[4], 0.0, "{sys}");
        assert!(probs.windows(2).all(|w| w[1] <= w[0]), "{sys}: {probs:?}");
        let at = t.summary_value(&format!("papr_db_at_ccdf.{sys}")).unwrap();
        assert!(at >= 0.0 && at <= 10.0 * 128f64.log10(), "{sys}: {at}");
    }
}

#[test]
fn evm_vanishes_at_full_bandwidth_and_grows_as_the_filter_narrows() {
    let cfg = config(ExperimentKind::EvmBandwidthSweep, "trials = 8\nmodem.n_subcarriers = 128");
    let t = run_evm_bandwidth_sweep(&cfg).unwrap();
    assert_eq!(t.columns, ["cutoff", "evm_ofdm", "evm_wpm"]);
    for col in ["evm_ofdm", "evm_wpm"] {
        let v = t.column_f64(col).unwrap();
        assert!(v.last().unwrap().abs() < 1e-6, "{col}: {v:?}");
        assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{col}: {v:?}");
    }
    // a Fourier carrier is either kept or dropped, so the error is exactly the dropped share
    let cut = t.column_f64("cutoff").unwrap();
    let n = 128i64;
    for (c, e) in cut.iter().zip(t.column_f64("evm_ofdm").unwrap()) {
        let edge = c * n as f64 / 2.0;
        let kept = (-n / 2..n / 2).filter(|&v| -edge <= v as f64 && (v as f64) < edge).count();
        let dropped = 1.0 - kept as f64 / n as f64;
        assert!((e - dropped).abs() < 1e-9, "{c}: {e} vs {dropped}");
    }
}

#[test]
fn ber_is_zero_without_noise_or_fading() {
    let cfg = config(
        ExperimentKind::BerFading,
        "trials = 4\nmodem.n_subcarriers = 64\nchannel.profile = awgn\nber.ebn0_db = inf",
    );
    let t = run_ber_fading(&cfg).unwrap();
    assert_eq!(t.rows.len(), 4);
    for r in &t.rows {
        assert_eq!(f(&t, r, "errors"), 0.0);
        assert_eq!(f(&t, r, "bits"), 4.0 * 128.0);
        assert_eq!(f(&t, r, "ci_low"), 0.0);
    }
}

#[test]
fn single_carrier_ofdm_in_awgn_matches_qpsk_theory() {
    let cfg = config(
        ExperimentKind::BerFading,
        "trials = 100\nmodem.n_subcarriers = 512\nchannel.profile = awgn\nmodem.systems = sc-ofdm\nber.ebn0_db = 4",
    );
    let t = run_ber_fading(&cfg).unwrap();
    let r = &t.rows[0];
    let bits = f(&t, r, "bits");
    let ber = f(&t, r, "ber");
    let theory = 1.0 - Normal::standard().cdf((2.0 * 10f64.powf(0.4)).sqrt());
    let sigma = (theory * (1.0 - theory) / bits).sqrt();
    assert!(bits >= 1e5);
    assert!((ber - theory).abs() < 3.0 * sigma, "ber {ber} vs {theory} (sigma {sigma})");
    assert!(f(&t, r, "ci_low") <= theory && theory <= f(&t, r, "ci_high"));
}

#[test]
fn fading_ber_table_is_complete_and_falls_with_snr() {
    let cfg = config(
        ExperimentKind::BerFading,
        "trials = 20\nmodem.n_subcarriers = 256\nber.ebn0_db = 0, 5, 10, 15",
    );
    let t = run_ber_fading(&cfg).unwrap();
    assert_eq!(t.rows.len(), 4 * 4);
    for sys in ["wpm", "ofdm", "sc-wpm", "sc-ofdm"] {
        let ber: Vec<f64> = rows_for(&t, sys).iter().map(|r| f(&t, r, "ber")).collect();
        assert_eq!(ber.len(), 4);
        assert!(ber.iter().all(|b| b.is_finite() && *b >= 0.0 && *b <= 1.0));
        assert!(ber.windows(2).all(|w| w[1] <= w[0]), "{sys}: {ber:?}");
        assert!(ber[0] > 0.0, "{sys}");
    }
    assert!(t.notes.iter().any(|n| n.starts_with("snr:")));
}

#[test]
fn spectral_efficiency_rises_with_each_dyadic() {
    let cfg = config(
        ExperimentKind::SpectralEfficiencyTable,
        "se.families = db4, sym4\nse.cascade_levels = 6\nse.fft_len = 16384",
    );
    let t = run_spectral_efficiency_table(&cfg).unwrap();
    assert_eq!(t.rows.len(), 2 * 3 + 1);
    for fam in ["db4", "sym4"] {
        let se: Vec<f64> = t
            .filter_rows("family", fam)
            .map(|r| f(&t, r, "baseband_se"))
            .collect();
        assert!(se[0] < se[1] && se[1] < se[2], "{fam}: {se:?}");
    }
    let pulses: Vec<f64> = t.filter_rows("family", "db4").map(|r| f(&t, r, "pulses_per_period")).collect();
    assert_eq!(pulses, [1.0, 3.0, 7.0]);
    let rc = t.filter_rows("family", "rc").next().unwrap();
    let se = f(&t, rc, "baseband_se");
    assert!(se.is_finite() && se > 0.0);
    let ranks = t.column_f64("ordering_rank").unwrap();
    assert!(ranks.iter().all(|&r| r >= 1.0 && r <= 7.0));
    assert!(ranks.contains(&1.0));
}

#[test]
fn modgauss_is_orthonormal_without_sidelobes() {
    let cfg = config(ExperimentKind::ModGaussReport, "modgauss.grid_points = 4001");
    let t = run_modgauss_report(&cfg).unwrap();
    let gauss: Vec<_> = t.filter_rows("pulse", "modgauss").collect();
    assert_eq!(gauss.len(), 3);
    for r in gauss {
        assert!(f(&t, r, "orthonormality_residual") < 1e-9);
        assert_eq!(f(&t, r, "sidelobe_db"), f64::NEG_INFINITY);
        assert!(f(&t, r, "occupied_bw99") > 0.0);
    }
    for r in t.filter_rows("pulse", "srrc") {
        let s = f(&t, r, "sidelobe_db");
        assert!(s.is_finite() && s < 0.0, "{s}");
        assert!(f(&t, r, "orthonormality_residual") < 1e-9);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    for (kind, text) in [
        (ExperimentKind::EvmBandwidthSweep, "trials = 6\nmodem.n_subcarriers = 64"),
        (ExperimentKind::BerFading, "trials = 6\nmodem.n_subcarriers = 64\nber.ebn0_db = 4, 8"),
        (ExperimentKind::PaprCcdfCompare, "trials = 300\nmodem.n_subcarriers = 64"),
    ] {
        let cfg = config(kind, text);
        let one = run_with_threads(&cfg, Some(1)).unwrap();
        let four = run_with_threads(&cfg, Some(4)).unwrap();
        assert_eq!(one.to_csv_string().unwrap(), four.to_csv_string().unwrap(), "{kind}");
    }
}

#[test]
fn seed_changes_the_monte_carlo_output() {
    let a = config(ExperimentKind::PaprCcdfCompare, "trials = 300\nmodem.n_subcarriers = 64\nseed = 1");
    let b = config(ExperimentKind::PaprCcdfCompare, "trials = 300\nmodem.n_subcarriers = 64\nseed = 2");
    assert_ne!(a.config_hash(), b.config_hash());
    assert_ne!(
        run_papr_ccdf_compare(&a).unwrap().rows,
        run_papr_ccdf_compare(&b).unwrap().rows
    );
}
