//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! when any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use wavemod::experiment::{
    run_ber_fading, run_evm_bandwidth_sweep, run_experiment, run_papr_ccdf_compare,
    run_spectral_efficiency_table, run_with_threads, ConfigMap, ExperimentConfig, ExperimentKind,
    ResultTable,
};
use wavemod::filterbank::{dwt, idwt, iwpt, verify_pr, wpt, WaveletFamily};
use wavemod::metrics::papr_db;
use wavemod::modem::{map_bits, ofdm_modulate, ConstellationSpec, OfdmConfig};
use wavemod::rng::{rng_from_seed, trial_seed};
use wavemod::waveletdesign::{mod_gauss_value, ModifiedGaussianParams};

struct Outcome {
    pass: bool,
    detail: String,
    limit: Option<Duration>,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail, limit: None }
    }

    fn within(mut self, secs: u64) -> Self {
        self.limit = Some(Duration::from_secs(secs));
        self
    }
}

fn shipped(kind: ExperimentKind, file: &str, overrides: &[(&str, &str)]) -> ExperimentConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(file);
    let mut map = ConfigMap::load(&path).unwrap();
    for (k, v) in overrides {
        map.set(k, v);
    }
    ExperimentConfig::from_map(kind, &map).unwrap()
}

fn perfect_reconstruction() -> Outcome {
    let mut worst: f64 = 0.0;
    let families = WaveletFamily::supported();
    for fam in &families {
        let pair = fam.filter().unwrap();
        for i in 0..100u64 {
            let mut rng = rng_from_seed(trial_seed(0xACCE, i));
            let x: Vec<f64> = (0..1024).map(|_| rng.random_range(-1.0..1.0)).collect();
            let levels = 1 + (i % 10) as u32;
            let a = idwt(&dwt(&x, &pair, levels).unwrap(), &pair).unwrap();
            let b = iwpt(&wpt(&x, &pair, levels).unwrap(), &pair).unwrap();
            for (u, v) in x.iter().zip(a.iter().zip(&b)) {
                worst = worst.max((u - v.0).abs()).max((u - v.1).abs());
            }
        }
    }
    Outcome::new(
        worst < 1e-9,
        format!("{} families x 100 frames, max error {worst:.2e} (limit 1e-9)", families.len()),
    )
    .within(5)
}

fn qmf_conditions() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let families = WaveletFamily::supported();
    for fam in &families {
        let r = verify_pr(&fam.filter().unwrap(), 4096);
        let m = r.alias.max(r.amplitude);
        if m >= worst.0 {
            worst = (m, fam.to_string());
        }
    }
    Outcome::new(
        worst.0 < 1e-8,
        format!("{} pairs, worst residual {:.2e} ({}, limit 1e-8)", families.len(), worst.0, worst.1),
    )
}

fn papr_bound() -> Outcome {
    let n = 128;
    let cfg = OfdmConfig::fourier(n);
    let qpsk = ConstellationSpec::QPSK;
    let same = vec![Complex64::new(1.0, 1.0) / 2f64.sqrt(); n];
    let coherent = papr_db(&ofdm_modulate(&same, &cfg).unwrap()).unwrap();
    let bound = 10.0 * (n as f64).log10();
    let mut peak: f64 = 0.0;
    for i in 0..10_000u64 {
        let mut rng = rng_from_seed(trial_seed(3, i));
        let bits: Vec<u8> = (0..2 * n).map(|_| rng.random_range(0..2u8)).collect();
        let p = papr_db(&ofdm_modulate(&map_bits(&bits, &qpsk).unwrap(), &cfg).unwrap()).unwrap();
        peak = peak.max(p);
    }
    Outcome::new(
        (coherent - 21.07).abs() <= 0.01 && peak <= bound + 1e-9,
        format!("coherent {coherent:.4} dB (target 21.07 +/- 0.01), random max {peak:.3} dB over 10^4 symbols"),
    )
    .within(30)
}

fn modgauss_orthonormality() -> Outcome {
    let mut worst: f64 = 0.0;
    for sigma in [0.25, 0.5, 1.0] {
        let p = ModifiedGaussianParams::new(sigma, 1.0, 8).unwrap();
        for i in 0..10_000 {
            let f = -0.5 + i as f64 / 10_000.0;
            let fold: f64 = (-12..=12).map(|k| mod_gauss_value(&p, f + k as f64).powi(2)).sum();
            worst = worst.max((fold - 1.0).abs());
        }
    }
    Outcome::new(worst < 1e-9, format!("max |fold - 1| = {worst:.2e} (limit 1e-9)")).within(5)
}

fn awgn_calibration() -> Outcome {
    let cfg = shipped(
        ExperimentKind::BerFading,
        "ber.conf",
        &[
            ("trials", "100"),
            ("channel.profile", "awgn"),
            ("modem.systems", "sc-ofdm"),
            ("ber.ebn0_db", "4"),
        ],
    );
    let t = run_ber_fading(&cfg).unwrap();
    let row = &t.rows[0];
    let get = |c: &str| row[t.column_index(c).unwrap()].as_f64().unwrap();
    let (bits, ber) = (get("bits"), get("ber"));
    let theory = 1.0 - Normal::standard().cdf((2.0 * 10f64.powf(0.4)).sqrt());
    let sigma = (theory * (1.0 - theory) / bits).sqrt();
    let z = (ber - theory) / sigma;
    Outcome::new(
        bits >= 1e5 && z.abs() < 3.0,
        format!("BER {ber:.4e} over {bits} bits vs Q-function {theory:.4e} ({z:+.2} sigma)"),
    )
    .within(60)
}

fn papr_ordering() -> Outcome {
    let cfg = shipped(ExperimentKind::PaprCcdfCompare, "papr.conf", &[]);
    let t = run_papr_ccdf_compare(&cfg).unwrap();
    let at = |s: &str| t.summary_value(&format!("papr_db_at_ccdf.{s}")).unwrap();
    let (wpm, ofdm, sc_wpm, sc_ofdm) = (at("wpm"), at("ofdm"), at("sc-wpm"), at("sc-ofdm"));
    let wt_gain = wpm - sc_wpm;
    let ft_gain = ofdm - sc_ofdm;
    Outcome::new(
        wt_gain >= 0.1 && ft_gain >= 0.1,
        format!(
            "PAPR at 1e-3: wpm {wpm:.3}, sc-wpm {sc_wpm:.3} (gain {wt_gain:+.3}), ofdm {ofdm:.3}, \
             sc-ofdm {sc_ofdm:.3} (gain {ft_gain:+.3}) dB; need gains >= 0.1; \
             report: sc-wpm - sc-ofdm = {:+.3} dB",
            sc_wpm - sc_ofdm
        ),
    )
}

fn evm_ordering() -> Outcome {
    let cfg = shipped(ExperimentKind::EvmBandwidthSweep, "evm.conf", &[]);
    let t = run_evm_bandwidth_sweep(&cfg).unwrap();
    let cut = t.column_f64("cutoff").unwrap();
    let ft = t.column_f64("evm_ofdm").unwrap();
    let wt = t.column_f64("evm_wpm").unwrap();
    let mut pass = cfg.n_trials >= 100;
    let mut parts = Vec::new();
    for c in [0.6, 0.7, 0.8, 0.9] {
        let i = cut.iter().position(|v| (v - c).abs() < 1e-12).unwrap();
        pass &= wt[i] <= ft[i];
        parts.push(format!("{c}: wt {:.5} ft {:.5}", wt[i], ft[i]));
    }
    Outcome::new(
        pass,
        format!("{} frames, {} ({})", cfg.n_trials, parts.join(", "), "need wt <= ft"),
    )
}

fn se_for(t: &ResultTable, system: &str) -> f64 {
    t.summary_value(&format!("se.{system}")).unwrap()
}

fn se_trends() -> Outcome {
    let cfg = shipped(
        ExperimentKind::SpectralEfficiencyTable,
        "se.conf",
        &[("se.families", "db10, sym10, coif3, coif4, coif5")],
    );
    let t = run_spectral_efficiency_table(&cfg).unwrap();
    let labels = ["wavelet-1", "wavelet-1.5", "wavelet-1.75"];
    let mut pass = true;
    let mut parts = Vec::new();
    for fam in ["db10", "sym10", "coif3", "coif4", "coif5"] {
        let se: Vec<f64> = labels.iter().map(|l| se_for(&t, &format!("{fam}/{l}"))).collect();
        pass &= se[2] > se[1] && se[1] > se[0];
        parts.push(format!("{fam} {:.3}/{:.3}/{:.3}", se[0], se[1], se[2]));
    }
    let mut info = Vec::new();
    for l in labels {
        let g = |f: &str| se_for(&t, &format!("{f}/{l}"));
        pass &= g("db10") >= g("sym10") && g("sym10") >= g("coif3");
        for c in ["coif4", "coif5"] {
            if g("sym10") < g(c) {
                info.push(format!("{c} > sym10 at {l}"));
            }
        }
    }
    let rc = se_for(&t, "rc/0.22");
    Outcome::new(
        pass,
        format!(
            "{}; rc(0.22) {rc:.3}; ordering checked with coif3; {}",
            parts.join(", "),
            if info.is_empty() { "coif4/coif5 also ordered".to_string() } else { info.join(", ") }
        ),
    )
}

fn determinism() -> Outcome {
    let cases = [
        shipped(ExperimentKind::PaprCcdfCompare, "papr.conf", &[("trials", "500")]),
        shipped(ExperimentKind::EvmBandwidthSweep, "evm.conf", &[("trials", "10")]),
        shipped(ExperimentKind::BerFading, "ber.conf", &[("trials", "10")]),
        shipped(ExperimentKind::SpectralEfficiencyTable, "se.conf", &[]),
        shipped(ExperimentKind::ModGaussReport, "modgauss.conf", &[]),
    ];
    let mut bad = Vec::new();
    for cfg in &cases {
        let a = run_experiment(cfg).unwrap().to_csv_string().unwrap();
        let b = run_experiment(cfg).unwrap().to_csv_string().unwrap();
        let c = run_with_threads(cfg, Some(1)).unwrap().to_csv_string().unwrap();
        if a != b || a != c {
            bad.push(cfg.experiment.to_string());
        }
    }
    Outcome::new(
        bad.is_empty(),
        if bad.is_empty() {
            "all 5 experiments byte-identical across reruns and thread counts".into()
        } else {
            format!("differing output: {}", bad.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "perfect reconstruction", perfect_reconstruction),
        (2, "QMF conditions", qmf_conditions),
        (3, "PAPR worst case", papr_bound),
        (4, "modified Gaussian orthonormality", modgauss_orthonormality),
        (5, "AWGN calibration", awgn_calibration),
        (6, "PAPR ordering", papr_ordering),
        (7, "EVM ordering", evm_ordering),
        (8, "spectral efficiency trends", se_trends),
        (9, "determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = out.limit.is_none_or(|l| took <= l);
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        let limit = out.limit.map(|l| format!(", limit {}s", l.as_secs())).unwrap_or_default();
        println!(
            "criterion {n}: {} {name}: {} [{:.2}s{limit}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    }
}
