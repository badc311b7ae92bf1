use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modem::{map_bits, ofdm_modulate, BasebandFrame, ConstellationSpec, OfdmConfig};
use crate::rng::{rng_from_seed, trial_seed};

/// `10·log10(max|s|² / mean|s|²)` over every sample of the frame.
pub fn papr_db(frame: &BasebandFrame) -> Result<f64> {
    let mut peak = 0.0f64;
    let mut total = 0.0f64;
    for v in &frame.samples {
        let p = v.norm_sqr();
        peak = peak.max(p);
        total += p;
    }
    if frame.is_empty() || !(total > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let mean = total / frame.len() as f64;
    Ok(10.0 * (peak / mean).log10())
}

/// Exceedance counts at fixed thresholds. Curves over the same thresholds merge by
/// adding counts, so partial results from any split of the trials combine exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct CcdfCurve {
    pub thresholds_db: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub n_trials: u64,
    exceed: Vec<u64>,
}

impl CcdfCurve {
    pub fn empty(thresholds_db: &[f64]) -> Result<Self> {
        if thresholds_db.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("thresholds must be strictly ascending".into()));
        }
        Ok(CcdfCurve {
            thresholds_db: thresholds_db.to_vec(),
            probabilities: vec![0.0; thresholds_db.len()],
            n_trials: 0,
            exceed: vec![0; thresholds_db.len()],
        })
    }

    pub fn from_samples(thresholds_db: &[f64], paprs_db: &[f64]) -> Result<Self> {
        let mut c = Self::empty(thresholds_db)?;
        for &p in paprs_db {
            c.add(p);
        }
        Ok(c)
    }

    pub fn add(&mut self, papr_db: f64) {
        self.n_trials += 1;
        for (t, e) in self.thresholds_db.iter().zip(self.exceed.iter_mut()) {
            if papr_db > *t {
                *e += 1;
            }
        }
        self.refresh();
    }

    pub fn merge(&mut self, other: &CcdfCurve) -> Result<()> {
        if self.thresholds_db != other.thresholds_db {
            return Err(Error::InvalidParameter("cannot merge curves with different thresholds".into()));
        }
        self.n_trials += other.n_trials;
        for (a, b) in self.exceed.iter_mut().zip(&other.exceed) {
            *a += b;
        }
        self.refresh();
        Ok(())
    }

    pub fn exceed_counts(&self) -> &[u64] {
        &self.exceed
    }

    fn refresh(&mut self) {
        let n = self.n_trials.max(1) as f64;
        self.probabilities = self.exceed.iter().map(|&e| e as f64 / n).collect();
    }

    /// Two-column CSV: `threshold_db,prob`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("threshold_db,prob\n");
        for (t, p) in self.thresholds_db.iter().zip(&self.probabilities) {
            let _ = writeln!(s, "{t},{p}");
        }
        s
    }
}

/// PAPR of `n_symbols` independent random symbols of `cfg`. Symbol `i` is drawn from
/// `trial_seed(seed, i)`, so the result does not depend on thread count.
pub fn papr_samples(
    cfg: &OfdmConfig,
    constellation: &ConstellationSpec,
    n_symbols: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let nbits = cfg.n_subcarriers * constellation.bits_per_symbol();
    (0..n_symbols)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(trial_seed(seed, i as u64));
            let bits: Vec<u8> = (0..nbits).map(|_| rng.random_range(0..2u8)).collect();
            let symbols = map_bits(&bits, constellation)?;
            papr_db(&ofdm_modulate(&symbols, cfg)?)
        })
        .collect()
}

pub fn papr_ccdf(
    cfg: &OfdmConfig,
    constellation: &ConstellationSpec,
    n_symbols: usize,
    thresholds_db: &[f64],
    seed: u64,
) -> Result<CcdfCurve> {
    if n_symbols == 0 {
        return Err(Error::InvalidParameter("n_symbols must be >= 1".into()));
    }
    let samples = papr_samples(cfg, constellation, n_symbols, seed)?;
    CcdfCurve::from_samples(thresholds_db, &samples)
}

/// Smallest observed PAPR `x` with `P(PAPR > x) ≤ prob` over the samples.
pub fn papr_at_ccdf(paprs_db: &[f64], prob: f64) -> Result<f64> {
    if paprs_db.is_empty() || !(0.0..1.0).contains(&prob) {
        return Err(Error::InvalidParameter(format!(
            "{} samples at probability {prob}",
            paprs_db.len()
        )));
    }
    let mut v = paprs_db.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    let allowed = (prob * n as f64).floor() as usize;
    Ok(v[n - 1 - allowed.min(n - 1)])
}
